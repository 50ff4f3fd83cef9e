#pragma once

#include "tomo/geometry.hpp"
#include "tomo/types.hpp"

#include <string>
#include <vector>

namespace tomo {

/// Binary complex-matrix container, bit-exact on round trip.
/// Layout: magic "CMX1" | version u8 = 1 | 3 reserved zero bytes |
/// rows u32 LE | cols u32 LE | payload rows*cols complex values as
/// interleaved f64 (re, im), row-major, little-endian.
void write_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix read_matrix(const std::string& path);

/// Column-vector conveniences on the same container.
void write_vector(const std::string& path, const ComplexVector& v);
ComplexVector read_vector(const std::string& path);

/// Geometry CSV: header `baseline_m,time_years`, one row per acquisition.
/// Wavelength and slant range are not part of the file; the caller supplies
/// them. Malformed rows are reported with their line number.
struct GeometryTable {
    std::vector<double> baselines;
    std::vector<double> times;
};
GeometryTable read_geometry_csv(const std::string& path);
void write_geometry_csv(const std::string& path, const AcquisitionGeometry& geo);

/// Complex vector as CSV, one `re,im` row per entry.
ComplexVector read_complex_vector_csv(const std::string& path);
void write_complex_vector_csv(const std::string& path, const ComplexVector& v);

/// Shortest-round-trip numeric rendering (17 significant digits max).
std::string format_double(double x);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace tomo
