#include "tomo/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace tomo {

namespace {

constexpr char kMagic[4] = {'C', 'M', 'X', '1'};
constexpr std::uint8_t kVersion = 1;

void put_u32_le(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_f64_le(std::string& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, sizeof(x));
    return x;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double_field(const std::string& field, const std::string& path, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
        if (pos != field.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(line_no) + ": malformed numeric field '" +
                      field + "'");
    }
}

}  // namespace

void write_matrix(const std::string& path, const ComplexMatrix& m) {
    std::string buf;
    buf.reserve(16 + static_cast<std::size_t>(m.size()) * 16);
    buf.append(kMagic, 4);
    buf.push_back(static_cast<char>(kVersion));
    buf.append(3, '\0');
    put_u32_le(buf, static_cast<std::uint32_t>(m.rows()));
    put_u32_le(buf, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            put_f64_le(buf, m(i, j).real());
            put_f64_le(buf, m(i, j).imag());
        }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("write failed for '" + path + "'");
}

ComplexMatrix read_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 16) throw IoError("'" + path + "': truncated container header");
    if (std::memcmp(buf.data(), kMagic, 4) != 0)
        throw IoError("'" + path + "': bad magic, not a CMX1 container");
    const auto* bytes = reinterpret_cast<const unsigned char*>(buf.data());
    if (bytes[4] != kVersion)
        throw IoError("'" + path + "': unsupported container version " +
                      std::to_string(static_cast<int>(bytes[4])));
    const std::uint32_t rows = get_u32_le(bytes + 8);
    const std::uint32_t cols = get_u32_le(bytes + 12);
    const std::size_t expected = 16 + static_cast<std::size_t>(rows) * cols * 16;
    if (buf.size() != expected)
        throw IoError("'" + path + "': payload size " + std::to_string(buf.size() - 16) +
                      " does not match " + std::to_string(rows) + "x" + std::to_string(cols));

    ComplexMatrix m(rows, cols);
    const unsigned char* p = bytes + 16;
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j) {
            const double re = get_f64_le(p);
            const double im = get_f64_le(p + 8);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re, im);
            p += 16;
        }
    return m;
}

void write_vector(const std::string& path, const ComplexVector& v) {
    write_matrix(path, ComplexMatrix(v));
}

ComplexVector read_vector(const std::string& path) {
    ComplexMatrix m = read_matrix(path);
    if (m.cols() != 1)
        throw IoError("'" + path + "': expected a column vector, got " +
                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    return ComplexVector(m.col(0));
}

GeometryTable read_geometry_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    GeometryTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "baseline_m,time_years")
                throw IoError(path + ":1: expected header 'baseline_m,time_years', got '" +
                              line + "'");
            continue;
        }
        const auto fields = split_csv_row(line);
        if (fields.size() != 2)
            throw IoError(path + ":" + std::to_string(line_no) + ": expected 2 fields, got " +
                          std::to_string(fields.size()));
        table.baselines.push_back(parse_double_field(fields[0], path, line_no));
        table.times.push_back(parse_double_field(fields[1], path, line_no));
    }
    if (table.baselines.empty())
        throw IoError("'" + path + "': no acquisition rows");
    return table;
}

void write_geometry_csv(const std::string& path, const AcquisitionGeometry& geo) {
    std::string out = "baseline_m,time_years\n";
    for (std::size_t n = 0; n < geo.baselines.size(); ++n)
        out += format_double(geo.baselines[n]) + "," + format_double(geo.times[n]) + "\n";
    write_text_file(path, out);
}

ComplexVector read_complex_vector_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::vector<Complex> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 2)
            throw IoError(path + ":" + std::to_string(line_no) +
                          ": expected 're,im', got " + std::to_string(fields.size()) +
                          " fields");
        values.emplace_back(parse_double_field(fields[0], path, line_no),
                            parse_double_field(fields[1], path, line_no));
    }
    ComplexVector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
    return v;
}

void write_complex_vector_csv(const std::string& path, const ComplexVector& v) {
    std::string out;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out += format_double(v[i].real()) + "," + format_double(v[i].imag()) + "\n";
    write_text_file(path, out);
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace tomo
