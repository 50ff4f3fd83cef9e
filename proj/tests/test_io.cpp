#include "tomo/io.hpp"

#include "tomo/config.hpp"
#include "tomo/digest.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

using namespace tomo;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("tomo_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

}  // namespace

TEST_CASE("matrix container round trip") {
    TempDir dir;
    Rng rng(3);
    const ComplexMatrix m = oracle::random_matrix(25, 200, rng);
    const std::string path = dir.file("m.cmx");
    write_matrix(path, m);
    const ComplexMatrix back = read_matrix(path);
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) CHECK(back(i, j) == m(i, j));

    // byte-identical when rewritten
    write_matrix(dir.file("m2.cmx"), back);
    CHECK(read_text_file(path) == read_text_file(dir.file("m2.cmx")));
}

TEST_CASE("matrix container error paths") {
    TempDir dir;
    const std::string path = dir.file("bad.cmx");

    SUBCASE("wrong magic") {
        write_text_file(path, "NOPE" + std::string(12, '\0'));
        CHECK_THROWS_AS(read_matrix(path), IoError);
    }
    SUBCASE("truncated payload") {
        ComplexMatrix m = ComplexMatrix::Ones(2, 2);
        write_matrix(path, m);
        std::string bytes = read_text_file(path);
        bytes.resize(bytes.size() - 8);
        write_text_file(path, bytes);
        CHECK_THROWS_AS(read_matrix(path), IoError);
    }
    SUBCASE("bad version") {
        ComplexMatrix m = ComplexMatrix::Ones(1, 1);
        write_matrix(path, m);
        std::string bytes = read_text_file(path);
        bytes[4] = 2;
        write_text_file(path, bytes);
        CHECK_THROWS_AS(read_matrix(path), IoError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_matrix(dir.file("absent.cmx")), IoError);
    }
    SUBCASE("vector reader rejects matrices") {
        write_matrix(path, ComplexMatrix::Ones(2, 3));
        CHECK_THROWS_AS(read_vector(path), IoError);
    }
}

TEST_CASE("geometry csv") {
    TempDir dir;
    const std::string path = dir.file("geo.csv");

    SUBCASE("25 rows parse to N = 25") {
        std::string text = "baseline_m,time_years\n";
        for (int n = 0; n < 25; ++n)
            text += format_double(-135.0 + 270.0 * n / 24.0) + "," +
                    format_double(0.01 * n) + "\n";
        write_text_file(path, text);
        const GeometryTable table = read_geometry_csv(path);
        CHECK(table.baselines.size() == 25);
        CHECK(table.times.size() == 25);
        CHECK(table.baselines[0] == -135.0);
        CHECK(table.baselines[24] == 135.0);
    }

    SUBCASE("malformed row is reported with its line number") {
        write_text_file(path, "baseline_m,time_years\n1.0,0.0\nbogus,0.1\n");
        try {
            read_geometry_csv(path);
            FAIL("expected IoError");
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find(":3") != std::string::npos);
        }
    }

    SUBCASE("wrong header is rejected") {
        write_text_file(path, "baseline,time\n1.0,0.0\n");
        CHECK_THROWS_AS(read_geometry_csv(path), IoError);
    }

    SUBCASE("round trip through write_geometry_csv") {
        const auto geo = make_regular_geometry(7, -100.0, 100.0, 0.031, 6e5);
        write_geometry_csv(path, geo);
        const GeometryTable table = read_geometry_csv(path);
        REQUIRE(table.baselines.size() == 7);
        for (std::size_t n = 0; n < 7; ++n) {
            CHECK(table.baselines[n] == geo.baselines[n]);
            CHECK(table.times[n] == geo.times[n]);
        }
    }
}

TEST_CASE("complex vector csv") {
    TempDir dir;
    Rng rng(9);
    const ComplexVector v = oracle::random_vector(13, rng);
    const std::string path = dir.file("v.csv");
    write_complex_vector_csv(path, v);
    const ComplexVector back = read_complex_vector_csv(path);
    REQUIRE(back.size() == v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(back[i] == v[i]);
}

TEST_CASE("run config parsing") {
    SUBCASE("defaults validate") {
        RunConfig cfg;
        CHECK_NOTHROW(validate_run_config(cfg));
    }

    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(parse_run_config("no_such_key = 1\n", "test"), ConfigError);
    }

    SUBCASE("bad values are rejected") {
        CHECK_THROWS_AS(parse_run_config("c1 = banana\n", "test"), ConfigError);
        CHECK_THROWS_AS(parse_run_config("trials\n", "test"), ConfigError);
    }

    SUBCASE("invariant violations are rejected before computation") {
        RunConfig cfg = parse_run_config("c3 = 1.5\n", "test");
        CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
        cfg = parse_run_config("elevation_min_m = 10\nelevation_max_m = -10\n", "test");
        CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
        cfg = parse_run_config("num_scatterers = 5\n", "test");
        CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
        cfg = parse_run_config("engine = quantum\n", "test");
        CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
        cfg = parse_run_config("motion_basis = linear\n", "test");
        // missing motion1_points
        CHECK_THROWS_AS(validate_run_config(cfg), ConfigError);
    }

    SUBCASE("comments, whitespace and lists parse") {
        const RunConfig cfg = parse_run_config(
            "# a comment\n"
            "  c1 = 0.25   # trailing comment\n"
            "distances = 0.5, 1.0, 1.5\n"
            "motion_basis = linear, sin:1:0\n"
            "motion1_min = -2\nmotion1_max = 2\nmotion1_points = 5\n"
            "motion2_min = -1\nmotion2_max = 1\nmotion2_points = 3\n"
            "snr_db = inf\n",
            "test");
        CHECK(cfg.c1 == 0.25);
        CHECK(cfg.distances == std::vector<double>{0.5, 1.0, 1.5});
        CHECK(cfg.motion_basis.size() == 2);
        CHECK(std::isinf(cfg.snr_db));
        CHECK_NOTHROW(validate_run_config(cfg));
        const auto grid = config_grid(cfg);
        CHECK(grid.total_size() == 200 * 5 * 3);
    }

    SUBCASE("dump-parse round trip") {
        RunConfig cfg;
        cfg.c1 = 0.123;
        cfg.engine = "baseline";
        cfg.distances = {0.4, 0.8};
        const RunConfig back = parse_run_config(dump_run_config(cfg), "dump");
        CHECK(back.c1 == cfg.c1);
        CHECK(back.engine == cfg.engine);
        CHECK(back.distances == cfg.distances);
        CHECK(back.seed == cfg.seed);
    }
}

TEST_CASE("digest is stable and content-sensitive") {
    Rng rng(21);
    const ComplexMatrix m = oracle::random_matrix(4, 5, rng);
    CHECK(digest_hex(m) == digest_hex(m));
    ComplexMatrix other = m;
    other(2, 3) += Complex(1e-12, 0.0);
    CHECK(digest_hex(m) != digest_hex(other));
    CHECK(digest_hex(m).size() == 16);
}
