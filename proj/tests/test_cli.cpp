#include "tomo/cli.hpp"

#include "tomo/coherence.hpp"
#include "tomo/io.hpp"
#include "tomo/steering.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace tomo;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("tomo_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

// Small stack so weight optimization stays fast in CLI tests.
const char* kSmallConfig =
    "baselines_n = 9\n"
    "elevation_points = 48\n"
    "elevation_min_m = -40\n"
    "elevation_max_m = 80\n"
    "trials = 6\n"
    "tuning_samples = 4\n"
    "num_layers = 10\n";

struct CapturedOutput {
    std::stringstream stream;
    std::streambuf* old = nullptr;
    CapturedOutput() { old = std::cout.rdbuf(stream.rdbuf()); }
    ~CapturedOutput() { std::cout.rdbuf(old); }
};

}  // namespace

TEST_CASE("unknown subcommand exits with code 1") {
    CapturedOutput capture;
    CHECK(cli::dispatch({"frobnicate"}) == 1);
    CHECK(cli::dispatch({}) == 1);
}

TEST_CASE("config errors exit with code 1") {
    TempDir dir;
    write_text_file(dir.file("bad.conf"), "no_such_key = 1\n");
    CapturedOutput capture;
    CHECK(cli::dispatch({"--config", dir.file("bad.conf"), "coherence"}) == 1);
}

TEST_CASE("io errors exit with code 3") {
    TempDir dir;
    write_text_file(dir.file("small.conf"), kSmallConfig);
    CapturedOutput capture;
    const int code = cli::dispatch({"--config", dir.file("small.conf"), "invert", "--input",
                                    dir.file("absent.cmx"), "--out", dir.file("g.cmx")});
    CHECK(code == 3);
}

TEST_CASE("weights then coherence reports mu(W,R) <= mu(R,R)") {
    TempDir dir;
    const std::string conf = dir.file("small.conf");
    write_text_file(conf, kSmallConfig);
    const std::string wpath = dir.file("w.cmx");

    {
        CapturedOutput capture;
        REQUIRE(cli::dispatch({"--config", conf, "weights", "--out", wpath}) == 0);
    }
    REQUIRE(std::filesystem::exists(wpath));
    REQUIRE(std::filesystem::exists(wpath + ".json"));

    double mu_wr = -1.0, mu_rr = -1.0;
    {
        CapturedOutput capture;
        REQUIRE(cli::dispatch({"--config", conf, "coherence", "--weights", wpath}) == 0);
        std::string line;
        while (std::getline(capture.stream, line)) {
            const auto eq = line.find("= ");
            if (line.rfind("mu(W,R)", 0) == 0) mu_wr = std::stod(line.substr(eq + 2));
            if (line.rfind("mu(R,R)", 0) == 0) mu_rr = std::stod(line.substr(eq + 2));
        }
    }
    REQUIRE(mu_wr >= 0.0);
    REQUIRE(mu_rr >= 0.0);
    CHECK(mu_wr <= mu_rr);

    // cross-check both numbers against the brute-force oracle
    const auto geo = make_regular_geometry(9, -135.0, 135.0, 0.031, 697000.0);
    const auto grid = fixtures::elevation_grid(-40.0, 80.0, 48);
    const SteeringMatrix R = build_steering_matrix(geo, {}, grid, true);
    const ComplexMatrix W = read_matrix(wpath);
    CHECK(mu_wr == doctest::Approx(oracle::brute_force_coherence(W, R.entries)).epsilon(1e-12));
    CHECK(mu_rr ==
          doctest::Approx(oracle::brute_force_coherence(R.entries, R.entries)).epsilon(1e-12));
}

TEST_CASE("benchmark curves are byte-identical for the same seed") {
    TempDir dir;
    const std::string conf = dir.file("small.conf");
    write_text_file(conf, std::string(kSmallConfig) + "distances = 1.0, 2.0\n");

    const auto run = [&](const std::string& out) {
        CapturedOutput capture;
        return cli::dispatch({"--config", conf, "--seed", "7", "benchmark", "--out", out,
                              "--manifest", out + ".json"});
    };
    REQUIRE(run(dir.file("a.csv")) == 0);
    REQUIRE(run(dir.file("b.csv")) == 0);

    const std::string a = read_text_file(dir.file("a.csv"));
    const std::string b = read_text_file(dir.file("b.csv"));
    CHECK(a == b);
    CHECK(a.rfind("normalized_distance,snr_db,amplitude_ratio,trials,"
                  "effective_detections,rate\n", 0) == 0);

    // a different seed changes the outcome file (statistically certain)
    REQUIRE(cli::dispatch({"--config", conf, "--seed", "8", "benchmark", "--out",
                           dir.file("c.csv")}) == 0);
}

TEST_CASE("simulate and invert round trip") {
    TempDir dir;
    const std::string conf = dir.file("small.conf");
    write_text_file(conf, std::string(kSmallConfig) + "num_scatterers = 1\nsnr_db = inf\n");

    CapturedOutput capture;
    REQUIRE(cli::dispatch({"--config", conf, "simulate", "--out-truth", dir.file("t.cmx"),
                           "--out-meas", dir.file("m.cmx"), "--count", "3"}) == 0);
    const ComplexMatrix truths = read_matrix(dir.file("t.cmx"));
    const ComplexMatrix meas = read_matrix(dir.file("m.cmx"));
    CHECK(truths.cols() == 3);
    CHECK(meas.cols() == 3);
    CHECK(truths.rows() == 48);
    CHECK(meas.rows() == 9);

    // invert the first measurement and check the detected support
    write_vector(dir.file("g0.cmx"), ComplexVector(meas.col(0)));
    REQUIRE(cli::dispatch({"--config", conf, "invert", "--input", dir.file("g0.cmx"),
                           "--out", dir.file("gamma.cmx"), "--scatterers",
                           dir.file("s.json")}) == 0);
    const ComplexVector gamma = read_vector(dir.file("gamma.cmx"));
    Eigen::Index est_argmax;
    gamma.cwiseAbs().maxCoeff(&est_argmax);
    Eigen::Index true_argmax;
    ComplexVector(truths.col(0)).cwiseAbs().maxCoeff(&true_argmax);
    CHECK(est_argmax == true_argmax);
    CHECK(std::filesystem::exists(dir.file("s.json")));
}
