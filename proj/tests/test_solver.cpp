#include "tomo/solver.hpp"

#include "tomo/config.hpp"
#include "tomo/pinv.hpp"
#include "tomo/thresholding.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace tomo;

TEST_CASE("complex soft threshold") {
    SUBCASE("3-4-5 shrinkage preserves the phase") {
        const Complex x(3.0, 4.0);
        const Complex y = complex_soft_threshold(x, 1.0);
        CHECK(std::abs(y) == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(std::arg(y) == doctest::Approx(std::arg(x)).epsilon(1e-12));
    }
    SUBCASE("theta at or above the magnitude annihilates") {
        CHECK(complex_soft_threshold(Complex(3.0, 4.0), 5.0) == Complex(0.0, 0.0));
        CHECK(complex_soft_threshold(Complex(3.0, 4.0), 7.5) == Complex(0.0, 0.0));
    }
    SUBCASE("theta = 0 is the identity") {
        const Complex x(-0.2, 0.7);
        CHECK(complex_soft_threshold(x, 0.0) == x);
    }
    SUBCASE("negative theta is rejected") {
        CHECK_THROWS_AS(complex_soft_threshold(Complex(1.0, 0.0), -0.1), ConfigError);
    }
    SUBCASE("shrinkage never increases magnitude, phase within 1e-12") {
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const Complex x(rng.normal(), rng.normal());
            const double theta = std::abs(rng.normal());
            const Complex y = complex_soft_threshold(x, theta);
            CHECK(std::abs(y) <= std::abs(x) + 1e-15);
            if (y != Complex(0.0, 0.0))
                CHECK(std::abs(std::arg(y) - std::arg(x)) <= 1e-12);
        }
    }
}

TEST_CASE("support selection threshold") {
    ComplexVector v(3);
    v[0] = std::polar(3.0, 0.3);
    v[1] = std::polar(1.0, -1.2);
    v[2] = std::polar(0.5, 2.0);

    SUBCASE("p = L passes everything") {
        const ComplexVector out = support_selection_threshold(v, 10.0, 3);
        CHECK((out - v).norm() == 0.0);
    }
    SUBCASE("p = 0 is a plain soft threshold") {
        const ComplexVector out = support_selection_threshold(v, 0.8, 0);
        const ComplexVector plain = soft_threshold_vector(v, 0.8);
        CHECK((out - plain).norm() == 0.0);
    }
    SUBCASE("magnitudes [3,1,0.5], theta 0.8, p 1 give [3, 0.2, 0]") {
        const ComplexVector out = support_selection_threshold(v, 0.8, 1);
        CHECK(std::abs(out[0]) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(std::abs(out[1]) == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(std::abs(out[2]) == 0.0);
        CHECK(std::arg(out[1]) == doctest::Approx(-1.2).epsilon(1e-12));
    }
    SUBCASE("ties break toward the lower index") {
        ComplexVector tie(3);
        tie[0] = Complex(1.0, 0.0);
        tie[1] = Complex(0.0, 1.0);  // same magnitude as entry 0
        tie[2] = Complex(0.1, 0.0);
        const ComplexVector out = support_selection_threshold(tie, 10.0, 1);
        CHECK(out[0] == tie[0]);       // protected
        CHECK(out[1] == Complex(0.0, 0.0));
    }
    SUBCASE("p out of range is rejected") {
        CHECK_THROWS_AS(support_selection_threshold(v, 0.1, 4), ConfigError);
        CHECK_THROWS_AS(support_selection_threshold(v, 0.1, -1), ConfigError);
    }
}

TEST_CASE("block partition") {
    SUBCASE("L=10, B=4") {
        const BlockPartition p = partition_blocks(10, 4);
        REQUIRE(p.num_blocks() == 3);
        CHECK(p.ranges[0] == std::pair{0, 4});
        CHECK(p.ranges[1] == std::pair{4, 8});
        CHECK(p.ranges[2] == std::pair{8, 10});
    }
    SUBCASE("B >= L gives one block") {
        const BlockPartition p = partition_blocks(6, 9);
        REQUIRE(p.num_blocks() == 1);
        CHECK(p.ranges[0] == std::pair{0, 6});
    }
    SUBCASE("exact division") {
        const BlockPartition p = partition_blocks(2048, 16);
        CHECK(p.num_blocks() == 128);
        for (const auto& [lo, hi] : p.ranges) CHECK(hi - lo == 16);
    }
    SUBCASE("invalid blocksize") {
        CHECK_THROWS_AS(partition_blocks(10, 0), ConfigError);
    }
}

TEST_CASE("block weight") {
    Rng rng(17);

    SUBCASE("orthonormal columns give 1") {
        ComplexMatrix r = ComplexMatrix::Zero(5, 3);
        r(0, 0) = 1.0;
        r(1, 1) = 1.0;
        r(2, 2) = 1.0;
        CHECK(block_weight(r, {0, 3}) == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("two identical unit columns give 2") {
        ComplexMatrix r(4, 2);
        r.col(0) = oracle::random_unit_column_matrix(4, 1, rng).col(0);
        r.col(1) = r.col(0);
        CHECK(block_weight(r, {0, 2}) == doctest::Approx(2.0).epsilon(1e-8));
    }
    SUBCASE("random 6x3 block against a dense eigensolve") {
        const ComplexMatrix r = oracle::random_matrix(6, 3, rng);
        const ComplexMatrix gram = r.adjoint() * r;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
        const double expected = eig.eigenvalues().maxCoeff();
        CHECK(block_weight(r, {0, 3}) == doctest::Approx(expected).epsilon(1e-7));
    }
    SUBCASE("frobenius flag") {
        const ComplexMatrix r = oracle::random_matrix(5, 4, rng);
        const ComplexMatrix gram = r.adjoint() * r;
        CHECK(block_weight(r, {0, 4}, BlockNorm::frobenius) ==
              doctest::Approx(gram.norm()).epsilon(1e-12));
    }
    SUBCASE("empty range is rejected") {
        const ComplexMatrix r = oracle::random_matrix(3, 3, rng);
        CHECK_THROWS_AS(block_weight(r, {2, 2}), ConfigError);
        CHECK_THROWS_AS(block_weight(r, {1, 4}), ConfigError);
    }
}

TEST_CASE("block probabilities") {
    SUBCASE("equal weights") {
        const auto p = block_probabilities({2.0, 2.0, 2.0, 2.0});
        for (double x : p) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("weights [1,3]") {
        const auto p = block_probabilities({1.0, 3.0});
        CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-12));
    }
    SUBCASE("normalization holds for random weights") {
        Rng rng(19);
        std::vector<double> w(11);
        for (auto& x : w) x = std::abs(rng.normal()) + 0.01;
        const auto p = block_probabilities(w);
        double sum = 0.0;
        for (double x : p) sum += x;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
    SUBCASE("degenerate weights are rejected") {
        CHECK_THROWS_AS(block_probabilities({0.0, 0.0}), ConfigError);
        CHECK_THROWS_AS(block_probabilities({1.0, -0.5}), ConfigError);
        CHECK_THROWS_AS(block_probabilities({}), ConfigError);
    }
    SUBCASE("sampling frequencies match within 3 standard errors over 1e5 draws") {
        const std::vector<double> p = block_probabilities({1.0, 2.0, 3.0, 4.0});
        Rng rng(101);
        const int draws = 100000;
        std::vector<int> counts(p.size(), 0);
        for (int i = 0; i < draws; ++i)
            counts[static_cast<std::size_t>(rng.sample_discrete(p))]++;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double freq = static_cast<double>(counts[i]) / draws;
            const double se = std::sqrt(p[i] * (1.0 - p[i]) / draws);
            CHECK(std::abs(freq - p[i]) <= 3.0 * se);
        }
    }
}

TEST_CASE("baseline layer") {
    Rng rng(29);

    SUBCASE("exact noiseless solution is a fixed point with converged flag") {
        const ComplexMatrix R = oracle::random_unit_column_matrix(8, 16, rng);
        ComplexVector gamma = ComplexVector::Zero(16);
        gamma[3] = Complex(1.0, -0.5);
        gamma[11] = Complex(-0.4, 0.2);
        const ComplexVector g = R * gamma;

        SolverState state;
        state.gamma = gamma;
        state.gamma_prev = gamma;
        state.residual = g - R * gamma;
        Hyperparameters hp;
        hp.c1 = 0.1;
        hp.c2 = 0.0;
        const ComplexMatrix R_pinv = pseudoinverse(R);
        hyperlista_layer(state, g, R, R, R_pinv, hp);
        CHECK(state.converged);
        CHECK((state.gamma - gamma).norm() == 0.0);
    }

    SUBCASE("degenerate c1 = c2 = 0 with support off is a pure gradient-like step") {
        const ComplexMatrix R = oracle::random_unit_column_matrix(6, 10, rng);
        const ComplexMatrix W = oracle::random_matrix(6, 10, rng);
        const ComplexVector g = oracle::random_vector(6, rng);
        SolverState state;
        state.gamma = oracle::random_vector(10, rng);
        state.gamma_prev = state.gamma;
        Hyperparameters hp;
        hp.c1 = 0.0;
        hp.c2 = 0.0;
        hp.support_selection = false;
        const ComplexVector expected = state.gamma + W.adjoint() * (g - R * state.gamma);
        hyperlista_layer(state, g, R, W, pseudoinverse(R), hp);
        CHECK((state.gamma - expected).cwiseAbs().maxCoeff() <= 1e-14);
    }

    SUBCASE("one layer on a 4x8 instance matches the dense oracle to 1e-12") {
        const ComplexMatrix R = oracle::random_unit_column_matrix(4, 8, rng);
        const ComplexMatrix W = oracle::random_matrix(4, 8, rng);
        const ComplexMatrix R_pinv = pseudoinverse(R);
        const ComplexVector g = oracle::random_vector(4, rng);

        SolverState state;
        state.gamma = oracle::random_vector(8, rng);
        state.gamma_prev = oracle::random_vector(8, rng);
        Hyperparameters hp;
        hp.c1 = 0.3;
        hp.c2 = 0.05;
        hp.c3 = 0.6;
        hp.support_selection = true;

        const ComplexVector expected = oracle::dense_baseline_layer(
            state.gamma, state.gamma_prev, g, R, W, R_pinv, hp.c1, hp.c2, hp.c3, true);
        const ComplexVector prev_gamma = state.gamma;
        hyperlista_layer(state, g, R, W, R_pinv, hp);
        CHECK((state.gamma - expected).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((state.gamma_prev - prev_gamma).norm() == 0.0);

        // residual cache consistency
        const ComplexVector fresh = g - R * state.gamma;
        CHECK((state.residual - fresh).norm() <= 1e-10 * (1.0 + g.norm()));
    }
}

namespace {

BlockLevel single_block_level(const ComplexMatrix& R) {
    BlockLevel level;
    level.partition = partition_blocks(static_cast<int>(R.cols()),
                                       static_cast<int>(R.cols()));
    level.pinvs.push_back(pseudoinverse(R));
    level.schedule.mode = ScheduleMode::sweep;
    level.schedule.weights = {block_weight(R, level.partition.ranges[0])};
    level.schedule.probabilities = {1.0};
    return level;
}

}  // namespace

TEST_CASE("abt layer") {
    Rng rng(31);

    SUBCASE("J=1 with full residual reduces to the baseline layer, 1e-12") {
        for (int instance = 0; instance < 10; ++instance) {
            const ComplexMatrix R = oracle::random_unit_column_matrix(8, 32, rng);
            const ComplexMatrix W = oracle::random_matrix(8, 32, rng);
            const ComplexVector g = oracle::random_vector(8, rng);
            Hyperparameters hp;
            hp.c1 = 0.12;
            hp.c2 = 0.03;
            hp.c3 = 0.5;
            hp.support_selection = false;  // p forced to zero

            SolverState abt;
            abt.gamma = oracle::random_vector(32, rng);
            abt.gamma_prev = oracle::random_vector(32, rng);
            abt.residual = g - R * abt.gamma;
            abt.blocksize = 32;
            SolverState base = abt;

            const BlockLevel level = single_block_level(R);
            hyperlista_abt_layer(abt, g, R, W, level, hp, hp.c3, ResidualMode::full,
                                 ScheduleMode::sweep, nullptr);
            hyperlista_layer(base, g, R, W, level.pinvs[0], hp);

            CHECK((abt.gamma - base.gamma).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((abt.residual - base.residual).cwiseAbs().maxCoeff() <= 1e-10);
        }
    }

    SUBCASE("overwhelming threshold annihilates the iterate") {
        const ComplexMatrix R = oracle::random_unit_column_matrix(6, 12, rng);
        const ComplexMatrix W = oracle::random_matrix(6, 12, rng);
        const ComplexVector g = oracle::random_vector(6, rng);
        Hyperparameters hp;
        hp.c1 = 1e9;
        hp.c2 = 0.0;
        hp.c3 = 0.5;

        SolverState state;
        state.gamma = oracle::random_vector(12, rng);
        state.gamma_prev = state.gamma;
        state.residual = g - R * state.gamma;
        state.blocksize = 4;
        // build the 3-block level
        BlockLevel level;
        level.partition = partition_blocks(12, 4);
        for (const auto& range : level.partition.ranges) {
            level.pinvs.push_back(
                pseudoinverse(R.middleCols(range.first, range.second - range.first)));
            level.schedule.weights.push_back(block_weight(R, range));
        }
        level.schedule.probabilities = block_probabilities(level.schedule.weights);
        hyperlista_abt_layer(state, g, R, W, level, hp, hp.c3, ResidualMode::full,
                             ScheduleMode::sweep, nullptr);
        CHECK(state.gamma.norm() == 0.0);
    }

    SUBCASE("weighted_random without an rng is rejected") {
        const ComplexMatrix R = oracle::random_unit_column_matrix(4, 8, rng);
        SolverState state;
        state.gamma = ComplexVector::Zero(8);
        state.gamma_prev = state.gamma;
        state.residual = ComplexVector::Zero(4);
        state.blocksize = 8;
        const BlockLevel level = single_block_level(R);
        Hyperparameters hp;
        CHECK_THROWS_AS(hyperlista_abt_layer(state, ComplexVector::Zero(4), R, R, level, hp,
                                             hp.c3, ResidualMode::full,
                                             ScheduleMode::weighted_random, nullptr),
                        ConfigError);
    }

    SUBCASE("incomplete pseudoinverse cache is rejected") {
        const ComplexMatrix R = oracle::random_unit_column_matrix(4, 8, rng);
        BlockLevel level;
        level.partition = partition_blocks(8, 4);  // 2 blocks
        level.pinvs.push_back(pseudoinverse(R.middleCols(0, 4)));  // only one cached
        level.schedule.probabilities = {0.5, 0.5};
        SolverState state;
        state.gamma = ComplexVector::Zero(8);
        state.gamma_prev = state.gamma;
        state.residual = ComplexVector::Zero(4);
        Hyperparameters hp;
        CHECK_THROWS_AS(hyperlista_abt_layer(state, ComplexVector::Zero(4), R, R, level, hp,
                                             hp.c3, ResidualMode::full, ScheduleMode::sweep,
                                             nullptr),
                        NumericalError);
    }
}

TEST_CASE("blocksize schedule") {
    SUBCASE("geometric decay with floor 1") {
        CHECK(blocksize_schedule(32, 0.5, 6) == std::vector<int>{32, 16, 8, 4, 2, 1});
        CHECK(blocksize_schedule(32, 0.5, 8) == std::vector<int>{32, 16, 8, 4, 2, 1, 1, 1});
    }
    SUBCASE("non-increasing and bounded below by 1") {
        for (double c3 : {0.3, 0.52, 0.75, 0.9}) {
            const auto sizes = blocksize_schedule(100, c3, 20);
            for (std::size_t k = 1; k < sizes.size(); ++k) {
                CHECK(sizes[k] <= sizes[k - 1]);
                CHECK(sizes[k] >= 1);
            }
        }
    }
}

TEST_CASE("initial blocksize rule") {
    // 96 points over [-40, 80]: spacing 120/95; half of rho_s=40 is 20 m,
    // 20 / (120/95) = 15.83 -> 16.
    const auto grid = fixtures::elevation_grid(-40.0, 80.0, 96);
    CHECK(initial_blocksize(grid, 40.0) == 16);

    ParameterGrid joint = grid;
    joint.motion_axes = {linspace(-1.0, 1.0, 8), linspace(0.0, 1.0, 4)};
    CHECK(initial_blocksize(joint, 40.0) == 16 * 32);
}

TEST_CASE("run_inference") {
    const InversionSetup& setup = fixtures::small_desk_setup();
    const ParameterGrid& grid = setup.R_synth.grid;
    RunConfig defaults;
    const Hyperparameters hp = config_hyperparameters(defaults);

    SUBCASE("zero measurement stays zero for both engines") {
        const ComplexVector g = ComplexVector::Zero(setup.R_inv.entries.rows());
        for (Engine engine : {Engine::abt, Engine::baseline}) {
            SolverOptions options = setup.options;
            options.engine = engine;
            const SolverPlan plan = make_solver_plan(setup.R_inv.entries,
                                                     setup.weights.entries, hp, options);
            const ReflectivityProfile out = run_inference(g, plan, 7);
            CHECK(out.entries.norm() == 0.0);
        }
    }

    SUBCASE("noiseless on-grid single scatterer is recovered") {
        ReflectivityProfile truth;
        truth.entries = ComplexVector::Zero(grid.total_size());
        const int true_index = 44;
        truth.entries[true_index] = std::polar(1.3, 0.8);
        const ComplexVector g = setup.R_synth.entries * truth.entries;

        // matched-filter oracle: the dictionary correlation peaks at the truth
        Eigen::Index mf_argmax;
        (setup.R_inv.entries.adjoint() * g).cwiseAbs().maxCoeff(&mf_argmax);
        REQUIRE(mf_argmax == true_index);

        const SolverPlan plan = make_plan_for(setup, hp);
        const ReflectivityProfile estimate = invert_measurement(setup, plan, g, 3);

        Eigen::Index argmax;
        estimate.entries.cwiseAbs().maxCoeff(&argmax);
        CHECK(argmax == true_index);
        CHECK(std::abs(std::abs(estimate.entries[argmax]) - 1.3) / 1.3 <= 1e-3);
        // everything else is negligible next to the peak
        ComplexVector rest = estimate.entries;
        rest[argmax] = Complex(0.0, 0.0);
        CHECK(rest.cwiseAbs().maxCoeff() < 0.05 * std::abs(estimate.entries[argmax]));
    }

    SUBCASE("weighted_random inversions are bit-identical for the same seed") {
        ReflectivityProfile truth;
        truth.entries = ComplexVector::Zero(grid.total_size());
        truth.entries[20] = Complex(1.0, 0.0);
        truth.entries[60] = Complex(0.0, 1.0);
        const auto meas = synthesize_measurements(setup.R_synth, truth, 6.0, 99);

        const SolverPlan plan = make_plan_for(setup, hp);
        const ReflectivityProfile a = run_inference(meas.entries, plan, 1234);
        const ReflectivityProfile b = run_inference(meas.entries, plan, 1234);
        CHECK((a.entries - b.entries).norm() == 0.0);
        const ReflectivityProfile c = run_inference(meas.entries, plan, 1235);
        CHECK((a.entries - c.entries).norm() > 0.0);
    }

    SUBCASE("K = 0 returns the back-projection") {
        Hyperparameters hp0 = hp;
        hp0.num_layers = 1;
        SolverPlan plan = make_plan_for(setup, hp0);
        plan.hp.num_layers = 0;
        Rng rng(77);
        const ComplexVector g =
            oracle::random_vector(static_cast<int>(setup.R_inv.entries.rows()), rng);
        const ReflectivityProfile out = run_inference(g, plan, 5);
        const ComplexVector expected = setup.R_inv.entries.adjoint() * g;
        CHECK((out.entries - expected).norm() == 0.0);
    }

    SUBCASE("residual cache stays consistent through the layers") {
        Rng rng(83);
        const ComplexMatrix R = oracle::random_unit_column_matrix(10, 40, rng);
        const ComplexMatrix W = oracle::random_matrix(10, 40, rng);
        const ComplexVector g = oracle::random_vector(10, rng);
        Hyperparameters hp2;
        hp2.c1 = 0.05;
        hp2.c2 = 0.01;
        hp2.c3 = 0.5;
        hp2.num_layers = 6;
        SolverOptions options;
        options.engine = Engine::abt;
        options.initial_blocksize = 8;
        options.schedule_mode = ScheduleMode::weighted_random;
        const SolverPlan plan = make_solver_plan(R, W, hp2, options);

        SolverState state;
        state.gamma = R.adjoint() * g;
        state.gamma_prev = state.gamma;
        state.residual = g - R * state.gamma;
        state.blocksize = 8;
        Rng solver_rng(4242);
        for (int k = 0; k < hp2.num_layers; ++k) {
            hyperlista_abt_layer(state, g, R, W, plan.level(state.blocksize), hp2, hp2.c3,
                                 ResidualMode::full, ScheduleMode::weighted_random,
                                 &solver_rng);
            const ComplexVector fresh = g - R * state.gamma;
            CHECK((state.residual - fresh).norm() <= 1e-10 * (1.0 + g.norm()));
        }
    }
}
