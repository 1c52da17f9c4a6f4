#include <doctest.h>

#include <cmath>

#include "abmdp/detector.hpp"
#include "test_helpers.hpp"

using namespace abmdp;

namespace {

SystemParams detector_params(double mu, double h, int n_s) {
    SystemParams p = testing_support::sec4_params();
    p.p_t = 1.0;
    p.mu = mu;
    p.h = h;
    p.n_s = n_s;
    p.delta0_sq = 1e-10;
    p.delta1_sq = 1e-10;  // tests below reason about nu = 2e-10 exactly
    return p;
}

}  // namespace

TEST_CASE("mu = 0 makes the hypotheses indistinguishable") {
    DetectorConfig cfg{1e-10, detector_params(0.0, 5e-5, 100), 100000, 11};
    DetectorResult r = detector_ber_mc(cfg);
    CHECK(std::abs(r.ber_mc - 0.5) < 3.0 * r.std_err);
}

TEST_CASE("widely separated hypotheses decode cleanly") {
    // Strong reflected path: the conditional means sit many deviations apart.
    DetectorConfig cfg{1e-9, detector_params(1.0, 9.0, 100), 100000, 12};
    DetectorResult r = detector_ber_mc(cfg);
    CHECK(r.ber_mc < 1e-3);
}

TEST_CASE("monte carlo estimate tracks the closed form at a calibrated point") {
    // Point calibrated so the closed form's approximations hold at its own
    // error scale; the formula lands near 0.1 there.
    SystemParams p = detector_params(1.0, 4.6151273525e-3, 400);
    const double g = 7.8541174119e-9;
    DetectorConfig cfg{g, p, 100000, 9};
    DetectorResult r = detector_ber_mc(cfg);
    double formula = ber(g, p);
    CHECK(std::abs(r.ber_mc - formula) <= std::max(3.0 * r.std_err, 0.1 * formula));
}

TEST_CASE("estimated error rate stays in the meaningful band") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        DetectorConfig cfg{5e-11, detector_params(0.4, 3e-4, 100), 20000, seed};
        DetectorResult r = detector_ber_mc(cfg);
        CHECK(r.ber_mc >= 0.0);
        CHECK(r.ber_mc <= 0.5 + 3.0 * r.std_err);
    }
}

TEST_CASE("test-statistic moments match the Gaussian model at a calibrated point") {
    // Signal power chosen as (sqrt(2)-1) times the total noise power, where
    // the modeled variance 2(N0+N1)^2/N_s coincides with the exact one; the
    // model otherwise understates the spread of Z once the signal term
    // dominates, so the check lives at this operating point.
    const double nu = 2e-10;
    const double g = (std::sqrt(2.0) - 1.0) * nu;
    DetectorConfig cfg{g, detector_params(0.5, 5e-5, 100), 100000, 21};
    DetectorResult r = detector_ber_mc(cfg);

    const double mean0 = cfg.params.p_t * g + nu;
    const double root_h = std::sqrt(cfg.params.h);
    const double amp = std::sqrt(g) * (1.0 + cfg.params.mu * root_h);
    const double mean1 = cfg.params.p_t * amp * amp + nu;
    const double model_var = 2.0 * nu * nu / cfg.params.n_s;

    const double se0 = std::sqrt(model_var / r.bits_0);
    const double se1 = std::sqrt(model_var / r.bits_1);
    CHECK(std::abs(r.z_mean_0 - mean0) < 3.0 * se0);
    CHECK(std::abs(r.z_mean_1 - mean1) < 3.0 * se1);
    CHECK(std::abs(r.z_var_0 - model_var) < 0.15 * model_var);
    CHECK(std::abs(r.z_var_1 - model_var) < 0.16 * model_var);  // mean1 sits slightly higher
}

TEST_CASE("more samples per bit never hurt the detector") {
    const double g = 8e-11;
    DetectorResult coarse = detector_ber_mc({g, detector_params(0.5, 2.0, 100), 100000, 31});
    DetectorResult fine = detector_ber_mc({g, detector_params(0.5, 2.0, 400), 100000, 31});
    double noise = 3.0 * std::sqrt(coarse.std_err * coarse.std_err +
                                   fine.std_err * fine.std_err);
    CHECK(fine.ber_mc <= coarse.ber_mc + noise);
}

TEST_CASE("identical seeds reproduce the estimate exactly") {
    DetectorConfig cfg{8e-11, detector_params(0.5, 2.0, 100), 20000, 77};
    DetectorResult a = detector_ber_mc(cfg);
    DetectorResult b = detector_ber_mc(cfg);
    CHECK(a.ber_mc == b.ber_mc);
    CHECK(a.z_mean_0 == b.z_mean_0);
    CHECK(a.z_mean_1 == b.z_mean_1);
}

TEST_CASE("degenerate configurations are rejected") {
    SystemParams p = detector_params(0.5, 5e-5, 100);
    SystemParams zero_ns = p;
    zero_ns.n_s = 0;
    CHECK_THROWS_AS(detector_ber_mc({1e-10, zero_ns, 1000, 1}), std::invalid_argument);
    CHECK_THROWS_AS(detector_ber_mc({-1.0, p, 1000, 1}), std::invalid_argument);
    CHECK_THROWS_AS(detector_ber_mc({1e-10, p, 0, 1}), std::invalid_argument);
}
