#pragma once

#include <cstdint>

#include "abmdp/system_model.hpp"

namespace abmdp {

/// One Monte Carlo run of the sample-level energy detector.
struct DetectorConfig {
    double gain_value = 0.0;  // source-to-tag (= source-to-receiver) power gain
    SystemParams params;      // supplies mu, n_s, p_t, h and both noise variances
    long bits = 100000;       // trials; one information bit each
    std::uint64_t seed = 1;
};

struct DetectorResult {
    double ber_mc = 0.0;    // error fraction over all trials
    double std_err = 0.0;   // binomial standard error of ber_mc
    double z_mean_0 = 0.0;  // empirical mean of the test statistic given D=0
    double z_mean_1 = 0.0;
    double z_var_0 = 0.0;   // empirical variance of the test statistic given D=0
    double z_var_1 = 0.0;
    long bits_0 = 0;        // trials per hypothesis
    long bits_1 = 0;
};

/// Simulates the receiver sample by sample: the ambient waveform is a
/// zero-mean circular complex Gaussian of power P_t, channel coefficients
/// have magnitudes sqrt(g), sqrt(g), sqrt(h) with zero phase, and the two
/// receiver noises are independent complex Gaussians. The decision threshold
/// is the midpoint of the two conditional means of the test statistic.
DetectorResult detector_ber_mc(const DetectorConfig& config);

}  // namespace abmdp
