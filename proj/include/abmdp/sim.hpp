#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "abmdp/agents.hpp"
#include "abmdp/channel.hpp"
#include "abmdp/mdp.hpp"
#include "abmdp/system_model.hpp"

namespace abmdp {

/// Slot-level results of running one policy over one channel realization.
struct Metrics {
    std::vector<double> per_slot_rate;      // bits delivered per slot
    std::vector<double> rolling_average;    // window means; entry i covers slots [i, i+W)
    std::vector<double> battery_histogram;  // occupancy probability per level 0..B_c
    long harvest_slots = 0;
    long backscatter_slots = 0;
    double mean_throughput = 0.0;           // bits per slot over the horizon
};

struct SimOptions {
    long n_slots = 10000;
    int window = 1000;       // rolling-average length
    int e_initial = 0;       // battery at slot 0
    std::uint64_t seed = 1;
    int initial_gain = -1;   // -1: draw from the stationary gain distribution
};

/// Exogenous gain-index path of length n_slots; first entry is `initial_gain`
/// or a stationary draw when it is -1.
std::vector<int> generate_gain_path(const GainMarkov& channel, long n_slots,
                                    rng::Stream& stream, int initial_gain = -1);

Metrics run_policy_on_path(const SystemParams& params, const Policy& policy,
                           const std::vector<int>& gain_path, int e_initial, int window);

Metrics run_policy(const SystemParams& params, const GainMarkov& channel,
                   const Policy& policy, const SimOptions& options);

struct PolicyComparison {
    std::string name;
    Metrics metrics;
};

/// Evaluates every policy on one shared channel realization (common random
/// numbers), so throughput differences reflect the policies alone.
std::vector<PolicyComparison> compare_policies(
    const SystemParams& params, const GainMarkov& channel,
    const std::vector<std::pair<std::string, Policy>>& policies,
    const SimOptions& options);

struct SweepRow {
    double p_t = 0.0;
    std::string method;             // "vi", "ql" or "greedy"
    double mean_throughput = 0.0;   // simulated, bits/slot
    double analytic_average = 0.0;  // stationary-distribution bits/slot
};

struct SweepConfig {
    std::vector<double> powers;  // watts, evaluated in the given order
    double theta = 1e-9;         // value-iteration stopping threshold
    QLConfig ql;
    SimOptions sim;
    bool e0_auto = true;         // recompute e0 = eta * G_1 * P_t * T_0 per point
};

/// For each source power: rebuild the model, re-solve and retrain each
/// method, then evaluate all of them on one channel realization shared
/// across both methods and power points.
std::vector<SweepRow> sweep_power(const SystemParams& base, const GainMarkov& channel,
                                  const SweepConfig& config);

}  // namespace abmdp
