#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "abmdp/channel.hpp"
#include "abmdp/mdp.hpp"
#include "abmdp/system_model.hpp"

namespace abmdp {

struct QTable {
    std::vector<std::array<double, 2>> q;  // [state][action], zero-initialized
};

struct QLConfig {
    double alpha = 0.1;      // learning rate, (0,1]
    double eps0 = 0.2;       // base exploration probability
    long max_steps = 100000;
    double gamma = 0.9;      // discount, (0,1)
    std::uint64_t seed = 1;

    void validate() const;
};

/// Exploration probability at step t >= 1: eps0 / sqrt(t), clamped to [0,1].
double epsilon_schedule(long t, double eps0);

/// One-step update Q(s,a) += alpha * (r + gamma * max_feasible Q(s',.) - Q(s,a)).
/// Returns the new entry. Touches exactly one cell.
double q_update(QTable& table, int s, Action a, double reward, int s_next,
                const ActionSet& feasible_next, double alpha, double gamma);

struct TrainResult {
    QTable q;
    Policy policy;                     // argmax over feasible actions, ties -> Harvest
    std::vector<double> reward_trace;  // immediate reward per training step
};

/// Online epsilon-greedy training against the slot dynamics: random feasible
/// action with probability eps0/sqrt(t), otherwise the table argmax (exact
/// argmax ties resolve uniformly at random; the returned policy resolves
/// them toward Harvest). Fully reproducible from the seed.
TrainResult train_q_learning(const SystemParams& params, const GainMarkov& channel,
                             const QLConfig& config);

/// Baseline that backscatters whenever the battery holds at least k units,
/// regardless of the gain state.
Policy greedy_policy(const SystemParams& params);

}  // namespace abmdp
