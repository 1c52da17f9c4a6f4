#pragma once

#include <array>
#include <vector>

#include "abmdp/channel.hpp"
#include "abmdp/system_model.hpp"

namespace abmdp {

struct Transition {
    int next = 0;
    double prob = 0.0;
};

/// Tabular two-action MDP. For models built from SystemParams the kernel
/// factorizes as a deterministic battery update times a channel-matrix row;
/// hand-built instances may put anything stochastic in `kernel`.
struct MdpModel {
    int n_states = 0;
    int n_gains = 0;  // 0 for hand-built instances
    int b_c = 0;
    std::vector<std::array<double, 2>> reward;    // [state][action], bits/slot
    std::vector<std::array<bool, 2>> feasible;    // [state][action]
    std::vector<std::array<std::vector<Transition>, 2>> kernel;

    double kernel_row_sum(int s, Action a) const;
    /// Row sums of every feasible pair within 1e-12, feasibility sane.
    void validate() const;
};

/// Exact model over (battery x gain) states: reward a * R_b * C(gain) * T_0,
/// kernel = deterministic battery transition x gain-matrix row. Infeasible
/// (state, Backscatter) pairs carry no kernel mass.
MdpModel build_mdp(const SystemParams& params, const GainMarkov& channel);

struct Policy {
    std::vector<Action> action;
};

using ValueFunction = std::vector<double>;

struct SolveResult {
    ValueFunction value;
    Policy policy;
    int sweeps = 0;
    double final_delta = 0.0;       // sup-norm change of the last sweep
    double bellman_residual = 0.0;  // sup-norm |TV - V| of the returned V
};

/// Synchronous value iteration from V = 0, stopped when the sup-norm change
/// drops below `theta`. Maximization is over feasible actions only; argmax
/// ties resolve to Harvest. Throws if `max_sweeps` is exhausted.
SolveResult value_iteration(const MdpModel& model, double gamma, double theta,
                            int max_sweeps = 1000000);

/// Exact fixed point of the policy's Bellman operator via the linear system
/// (I - gamma * P_pi) V = R_pi. Residual is checked below 1e-10.
ValueFunction policy_evaluation_exact(const MdpModel& model, const Policy& policy,
                                      double gamma);

/// Undiscounted bits/slot of a fixed policy: stationary occupancy of the
/// recurrent class reachable from `initial_state`, dotted with the reward.
double long_run_average(const MdpModel& model, const Policy& policy,
                        int initial_state = 0);

/// Ground-truth solver: enumerates every deterministic feasible policy,
/// evaluates each exactly, returns the best at `initial_state` and asserts
/// it dominates at every state. Guarded to |S| <= 12.
SolveResult brute_force_optimal(const MdpModel& model, double gamma,
                                int initial_state = 0);

}  // namespace abmdp
