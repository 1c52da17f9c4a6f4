#include "abmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "abmdp/linalg.hpp"

namespace abmdp {

namespace {

int action_index(Action a) { return static_cast<int>(a); }

double action_value(const MdpModel& m, const ValueFunction& v, int s, int a,
                    double gamma) {
    double q = m.reward[s][a];
    for (const Transition& t : m.kernel[s][a]) q += gamma * t.prob * v[t.next];
    return q;
}

// Max over feasible actions; ties go to Harvest because it is scanned first.
std::pair<double, Action> best_action(const MdpModel& m, const ValueFunction& v,
                                      int s, double gamma) {
    double best = -std::numeric_limits<double>::infinity();
    Action arg = Action::Harvest;
    for (int a = 0; a < 2; ++a) {
        if (!m.feasible[s][a]) continue;
        double q = action_value(m, v, s, a, gamma);
        if (q > best) {
            best = q;
            arg = static_cast<Action>(a);
        }
    }
    return {best, arg};
}

}  // namespace

double MdpModel::kernel_row_sum(int s, Action a) const {
    double sum = 0.0;
    for (const Transition& t : kernel[s][action_index(a)]) sum += t.prob;
    return sum;
}

void MdpModel::validate() const {
    if (n_states <= 0) throw std::invalid_argument("mdp: empty model");
    if (static_cast<int>(reward.size()) != n_states ||
        static_cast<int>(feasible.size()) != n_states ||
        static_cast<int>(kernel.size()) != n_states)
        throw std::invalid_argument("mdp: table sizes disagree with the state count");
    for (int s = 0; s < n_states; ++s) {
        if (!feasible[s][0])
            throw std::invalid_argument("mdp: state " + std::to_string(s) +
                                        " has no feasible Harvest action");
        for (int a = 0; a < 2; ++a) {
            if (!feasible[s][a]) {
                if (!kernel[s][a].empty())
                    throw std::invalid_argument("mdp: infeasible pair carries kernel mass");
                continue;
            }
            double residual = kernel_row_sum(s, static_cast<Action>(a)) - 1.0;
            if (std::abs(residual) > 1e-12)
                throw std::invalid_argument("mdp: kernel row (" + std::to_string(s) + "," +
                                            std::to_string(a) + ") off by " +
                                            std::to_string(residual));
            for (const Transition& t : kernel[s][a])
                if (t.next < 0 || t.next >= n_states || t.prob < 0.0)
                    throw std::invalid_argument("mdp: malformed transition");
        }
    }
}

MdpModel build_mdp(const SystemParams& params, const GainMarkov& channel) {
    params.validate();
    validate_stochastic(channel);
    if (channel.size() != params.n_gains())
        throw std::invalid_argument("mdp: channel matrix dimension does not match gains");

    const int ng = params.n_gains();
    MdpModel m;
    m.n_states = params.state_count();
    m.n_gains = ng;
    m.b_c = params.b_c;
    m.reward.resize(m.n_states);
    m.feasible.resize(m.n_states);
    m.kernel.resize(m.n_states);

    for (int s = 0; s < m.n_states; ++s) {
        const State st = state_from_index(s, params);
        const ActionSet acts = feasible_actions(st, params);
        const int harvested = harvested_units(st.gain_index, params);
        const double rate = slot_rate(st.gain_index, params);

        m.reward[s] = {0.0, rate};
        m.feasible[s] = {true, acts.backscatter};
        for (int a = 0; a < 2; ++a) {
            if (!m.feasible[s][a]) continue;
            int b2 = battery_next(st.battery_units, static_cast<Action>(a), harvested, params);
            auto& row = m.kernel[s][a];
            row.reserve(ng);
            for (int y2 = 0; y2 < ng; ++y2) {
                double pr = channel.rows[st.gain_index][y2];
                if (pr > 0.0) row.push_back({b2 * ng + y2, pr});
            }
        }
    }
    m.validate();
    return m;
}

SolveResult value_iteration(const MdpModel& model, double gamma, double theta,
                            int max_sweeps) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("value_iteration: gamma must lie in (0,1)");
    if (!(theta > 0.0)) throw std::invalid_argument("value_iteration: theta must be positive");
    model.validate();

    ValueFunction v(model.n_states, 0.0), next(model.n_states, 0.0);
    double delta = 0.0;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        delta = 0.0;
        for (int s = 0; s < model.n_states; ++s) {
            next[s] = best_action(model, v, s, gamma).first;
            delta = std::max(delta, std::abs(next[s] - v[s]));
        }
        v.swap(next);
        if (delta < theta) break;
    }
    if (delta >= theta)
        throw std::runtime_error("value_iteration: sweep cap exceeded, residual " +
                                 std::to_string(delta));

    SolveResult out;
    out.value = v;
    out.sweeps = sweep + 1;
    out.final_delta = delta;
    out.policy.action.resize(model.n_states);
    out.bellman_residual = 0.0;
    for (int s = 0; s < model.n_states; ++s) {
        auto [q, a] = best_action(model, v, s, gamma);
        out.policy.action[s] = a;
        out.bellman_residual = std::max(out.bellman_residual, std::abs(q - v[s]));
    }
    return out;
}

ValueFunction policy_evaluation_exact(const MdpModel& model, const Policy& policy,
                                      double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("policy_evaluation_exact: gamma must lie in [0,1)");
    if (static_cast<int>(policy.action.size()) != model.n_states)
        throw std::invalid_argument("policy_evaluation_exact: policy size mismatch");

    const int n = model.n_states;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (int s = 0; s < n; ++s) {
        int act = action_index(policy.action[s]);
        if (!model.feasible[s][act])
            throw std::invalid_argument("policy_evaluation_exact: infeasible action at state " +
                                        std::to_string(s));
        a[s][s] = 1.0;
        for (const Transition& t : model.kernel[s][act]) a[s][t.next] -= gamma * t.prob;
        b[s] = model.reward[s][act];
    }
    ValueFunction v = solve_dense(std::move(a), std::move(b));

    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
        double rhs = model.reward[s][action_index(policy.action[s])];
        for (const Transition& t : model.kernel[s][action_index(policy.action[s])])
            rhs += gamma * t.prob * v[t.next];
        residual = std::max(residual, std::abs(v[s] - rhs));
    }
    if (!(residual < 1e-10))
        throw std::runtime_error("policy_evaluation_exact: residual " + std::to_string(residual));
    return v;
}

namespace {

// Closed strongly connected components of the policy-induced chain,
// restricted to states reachable from `initial_state`. Iterative Tarjan.
struct SccResult {
    std::vector<int> recurrent_states;  // exactly one closed class expected
    int closed_class_count = 0;
};

SccResult closed_classes(const MdpModel& model, const Policy& policy, int initial_state) {
    const int n = model.n_states;
    auto succ = [&](int s) -> const std::vector<Transition>& {
        return model.kernel[s][action_index(policy.action[s])];
    };

    std::vector<bool> reachable(n, false);
    {
        std::vector<int> stack{initial_state};
        reachable[initial_state] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const Transition& t : succ(u))
                if (t.prob > 0.0 && !reachable[t.next]) {
                    reachable[t.next] = true;
                    stack.push_back(t.next);
                }
        }
    }

    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0, n_comps = 0;

    struct Frame {
        int v;
        std::size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (!reachable[root] || index[root] != -1) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& edges = succ(f.v);
            if (f.edge < edges.size()) {
                int w = edges[f.edge].next;
                bool live = edges[f.edge].prob > 0.0;
                ++f.edge;
                if (!live) continue;
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = n_comps;
                        if (w == f.v) break;
                    }
                    ++n_comps;
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            }
        }
    }

    std::vector<bool> closed(n_comps, true);
    for (int s = 0; s < n; ++s) {
        if (!reachable[s]) continue;
        for (const Transition& t : succ(s))
            if (t.prob > 0.0 && comp[t.next] != comp[s]) closed[comp[s]] = false;
    }

    SccResult out;
    int chosen = -1;
    for (int c = 0; c < n_comps; ++c)
        if (closed[c]) {
            ++out.closed_class_count;
            chosen = c;
        }
    if (out.closed_class_count == 1)
        for (int s = 0; s < n; ++s)
            if (reachable[s] && comp[s] == chosen) out.recurrent_states.push_back(s);
    return out;
}

}  // namespace

double long_run_average(const MdpModel& model, const Policy& policy, int initial_state) {
    if (initial_state < 0 || initial_state >= model.n_states)
        throw std::invalid_argument("long_run_average: initial state out of range");
    SccResult scc = closed_classes(model, policy, initial_state);
    if (scc.closed_class_count != 1)
        throw std::runtime_error("long_run_average: induced chain has " +
                                 std::to_string(scc.closed_class_count) +
                                 " recurrent classes reachable from the initial state");

    const auto& rec = scc.recurrent_states;
    const int m = static_cast<int>(rec.size());
    std::vector<int> local(model.n_states, -1);
    for (int i = 0; i < m; ++i) local[rec[i]] = i;

    // Lazy chain (I + P)/2 shares the stationary distribution and cannot be
    // periodic, so plain power iteration converges.
    std::vector<double> d(m, 1.0 / m), next(m, 0.0);
    const int cap = 2000000;
    double delta = 1.0;
    for (int iter = 0; iter < cap && delta >= 1e-13; ++iter) {
        for (int i = 0; i < m; ++i) next[i] = 0.5 * d[i];
        for (int i = 0; i < m; ++i) {
            int s = rec[i];
            for (const Transition& t : model.kernel[s][action_index(policy.action[s])]) {
                int j = local[t.next];
                if (j >= 0) next[j] += 0.5 * d[i] * t.prob;
            }
        }
        double norm = 0.0;
        for (double v : next) norm += v;
        for (double& v : next) v /= norm;
        delta = 0.0;
        for (int i = 0; i < m; ++i) delta = std::max(delta, std::abs(next[i] - d[i]));
        d.swap(next);
    }
    if (delta >= 1e-13)
        throw std::runtime_error("long_run_average: stationary solve did not converge");

    double avg = 0.0;
    for (int i = 0; i < m; ++i)
        avg += d[i] * model.reward[rec[i]][action_index(policy.action[rec[i]])];
    return avg;
}

SolveResult brute_force_optimal(const MdpModel& model, double gamma, int initial_state) {
    if (model.n_states > 12)
        throw std::invalid_argument("brute_force_optimal: state space too large (|S| > 12)");
    model.validate();
    if (initial_state < 0 || initial_state >= model.n_states)
        throw std::invalid_argument("brute_force_optimal: initial state out of range");

    std::vector<int> free_states;  // states with both actions feasible
    for (int s = 0; s < model.n_states; ++s)
        if (model.feasible[s][1]) free_states.push_back(s);

    Policy candidate;
    candidate.action.assign(model.n_states, Action::Harvest);

    std::vector<ValueFunction> values;
    ValueFunction elementwise_max(model.n_states, -std::numeric_limits<double>::infinity());

    const std::uint64_t combos = 1ULL << free_states.size();
    values.reserve(combos);
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        for (std::size_t i = 0; i < free_states.size(); ++i)
            candidate.action[free_states[i]] =
                (mask >> i) & 1 ? Action::Backscatter : Action::Harvest;
        values.push_back(policy_evaluation_exact(model, candidate, gamma));
        for (int s = 0; s < model.n_states; ++s)
            elementwise_max[s] = std::max(elementwise_max[s], values.back()[s]);
    }

    // A maximizer at the initial state alone may still lose at states it
    // never reaches; the optimum proper dominates everywhere and must exist.
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
        bool dominant = true;
        for (int s = 0; s < model.n_states && dominant; ++s)
            dominant = values[mask][s] >= elementwise_max[s] - 1e-9;
        if (!dominant) continue;
        SolveResult best;
        best.value = values[mask];
        best.policy.action.assign(model.n_states, Action::Harvest);
        for (std::size_t i = 0; i < free_states.size(); ++i)
            best.policy.action[free_states[i]] =
                (mask >> i) & 1 ? Action::Backscatter : Action::Harvest;
        return best;
    }
    throw std::logic_error("brute_force_optimal: no policy dominates at every state");
}

}  // namespace abmdp
