#include "abmdp/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace abmdp {

void QLConfig::validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("ql.alpha: must be in (0,1]");
    if (!(eps0 >= 0.0 && eps0 <= 1.0))
        throw std::invalid_argument("ql.eps0: must be in [0,1]");
    if (max_steps <= 0) throw std::invalid_argument("ql.max_steps: must be positive");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::invalid_argument("ql.gamma: must be in (0,1)");
}

double epsilon_schedule(long t, double eps0) {
    if (t < 1) throw std::invalid_argument("epsilon_schedule: step index must be >= 1");
    double eps = eps0 / std::sqrt(static_cast<double>(t));
    return std::clamp(eps, 0.0, 1.0);
}

namespace {

Action table_argmax(const QTable& table, int s, const ActionSet& feasible) {
    if (!feasible.backscatter) return Action::Harvest;
    // Strict improvement required, so a tie keeps Harvest.
    return table.q[s][1] > table.q[s][0] ? Action::Backscatter : Action::Harvest;
}

double table_max(const QTable& table, int s, const ActionSet& feasible) {
    return table.q[s][static_cast<int>(table_argmax(table, s, feasible))];
}

}  // namespace

double q_update(QTable& table, int s, Action a, double reward, int s_next,
                const ActionSet& feasible_next, double alpha, double gamma) {
    double& cell = table.q[s][static_cast<int>(a)];
    cell += alpha * (reward + gamma * table_max(table, s_next, feasible_next) - cell);
    return cell;
}

TrainResult train_q_learning(const SystemParams& params, const GainMarkov& channel,
                             const QLConfig& config) {
    params.validate();
    validate_stochastic(channel);
    config.validate();
    if (channel.size() != params.n_gains())
        throw std::invalid_argument("train_q_learning: channel dimension does not match gains");

    const int ng = params.n_gains();
    const int n_states = params.state_count();

    // Per-gain quantities are fixed over training; precompute them.
    std::vector<double> rate(ng);
    std::vector<int> harvested(ng);
    double r_max = 0.0;
    for (int y = 0; y < ng; ++y) {
        rate[y] = slot_rate(y, params);
        harvested[y] = harvested_units(y, params);
        r_max = std::max(r_max, rate[y]);
    }
    const double q_bound = r_max / (1.0 - config.gamma) + r_max + 1e-6;

    TrainResult out;
    out.q.q.assign(n_states, {0.0, 0.0});
    out.reward_trace.reserve(config.max_steps);

    rng::Stream stream(config.seed, rng::StreamId::QlTrain);
    int s = stream.uniform_int(n_states);

    for (long t = 1; t <= config.max_steps; ++t) {
        const State st = state_from_index(s, params);
        const ActionSet acts = feasible_actions(st, params);

        Action a;
        if (stream.uniform01() <= epsilon_schedule(t, config.eps0)) {
            a = acts.backscatter ? static_cast<Action>(stream.uniform_int(2))
                                 : Action::Harvest;
        } else if (acts.backscatter && out.q.q[s][1] == out.q.q[s][0]) {
            // Exact ties (the whole zero-initialized table at the start)
            // carry no preference; resolve them uniformly.
            a = static_cast<Action>(stream.uniform_int(2));
        } else {
            a = table_argmax(out.q, s, acts);
        }
        if (!acts.allows(a)) throw std::logic_error("train_q_learning: infeasible action chosen");

        const double r = a == Action::Backscatter ? rate[st.gain_index] : 0.0;
        const int b2 = battery_next(st.battery_units, a, harvested[st.gain_index], params);
        const int y2 = channel_step(stream, st.gain_index, channel);
        const int s2 = b2 * ng + y2;

        double entry = q_update(out.q, s, a, r, s2, feasible_actions(b2, params),
                                config.alpha, config.gamma);
        if (!(std::abs(entry) <= q_bound))
            throw std::logic_error("train_q_learning: Q entry left its bound at step " +
                                   std::to_string(t));

        out.reward_trace.push_back(r);
        s = s2;
    }

    out.policy.action.resize(n_states);
    for (int i = 0; i < n_states; ++i) {
        const State st = state_from_index(i, params);
        out.policy.action[i] = table_argmax(out.q, i, feasible_actions(st, params));
    }
    return out;
}

Policy greedy_policy(const SystemParams& params) {
    params.validate();
    Policy p;
    p.action.resize(params.state_count());
    for (int s = 0; s < params.state_count(); ++s) {
        const State st = state_from_index(s, params);
        p.action[s] = st.battery_units >= params.k_cost ? Action::Backscatter
                                                        : Action::Harvest;
    }
    return p;
}

}  // namespace abmdp
