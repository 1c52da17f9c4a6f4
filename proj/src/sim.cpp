#include "abmdp/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace abmdp {

std::vector<int> generate_gain_path(const GainMarkov& channel, long n_slots,
                                    rng::Stream& stream, int initial_gain) {
    validate_stochastic(channel);
    if (n_slots < 1) throw std::invalid_argument("generate_gain_path: need n_slots >= 1");
    if (initial_gain >= channel.size())
        throw std::invalid_argument("generate_gain_path: initial gain out of range");

    std::vector<int> path(n_slots);
    if (initial_gain >= 0) {
        path[0] = initial_gain;
    } else {
        std::vector<double> pi = gain_stationary(channel);
        path[0] = stream.pick(pi);
    }
    for (long t = 1; t < n_slots; ++t) path[t] = channel_step(stream, path[t - 1], channel);
    return path;
}

Metrics run_policy_on_path(const SystemParams& params, const Policy& policy,
                           const std::vector<int>& gain_path, int e_initial, int window) {
    params.validate();
    if (static_cast<int>(policy.action.size()) != params.state_count())
        throw std::invalid_argument("run_policy: policy size does not match the state space");
    if (e_initial < 0 || e_initial > params.b_c)
        throw std::invalid_argument("run_policy: e_initial outside [0, B_c]");
    if (window < 1) throw std::invalid_argument("run_policy: window must be >= 1");
    if (gain_path.empty()) throw std::invalid_argument("run_policy: empty gain path");

    const long n = static_cast<long>(gain_path.size());
    const int ng = params.n_gains();

    std::vector<double> rate(ng);
    std::vector<int> harvested(ng);
    for (int y = 0; y < ng; ++y) {
        rate[y] = slot_rate(y, params);
        harvested[y] = harvested_units(y, params);
    }

    Metrics m;
    m.per_slot_rate.resize(n);
    std::vector<long> counts(params.b_c + 1, 0);

    int battery = e_initial;
    for (long t = 0; t < n; ++t) {
        const int y = gain_path[t];
        ++counts[battery];
        const Action a = policy.action[battery * ng + y];
        if (a == Action::Backscatter && battery < params.k_cost)
            throw std::logic_error("run_policy: policy backscatters below k_cost at slot " +
                                   std::to_string(t));
        if (a == Action::Backscatter) {
            m.per_slot_rate[t] = rate[y];
            ++m.backscatter_slots;
        } else {
            m.per_slot_rate[t] = 0.0;
            ++m.harvest_slots;
        }
        battery = battery_next(battery, a, harvested[y], params);
    }

    double total = 0.0;
    for (double r : m.per_slot_rate) total += r;
    m.mean_throughput = total / static_cast<double>(n);

    m.battery_histogram.resize(params.b_c + 1);
    for (int b = 0; b <= params.b_c; ++b)
        m.battery_histogram[b] = static_cast<double>(counts[b]) / static_cast<double>(n);

    if (n >= window) {
        m.rolling_average.resize(n - window + 1);
        double acc = 0.0;
        for (long t = 0; t < window; ++t) acc += m.per_slot_rate[t];
        m.rolling_average[0] = acc / window;
        for (long t = window; t < n; ++t) {
            acc += m.per_slot_rate[t] - m.per_slot_rate[t - window];
            m.rolling_average[t - window + 1] = acc / window;
        }
    }
    return m;
}

Metrics run_policy(const SystemParams& params, const GainMarkov& channel,
                   const Policy& policy, const SimOptions& options) {
    rng::Stream stream(options.seed, rng::StreamId::ChannelPath);
    std::vector<int> path =
        generate_gain_path(channel, options.n_slots, stream, options.initial_gain);
    return run_policy_on_path(params, policy, path, options.e_initial, options.window);
}

std::vector<PolicyComparison> compare_policies(
    const SystemParams& params, const GainMarkov& channel,
    const std::vector<std::pair<std::string, Policy>>& policies,
    const SimOptions& options) {
    rng::Stream stream(options.seed, rng::StreamId::Eval);
    std::vector<int> path =
        generate_gain_path(channel, options.n_slots, stream, options.initial_gain);

    std::vector<PolicyComparison> rows;
    rows.reserve(policies.size());
    for (const auto& [name, policy] : policies)
        rows.push_back({name, run_policy_on_path(params, policy, path, options.e_initial,
                                                 options.window)});
    return rows;
}

std::vector<SweepRow> sweep_power(const SystemParams& base, const GainMarkov& channel,
                                  const SweepConfig& config) {
    if (config.powers.empty()) throw std::invalid_argument("sweep_power: empty power list");
    for (double p : config.powers)
        if (!(p > 0.0)) throw std::invalid_argument("sweep_power: powers must be positive");

    // One channel realization shared by every (method, power) cell.
    rng::Stream eval_stream(config.sim.seed, rng::StreamId::Eval);
    std::vector<int> path = generate_gain_path(channel, config.sim.n_slots, eval_stream,
                                               config.sim.initial_gain);

    std::vector<SweepRow> rows;
    for (double p_t : config.powers) {
        SystemParams params = base;
        params.p_t = p_t;
        if (config.e0_auto) params.e0 = params.eta * params.gains[1] * params.p_t * params.t0;
        params.validate();

        MdpModel model = build_mdp(params, channel);
        SolveResult vi = value_iteration(model, params.gamma, config.theta);

        QLConfig ql_cfg = config.ql;
        ql_cfg.gamma = params.gamma;
        TrainResult ql = train_q_learning(params, channel, ql_cfg);

        Policy greedy = greedy_policy(params);

        const std::pair<std::string, const Policy*> methods[] = {
            {"vi", &vi.policy}, {"ql", &ql.policy}, {"greedy", &greedy}};
        for (const auto& [name, policy] : methods) {
            Metrics m = run_policy_on_path(params, *policy, path, config.sim.e_initial,
                                           config.sim.window);
            double analytic = long_run_average(model, *policy,
                                               config.sim.e_initial * params.n_gains());
            rows.push_back({p_t, name, m.mean_throughput, analytic});
        }
    }
    return rows;
}

}  // namespace abmdp
