#include "abmdp/runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "abmdp/agents.hpp"
#include "abmdp/csv.hpp"
#include "abmdp/detector.hpp"
#include "abmdp/mdp.hpp"
#include "abmdp/sim.hpp"

namespace abmdp {

namespace {

namespace fs = std::filesystem;

void write_manifest(const RunConfig& config) {
    std::ofstream out(fs::path(config.output_dir) / "manifest.cfg", std::ios::binary);
    if (!out) throw std::runtime_error("runner: cannot write manifest in " + config.output_dir);
    out << serialize_config(config, /*with_run_section=*/true);
}

QLConfig ql_config_of(const RunConfig& c) {
    QLConfig q;
    q.alpha = c.ql_alpha;
    q.eps0 = c.ql_eps0;
    q.max_steps = c.ql_max_steps;
    q.gamma = c.system.gamma;
    q.seed = c.seed;
    return q;
}

Policy policy_for_method(const RunConfig& c, const std::string& method) {
    if (method == "greedy") return greedy_policy(c.system);
    if (method == "ql") return train_q_learning(c.system, c.channel, ql_config_of(c)).policy;
    if (method == "vi") {
        MdpModel model = build_mdp(c.system, c.channel);
        return value_iteration(model, c.system.gamma, c.theta).policy;
    }
    throw std::invalid_argument("runner: unknown method '" + method +
                                "' (expected vi, ql or greedy)");
}

void write_policy_csv(const RunConfig& c, const ValueFunction& value, const Policy& policy,
                      const std::string& path) {
    csv::Writer w(path, "state_index,battery_units,gain_index,value,action");
    for (int s = 0; s < c.system.state_count(); ++s) {
        State st = state_from_index(s, c.system);
        w.row(std::to_string(s) + "," + std::to_string(st.battery_units) + "," +
              std::to_string(st.gain_index) + "," + csv::num(value[s]) + "," +
              std::to_string(static_cast<int>(policy.action[s])));
    }
}

std::vector<double> rolling_means(const std::vector<double>& trace, int window) {
    std::vector<double> out;
    const long n = static_cast<long>(trace.size());
    if (n < window) return out;
    out.resize(n - window + 1);
    double acc = 0.0;
    for (long t = 0; t < window; ++t) acc += trace[t];
    out[0] = acc / window;
    for (long t = window; t < n; ++t) {
        acc += trace[t] - trace[t - window];
        out[t - window + 1] = acc / window;
    }
    return out;
}

int cmd_solve(const RunConfig& c) {
    MdpModel model = build_mdp(c.system, c.channel);
    SolveResult vi = value_iteration(model, c.system.gamma, c.theta);
    write_policy_csv(c, vi.value, vi.policy, (fs::path(c.output_dir) / "policy.csv").string());
    std::cout << "solve: states=" << model.n_states << " sweeps=" << vi.sweeps
              << " final_delta=" << csv::num(vi.final_delta)
              << " bellman_residual=" << csv::num(vi.bellman_residual) << "\n";
    return 0;
}

int cmd_train(const RunConfig& c) {
    TrainResult tr = train_q_learning(c.system, c.channel, ql_config_of(c));

    csv::Writer qcsv((fs::path(c.output_dir) / "qtable.csv").string(),
                     "state_index,battery_units,gain_index,q_harvest,q_backscatter,chosen_action");
    for (int s = 0; s < c.system.state_count(); ++s) {
        State st = state_from_index(s, c.system);
        qcsv.row(std::to_string(s) + "," + std::to_string(st.battery_units) + "," +
                 std::to_string(st.gain_index) + "," + csv::num(tr.q.q[s][0]) + "," +
                 csv::num(tr.q.q[s][1]) + "," +
                 std::to_string(static_cast<int>(tr.policy.action[s])));
    }

    csv::Writer curve((fs::path(c.output_dir) / "learning_curve.csv").string(),
                      "step,rolling_avg_bits");
    std::vector<double> roll = rolling_means(tr.reward_trace, c.window);
    for (std::size_t i = 0; i < roll.size(); ++i)
        curve.row(std::to_string(c.window + static_cast<long>(i)) + "," + csv::num(roll[i]));

    double mean = 0.0;
    for (double r : tr.reward_trace) mean += r;
    mean /= static_cast<double>(tr.reward_trace.size());
    std::cout << "train: steps=" << c.ql_max_steps << " mean_reward_bits=" << csv::num(mean)
              << "\n";
    return 0;
}

int cmd_simulate(const RunConfig& c) {
    const std::string method = c.run_method.empty() ? "vi" : c.run_method;
    Policy policy = policy_for_method(c, method);
    SimOptions opt{c.n_slots, c.window, c.e_initial, c.seed, -1};
    Metrics m = run_policy(c.system, c.channel, policy, opt);

    csv::Writer hist((fs::path(c.output_dir) / "battery_hist.csv").string(),
                     "method,level,probability");
    for (int b = 0; b <= c.system.b_c; ++b)
        hist.row(method + "," + std::to_string(b) + "," + csv::num(m.battery_histogram[b]));

    csv::Writer summary((fs::path(c.output_dir) / "summary.csv").string(),
                        "method,n_slots,mean_throughput_bits_per_slot,harvest_slots,"
                        "backscatter_slots");
    summary.row(method + "," + std::to_string(c.n_slots) + "," + csv::num(m.mean_throughput) +
                "," + std::to_string(m.harvest_slots) + "," +
                std::to_string(m.backscatter_slots));

    std::cout << "simulate: method=" << method
              << " mean_throughput=" << csv::num(m.mean_throughput) << " bits/slot\n";
    return 0;
}

int cmd_sweep(const RunConfig& c) {
    SweepConfig sc;
    sc.powers = c.sweep_powers;
    sc.theta = c.theta;
    sc.ql = ql_config_of(c);
    sc.sim = SimOptions{c.n_slots, c.window, c.e_initial, c.seed, -1};
    sc.e0_auto = c.e0_auto;
    std::vector<SweepRow> rows = sweep_power(c.system, c.channel, sc);

    csv::Writer sweep((fs::path(c.output_dir) / "sweep.csv").string(),
                      "p_t,method,mean_throughput_bits_per_slot");
    csv::Writer analytic((fs::path(c.output_dir) / "sweep_analytic.csv").string(),
                         "p_t,method,analytic_mean_throughput_bits_per_slot");
    for (const SweepRow& r : rows) {
        sweep.row(csv::num(r.p_t) + "," + r.method + "," + csv::num(r.mean_throughput));
        analytic.row(csv::num(r.p_t) + "," + r.method + "," + csv::num(r.analytic_average));
    }
    std::cout << "sweep: " << rows.size() << " rows over " << c.sweep_powers.size()
              << " powers\n";
    return 0;
}

int cmd_detector_check(const RunConfig& c) {
    csv::Writer w((fs::path(c.output_dir) / "detector.csv").string(),
                  "g,h,p_t,mu,n_s,bits,ber_mc,stderr,ber_formula,z_mean_0,z_mean_1");
    for (double g : c.detector_gains) {
        DetectorConfig dc{g, c.system, c.detector_bits, c.seed};
        DetectorResult r = detector_ber_mc(dc);
        w.row(csv::num(g) + "," + csv::num(c.system.h) + "," + csv::num(c.system.p_t) + "," +
              csv::num(c.system.mu) + "," + std::to_string(c.system.n_s) + "," +
              std::to_string(c.detector_bits) + "," + csv::num(r.ber_mc) + "," +
              csv::num(r.std_err) + "," + csv::num(ber(g, c.system)) + "," +
              csv::num(r.z_mean_0) + "," + csv::num(r.z_mean_1));
    }
    std::cout << "detector-check: " << c.detector_gains.size() << " gain points, "
              << c.detector_bits << " bits each\n";
    return 0;
}

}  // namespace

int run_command(const std::string& command, RunConfig config) {
    try {
        config.run_command_name = command;
        config.resolve_e0();
        config.validate();
        fs::create_directories(config.output_dir);
        write_manifest(config);

        if (command == "solve") return cmd_solve(config);
        if (command == "train") return cmd_train(config);
        if (command == "simulate") return cmd_simulate(config);
        if (command == "sweep") return cmd_sweep(config);
        if (command == "detector-check") return cmd_detector_check(config);
        std::cerr << "error: unknown command '" << command << "'\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Ambient-backscatter mode selection: exact MDP solver, Q-learning agent "
                 "and slot-level experiment harness"};
    app.require_subcommand(1);

    struct Flags {
        std::string config_path;
        std::string preset = "paper-sec4";
        std::string output;
        std::string method;
        bool has_seed = false, has_pt = false, has_gamma = false;
        std::uint64_t seed = 0;
        double pt = 0.0, gamma = 0.0;
    } flags;

    std::vector<std::pair<std::string, CLI::App*>> commands;
    for (const char* name : {"solve", "train", "simulate", "sweep", "detector-check"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", flags.config_path, "config file applied on top of the preset");
        sub->add_option("--preset", flags.preset, "bundled preset name (paper-sec4)");
        sub->add_option("--output", flags.output, "output directory");
        sub->add_option("--seed", flags.seed, "RNG seed")->each([&](const std::string&) {
            flags.has_seed = true;
        });
        sub->add_option("--pt", flags.pt, "source power in watts")->each([&](const std::string&) {
            flags.has_pt = true;
        });
        sub->add_option("--gamma", flags.gamma, "discount factor")->each([&](const std::string&) {
            flags.has_gamma = true;
        });
        if (std::string(name) == "simulate")
            sub->add_option("--method", flags.method, "policy to run: vi, ql or greedy");
        commands.emplace_back(name, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (flags.preset != "paper-sec4")
            throw std::invalid_argument("unknown preset '" + flags.preset + "'");
        RunConfig config = paper_sec4_preset();
        if (!flags.config_path.empty()) config = load_config_file(flags.config_path, config);

        // Command-line overrides win over the file; the manifest records the
        // post-override values.
        if (flags.has_pt) config.system.p_t = flags.pt;
        if (flags.has_gamma) config.system.gamma = flags.gamma;
        if (flags.has_seed) config.seed = flags.seed;
        if (!flags.output.empty()) config.output_dir = flags.output;
        if (!flags.method.empty()) config.run_method = flags.method;
        config.resolve_e0();

        for (const auto& [name, sub] : commands)
            if (sub->parsed()) return run_command(name, std::move(config));
        std::cerr << "error: no command given\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace abmdp
