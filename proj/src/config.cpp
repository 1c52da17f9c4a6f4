#include "abmdp/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abmdp {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + ": cannot parse number '" + v + "'");
    }
}

long parse_long(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        long d = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + ": cannot parse integer '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        unsigned long long d = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: " + key + ": cannot parse integer '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: " + key + ": expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    if (out.empty()) throw std::invalid_argument("config: " + key + ": empty list");
    return out;
}

// Shortest decimal form that parses back to exactly the same double.
std::string fmt_double(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::stod(buf) == v) break;
    }
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt_double(v[i]);
    }
    return out;
}

}  // namespace

void RunConfig::resolve_e0() {
    if (e0_auto) {
        if (system.gains.size() < 2)
            throw std::invalid_argument("config: e0 = auto needs at least two gain levels");
        system.e0 = system.eta * system.gains[1] * system.p_t * system.t0;
    }
}

void RunConfig::validate() const {
    system.validate();
    validate_stochastic(channel);
    if (channel.size() != system.n_gains())
        throw std::invalid_argument(
            "config: [channel] row count must equal the number of gain levels");
    if (!(theta > 0.0)) throw std::invalid_argument("config: solver.theta must be positive");
    if (!(system.gamma > 0.0 && system.gamma < 1.0))
        throw std::invalid_argument("config: solver.gamma must lie in (0,1) for the solvers");
    if (!(ql_alpha > 0.0 && ql_alpha <= 1.0))
        throw std::invalid_argument("config: ql.alpha must lie in (0,1]");
    if (!(ql_eps0 >= 0.0 && ql_eps0 <= 1.0))
        throw std::invalid_argument("config: ql.eps0 must lie in [0,1]");
    if (ql_max_steps < 1) throw std::invalid_argument("config: ql.max_steps must be >= 1");
    if (n_slots < 1) throw std::invalid_argument("config: sim.n_slots must be >= 1");
    if (window < 1) throw std::invalid_argument("config: sim.window must be >= 1");
    if (e_initial < 0 || e_initial > system.b_c)
        throw std::invalid_argument("config: sim.e_initial must lie in [0, b_c]");
    if (sweep_powers.empty())
        throw std::invalid_argument("config: sweep.powers must not be empty");
    for (double p : sweep_powers)
        if (!(p > 0.0)) throw std::invalid_argument("config: sweep.powers must be positive");
    if (detector_gains.empty())
        throw std::invalid_argument("config: detector.gains_to_check must not be empty");
    for (double g : detector_gains)
        if (!(g >= 0.0)) throw std::invalid_argument("config: detector gains must be >= 0");
    if (detector_bits < 1) throw std::invalid_argument("config: detector.bits must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("config: output.dir must not be empty");
}

RunConfig paper_sec4_preset() {
    RunConfig c;
    c.preset_name = "paper-sec4";
    c.system.eta = 0.8;
    c.system.p_t = 2.0;
    c.system.t0 = 1.0;
    c.system.r_b = 1e4;
    c.system.mu = 0.5;
    c.system.n_s = 100;
    c.system.delta0_sq = 1e-10;
    // Decoder noise dominates the budget; at 1e-8 W the BER stays off its
    // floor over the whole 1..2.5 W source-power range.
    c.system.delta1_sq = 1e-8;
    c.system.h = 5e-5;
    c.system.gains = {0.0, 3e-5, 6e-5, 9e-5, 12e-5};
    c.system.b_c = 9;
    c.system.j_cost = 1;
    c.system.k_cost = 3;
    c.system.gamma = 0.9;
    c.system.backscatter_pays_j = true;
    c.e0_auto = true;
    c.channel.rows = {{0.40, 0.30, 0.15, 0.10, 0.05},
                      {0.05, 0.40, 0.30, 0.15, 0.10},
                      {0.10, 0.05, 0.40, 0.30, 0.15},
                      {0.15, 0.10, 0.05, 0.40, 0.30},
                      {0.30, 0.15, 0.10, 0.05, 0.40}};
    c.theta = 1e-9;
    c.ql_alpha = 0.1;
    c.ql_eps0 = 0.2;
    c.ql_max_steps = 100000;
    c.n_slots = 10000;
    c.window = 1000;
    c.e_initial = 0;
    c.seed = 2;
    c.sweep_powers = {1.0, 1.5, 2.0, 2.5};
    c.detector_gains = {3e-5};
    c.detector_bits = 100000;
    c.output_dir = "out";
    c.resolve_e0();
    return c;
}

RunConfig parse_config(const std::string& text, RunConfig base) {
    RunConfig c = std::move(base);
    std::istringstream in(text);
    std::string raw;
    std::string section;
    bool channel_reset = false;
    bool gains_set = false;

    while (std::getline(in, raw)) {
        std::string line = raw;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "channel" && section != "solver" &&
                section != "ql" && section != "sim" && section != "sweep" &&
                section != "detector" && section != "output" && section != "run")
                throw std::invalid_argument("config: unknown section [" + section + "]");
            continue;
        }

        if (section == "channel") {
            if (line.find('=') != std::string::npos)
                throw std::invalid_argument(
                    "config: [channel] holds bare probability rows, found '" + line + "'");
            if (!channel_reset) {
                c.channel.rows.clear();
                channel_reset = true;
            }
            c.channel.rows.push_back(parse_list("channel row", line));
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string qual = section + "." + key;

        if (section == "system") {
            if (key == "eta") c.system.eta = parse_double(qual, value);
            else if (key == "p_t") c.system.p_t = parse_double(qual, value);
            else if (key == "t0") c.system.t0 = parse_double(qual, value);
            else if (key == "r_b") c.system.r_b = parse_double(qual, value);
            else if (key == "mu") c.system.mu = parse_double(qual, value);
            else if (key == "n_s") c.system.n_s = static_cast<int>(parse_long(qual, value));
            else if (key == "delta0_sq") c.system.delta0_sq = parse_double(qual, value);
            else if (key == "delta1_sq") c.system.delta1_sq = parse_double(qual, value);
            else if (key == "h") c.system.h = parse_double(qual, value);
            else if (key == "gains") {
                c.system.gains = parse_list(qual, value);
                gains_set = true;
            } else if (key == "e0") {
                if (value == "auto") {
                    c.e0_auto = true;
                } else {
                    c.e0_auto = false;
                    c.system.e0 = parse_double(qual, value);
                }
            } else if (key == "b_c") c.system.b_c = static_cast<int>(parse_long(qual, value));
            else if (key == "j_cost") c.system.j_cost = static_cast<int>(parse_long(qual, value));
            else if (key == "k_cost") c.system.k_cost = static_cast<int>(parse_long(qual, value));
            else if (key == "backscatter_pays_j")
                c.system.backscatter_pays_j = parse_bool(qual, value);
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "solver") {
            if (key == "gamma") c.system.gamma = parse_double(qual, value);
            else if (key == "theta") c.theta = parse_double(qual, value);
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "ql") {
            if (key == "alpha") c.ql_alpha = parse_double(qual, value);
            else if (key == "eps0") c.ql_eps0 = parse_double(qual, value);
            else if (key == "max_steps") c.ql_max_steps = parse_long(qual, value);
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "sim") {
            if (key == "n_slots") c.n_slots = parse_long(qual, value);
            else if (key == "window") c.window = static_cast<int>(parse_long(qual, value));
            else if (key == "e_initial") c.e_initial = static_cast<int>(parse_long(qual, value));
            else if (key == "seed") c.seed = parse_u64(qual, value);
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "sweep") {
            if (key == "powers") c.sweep_powers = parse_list(qual, value);
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "detector") {
            if (key == "gains_to_check") c.detector_gains = parse_list(qual, value);
            else if (key == "bits") c.detector_bits = parse_long(qual, value);
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "output") {
            if (key == "dir") c.output_dir = value;
            else throw std::invalid_argument("config: unknown key " + qual);
        } else if (section == "run") {
            if (key == "command") c.run_command_name = value;
            else if (key == "method") c.run_method = value;
            else if (key == "preset") c.preset_name = value;
            else if (key == "tool_version") { /* informational */ }
            else throw std::invalid_argument("config: unknown key " + qual);
        } else {
            throw std::invalid_argument("config: key '" + key + "' outside any section");
        }
    }

    if (gains_set && !channel_reset && c.channel.size() != c.system.n_gains())
        throw std::invalid_argument(
            "config: gains were changed but [channel] was not; dimensions now disagree");
    c.resolve_e0();
    return c;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

std::string serialize_config(const RunConfig& config, bool with_run_section) {
    std::ostringstream out;
    const SystemParams& s = config.system;
    out << "[system]\n";
    out << "eta = " << fmt_double(s.eta) << "\n";
    out << "p_t = " << fmt_double(s.p_t) << "\n";
    out << "t0 = " << fmt_double(s.t0) << "\n";
    out << "r_b = " << fmt_double(s.r_b) << "\n";
    out << "mu = " << fmt_double(s.mu) << "\n";
    out << "n_s = " << s.n_s << "\n";
    out << "delta0_sq = " << fmt_double(s.delta0_sq) << "\n";
    out << "delta1_sq = " << fmt_double(s.delta1_sq) << "\n";
    out << "h = " << fmt_double(s.h) << "\n";
    out << "gains = " << fmt_list(s.gains) << "\n";
    if (config.e0_auto)
        out << "e0 = auto  # resolves to " << fmt_double(s.e0) << "\n";
    else
        out << "e0 = " << fmt_double(s.e0) << "\n";
    out << "b_c = " << s.b_c << "\n";
    out << "j_cost = " << s.j_cost << "\n";
    out << "k_cost = " << s.k_cost << "\n";
    out << "backscatter_pays_j = " << (s.backscatter_pays_j ? "true" : "false") << "\n";

    out << "\n[channel]\n";
    for (const auto& row : config.channel.rows) out << fmt_list(row) << "\n";

    out << "\n[solver]\n";
    out << "gamma = " << fmt_double(s.gamma) << "\n";
    out << "theta = " << fmt_double(config.theta) << "\n";

    out << "\n[ql]\n";
    out << "alpha = " << fmt_double(config.ql_alpha) << "\n";
    out << "eps0 = " << fmt_double(config.ql_eps0) << "\n";
    out << "max_steps = " << config.ql_max_steps << "\n";

    out << "\n[sim]\n";
    out << "n_slots = " << config.n_slots << "\n";
    out << "window = " << config.window << "\n";
    out << "e_initial = " << config.e_initial << "\n";
    out << "seed = " << config.seed << "\n";

    out << "\n[sweep]\n";
    out << "powers = " << fmt_list(config.sweep_powers) << "\n";

    out << "\n[detector]\n";
    out << "gains_to_check = " << fmt_list(config.detector_gains) << "\n";
    out << "bits = " << config.detector_bits << "\n";

    out << "\n[output]\n";
    out << "dir = " << config.output_dir << "\n";

    if (with_run_section) {
        out << "\n[run]\n";
        out << "tool_version = 1\n";
        if (!config.run_command_name.empty()) out << "command = " << config.run_command_name << "\n";
        if (!config.run_method.empty()) out << "method = " << config.run_method << "\n";
        if (!config.preset_name.empty()) out << "preset = " << config.preset_name << "\n";
    }
    return out.str();
}

}  // namespace abmdp
