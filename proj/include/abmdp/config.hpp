#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abmdp/channel.hpp"
#include "abmdp/system_model.hpp"

namespace abmdp {

/// Everything a run needs, loadable from the line-oriented config format
/// (sections of `key = value` lines; the [channel] section holds bare rows
/// of transition probabilities). See the README for the exact grammar.
struct RunConfig {
    SystemParams system;  // includes the discount read from [solver] gamma
    bool e0_auto = true;  // e0 recomputed as eta * G_1 * P_t * T_0
    GainMarkov channel;

    double theta = 1e-9;

    double ql_alpha = 0.1;
    double ql_eps0 = 0.2;
    long ql_max_steps = 100000;

    long n_slots = 10000;
    int window = 1000;
    int e_initial = 0;
    std::uint64_t seed = 1;

    std::vector<double> sweep_powers;

    std::vector<double> detector_gains;
    long detector_bits = 100000;

    std::string output_dir = "out";

    // Informational [run] keys, written into manifests.
    std::string run_command_name;
    std::string run_method;
    std::string preset_name;

    /// Recomputes e0 when it is in auto mode. Call after changing p_t.
    void resolve_e0();
    /// Full cross-module validation; throws naming the offending key.
    void validate() const;
};

/// The bundled simulation preset: gain levels G_i = i * 3e-5 with the
/// zero-harvest level G_0 = 0, h = 5e-5, R_b = 10 kbit/s, B_c = 9, j = 1,
/// k = 3, unit energy in auto mode, and the bundled 5x5 gain chain.
RunConfig paper_sec4_preset();

/// Applies a config file on top of `base`. Unknown sections or keys throw.
RunConfig parse_config(const std::string& text, RunConfig base);

RunConfig load_config_file(const std::string& path, RunConfig base);

/// Canonical serialization; parsing it back reproduces the config exactly.
/// `with_run_section` adds the informational [run] block for manifests.
std::string serialize_config(const RunConfig& config, bool with_run_section);

}  // namespace abmdp
