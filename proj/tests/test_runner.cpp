#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "abmdp/runner.hpp"

using namespace abmdp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

long line_count(const std::string& text) {
    long n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

RunConfig quick_config(const std::string& outdir) {
    RunConfig c = paper_sec4_preset();
    c.output_dir = outdir;
    c.ql_max_steps = 20000;  // keep file-producing tests quick
    c.n_slots = 4000;
    c.detector_bits = 5000;
    return c;
}

}  // namespace

TEST_CASE("solve writes one policy row per state plus a manifest") {
    TempDir dir("abmdp_test_solve");
    REQUIRE(run_command("solve", quick_config(dir.str())) == 0);

    std::string policy = slurp(dir.path / "policy.csv");
    CHECK(line_count(policy) == 51);  // header + 50 states
    CHECK(policy.rfind("state_index,battery_units,gain_index,value,action", 0) == 0);
    CHECK(fs::exists(dir.path / "manifest.cfg"));
}

TEST_CASE("train emits the q-table and the learning curve") {
    TempDir dir("abmdp_test_train");
    RunConfig c = quick_config(dir.str());
    REQUIRE(run_command("train", c) == 0);
    std::string qtable = slurp(dir.path / "qtable.csv");
    CHECK(line_count(qtable) == 51);
    std::string curve = slurp(dir.path / "learning_curve.csv");
    CHECK(line_count(curve) == 1 + c.ql_max_steps - c.window + 1);
}

TEST_CASE("simulate twice from the same manifest is byte-identical") {
    TempDir first("abmdp_test_sim1");
    RunConfig c = quick_config(first.str());
    c.run_method = "greedy";
    REQUIRE(run_command("simulate", c) == 0);

    // Reconstruct the second run purely from the manifest.
    TempDir second("abmdp_test_sim2");
    RunConfig replay = load_config_file((first.path / "manifest.cfg").string(),
                                        paper_sec4_preset());
    CHECK(replay.run_command_name == "simulate");
    CHECK(replay.run_method == "greedy");
    replay.output_dir = second.str();
    REQUIRE(run_command(replay.run_command_name, replay) == 0);

    for (const char* name : {"battery_hist.csv", "summary.csv"})
        CHECK(slurp(first.path / name) == slurp(second.path / name));
}

TEST_CASE("sweep covers every power and method") {
    TempDir dir("abmdp_test_sweep");
    RunConfig c = quick_config(dir.str());
    c.sweep_powers = {1.0, 2.5};
    REQUIRE(run_command("sweep", c) == 0);
    std::string sweep = slurp(dir.path / "sweep.csv");
    CHECK(line_count(sweep) == 1 + 2 * 3);
    CHECK(sweep.rfind("p_t,method,mean_throughput_bits_per_slot", 0) == 0);
    CHECK(fs::exists(dir.path / "sweep_analytic.csv"));
}

TEST_CASE("detector-check writes the documented columns") {
    TempDir dir("abmdp_test_det");
    RunConfig c = quick_config(dir.str());
    c.detector_gains = {3e-5, 6e-5};
    REQUIRE(run_command("detector-check", c) == 0);
    std::string csv = slurp(dir.path / "detector.csv");
    CHECK(csv.rfind("g,h,p_t,mu,n_s,bits,ber_mc,stderr,ber_formula,z_mean_0,z_mean_1", 0) == 0);
    CHECK(line_count(csv) == 3);
}

TEST_CASE("invalid configuration fails with a nonzero status") {
    TempDir dir("abmdp_test_bad");
    RunConfig c = quick_config(dir.str());
    c.system.k_cost = 99;
    CHECK(run_command("solve", c) != 0);
    CHECK(run_command("no-such-command", quick_config(dir.str())) != 0);
}

TEST_CASE("command line front end parses overrides") {
    TempDir dir("abmdp_test_cli");
    std::string out = dir.str();
    const char* argv[] = {"abmdp",  "solve",      "--pt",     "1.5",
                          "--seed", "42",         "--output", out.c_str(),
                          "--gamma", "0.85"};
    CHECK(cli_main(10, argv) == 0);
    std::string manifest = slurp(dir.path / "manifest.cfg");
    CHECK(manifest.find("p_t = 1.5") != std::string::npos);
    CHECK(manifest.find("seed = 42") != std::string::npos);
    CHECK(manifest.find("gamma = 0.85") != std::string::npos);
    CHECK(manifest.find("command = solve") != std::string::npos);

    const char* bad[] = {"abmdp", "solve", "--preset", "unknown"};
    CHECK(cli_main(4, bad) != 0);
}
