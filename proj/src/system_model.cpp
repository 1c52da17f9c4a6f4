#include "abmdp/system_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace abmdp {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void SystemParams::validate() const {
    require(finite_positive(eta) && eta <= 1.0, "system.eta: must be in (0,1]");
    require(finite_positive(p_t), "system.p_t: must be a positive power in watts");
    require(finite_positive(t0), "system.t0: must be a positive duration in seconds");
    require(finite_positive(r_b), "system.r_b: must be a positive rate in bits/s");
    require(finite_positive(mu) && mu <= 1.0, "system.mu: must be in (0,1]");
    require(n_s >= 1, "system.n_s: must be a positive sample count");
    require(finite_positive(delta0_sq), "system.delta0_sq: must be a positive variance in watts");
    require(finite_positive(delta1_sq), "system.delta1_sq: must be a positive variance in watts");
    require(std::isfinite(h) && h >= 0.0, "system.h: must be a non-negative gain");
    require(gains.size() >= 2, "system.gains: need at least two gain levels");
    for (std::size_t i = 0; i < gains.size(); ++i) {
        require(std::isfinite(gains[i]) && gains[i] >= 0.0,
                "system.gains: level " + std::to_string(i) + " must be finite and >= 0");
        if (i > 0)
            require(gains[i] > gains[i - 1], "system.gains: levels must be strictly increasing");
    }
    require(finite_positive(e0), "system.e0: must be a positive energy in joules");
    require(b_c >= 1, "system.b_c: battery capacity must be >= 1 unit");
    require(1 <= j_cost && j_cost < k_cost && k_cost < b_c,
            "system.j_cost/k_cost: require 1 <= j_cost < k_cost < b_c");
    require(finite_positive(gamma) && gamma <= 1.0, "system.gamma: must be in (0,1]");
}

int flat_index(const State& s, const SystemParams& p) {
    return s.battery_units * p.n_gains() + s.gain_index;
}

State state_from_index(int index, const SystemParams& p) {
    return State{index / p.n_gains(), index % p.n_gains()};
}

int harvested_units(int gain_index, const SystemParams& p) {
    if (gain_index < 0 || gain_index > p.y_max())
        throw std::invalid_argument("harvested_units: gain index out of range");
    long long u = std::llround(p.eta * p.gains[gain_index] * p.p_t * p.t0 / p.e0);
    if (u < 0) u = 0;
    if (u > p.y_max()) u = p.y_max();
    return static_cast<int>(u);
}

double ber(double gain_value, const SystemParams& p) {
    if (!std::isfinite(gain_value) || gain_value < 0.0)
        throw std::invalid_argument("ber: gain must be finite and >= 0");
    double arg = p.mu * p.mu * p.p_t * gain_value * p.h * std::sqrt(double(p.n_s)) /
                 (4.0 * (p.delta0_sq + p.delta1_sq));
    if (!std::isfinite(arg)) throw std::invalid_argument("ber: non-finite detector argument");
    return 0.5 * std::erfc(arg);
}

double bsc_capacity(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 0.5))
        throw std::invalid_argument("bsc_capacity: epsilon must lie in [0, 0.5]");
    double c = 1.0;
    if (epsilon > 0.0) c += epsilon * std::log2(epsilon);
    if (epsilon < 1.0) c += (1.0 - epsilon) * std::log2(1.0 - epsilon);
    if (c < 0.0) c = 0.0;  // round-off guard near epsilon = 0.5
    return c;
}

double slot_rate(int gain_index, const SystemParams& p) {
    if (gain_index < 0 || gain_index > p.y_max())
        throw std::invalid_argument("slot_rate: gain index out of range");
    return p.r_b * bsc_capacity(ber(p.gains[gain_index], p)) * p.t0;
}

int battery_next(int units, Action action, int harvested, const SystemParams& p) {
    if (units < 0 || units > p.b_c)
        throw std::invalid_argument("battery_next: units out of [0, B_c]");
    if (harvested < 0) throw std::invalid_argument("battery_next: negative harvest");
    if (action == Action::Backscatter && units < p.k_cost)
        throw std::invalid_argument("battery_next: backscatter infeasible below k_cost units");

    int next = 0;
    if (units < p.k_cost) {
        next = units - p.j_cost + harvested;
    } else if (action == Action::Backscatter) {
        next = p.backscatter_pays_j ? units - p.k_cost - p.j_cost : units - p.k_cost;
    } else {
        next = units - p.j_cost + harvested;
    }
    if (next < 0) next = 0;
    if (next > p.b_c) next = p.b_c;
    return next;
}

ActionSet feasible_actions(int battery_units, const SystemParams& p) {
    return ActionSet{battery_units >= p.k_cost};
}

}  // namespace abmdp
