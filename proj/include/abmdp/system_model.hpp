#pragma once

#include <vector>

namespace abmdp {

enum class Action : int { Harvest = 0, Backscatter = 1 };

/// The modes available to the tag at a given battery level. Harvest is
/// always allowed; backscatter only with at least k_cost units banked.
struct ActionSet {
    bool backscatter = false;

    bool allows(Action a) const { return a == Action::Harvest || backscatter; }
    int count() const { return backscatter ? 2 : 1; }
};

/// Physical and economic constants of the link, battery and objective.
struct SystemParams {
    double eta = 0.8;           // harvesting efficiency, (0,1]
    double p_t = 2.0;           // RF source power, W
    double t0 = 1.0;            // slot duration, s
    double r_b = 1e4;           // backscatter bit rate, bit/s
    double mu = 0.5;            // tag reflection coefficient, (0,1]
    int n_s = 100;              // receiver samples per transmitted bit
    double delta0_sq = 1e-10;   // receiver RF-circuit noise variance, W
    double delta1_sq = 1e-10;   // decoder noise variance, W
    double h = 5e-5;            // tag-to-receiver channel power gain
    std::vector<double> gains;  // gain levels G_0..G_Y, strictly increasing
    double e0 = 0.0;            // unit energy used for quantization, J
    int b_c = 9;                // battery capacity, units
    int j_cost = 1;             // harvesting-mode circuit cost, units
    int k_cost = 3;             // backscatter-mode cost, units
    double gamma = 0.9;         // discount factor, (0,1]
    bool backscatter_pays_j = true;  // backscatter pays j on top of k

    int n_gains() const { return static_cast<int>(gains.size()); }
    int y_max() const { return n_gains() - 1; }
    int state_count() const { return (b_c + 1) * n_gains(); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// MDP state: battery fill level paired with the quantized gain index.
struct State {
    int battery_units = 0;
    int gain_index = 0;
};

/// Row-major bijection onto {0, ..., (B_c+1)(Y+1)-1}.
int flat_index(const State& s, const SystemParams& p);
State state_from_index(int index, const SystemParams& p);

/// Units of energy banked when harvesting at gain level `gain_index`:
/// round(eta * G_i * P_t * T_0 / e0), clamped to {0, ..., Y}.
int harvested_units(int gain_index, const SystemParams& p);

/// Bit error probability of the energy detector at channel gain `gain_value`.
double ber(double gain_value, const SystemParams& p);

/// Capacity of a binary symmetric channel with crossover probability
/// `epsilon`, in bits per channel use. Defined on [0, 0.5] with 0*log0 = 0.
double bsc_capacity(double epsilon);

/// Bits deliverable in one slot when backscattering at gain level `gain_index`.
double slot_rate(int gain_index, const SystemParams& p);

/// Battery level after one slot, clamped to [0, B_c]. `harvested` is the
/// energy collected this slot; it is only banked in harvest mode.
int battery_next(int units, Action action, int harvested, const SystemParams& p);

ActionSet feasible_actions(int battery_units, const SystemParams& p);

inline ActionSet feasible_actions(const State& s, const SystemParams& p) {
    return feasible_actions(s.battery_units, p);
}

}  // namespace abmdp
