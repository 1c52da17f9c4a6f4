#pragma once

#include <vector>

#include "abmdp/rng.hpp"

namespace abmdp {

/// Row-stochastic transition matrix of the quantized channel gain.
/// Entry rows[i][j] is P(next gain = G_j | current gain = G_i).
struct GainMarkov {
    std::vector<std::vector<double>> rows;

    int size() const { return static_cast<int>(rows.size()); }
};

/// Throws std::invalid_argument unless every entry is in [0,1] and every
/// row sums to 1 within 1e-12. Messages name the row and the residual.
void validate_stochastic(const GainMarkov& matrix);

/// One gain transition drawn by inverse CDF over row `current`.
int channel_step(rng::Stream& stream, int current, const GainMarkov& matrix);

/// Stationary distribution by power iteration on the raw chain. Requires an
/// irreducible matrix (checked by strong connectivity); a periodic chain
/// surfaces as non-convergence. Result sums to 1 within 1e-10.
std::vector<double> gain_stationary(const GainMarkov& matrix, double tol = 1e-12,
                                    int max_iters = 1000000);

}  // namespace abmdp
