#include "abmdp/channel.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace abmdp {

void validate_stochastic(const GainMarkov& matrix) {
    const int n = matrix.size();
    if (n == 0) throw std::invalid_argument("channel: matrix is empty");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(matrix.rows[i].size()) != n)
            throw std::invalid_argument("channel: matrix must be square, row " +
                                        std::to_string(i) + " has wrong length");
        double sum = 0.0;
        for (double v : matrix.rows[i]) {
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("channel: entry outside [0,1] in row " +
                                            std::to_string(i));
            sum += v;
        }
        double residual = sum - 1.0;
        if (std::abs(residual) > 1e-12)
            throw std::invalid_argument("channel: row " + std::to_string(i) +
                                        " sums to 1 with residual " + std::to_string(residual));
    }
}

int channel_step(rng::Stream& stream, int current, const GainMarkov& matrix) {
    if (current < 0 || current >= matrix.size())
        throw std::invalid_argument("channel_step: gain index out of range");
    return stream.pick(matrix.rows[current]);
}

namespace {

// Strong connectivity of the positive-entry digraph: forward and backward
// reachability from state 0 must each cover the whole chain.
bool strongly_connected(const GainMarkov& m) {
    const int n = m.size();
    auto reach = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{0};
        seen[0] = true;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v) {
                double p = forward ? m.rows[u][v] : m.rows[v][u];
                if (p > 0.0 && !seen[v]) {
                    seen[v] = true;
                    ++count;
                    stack.push_back(v);
                }
            }
        }
        return count == n;
    };
    return reach(true) && reach(false);
}

}  // namespace

std::vector<double> gain_stationary(const GainMarkov& matrix, double tol, int max_iters) {
    validate_stochastic(matrix);
    const int n = matrix.size();
    if (!strongly_connected(matrix))
        throw std::invalid_argument("gain_stationary: chain is reducible");

    std::vector<double> pi(n, 1.0 / n), next(n, 0.0);
    for (int iter = 0; iter < max_iters; ++iter) {
        for (int j = 0; j < n; ++j) next[j] = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) next[j] += pi[i] * matrix.rows[i][j];
        double norm = 0.0;
        for (double v : next) norm += v;
        for (double& v : next) v /= norm;
        double delta = 0.0;
        for (int j = 0; j < n; ++j) delta = std::max(delta, std::abs(next[j] - pi[j]));
        pi.swap(next);
        if (delta < tol) return pi;
    }
    throw std::runtime_error(
        "gain_stationary: power iteration did not converge (reducible or periodic chain)");
}

}  // namespace abmdp
