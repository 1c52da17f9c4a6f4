#include "abmdp/detector.hpp"

#include <cmath>
#include <stdexcept>

#include "abmdp/rng.hpp"

namespace abmdp {

DetectorResult detector_ber_mc(const DetectorConfig& config) {
    const SystemParams& p = config.params;
    if (!(std::isfinite(config.gain_value) && config.gain_value >= 0.0))
        throw std::invalid_argument("detector: gain must be finite and >= 0");
    if (p.n_s < 1) throw std::invalid_argument("detector: n_s must be >= 1");
    if (config.bits < 1) throw std::invalid_argument("detector: need at least one trial");
    if (!(p.p_t > 0.0 && p.delta0_sq > 0.0 && p.delta1_sq > 0.0 && p.h >= 0.0 &&
          p.mu >= 0.0 && p.mu <= 1.0))
        throw std::invalid_argument("detector: invalid physical parameters");

    const double g = config.gain_value;
    const double alpha_sr = std::sqrt(g);  // source->receiver, taken equal to source->tag
    const double alpha_path1 = alpha_sr + p.mu * std::sqrt(g) * std::sqrt(p.h);

    // Conditional means of Z = (1/N_s) sum |y|^2; the threshold sits halfway.
    const double mean0 = p.p_t * g + p.delta0_sq + p.delta1_sq;
    const double mean1 = p.p_t * alpha_path1 * alpha_path1 + p.delta0_sq + p.delta1_sq;
    const double threshold = 0.5 * (mean0 + mean1);

    const double sig_x = std::sqrt(0.5 * p.p_t);        // per-component signal deviation
    const double sig_n0 = std::sqrt(0.5 * p.delta0_sq);
    const double sig_n1 = std::sqrt(0.5 * p.delta1_sq);

    rng::Stream stream(config.seed, rng::StreamId::Detector);

    long errors = 0;
    double zsum[2] = {0.0, 0.0};
    double zsq[2] = {0.0, 0.0};
    long count[2] = {0, 0};

    for (long trial = 0; trial < config.bits; ++trial) {
        const int d = stream.uniform01() < 0.5 ? 0 : 1;
        const double a = d == 1 ? alpha_path1 : alpha_sr;

        double acc = 0.0;
        for (int i = 0; i < p.n_s; ++i) {
            const double yr = a * (sig_x * stream.normal()) + sig_n0 * stream.normal() +
                              sig_n1 * stream.normal();
            const double yi = a * (sig_x * stream.normal()) + sig_n0 * stream.normal() +
                              sig_n1 * stream.normal();
            acc += yr * yr + yi * yi;
        }
        const double z = acc / p.n_s;

        const int decided = z >= threshold ? 1 : 0;
        if (decided != d) ++errors;
        zsum[d] += z;
        zsq[d] += z * z;
        ++count[d];
    }

    DetectorResult out;
    out.ber_mc = static_cast<double>(errors) / static_cast<double>(config.bits);
    out.std_err = std::sqrt(out.ber_mc * (1.0 - out.ber_mc) / config.bits);
    out.bits_0 = count[0];
    out.bits_1 = count[1];
    for (int d = 0; d < 2; ++d) {
        if (count[d] == 0) continue;
        const double mean = zsum[d] / count[d];
        const double var = zsq[d] / count[d] - mean * mean;
        if (d == 0) {
            out.z_mean_0 = mean;
            out.z_var_0 = var;
        } else {
            out.z_mean_1 = mean;
            out.z_var_1 = var;
        }
    }
    return out;
}

}  // namespace abmdp
