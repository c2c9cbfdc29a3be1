#include "vbrpc/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace vbrpc {

namespace {

// 53-bit uniform in [0, 1).
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One standard complex Gaussian via Box-Muller; no cached state, so draw
// order is easy to reason about.
std::complex<double> next_std_complex_gaussian(std::mt19937_64& rng) {
    const double u1 = 1.0 - next_uniform(rng);  // (0, 1], keeps log finite
    const double u2 = next_uniform(rng);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

ChannelGains gen_rayleigh_iid(std::size_t M, std::size_t T, const RayleighParams& params) {
    if (M < 1 || T < 1) throw InvalidInput("gen_rayleigh_iid: M and T must be >= 1");
    if (!(params.mean_gain > 0.0)) throw InvalidInput("gen_rayleigh_iid: G must be > 0");
    std::mt19937_64 rng(params.seed);
    ChannelGains ch;
    ch.gains = SlotMatrix(M, T);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t t = 0; t < T; ++t) {
            const double u = next_uniform(rng);  // u < 1, so the log stays finite
            ch.gains.at(i, t) = -params.mean_gain * std::log(1.0 - u);
        }
    }
    return ch;
}

FadingPath gen_gauss_markov(std::size_t M, std::size_t T, const GaussMarkovParams& params) {
    if (M < 1 || T < 1) throw InvalidInput("gen_gauss_markov: M and T must be >= 1");
    if (!(params.alpha > 0.0 && params.alpha < 1.0))
        throw InvalidInput("gen_gauss_markov: alpha must lie in (0, 1)");
    if (!(params.sigma_h_sq > 0.0))
        throw InvalidInput("gen_gauss_markov: sigma_h_sq must be > 0");

    std::mt19937_64 rng(params.seed);
    FadingPath path;
    path.channels = M;
    path.slots = T;
    path.h.resize(M * T);
    path.gains.gains = SlotMatrix(M, T);

    const double init_scale = std::sqrt(params.sigma_h_sq / 2.0);
    const double drive_scale =
        std::sqrt((1.0 - params.alpha * params.alpha) * params.sigma_h_sq / 2.0);
    for (std::size_t i = 0; i < M; ++i) {
        std::complex<double> h = init_scale * next_std_complex_gaussian(rng);
        for (std::size_t t = 0; t < T; ++t) {
            if (t > 0) h = params.alpha * h + drive_scale * next_std_complex_gaussian(rng);
            path.h[t * M + i] = h;
            path.gains.gains.at(i, t) = std::norm(h);
        }
    }
    return path;
}

std::complex<double> predict_mmse(std::complex<double> h_now, double alpha_hat, unsigned k) {
    if (!(alpha_hat > 0.0 && alpha_hat <= 1.0))
        throw InvalidInput("predict_mmse: alpha_hat must lie in (0, 1]");
    return std::pow(alpha_hat, static_cast<double>(k)) * h_now;
}

}  // namespace vbrpc
