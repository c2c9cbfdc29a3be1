#pragma once

#include <complex>

#include "vbrpc/types.hpp"

namespace vbrpc {

/// i.i.d. Rayleigh block fading: power gains exponential with mean G.
struct RayleighParams {
    double mean_gain = 2.0;  ///< G
    std::uint64_t seed = 0;
};

/// First-order Gauss-Markov fading h(j+1) = alpha*h(j) + n(j+1),
/// n ~ CN(0, (1-alpha^2)*sigma_h_sq), stationary variance sigma_h_sq.
struct GaussMarkovParams {
    double alpha = 0.99;
    double sigma_h_sq = 2.0;  ///< so |h|^2 is exponential with mean 2
    std::uint64_t seed = 0;
};

/// Complex fading coefficients plus their derived power gains |h|^2.
struct FadingPath {
    std::size_t channels = 0;
    std::size_t slots = 0;
    std::vector<std::complex<double>> h;  ///< slot-major like SlotMatrix
    ChannelGains gains;

    std::complex<double> coeff(std::size_t ch, std::size_t slot) const {
        return h[slot * channels + ch];
    }
};

/// Deterministic given the seed (mt19937_64 + inverse-CDF exponential draws;
/// bit-exact reproduction is guaranteed within one build, not across languages).
ChannelGains gen_rayleigh_iid(std::size_t M, std::size_t T, const RayleighParams& params);

/// Deterministic given the seed (mt19937_64 + Box-Muller complex Gaussians),
/// generated subchannel by subchannel.
FadingPath gen_gauss_markov(std::size_t M, std::size_t T, const GaussMarkovParams& params);

/// MMSE k-step prediction for the AR(1) model: alpha_hat^k * h_now.
std::complex<double> predict_mmse(std::complex<double> h_now, double alpha_hat, unsigned k);

}  // namespace vbrpc
