#pragma once

#include "vbrpc/types.hpp"

namespace vbrpc {

/// Bits delivered in one slot: tau * sum_i Bc*log2(1 + P_i*gamma_i/(N0*Bc)).
/// Channels with zero gain contribute nothing regardless of power.
double slot_throughput(std::span<const double> powers, std::span<const double> gains,
                       const SystemParams& params);

/// Power needed to sustain rate C (bits/s) on one subchannel:
/// P = (2^(C/Bc) - 1) * N0*Bc/gamma.
double power_for_rate(double rate_bps, double gain, const SystemParams& params);

struct CumulativeCurves {
    std::vector<double> O;  ///< O(t) = sum_{i<t} F(i) + Fmax
    std::vector<double> U;  ///< U(t) = sum_{i<=t} F(i)
};

CumulativeCurves cumulative_curves(const VideoTrace& trace, const SystemParams& params);

/// Runs the buffer recursion D(t) = D(t-1) - F(t-1) + H(t) with D(0) = F(0) = 0.
/// Negative D (deficit) is reported as-is; feasibility is verify_schedule's job.
BufferTrajectory simulate_buffer(const PowerSchedule& schedule, const VideoTrace& trace,
                                 const SystemParams& params);

/// Checks X(t) >= U(t) for t < T, X(t) <= O(t) for all t, and the total-bits
/// equality |X(T) - U(T)| <= tol_bits. tol_bits < 0 selects the default
/// 1e-6 * Fmax.
FeasibilityReport verify_schedule(const PowerSchedule& schedule, const VideoTrace& trace,
                                  const SystemParams& params, double tol_bits = -1.0);

}  // namespace vbrpc
