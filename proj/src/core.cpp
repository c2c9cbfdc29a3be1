#include "vbrpc/core.hpp"

#include <algorithm>
#include <cmath>

namespace vbrpc {

void SystemParams::validate() const {
    if (M < 1) throw InvalidInput("SystemParams: M must be >= 1");
    if (!(Bc > 0.0)) throw InvalidInput("SystemParams: Bc must be > 0");
    if (!(N0 > 0.0)) throw InvalidInput("SystemParams: N0 must be > 0");
    if (!(tau > 0.0)) throw InvalidInput("SystemParams: tau must be > 0");
    if (!(Fmax > 0.0)) throw InvalidInput("SystemParams: Fmax must be > 0");
    if (Pmax && !(*Pmax > 0.0)) throw InvalidInput("SystemParams: Pmax must be > 0");
}

double VideoTrace::total_bits() const {
    double s = 0.0;
    for (double f : frames) s += f;
    return s;
}

double VideoTrace::max_frame() const {
    double m = 0.0;
    for (double f : frames) m = std::max(m, f);
    return m;
}

void VideoTrace::validate() const {
    if (frames.empty()) throw InvalidInput("VideoTrace: need at least one frame");
    if (!(fps > 0.0)) throw InvalidInput("VideoTrace: fps must be > 0");
    for (std::size_t i = 0; i < frames.size(); ++i) {
        if (!(frames[i] > 0.0))
            throw InvalidInput("VideoTrace: frame " + std::to_string(i + 1) +
                               " must be positive");
    }
}

void ChannelGains::validate() const {
    for (double g : gains.data)
        if (!(g >= 0.0)) throw InvalidInput("ChannelGains: gains must be nonnegative");
}

double slot_throughput(std::span<const double> powers, std::span<const double> gains,
                       const SystemParams& params) {
    if (powers.size() != gains.size())
        throw InvalidInput("slot_throughput: power/gain size mismatch");
    const double floor = params.noise_floor();
    double bits = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] < 0.0) throw InvalidInput("slot_throughput: negative power");
        if (gains[i] < 0.0) throw InvalidInput("slot_throughput: negative gain");
        if (gains[i] == 0.0) continue;
        bits += params.Bc * std::log2(1.0 + powers[i] * gains[i] / floor);
    }
    return params.tau * bits;
}

double power_for_rate(double rate_bps, double gain, const SystemParams& params) {
    if (rate_bps < 0.0) throw InvalidInput("power_for_rate: negative rate");
    if (gain < 0.0) throw InvalidInput("power_for_rate: negative gain");
    if (rate_bps == 0.0) return 0.0;
    if (gain == 0.0) throw InfeasibleError("power_for_rate: positive rate on a dead channel");
    return (std::exp2(rate_bps / params.Bc) - 1.0) * params.noise_floor() / gain;
}

PowerSchedule PowerSchedule::from_powers(SlotMatrix powers, const ChannelGains& ch,
                                         const SystemParams& params) {
    if (powers.channels != ch.gains.channels || powers.slots != ch.gains.slots)
        throw InvalidInput("PowerSchedule: power/gain dimensions mismatch");
    PowerSchedule s;
    s.P = std::move(powers);
    s.H.resize(s.P.slots);
    s.X.resize(s.P.slots);
    double cum = 0.0;
    for (std::size_t t = 0; t < s.P.slots; ++t) {
        s.H[t] = slot_throughput(s.P.slot(t), ch.gains.slot(t), params);
        cum += s.H[t];
        s.X[t] = cum;
    }
    return s;
}

CumulativeCurves cumulative_curves(const VideoTrace& trace, const SystemParams& params) {
    const std::size_t T = trace.slots();
    CumulativeCurves c;
    c.O.resize(T);
    c.U.resize(T);
    double consumed = 0.0;  // U(t-1), with F(0) = 0
    for (std::size_t t = 0; t < T; ++t) {
        c.O[t] = consumed + params.Fmax;
        consumed += trace.frames[t];
        c.U[t] = consumed;
    }
    return c;
}

BufferTrajectory simulate_buffer(const PowerSchedule& schedule, const VideoTrace& trace,
                                 const SystemParams& params) {
    const std::size_t T = trace.slots();
    if (schedule.H.size() < T)
        throw InvalidInput("simulate_buffer: schedule shorter than trace");
    auto curves = cumulative_curves(trace, params);
    BufferTrajectory traj;
    traj.O = std::move(curves.O);
    traj.U = std::move(curves.U);
    traj.D.resize(T);
    double d = 0.0;  // D(0) = 0
    for (std::size_t t = 0; t < T; ++t) {
        const double prev_frame = (t == 0) ? 0.0 : trace.frames[t - 1];
        d = d - prev_frame + schedule.H[t];
        traj.D[t] = d;
    }
    return traj;
}

FeasibilityReport verify_schedule(const PowerSchedule& schedule, const VideoTrace& trace,
                                  const SystemParams& params, double tol_bits) {
    const std::size_t T = trace.slots();
    if (schedule.X.size() < T)
        throw InvalidInput("verify_schedule: schedule shorter than trace");
    if (tol_bits < 0.0) tol_bits = params.tol_bits();
    auto curves = cumulative_curves(trace, params);

    FeasibilityReport rep;
    for (std::size_t t = 0; t < T; ++t) {
        if (t + 1 < T && schedule.X[t] < curves.U[t] - tol_bits)
            rep.underflow_slots.push_back(t + 1);
        if (schedule.X[t] > curves.O[t] + tol_bits)
            rep.overflow_slots.push_back(t + 1);
    }
    rep.total_bits_error = std::abs(schedule.X[T - 1] - curves.U[T - 1]);
    rep.feasible = rep.underflow_slots.empty() && rep.overflow_slots.empty() &&
                   rep.total_bits_error <= tol_bits;
    return rep;
}

}  // namespace vbrpc
