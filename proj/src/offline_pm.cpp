#include "vbrpc/offline_pm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vbrpc/core.hpp"
#include "vbrpc/waterfill.hpp"

namespace vbrpc {

namespace {

constexpr double kLevelCeiling = 1e300;

// Fenwick trees over the value-sorted cutoff levels of a horizon, tracking
// which cutoffs belong to already-swept slots. Lets the sweep answer
// "bits delivered by slots a..j at level W" in O(log n) and solve level
// targets by bisection without rebuilding sorted arrays per prefix.
class PrefixLevelSolver {
public:
    PrefixLevelSolver(const SlotMatrix& gains, const SystemParams& params)
        : gains_(gains),
          tau_bc_(params.tau * params.Bc),
          floor_(params.noise_floor()),
          slot_ranks_(gains.slots) {
        std::vector<double> values;
        for (std::size_t t = 0; t < gains_.slots; ++t)
            for (double g : gains_.slot(t))
                if (g > 0.0) values.push_back(floor_ / g);
        sorted_v_ = values;
        std::sort(sorted_v_.begin(), sorted_v_.end());
        count_.assign(sorted_v_.size() + 1, 0.0);
        logsum_.assign(sorted_v_.size() + 1, 0.0);
        for (std::size_t t = 0; t < gains_.slots; ++t) {
            for (double g : gains_.slot(t)) {
                if (g <= 0.0) continue;
                const double v = floor_ / g;
                const auto rank = static_cast<std::size_t>(
                    std::lower_bound(sorted_v_.begin(), sorted_v_.end(), v) -
                    sorted_v_.begin());
                slot_ranks_[t].push_back(rank);
            }
        }
    }

    void reset() {
        std::fill(count_.begin(), count_.end(), 0.0);
        std::fill(logsum_.begin(), logsum_.end(), 0.0);
        active_ = 0;
        active_vmax_ = 0.0;
    }

    void activate_slot(std::size_t t) {
        for (std::size_t rank : slot_ranks_[t]) {
            add(count_, rank, 1.0);
            add(logsum_, rank, std::log2(sorted_v_[rank]));
            active_vmax_ = std::max(active_vmax_, sorted_v_[rank]);
            ++active_;
        }
    }

    double bits_at(double level) const {
        if (level <= 0.0 || active_ == 0) return 0.0;
        const auto r = static_cast<std::size_t>(
            std::upper_bound(sorted_v_.begin(), sorted_v_.end(), level) -
            sorted_v_.begin());
        const double k = prefix(count_, r);
        if (k == 0.0) return 0.0;
        return tau_bc_ * (k * std::log2(level) - prefix(logsum_, r));
    }

    // Level delivering target_bits over the active slots (bisection as in the
    // standalone water-filling solver).
    double level_for_bits(double target_bits) const {
        if (target_bits <= 0.0) return 0.0;
        if (active_ == 0)
            throw InfeasibleError("solve_pm: bit target with no live channel in span");
        double hi = active_vmax_ *
                    std::exp2(target_bits / (tau_bc_ * static_cast<double>(active_)));
        if (!(hi < kLevelCeiling)) hi = kLevelCeiling;
        while (bits_at(hi) < target_bits) {
            if (hi >= kLevelCeiling)
                throw InfeasibleError("solve_pm: bit target unreachable at finite level");
            hi = std::min(hi * 2.0, kLevelCeiling);
        }
        double lo = 0.0;
        const double btol = 1e-12 * std::max(1.0, target_bits);
        for (int it = 0; it < 300; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double b = bits_at(mid);
            if (b < target_bits)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi) break;
            if (std::abs(b - target_bits) <= btol) return mid;
        }
        return hi;
    }

private:
    static void add(std::vector<double>& tree, std::size_t rank, double delta) {
        for (std::size_t i = rank + 1; i < tree.size(); i += i & (~i + 1)) tree[i] += delta;
    }
    static double prefix(const std::vector<double>& tree, std::size_t n) {
        double s = 0.0;
        for (std::size_t i = n; i > 0; i -= i & (~i + 1)) s += tree[i];
        return s;
    }

    const SlotMatrix& gains_;
    double tau_bc_;
    double floor_;
    std::vector<std::vector<std::size_t>> slot_ranks_;
    std::vector<double> sorted_v_;
    std::vector<double> count_;
    std::vector<double> logsum_;
    std::size_t active_ = 0;
    double active_vmax_ = 0.0;
};

bool essentially_above(double a, double b) {
    return a > b + 1e-9 * std::max({a, b, 1e-300});
}

}  // namespace

PmSolution solve_pm_constrained(std::span<const double> demands, const SlotMatrix& gains,
                                const SystemParams& params,
                                std::span<const double> cap_cum) {
    const std::size_t T = demands.size();
    const std::size_t M = gains.channels;
    if (T == 0) throw InvalidInput("solve_pm: empty horizon");
    if (gains.slots != T) throw InvalidInput("solve_pm: gains/demand slot mismatch");
    if (cap_cum.size() != T) throw InvalidInput("solve_pm: cap curve size mismatch");

    std::vector<double> ucum(T, 0.0);
    double run = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        if (!(demands[t] >= 0.0)) throw InvalidInput("solve_pm: negative demand");
        run += demands[t];
        ucum[t] = run;
        if (run > cap_cum[t] * (1.0 + 1e-12) + 1e-12)
            throw InvalidInput("solve_pm: cumulative demand exceeds the cap curve");
        if (t > 0 && cap_cum[t] < cap_cum[t - 1] * (1.0 - 1e-12) - 1e-12)
            throw InvalidInput("solve_pm: cap curve must be nondecreasing");
        if (demands[t] > 0.0) {
            bool live = false;
            for (double g : gains.slot(t))
                if (g > 0.0) live = true;
            if (!live)
                throw InfeasibleError("solve_pm: slot " + std::to_string(t + 1) +
                                      " has demand but no live channel");
        }
    }

    const double floor = params.noise_floor();
    SlotMatrix P(M, T, 0.0);
    std::vector<double> W(T, 0.0);
    std::vector<double> H(T, 0.0);
    std::vector<std::uint8_t> full(T, 0);
    std::vector<std::size_t> block_ends;

    const auto apply_level = [&](std::size_t begin, std::size_t end, double level) {
        for (std::size_t t = begin; t <= end; ++t) {
            W[t] = level;
            auto gs = gains.slot(t);
            auto ps = P.slot(t);
            for (std::size_t i = 0; i < M; ++i)
                ps[i] = gs[i] > 0.0 ? std::max(0.0, level - floor / gs[i]) : 0.0;
            H[t] = slot_throughput(ps, gs, params);
        }
    };

    PrefixLevelSolver solver(gains, params);
    const double inf = std::numeric_limits<double>::infinity();

    // Emit maximal constant-level blocks left to right. Within one pass the
    // admissible level interval [needier floor, tightest cap] shrinks as
    // slots join; when it collapses, the bound that was crossed is the
    // binding constraint: pin it, emit the flat block it ends, and restart
    // after it. Floors clamp at zero (credit from earlier blocks), caps are
    // charged unclamped. Rises across pinned caps and drops across pinned
    // floors are exactly the allowed level moves.
    std::size_t a = 0;
    double before = 0.0;
    while (a < T) {
        solver.reset();
        double lower = 0.0, upper = inf;
        std::size_t arg_lower = a, arg_upper = a;

        std::size_t pin = T;  // sentinel: no pin found yet
        double pin_level = 0.0;
        bool pin_is_cap = false;

        for (std::size_t j = a; j < T; ++j) {
            solver.activate_slot(j);
            const double floor_rel = std::max(ucum[j] - before, 0.0);
            const double cap_rel = std::max(cap_cum[j] - before, floor_rel);

            // The last slot carries the exact-total constraint from both
            // sides; interior slots contribute their floor and cap.
            double lf = 0.0;
            bool lf_known = false;
            if (j + 1 == T) {
                lf = solver.level_for_bits(floor_rel);
                lf_known = true;
                if (essentially_above(lf, upper)) {
                    pin = arg_upper;
                    pin_level = upper;
                    pin_is_cap = true;
                    break;
                }
                if (essentially_above(lower, lf)) {
                    pin = arg_lower;
                    pin_level = lower;
                    pin_is_cap = false;
                    break;
                }
                // Flat tail at the total's level closes the horizon.
                pin = j;
                pin_level = lf;
                pin_is_cap = false;
                break;
            }

            if (floor_rel > 0.0 && solver.bits_at(lower) < floor_rel) {
                lf = solver.level_for_bits(floor_rel);
                lf_known = true;
                if (essentially_above(lf, upper)) {
                    pin = arg_upper;
                    pin_level = upper;
                    pin_is_cap = true;
                    break;
                }
                if (lf > lower) {
                    lower = lf;
                    arg_lower = j;
                }
            }

            if (upper == inf || solver.bits_at(upper) > cap_rel) {
                const double lc = lf_known && cap_rel == floor_rel
                                      ? lf
                                      : solver.level_for_bits(cap_rel);
                if (essentially_above(lower, lc)) {
                    pin = arg_lower;
                    pin_level = lower;
                    pin_is_cap = false;
                    break;
                }
                if (lc < upper) {
                    upper = lc;
                    arg_upper = j;
                }
            }
        }

        apply_level(a, pin, pin_level);
        block_ends.push_back(pin);
        double delivered = 0.0;
        for (std::size_t t = a; t <= pin; ++t) delivered += H[t];
        if (pin_is_cap) {
            full[pin] = 1;
            before = cap_cum[pin];  // charge the cap exactly
        } else {
            before += delivered;
        }
        a = pin + 1;
    }

    ChannelGains ch{gains};
    PmSolution sol;
    sol.schedule = PowerSchedule::from_powers(std::move(P), ch, params);
    sol.profile.W = std::move(W);
    sol.profile.buffer_full = std::move(full);
    sol.profile.transitions.push_back(0);
    for (std::size_t k = 0; k + 1 < block_ends.size(); ++k)
        sol.profile.transitions.push_back(block_ends[k] + 1);
    return sol;
}

PmSolution solve_pm(const VideoTrace& trace, const ChannelGains& gains,
                    const SystemParams& params) {
    params.validate();
    const std::size_t T = trace.slots();
    if (T == 0) throw InvalidInput("solve_pm: empty trace");
    if (gains.gains.channels != params.M || gains.gains.slots != T)
        throw InvalidInput("solve_pm: gain matrix does not match trace/params");
    // Every frame with playback still ahead of it must fit in the buffer. The
    // final frame is consumed the moment it lands, so only the total-bits
    // equality constrains slot T, not the overflow cap.
    for (std::size_t t = 0; t + 1 < T; ++t)
        if (!(params.Fmax > trace.frames[t]))
            throw InvalidInput("solve_pm: buffer must exceed every frame before the last");

    auto curves = cumulative_curves(trace, params);
    curves.O[T - 1] = std::max(curves.O[T - 1], curves.U[T - 1]);
    return solve_pm_constrained(trace.frames, gains.gains, params, curves.O);
}

}  // namespace vbrpc
