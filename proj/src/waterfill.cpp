#include "vbrpc/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vbrpc {

namespace {

constexpr double kLevelCeiling = 1e300;

// Sorted cutoff levels N0*Bc/gamma for every live (slot, channel) entry in a
// span, with prefix sums of log2(cutoff). The delivered-bits curve is then
//   bits(W) = tau*Bc * (k*log2(W) - sum of the k smallest log2 cutoffs),
// k = #cutoffs below W, which makes each bisection probe O(log n).
struct CutoffSet {
    std::vector<double> v;
    std::vector<double> logv_prefix;  // logv_prefix[k] = sum of first k log2(v)

    void add_row(std::span<const double> gains, double floor) {
        for (double g : gains) {
            if (g < 0.0) throw InvalidInput("water-filling: negative gain");
            if (g > 0.0) v.push_back(floor / g);
        }
    }

    void finalize() {
        std::sort(v.begin(), v.end());
        logv_prefix.resize(v.size() + 1);
        logv_prefix[0] = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            logv_prefix[i + 1] = logv_prefix[i] + std::log2(v[i]);
    }

    double bits_at(double level, double tau_bc) const {
        if (level <= 0.0) return 0.0;
        const auto k = static_cast<std::size_t>(
            std::upper_bound(v.begin(), v.end(), level) - v.begin());
        if (k == 0) return 0.0;
        return tau_bc * (static_cast<double>(k) * std::log2(level) - logv_prefix[k]);
    }
};

double bisect_level_for_bits(const CutoffSet& cut, double target_bits,
                             const SystemParams& params) {
    if (target_bits < 0.0) throw InvalidInput("water-filling: negative bit target");
    if (target_bits == 0.0) return 0.0;
    if (cut.v.empty())
        throw InfeasibleError("water-filling: positive bit target with no live channel");

    const double tau_bc = params.tau * params.Bc;
    const double n = static_cast<double>(cut.v.size());

    // Initial bracket: at v_max * 2^(target/(tau*Bc*n)) every entry is live and
    // already delivers >= target; doubling below is a safety net.
    double hi = cut.v.back() * std::exp2(target_bits / (tau_bc * n));
    if (!(hi < kLevelCeiling)) hi = kLevelCeiling;
    while (cut.bits_at(hi, tau_bc) < target_bits) {
        if (hi >= kLevelCeiling)
            throw InfeasibleError("water-filling: bit target unreachable at finite level");
        hi = std::min(hi * 2.0, kLevelCeiling);
    }

    double lo = 0.0;
    const double btol = 1e-12 * std::max(1.0, target_bits);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double b = cut.bits_at(mid, tau_bc);
        if (b < target_bits)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi) break;
        if (std::abs(b - target_bits) <= btol) return mid;
    }
    return hi;
}

}  // namespace

double water_level_for_target(const SpanTarget& span, const SystemParams& params) {
    if (span.gain_rows.empty()) throw InvalidInput("water-filling: empty span");
    CutoffSet cut;
    const double floor = params.noise_floor();
    for (const auto& row : span.gain_rows) cut.add_row(row, floor);
    cut.finalize();
    return bisect_level_for_bits(cut, span.target_bits, params);
}

double water_level_for_target(const SlotMatrix& gains, std::size_t slot_begin,
                              std::size_t slot_end, double target_bits,
                              const SystemParams& params) {
    if (slot_begin >= slot_end || slot_end > gains.slots)
        throw InvalidInput("water-filling: bad slot range");
    CutoffSet cut;
    const double floor = params.noise_floor();
    for (std::size_t t = slot_begin; t < slot_end; ++t) cut.add_row(gains.slot(t), floor);
    cut.finalize();
    return bisect_level_for_bits(cut, target_bits, params);
}

std::vector<double> powers_from_level(double level, std::span<const double> gains,
                                      const SystemParams& params) {
    if (level < 0.0) throw InvalidInput("powers_from_level: negative level");
    const double floor = params.noise_floor();
    std::vector<double> powers(gains.size(), 0.0);
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (gains[i] < 0.0) throw InvalidInput("powers_from_level: negative gain");
        if (gains[i] == 0.0) continue;
        powers[i] = std::max(0.0, level - floor / gains[i]);
    }
    return powers;
}

double level_for_power_budget(std::span<const double> gains, double budget_watts,
                              const SystemParams& params) {
    if (budget_watts < 0.0) throw InvalidInput("level_for_power_budget: negative budget");
    if (budget_watts == 0.0) return 0.0;

    const double floor = params.noise_floor();
    std::vector<double> v;
    for (double g : gains) {
        if (g < 0.0) throw InvalidInput("level_for_power_budget: negative gain");
        if (g > 0.0) v.push_back(floor / g);
    }
    if (v.empty()) throw InfeasibleError("level_for_power_budget: no live channel");
    std::sort(v.begin(), v.end());
    std::vector<double> v_prefix(v.size() + 1, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v_prefix[i + 1] = v_prefix[i] + v[i];

    const auto power_at = [&](double level) {
        const auto k = static_cast<std::size_t>(
            std::upper_bound(v.begin(), v.end(), level) - v.begin());
        return static_cast<double>(k) * level - v_prefix[k];
    };

    double lo = 0.0;
    double hi = v.front() + budget_watts;  // already spends >= budget
    const double ptol = 1e-12 * std::max(1.0, budget_watts);
    for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double p = power_at(mid);
        if (p < budget_watts)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi) break;
        if (std::abs(p - budget_watts) <= ptol) return mid;
    }
    return hi;
}

}  // namespace vbrpc
