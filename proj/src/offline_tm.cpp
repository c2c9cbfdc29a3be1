#include "vbrpc/offline_tm.hpp"

#include <algorithm>
#include <cmath>

#include "vbrpc/core.hpp"
#include "vbrpc/waterfill.hpp"

namespace vbrpc {

TmResult solve_tm(const VideoTrace& trace, const ChannelGains& gains,
                  const SystemParams& params, std::size_t horizon_multiple) {
    params.validate();
    if (!params.Pmax) throw InvalidInput("solve_tm: Pmax required");
    const double pmax = *params.Pmax;
    const std::size_t T = trace.slots();
    if (T == 0) throw InvalidInput("solve_tm: empty trace");
    if (gains.gains.channels != params.M || gains.gains.slots != T)
        throw InvalidInput("solve_tm: gain matrix does not match trace/params");

    const double total = trace.total_bits();
    const double tol = params.tol_bits();
    const std::size_t M = params.M;
    const std::size_t soft_cap = horizon_multiple * T;
    const std::size_t hard_cap = 100 * std::max<std::size_t>(1, horizon_multiple) * T;

    std::vector<std::vector<double>> power_cols;
    std::vector<double> levels;
    double delivered = 0.0;
    double consumed = 0.0;  // U(t-1), frozen at the trace total past T
    std::size_t completion = 0;

    for (std::size_t t = 0; delivered < total - tol; ++t) {
        if (t >= hard_cap)
            throw ProgressError("solve_tm: no completion within " +
                                std::to_string(hard_cap) + " slots");
        auto slot_gains = gains.gains.slot(t % T);

        const double available = std::max(0.0, params.Fmax - (delivered - consumed));
        const double cap_bits = std::min(available, total - delivered);

        // Budget step: throughput-max split of the full power budget.
        double level = level_for_power_budget(slot_gains, pmax, params);
        auto powers = powers_from_level(level, slot_gains, params);
        double bits = slot_throughput(powers, slot_gains, params);

        // Cap step: back off to the exact cap when the budget overshoots it.
        if (bits > cap_bits) {
            level = cap_bits > 0.0
                        ? water_level_for_target(gains.gains, t % T, t % T + 1, cap_bits,
                                                 params)
                        : 0.0;
            powers = powers_from_level(level, slot_gains, params);
            bits = slot_throughput(powers, slot_gains, params);
        }

        if (bits <= tol * 1e-3 && t + 1 > soft_cap && delivered < total - tol)
            throw ProgressError("solve_tm: stalled with data remaining after " +
                                std::to_string(t + 1) + " slots");

        power_cols.push_back(std::move(powers));
        levels.push_back(level);
        delivered += bits;
        if (t < T) consumed += trace.frames[t];
        if (delivered >= total - tol && completion == 0) completion = t + 1;
    }
    if (completion == 0) completion = power_cols.size();  // degenerate: empty demand

    // Idle slots after completion keep explicit zero power through slot T.
    const std::size_t span = std::max(T, power_cols.size());
    SlotMatrix P(M, span, 0.0);
    for (std::size_t t = 0; t < power_cols.size(); ++t)
        for (std::size_t i = 0; i < M; ++i) P.at(i, t) = power_cols[t][i];
    levels.resize(span, 0.0);

    SlotMatrix wide_gains(M, span, 0.0);
    for (std::size_t t = 0; t < span; ++t) {
        auto src = gains.gains.slot(t % T);
        std::copy(src.begin(), src.end(), wide_gains.slot(t).begin());
    }
    ChannelGains wide{std::move(wide_gains)};

    TmResult res;
    res.schedule = PowerSchedule::from_powers(std::move(P), wide, params);
    res.completion_slot = completion;
    res.levels = std::move(levels);
    res.report = verify_schedule(res.schedule, trace, params);
    return res;
}

}  // namespace vbrpc
