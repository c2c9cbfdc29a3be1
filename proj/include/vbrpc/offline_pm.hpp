#pragma once

#include "vbrpc/types.hpp"

namespace vbrpc {

/// Per-slot water levels plus the segment bookkeeping the solver maintained.
/// transitions holds q_0 = 0 and the 1-based slot indices immediately after
/// which the level changes; buffer_full[t] flags slots where the cumulative
/// cap binds (within tolerance). The level is constant on each segment
/// (q_k, q_{k+1}].
struct WaterLevelProfile {
    std::vector<double> W;
    std::vector<std::size_t> transitions;
    std::vector<std::uint8_t> buffer_full;
};

struct PmSolution {
    PowerSchedule schedule;
    WaterLevelProfile profile;
};

/// Offline power minimization with full channel knowledge. Water levels may
/// rise from one slot to the next only across a buffer-full slot; the returned
/// schedule never underflows, respects every buffer cap with playback still
/// ahead, and delivers the exact total.
///
/// Requires Fmax > every frame before the last (the final frame is consumed
/// as it lands) and a live subchannel in every slot.
PmSolution solve_pm(const VideoTrace& trace, const ChannelGains& gains,
                    const SystemParams& params);

/// Same dynamic program against explicit per-slot demands (>= 0 each) and an
/// explicit nondecreasing cumulative-cap curve cap_cum[t]. The online grouped
/// policy builds its residual subproblems through this entry point.
PmSolution solve_pm_constrained(std::span<const double> demands, const SlotMatrix& gains,
                                const SystemParams& params,
                                std::span<const double> cap_cum);

}  // namespace vbrpc
