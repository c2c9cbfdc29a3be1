#pragma once

#include "vbrpc/types.hpp"

namespace vbrpc {

struct TmResult {
    PowerSchedule schedule;         ///< may extend past T when Pmax is small
    std::size_t completion_slot;    ///< 1-based first slot with all bits delivered
    FeasibilityReport report;       ///< checked against the trace horizon
    std::vector<double> levels;     ///< per-slot water level actually used
};

/// Per-slot throughput maximization under the params.Pmax budget and the
/// buffer/remaining-data cap, run until every video bit is delivered. Each
/// slot is either budget-tight or cap-tight. Underflow (possible when Pmax is
/// small) is reported, not raised; channel gains repeat cyclically if the
/// loop runs past T.
TmResult solve_tm(const VideoTrace& trace, const ChannelGains& gains,
                  const SystemParams& params, std::size_t horizon_multiple = 10);

}  // namespace vbrpc
