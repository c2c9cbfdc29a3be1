#pragma once

#include "vbrpc/channel.hpp"
#include "vbrpc/types.hpp"

namespace vbrpc {

/// Frame grouping and the estimated channel correlation used for prediction.
struct GroupConfig {
    std::size_t Ng = 16;      ///< GoP size in frames
    std::size_t L = 4;        ///< GoPs per group
    double alpha_hat = 0.99;  ///< estimated correlation

    std::size_t group_span() const { return Ng * L; }
    void validate() const;
};

struct GwfSolution {
    PowerSchedule schedule;
    FeasibilityReport report;
    std::vector<double> levels;  ///< committed water level per slot
};

/// Grouped water-filling. Each slot observes the true fading, predicts the
/// rest of its group via alpha_hat^(2k)-scaled gains, re-solves the offline
/// problem on the residual horizon, and commits only the current slot. The
/// residual constraints are rebuilt from realized deliveries, so the output
/// never underflows or overflows regardless of prediction quality. A trailing
/// partial group is simply shorter.
GwfSolution solve_gwf(const VideoTrace& trace, const FadingPath& fading,
                      const SystemParams& params, const GroupConfig& cfg);

}  // namespace vbrpc
