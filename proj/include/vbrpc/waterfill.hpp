#pragma once

#include "vbrpc/types.hpp"

namespace vbrpc {

/// Gains over a contiguous slot span plus the bits to deliver across it.
struct SpanTarget {
    std::vector<std::vector<double>> gain_rows;  ///< one row of M gains per slot
    double target_bits = 0.0;
};

/// Common water level W such that the span delivers exactly target_bits:
///   sum_slots sum_i tau*Bc*log2(1 + [W - N0*Bc/gamma]^+ * gamma/(N0*Bc)) = target.
/// Solved by bisection on W (the bit sum is nondecreasing and continuous in W,
/// so the root is unique for a positive target). target_bits = 0 returns W = 0.
double water_level_for_target(const SpanTarget& span, const SystemParams& params);

/// Same solve over a slot range [slot_begin, slot_end) of a gain matrix.
double water_level_for_target(const SlotMatrix& gains, std::size_t slot_begin,
                              std::size_t slot_end, double target_bits,
                              const SystemParams& params);

/// P_i = max(0, W - N0*Bc/gamma_i); dead channels (gamma = 0) get zero.
std::vector<double> powers_from_level(double level, std::span<const double> gains,
                                      const SystemParams& params);

/// Level V with sum_i [V - N0*Bc/gamma_i]^+ = budget; the dual variable phi of
/// the throughput-max step enters as V = Bc/(phi*ln2). Unique by monotonicity.
double level_for_power_budget(std::span<const double> gains, double budget_watts,
                              const SystemParams& params);

}  // namespace vbrpc
