#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vbrpc {

/// Bad argument values (negative powers, inconsistent dimensions, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A demand that no finite power allocation can meet.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A solver loop stopped making progress (see offline time minimization).
class ProgressError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trace/CSV parse failure; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Link-level constants shared by every policy.
///
/// Units: bits, watts, hertz, seconds; channel gains dimensionless.
/// Throughput is base-2 (bits), matching C = Bc*log2(1 + P*gain/(N0*Bc)).
struct SystemParams {
    std::size_t M = 1;                  ///< subchannel count
    double Bc = 1.0;                    ///< per-subchannel bandwidth (Hz)
    double N0 = 1.0;                    ///< noise power spectral density (W/Hz)
    double tau = 1.0;                   ///< slot duration (s)
    double Fmax = 0.0;                  ///< playout buffer size (bits)
    std::optional<double> Pmax;         ///< total per-slot power cap (W), time-min only

    double noise_floor() const { return N0 * Bc; }   ///< N0*Bc per subchannel (W)
    double tol_bits() const { return 1e-6 * Fmax; }  ///< default feasibility slack
    void validate() const;
};

/// Frame sizes in bits; the demand process. tau = 1/fps.
struct VideoTrace {
    std::vector<double> frames;
    double fps = 30.0;

    std::size_t slots() const { return frames.size(); }
    double tau() const { return 1.0 / fps; }
    double total_bits() const;
    double max_frame() const;
    /// Strict validation for ingested traces (frames must be positive).
    void validate() const;
};

/// Channel-by-slot matrix stored slot-major, so one slot's M entries are
/// contiguous and can be handed to the water-filling solvers as a span.
struct SlotMatrix {
    std::size_t channels = 0;
    std::size_t slots = 0;
    std::vector<double> data;

    SlotMatrix() = default;
    SlotMatrix(std::size_t m, std::size_t t, double fill = 0.0)
        : channels(m), slots(t), data(m * t, fill) {}

    double& at(std::size_t ch, std::size_t slot) { return data[slot * channels + ch]; }
    double at(std::size_t ch, std::size_t slot) const { return data[slot * channels + ch]; }
    std::span<double> slot(std::size_t t) {
        return {data.data() + t * channels, channels};
    }
    std::span<const double> slot(std::size_t t) const {
        return {data.data() + t * channels, channels};
    }
};

/// Per-subchannel power gains gamma_i(t), all nonnegative.
struct ChannelGains {
    SlotMatrix gains;
    void validate() const;
};

/// A transmit schedule plus its delivered data: H(t) bits per slot and the
/// cumulative arrival curve X(t).
struct PowerSchedule {
    SlotMatrix P;           ///< powers, channels x slots (W)
    std::vector<double> H;  ///< bits delivered per slot
    std::vector<double> X;  ///< cumulative bits, X[t] = sum_{j<=t} H[j]

    /// Build H and X from a power matrix via the capacity formula.
    static PowerSchedule from_powers(SlotMatrix powers, const ChannelGains& ch,
                                     const SystemParams& params);
};

/// Buffer trajectory D(t) together with the overflow/consumption curves.
struct BufferTrajectory {
    std::vector<double> D;  ///< remaining data after arrivals in slot t
    std::vector<double> O;  ///< cumulative overflow curve
    std::vector<double> U;  ///< cumulative consumption curve
};

/// Outcome of checking a schedule against the buffer constraints.
/// Slots are reported 1-based to match the usual t = 1..T indexing.
struct FeasibilityReport {
    std::vector<std::size_t> underflow_slots;
    std::vector<std::size_t> overflow_slots;
    double total_bits_error = 0.0;
    bool feasible = false;
};

}  // namespace vbrpc
