#pragma once

#include <array>
#include <functional>
#include <random>

#include "vbrpc/channel.hpp"
#include "vbrpc/types.hpp"

namespace vbrpc {

/// Approximate-SARSA knobs. pmax is the total-power cap that defines the
/// action grid {0, delta, 2*delta, ...} and the reward scale; delta <= 0
/// selects pmax/100. beta is the learning-rate schedule (1/t by default).
struct RLConfig {
    double discount = 0.9;
    double epsilon = 0.1;
    double delta = 0.0;
    double pmax = 0.0;
    std::array<double, 3> w_init{1.0, 1.0, 1.0};
    std::function<double(std::size_t)> beta = [](std::size_t t) {
        return 1.0 / static_cast<double>(t);
    };

    void validate() const;
};

struct WeightVector {
    std::array<double, 3> w{0.0, 0.0, 0.0};
    bool finite() const;
};

/// Everything the policy may look at when choosing the slot-t power: the
/// buffer state carried in from t-1, the local frame sizes, the current
/// fading, and the running sample mean of realized gains through t.
struct RLState {
    std::size_t t = 1;  // 1-based slot index
    double buffer_prev = 0.0;
    double frame_prev = 0.0;
    double frame_now = 0.0;
    double frame_next = 0.0;
    std::vector<std::complex<double>> h_now;
    std::vector<double> gains_now;
    std::vector<double> gain_mean;
};

/// R = 1 - P/pmax; 1 at zero power, 0 at the cap.
double reward(double total_power, double pmax);

/// Water-filling reference action: joint level over the current gains and the
/// sample-mean gains for the two-frame need D_n = max{0, F(t)+F(t+1)-D(t)},
/// then the current-slot share only, floor-rounded onto the delta grid.
double wf_reference_power(const RLState& state, const SystemParams& params, double delta);

/// Binary features: f1 = no buffer overflow under the action's one-slot
/// preview, f2 = no underflow, f3 = action equals the rounded water-filling
/// reference. The preview splits the action across subchannels by budget
/// water-filling, the same split the runner uses to transmit.
std::array<double, 3> feature_vector(const RLState& state, double action_power,
                                     const SystemParams& params, double delta);

struct PowerBounds {
    double pmin = 0.0;  ///< least total power avoiding underflow this slot
    double pmax = 0.0;  ///< greatest total power avoiding overflow this slot
};

PowerBounds feasible_power_bounds(const RLState& state, const SystemParams& params);

struct ActionChoice {
    double power = 0.0;
    long long index = 0;  ///< power = index * delta
    bool stall = false;   ///< set when pmin exceeds the global cap
};

/// Epsilon-greedy over the grid actions inside [pmin, min(pmax_t, pmax)],
/// bounds rounded inward; greedy ties break toward the lowest power. When no
/// power can prevent underflow the cap itself is returned and flagged.
ActionChoice select_action(const RLState& state, const WeightVector& weights,
                           const RLConfig& cfg, const SystemParams& params,
                           std::mt19937_64& rng);

/// One gradient update of the linear action-value model,
/// w += beta_t * (R + discount*Q(S',A') - Q(S,A)) * f(S,A).
/// Terminal transitions pass terminal = true so Q(S',A') reads as zero.
WeightVector sarsa_step(const RLState& state, double action, double reward_value,
                        const RLState& next_state, double next_action,
                        const WeightVector& weights, const RLConfig& cfg,
                        const SystemParams& params, std::size_t t, bool terminal = false);

struct SarsaResult {
    PowerSchedule schedule;
    FeasibilityReport report;
    std::vector<double> rewards;
    std::vector<double> discounted_return;  ///< running sum of discount^t * R(t)
    WeightVector weights;
    std::size_t stall_count = 0;
    double pmax = 0.0;
    double delta = 0.0;
};

/// Runs the on-policy loop over the whole trace. Overflow never occurs (the
/// action clamp forbids it); slots whose frame cannot be covered are counted
/// as underflow and the buffer continues from zero on the nominal frame clock.
SarsaResult run_sarsa(const VideoTrace& trace, const FadingPath& fading,
                      const SystemParams& params, const RLConfig& cfg, std::uint64_t seed);

}  // namespace vbrpc
