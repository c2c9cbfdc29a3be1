#include "vbrpc/online_rl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vbrpc/core.hpp"
#include "vbrpc/waterfill.hpp"

namespace vbrpc {

namespace {

double buffer_before_arrivals(const RLState& s) {
    // Stalled slots clamp the buffer at zero and the playhead moves on, so
    // the carried-in deficit never goes negative.
    return std::max(0.0, s.buffer_prev - s.frame_prev);
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double total_power_for_bits(const RLState& s, double bits, const SystemParams& params) {
    if (bits <= 0.0) return 0.0;
    SpanTarget span;
    span.gain_rows.push_back({s.gains_now.begin(), s.gains_now.end()});
    span.target_bits = bits;
    const double level = water_level_for_target(span, params);
    auto powers = powers_from_level(level, s.gains_now, params);
    double p = 0.0;
    for (double x : powers) p += x;
    return p;
}

long long grid_index(double power, double delta) {
    const double x = power / delta;
    const auto nearest = static_cast<long long>(std::llround(x));
    // Snap to the grid point when the quotient is a whole number up to float
    // noise; otherwise round down like the action set demands.
    if (std::abs(x - static_cast<double>(nearest)) <=
        1e-9 * std::max(1.0, std::abs(x)))
        return nearest;
    return static_cast<long long>(std::floor(x));
}

}  // namespace

void RLConfig::validate() const {
    if (!(discount > 0.0 && discount <= 1.0))
        throw InvalidInput("RLConfig: discount must lie in (0, 1]");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw InvalidInput("RLConfig: epsilon must lie in (0, 1)");
    if (!(pmax > 0.0)) throw InvalidInput("RLConfig: pmax must be > 0");
    if (!beta) throw InvalidInput("RLConfig: beta schedule missing");
}

bool WeightVector::finite() const {
    return std::isfinite(w[0]) && std::isfinite(w[1]) && std::isfinite(w[2]);
}

double reward(double total_power, double pmax) {
    if (total_power < 0.0) throw InvalidInput("reward: negative power");
    if (!(pmax > 0.0)) throw InvalidInput("reward: pmax must be > 0");
    return 1.0 - total_power / pmax;
}

double wf_reference_power(const RLState& state, const SystemParams& params, double delta) {
    if (!(delta > 0.0)) throw InvalidInput("wf_reference_power: delta must be > 0");
    const double need =
        std::max(0.0, state.frame_now + state.frame_next - buffer_before_arrivals(state));
    if (need <= 0.0) return 0.0;

    SpanTarget span;
    span.gain_rows.push_back({state.gains_now.begin(), state.gains_now.end()});
    span.gain_rows.push_back({state.gain_mean.begin(), state.gain_mean.end()});
    span.target_bits = need;
    const double level = water_level_for_target(span, params);

    auto powers = powers_from_level(level, state.gains_now, params);
    double p = 0.0;
    for (double x : powers) p += x;
    return delta * static_cast<double>(grid_index(p, delta));
}

PowerBounds feasible_power_bounds(const RLState& state, const SystemParams& params) {
    const double held = buffer_before_arrivals(state);
    const double need_bits = std::max(0.0, state.frame_now - held);
    const double cap_bits = std::max(0.0, params.Fmax - held);
    PowerBounds b;
    b.pmin = total_power_for_bits(state, need_bits, params);
    b.pmax = total_power_for_bits(state, cap_bits, params);
    return b;
}

std::array<double, 3> feature_vector(const RLState& state, double action_power,
                                     const SystemParams& params, double delta) {
    if (action_power < 0.0) throw InvalidInput("feature_vector: negative action");
    double bits = 0.0;
    if (action_power > 0.0) {
        const double level = level_for_power_budget(state.gains_now, action_power, params);
        auto powers = powers_from_level(level, state.gains_now, params);
        bits = slot_throughput(powers, state.gains_now, params);
    }
    const double preview = buffer_before_arrivals(state) + bits;
    const double tol = params.tol_bits();

    std::array<double, 3> f{0.0, 0.0, 0.0};
    f[0] = preview <= params.Fmax + tol ? 1.0 : 0.0;
    f[1] = preview >= state.frame_now - tol ? 1.0 : 0.0;
    const double wf = wf_reference_power(state, params, delta);
    f[2] = grid_index(action_power, delta) == grid_index(wf, delta) ? 1.0 : 0.0;
    return f;
}

ActionChoice select_action(const RLState& state, const WeightVector& weights,
                           const RLConfig& cfg, const SystemParams& params,
                           std::mt19937_64& rng) {
    if (!(cfg.delta > 0.0) || !(cfg.pmax > 0.0))
        throw InvalidInput("select_action: delta and pmax must be set");
    if (!weights.finite()) throw InvalidInput("select_action: non-finite weights");

    const PowerBounds bounds = feasible_power_bounds(state, params);
    const long long top = grid_index(cfg.pmax, cfg.delta);

    if (bounds.pmin > cfg.pmax) {
        // Underflow is unavoidable; transmit flat out and let the caller
        // record the stall.
        return {cfg.pmax, top, true};
    }

    long long lo = static_cast<long long>(std::ceil(bounds.pmin / cfg.delta - 1e-9));
    lo = std::max<long long>(lo, 0);
    long long hi = grid_index(std::min(bounds.pmax, cfg.pmax), cfg.delta);
    hi = std::min(hi, top);
    if (hi < lo) {
        // Grid too coarse for the feasible window; stay on the overflow-safe
        // side. The run loop will count any resulting underflow.
        const long long idx = std::max<long long>(hi, 0);
        return {static_cast<double>(idx) * cfg.delta, idx, false};
    }

    const double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (coin < cfg.epsilon) {
        std::uniform_int_distribution<long long> pick(lo, hi);
        const long long idx = pick(rng);
        return {static_cast<double>(idx) * cfg.delta, idx, false};
    }

    // Inside the clamp window f1 = f2 = 1 by construction of the bounds, so
    // the argmax over the whole window is attained among the lowest index,
    // its neighbor, and the water-filling index.
    const long long wf_idx =
        grid_index(wf_reference_power(state, params, cfg.delta), cfg.delta);
    std::vector<long long> candidates{lo};
    if (lo + 1 <= hi) candidates.push_back(lo + 1);
    if (wf_idx >= lo && wf_idx <= hi) candidates.push_back(wf_idx);
    candidates.push_back(hi);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    long long best_idx = candidates.front();
    double best_q = -std::numeric_limits<double>::infinity();
    for (long long idx : candidates) {
        const double p = static_cast<double>(idx) * cfg.delta;
        const double q = dot(feature_vector(state, p, params, cfg.delta), weights.w);
        if (q > best_q) {  // strict: ties keep the lower power
            best_q = q;
            best_idx = idx;
        }
    }
    return {static_cast<double>(best_idx) * cfg.delta, best_idx, false};
}

WeightVector sarsa_step(const RLState& state, double action, double reward_value,
                        const RLState& next_state, double next_action,
                        const WeightVector& weights, const RLConfig& cfg,
                        const SystemParams& params, std::size_t t, bool terminal) {
    const auto f = feature_vector(state, action, params, cfg.delta);
    const double q = dot(f, weights.w);
    const double q_next =
        terminal ? 0.0
                 : dot(feature_vector(next_state, next_action, params, cfg.delta),
                       weights.w);
    const double step = cfg.beta(t);
    const double td = reward_value + cfg.discount * q_next - q;

    WeightVector out = weights;
    for (int k = 0; k < 3; ++k) out.w[k] += step * td * f[k];
    if (!out.finite())
        throw ProgressError("sarsa_step: weight update produced a non-finite value at t=" +
                            std::to_string(t));
    return out;
}

SarsaResult run_sarsa(const VideoTrace& trace, const FadingPath& fading,
                      const SystemParams& params, const RLConfig& cfg_in,
                      std::uint64_t seed) {
    params.validate();
    RLConfig cfg = cfg_in;
    if (cfg.delta <= 0.0) cfg.delta = cfg.pmax / 100.0;
    cfg.validate();

    const std::size_t T = trace.slots();
    const std::size_t M = params.M;
    if (T == 0) throw InvalidInput("run_sarsa: empty trace");
    if (fading.channels != M || fading.slots != T)
        throw InvalidInput("run_sarsa: fading path does not match trace/params");
    if (!(params.Fmax > trace.max_frame()))
        throw InvalidInput("run_sarsa: buffer must exceed the largest frame");

    std::mt19937_64 rng(seed);
    const SlotMatrix& gains = fading.gains.gains;

    std::vector<double> mean_accum(M, 0.0);
    const auto make_state = [&](std::size_t t1, double buffer_prev) {
        RLState s;
        s.t = t1;
        s.buffer_prev = buffer_prev;
        s.frame_prev = t1 >= 2 ? trace.frames[t1 - 2] : 0.0;
        s.frame_now = trace.frames[t1 - 1];
        s.frame_next = t1 < T ? trace.frames[t1] : 0.0;
        s.h_now.resize(M);
        s.gains_now.resize(M);
        s.gain_mean.resize(M);
        for (std::size_t i = 0; i < M; ++i) {
            s.h_now[i] = fading.coeff(i, t1 - 1);
            s.gains_now[i] = gains.at(i, t1 - 1);
            mean_accum[i] += s.gains_now[i];
            s.gain_mean[i] = mean_accum[i] / static_cast<double>(t1);
        }
        return s;
    };

    SlotMatrix P(M, T, 0.0);
    SarsaResult res;
    res.rewards.resize(T);
    res.discounted_return.resize(T);
    res.pmax = cfg.pmax;
    res.delta = cfg.delta;

    WeightVector w;
    w.w = cfg.w_init;

    RLState state = make_state(1, 0.0);
    ActionChoice action = select_action(state, w, cfg, params, rng);

    double running_return = 0.0;
    double discount_pow = 1.0;
    for (std::size_t t = 1; t <= T; ++t) {
        double bits = 0.0;
        if (action.power > 0.0) {
            const double level =
                level_for_power_budget(state.gains_now, action.power, params);
            auto powers = powers_from_level(level, state.gains_now, params);
            bits = slot_throughput(powers, state.gains_now, params);
            auto dst = P.slot(t - 1);
            std::copy(powers.begin(), powers.end(), dst.begin());
        }
        const double buffer_now = buffer_before_arrivals(state) + bits;
        if (action.stall) ++res.stall_count;

        const double r = reward(action.power, cfg.pmax);
        res.rewards[t - 1] = r;
        discount_pow *= cfg.discount;  // paper weights slot t by discount^t
        running_return += discount_pow * r;
        res.discounted_return[t - 1] = running_return;

        if (t < T) {
            RLState next_state = make_state(t + 1, buffer_now);
            ActionChoice next_action = select_action(next_state, w, cfg, params, rng);
            w = sarsa_step(state, action.power, r, next_state, next_action.power, w, cfg,
                           params, t);
            state = std::move(next_state);
            action = next_action;
        } else {
            w = sarsa_step(state, action.power, r, state, 0.0, w, cfg, params, t, true);
        }
    }

    res.schedule = PowerSchedule::from_powers(std::move(P), fading.gains, params);
    res.report = verify_schedule(res.schedule, trace, params);
    res.weights = w;
    return res;
}

}  // namespace vbrpc
