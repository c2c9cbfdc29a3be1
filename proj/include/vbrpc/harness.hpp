#pragma once

#include <string>

#include "vbrpc/online_gwf.hpp"
#include "vbrpc/online_rl.hpp"
#include "vbrpc/types.hpp"

namespace vbrpc {

enum class Policy { pm, tm, gwf, sarsa };
enum class ChannelModel { rayleigh, gauss_markov };

std::string to_string(Policy p);

struct SyntheticTraceSpec {
    std::size_t T = 0;
    std::size_t Ng = 16;
    double mean_bits = 30000.0;
    double i_frame_ratio = 4.0;
};

/// One experiment: a policy, a trace source, a channel model, and optional
/// sweep/Monte Carlo dimensions. Defaults mirror the usual setup: Bc = 10 kHz,
/// M = 100, G = 2, buffer 1.5x the largest frame, Ng = 16, L = 4, alpha = 0.99.
/// N0 defaults to 1e-3/Bc (noise floor 1 mW per subchannel); that value is a
/// toolkit convention, not a measured one.
struct ExperimentConfig {
    Policy policy = Policy::pm;

    std::size_t M = 100;
    double Bc = 10e3;
    std::optional<double> N0;          ///< default 1e-3 / Bc
    double fmax_ratio = 1.5;           ///< buffer = ratio * largest frame
    std::optional<double> fmax_bits;   ///< absolute override
    std::optional<double> pmax;        ///< TM cap; absent = derive from PM peak

    std::string trace_path;            ///< CSV source, or
    std::optional<SyntheticTraceSpec> synthetic;

    ChannelModel channel = ChannelModel::rayleigh;
    double mean_gain = 2.0;            ///< G
    double alpha = 0.99;
    std::optional<double> sigma_h_sq;  ///< default = mean_gain

    GroupConfig group;
    RLConfig rl;                       ///< rl.pmax <= 0 derives from a GWF peak

    std::string sweep_param;           ///< empty = no sweep
    std::vector<double> sweep_values;

    std::size_t runs = 1;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
};

/// Scalar metrics plus the plot-ready per-slot curves for one run.
struct ExperimentResult {
    std::string policy;
    std::string sweep_param;
    double sweep_value = 0.0;
    std::size_t sweep_index = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;

    double avg_power = 0.0;
    double peak_power = 0.0;
    std::size_t completion_slot = 0;
    double underflow_prob = 0.0;
    double overflow_prob = 0.0;
    bool feasible = false;
    double total_bits_error = 0.0;

    std::vector<double> X, O, U, D, total_power;
    std::vector<double> water_level;  ///< empty where the policy has none
};

/// Two-column CSV "frame_index,frame_size_bits" with an optional header row
/// and optional "# fps=N" comment; frame 0 may appear with size 0.
VideoTrace load_trace(const std::string& path);

/// GoP-structured random trace: the first frame of every GoP draws from a
/// mean i_frame_ratio times the inter-frame mean, sizes uniform within
/// [0.5, 1.5) of their mean, overall mean equal to mean_bits.
VideoTrace gen_synthetic_trace(std::size_t T, std::size_t Ng, double mean_bits,
                               double i_frame_ratio, std::uint64_t seed);

/// Per-run seed stream: splitmix64 of the master seed and the run index only,
/// so reordering sweep values never changes an individual run.
std::uint64_t derive_subseed(std::uint64_t master, std::size_t run_index);

/// Runs the sweep x Monte Carlo grid (concurrently when cfg.jobs > 1) and
/// returns one result per (sweep value, run).
std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg);

/// Writes summary.json plus one curves CSV per run into out_dir.
std::vector<std::string> emit_results(const std::vector<ExperimentResult>& results,
                                      const std::string& out_dir);

}  // namespace vbrpc
