#include "vbrpc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vbrpc/core.hpp"
#include "vbrpc/offline_pm.hpp"
#include "vbrpc/offline_tm.hpp"

namespace vbrpc {

std::string to_string(Policy p) {
    switch (p) {
        case Policy::pm: return "pm";
        case Policy::tm: return "tm";
        case Policy::gwf: return "gwf";
        case Policy::sarsa: return "sarsa";
    }
    return "?";
}

namespace {

bool parse_double(std::string_view s, double& out) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    if (s.empty()) return false;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && p == end;
}

}  // namespace

VideoTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open trace file '" + path + "'", 0);

    VideoTrace trace;
    std::string line;
    std::size_t lineno = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view v(line);
        while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front())))
            v.remove_prefix(1);
        if (v.empty()) continue;
        if (v.front() == '#') {
            if (auto pos = v.find("fps="); pos != std::string_view::npos) {
                double fps = 0.0;
                if (!parse_double(v.substr(pos + 4), fps) || !(fps > 0.0))
                    throw ParseError("bad fps value", lineno);
                trace.fps = fps;
            }
            continue;
        }
        const auto comma = v.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("expected 'frame_index,frame_size_bits'", lineno);
        double idx = 0.0, size = 0.0;
        const bool idx_ok = parse_double(v.substr(0, comma), idx);
        const bool size_ok = parse_double(v.substr(comma + 1), size);
        if (!idx_ok) {
            if (!saw_data && !size_ok) continue;  // header row
            throw ParseError("bad frame index", lineno);
        }
        if (!size_ok) throw ParseError("bad frame size", lineno);
        saw_data = true;
        if (idx == 0.0) {
            if (size != 0.0) throw ParseError("frame 0 must have size 0", lineno);
            continue;
        }
        if (!(size > 0.0)) throw ParseError("frame size must be positive", lineno);
        trace.frames.push_back(size);
    }
    if (trace.frames.empty()) throw ParseError("trace has no frames", lineno);
    return trace;
}

VideoTrace gen_synthetic_trace(std::size_t T, std::size_t Ng, double mean_bits,
                               double i_frame_ratio, std::uint64_t seed) {
    if (T < 1 || Ng < 1) throw InvalidInput("gen_synthetic_trace: T and Ng must be >= 1");
    if (!(mean_bits > 0.0)) throw InvalidInput("gen_synthetic_trace: mean_bits must be > 0");
    if (!(i_frame_ratio >= 1.0))
        throw InvalidInput("gen_synthetic_trace: i_frame_ratio must be >= 1");

    // Per-GoP means solve ratio*m + (Ng-1)*m = Ng*mean_bits.
    const double inter_mean =
        static_cast<double>(Ng) * mean_bits / (i_frame_ratio + static_cast<double>(Ng) - 1.0);
    std::mt19937_64 rng(seed);
    VideoTrace trace;
    trace.frames.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
        const double mean = (t % Ng == 0) ? i_frame_ratio * inter_mean : inter_mean;
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        trace.frames[t] = mean * (0.5 + u);
    }
    return trace;
}

std::uint64_t derive_subseed(std::uint64_t master, std::size_t run_index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(run_index) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

ExperimentConfig apply_sweep(ExperimentConfig cfg, const std::string& param, double value) {
    if (param.empty()) return cfg;
    if (param == "fmax-ratio") {
        cfg.fmax_ratio = value;
        cfg.fmax_bits.reset();
    } else if (param == "alpha") {
        cfg.alpha = value;
    } else if (param == "alpha-hat") {
        cfg.group.alpha_hat = value;
    } else if (param == "ng") {
        cfg.group.Ng = static_cast<std::size_t>(value);
    } else if (param == "l") {
        cfg.group.L = static_cast<std::size_t>(value);
    } else if (param == "pmax") {
        cfg.pmax = value;
        cfg.rl.pmax = value;
    } else if (param == "epsilon") {
        cfg.rl.epsilon = value;
    } else if (param == "discount") {
        cfg.rl.discount = value;
    } else {
        throw InvalidInput("unknown sweep parameter '" + param + "'");
    }
    return cfg;
}

struct PolicyOutput {
    PowerSchedule schedule;
    FeasibilityReport report;
    std::vector<double> levels;
    std::size_t completion_slot = 0;
};

PolicyOutput run_policy(const ExperimentConfig& cfg, const VideoTrace& trace,
                        const SystemParams& params, std::uint64_t subseed) {
    const std::size_t T = trace.slots();

    ChannelGains gains;
    FadingPath fading;
    if (cfg.channel == ChannelModel::gauss_markov) {
        GaussMarkovParams gm;
        gm.alpha = cfg.alpha;
        gm.sigma_h_sq = cfg.sigma_h_sq.value_or(cfg.mean_gain);
        gm.seed = subseed;
        fading = gen_gauss_markov(params.M, T, gm);
        gains = fading.gains;
    } else {
        if (cfg.policy == Policy::gwf || cfg.policy == Policy::sarsa)
            throw InvalidInput(to_string(cfg.policy) +
                               " needs the gauss-markov channel model");
        RayleighParams ray;
        ray.mean_gain = cfg.mean_gain;
        ray.seed = subseed;
        gains = gen_rayleigh_iid(params.M, T, ray);
    }

    PolicyOutput out;
    switch (cfg.policy) {
        case Policy::pm: {
            auto sol = solve_pm(trace, gains, params);
            out.schedule = std::move(sol.schedule);
            out.levels = std::move(sol.profile.W);
            out.report = verify_schedule(out.schedule, trace, params);
            out.completion_slot = T;
            break;
        }
        case Policy::tm: {
            SystemParams p = params;
            if (cfg.pmax) {
                p.Pmax = *cfg.pmax;
            } else {
                // Comparison protocol: cap at the PM solution's peak slot power.
                auto pm = solve_pm(trace, gains, params);
                double peak = 0.0;
                for (std::size_t t = 0; t < T; ++t) {
                    double s = 0.0;
                    for (double x : pm.schedule.P.slot(t)) s += x;
                    peak = std::max(peak, s);
                }
                p.Pmax = peak;
            }
            auto sol = solve_tm(trace, gains, p);
            out.schedule = std::move(sol.schedule);
            out.levels = std::move(sol.levels);
            out.report = sol.report;
            out.completion_slot = sol.completion_slot;
            break;
        }
        case Policy::gwf: {
            auto sol = solve_gwf(trace, fading, params, cfg.group);
            out.schedule = std::move(sol.schedule);
            out.levels = std::move(sol.levels);
            out.report = sol.report;
            out.completion_slot = T;
            break;
        }
        case Policy::sarsa: {
            RLConfig rl = cfg.rl;
            if (rl.pmax <= 0.0) {
                // Default cap: the peak power a GWF run needs on this very
                // realization to stay clear of both buffer walls.
                auto gwf = solve_gwf(trace, fading, params, cfg.group);
                double peak = 0.0;
                for (std::size_t t = 0; t < T; ++t) {
                    double s = 0.0;
                    for (double x : gwf.schedule.P.slot(t)) s += x;
                    peak = std::max(peak, s);
                }
                rl.pmax = peak > 0.0 ? peak : 1.0;
            }
            auto sol = run_sarsa(trace, fading, params, rl, derive_subseed(subseed, 1));
            out.schedule = std::move(sol.schedule);
            out.report = sol.report;
            out.completion_slot = T;
            break;
        }
    }
    return out;
}

ExperimentResult summarize(const ExperimentConfig& cfg, const VideoTrace& trace,
                           const SystemParams& params, PolicyOutput out) {
    const std::size_t T = trace.slots();
    const double tol = params.tol_bits();

    ExperimentResult r;
    r.policy = to_string(cfg.policy);
    r.feasible = out.report.feasible;
    r.total_bits_error = out.report.total_bits_error;
    r.completion_slot = out.completion_slot;

    double total = 0.0;
    for (std::size_t t = 0; t < out.schedule.P.slots; ++t) {
        double s = 0.0;
        for (double x : out.schedule.P.slot(t)) s += x;
        if (t < T) r.total_power.push_back(s);
        total += s;
        r.peak_power = std::max(r.peak_power, s);
    }
    r.avg_power = total / static_cast<double>(T);

    auto traj = simulate_buffer(out.schedule, trace, params);
    // Underflow counting follows the rebuffering convention: a stalled slot
    // zeroes the deficit and the playhead moves on.
    std::size_t under = 0, over = 0;
    double held = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        const double prev_frame = t == 0 ? 0.0 : trace.frames[t - 1];
        held = std::max(0.0, held - prev_frame) + out.schedule.H[t];
        if (held < trace.frames[t] - tol) ++under;
        if (held > params.Fmax + tol) ++over;
    }
    r.underflow_prob = static_cast<double>(under) / static_cast<double>(T);
    r.overflow_prob = static_cast<double>(over) / static_cast<double>(T);

    r.D = std::move(traj.D);
    r.O = std::move(traj.O);
    r.U = std::move(traj.U);
    r.X.assign(out.schedule.X.begin(), out.schedule.X.begin() + static_cast<long>(T));
    if (!out.levels.empty())
        r.water_level.assign(out.levels.begin(), out.levels.begin() + static_cast<long>(T));
    return r;
}

}  // namespace

std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg) {
    if (!cfg.sweep_param.empty() && cfg.sweep_values.empty())
        throw InvalidInput("run_experiment: sweep has no values");
    if (cfg.runs < 1) throw InvalidInput("run_experiment: runs must be >= 1");

    VideoTrace trace;
    if (!cfg.trace_path.empty()) {
        trace = load_trace(cfg.trace_path);
    } else if (cfg.synthetic) {
        const auto& s = *cfg.synthetic;
        trace = gen_synthetic_trace(s.T, s.Ng, s.mean_bits, s.i_frame_ratio, cfg.seed);
    } else {
        throw InvalidInput("run_experiment: no trace source configured");
    }

    const std::size_t n_sweep = cfg.sweep_param.empty() ? 1 : cfg.sweep_values.size();
    std::vector<ExperimentResult> results(n_sweep * cfg.runs);

    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::string first_error;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= results.size()) return;
            const std::size_t si = k / cfg.runs;
            const std::size_t run = k % cfg.runs;
            const double value = cfg.sweep_param.empty() ? 0.0 : cfg.sweep_values[si];
            try {
                ExperimentConfig local = apply_sweep(cfg, cfg.sweep_param, value);
                SystemParams params;
                params.M = local.M;
                params.Bc = local.Bc;
                params.N0 = local.N0.value_or(1e-3 / local.Bc);
                params.tau = trace.tau();
                params.Fmax = local.fmax_bits.value_or(local.fmax_ratio * trace.max_frame());

                const std::uint64_t subseed = derive_subseed(cfg.seed, run);
                auto out = run_policy(local, trace, params, subseed);
                auto res = summarize(local, trace, params, std::move(out));
                res.sweep_param = cfg.sweep_param;
                res.sweep_value = value;
                res.sweep_index = si;
                res.run_index = run;
                res.seed = subseed;
                results[k] = std::move(res);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (first_error.empty())
                    first_error = "sweep value " + std::to_string(value) + ", run " +
                                  std::to_string(run) + ": " + e.what();
            }
        }
    };

    const std::size_t n_jobs = std::max<std::size_t>(1, cfg.jobs);
    if (n_jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!first_error.empty()) throw std::runtime_error("run_experiment: " + first_error);
    return results;
}

std::vector<std::string> emit_results(const std::vector<ExperimentResult>& results,
                                      const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;

    nlohmann::json summary;
    summary["schema_version"] = 1;
    auto& arr = summary["results"] = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j;
        j["policy"] = r.policy;
        if (!r.sweep_param.empty()) {
            j["sweep_param"] = r.sweep_param;
            j["sweep_value"] = r.sweep_value;
        }
        j["sweep_index"] = r.sweep_index;
        j["run_index"] = r.run_index;
        j["seed"] = r.seed;
        j["avg_power"] = r.avg_power;
        j["peak_power"] = r.peak_power;
        j["completion_slot"] = r.completion_slot;
        j["underflow_prob"] = r.underflow_prob;
        j["overflow_prob"] = r.overflow_prob;
        j["feasible"] = r.feasible;
        j["total_bits_error"] = r.total_bits_error;
        arr.push_back(std::move(j));
    }
    {
        const auto path = (fs::path(out_dir) / "summary.json").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_results: cannot write " + path);
        out << summary.dump(2) << '\n';
        written.push_back(path);
    }

    for (const auto& r : results) {
        const std::string name =
            results.size() == 1 ? "curves.csv"
                                : "curves_s" + std::to_string(r.sweep_index) + "_r" +
                                      std::to_string(r.run_index) + ".csv";
        const auto path = (fs::path(out_dir) / name).string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_results: cannot write " + path);
        out << "t,O,U,X,D,total_power,water_level\n";
        out.precision(17);
        for (std::size_t t = 0; t < r.X.size(); ++t) {
            out << (t + 1) << ',' << r.O[t] << ',' << r.U[t] << ',' << r.X[t] << ','
                << r.D[t] << ',' << r.total_power[t] << ',';
            if (t < r.water_level.size()) out << r.water_level[t];
            out << '\n';
        }
        written.push_back(path);
    }
    return written;
}

}  // namespace vbrpc
