#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vbrpc/harness.hpp"

namespace {

struct CliOptions {
    vbrpc::ExperimentConfig cfg;
    std::string synthetic_spec;
    std::string channel_name = "rayleigh";
    std::string sweep_values_csv;
    double delta_steps = 100.0;
    std::string out_dir = "out";
    bool seed_given = false;
};

std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        vals.push_back(std::stod(tok));
    }
    return vals;
}

void add_common_options(CLI::App* app, CliOptions& opt) {
    auto& cfg = opt.cfg;
    app->add_option("--trace", cfg.trace_path, "frame-size CSV (frame_index,frame_size_bits)");
    app->add_option("--synthetic", opt.synthetic_spec,
                    "synthetic trace spec T,Ng,mean_bits,i_frame_ratio");
    app->add_option("--channel", opt.channel_name, "rayleigh | gm")
        ->check(CLI::IsMember({"rayleigh", "gm"}));
    app->add_option("--alpha", cfg.alpha, "channel correlation (gauss-markov)");
    app->add_option("--alpha-hat", cfg.group.alpha_hat, "estimated correlation");
    app->add_option("--sigma-h-sq", [&cfg](const std::vector<std::string>& v) {
        cfg.sigma_h_sq = std::stod(v.front());
        return true;
    }, "fading variance (default: mean path gain)");
    app->add_option("--mean-gain", cfg.mean_gain, "mean path gain G");
    app->add_option("--bc", cfg.Bc, "per-subchannel bandwidth (Hz)");
    app->add_option("--m", cfg.M, "subchannel count");
    app->add_option("--n0", [&cfg](const std::vector<std::string>& v) {
        cfg.N0 = std::stod(v.front());
        return true;
    }, "noise density W/Hz (default 1e-3/Bc)");
    app->add_option("--fmax-ratio", cfg.fmax_ratio, "buffer as multiple of the largest frame");
    app->add_option("--fmax-bits", [&cfg](const std::vector<std::string>& v) {
        cfg.fmax_bits = std::stod(v.front());
        return true;
    }, "absolute buffer size (bits)");
    app->add_option("--pmax", [&cfg](const std::vector<std::string>& v) {
        const double p = std::stod(v.front());
        cfg.pmax = p;
        cfg.rl.pmax = p;
        return true;
    }, "total power cap (W); tm/sarsa derive one when absent");
    app->add_option("--ng", cfg.group.Ng, "GoP size in frames");
    app->add_option("--l", cfg.group.L, "GoPs per prediction group");
    app->add_option("--epsilon", cfg.rl.epsilon, "exploration probability");
    app->add_option("--discount", cfg.rl.discount, "reward discount factor");
    app->add_option("--delta-steps", opt.delta_steps, "action grid steps between 0 and Pmax");
    app->add_option("--runs", cfg.runs, "Monte Carlo repetitions");
    auto* seed = app->add_option("--seed", cfg.seed, "master RNG seed");
    app->callback([&opt, seed]() { opt.seed_given = seed->count() > 0; });
    app->add_option("--jobs", cfg.jobs, "concurrent runs");
    app->add_option("--out", opt.out_dir, "output directory");
}

int execute(CliOptions& opt) {
    auto& cfg = opt.cfg;
    if (!opt.seed_given) {
        if (const char* env = std::getenv("VBR_POWERCTL_SEED")) cfg.seed = std::stoull(env);
    }
    cfg.channel = opt.channel_name == "gm" ? vbrpc::ChannelModel::gauss_markov
                                           : vbrpc::ChannelModel::rayleigh;
    if ((cfg.policy == vbrpc::Policy::gwf || cfg.policy == vbrpc::Policy::sarsa) &&
        opt.channel_name == "rayleigh") {
        cfg.channel = vbrpc::ChannelModel::gauss_markov;  // online policies predict
    }
    if (!opt.synthetic_spec.empty()) {
        auto v = parse_csv_doubles(opt.synthetic_spec);
        if (v.size() != 4)
            throw vbrpc::InvalidInput("--synthetic expects T,Ng,mean_bits,i_frame_ratio");
        vbrpc::SyntheticTraceSpec s;
        s.T = static_cast<std::size_t>(v[0]);
        s.Ng = static_cast<std::size_t>(v[1]);
        s.mean_bits = v[2];
        s.i_frame_ratio = v[3];
        cfg.synthetic = s;
    }
    if (opt.delta_steps > 0.0 && cfg.rl.pmax > 0.0)
        cfg.rl.delta = cfg.rl.pmax / opt.delta_steps;

    auto results = vbrpc::run_experiment(cfg);
    auto files = vbrpc::emit_results(results, opt.out_dir);

    double mean_power = 0.0, mean_under = 0.0, mean_over = 0.0;
    for (const auto& r : results) {
        mean_power += r.avg_power;
        mean_under += r.underflow_prob;
        mean_over += r.overflow_prob;
    }
    const double n = static_cast<double>(results.size());
    std::cout << vbrpc::to_string(cfg.policy) << ": " << results.size() << " run(s), mean avg power "
              << mean_power / n << " W, mean underflow " << mean_under / n
              << ", mean overflow " << mean_over / n << "\n";
    std::cout << "wrote " << files.size() << " file(s) under " << opt.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transmit-power scheduling for VBR video over fading subchannels"};
    app.require_subcommand(1);

    CliOptions opt;

    auto* pm = app.add_subcommand("pm", "offline power minimization");
    auto* tm = app.add_subcommand("tm", "offline completion-time minimization");
    auto* gwf = app.add_subcommand("gwf", "online grouped water-filling");
    auto* sarsa = app.add_subcommand("sarsa", "online approximate SARSA");
    auto* sweep = app.add_subcommand("sweep", "parameter sweep for any policy");

    for (auto* sub : {pm, tm, gwf, sarsa, sweep}) add_common_options(sub, opt);

    std::string sweep_policy = "pm";
    sweep->add_option("--policy", sweep_policy, "pm | tm | gwf | sarsa")
        ->check(CLI::IsMember({"pm", "tm", "gwf", "sarsa"}));
    sweep->add_option("--param", opt.cfg.sweep_param,
                      "fmax-ratio | alpha | alpha-hat | ng | l | pmax | epsilon | discount")
        ->required();
    sweep->add_option("--values", opt.sweep_values_csv, "comma-separated sweep values")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (pm->parsed()) opt.cfg.policy = vbrpc::Policy::pm;
        if (tm->parsed()) opt.cfg.policy = vbrpc::Policy::tm;
        if (gwf->parsed()) opt.cfg.policy = vbrpc::Policy::gwf;
        if (sarsa->parsed()) opt.cfg.policy = vbrpc::Policy::sarsa;
        if (sweep->parsed()) {
            if (sweep_policy == "pm") opt.cfg.policy = vbrpc::Policy::pm;
            if (sweep_policy == "tm") opt.cfg.policy = vbrpc::Policy::tm;
            if (sweep_policy == "gwf") opt.cfg.policy = vbrpc::Policy::gwf;
            if (sweep_policy == "sarsa") opt.cfg.policy = vbrpc::Policy::sarsa;
            opt.cfg.sweep_values = parse_csv_doubles(opt.sweep_values_csv);
        }
        return execute(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
