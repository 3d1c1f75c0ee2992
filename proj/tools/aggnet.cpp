// aggnet: parameter sweeps and simulations from the command line.

#include "aggnet/errors.hpp"
#include "aggnet/sweep.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Args {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
    std::string format = "csv";
    long long seed = -1;
    int threads = 1;
    std::string trajectory;
};

int execute(aggnet::Mode mode, const Args& a) {
    aggnet::SweepConfig cfg;
    cfg.mode = mode;
    if (!a.config.empty()) cfg = aggnet::SweepConfig::from_file(a.config, mode);
    for (const auto& s : a.sets) cfg.set(s);
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
    const aggnet::Format fmt = aggnet::format_from_string(a.format);

    aggnet::RunOptions opts;
    opts.threads = a.threads;
    opts.trajectory_path = a.trajectory;
    const aggnet::ResultTable table = aggnet::run(cfg, opts);
    if (a.out.empty() || a.out == "-") aggnet::emit(table, fmt, std::cout);
    else aggnet::emit_file(table, fmt, a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Social learning with AI aggregators: closed forms, sweeps and simulations"};
    app.require_subcommand(1);
    app.footer(
        "Settings are applied in order: --config file, then each --set, then --seed.\n"
        "Values: key=value, or key=lo:hi:steps[:log] for a sweep.\n"
        "Keys: h pi rho alpha beta beta1 beta2 b11 b12 b21 b22 n1 n2 p_s p_d.\n"
        "Exit codes: 0 ok, 2 input or config error, 3 numerical failure.");

    Args args;
    struct Sub {
        aggnet::Mode mode;
        const char* help;
    };
    const std::vector<Sub> subs = {
        {aggnet::Mode::Consensus, "closed-form, perturbation and simulated consensus"},
        {aggnet::Mode::Gap, "two-island learning gaps"},
        {aggnet::Mode::Regime, "homophily regime and thresholds (equal reliance)"},
        {aggnet::Mode::RobustSet, "robust training-weight interval; h gives [h_lo, h_hi] and grid size"},
        {aggnet::Mode::RhoStar, "updating-speed threshold; h gives [h_lo, h_hi] and grid size"},
        {aggnet::Mode::LocalCompare, "local aggregators against none and against a global design"},
        {aggnet::Mode::Simulate, "block-model network samples against the island prediction"},
    };
    aggnet::Mode chosen = aggnet::Mode::Gap;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(aggnet::to_string(s.mode), s.help);
        sub->add_option("--config", args.config, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--set", args.sets, "override key=value or key=lo:hi:steps[:log]");
        sub->add_option("--out", args.out, "output path (stdout when omitted or -)");
        sub->add_option("--format", args.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", args.seed, "random seed, overrides the config")->check(CLI::NonNegativeNumber);
        sub->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
        if (s.mode == aggnet::Mode::Simulate)
            sub->add_option("--trajectory", args.trajectory, "write the belief trajectory of a one-point run");
        sub->callback([&chosen, m = s.mode] { chosen = m; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        return execute(chosen, args);
    } catch (const aggnet::NumericalError& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return kExitNumerical;
    } catch (const aggnet::Error& e) {
        std::cerr << e.name() << ": " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
