#include "subml/cli.hpp"

#include "subml/analytics.hpp"
#include "subml/config.hpp"
#include "subml/error.hpp"
#include "subml/harness.hpp"
#include "subml/report.hpp"
#include "subml/validate.hpp"

#include <CLI11.hpp>

#include <ctime>
#include <iomanip>
#include <fstream>
#include <optional>

namespace subml {

namespace {

struct LinkFlags {
    std::string mod;
    std::string mimo;
    std::string channel;
    std::string target;
    std::string branch;
};

struct SweepFlags {
    LinkFlags link;
    std::string config;
    std::string snr_range;
    std::string snr_list;
    std::string trials;
    std::string seed;
    std::string threads;
    std::string out;
    std::string plot;
    std::string ml_out;
    bool stamp_time = false;
};

struct SolveFlags {
    LinkFlags link;
    std::string snr;
};

void add_link_flags(CLI::App& cmd, LinkFlags& f) {
    cmd.add_option("--mod", f.mod, "Modulation: bpsk, pam<M> or qam<M> (default qam16)");
    cmd.add_option("--mimo", f.mimo, "Antennas as <Nt>x<Nr> (default 1x1)");
    cmd.add_option("--channel", f.channel, "identity or rayleigh (default identity)");
    cmd.add_option("--target", f.target, "pmin-factor:<c> or abs:<p> (default pmin-factor:2)");
    cmd.add_option("--branch", f.branch, "Root to return: lower or upper (default lower)");
}

// Applies whichever link flags were given on top of `cfg`.
void apply_link_flags(const LinkFlags& f, LinkConfig& cfg) {
    if (!f.mod.empty()) {
        const auto m = parse_modulation(f.mod, "--mod");
        cfg.scheme = m.scheme;
        cfg.order = m.order;
    }
    if (!f.mimo.empty()) std::tie(cfg.nt, cfg.nr) = parse_mimo(f.mimo, "--mimo");
    if (!f.channel.empty()) cfg.channel = parse_channel(f.channel, "--channel");
    if (!f.target.empty()) {
        try {
            cfg.target = TargetRule::parse(f.target);
        } catch (const ConfigError& e) {
            throw ConfigError("--target", e.what());
        }
    }
    if (!f.branch.empty()) cfg.branch = parse_branch(f.branch, "--branch");
}

void check_link(const LinkConfig& cfg) {
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("link", e.what());
    }
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ResolvedSweep {
    LinkConfig cfg;
    std::optional<std::string> out;
    std::optional<std::string> plot;
    std::optional<std::string> ml_out;
};

// Defaults, then the config file, then flags.
ResolvedSweep resolve_sweep(const SweepFlags& f) {
    ResolvedSweep r;
    auto& cfg = r.cfg;
    cfg.target = TargetRule::factor_of_pmin(2.0);
    if (!f.config.empty()) {
        const auto s = load_sweep_config(f.config);
        if (s.modulation) cfg.scheme = s.modulation->scheme, cfg.order = s.modulation->order;
        if (s.mimo) std::tie(cfg.nt, cfg.nr) = *s.mimo;
        if (s.channel) cfg.channel = *s.channel;
        if (s.snr_db) cfg.snr_db = *s.snr_db;
        if (s.target) cfg.target = *s.target;
        if (s.trials) cfg.trials = *s.trials;
        if (s.seed) cfg.seed = *s.seed;
        if (s.branch) cfg.branch = *s.branch;
        if (s.threads) cfg.threads = *s.threads;
        r.out = s.csv;
        r.plot = s.plot;
        r.ml_out = s.ml_csv;
    }
    apply_link_flags(f.link, cfg);
    if (!f.snr_range.empty() && !f.snr_list.empty())
        throw ConfigError("--snr-db-range", "give --snr-db-range or --snr-db, not both");
    if (!f.snr_range.empty()) cfg.snr_db = parse_snr_range(f.snr_range, "--snr-db-range");
    if (!f.snr_list.empty()) cfg.snr_db = parse_snr_list(f.snr_list, "--snr-db");
    if (!f.trials.empty()) {
        cfg.trials = parse_count(f.trials, "--trials");
        if (cfg.trials == 0) throw ConfigError("--trials", "trials must be >= 1");
    }
    if (!f.seed.empty()) cfg.seed = parse_count(f.seed, "--seed");
    if (!f.threads.empty()) {
        const auto t = parse_count(f.threads, "--threads");
        if (t > 4096) throw ConfigError("--threads", "thread count is unreasonably large");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (!f.out.empty()) r.out = f.out;
    if (!f.plot.empty()) r.plot = f.plot;
    if (!f.ml_out.empty()) r.ml_out = f.ml_out;
    if (cfg.snr_db.empty())
        throw ConfigError("snr", "no SNR grid; give --snr-db-range, --snr-db or snr_db_range");
    check_link(cfg);
    return r;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    return f;
}

std::string link_title(const LinkConfig& cfg) {
    return modulation_name(cfg.scheme, cfg.order) + " " + std::to_string(cfg.nt) + "x" +
           std::to_string(cfg.nr) + " " + to_string(cfg.channel) + ", target " + cfg.target.str();
}

int cmd_sweep(const SweepFlags& f, bool ber, std::ostream& out) {
    const auto r = resolve_sweep(f);
    RunManifest manifest{ber ? "ber-sweep" : "complexity-sweep", r.cfg, std::nullopt};
    if (f.stamp_time) manifest.timestamp = utc_timestamp();

    const auto points = ber ? run_ber_sweep(r.cfg) : run_complexity_sweep(r.cfg);

    if (r.out) {
        auto file = open_output(*r.out);
        write_sweep_csv(file, manifest, points);
        out << "wrote " << *r.out << " (" << points.size() << " points)\n";
    } else {
        write_sweep_csv(out, manifest, points);
    }
    if (r.ml_out) {
        auto file = open_output(*r.ml_out);
        write_baseline_csv(file, manifest, points);
        out << "wrote " << *r.ml_out << '\n';
    }
    if (r.plot) {
        auto file = open_output(*r.plot);
        const auto title = (ber ? "BER vs SNR, " : "Search complexity vs SNR, ") + link_title(r.cfg);
        write_svg(file, ber ? ber_plot(points, title) : complexity_plot(points, title));
        out << "wrote " << *r.plot << '\n';
    }
    return kExitOk;
}

int cmd_solve_beta(const SolveFlags& f, std::ostream& out) {
    LinkConfig cfg;
    cfg.target = TargetRule::factor_of_pmin(2.0);
    apply_link_flags(f.link, cfg);
    const double snr = parse_real(f.snr, "--snr-db");
    cfg.snr_db = {snr};
    check_link(cfg);

    const auto th = resolve_threshold(cfg, snr);
    const auto& s = th.solution;
    const auto row = [&](const char* key, const std::string& value) {
        out << std::left << std::setw(12) << key << value << '\n';
    };
    row("modulation", modulation_name(cfg.scheme, cfg.order));
    row("mimo", std::to_string(cfg.nt) + "x" + std::to_string(cfg.nr));
    row("objective", cfg.uses_siso_objective() ? "siso-ber" : "mimo-union-bound");
    row("snr_db", format_number(snr));
    row("n0", format_number(n0_from_snr_db(snr)));
    row("d_min", format_number(th.d_min));
    row("p_min", format_number(th.p_min));
    row("target_p", format_number(th.target_p));
    row("beta", format_number(th.beta));
    row("beta/d_min", format_number(th.beta / th.d_min));
    row("residual", format_number(s.residual));
    row("iterations", std::to_string(s.iterations));
    row("branch", to_string(s.branch));
    return kExitOk;
}

int cmd_validate(bool quick, const std::string& threads, std::ostream& out) {
    ValidateOptions opts;
    opts.quick = quick;
    if (!threads.empty()) opts.threads = static_cast<unsigned>(parse_count(threads, "--threads"));
    return print_validation(out, run_validation(opts)) ? kExitOk : kExitFailure;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Early-exit ML detection with a target error rate"};
    app.set_version_flag("--version", std::string("subml ") + version());
    app.require_subcommand(1);

    SolveFlags solve;
    auto* solve_cmd = app.add_subcommand("solve-beta", "Solve the boundary shift for one SNR");
    add_link_flags(*solve_cmd, solve.link);
    solve_cmd->add_option("--snr-db", solve.snr, "Es/N0 in dB")->required();

    SweepFlags sweep;
    const auto add_sweep = [&](const char* name, const char* help) {
        auto* cmd = app.add_subcommand(name, help);
        add_link_flags(*cmd, sweep.link);
        cmd->add_option("--config", sweep.config, "INI file with [link], [sweep], [output]");
        cmd->add_option("--snr-db-range", sweep.snr_range, "SNR grid a:b:step in dB, inclusive");
        cmd->add_option("--snr-db", sweep.snr_list, "Comma-separated SNR list in dB");
        cmd->add_option("--trials", sweep.trials, "Trials per SNR point (default 100000)");
        cmd->add_option("--seed", sweep.seed, "Master seed (default 1)");
        cmd->add_option("--threads", sweep.threads, "Worker threads (default SUBML_THREADS or all)");
        cmd->add_option("--out", sweep.out, "CSV path (default stdout)");
        cmd->add_option("--plot", sweep.plot, "SVG path");
        cmd->add_option("--ml-out", sweep.ml_out, "CSV path for the full-search baseline");
        cmd->add_flag("--stamp-time", sweep.stamp_time, "Record the wall-clock time in the header");
        return cmd;
    };
    auto* ber_cmd = add_sweep("ber-sweep", "Error rates of early exit and full search vs SNR");
    auto* cx_cmd = add_sweep("complexity-sweep", "Search complexity vs SNR");

    bool quick = false;
    std::string validate_threads;
    auto* val_cmd = app.add_subcommand("validate", "Run numerical self-checks");
    val_cmd->add_flag("--quick", quick, "Skip the long Monte Carlo checks");
    val_cmd->add_option("--threads", validate_threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*solve_cmd) return cmd_solve_beta(solve, out);
        if (*ber_cmd) return cmd_sweep(sweep, true, out);
        if (*cx_cmd) return cmd_sweep(sweep, false, out);
        if (*val_cmd) return cmd_validate(quick, validate_threads, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UnsupportedOrder& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Infeasible& e) {
        err << "error: infeasible target: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const NoConvergence& e) {
        err << "error: no convergence: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const SweepAborted& e) {
        err << "error: " << e.what() << '\n';
        return kExitSweepAborted;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace subml
