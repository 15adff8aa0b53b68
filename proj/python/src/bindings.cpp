#include "subml/analytics.hpp"
#include "subml/cli.hpp"
#include "subml/config.hpp"
#include "subml/constellation.hpp"
#include "subml/harness.hpp"
#include "subml/report.hpp"
#include "subml/solver.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace subml;

namespace {

LinkConfig make_link(const std::string& mod, const std::string& mimo, const std::string& channel,
                     const std::string& target, const std::string& branch) {
    LinkConfig cfg;
    const auto m = parse_modulation(mod);
    cfg.scheme = m.scheme;
    cfg.order = m.order;
    std::tie(cfg.nt, cfg.nr) = parse_mimo(mimo);
    cfg.channel = parse_channel(channel);
    cfg.target = TargetRule::parse(target);
    cfg.branch = parse_branch(branch);
    return cfg;
}

py::dict estimate(const ProportionEstimate& e) {
    py::dict d;
    d["events"] = e.events;
    d["trials"] = e.trials;
    d["rate"] = e.rate;
    d["ci_lo"] = e.ci_lo;
    d["ci_hi"] = e.ci_hi;
    return d;
}

py::list points_to_list(const std::vector<SweepPoint>& pts) {
    py::list out;
    for (const auto& p : pts) {
        py::dict d;
        d["snr_db"] = p.snr_db;
        d["n0"] = p.n0;
        d["d_min"] = p.d_min;
        d["beta"] = p.beta;
        d["target_p"] = p.target_p;
        d["p_min"] = p.p_min;
        d["ser"] = estimate(p.ser);
        d["ber"] = estimate(p.ber);
        d["norm_complexity"] = p.norm_complexity;
        d["hit_rate"] = p.hit_rate;
        d["paper_hit_prob"] = p.paper_hit_prob;
        d["trials"] = p.trials;
        if (p.has_ml) {
            d["ml_ser"] = estimate(p.ml_ser);
            d["ml_ber"] = estimate(p.ml_ber);
        }
        d["model_ser"] = p.model_ser;
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Early-exit detection with shifted decision boundaries";
    m.attr("__version__") = version();

    auto base = py::register_exception<Error>(m, "SubmlError", PyExc_RuntimeError);
    py::register_exception<Infeasible>(m, "Infeasible", base.ptr());
    py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<SweepAborted>(m, "SweepAborted", base.ptr());

    m.def("erfc", &subml::erfc, py::arg("x"));
    m.def("qfunc", &qfunc, py::arg("x"));

    m.def(
        "ser_bpsk", [](double d, double n0, double beta) { return ser_bpsk({d, n0, beta}); },
        py::arg("d_min"), py::arg("n0"), py::arg("beta"));
    m.def(
        "ser_pam4", [](double d, double n0, double beta) { return ser_pam4({d, n0, beta}); },
        py::arg("d_min"), py::arg("n0"), py::arg("beta"));
    m.def(
        "ser_qam16", [](double d, double n0, double beta) { return ser_qam16({d, n0, beta}); },
        py::arg("d_min"), py::arg("n0"), py::arg("beta"));
    m.def(
        "ser_qam16_exact",
        [](double d, double n0, double beta) { return ser_qam16_exact({d, n0, beta}); },
        py::arg("d_min"), py::arg("n0"), py::arg("beta"));
    m.def(
        "ser_mqam",
        [](unsigned order, double d, double n0, double beta) {
            return ser_mqam(order, {d, n0, beta});
        },
        py::arg("order"), py::arg("d_min"), py::arg("n0"), py::arg("beta"));
    m.def("pairwise_error_prob", &pairwise_error_prob, py::arg("gamma_c"), py::arg("nr"));
    m.def(
        "union_bound_mimo",
        [](const std::string& mod, unsigned nt, unsigned nr, double n0) {
            const auto mo = parse_modulation(mod);
            const auto v = VectorConstellation::uniform(build_constellation(mo.scheme, mo.order), nt);
            return union_bound_mimo(MimoBoundParams::from_constellation(v, nr, n0));
        },
        py::arg("mod"), py::arg("nt"), py::arg("nr"), py::arg("n0"));

    m.def(
        "constellation",
        [](const std::string& mod) {
            const auto mo = parse_modulation(mod);
            const auto c = build_constellation(mo.scheme, mo.order);
            py::dict d;
            d["points"] = std::vector<cplx>(c.points().begin(), c.points().end());
            d["labels"] = std::vector<std::uint32_t>(c.labels().begin(), c.labels().end());
            d["d_min"] = c.d_min();
            return d;
        },
        py::arg("mod"), "Unit-energy points, Gray labels and d_min.");

    m.def(
        "solve_beta",
        [](double snr_db, const std::string& mod, const std::string& mimo,
           const std::string& channel, const std::string& target, const std::string& branch) {
            const auto cfg = make_link(mod, mimo, channel, target, branch);
            const auto t = resolve_threshold(cfg, snr_db);
            py::dict d;
            d["beta"] = t.beta;
            d["target_p"] = t.target_p;
            d["p_min"] = t.p_min;
            d["d_min"] = t.d_min;
            d["residual"] = t.solution.residual;
            d["iterations"] = t.solution.iterations;
            return d;
        },
        py::arg("snr_db"), py::arg("mod") = "qam16", py::arg("mimo") = "1x1",
        py::arg("channel") = "identity", py::arg("target") = "pmin-factor:2",
        py::arg("branch") = "lower");

    const auto sweep = [](bool ber) {
        return [ber](const std::vector<double>& snr_db, const std::string& mod,
                     const std::string& mimo, const std::string& channel,
                     const std::string& target, std::uint64_t trials, std::uint64_t seed,
                     unsigned threads) {
            auto cfg = make_link(mod, mimo, channel, target, "lower");
            cfg.snr_db = snr_db;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.threads = threads;
            std::vector<SweepPoint> pts;
            {
                py::gil_scoped_release release;
                pts = ber ? run_ber_sweep(cfg) : run_complexity_sweep(cfg);
            }
            return points_to_list(pts);
        };
    };
    m.def("complexity_sweep", sweep(false), py::arg("snr_db"), py::arg("mod") = "qam16",
          py::arg("mimo") = "2x2", py::arg("channel") = "identity",
          py::arg("target") = "pmin-factor:2", py::arg("trials") = 100000, py::arg("seed") = 1,
          py::arg("threads") = 0);
    m.def("ber_sweep", sweep(true), py::arg("snr_db"), py::arg("mod") = "qam16",
          py::arg("mimo") = "2x2", py::arg("channel") = "identity",
          py::arg("target") = "pmin-factor:2", py::arg("trials") = 100000, py::arg("seed") = 1,
          py::arg("threads") = 0);

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "subml");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = run_cli(int(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in process; returns (code, stdout, stderr).");
}
