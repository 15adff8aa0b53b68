#include "subml/report.hpp"

#include "subml/channel.hpp"
#include "subml/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#ifndef SUBML_VERSION
#define SUBML_VERSION "0.0.0"
#endif

namespace subml {

const char* version() { return SUBML_VERSION; }

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string RunManifest::json() const {
    nlohmann::ordered_json j;
    j["tool"] = "subml";
    j["version"] = version();
    j["command"] = command;
    j["modulation"] = modulation_name(link.scheme, link.order);
    j["nt"] = link.nt;
    j["nr"] = link.nr;
    j["channel"] = to_string(link.channel);
    j["snr_db"] = link.snr_db;
    j["target"] = link.target.str();
    j["trials"] = link.trials;
    j["seed"] = link.seed;
    j["branch"] = to_string(link.branch);
    j["noise"] = kNoiseConvention;
    j["timestamp"] = timestamp ? nlohmann::ordered_json(*timestamp) : nlohmann::ordered_json();
    return j.dump();
}

namespace {

template <std::size_t N>
void write_header(std::ostream& out, const std::array<std::string_view, N>& cols) {
    for (std::size_t i = 0; i < N; ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        out << (first ? "" : ",") << c;
        first = false;
    }
    out << '\n';
}

} // namespace

void write_sweep_csv(std::ostream& out, const RunManifest& manifest,
                     const std::vector<SweepPoint>& points) {
    out << manifest.header_line() << '\n';
    write_header(out, kSweepColumns);
    const auto f = format_number;
    for (const auto& p : points) {
        write_row(out, {f(p.snr_db), f(p.beta), f(p.target_p), f(p.ser.rate), f(p.ser.ci_lo),
                        f(p.ser.ci_hi), f(p.ber.rate), f(p.ber.ci_lo), f(p.ber.ci_hi),
                        f(p.norm_complexity), f(p.hit_rate), f(p.paper_hit_prob),
                        std::to_string(p.trials)});
    }
}

void write_baseline_csv(std::ostream& out, const RunManifest& manifest,
                        const std::vector<SweepPoint>& points) {
    out << manifest.header_line() << '\n';
    write_header(out, kBaselineColumns);
    const auto f = format_number;
    for (const auto& p : points) {
        if (p.has_ml)
            write_row(out, {f(p.snr_db), f(p.ml_ser.rate), f(p.ml_ser.ci_lo), f(p.ml_ser.ci_hi),
                            f(p.ml_ber.rate), f(p.ml_ber.ci_lo), f(p.ml_ber.ci_hi), "1",
                            std::to_string(p.trials)});
        else
            write_row(out, {f(p.snr_db), "", "", "", "", "", "", "1", std::to_string(p.trials)});
    }
}

namespace {

std::string fixed(double v, int digits = 2) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Tick positions at 1, 2 or 5 times a power of ten covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

std::string tick_label(double v) { return format_number(std::round(v * 1e9) / 1e9); }

} // namespace

void write_svg(std::ostream& out, const PlotSpec& spec) {
    constexpr double W = 720, H = 480, L = 80, R = 170, T = 50, B = 60;
    const double pw = W - L - R, ph = H - T - B;

    const auto y_of = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const auto& s : spec.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (spec.log_y && !(s.y[i] > 0.0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, y_of(s.y[i]));
            y1 = std::max(y1, y_of(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) {
        x0 = 0, x1 = 1, y0 = spec.log_y ? -1 : 0, y1 = spec.log_y ? 0 : 1;
    }
    if (x1 == x0) x0 -= 1, x1 += 1;
    if (spec.log_y) {
        y0 = std::floor(y0);
        y1 = std::ceil(y1);
        if (y1 == y0) y1 = y0 + 1;
    } else {
        if (spec.y_min) y0 = *spec.y_min;
        if (spec.y_max) y1 = *spec.y_max;
        if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    }

    const auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * pw; };
    const auto py = [&](double y) { return T + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << fixed(L + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(spec.title) << "</text>\n";

    // Grid and tick labels.
    out << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    const auto xt = nice_ticks(x0, x1);
    for (double t : xt)
        out << "<line x1=\"" << fixed(px(t)) << "\" y1=\"" << fixed(T) << "\" x2=\"" << fixed(px(t))
            << "\" y2=\"" << fixed(T + ph) << "\"/>\n";
    std::vector<double> yt;
    if (spec.log_y) {
        for (double e = y0; e <= y1 + 1e-9; e += 1.0) yt.push_back(e);
    } else {
        yt = nice_ticks(y0, y1);
    }
    for (double t : yt)
        out << "<line x1=\"" << fixed(L) << "\" y1=\"" << fixed(py(t)) << "\" x2=\"" << fixed(L + pw)
            << "\" y2=\"" << fixed(py(t)) << "\"/>\n";
    out << "</g>\n";
    out << "<rect x=\"" << fixed(L) << "\" y=\"" << fixed(T) << "\" width=\"" << fixed(pw)
        << "\" height=\"" << fixed(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : xt)
        out << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(T + ph + 18)
            << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
    for (double t : yt) {
        const std::string label = spec.log_y ? "1e" + tick_label(t) : tick_label(t);
        out << "<text x=\"" << fixed(L - 8) << "\" y=\"" << fixed(py(t) + 4)
            << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    out << "<text x=\"" << fixed(L + pw / 2) << "\" y=\"" << fixed(H - 15)
        << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    out << "<text transform=\"translate(20 " << fixed(T + ph / 2)
        << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

    // Series.
    double legend_y = T + 10;
    for (const auto& s : spec.series) {
        std::string path;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            if (spec.log_y && !(s.y[i] > 0.0)) continue;
            pts.emplace_back(px(s.x[i]), py(y_of(s.y[i])));
        }
        for (std::size_t i = 0; i < pts.size(); ++i)
            path += (i ? " L" : "M") + fixed(pts[i].first) + ' ' + fixed(pts[i].second);
        const std::string dash = s.dashed ? " stroke-dasharray=\"6 4\"" : "";
        if (!path.empty())
            out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"2\"" << dash << "/>\n";
        if (s.markers)
            for (const auto& [x, y] : pts)
                out << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"3\" fill=\""
                    << s.color << "\"/>\n";
        const double lx = L + pw + 15;
        out << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(legend_y) << "\" x2=\""
            << fixed(lx + 25) << "\" y2=\"" << fixed(legend_y) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"" << dash << "/>\n";
        out << "<text x=\"" << fixed(lx + 32) << "\" y=\"" << fixed(legend_y + 4) << "\">"
            << escape(s.name) << "</text>\n";
        legend_y += 20;
    }
    out << "</svg>\n";
}

PlotSpec complexity_plot(const std::vector<SweepPoint>& points, const std::string& title) {
    PlotSpec spec;
    spec.title = title;
    spec.x_label = "Es/N0 (dB)";
    spec.y_label = "normalized complexity";
    spec.y_min = 0.0;
    spec.y_max = 1.05;
    Series pd{"early exit", {}, {}, "#1f77b4", false, true};
    Series ml{"ML (full search)", {}, {}, "#d62728", true, false};
    for (const auto& p : points) {
        pd.x.push_back(p.snr_db);
        pd.y.push_back(p.norm_complexity);
        ml.x.push_back(p.snr_db);
        ml.y.push_back(1.0);
    }
    spec.series = {pd, ml};
    return spec;
}

PlotSpec ber_plot(const std::vector<SweepPoint>& points, const std::string& title) {
    PlotSpec spec;
    spec.title = title;
    spec.x_label = "Es/N0 (dB)";
    spec.y_label = "bit error rate";
    spec.log_y = true;
    Series pd{"early exit", {}, {}, "#1f77b4", false, true};
    Series ml{"ML (full search)", {}, {}, "#d62728", true, true};
    for (const auto& p : points) {
        pd.x.push_back(p.snr_db);
        pd.y.push_back(p.ber.rate);
        if (p.has_ml) {
            ml.x.push_back(p.snr_db);
            ml.y.push_back(p.ml_ber.rate);
        }
    }
    spec.series = {pd, ml};
    return spec;
}

} // namespace subml
