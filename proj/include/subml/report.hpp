#pragma once

// CSV and SVG output for sweeps.

#include "subml/harness.hpp"

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace subml {

const char* version();

// Settings that reproduce a run. Serialized as one JSON object on the first
// line of every CSV, prefixed with "# ".
struct RunManifest {
    std::string command;
    LinkConfig link;
    // Wall-clock stamp, only when asked for; a stamped file is no longer
    // byte-identical across re-runs.
    std::optional<std::string> timestamp;

    std::string json() const;
    std::string header_line() const { return "# " + json(); }
};

// Shortest round-trip decimal, '.' separator, independent of the C locale.
std::string format_number(double v);

inline constexpr std::array<std::string_view, 13> kSweepColumns = {
    "snr_db", "beta",  "target_p",  "ser",             "ser_ci_lo",      "ser_ci_hi", "ber",
    "ber_ci_lo", "ber_ci_hi", "norm_complexity", "hit_rate", "paper_hit_prob", "trials"};

void write_sweep_csv(std::ostream& out, const RunManifest& manifest,
                     const std::vector<SweepPoint>& points);

// Exhaustive-ML baseline on the same realizations. Complexity sweeps report
// norm_complexity = 1 and leave the error columns empty.
inline constexpr std::array<std::string_view, 9> kBaselineColumns = {
    "snr_db", "ser", "ser_ci_lo", "ser_ci_hi", "ber", "ber_ci_lo", "ber_ci_hi", "norm_complexity",
    "trials"};

void write_baseline_csv(std::ostream& out, const RunManifest& manifest,
                        const std::vector<SweepPoint>& points);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
    bool markers = true;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    // Linear axes only; unset means fit the data.
    std::optional<double> y_min;
    std::optional<double> y_max;
    std::vector<Series> series;
};

// Self-contained SVG. On log axes non-positive values are dropped.
void write_svg(std::ostream& out, const PlotSpec& spec);

PlotSpec complexity_plot(const std::vector<SweepPoint>& points, const std::string& title);
PlotSpec ber_plot(const std::vector<SweepPoint>& points, const std::string& title);

} // namespace subml
