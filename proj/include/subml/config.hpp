#pragma once

// Text forms of link settings and the INI-style sweep config file.
//
//   [link]
//   modulation = qam16        ; bpsk | pam<M> | qam<M>
//   mimo       = 2x2          ; <Nt>x<Nr>
//   channel    = identity     ; identity | rayleigh
//
//   [sweep]
//   snr_db_range = 0:14:2     ; or: snr_db = 0, 2, 4
//   target  = pmin-factor:2.0 ; or abs:<p>
//   trials  = 100000
//   seed    = 1
//   branch  = lower           ; lower | upper
//   threads = 0               ; 0 = SUBML_THREADS or all cores
//
//   [output]
//   csv    = sweep.csv
//   plot   = sweep.svg
//   ml_csv = sweep_ml.csv
//
// Comments start with '#' or ';'. Every key is optional; flags given on the
// command line override the file.

#include "subml/channel.hpp"
#include "subml/constellation.hpp"
#include "subml/harness.hpp"
#include "subml/solver.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace subml {

struct Modulation {
    Scheme scheme = Scheme::QAM;
    unsigned order = 16;
};

// All parsers throw ConfigError naming `field`.
Modulation parse_modulation(const std::string& text, const std::string& field = "mod");
std::string modulation_name(Scheme scheme, unsigned order);
std::pair<unsigned, unsigned> parse_mimo(const std::string& text,
                                         const std::string& field = "mimo");
ChannelMode parse_channel(const std::string& text, const std::string& field = "channel");
Branch parse_branch(const std::string& text, const std::string& field = "branch");
double parse_real(const std::string& text, const std::string& field);
std::uint64_t parse_count(const std::string& text, const std::string& field);

// "a:b:step", inclusive of b. Values are rounded to 1e-9 dB so that
// 0:1:0.1-style grids print cleanly.
std::vector<double> parse_snr_range(const std::string& text,
                                    const std::string& field = "snr-db-range");
// "0, 2, 4"
std::vector<double> parse_snr_list(const std::string& text, const std::string& field = "snr_db");

struct IniEntry {
    std::string value;
    int line = 0;
};

// section -> key -> entry. Keys outside any section go to section "".
using IniDocument = std::map<std::string, std::map<std::string, IniEntry>>;

// Throws ConfigError("<source>:<line>", ...) on malformed lines and duplicate keys.
IniDocument parse_ini(std::istream& in, const std::string& source);

struct SweepFileSettings {
    std::optional<Modulation> modulation;
    std::optional<std::pair<unsigned, unsigned>> mimo;
    std::optional<ChannelMode> channel;
    std::optional<std::vector<double>> snr_db;
    std::optional<TargetRule> target;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<Branch> branch;
    std::optional<unsigned> threads;
    std::optional<std::string> csv;
    std::optional<std::string> plot;
    std::optional<std::string> ml_csv;
};

// Interprets a parsed document. Unknown sections/keys and bad values throw
// ConfigError("<source>:<line>", "field '<key>': ...").
SweepFileSettings interpret_sweep_config(const IniDocument& doc, const std::string& source);

SweepFileSettings load_sweep_config(const std::string& path);

} // namespace subml
