// Copyright 2026 The sgqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// \file report.hpp
/// CSV / JSON serialization of experiment reports and the JSON state-matrix
/// file format ([[[re, im], ...], ...], one inner array per row).
///
/// Floating-point values are written in shortest round-trip form, so output
/// bytes depend only on the values.

#include "sgqst/core.hpp"
#include "sgqst/harness.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace sgqst {

class ReportIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReportFormat { Csv, Json };

inline ReportFormat parse_format(const std::string &s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw std::invalid_argument("unknown format '" + s + "' (expected csv|json)");
}

inline constexpr std::string_view kCsvHeader =
    "config_id,d,N,K,lambda,mode,trial,checkpoint_iteration,infidelity,copies_used";

namespace detail {

inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return {buf.data(), end};
}

template <class T>
T parse_number(std::string_view s, const char *field) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw std::invalid_argument(std::string("csv: bad value for ") + field + ": '" + std::string(s) + "'");
    }
    return v;
}

} // namespace detail

inline void write_csv(std::ostream &os, std::span<const ExperimentReport> reports) {
    os << kCsvHeader << '\n';
    for (const auto &r : reports) {
        const auto &c = r.config;
        const std::string prefix = std::to_string(c.config_id) + ',' + std::to_string(c.d) + ',' +
                                   std::to_string(c.shots) + ',' + std::to_string(c.iterations) + ',' +
                                   detail::format_double(c.lambda) + ',' + to_string(c.mode) + ',';
        for (const auto &t : r.trials) {
            for (const auto &cp : t.checkpoints) {
                os << prefix << t.trial << ',' << cp.iteration << ',' << detail::format_double(cp.infidelity) << ','
                   << t.copies_used << '\n';
            }
        }
    }
}

inline std::string to_csv(std::span<const ExperimentReport> reports) {
    std::ostringstream os;
    write_csv(os, reports);
    return os.str();
}

struct CsvRow {
    int config_id;
    std::size_t d;
    std::uint64_t shots;
    std::uint64_t iterations;
    double lambda;
    ModeKind mode;
    std::uint64_t trial;
    std::uint64_t checkpoint_iteration;
    double infidelity;
    std::uint64_t copies_used;
};

inline std::vector<CsvRow> read_csv(std::istream &is) {
    std::string line;
    if (!std::getline(is, line) || line != kCsvHeader) {
        throw std::invalid_argument("csv: missing or unexpected header");
    }
    std::vector<CsvRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto comma = rest.find(',');
            f.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (f.size() != 10) throw std::invalid_argument("csv: expected 10 fields, got " + std::to_string(f.size()));
        rows.push_back({detail::parse_number<int>(f[0], "config_id"),
                        detail::parse_number<std::size_t>(f[1], "d"),
                        detail::parse_number<std::uint64_t>(f[2], "N"),
                        detail::parse_number<std::uint64_t>(f[3], "K"),
                        detail::parse_number<double>(f[4], "lambda"),
                        parse_mode(std::string(f[5])),
                        detail::parse_number<std::uint64_t>(f[6], "trial"),
                        detail::parse_number<std::uint64_t>(f[7], "checkpoint_iteration"),
                        detail::parse_number<double>(f[8], "infidelity"),
                        detail::parse_number<std::uint64_t>(f[9], "copies_used")});
    }
    return rows;
}

// --- state matrices -------------------------------------------------------

inline nlohmann::json state_matrix_to_json(const CMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Parses the state-matrix format; the matrix must be square but is not
/// otherwise validated.
inline CMatrix state_matrix_from_json(const nlohmann::json &j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("state matrix: expected a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto &row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw std::invalid_argument("state matrix: row " + std::to_string(r) + " must have " +
                                        std::to_string(n) + " entries");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto &e = row[static_cast<std::size_t>(c)];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                throw std::invalid_argument("state matrix: entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                            ") must be [re, im]");
            }
            m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

inline CMatrix read_state_matrix(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ReportIoError("cannot open state file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument("state file '" + path + "': " + e.what());
    }
    return state_matrix_from_json(j);
}

// --- JSON reports ---------------------------------------------------------

inline nlohmann::json to_json(const ExperimentConfig &c) {
    nlohmann::json j{{"config_id", c.config_id},
                     {"d", c.d},
                     {"N", c.shots},
                     {"K", c.iterations},
                     {"trials", c.trials},
                     {"lambda", c.lambda},
                     {"mode", to_string(c.mode)},
                     {"epsilon", c.epsilon},
                     {"normalization", to_string(c.normalization)},
                     {"seed", c.seed},
                     {"checkpoints", c.checkpoints},
                     {"rank", c.state_rank()},
                     {"preset", c.preset},
                     {"reduced_scale", c.reduced_scale}};
    if (c.truth) j["truth"] = state_matrix_to_json(c.truth->matrix());
    return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json &j) {
    ExperimentConfig c;
    c.config_id = j.at("config_id").get<int>();
    c.d = j.at("d").get<std::size_t>();
    c.shots = j.at("N").get<std::uint64_t>();
    c.iterations = j.at("K").get<std::uint64_t>();
    c.trials = j.at("trials").get<std::uint64_t>();
    c.lambda = j.at("lambda").get<double>();
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.epsilon = j.at("epsilon").get<double>();
    c.normalization = parse_normalization(j.at("normalization").get<std::string>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.checkpoints = j.at("checkpoints").get<std::vector<std::uint64_t>>();
    c.rank = j.at("rank").get<std::size_t>();
    c.preset = j.value("preset", std::string{});
    c.reduced_scale = j.value("reduced_scale", false);
    if (j.contains("truth")) c.truth = DensityMatrix::from_matrix(state_matrix_from_json(j.at("truth")));
    return c;
}

namespace detail {

inline nlohmann::json summary_json(const CheckpointSummary &s) {
    return {{"iteration", s.iteration}, {"median", s.median}, {"q25", s.q25}, {"q75", s.q75}};
}

inline CheckpointSummary summary_from_json(const nlohmann::json &j) {
    return {j.at("iteration").get<std::uint64_t>(), j.at("median").get<double>(), j.at("q25").get<double>(),
            j.at("q75").get<double>()};
}

} // namespace detail

inline nlohmann::json to_json(const ExperimentReport &r) {
    nlohmann::json checkpoints = nlohmann::json::array();
    for (const auto &s : r.checkpoints) checkpoints.push_back(detail::summary_json(s));
    nlohmann::json trials = nlohmann::json::array();
    for (const auto &t : r.trials) {
        nlohmann::json cps = nlohmann::json::array();
        for (const auto &cp : t.checkpoints) cps.push_back({{"iteration", cp.iteration}, {"infidelity", cp.infidelity}});
        trials.push_back({{"trial", t.trial},
                          {"final_infidelity", t.final_infidelity},
                          {"copies_used", t.copies_used},
                          {"r_hat", t.r_hat},
                          {"learned_rank", t.learned_rank},
                          {"checkpoints", std::move(cps)}});
    }
    return {{"config", to_json(r.config)},
            {"checkpoints", std::move(checkpoints)},
            {"final", detail::summary_json(r.final_summary)},
            {"trials", std::move(trials)},
            {"total_copies", r.total_copies},
            {"wall_seconds", r.wall_seconds}};
}

inline ExperimentReport report_from_json(const nlohmann::json &j) {
    ExperimentReport r;
    r.config = config_from_json(j.at("config"));
    for (const auto &s : j.at("checkpoints")) r.checkpoints.push_back(detail::summary_from_json(s));
    r.final_summary = detail::summary_from_json(j.at("final"));
    for (const auto &t : j.at("trials")) {
        TrialRecord rec;
        rec.trial = t.at("trial").get<std::uint64_t>();
        rec.final_infidelity = t.at("final_infidelity").get<double>();
        rec.copies_used = t.at("copies_used").get<std::uint64_t>();
        rec.r_hat = t.at("r_hat").get<std::size_t>();
        rec.learned_rank = t.at("learned_rank").get<std::size_t>();
        for (const auto &cp : t.at("checkpoints")) {
            rec.checkpoints.push_back({cp.at("iteration").get<std::uint64_t>(), cp.at("infidelity").get<double>()});
        }
        r.trials.push_back(std::move(rec));
    }
    r.total_copies = j.at("total_copies").get<std::uint64_t>();
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

inline std::string to_json_text(std::span<const ExperimentReport> reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

inline std::vector<ExperimentReport> reports_from_json_text(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<ExperimentReport> out;
    if (j.is_array()) {
        for (const auto &r : j) out.push_back(report_from_json(r));
    } else {
        out.push_back(report_from_json(j));
    }
    return out;
}

/// Writes `reports` to `path`; throws ReportIoError naming the path on failure.
inline void emit_report(std::span<const ExperimentReport> reports, ReportFormat format, const std::string &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ReportIoError("cannot open '" + path + "' for writing");
    if (format == ReportFormat::Csv) {
        write_csv(out, reports);
    } else {
        out << to_json_text(reports);
    }
    out.flush();
    if (!out) throw ReportIoError("failed writing '" + path + "'");
}

inline void emit_report(const ExperimentReport &report, ReportFormat format, const std::string &path) {
    emit_report(std::span<const ExperimentReport>(&report, 1), format, path);
}

} // namespace sgqst
