#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "divlab/errors.hpp"
#include "divlab/numfmt.hpp"

namespace divlab {

struct TrialRow {
    long trial_id = 0;
    int m = 0;
    int r = 0;
    std::string knots;
    std::string fn;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool failure = false;  // rhs vanished while lhs did not, or a bound was violated
    std::string note;
};

struct ReportAggregates {
    double max_ratio = 0.0;
    long argmax_trial = -1;
    double p50 = 0.0;
    double p90 = 0.0;
    double p99 = 0.0;
    long failures = 0;
    long row_count = 0;
};

/// Outcome of one verification check: per-trial rows plus aggregates and a
/// pass flag measured against a committed baseline (when one is supplied).
struct VerificationReport {
    std::string check;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::vector<TrialRow> rows;
    ReportAggregates aggregates;
    double baseline = std::numeric_limits<double>::quiet_NaN();
    double baseline_slack = 1.05;
    bool pass = true;

    /// Recompute aggregates and the pass flag. Rows with a larger ratio than
    /// baseline * slack fail the report; failure rows always do.
    void finalize(std::optional<double> committed_baseline = std::nullopt) {
        aggregates = ReportAggregates{};
        aggregates.row_count = static_cast<long>(rows.size());
        std::vector<double> ratios;
        ratios.reserve(rows.size());
        for (const auto& row : rows) {
            if (row.failure) ++aggregates.failures;
            if (aggregates.argmax_trial < 0 || row.ratio > aggregates.max_ratio) {
                aggregates.max_ratio = row.ratio;
                aggregates.argmax_trial = row.trial_id;
            }
            ratios.push_back(row.ratio);
        }
        if (!ratios.empty()) {
            std::sort(ratios.begin(), ratios.end());
            auto rank = [&](double p) {
                std::size_t idx = static_cast<std::size_t>(
                    std::ceil(p * static_cast<double>(ratios.size())));
                return ratios[std::min(ratios.size() - 1, idx == 0 ? 0 : idx - 1)];
            };
            aggregates.p50 = rank(0.50);
            aggregates.p90 = rank(0.90);
            aggregates.p99 = rank(0.99);
        }
        if (committed_baseline) baseline = *committed_baseline;
        pass = aggregates.failures == 0;
        if (!std::isnan(baseline) && aggregates.max_ratio > baseline * baseline_slack)
            pass = false;
    }
};

namespace detail {

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace detail

/// CSV rows, columns: trial_id,m,r,knots,fn,lhs,rhs,ratio
inline void write_csv(const VerificationReport& rep, std::ostream& os) {
    os << "trial_id,m,r,knots,fn,lhs,rhs,ratio\n";
    for (const auto& row : rep.rows) {
        os << row.trial_id << ',' << row.m << ',' << row.r << ','
           << detail::csv_quote(row.knots) << ',' << detail::csv_quote(row.fn) << ','
           << to_shortest(row.lhs) << ',' << to_shortest(row.rhs) << ','
           << to_shortest(row.ratio) << '\n';
    }
}

inline nlohmann::json summary_json(const VerificationReport& rep, bool include_rows = false) {
    nlohmann::json j;
    j["check"] = rep.check;
    j["seed"] = rep.seed;
    j["config"] = rep.config;
    j["rows"] = rep.aggregates.row_count;
    j["failures"] = rep.aggregates.failures;
    j["max_ratio"] = rep.aggregates.max_ratio;
    j["argmax_trial"] = rep.aggregates.argmax_trial;
    j["quantiles"] = {{"p50", rep.aggregates.p50},
                      {"p90", rep.aggregates.p90},
                      {"p99", rep.aggregates.p99}};
    if (std::isnan(rep.baseline)) j["baseline"] = nullptr;
    else j["baseline"] = rep.baseline;
    j["baseline_slack"] = rep.baseline_slack;
    j["pass"] = rep.pass;
    if (include_rows) {
        auto arr = nlohmann::json::array();
        for (const auto& row : rep.rows) {
            arr.push_back({{"trial_id", row.trial_id},
                           {"m", row.m},
                           {"r", row.r},
                           {"knots", row.knots},
                           {"fn", row.fn},
                           {"lhs", row.lhs},
                           {"rhs", row.rhs},
                           {"ratio", row.ratio},
                           {"failure", row.failure},
                           {"note", row.note}});
        }
        j["trial_rows"] = std::move(arr);
    }
    return j;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

} // namespace detail

/// Read back a CSV report written by write_csv (aggregates recomputed).
inline VerificationReport read_csv_report(std::istream& in) {
    VerificationReport rep;
    std::string line;
    if (!std::getline(in, line) || detail::split_csv_line(line).size() != 8)
        throw config_error("report: not a divlab CSV report");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = detail::split_csv_line(line);
        if (f.size() != 8) throw config_error("report: malformed CSV row");
        TrialRow row;
        try {
            row.trial_id = std::stol(f[0]);
            row.m = std::stoi(f[1]);
            row.r = std::stoi(f[2]);
            row.knots = f[3];
            row.fn = f[4];
            row.lhs = std::stod(f[5]);
            row.rhs = std::stod(f[6]);
            row.ratio = std::stod(f[7]);
        } catch (const std::exception&) {
            throw config_error("report: malformed CSV value");
        }
        rep.rows.push_back(std::move(row));
    }
    rep.check = "from_csv";
    rep.finalize();
    return rep;
}

/// Committed regression constants, keyed by check name and a check-specific
/// subkey such as "m=4,r=1" or "k=3".
class Baselines {
public:
    Baselines() : doc_(nlohmann::json::object()) {}

    static Baselines from_json(nlohmann::json j) {
        if (!j.is_object()) throw config_error("baselines: top level must be an object");
        for (const auto& [check, table] : j.items()) {
            if (!table.is_object())
                throw config_error("baselines: entry '" + check + "' must be an object");
            for (const auto& [key, value] : table.items())
                if (!value.is_number())
                    throw config_error("baselines: '" + check + "." + key +
                                       "' must be a number");
        }
        Baselines b;
        b.doc_ = std::move(j);
        return b;
    }

    static Baselines load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw config_error("baselines: cannot open '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw config_error("baselines: parse failure in '" + path + "': " + e.what());
        }
        return from_json(std::move(j));
    }

    std::optional<double> get(const std::string& check, const std::string& key) const {
        auto it = doc_.find(check);
        if (it == doc_.end()) return std::nullopt;
        auto kit = it->find(key);
        if (kit == it->end()) return std::nullopt;
        return kit->get<double>();
    }

    void set(const std::string& check, const std::string& key, double value) {
        doc_[check][key] = value;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw config_error("baselines: cannot write '" + path + "'");
        out << doc_.dump(2) << '\n';
    }

    const nlohmann::json& doc() const { return doc_; }

private:
    nlohmann::json doc_;
};

} // namespace divlab
