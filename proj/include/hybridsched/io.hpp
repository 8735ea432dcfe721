#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "json.hpp"

#include "hybridsched/bff.hpp"
#include "hybridsched/matrix.hpp"
#include "hybridsched/schedule.hpp"
#include "hybridsched/stats.hpp"
#include "hybridsched/twohop.hpp"
#include "hybridsched/validate.hpp"

namespace hybridsched {

using nlohmann::json;

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return {buf, ptr};
}

inline double parse_double(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::runtime_error("parse_double: bad number '" + s + "'");
    return v;
}

// ---- demand matrices -------------------------------------------------------

inline void write_demand_csv(std::ostream& os, const Matrix& m) {
    os << "n=" << m.size() << "\n";
    for (int i = 0; i < m.size(); ++i) {
        for (int j = 0; j < m.size(); ++j) {
            if (j) os << ',';
            os << format_double(m(i, j));
        }
        os << "\n";
    }
}

inline Matrix read_demand_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("n=", 0) != 0)
        throw std::runtime_error("demand csv: missing n= header");
    int n = std::stoi(line.substr(2));
    if (n < 1) throw std::runtime_error("demand csv: bad size");
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("demand csv: truncated");
        std::stringstream row(line);
        std::string cell;
        for (int j = 0; j < n; ++j) {
            if (!std::getline(row, cell, ',')) throw std::runtime_error("demand csv: short row");
            m(i, j) = parse_double(cell);
        }
    }
    if (!is_nonnegative(m)) throw std::runtime_error("demand csv: negative entry");
    return m;
}

inline json demand_to_json(const Matrix& m) {
    json entries = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        entries.push_back(std::move(row));
    }
    return {{"n", m.size()}, {"entries", std::move(entries)}};
}

inline Matrix demand_from_json(const json& j) {
    int n = j.at("n").get<int>();
    if (n < 1) throw std::runtime_error("demand json: bad size");
    Matrix m(n);
    const json& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != n) throw std::runtime_error("demand json: row count mismatch");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(entries[i].size()) != n) throw std::runtime_error("demand json: column count mismatch");
        for (int jcol = 0; jcol < n; ++jcol) m(i, jcol) = entries[i][jcol].get<double>();
    }
    if (!is_nonnegative(m)) throw std::runtime_error("demand json: negative entry");
    return m;
}

// ---- schedules -------------------------------------------------------------

inline json schedule_to_json(const Schedule& schedule) {
    json steps = json::array();
    for (const ScheduleStep& step : schedule.steps) {
        json pairs = json::array();
        for (auto [i, j] : step.matching.pairs()) pairs.push_back(json::array({i, j}));
        steps.push_back({{"duration", step.duration}, {"pairs", std::move(pairs)}});
    }
    return {{"steps", std::move(steps)}, {"t_c", schedule.circuit_time}};
}

inline Schedule schedule_from_json(const json& j, int n) {
    Schedule schedule;
    for (const json& step : j.at("steps")) {
        std::vector<int> to_output(n, -1);
        for (const json& pair : step.at("pairs")) {
            int i = pair.at(0).get<int>(), out = pair.at(1).get<int>();
            if (i < 0 || i >= n || out < 0 || out >= n) throw std::runtime_error("schedule json: pair out of range");
            to_output[i] = out;
        }
        schedule.steps.push_back({Matching(std::move(to_output)), step.at("duration").get<double>()});
    }
    schedule.circuit_time = j.at("t_c").get<double>();
    return schedule;
}

inline json event_schedule_to_json(const EventSchedule& schedule) {
    json conns = json::array();
    for (const Connection& c : schedule.connections)
        conns.push_back({{"i", c.input}, {"j", c.output}, {"start", c.start}, {"end", c.end}, {"amount", c.amount}});
    return {{"connections", std::move(conns)}, {"stop_time", schedule.stop_time}};
}

inline EventSchedule event_schedule_from_json(const json& j) {
    EventSchedule schedule;
    for (const json& c : j.at("connections"))
        schedule.connections.push_back({c.at("i").get<int>(), c.at("j").get<int>(), c.at("start").get<double>(),
                                        c.at("end").get<double>(), c.at("amount").get<double>()});
    schedule.stop_time = j.at("stop_time").get<double>();
    return schedule;
}

// ---- booking ledgers (JSON lines) -----------------------------------------

inline void ledger_to_jsonl(std::ostream& os, const BookingLedger& ledger) {
    std::size_t d = 0, ind = 0;
    // interleave so lines appear in booking order (per step: direct rows of
    // an edge precede its indirect rows; edges ascend by input)
    while (d < ledger.direct.size() || ind < ledger.indirect.size()) {
        bool take_direct;
        if (d == ledger.direct.size())
            take_direct = false;
        else if (ind == ledger.indirect.size())
            take_direct = true;
        else {
            const DirectBooking& db = ledger.direct[d];
            const IndirectBooking& ib = ledger.indirect[ind];
            take_direct = db.step < ib.step || (db.step == ib.step && db.input <= ib.relay);
        }
        if (take_direct) {
            const DirectBooking& b = ledger.direct[d++];
            os << json{{"step", b.step}, {"kind", "direct"}, {"origin", b.input}, {"dest", b.output},
                       {"amount", b.amount}}
                      .dump()
               << "\n";
        } else {
            const IndirectBooking& b = ledger.indirect[ind++];
            os << json{{"step", b.step},   {"kind", "indirect"}, {"origin", b.origin},
                       {"relay", b.relay}, {"dest", b.dest},     {"amount", b.amount}}
                      .dump()
               << "\n";
        }
    }
}

inline BookingLedger ledger_from_jsonl(std::istream& is) {
    BookingLedger ledger;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "direct") {
            ledger.direct.push_back(
                {j.at("step").get<int>(), j.at("origin").get<int>(), j.at("dest").get<int>(), j.at("amount").get<double>()});
        } else if (kind == "indirect") {
            ledger.indirect.push_back({j.at("step").get<int>(), j.at("origin").get<int>(), j.at("relay").get<int>(),
                                       j.at("dest").get<int>(), j.at("amount").get<double>()});
        } else {
            throw std::runtime_error("ledger: unknown booking kind '" + kind + "'");
        }
    }
    return ledger;
}

// ---- reports and results ---------------------------------------------------

inline json report_to_json(const ValidationReport& report) {
    json violations = json::array();
    for (const Violation& v : report.violations) violations.push_back({{"check", v.check}, {"detail", v.detail}});
    return {{"ok", report.ok()}, {"violations", std::move(violations)}};
}

inline json summary_to_json(const SummaryStats& s) {
    return {{"mean", s.mean}, {"median", s.median}, {"p25", s.p25}, {"p75", s.p75}, {"notch", s.notch},
            {"count", s.count}};
}

inline constexpr const char* kResultCsvHeader = "algorithm,seed,delta,rp_ratio,T,K,wall_time_ms";

inline void append_result_csv(std::ostream& os, const RunResult& r) {
    os << r.algorithm << ',' << r.seed << ',' << format_double(r.delta) << ',' << format_double(r.rate_ratio) << ','
       << format_double(r.total_time) << ',' << r.configurations << ',' << format_double(r.wall_ms) << "\n";
}

// ---- files -----------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Load a demand matrix from .csv or .json by extension.
inline Matrix load_demand(const std::string& path) {
    if (ends_with(path, ".json")) return demand_from_json(json::parse(read_text_file(path)));
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    return read_demand_csv(in);
}

inline void save_demand(const std::string& path, const Matrix& m) {
    if (ends_with(path, ".json")) {
        write_text_file(path, demand_to_json(m).dump(2) + "\n");
    } else {
        std::ostringstream ss;
        write_demand_csv(ss, m);
        write_text_file(path, ss.str());
    }
}

}  // namespace hybridsched
