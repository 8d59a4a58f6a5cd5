#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ecorate/errors.hpp"
#include "ecorate/measurements.hpp"

namespace ecorate {
namespace csv {

// Minimal strict CSV: comma-separated, no quoting, UTF-8 passthrough,
// LF or CRLF line endings. Field values must not contain commas.

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline double parse_double(std::string_view field, std::size_t line_no, std::string_view what) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw parse_error("invalid " + std::string(what) + " value '" + std::string(field) + "'",
                          line_no);
    return value;
}

inline std::int64_t parse_int(std::string_view field, std::size_t line_no, std::string_view what) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw parse_error("invalid " + std::string(what) + " value '" + std::string(field) + "'",
                          line_no);
    return value;
}

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

struct Line {
    std::string text;
    std::size_t number = 0; // 1-based
};

/// Read non-empty lines, stripping a trailing CR. Line numbers count every
/// physical line including blank ones.
inline std::vector<Line> read_lines(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
        ++n;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        lines.push_back(Line{raw, n});
    }
    return lines;
}

inline void expect_header(const std::vector<Line>& lines, std::string_view expected) {
    if (lines.empty()) throw parse_error("empty input, expected header '" + std::string(expected) + "'", 1);
    if (lines.front().text != expected)
        throw parse_error("bad header '" + lines.front().text + "', expected '" +
                              std::string(expected) + "'",
                          lines.front().number);
}

inline constexpr std::string_view raw_header = "model_id,benchmark_id,accuracy,energy_joules";
inline constexpr std::string_view normalized_header = "model_id,benchmark_id,acc_norm,eff_norm";
inline constexpr std::string_view power_log_header = "model_id,benchmark_id,device,tick,watts";

/// Raw measurement CSV -> Dataset. All rows must share one benchmark_id.
inline Dataset parse_measurements_raw(std::istream& in) {
    const auto lines = read_lines(in);
    expect_header(lines, raw_header);
    Dataset ds;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != 4)
            throw parse_error("expected 4 fields, got " + std::to_string(fields.size()),
                              lines[i].number);
        Measurement m;
        m.model_id = std::string(fields[0]);
        m.benchmark_id = std::string(fields[1]);
        m.accuracy_raw = parse_double(fields[2], lines[i].number, "accuracy");
        m.energy_joules = parse_double(fields[3], lines[i].number, "energy_joules");
        if (m.model_id.empty()) throw parse_error("empty model_id", lines[i].number);
        if (m.energy_joules < 0.0)
            throw parse_error("negative energy_joules for '" + m.model_id + "'", lines[i].number);
        if (!seen.insert(m.model_id).second)
            throw input_error("duplicate model_id '" + m.model_id + "' (line " +
                              std::to_string(lines[i].number) + ")");
        if (ds.measurements.empty()) ds.benchmark_id = m.benchmark_id;
        ds.measurements.push_back(std::move(m));
    }
    validate(ds);
    return ds;
}

/// Normalized point CSV -> points in the unit square; bounds checked per row.
inline std::vector<NormalizedPoint> parse_normalized(std::istream& in,
                                                     std::string* benchmark_id = nullptr) {
    const auto lines = read_lines(in);
    expect_header(lines, normalized_header);
    std::vector<NormalizedPoint> points;
    std::unordered_set<std::string> seen;
    std::string bench;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != 4)
            throw parse_error("expected 4 fields, got " + std::to_string(fields.size()),
                              lines[i].number);
        NormalizedPoint p;
        p.model_id = std::string(fields[0]);
        const std::string row_bench(fields[1]);
        p.acc = parse_double(fields[2], lines[i].number, "acc_norm");
        p.eff = parse_double(fields[3], lines[i].number, "eff_norm");
        if (p.model_id.empty()) throw parse_error("empty model_id", lines[i].number);
        if (p.acc < 0.0 || p.acc > 1.0)
            throw parse_error("acc_norm " + format_double(p.acc) + " outside [0,1]",
                              lines[i].number);
        if (p.eff < 0.0 || p.eff > 1.0)
            throw parse_error("eff_norm " + format_double(p.eff) + " outside [0,1]",
                              lines[i].number);
        if (!seen.insert(p.model_id).second)
            throw input_error("duplicate model_id '" + p.model_id + "' (line " +
                              std::to_string(lines[i].number) + ")");
        if (points.empty()) {
            bench = row_bench;
        } else if (row_bench != bench) {
            throw parse_error("benchmark_id '" + row_bench + "' differs from '" + bench + "'",
                              lines[i].number);
        }
        points.push_back(std::move(p));
    }
    if (points.empty()) throw input_error("normalized input has no data rows");
    if (benchmark_id != nullptr) *benchmark_id = bench;
    return points;
}

/// Power-log CSV -> one EnergyLog per (model, benchmark), first-seen order.
/// The sampling interval dt is supplied out of band (CLI --dt).
inline std::vector<EnergyLog> parse_power_log(std::istream& in, double dt) {
    if (!(dt > 0.0)) throw config_error("dt must be positive, got " + std::to_string(dt));
    const auto lines = read_lines(in);
    expect_header(lines, power_log_header);
    std::vector<EnergyLog> logs;
    std::unordered_map<std::string, std::size_t> index; // "model\x1fbench" -> logs slot
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i].text);
        if (fields.size() != 5)
            throw parse_error("expected 5 fields, got " + std::to_string(fields.size()),
                              lines[i].number);
        const std::string model(fields[0]);
        const std::string bench(fields[1]);
        if (model.empty()) throw parse_error("empty model_id", lines[i].number);
        PowerSample s;
        try {
            s.device = device_from_string(fields[2]);
        } catch (const input_error& e) {
            throw parse_error(e.what(), lines[i].number);
        }
        s.tick = parse_int(fields[3], lines[i].number, "tick");
        if (s.tick < 0) throw parse_error("negative tick", lines[i].number);
        s.watts = parse_double(fields[4], lines[i].number, "watts");
        if (s.watts < 0.0) throw parse_error("negative watts", lines[i].number);
        const std::string key = model + '\x1f' + bench;
        auto [it, inserted] = index.try_emplace(key, logs.size());
        if (inserted) logs.push_back(EnergyLog{model, bench, {}, dt});
        logs[it->second].samples.push_back(s);
    }
    if (logs.empty()) throw input_error("power log has no data rows");
    return logs;
}

inline void write_dataset(std::ostream& out, const Dataset& ds) {
    out << raw_header << '\n';
    for (const Measurement& m : ds.measurements) {
        out << m.model_id << ',' << m.benchmark_id << ',' << format_double(m.accuracy_raw) << ','
            << format_double(m.energy_joules) << '\n';
    }
}

inline void write_normalized(std::ostream& out, std::string_view benchmark_id,
                             std::span<const NormalizedPoint> points) {
    out << normalized_header << '\n';
    for (const NormalizedPoint& p : points) {
        out << p.model_id << ',' << benchmark_id << ',' << format_double(p.acc) << ','
            << format_double(p.eff) << '\n';
    }
}

} // namespace csv
} // namespace ecorate
