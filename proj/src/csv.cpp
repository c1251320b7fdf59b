#include "stsperf/csv.hpp"

#include <algorithm>
#include <charconv>

#include "stsperf/error.hpp"
#include "stsperf/numfmt.hpp"

namespace stsperf {

namespace {
constexpr const char* kRunsHeader = "run,service_time_ms,response_time_ms";
}

std::string write_runs_csv(std::span<const RunRecord> records) {
    std::string out = kRunsHeader;
    out += '\n';
    for (const RunRecord& r : records) {
        out += std::to_string(r.index + 1);
        out += ',';
        out += format_shortest(r.service_time);
        out += ',';
        out += format_shortest(r.response_time);
        out += '\n';
    }
    return out;
}

std::vector<RunRecord> read_runs_csv(const std::string& text) {
    std::vector<RunRecord> records;
    std::size_t pos = 0, lineno = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        std::string line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        auto fail = [&](const std::string& why) -> StsError {
            return StsError("BadCsv", "line " + std::to_string(lineno) + ": " + why);
        };
        if (!header_seen) {
            if (line != kRunsHeader)
                throw fail("expected header '" + std::string(kRunsHeader) + "'");
            header_seen = true;
            continue;
        }

        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 3) throw fail("expected 3 fields, got " + std::to_string(fields.size()));

        RunRecord r;
        std::uint64_t run = 0;
        auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), run);
        if (ec != std::errc{} || p != fields[0].data() + fields[0].size() || run == 0)
            throw fail("bad run number '" + fields[0] + "'");
        r.index = run - 1;
        if (!parse_double(fields[1], r.service_time) || !parse_double(fields[2], r.response_time))
            throw fail("bad time value");
        records.push_back(r);
    }
    if (!header_seen) throw StsError("BadCsv", "missing header line");
    if (records.empty()) throw StsError("EmptyInput", "no data rows");
    return records;
}

std::string emit_trend_csv(std::span<const RunRecord> records, std::uint64_t window) {
    if (records.empty()) throw StsError("EmptyInput", "no runs to report on");
    std::string out = "run,service_time_ms,response_time_ms,moving_avg_ms\n";
    double sum = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        sum += records[i].service_time;
        if (i >= window) sum -= records[i - window].service_time;
        const auto width = std::min<std::uint64_t>(window, i + 1);
        out += std::to_string(records[i].index + 1);
        out += ',';
        out += format_shortest(records[i].service_time);
        out += ',';
        out += format_shortest(records[i].response_time);
        out += ',';
        out += format_shortest(sum / static_cast<double>(width));
        out += '\n';
    }
    return out;
}

} // namespace stsperf
