#include <doctest.h>

#include <vector>

#include "stsperf/csv.hpp"
#include "stsperf/error.hpp"
#include "support.hpp"

using namespace stsperf;
using namespace testsupport;

namespace {

std::vector<RunRecord> sample_records() {
    return {
        {0, 3.0625, 4.0625, 3},
        {1, 0.1, 0.30000000000000004, 2}, // forces 17 significant digits
        {2, 14.6, 14.6, 4},
    };
}

} // namespace

TEST_CASE("runs CSV layout") {
    const std::string text = write_runs_csv(sample_records());
    CHECK(text == "run,service_time_ms,response_time_ms\n"
                  "1,3.0625,4.0625\n"
                  "2,0.1,0.30000000000000004\n"
                  "3,14.6,14.6\n");
}

TEST_CASE("runs CSV round-trips bit for bit") {
    const auto records = sample_records();
    const auto back = read_runs_csv(write_runs_csv(records));
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].index == records[i].index);
        CHECK(back[i].service_time == records[i].service_time);
        CHECK(back[i].response_time == records[i].response_time);
        CHECK(back[i].steps == 0); // steps are not serialized
    }
}

TEST_CASE("runs CSV rejects malformed input") {
    // BadCsv messages carry the 1-based line number of the offending line.
    auto diagnose = [](const std::string& text) -> std::string {
        try {
            read_runs_csv(text);
        } catch (const StsError& e) {
            if (e.code() == "EmptyInput") return "empty";
            CHECK(e.code() == "BadCsv");
            const std::size_t at = e.message().find("line ");
            return at == std::string::npos ? "no-line"
                                           : e.message().substr(at, e.message().find(':', at) - at);
        }
        return "ok";
    };

    CHECK(diagnose("nope\n1,2,3\n") == "line 1");                                   // wrong header
    CHECK(diagnose("run,service_time_ms\n1,2\n") == "line 1");                      // truncated
    CHECK(diagnose("run,service_time_ms,response_time_ms\n1,2\n") == "line 2");     // short row
    CHECK(diagnose("run,service_time_ms,response_time_ms\n1,2,3,4\n") == "line 2"); // long row
    CHECK(diagnose("run,service_time_ms,response_time_ms\nx,2,3\n") == "line 2");   // bad run
    CHECK(diagnose("run,service_time_ms,response_time_ms\n0,2,3\n") == "line 2");   // run < 1
    CHECK(diagnose("run,service_time_ms,response_time_ms\n1,two,3\n") == "line 2"); // bad number
    CHECK(diagnose("run,service_time_ms,response_time_ms\n1,2,3\nx\n") == "line 3");
    CHECK(diagnose("run,service_time_ms,response_time_ms\n") == "empty"); // header, no rows
    CHECK(diagnose("") == "no-line");                                     // no header at all
}

TEST_CASE("trend CSV averages a trailing window") {
    const std::vector<RunRecord> records{
        {0, 2.0, 2.0, 1},
        {1, 4.0, 4.0, 1},
        {2, 6.0, 6.0, 1},
    };
    CHECK(emit_trend_csv(records, 2) ==
          "run,service_time_ms,response_time_ms,moving_avg_ms\n"
          "1,2,2,2\n"
          "2,4,4,3\n"
          "3,6,6,5\n");

    // window larger than the sample: running mean of everything so far
    CHECK(emit_trend_csv(records, 50) ==
          "run,service_time_ms,response_time_ms,moving_avg_ms\n"
          "1,2,2,2\n"
          "2,4,4,3\n"
          "3,6,6,4\n");

    const std::vector<RunRecord> one{{0, 5.0, 7.0, 1}};
    CHECK(emit_trend_csv(one, 50) ==
          "run,service_time_ms,response_time_ms,moving_avg_ms\n"
          "1,5,7,5\n");
}

TEST_CASE("trend CSV window of one is the series itself") {
    const std::vector<RunRecord> records{{0, 1.5, 1.5, 1}, {1, 2.5, 2.5, 1}};
    CHECK(emit_trend_csv(records, 1) ==
          "run,service_time_ms,response_time_ms,moving_avg_ms\n"
          "1,1.5,1.5,1.5\n"
          "2,2.5,2.5,2.5\n");
}

TEST_CASE("empty record lists") {
    const std::vector<RunRecord> none;
    // writing nothing is legal (header-only file); trending is not
    CHECK(write_runs_csv(none) == "run,service_time_ms,response_time_ms\n");
    try {
        emit_trend_csv(none, 10);
        FAIL("expected EmptyInput");
    } catch (const StsError& e) {
        CHECK(e.code() == "EmptyInput");
    }
}
