#include <doctest.h>

#include <limits>

#include "stsperf/numfmt.hpp"

using namespace stsperf;

TEST_CASE("format_shortest picks the minimal round-tripping form") {
    CHECK(format_shortest(0.0) == "0");
    CHECK(format_shortest(1.0) == "1");
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(format_shortest(14.6) == "14.6");
    CHECK(format_shortest(-2.5) == "-2.5");
    CHECK(format_shortest(100000.0) == "1e+05");
    CHECK(format_shortest(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_shortest(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("format_shortest output parses back bit-exactly") {
    const double values[] = {0.1 + 0.2,       1.0 / 3.0, 3.704501765869917, 1e-17,
                             12345.678901234, 2.5e-308,  73.0 / 5.0};
    for (double v : values) {
        double back = 0;
        REQUIRE(parse_double(format_shortest(v), back));
        CHECK(back == v);
    }
}

TEST_CASE("format_sig6 rounds to six significant digits") {
    CHECK(format_sig6(14.6) == "14.6");
    CHECK(format_sig6(3.704501765869917) == "3.7045");
    CHECK(format_sig6(13.72333333333333) == "13.7233");
    CHECK(format_sig6(226.8833333333333) == "226.883");
    CHECK(format_sig6(0.0) == "0");
    CHECK(format_sig6(1234567.0) == "1.23457e+06");
}

TEST_CASE("parse_double is strict") {
    double v = 0;
    CHECK(parse_double("2.75", v));
    CHECK(v == 2.75);
    CHECK_FALSE(parse_double("", v));
    CHECK_FALSE(parse_double("abc", v));
    CHECK_FALSE(parse_double("1.5x", v));
    CHECK_FALSE(parse_double(" 1.5", v));
    CHECK_FALSE(parse_double("inf", v));
    CHECK_FALSE(parse_double("nan", v));
}
