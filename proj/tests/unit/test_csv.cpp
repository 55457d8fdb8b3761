#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "windsweep/csv.hpp"

using namespace windsweep;

TEST_CASE("split_record handles quotes and carriage returns") {
  CHECK(csv::split_record("a,b,c") == std::vector<std::string>{"a", "b", "c"});
  CHECK(csv::split_record("a,,") == std::vector<std::string>{"a", "", ""});
  CHECK(csv::split_record("\"x,y\",\"say \"\"hi\"\"\"\r") ==
        std::vector<std::string>{"x,y", "say \"hi\""});
}

TEST_CASE("write_record quotes only when needed") {
  std::ostringstream out;
  csv::write_record(out, {"plain", "a,b", "q\"t"});
  CHECK(out.str() == "plain,\"a,b\",\"q\"\"t\"\n");
  CHECK(csv::split_record(out.str().substr(0, out.str().size() - 1)) ==
        std::vector<std::string>{"plain", "a,b", "q\"t"});
}

TEST_CASE("parse_double is strict") {
  CHECK(csv::parse_double(" 12.5 ") == 12.5);
  CHECK(csv::parse_double("+3") == 3.0);
  CHECK(csv::parse_double("-1e3") == -1000.0);
  CHECK_FALSE(csv::parse_double(""));
  CHECK_FALSE(csv::parse_double("12kW"));
  CHECK_FALSE(csv::parse_double("abc"));
}

TEST_CASE("format_double round-trips bit-exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = i % 2 ? u(rng) : u(rng) * 1e-9;
    CHECK(csv::parse_double(csv::format_double(x)) == x);
  }
  CHECK(csv::format_double(0.1) == "0.1");
  CHECK(csv::parse_double(csv::format_double(std::numeric_limits<double>::denorm_min())) ==
        std::numeric_limits<double>::denorm_min());
}
