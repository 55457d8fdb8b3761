#include <sstream>

#include "doctest.h"
#include "windsweep/svg.hpp"

using namespace windsweep;

namespace {

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string render(const Dataset& ds, const OutlierReport& r) {
  std::ostringstream out;
  write_svg_scatter(ds, r, out);
  return out.str();
}

}  // namespace

TEST_CASE("svg scatter") {
  Dataset ds;
  ds.points = {{5.0, 300.0, {}, {}}, {6.0, 500.0, {}, {}}, {7.0, 800.0, {}, {}},
               {8.0, 0.0, {}, {}},   {9.0, 1200.0, {}, {}}};
  OutlierReport r;
  r.verdicts = {Verdict::Normal, Verdict::Normal, Verdict::Normal, Verdict::RuleOutlier, Verdict::Normal};

  const auto svg = render(ds, r);
  CHECK(svg.starts_with("<?xml"));
  CHECK(svg.ends_with("</svg>\n"));
  CHECK(occurrences(svg, "<circle") == 5);
  CHECK(occurrences(svg, "width=\"10\" height=\"10\"") == 2);
  CHECK(svg.find("Physical rule") != std::string::npos);
  CHECK(render(ds, r) == svg);

  SUBCASE("all normal has a one-entry legend") {
    r.verdicts.assign(5, Verdict::Normal);
    CHECK(occurrences(render(ds, r), "width=\"10\" height=\"10\"") == 1);
  }
  SUBCASE("incomplete points are not drawn") {
    ds.points.push_back({std::nullopt, 100.0, {}, {}});
    r.verdicts.push_back(Verdict::MissingOrDuplicate);
    const auto with_missing = render(ds, r);
    CHECK(occurrences(with_missing, "<circle") == 5);
    CHECK(with_missing.find("Missing/duplicate") != std::string::npos);
  }
  SUBCASE("length mismatch") {
    r.verdicts.pop_back();
    std::ostringstream out;
    CHECK_THROWS(write_svg_scatter(ds, r, out));
  }
}
