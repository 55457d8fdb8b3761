#include "windsweep/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "windsweep/error.hpp"

namespace windsweep {

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 80.0, kRight = 170.0, kTop = 30.0, kBottom = 60.0;
constexpr int kTicks = 5;

std::string num(double x, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

const char* color(Verdict v) {
  switch (v) {
    case Verdict::Normal: return "#1f77b4";
    case Verdict::RuleOutlier: return "#d62728";
    case Verdict::MissingOrDuplicate: return "#7f7f7f";
    case Verdict::RegressionOutlier: return "#ff7f0e";
    case Verdict::MorphologyOutlier: return "#2ca02c";
  }
  return "#000000";
}

const char* legend_text(Verdict v) {
  switch (v) {
    case Verdict::Normal: return "Normal";
    case Verdict::RuleOutlier: return "Physical rule";
    case Verdict::MissingOrDuplicate: return "Missing/duplicate";
    case Verdict::RegressionOutlier: return "Regression (RANSAC+IQR)";
    case Verdict::MorphologyOutlier: return "Morphology";
  }
  return "";
}

}  // namespace

void write_svg_scatter(const Dataset& dataset, const OutlierReport& report, std::ostream& out) {
  if (report.size() != dataset.size()) throw Error("svg: report/dataset length mismatch");

  double v_lo = 0.0, v_hi = 1.0, p_lo = 0.0, p_hi = 1.0;
  bool first = true;
  for (const auto& pt : dataset.points) {
    if (!pt.complete()) continue;
    if (first) {
      v_lo = v_hi = *pt.wind_speed;
      p_lo = p_hi = *pt.power;
      first = false;
    }
    v_lo = std::min(v_lo, *pt.wind_speed);
    v_hi = std::max(v_hi, *pt.wind_speed);
    p_lo = std::min(p_lo, *pt.power);
    p_hi = std::max(p_hi, *pt.power);
  }
  if (v_hi <= v_lo) v_hi = v_lo + 1.0;
  if (p_hi <= p_lo) p_hi = p_lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double v) { return kLeft + (v - v_lo) / (v_hi - v_lo) * plot_w; };
  auto sy = [&](double p) { return kTop + plot_h - (p - p_lo) / (p_hi - p_lo) * plot_h; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth, 0) << "\" height=\""
      << num(kHeight, 0) << "\" viewBox=\"0 0 " << num(kWidth, 0) << ' ' << num(kHeight, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth, 0) << "\" height=\"" << num(kHeight, 0)
      << "\" fill=\"white\"/>\n";

  // Axes, ticks and labels.
  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(kLeft + plot_w)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
  out << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n";
  out << "</g>\n<g>\n";
  for (int i = 0; i <= kTicks; ++i) {
    const double v = v_lo + (v_hi - v_lo) * i / kTicks;
    const double p = p_lo + (p_hi - p_lo) * i / kTicks;
    out << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << num(v, 1) << "</text>\n";
    out << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(p) + 4)
        << "\" text-anchor=\"end\">" << num(p, 0) << "</text>\n";
  }
  out << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
      << "\" text-anchor=\"middle\">Wind speed (m/s)</text>\n";
  out << "<text x=\"20\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << num(kTop + plot_h / 2) << ")\">Power (kW)</text>\n";
  out << "</g>\n";

  // Normal first so outliers are drawn on top.
  std::map<int, Verdict> present{{0, Verdict::Normal}};
  for (Verdict v : report.verdicts) present.emplace(verdict_rank(v), v);
  for (const auto& [rank, verdict] : present) {
    out << "<g class=\"" << verdict_name(verdict) << "\" fill=\"" << color(verdict) << "\" fill-opacity=\"0.6\">\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      const auto& pt = dataset.points[i];
      if (report.verdicts[i] != verdict || !pt.complete()) continue;
      out << "<circle cx=\"" << num(sx(*pt.wind_speed)) << "\" cy=\"" << num(sy(*pt.power))
          << "\" r=\"1.5\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g class=\"legend\">\n";
  double ly = kTop + 10;
  for (const auto& [rank, verdict] : present) {
    out << "<rect x=\"" << num(kWidth - kRight + 15) << "\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
        << color(verdict) << "\"/>\n";
    out << "<text x=\"" << num(kWidth - kRight + 30) << "\" y=\"" << num(ly + 1) << "\">" << legend_text(verdict)
        << "</text>\n";
    ly += 18;
  }
  out << "</g>\n</svg>\n";
}

void emit_svg_scatter(const Dataset& dataset, const OutlierReport& report,
                      const std::filesystem::path& path) {
  std::ostringstream body;
  write_svg_scatter(dataset, report, body);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << body.str();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace windsweep
