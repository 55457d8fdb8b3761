#include "windsweep/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "windsweep/config.hpp"
#include "windsweep/csv.hpp"
#include "windsweep/error.hpp"
#include "windsweep/morphology.hpp"
#include "windsweep/pipeline.hpp"
#include "windsweep/svg.hpp"
#include "windsweep/synth.hpp"

namespace windsweep {

namespace {

namespace fs = std::filesystem;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = header.size(); i-- > 0;)
      if (csv::trim(header[i]) == name) return i;
    return std::nullopt;
  }
};

Table read_table(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("'" + path.string() + "' is empty");
  t.header = csv::split_record(line);
  while (std::getline(in, line)) {
    if (csv::trim(line).empty() || csv::trim(line) == "\r") continue;
    auto row = csv::split_record(line);
    row.resize(std::max(row.size(), t.header.size()));
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw FormatError("'" + path.string() + "' has no data rows");
  return t;
}

bool parse_flag(std::string_view cell, std::size_t row) {
  if (auto v = parse_verdict(cell)) return is_outlier(*v);
  const auto text = csv::trim(cell);
  if (text == "1" || iequals(text, "true") || iequals(text, "outlier")) return true;
  if (text == "0" || iequals(text, "false")) return false;
  throw FormatError("row " + std::to_string(row + 1) + ": unrecognized flag '" + std::string(text) + "'");
}

std::optional<bool> parse_outlier_label(std::string_view cell, std::size_t row) {
  const auto text = csv::trim(cell);
  if (text.empty()) return std::nullopt;
  if (iequals(text, "outlier") || text == "1") return true;
  if (iequals(text, "normal") || text == "0") return false;
  throw FormatError("row " + std::to_string(row + 1) + ": unrecognized label '" + std::string(text) + "'");
}

/// Registers a string option whose value lands in `overrides[key]` when given.
void setting(CLI::App* app, Settings& overrides, const std::string& flag, const std::string& key,
             const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
}

Settings merge_settings(const std::string& config_path, const Settings& overrides) {
  Settings merged = config_path.empty() ? Settings{} : read_settings(config_path);
  for (const auto& [k, v] : overrides) merged[k] = v;
  if (!merged.count("seed")) {
    if (const char* env = std::getenv("WINDSWEEP_SEED"); env && *env) merged["seed"] = env;
  }
  return merged;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  if (!dir.empty()) fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

struct CleanArgs {
  std::string input;
  std::string output_dir = ".";
  std::string config;
  std::string svg;
  std::string debug_dir;
  bool no_timings = false;
  Settings overrides;
};

int run_clean(const CleanArgs& args, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  CsvSchema schema;
  std::string phase = "config";
  try {
    apply_pipeline_settings(merge_settings(args.config, args.overrides), cfg, schema);
    cfg.validate();

    phase = "ingest";
    const Dataset ds = read_csv(args.input, schema);

    phase = "pipeline";
    auto result = run_pipeline(ds, cfg);
    if (args.no_timings) result.report.timings_ms.reset();
    for (const auto& w : result.report.warnings) err << "warning: " << w << '\n';

    phase = "output";
    const fs::path dir = args.output_dir;
    ensure_dir(dir);
    write_report(result.report, ds, dir / "report.csv", dir / "summary.json", result.metrics_json());
    if (!args.svg.empty()) emit_svg_scatter(ds, result.report, args.svg);
    if (!args.debug_dir.empty() && result.stage3) {
      const fs::path dbg = args.debug_dir;
      ensure_dir(dbg);
      write_pgm(result.stage3->raster.image, dbg / "raster.pgm");
      write_pgm(result.stage3->eroded, dbg / "eroded.pgm");
      write_pgm(result.stage3->opened, dbg / "opened.pgm");
      write_envelope_csv(result.stage3->envelope, dbg / "envelope.csv");
    }

    const auto counts = result.report.counts();
    out << ds.size() << " points:";
    for (Verdict v : kAllVerdicts) {
      auto it = counts.find(v);
      out << ' ' << verdict_name(v) << '=' << (it == counts.end() ? 0 : it->second);
    }
    out << '\n';
    if (const auto& c = result.metrics.classification)
      out << "acc=" << c->accuracy << "% err=" << c->error_rate << "% f1=" << c->f1 << '\n';
    if (result.metrics.e_rmse_curve)
      out << "e_rmse_curve=" << *result.metrics.e_rmse_curve << " p.u.\n";
    return 0;
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << phase << ": " << e.what() << '\n';
  }
  return 1;
}

struct SynthArgs {
  std::string output;
  std::string config;
  Settings overrides;
};

int run_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
  try {
    SynthConfig cfg;
    apply_synth_settings(merge_settings(args.config, args.overrides), cfg);
    const auto ds = generate(cfg);
    write_dataset(ds, args.output);
    out << "wrote " << ds.size() << " labeled points to " << args.output << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: synth: " << e.what() << '\n';
    return 1;
  }
}

struct EvalArgs {
  std::string input;
  std::string output;
  std::string verdict_column = "verdict";
  std::string label_column = "label";
  std::string speed_column = "wind_speed";
  std::string power_column = "power";
  std::optional<double> rated;
};

void emit_json(const nlohmann::json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

int run_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto table = read_table(args.input);
    const auto vcol = table.column(args.verdict_column);
    const auto lcol = table.column(args.label_column);
    if (!vcol) throw FormatError("missing flag column '" + args.verdict_column + "'");
    if (!lcol) throw FormatError("missing label column '" + args.label_column + "'");

    std::vector<bool> flags(table.rows.size());
    std::vector<std::optional<bool>> labels(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      flags[i] = parse_flag(table.rows[i][*vcol], i);
      labels[i] = parse_outlier_label(table.rows[i][*lcol], i);
    }
    MetricsReport m;
    m.classification = classification_metrics(flags, labels);

    const auto scol = table.column(args.speed_column), pcol = table.column(args.power_column);
    if (args.rated && scol && pcol) {
      Dataset ds;
      std::vector<Verdict> verdicts;
      MissingSentinels missing;
      for (std::size_t i = 0; i < table.rows.size(); ++i) {
        ScadaPoint p;
        const auto& row = table.rows[i];
        if (!missing.is_missing(row[*scol])) p.wind_speed = csv::parse_double(row[*scol]);
        if (!missing.is_missing(row[*pcol])) p.power = csv::parse_double(row[*pcol]);
        ds.points.push_back(p);
        verdicts.push_back(flags[i] ? Verdict::RegressionOutlier : Verdict::Normal);
      }
      std::vector<std::string> warnings;
      auto curves = evaluate(ds, verdicts, *args.rated, {}, &warnings);
      for (const auto& w : warnings) err << "warning: " << w << '\n';
      m.e_rmse_curve = curves.e_rmse_curve;
      m.e_rmse_curve_raw = curves.e_rmse_curve_raw;
    }
    emit_json(m.to_json(), args.output, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: eval: " << e.what() << '\n';
    return 1;
  }
}

struct PredictArgs {
  std::string input;
  std::string output;
  std::string actual_column = "actual_kW";
  std::string predicted_column = "predicted_kW";
  double rated = 0.0;
};

int run_predict_eval(const PredictArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto table = read_table(args.input);
    auto acol = table.column(args.actual_column);
    auto pcol = table.column(args.predicted_column);
    if ((!acol || !pcol) && table.header.size() == 2) {
      acol = 0;
      pcol = 1;
    }
    if (!acol || !pcol)
      throw FormatError("expected columns '" + args.actual_column + "' and '" + args.predicted_column + "'");
    std::vector<double> actual, predicted;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      auto a = csv::parse_double(table.rows[i][*acol]);
      auto p = csv::parse_double(table.rows[i][*pcol]);
      if (!a || !p) throw FormatError("row " + std::to_string(i + 1) + ": non-numeric power value");
      actual.push_back(*a);
      predicted.push_back(*p);
    }
    MetricsReport m;
    m.prediction = prediction_errors(actual, predicted, args.rated);
    emit_json(m.to_json(), args.output, out);
    return 0;
  } catch (const std::exception& e) {
    err << "error: predict-eval: " << e.what() << '\n';
    return 1;
  }
}

int dispatch(CLI::App& app, const std::function<void(CLI::App&)>& parse, std::ostream& out,
             std::ostream& err, const std::function<int()>& run) {
  try {
    parse(app);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }
  return run();
}

int cli_impl(const std::function<void(CLI::App&)>& parse, std::ostream& out, std::ostream& err) {
  CLI::App app{"Three-stage outlier identification for wind speed-power SCADA data", "windsweep"};
  app.require_subcommand(1);

  CleanArgs clean;
  auto* c = app.add_subcommand("clean", "Identify outliers in a SCADA CSV");
  c->add_option("--input,-i", clean.input, "Input CSV with a header row")->required();
  c->add_option("--output-dir,-o", clean.output_dir, "Directory for report.csv and summary.json");
  c->add_option("--config", clean.config, "key=value configuration file (flags override it)");
  c->add_option("--svg", clean.svg, "Write a verdict-colored scatter plot here");
  c->add_option("--debug-dir", clean.debug_dir, "Dump raster/eroded/opened PGMs and the envelope CSV");
  c->add_flag("--no-timings", clean.no_timings, "Write timings_ms as null for byte-stable summaries");
  setting(c, clean.overrides, "--cut-in", "cut_in", "Cut-in wind speed (m/s)");
  setting(c, clean.overrides, "--cut-off", "cut_off", "Cut-off wind speed (m/s)");
  setting(c, clean.overrides, "--rated", "rated", "Rated power (kW)");
  setting(c, clean.overrides, "--k", "k", "IQR adjustment factor");
  setting(c, clean.overrides, "--d", "d", "Structuring element diameter (pixels)");
  setting(c, clean.overrides, "--q", "q", "Raster resolution");
  setting(c, clean.overrides, "--c", "c", "RANSAC threshold factor");
  setting(c, clean.overrides, "--n-max", "n_max", "RANSAC iterations");
  setting(c, clean.overrides, "--folds", "folds", "Cross-validation folds (1 = single pass)");
  setting(c, clean.overrides, "--seed", "seed", "Random seed (falls back to WINDSWEEP_SEED)");
  setting(c, clean.overrides, "--strata", "strata", "Power strata for sampling");
  setting(c, clean.overrides, "--sample-fraction", "sample_fraction", "Per-stratum training fraction");
  setting(c, clean.overrides, "--inlier-metric", "inlier_metric", "abs or signed");
  setting(c, clean.overrides, "--me-estimator", "me_estimator", "mean or median");
  setting(c, clean.overrides, "--zero-power-epsilon", "zero_power_epsilon", "Tolerance for p = 0");
  setting(c, clean.overrides, "--duplicate-key", "duplicate_key", "speed_power or speed_power_timestamp");
  setting(c, clean.overrides, "--bin-width", "bin_width", "Power-curve bin width (m/s)");
  setting(c, clean.overrides, "--speed-column", "speed_column", "Wind speed column name");
  setting(c, clean.overrides, "--power-column", "power_column", "Power column name");
  setting(c, clean.overrides, "--label-column", "label_column", "Label column name");
  c->add_flag_callback("--all-points", [&clean] { clean.overrides["all_points"] = "true"; },
                       "Evaluate cleansed E_rmse over every point");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
  s->add_option("--output,-o", synth.output, "Output CSV")->required();
  s->add_option("--config", synth.config, "key=value configuration file");
  setting(s, synth.overrides, "--n", "n", "Number of points");
  setting(s, synth.overrides, "--seed", "seed", "Random seed (falls back to WINDSWEEP_SEED)");
  setting(s, synth.overrides, "--cut-in", "cut_in", "Cut-in wind speed (m/s)");
  setting(s, synth.overrides, "--cut-off", "cut_off", "Cut-off wind speed (m/s)");
  setting(s, synth.overrides, "--rated", "rated", "Rated power (kW)");
  setting(s, synth.overrides, "--rated-speed", "rated_speed", "Rated wind speed (m/s)");
  setting(s, synth.overrides, "--noise-sd", "noise_sd", "Vertical noise on normal points (kW)");
  setting(s, synth.overrides, "--dispersive", "dispersive_fraction", "Fraction of dispersive outliers");
  setting(s, synth.overrides, "--stacked", "stacked_fraction", "Fraction of stacked outliers");
  setting(s, synth.overrides, "--bands", "stacked_bands", "Stacked bands v_low:v_high:level:thickness;...");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Classification metrics from a flags CSV with labels");
  e->add_option("--input,-i", eval.input, "CSV with a flag/verdict column and a label column")->required();
  e->add_option("--output,-o", eval.output, "Write metrics JSON here instead of stdout");
  e->add_option("--verdict-column", eval.verdict_column);
  e->add_option("--label-column", eval.label_column);
  e->add_option("--speed-column", eval.speed_column);
  e->add_option("--power-column", eval.power_column);
  e->add_option("--rated", eval.rated, "Rated power (kW); enables power-curve E_rmse");

  PredictArgs pred;
  auto* p = app.add_subcommand("predict-eval", "Per-unit MAE/RMSE of a forecast CSV");
  p->add_option("--input,-i", pred.input, "CSV with actual_kW,predicted_kW")->required();
  p->add_option("--rated", pred.rated, "Rated power (kW)")->required();
  p->add_option("--output,-o", pred.output, "Write metrics JSON here instead of stdout");
  p->add_option("--actual-column", pred.actual_column);
  p->add_option("--predicted-column", pred.predicted_column);

  return dispatch(app, parse, out, err, [&]() -> int {
    if (c->parsed()) return run_clean(clean, out, err);
    if (s->parsed()) return run_synth(synth, out, err);
    if (e->parsed()) return run_eval(eval, out, err);
    return run_predict_eval(pred, out, err);
  });
}

}  // namespace

int cli_main(int argc, char** argv) {
  return cli_impl([&](CLI::App& app) { app.parse(argc, argv); }, std::cout, std::cerr);
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return cli_impl(
      [&](CLI::App& app) {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
      },
      out, err);
}

}  // namespace windsweep
