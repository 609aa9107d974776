#pragma once

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "techevo/coevo.hpp"
#include "techevo/csv.hpp"
#include "techevo/descstats.hpp"
#include "techevo/errors.hpp"
#include "techevo/evolution.hpp"
#include "techevo/report.hpp"
#include "techevo/series.hpp"
#include "techevo/sigmoid.hpp"
#include "techevo/synth.hpp"

namespace techevo {

namespace detail {

/// Exit codes: 0 success, 2 data/usage problems, 3 fitting/search/
/// generation failures. Stable part of the CLI contract.
inline int exit_code_for(errc c) {
  switch (c) {
    case errc::k_too_small:
    case errc::search_failure:
    case errc::degenerate_noise:
      return 3;
    default:
      return 2;
  }
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(errc::invalid_config, "cannot write output file '" + path + "'");
  f << content;
  if (!f) fail(errc::invalid_config, "write to '" + path + "' failed");
}

inline void add_warning(std::vector<std::string>& warnings, const std::string& w) {
  for (const std::string& existing : warnings)
    if (existing == w) return;
  warnings.push_back(w);
}

struct AnalyzeArgs {
  std::string host_path;
  std::string sub_path;
  std::string time_col = "year";
  std::string value_col = "value";
  std::string mode = "reduced";
  double alpha = 0.05;
  std::string out_path;
  std::string format = "json";
  std::string plotdata_path;
};

inline int do_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  try {
    const TimeSeries host_raw = parse_csv(a.host_path, a.time_col, a.value_col);
    const TimeSeries sub_raw = parse_csv(a.sub_path, a.time_col, a.value_col);
    const PairedSeries pair = align(host_raw, sub_raw);

    const TimeSeries ln_host = log_transform(pair.host());
    const TimeSeries ln_sub = log_transform(pair.sub());

    Report report;
    report.inputs.host_path = a.host_path;
    report.inputs.sub_path = a.sub_path;
    report.inputs.time_col = a.time_col;
    report.inputs.value_col = a.value_col;
    report.inputs.mode = a.mode;
    report.inputs.alpha = a.alpha;
    report.host_log = summarize(ln_host);
    report.sub_log = summarize(ln_sub);
    report.host_fit = fit_logistic(pair.host());
    report.sub_fit = fit_logistic(pair.sub());
    report.evolution = a.mode == "exact"
                           ? estimate_evolution_exact(pair, report.host_fit, report.sub_fit, a.alpha)
                           : estimate_evolution(pair, report.host_fit, report.sub_fit, a.alpha);

    if (report.evolution.small_value_warning)
      add_warning(report.warnings,
                  "series values exceed 50% of their fitted asymptote; the small-value power-law "
                  "approximation degrades there (exact mode is unaffected)");
    if (!report.host_fit.converged)
      add_warning(report.warnings, "logistic fit of the host series did not converge");
    if (!report.sub_fit.converged)
      add_warning(report.warnings, "logistic fit of the subsystem series did not converge");

    std::string payload = a.format == "md" ? to_markdown(report) : to_json(report);
    if (payload.empty() || payload.back() != '\n') payload += '\n';

    if (!a.plotdata_path.empty()) {
      std::string csv = "time,lnH,lnP,fitted_lnP\n";
      for (std::size_t i = 0; i < pair.size(); ++i) {
        const double lh = ln_host.values()[i];
        const double lp = ln_sub.values()[i];
        const double fitted = report.evolution.lnA + report.evolution.B * lh;
        csv += g17(pair.times()[i]) + "," + g17(lh) + "," + g17(lp) + "," + g17(fitted) + "\n";
      }
      write_text_file(a.plotdata_path, csv);
    }

    if (a.out_path.empty())
      out << payload;
    else
      write_text_file(a.out_path, payload);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

/// Parses NAME:GENERATIONS:YEARS, splitting on the two rightmost colons
/// so technology names may themselves contain colons.
inline EvolutionIndex parse_tech_flag(const std::string& spec) {
  const auto last = spec.rfind(':');
  const auto mid = last == std::string::npos ? std::string::npos : spec.rfind(':', last - 1);
  if (last == std::string::npos || mid == std::string::npos || mid == 0)
    fail(errc::invalid_config,
         "--tech expects NAME:GENERATIONS:YEARS, got '" + spec + "'");
  const std::string name = spec.substr(0, mid);
  const std::string gens_str = spec.substr(mid + 1, last - mid - 1);
  const std::string years_str = spec.substr(last + 1);
  double gens = 0.0, years = 0.0;
  if (!parse_double(gens_str, gens) || gens != static_cast<long>(gens))
    fail(errc::invalid_config, "--tech '" + spec + "': generations must be an integer, got '" +
                                   gens_str + "'");
  if (!parse_double(years_str, years))
    fail(errc::invalid_config, "--tech '" + spec + "': years must be a number, got '" +
                                   years_str + "'");
  return evolution_index(name, static_cast<long>(gens), years);
}

inline int do_coevolve(const std::vector<std::string>& tech_specs, double threshold,
                       std::ostream& out, std::ostream& err) {
  try {
    std::vector<EvolutionIndex> components;
    components.reserve(tech_specs.size());
    for (const std::string& spec : tech_specs) components.push_back(parse_tech_flag(spec));
    const CoevolutionIndex cv = coevolution_index(std::move(components), threshold);

    for (const EvolutionIndex& c : cv.components)
      out << "Ev(" << c.tech_name << ") = " << c.generations << "/" << g17(c.duration) << " = "
          << fmt2(c.ev) << "\n";
    out << "CV = " << fmt2(cv.cv) << " (exact " << g17(cv.cv) << ")\n";
    out << "coevolution: " << (cv.coevolution ? "yes" : "no") << " (threshold " << fmt2(cv.threshold)
        << ")\n";
    if (cv.has_sub_unit_rate)
      out << "warning: a component rate Ev is below 1, so CV is not guaranteed to reach the "
             "largest component rate\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

inline int do_simulate(const std::string& config_path, std::optional<int> replicates_override,
                       const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    const SweepSpec spec = load_sweep_config(config_path);
    const int replicates = replicates_override.value_or(spec.replicates);
    const std::vector<SweepRow> rows = recovery_sweep(spec.grid, replicates);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    if (out_path.empty())
      out << csv.str();
    else
      write_text_file(out_path, csv.str());
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace detail

/// Full command-line surface, callable in-process for testing: `args`
/// excludes the program name; diagnostics go to `err`, results to `out`
/// (or to files given by --out/--plotdata). Returns the process exit
/// code: 0 success, 2 data/usage error, 3 fit failure.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measures technology evolution: logistic curve fits, the evolutionary growth "
               "coefficient B with its grade, and coevolution indices."};
  app.name("techevo");
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  detail::AnalyzeArgs aa;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Estimate the evolutionary coefficient B for a host/subsystem CSV pair");
  analyze->add_option("--host", aa.host_path, "CSV file of the host technology series")->required();
  analyze->add_option("--sub", aa.sub_path, "CSV file of the subsystem technology series")
      ->required();
  analyze->add_option("--time-col", aa.time_col, "name of the time column")
      ->capture_default_str();
  analyze->add_option("--value-col", aa.value_col, "name of the value column")
      ->capture_default_str();
  analyze->add_option("--mode", aa.mode, "estimation mode")
      ->check(CLI::IsMember({"reduced", "exact"}))
      ->capture_default_str();
  analyze->add_option("--alpha", aa.alpha, "significance level for the grade test")
      ->capture_default_str();
  analyze->add_option("--out", aa.out_path, "write the report here instead of stdout");
  analyze->add_option("--format", aa.format, "report format")
      ->check(CLI::IsMember({"json", "md"}))
      ->capture_default_str();
  analyze->add_option("--plotdata", aa.plotdata_path,
                      "write a CSV of (time, lnH, lnP, fitted_lnP) for external plotting");

  std::vector<std::string> tech_specs;
  double threshold = 0.1;
  CLI::App* coevolve =
      app.add_subcommand("coevolve", "Compute evolution rates Ev and the coevolution index CV");
  coevolve->add_option("--tech", tech_specs, "technology as NAME:GENERATIONS:YEARS (repeatable)")
      ->required();
  coevolve->add_option("--threshold", threshold, "CV level above which the system counts as "
                                                 "coevolving")
      ->capture_default_str();

  std::string config_path, sim_out;
  int replicates_flag = 0;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo recovery sweep over synthetic logistic pairs");
  simulate->add_option("--config", config_path, "key=value sweep configuration file")->required();
  CLI::Option* rep_opt =
      simulate->add_option("--replicates", replicates_flag, "override the config replicate count");
  simulate->add_option("--out", sim_out, "write the sweep CSV here instead of stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("techevo");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (*analyze) return detail::do_analyze(aa, out, err);
  if (*coevolve) return detail::do_coevolve(tech_specs, threshold, out, err);
  if (*simulate) {
    std::optional<int> override_reps;
    if (rep_opt->count() > 0) override_reps = replicates_flag;
    return detail::do_simulate(config_path, override_reps, sim_out, out, err);
  }
  return 2;
}

}  // namespace techevo
