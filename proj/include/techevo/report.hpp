#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "techevo/coevo.hpp"
#include "techevo/csv.hpp"
#include "techevo/descstats.hpp"
#include "techevo/errors.hpp"
#include "techevo/evolution.hpp"
#include "techevo/regress.hpp"
#include "techevo/sigmoid.hpp"

namespace techevo {

inline constexpr const char* kToolVersion = "1.0.0";

struct ReportInputs {
  std::string host_path;
  std::string sub_path;
  std::string time_col = "year";
  std::string value_col = "value";
  std::string mode = "reduced";
  double alpha = 0.05;
};

/// Everything one analysis run produced, in one serializable value. JSON
/// is the canonical form; the Markdown rendering is derived from the same
/// fields and never computed separately.
struct Report {
  ReportInputs inputs;
  DescriptiveSummary host_log;  // moments of the log-scale series
  DescriptiveSummary sub_log;
  LogisticFit host_fit;
  LogisticFit sub_fit;
  EvolutionResult evolution;
  std::optional<CoevolutionIndex> coevolution;
  std::vector<std::string> warnings;
  std::string tool_version = kToolVersion;
};

namespace detail {

inline void json_escape_into(std::string& out, const std::string& s) {
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
}

/// Canonical-form JSON scalars: fixed 17-significant-digit floats so the
/// same Report always serializes to the same bytes; non-finite values
/// have no JSON representation and become null.
inline std::string jstr(const std::string& s) {
  std::string out = "\"";
  json_escape_into(out, s);
  out += '"';
  return out;
}

inline std::string jnum(double v) { return std::isfinite(v) ? g17(v) : "null"; }

inline const char* jbool(bool b) { return b ? "true" : "false"; }

inline std::string json_of(const DescriptiveSummary& d) {
  std::string o = "{";
  o += "\"n\":" + std::to_string(d.n);
  o += ",\"mean\":" + jnum(d.mean);
  o += ",\"sd\":" + jnum(d.sd);
  o += ",\"skewness\":" + jnum(d.skewness);
  o += ",\"kurtosis\":" + jnum(d.kurtosis);
  o += "}";
  return o;
}

inline std::string json_of(const LogisticFit& f) {
  std::string o = "{";
  o += "\"K\":" + jnum(f.K);
  o += ",\"a\":" + jnum(f.a);
  o += ",\"b\":" + jnum(f.b);
  o += ",\"sse\":" + jnum(f.sse);
  o += ",\"inflection_time\":" + jnum(f.inflection_time);
  o += ",\"converged\":";
  o += jbool(f.converged);
  o += "}";
  return o;
}

inline std::string json_of(const OlsFit& f) {
  std::string o = "{";
  o += "\"slope\":" + jnum(f.slope);
  o += ",\"intercept\":" + jnum(f.intercept);
  o += ",\"se_slope\":" + jnum(f.se_slope);
  o += ",\"se_intercept\":" + jnum(f.se_intercept);
  o += ",\"t_slope\":" + jnum(f.t_slope);
  o += ",\"p_slope\":" + jnum(f.p_slope);
  o += ",\"r2\":" + jnum(f.r2);
  o += ",\"r2_adj\":" + jnum(f.r2_adj);
  o += ",\"f_stat\":" + jnum(f.f_stat);
  o += ",\"p_f\":" + jnum(f.p_f);
  o += ",\"resid_se\":" + jnum(f.resid_se);
  o += ",\"n\":" + std::to_string(f.n);
  o += ",\"residuals\":[";
  for (std::size_t i = 0; i < f.residuals.size(); ++i) {
    if (i) o += ',';
    o += jnum(f.residuals[i]);
  }
  o += "]}";
  return o;
}

inline std::string json_of(const EvolutionResult& e) {
  std::string o = "{";
  o += "\"B\":" + jnum(e.B);
  o += ",\"se_B\":" + jnum(e.se_B);
  o += ",\"lnA\":" + jnum(e.lnA);
  o += ",\"se_lnA\":" + jnum(e.se_lnA);
  o += ",\"grade\":" + std::to_string(e.grade);
  o += ",\"stage\":" + jstr(e.stage);
  o += ",\"prediction\":" + jstr(e.prediction);
  o += ",\"mode\":" + jstr(to_string(e.mode));
  o += ",\"small_value_warning\":";
  o += jbool(e.small_value_warning);
  o += ",\"fit\":" + json_of(e.fit);
  o += "}";
  return o;
}

inline std::string json_of(const CoevolutionIndex& c) {
  std::string o = "{\"components\":[";
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    const EvolutionIndex& e = c.components[i];
    if (i) o += ',';
    o += "{\"tech_name\":" + jstr(e.tech_name);
    o += ",\"generations\":" + std::to_string(e.generations);
    o += ",\"duration\":" + jnum(e.duration);
    o += ",\"ev\":" + jnum(e.ev);
    o += "}";
  }
  o += "],\"cv\":" + jnum(c.cv);
  o += ",\"threshold\":" + jnum(c.threshold);
  o += ",\"coevolution\":";
  o += jbool(c.coevolution);
  o += ",\"has_sub_unit_rate\":";
  o += jbool(c.has_sub_unit_rate);
  o += "}";
  return o;
}

inline double num_or_nan(const nlohmann::json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

inline DescriptiveSummary descriptives_from_json(const nlohmann::json& j) {
  DescriptiveSummary d;
  d.n = j.at("n").get<std::size_t>();
  d.mean = num_or_nan(j.at("mean"));
  d.sd = num_or_nan(j.at("sd"));
  d.skewness = num_or_nan(j.at("skewness"));
  d.kurtosis = num_or_nan(j.at("kurtosis"));
  return d;
}

inline LogisticFit logistic_from_json(const nlohmann::json& j) {
  LogisticFit f;
  f.K = num_or_nan(j.at("K"));
  f.a = num_or_nan(j.at("a"));
  f.b = num_or_nan(j.at("b"));
  f.sse = num_or_nan(j.at("sse"));
  f.inflection_time = num_or_nan(j.at("inflection_time"));
  f.converged = j.at("converged").get<bool>();
  return f;
}

inline OlsFit ols_from_json(const nlohmann::json& j) {
  OlsFit f;
  f.slope = num_or_nan(j.at("slope"));
  f.intercept = num_or_nan(j.at("intercept"));
  f.se_slope = num_or_nan(j.at("se_slope"));
  f.se_intercept = num_or_nan(j.at("se_intercept"));
  f.t_slope = num_or_nan(j.at("t_slope"));
  f.p_slope = num_or_nan(j.at("p_slope"));
  f.r2 = num_or_nan(j.at("r2"));
  f.r2_adj = num_or_nan(j.at("r2_adj"));
  f.f_stat = num_or_nan(j.at("f_stat"));
  f.p_f = num_or_nan(j.at("p_f"));
  f.resid_se = num_or_nan(j.at("resid_se"));
  f.n = j.at("n").get<std::size_t>();
  for (const auto& r : j.at("residuals")) f.residuals.push_back(num_or_nan(r));
  return f;
}

inline EvolutionResult evolution_from_json(const nlohmann::json& j) {
  EvolutionResult e;
  e.B = num_or_nan(j.at("B"));
  e.se_B = num_or_nan(j.at("se_B"));
  e.lnA = num_or_nan(j.at("lnA"));
  e.se_lnA = num_or_nan(j.at("se_lnA"));
  e.grade = j.at("grade").get<int>();
  e.stage = j.at("stage").get<std::string>();
  e.prediction = j.at("prediction").get<std::string>();
  e.mode = j.at("mode").get<std::string>() == "exact" ? EvolutionMode::exact
                                                      : EvolutionMode::reduced;
  e.small_value_warning = j.at("small_value_warning").get<bool>();
  e.fit = ols_from_json(j.at("fit"));
  return e;
}

inline CoevolutionIndex coevolution_from_json(const nlohmann::json& j) {
  CoevolutionIndex c;
  for (const auto& comp : j.at("components")) {
    EvolutionIndex e;
    e.tech_name = comp.at("tech_name").get<std::string>();
    e.generations = comp.at("generations").get<long>();
    e.duration = num_or_nan(comp.at("duration"));
    e.ev = num_or_nan(comp.at("ev"));
    c.components.push_back(std::move(e));
  }
  c.cv = num_or_nan(j.at("cv"));
  c.threshold = num_or_nan(j.at("threshold"));
  c.coevolution = j.at("coevolution").get<bool>();
  c.has_sub_unit_rate = j.at("has_sub_unit_rate").get<bool>();
  return c;
}

/// Two-decimal display rounding used everywhere in Markdown tables.
inline std::string fmt2(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string fmt3(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace detail

/// Serializes in canonical form: fixed key order, %.17g floats, null for
/// non-finite values, no insignificant whitespace. Serializing the same
/// Report twice yields identical bytes, and parse→serialize round-trips
/// byte-identically.
inline std::string to_json(const Report& r) {
  std::string o = "{\"inputs\":{";
  o += "\"host_path\":" + detail::jstr(r.inputs.host_path);
  o += ",\"sub_path\":" + detail::jstr(r.inputs.sub_path);
  o += ",\"time_col\":" + detail::jstr(r.inputs.time_col);
  o += ",\"value_col\":" + detail::jstr(r.inputs.value_col);
  o += ",\"mode\":" + detail::jstr(r.inputs.mode);
  o += ",\"alpha\":" + detail::jnum(r.inputs.alpha);
  o += "},\"descriptives\":{";
  o += "\"host_log\":" + detail::json_of(r.host_log);
  o += ",\"sub_log\":" + detail::json_of(r.sub_log);
  o += "},\"logistic_fits\":{";
  o += "\"host\":" + detail::json_of(r.host_fit);
  o += ",\"sub\":" + detail::json_of(r.sub_fit);
  o += "},\"evolution\":" + detail::json_of(r.evolution);
  o += ",\"coevolution\":";
  o += r.coevolution ? detail::json_of(*r.coevolution) : "null";
  o += ",\"warnings\":[";
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    if (i) o += ',';
    o += detail::jstr(r.warnings[i]);
  }
  o += "],\"tool_version\":" + detail::jstr(r.tool_version);
  o += "}";
  return o;
}

inline Report from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_config, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    Report r;
    const auto& in = j.at("inputs");
    r.inputs.host_path = in.at("host_path").get<std::string>();
    r.inputs.sub_path = in.at("sub_path").get<std::string>();
    r.inputs.time_col = in.at("time_col").get<std::string>();
    r.inputs.value_col = in.at("value_col").get<std::string>();
    r.inputs.mode = in.at("mode").get<std::string>();
    r.inputs.alpha = detail::num_or_nan(in.at("alpha"));
    r.host_log = detail::descriptives_from_json(j.at("descriptives").at("host_log"));
    r.sub_log = detail::descriptives_from_json(j.at("descriptives").at("sub_log"));
    r.host_fit = detail::logistic_from_json(j.at("logistic_fits").at("host"));
    r.sub_fit = detail::logistic_from_json(j.at("logistic_fits").at("sub"));
    r.evolution = detail::evolution_from_json(j.at("evolution"));
    if (!j.at("coevolution").is_null())
      r.coevolution = detail::coevolution_from_json(j.at("coevolution"));
    for (const auto& w : j.at("warnings")) r.warnings.push_back(w.get<std::string>());
    r.tool_version = j.at("tool_version").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::invalid_config, std::string("report JSON is missing fields: ") + e.what());
  }
}

/// Markdown rendering of the same data the JSON carries: values rounded
/// to 2 decimals (p-values to 3), with the regression row laid out as
/// constant, coefficient B, adjusted R², and F, each with its standard
/// error or significance in parentheses. Stars: *** p<0.01, ** p<0.05,
/// * p<0.10.
inline std::string to_markdown(const Report& r) {
  using detail::fmt2;
  using detail::fmt3;
  const EvolutionResult& e = r.evolution;

  std::string o = "# Technology evolution report\n\n";
  o += "- Host series: `" + r.inputs.host_path + "`\n";
  o += "- Subsystem series: `" + r.inputs.sub_path + "`\n";
  o += "- Columns: time `" + r.inputs.time_col + "`, value `" + r.inputs.value_col + "`\n";
  o += "- Estimation mode: " + r.inputs.mode + ", alpha " + fmt2(r.inputs.alpha) + "\n";
  o += "- Tool version: " + r.tool_version + "\n\n";

  o += "## Descriptive statistics (natural-log scale)\n\n";
  o += "| Series | N | Mean | Std. Deviation | Skewness | Kurtosis |\n";
  o += "|---|---|---|---|---|---|\n";
  auto desc_row = [&](const char* label, const DescriptiveSummary& d) {
    o += "| " + std::string(label) + " | " + std::to_string(d.n) + " | " + fmt2(d.mean) + " | " +
         fmt2(d.sd) + " | " + fmt2(d.skewness) + " | " + fmt2(d.kurtosis) + " |\n";
  };
  desc_row("LN host", r.host_log);
  desc_row("LN subsystem", r.sub_log);
  o += "\n";

  o += "## Logistic fits K/(1+exp(a-bt))\n\n";
  o += "| Series | K | a | b | SSE | Inflection time | Converged |\n";
  o += "|---|---|---|---|---|---|---|\n";
  auto fit_row = [&](const char* label, const LogisticFit& f) {
    o += "| " + std::string(label) + " | " + fmt2(f.K) + " | " + fmt2(f.a) + " | " + fmt2(f.b) +
         " | " + fmt2(f.sse) + " | " + fmt2(f.inflection_time) + " | " +
         (f.converged ? "yes" : "no") + " |\n";
  };
  fit_row("Host", r.host_fit);
  fit_row("Subsystem", r.sub_fit);
  o += "\n";

  o += "## Evolutionary growth of the subsystem relative to the host\n\n";
  const int df_n = static_cast<int>(e.fit.n);
  const char* const_stars =
      (std::isfinite(e.se_lnA) && e.se_lnA > 0.0 && df_n > 2)
          ? significance_stars(two_sided_p(e.lnA / e.se_lnA, df_n - 2))
          : "";
  const char* b_stars = significance_stars(e.fit.p_slope);
  o += "| Constant (St. Err.) | Evolutionary coefficient B (St. Err.) | R2 adj. (St. Err. of "
       "the Estimate) | F (sign.) |\n";
  o += "|---|---|---|---|\n";
  o += "| " + fmt2(e.lnA) + const_stars + " (" + fmt2(e.se_lnA) + ") | " + fmt2(e.B) + b_stars +
       " (" + fmt2(e.se_B) + ") | " + fmt2(e.fit.r2_adj) + " (" + fmt2(e.fit.resid_se) + ") | " +
       fmt2(e.fit.f_stat) + " (" + fmt3(e.fit.p_f) + ") |\n\n";
  o += "Significance: *** p<0.01, ** p<0.05, * p<0.10. N = " + std::to_string(e.fit.n) + ".\n\n";
  o += "**Grade " + std::to_string(e.grade) + " — " + e.stage + ".** " + e.prediction + ".\n";

  if (!r.warnings.empty()) {
    o += "\n## Warnings\n\n";
    for (const std::string& w : r.warnings) o += "- " + w + "\n";
  }

  if (r.coevolution) {
    const CoevolutionIndex& c = *r.coevolution;
    o += "\n## Coevolution\n\n";
    o += "| Technology | Generations | Years | Ev |\n";
    o += "|---|---|---|---|\n";
    for (const EvolutionIndex& comp : c.components)
      o += "| " + comp.tech_name + " | " + std::to_string(comp.generations) + " | " +
           fmt2(comp.duration) + " | " + fmt2(comp.ev) + " |\n";
    o += "\nCV = " + fmt2(c.cv) + (c.coevolution ? " (coevolution: CV > " : " (no coevolution: CV <= ") +
         fmt2(c.threshold) + ")\n\n";
    o += "Note: Ev and CV are computed from exact ratios and rounded only here; the product of "
         "the rounded Ev values shown above can differ from the rounded CV in the last digit.\n";
  }
  return o;
}

}  // namespace techevo
