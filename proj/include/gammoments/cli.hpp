#pragma once

// Command-line front end. run() parses argv, dispatches to one command and
// writes a deterministic JSON or CSV report.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gammoments/bernstein.hpp"
#include "gammoments/diagnostics.hpp"
#include "gammoments/errors.hpp"
#include "gammoments/idlab.hpp"
#include "gammoments/meldens.hpp"
#include "gammoments/momentseq.hpp"

namespace gammoments::cli {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr const char* output_dir_variable = "GAMMOMENTS_OUTPUT_DIR";

using json = nlohmann::json;

class format_error : public domain_error {
 public:
  using domain_error::domain_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct ReportEnvelope {
  std::string tool_version = cli::tool_version;
  std::string command;
  json inputs = json::object();
  json results = json::object();
  std::vector<std::string> warnings;
  std::optional<Table> table;  // set for tabular payloads
};

enum class Format { json, csv };

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline void write_number(double v, std::string& out) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    out += format_double(v);
  }
}

inline void write_json(const json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        write_json(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        write_json(j[i], out, depth + 1);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float:
      write_number(j.get<double>(), out);
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Keys sorted (nlohmann objects are ordered maps), floats with 17
/// significant digits, non-finite values as strings.
inline std::string to_json_text(const json& j) {
  std::string out;
  detail::write_json(j, out, 0);
  out += "\n";
  return out;
}

inline json to_json(const ReportEnvelope& r) {
  json j = json::object();
  j["tool_version"] = r.tool_version;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["results"] = r.results;
  j["warnings"] = r.warnings;
  return j;
}

inline std::string render(const ReportEnvelope& r, Format fmt) {
  if (fmt == Format::json) return to_json_text(to_json(r));
  if (!r.table) throw format_error("csv output is only available for tabular results (seq, density)");
  std::string out;
  for (std::size_t i = 0; i < r.table->header.size(); ++i) {
    if (i) out += ",";
    out += r.table->header[i];
  }
  out += "\n";
  for (const auto& row : r.table->rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  throw format_error("unknown format '" + s + "'");
}

// ---------------------------------------------------------------------------
// Options

struct Options {
  std::string command;
  std::string format = "json";
  std::string output;
  std::string config;
  unsigned threads = 1;

  // sequence
  std::string family;
  std::optional<double> t, a, b, s, p, r, k, m;
  std::optional<double> power, scale;
  std::string num, den;
  std::vector<double> values;
  std::size_t n = 10;

  // classify
  std::string phi = "identity";
  std::optional<double> alpha, c;
  std::optional<bool> selfdecomp;

  // id
  std::vector<double> t_grid{0.25, 0.5, 1.5};
  std::size_t size = 5;
  double tol = -1.0;  // per-command default when negative

  // bernstein
  std::string kind;
  bool shifted = false;
  std::optional<double> killing, drift;

  // density
  std::string target = "L_t";
  std::size_t count = 400;
  std::optional<double> x_min, x_max, contour_c;

  // verify
  std::string identity;
  std::optional<double> lambda, x;
};

namespace detail {

inline double need(const std::optional<double>& v, const char* flag, const std::string& what) {
  if (!v) throw domain_error(std::string("missing --") + flag + " for " + what);
  return *v;
}

inline std::vector<std::pair<double, double>> parse_pairs(const std::string& text, const char* flag) {
  std::vector<std::pair<double, double>> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw domain_error(std::string("--") + flag + ": expected a:A pairs, got '" + item + "'");
    double first = 0.0, second = 0.0;
    const auto* b0 = item.data();
    const auto r1 = std::from_chars(b0, b0 + colon, first);
    const auto r2 = std::from_chars(b0 + colon + 1, b0 + item.size(), second);
    if (r1.ec != std::errc() || r1.ptr != b0 + colon || r2.ec != std::errc() || r2.ptr != b0 + item.size()) {
      throw domain_error(std::string("--") + flag + ": bad number in '" + item + "'");
    }
    out.emplace_back(first, second);
  }
  return out;
}

inline GammaRatioSpec ratio_spec(const Options& o) {
  return {parse_pairs(o.num, "num"), parse_pairs(o.den, "den")};
}

inline LogMomentSequence base_sequence(const Options& o) {
  const std::string& f = o.family;
  if (f == "factorial") return factorial_power(need(o.t, "t", f));
  if (f == "ones") return ones();
  if (f == "beta") return beta_power(need(o.a, "a", f), need(o.b, "b", f), need(o.s, "s", f));
  if (f == "gamma1") return gamma_order1(need(o.a, "a", f), need(o.s, "s", f));
  if (f == "binomial") return binomial_seq(need(o.p, "p", f), need(o.r, "r", f));
  if (f == "raney") return raney_seq(need(o.p, "p", f), need(o.r, "r", f));
  if (f == "fuss_catalan") return fuss_catalan_seq(need(o.k, "k", f));
  if (f == "mt") return mt_seq(need(o.t, "t", f));
  if (f == "rgstable") return rgstable_seq(need(o.a, "a", f), need(o.m, "m", f));
  if (f == "gamma_ratio") return gamma_ratio_seq(ratio_spec(o));
  if (f == "values") {
    std::vector<double> v{1.0};
    v.insert(v.end(), o.values.begin(), o.values.end());
    return from_values(v);
  }
  if (f.empty()) throw domain_error("missing --family");
  throw domain_error("unknown family '" + f + "'");
}

inline LogMomentSequence sequence(const Options& o) {
  auto seq = base_sequence(o);
  if (o.power) seq = combine_power(seq, *o.power);
  if (o.scale) seq = rescale(seq, *o.scale);
  return seq;
}

inline BernsteinVerdict bernstein_of(const std::string& kind, const Options& o) {
  if (kind == "beta") return beta_bernstein(need(o.a, "a", kind), need(o.b, "b", kind), need(o.s, "s", kind));
  if (kind == "gamma1") return gamma1_bernstein(need(o.a, "a", kind), need(o.s, "s", kind));
  if (kind == "catalan") return catalan_bernstein(o.shifted);
  if (kind == "rgstable") return rgstable_bernstein(need(o.a, "a", kind), need(o.m, "m", kind));
  if (kind == "custom-triplet") {
    BernsteinVerdict v;
    BernsteinFunction phi;
    phi.killing = o.killing.value_or(0.0);
    phi.drift = o.drift.value_or(0.0);
    if (phi.killing < 0.0 || phi.drift < 0.0) throw domain_error("custom-triplet: killing and drift must be >= 0");
    if (phi.killing == 0.0 && phi.drift == 0.0) throw domain_error("custom-triplet: Phi vanishes identically");
    v.is_bernstein = true;
    v.condition = "killing >= 0, drift >= 0";
    v.phi = phi;
    return v;
  }
  throw domain_error("unknown Bernstein kind '" + kind + "'");
}

inline json numbers_json(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline json verdict_json(const DeterminacyVerdict& v) {
  json j = json::object();
  j["verdict"] = to_string(v.verdict);
  j["citations"] = v.citations;
  json ev = json::array();
  for (const auto& e : v.evidence) {
    json r = json::object();
    r["criterion"] = e.criterion;
    r["satisfied"] = e.satisfied;
    r["side"] = to_string(e.side);
    r["outcome"] = e.outcome;
    r["numbers"] = numbers_json(e.numbers);
    ev.push_back(r);
  }
  j["evidence"] = ev;
  return j;
}

inline json params_json(const Params& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline ReportEnvelope cmd_seq(const Options& o) {
  const auto seq = detail::sequence(o);
  ReportEnvelope rep;
  Table tab{{"n", "log_mu", "mu"}, {}};
  json logs = json::array(), mus = json::array();
  for (std::size_t i = 0; i <= o.n; ++i) {
    const double lv = seq.eval(i);
    logs.push_back(lv);
    mus.push_back(std::exp(lv));
    tab.rows.push_back({static_cast<double>(i), lv, std::exp(lv)});
  }
  rep.results["family"] = seq.family();
  rep.results["params"] = detail::params_json(seq.params());
  rep.results["log_mu"] = logs;
  rep.results["mu"] = mus;
  for (const auto& v : mus) {
    if (std::isinf(v.get<double>())) {
      rep.warnings.push_back("mu_n overflows binary64; use log_mu");
      break;
    }
  }
  rep.table = std::move(tab);
  return rep;
}

inline RealFunction remainder_phi_of(const Options& o) {
  if (o.phi == "identity") return [](double lam) { return lam; };
  if (o.phi == "power") {
    const double al = detail::need(o.alpha, "alpha", "phi power");
    if (!(al > 0.0 && al <= 1.0)) throw domain_error("phi power: alpha must lie in (0, 1]");
    return [al](double lam) { return std::pow(lam, al); };
  }
  auto v = detail::bernstein_of(o.phi, o);
  if (!v.is_bernstein || !v.phi) throw domain_error("phi " + o.phi + ": parameters outside the Bernstein region");
  auto f = *v.phi;
  return [f](double lam) { return evaluate(f, lam); };
}

inline ReportEnvelope cmd_classify(const Options& o) {
  ReportEnvelope rep;
  ClassifyInput in;
  in.family = o.family;
  if (o.t) in.params["t"] = *o.t;
  if (o.a) in.params["a"] = *o.a;
  if (o.s) in.params["s"] = *o.s;
  if (o.m) in.params["m"] = *o.m;
  in.selfdecomp = o.selfdecomp;
  if (o.family == "remainder") {
    detail::need(o.t, "t", "remainder");
    in.phi = remainder_phi_of(o);
  } else if (o.family != "factorial" && o.family != "gamma1" && o.family != "rgstable") {
    in.family = "sequence";
    in.sequence = detail::sequence(o);
  }
  const auto v = classify(in);
  rep.results = detail::verdict_json(v);
  if (in.family == "remainder" && v.verdict == Verdict::INCONCLUSIVE && !o.selfdecomp) {
    rep.warnings.push_back("MI side for remainder laws needs --selfdecomp");
  }
  return rep;
}

inline ReportEnvelope cmd_id(const Options& o) {
  const auto seq = detail::sequence(o);
  const double tol = o.tol < 0.0 ? 1e-9 : o.tol;
  const auto reports = id_probe(seq, o.t_grid, o.size, tol);
  ReportEnvelope rep;
  json arr = json::array();
  for (const auto& r : reports) {
    json j = json::object();
    j["t"] = r.power;
    j["shift"] = r.shift;
    j["sizes"] = r.sizes;
    j["min_eigenvalues"] = r.min_eigenvalues;
    j["raw_min_eigenvalues"] = r.raw_min_eigenvalues;
    j["normalization"] = r.normalization;
    j["psd"] = r.psd;
    arr.push_back(j);
  }
  rep.results["family"] = seq.family();
  rep.results["params"] = detail::params_json(seq.params());
  rep.results["reports"] = arr;
  rep.results["passes"] = id_probe_passes(reports);
  return rep;
}

inline ReportEnvelope cmd_bernstein(const Options& o) {
  ReportEnvelope rep;
  const auto v = detail::bernstein_of(o.kind, o);
  rep.results["is_bernstein"] = v.is_bernstein;
  rep.results["condition"] = v.condition;
  if (v.counterexample_point) rep.results["counterexample_point"] = *v.counterexample_point;
  if (v.jurek_class) rep.results["jurek_class"] = *v.jurek_class;
  if (v.complete_bernstein) rep.results["complete_bernstein"] = *v.complete_bernstein;
  if (v.phi) {
    rep.results["killing"] = v.phi->killing;
    rep.results["drift"] = v.phi->drift;
    rep.results["invariant_disagreement"] = check_invariants(*v.phi);
  }
  // Rising products against the family's sequence.
  std::optional<LogMomentSequence> seq;
  RealFunction phi;
  if (o.kind == "beta" && v.phi) {
    seq = beta_power(*o.a, *o.b, *o.s);
  } else if (o.kind == "gamma1" && v.phi) {
    seq = gamma_order1(*o.a, *o.s);
  } else if (o.kind == "rgstable" && v.phi) {
    seq = rgstable_seq(*o.a, *o.m);
  } else if (o.kind == "catalan") {
    // The raw exponent at integers gives the Catalan numbers either way.
    seq = fuss_catalan_seq(1.0);
    phi = [](double lam) { return catalan_phi(lam, false); };
  }
  if (seq) {
    if (!phi) {
      const auto f = *v.phi;
      phi = [f](double lam) { return evaluate(f, lam); };
    }
    const double tol = o.tol < 0.0 ? 1e-6 : o.tol;
    const auto fr = factorization_check(phi, *seq, o.n, tol);
    json f = json::object();
    f["pass"] = fr.pass;
    f["max_abs_log_error"] = fr.max_abs_error;
    f["worst_n"] = fr.worst_n;
    f["n_max"] = o.n;
    f["message"] = fr.message;
    rep.results["factorization"] = f;
  }
  if (!v.is_bernstein) rep.warnings.push_back("not a Bernstein function: " + v.condition);
  return rep;
}

inline ReportEnvelope cmd_density(const Options& o) {
  const auto target = parse_target(o.target);
  const double t = detail::need(o.t, "t", "density");
  const MellinSymbol sym(target, t);
  std::vector<double> grid;
  if (o.x_min || o.x_max) {
    const double lo = o.x_min.value_or(1e-3);
    const double hi = o.x_max ? *o.x_max : default_density_grid(target, t, 2).back();
    if (target == DensityTarget::M && !(hi < sym.endpoint())) {
      throw domain_error("density: --x-max must lie below the endpoint " + format_double(sym.endpoint()));
    }
    grid = target == DensityTarget::M ? logit_grid(lo, sym.endpoint(), 1.0 - hi / sym.endpoint(), o.count)
                                      : geometric_grid(lo, hi, o.count);
  } else {
    grid = default_density_grid(target, t, o.count);
  }
  const double tol = o.tol < 0.0 ? 1e-12 : o.tol;
  const auto tab = mellin_density(target, t, grid, o.contour_c, tol, o.threads);
  ReportEnvelope rep;
  Table table{{"x", "f", "err"}, {}};
  for (std::size_t i = 0; i < tab.grid.size(); ++i) table.rows.push_back({tab.grid[i], tab.values[i], tab.error_estimates[i]});
  rep.results["target"] = to_string(target);
  rep.results["t"] = t;
  rep.results["x"] = tab.grid;
  rep.results["f"] = tab.values;
  rep.results["err"] = tab.error_estimates;
  rep.results["head_mass"] = tab.head_mass;
  rep.results["tail_mass"] = tab.tail_mass;
  rep.results["full_support"] = tab.full_support;
  if (tab.clipped) rep.warnings.push_back("negative values clipped to 0 (largest " + format_double(tab.clipped_max) + ")");
  if (tab.full_support) {
    const auto d = density_diagnostics(tab);
    json dj = json::object();
    dj["mass"] = d.mass;
    dj["moments"] = d.moments;
    if (d.tail_p) dj["tail_p"] = *d.tail_p;
    if (d.tail_c) dj["tail_c"] = *d.tail_c;
    dj["tail_note"] = d.tail_note;
    rep.results["diagnostics"] = dj;
    if (target == DensityTarget::L) rep.results["integral_equation_residual"] = integral_equation_residual(tab, t);
  } else {
    rep.warnings.push_back("grid does not reach survival 1e-8; diagnostics skipped");
  }
  rep.table = std::move(table);
  return rep;
}

inline ReportEnvelope cmd_verify(const Options& o, bool& failed) {
  const auto id = parse_identity(o.identity);
  Params p;
  double point = 0.0;
  switch (id) {
    case LevyIdentity::malmsten_gamma:
      point = detail::need(o.s, "s", o.identity);
      break;
    case LevyIdentity::malmsten_beta:
      p = {{"a", detail::need(o.a, "a", o.identity)},
           {"b", detail::need(o.b, "b", o.identity)},
           {"s", detail::need(o.s, "s", o.identity)}};
      point = detail::need(o.lambda, "lambda", o.identity);
      break;
    case LevyIdentity::mt_exponent:
      p = {{"t", detail::need(o.t, "t", o.identity)}};
      point = detail::need(o.s, "s", o.identity);
      break;
    case LevyIdentity::logphi_repr:
      if (o.alpha) p["alpha"] = *o.alpha;
      if (o.c) p["c"] = *o.c;
      point = detail::need(o.x, "x", o.identity);
      break;
  }
  const double tol = o.tol < 0.0 ? 1e-8 : o.tol;
  const double residual = levy_identity_check(id, p, point, 1e-13);
  ReportEnvelope rep;
  rep.results["identity"] = o.identity;
  rep.results["point"] = point;
  rep.results["params"] = detail::params_json(p);
  rep.results["residual"] = residual;
  rep.results["tolerance"] = tol;
  rep.results["pass"] = residual <= tol;
  failed = !(residual <= tol);
  if (failed) rep.warnings.push_back("residual above tolerance");
  return rep;
}

inline ReportEnvelope cmd_kp16(const Options& o) {
  const auto spec = detail::ratio_spec(o);
  const auto r = kp16_check(spec);
  ReportEnvelope rep;
  rep.results["sum_balanced"] = r.sum_balanced;
  rep.results["kernel_min"] = r.kernel_min;
  rep.results["kernel_argmin"] = r.kernel_argmin;
  rep.results["limit_at_zero"] = r.limit_at_zero;
  rep.results["sign_at_infinity"] = r.sign_at_infinity;
  rep.results["support_sup"] = r.support_sup;
  rep.results["verdict"] = r.verdict;
  const auto seq = gamma_ratio_seq(spec);
  json mus = json::array();
  for (std::size_t i = 0; i <= o.n; ++i) mus.push_back(std::exp(seq.eval(i)));
  rep.results["moments"] = mus;
  if (!r.verdict) rep.warnings.push_back("KP16 conditions fail; no moment-sequence claim");
  return rep;
}

// ---------------------------------------------------------------------------
// Driver

namespace detail {

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"seq", "classify", "id", "bernstein", "density", "verify", "kp16"};
  return names;
}

inline std::string config_token(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += config_token(v[i]);
    }
    return s;
  }
  throw domain_error("config: unsupported value " + v.dump());
}

// Config entries become leading flags so that command-line flags, parsed
// later, win.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw domain_error("config: cannot open " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw domain_error(std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw domain_error("config: top level must be an object");
  const auto& names = command_names();
  std::size_t cmd_at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (std::find(names.begin(), names.end(), args[i]) != names.end()) {
      cmd_at = i;
      break;
    }
  }
  std::string command = cmd_at < args.size() ? args[cmd_at] : "";
  if (command.empty()) {
    if (!cfg.contains("command")) throw domain_error("config: no command given");
    command = cfg["command"].get<std::string>();
  }
  std::vector<std::string> out{command};
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.key() == "command" || it.key() == "config") continue;
    out.push_back("--" + it.key() + "=" + config_token(it.value()));
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i != cmd_at) out.push_back(args[i]);
  }
  return out;
}

inline json echo_inputs(const CLI::App& sub, const CLI::App& app) {
  json j = json::object();
  auto add = [&j](const CLI::Option* opt) {
    if (opt->count() == 0) return;
    const std::string name = opt->get_name(false, true).substr(2);
    if (name == "config" || name == "output" || name == "help") return;
    const auto& res = opt->results();
    const std::string text = res.empty() ? "true" : res.back();
    double v = 0.0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec == std::errc() && r.ptr == text.data() + text.size()) {
      j[name] = v;
    } else if (text == "true" || text == "false") {
      j[name] = text == "true";
    } else {
      j[name] = text;
    }
  };
  for (const auto* opt : app.get_options()) add(opt);
  for (const auto* opt : sub.get_options()) add(opt);
  return j;
}

inline void add_sequence_options(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.family, "sequence family");
  sub->add_option("--t", o.t, "family parameter t")->check(CLI::PositiveNumber);
  sub->add_option("--a", o.a)->check(CLI::PositiveNumber);
  sub->add_option("--b", o.b)->check(CLI::PositiveNumber);
  sub->add_option("--s", o.s);
  sub->add_option("--p", o.p);
  sub->add_option("--r", o.r);
  sub->add_option("--k", o.k)->check(CLI::PositiveNumber);
  sub->add_option("--m", o.m)->check(CLI::PositiveNumber);
  sub->add_option("--power", o.power, "raise to a positive power")->check(CLI::PositiveNumber);
  sub->add_option("--scale", o.scale, "mu_n -> scale^n mu_n")->check(CLI::PositiveNumber);
  sub->add_option("--num", o.num, "gamma_ratio numerators a:A,...");
  sub->add_option("--den", o.den, "gamma_ratio denominators b:B,...");
  sub->add_option("--values", o.values, "mu_1, mu_2, ... for family values")->delimiter(',');
}

}  // namespace detail

/// Exit status 0 on success, 2 on invalid input, 1 on accuracy or internal
/// failure.
inline int run(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gamma-type moment sequences: generation, ID probes, Bernstein checks, densities, determinacy",
               "gammoments"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", o.output, "write the report here");
  app.add_option("--config", o.config, "JSON file mirroring the flags");
  app.add_option("--threads", o.threads, "worker threads for density grids")->check(CLI::Range(1u, 256u));

  auto* seq = app.add_subcommand("seq", "log moments of a sequence family");
  detail::add_sequence_options(seq, o);
  seq->add_option("--n", o.n, "largest index")->check(CLI::Range(0, 100000));

  auto* cls = app.add_subcommand("classify", "moment determinacy verdict");
  detail::add_sequence_options(cls, o);
  cls->add_option("--phi", o.phi, "remainder exponent: identity, power, beta, gamma1, catalan, rgstable");
  cls->add_option("--alpha", o.alpha)->check(CLI::PositiveNumber);
  cls->add_option("--selfdecomp", o.selfdecomp, "S is self-decomposable (true/false)");
  cls->add_flag("--shifted", o.shifted);

  auto* idc = app.add_subcommand("id", "Hankel probes of infinite divisibility");
  detail::add_sequence_options(idc, o);
  idc->add_option("--t-grid", o.t_grid, "powers to probe")->delimiter(',')->check(CLI::PositiveNumber);
  idc->add_option("--size", o.size, "largest Hankel size")->check(CLI::Range(std::size_t{1}, max_hankel_size));
  idc->add_option("--tol", o.tol, "PSD tolerance relative to the unit diagonal")->check(CLI::NonNegativeNumber);

  auto* ber = app.add_subcommand("bernstein", "Bernstein verdicts and factorization checks");
  ber->add_option("--kind", o.kind, "beta, gamma1, catalan, rgstable, custom-triplet")->required();
  ber->add_option("--a", o.a)->check(CLI::PositiveNumber);
  ber->add_option("--b", o.b)->check(CLI::PositiveNumber);
  ber->add_option("--s", o.s)->check(CLI::PositiveNumber);
  ber->add_option("--m", o.m)->check(CLI::PositiveNumber);
  ber->add_option("--killing", o.killing)->check(CLI::NonNegativeNumber);
  ber->add_option("--drift", o.drift)->check(CLI::NonNegativeNumber);
  ber->add_flag("--shifted", o.shifted, "half-shifted Catalan exponent");
  ber->add_option("--n", o.n, "factorization depth")->check(CLI::Range(1, 1000));
  ber->add_option("--tol", o.tol, "factorization tolerance (log scale)")->check(CLI::PositiveNumber);

  auto* den = app.add_subcommand("density", "density table by Mellin inversion");
  den->add_option("--target", o.target, "L_t or M_t")->check(CLI::IsMember({"L_t", "M_t"}));
  den->add_option("--t", o.t)->check(CLI::PositiveNumber);
  den->add_option("--count", o.count, "grid points")->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
  den->add_option("--x-min", o.x_min)->check(CLI::PositiveNumber);
  den->add_option("--x-max", o.x_max)->check(CLI::PositiveNumber);
  den->add_option("--contour-c", o.contour_c, "fixed contour abscissa (default: saddle)");
  den->add_option("--tol", o.tol, "contour tolerance")->check(CLI::Range(1e-15, 1e-2));

  auto* ver = app.add_subcommand("verify", "residual of an exponential representation");
  ver->add_option("--identity", o.identity, "malmsten_gamma, malmsten_beta, mt_exponent, logphi_repr")->required();
  ver->add_option("--s", o.s);
  ver->add_option("--a", o.a)->check(CLI::PositiveNumber);
  ver->add_option("--b", o.b)->check(CLI::PositiveNumber);
  ver->add_option("--t", o.t)->check(CLI::PositiveNumber);
  ver->add_option("--lambda", o.lambda)->check(CLI::NonNegativeNumber);
  ver->add_option("--x", o.x)->check(CLI::PositiveNumber);
  ver->add_option("--alpha", o.alpha)->check(CLI::PositiveNumber);
  ver->add_option("--c", o.c)->check(CLI::NonNegativeNumber);
  ver->add_option("--tol", o.tol, "pass threshold")->check(CLI::PositiveNumber);

  auto* kp = app.add_subcommand("kp16", "compact-support criterion for Gamma ratios");
  kp->add_option("--num", o.num, "a:A,...");
  kp->add_option("--den", o.den, "b:B,...");
  kp->add_option("--n", o.n, "moments to list")->check(CLI::Range(0, 1000));

  auto fail = [&](int code, const std::string& kind, const std::string& msg) {
    json j = json::object();
    j["tool_version"] = tool_version;
    j["error"] = json{{"kind", kind}, {"message", msg}};
    out << to_json_text(j);
    err << "error: " << msg << "\n";
    return code;
  };

  std::vector<std::string> args;
  try {
    args = detail::expand_config(std::vector<std::string>(argv_in.begin() + (argv_in.empty() ? 0 : 1), argv_in.end()));
  } catch (const domain_error& e) {
    return fail(2, "validation", e.what());
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << app.help();
    return fail(2, "usage", e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  o.command = sub->get_name();
  ReportEnvelope rep;
  bool failed = false;
  try {
    const Format fmt = parse_format(o.format);
    if (fmt == Format::csv && o.command != "seq" && o.command != "density") {
      throw format_error("csv output is only available for tabular results (seq, density)");
    }
    if (o.command == "seq") rep = cmd_seq(o);
    if (o.command == "classify") rep = cmd_classify(o);
    if (o.command == "id") rep = cmd_id(o);
    if (o.command == "bernstein") rep = cmd_bernstein(o);
    if (o.command == "density") rep = cmd_density(o);
    if (o.command == "verify") rep = cmd_verify(o, failed);
    if (o.command == "kp16") rep = cmd_kp16(o);
    rep.command = o.command;
    rep.inputs = detail::echo_inputs(*sub, app);
    const std::string text = render(rep, fmt);
    if (o.output.empty()) {
      out << text;
    } else {
      std::string path = o.output;
      const char* dir = std::getenv(output_dir_variable);
      if (dir && *dir && !path.empty() && path.front() != '/') path = std::string(dir) + "/" + path;
      std::ofstream f(path, std::ios::binary);
      if (!f) throw domain_error("cannot write " + path);
      f << text;
    }
  } catch (const domain_error& e) {
    return fail(2, "validation", e.what());
  } catch (const accuracy_error& e) {
    return fail(1, "accuracy", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return failed ? 1 : 0;
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace gammoments::cli
