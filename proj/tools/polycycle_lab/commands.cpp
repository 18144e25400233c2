#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "polycycle/certify.hpp"
#include "polycycle/checks.hpp"
#include "polycycle/csv.hpp"
#include "polycycle/errors.hpp"
#include "polycycle/frequency.hpp"
#include "polycycle/invariants.hpp"
#include "polycycle/json_io.hpp"
#include "polycycle/rectifier.hpp"
#include "polycycle/rotation.hpp"
#include "polycycle/sparkler.hpp"

namespace polycycle::lab {

namespace {

using nlohmann::ordered_json;

class IoError : public Error {
 public:
  using Error::Error;
};

// A run that completed but whose results violate a checked property.
class ValidationFailure : public Error {
 public:
  ValidationFailure(std::string what, std::string output) : Error(std::move(what)), output_(std::move(output)) {}
  const std::string& output() const noexcept { return output_; }

 private:
  std::string output_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

ordered_json parse_input(const std::string& text) {
  check_json_syntax(text);
  return ordered_json::parse(text);
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// Values emitted by the library's own serializers, spliced into a document.
ordered_json embed(const std::string& text) { return ordered_json::parse(text); }

ordered_json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

const ordered_json& member(const ordered_json& j, const char* field) {
  if (!j.is_object() || !j.contains(field)) throw ConfigParseError(std::string("missing field \"") + field + "\"");
  return j.at(field);
}

double number_field(const ordered_json& j, const char* field) {
  const auto& v = member(j, field);
  if (!v.is_number()) throw ConfigParseError(std::string("field \"") + field + "\" must be a number");
  return v.get<double>();
}

std::int64_t integer_field(const ordered_json& j, const char* field) {
  const auto& v = member(j, field);
  if (!v.is_number_integer()) throw ConfigParseError(std::string("field \"") + field + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::string render_check(const CheckReport& report, Format format) {
  if (format == Format::Json) return to_json(report) + "\n";
  std::ostringstream os;
  write_csv(report, os);
  return os.str();
}

// Several reports in one document.
std::string render_checks(const std::vector<CheckReport>& reports, Format format) {
  if (format == Format::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : reports) arr.push_back(embed(to_json(r)));
    return dump(arr);
  }
  std::ostringstream os;
  bool header = true;
  for (const auto& r : reports) {
    write_csv(r, os, header);
    header = false;
  }
  return os.str();
}

void finish_checks(const RunConfig& cfg, const std::vector<CheckReport>& reports) {
  const std::string text = render_checks(reports, cfg.format);
  std::string failed;
  for (const auto& r : reports) {
    for (const auto& p : r.failed_properties()) failed += (failed.empty() ? "" : "; ") + r.subject + ": " + p;
  }
  if (!failed.empty()) throw ValidationFailure("check failed: " + failed, text);
  write_output(cfg.output, text);
}

// ---- rectify -------------------------------------------------------------

int cmd_rectify(const RunConfig& cfg) {
  const ordered_json in = parse_input(read_file(cfg.input));
  const bool wrapped = in.is_object() && in.contains("model");
  const MapFamilyPtr model = model_from_json(wrapped ? in.at("model").dump() : in.dump(), wrapped ? "model" : "");
  const RectifyingChart chart(model, cfg.tol);

  std::vector<double> xs;
  if (wrapped && in.contains("x")) {
    for (const auto& v : in.at("x")) {
      if (!v.is_number()) throw ConfigParseError("field \"x\" must be an array of numbers");
      xs.push_back(v.get<double>());
    }
  } else {
    const ordered_json& opts = wrapped ? in : ordered_json::object();
    const std::int64_t samples = opts.contains("samples") ? integer_field(opts, "samples") : 20;
    const double x_max = opts.contains("x_max") ? number_field(opts, "x_max") : 0.5 * chart.domain_radius();
    const double x_min = opts.contains("x_min") ? number_field(opts, "x_min") : 1e-12;
    if (samples < 2 || !(x_min > 0.0) || !(x_max > x_min)) {
      throw DomainError("rectify: need samples >= 2 and 0 < x_min < x_max");
    }
    for (std::int64_t i = 0; i < samples; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
      xs.push_back(std::exp(std::log(x_max) + t * (std::log(x_min) - std::log(x_max))));
    }
  }

  if (cfg.check) {
    finish_checks(cfg, {check_rectifier(model, xs, cfg.tol)});
    return kExitOk;
  }

  struct Row {
    double x, xi, residual;
  };
  std::vector<Row> rows;
  for (double x : xs) {
    double residual = std::nan("");
    try {
      residual = chart_residual(chart, x);
    } catch (const DomainError&) {
    }
    rows.push_back({x, chart(x), residual});
  }

  std::string text;
  if (cfg.format == Format::Json) {
    ordered_json j;
    j["model"] = model->describe();
    j["tol"] = cfg.tol;
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) j["rows"].push_back({{"x", r.x}, {"xi", r.xi}, {"residual", number_or_null(r.residual)}});
    text = dump(j);
  } else {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"x", "xi", "residual"});
    for (const auto& r : rows) csv.row({format_double(r.x), format_double(r.xi), format_double(r.residual)});
    text = os.str();
  }
  write_output(cfg.output, text);
  return kExitOk;
}

// ---- sparkle -------------------------------------------------------------

int cmd_sparkle(const RunConfig& cfg) {
  const ordered_json in = parse_input(read_file(cfg.input));
  SparkProblem problem;
  problem.model = model_from_json(member(in, "model").dump(), "model");
  problem.target = constant_target(number_field(in, "P"));
  const std::int64_t n_first = in.contains("n_first") ? integer_field(in, "n_first") : 1;
  const std::int64_t n_last = cfg.depth ? *cfg.depth : (in.contains("n_last") ? integer_field(in, "n_last") : 40);
  const SparkSequence seq = spark_sequence(problem, n_first, n_last, cfg.tol);

  if (cfg.check) {
    finish_checks(cfg, {check_sparkler(problem, seq)});
    return kExitOk;
  }

  std::string text;
  if (cfg.format == Format::Json) {
    ordered_json j;
    j["model"] = problem.model->describe();
    j["chart_target"] = seq.chart_target;
    j["first_bracketed_n"] = seq.first_bracketed_n;
    j["rows"] = ordered_json::array();
    for (const auto& s : seq.samples) {
      const auto eps = x_from_xi(s.eps);
      j["rows"].push_back({{"n", s.n},
                           {"xi", s.eps.xi},
                           {"eps", eps ? ordered_json(*eps) : ordered_json(nullptr)},
                           {"residual", s.residual}});
    }
    text = dump(j);
  } else {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"n", "xi", "eps", "residual"});
    for (const auto& s : seq.samples) {
      const auto eps = x_from_xi(s.eps);
      csv.row({std::to_string(s.n), format_double(s.eps.xi), eps ? format_double(*eps) : std::string(),
               format_double(s.residual)});
    }
    text = os.str();
  }
  write_output(cfg.output, text);
  return kExitOk;
}

// ---- th-run --------------------------------------------------------------

int cmd_th_run(const RunConfig& cfg) {
  const std::string raw = read_file(cfg.input);
  const ordered_json in = parse_input(raw);
  const THConfig config = th_config_from_json(raw);
  const std::int64_t depth = cfg.depth ? *cfg.depth : (in.contains("depth") ? integer_field(in, "depth") : 10'000);
  ThSparkOptions opts;
  opts.tol = cfg.tol;
  const SparkTable table = th_sparks(config, depth, opts);

  if (!cfg.table.empty()) {
    std::ostringstream os;
    write_csv(table, os);
    write_output(cfg.table, os.str());
  }
  if (!table.interleaving_certified) {
    const CheckReport report = check_table(table);
    throw ValidationFailure("interleaving order of the exterior sparks fails at every stored level",
                            render_check(report, cfg.format));
  }

  const THConfig resolved = config.models ? resolve_model_charts(config, cfg.tol) : config;
  const InvariantVector inv = invariant_vector(resolved);
  const std::vector<Assignment> assignments = assign_k(table);
  const FrequencyReport report =
      frequencies(assignments, static_cast<std::int64_t>(assignments.size()), inv);

  if (cfg.check) {
    finish_checks(cfg, {check_table(table), check_invariants(resolved), check_frequencies(table, assignments, report)});
    return kExitOk;
  }

  std::string text;
  if (cfg.format == Format::Json) {
    ordered_json j;
    j["invariants"] = embed(to_json(inv));
    j["m0"] = table.m0;
    j["iota_count"] = table.iota.size();
    j["assigned"] = assignments.size();
    j["frequencies"] = embed(to_json(report));
    text = dump(j);
  } else {
    std::ostringstream os;
    write_csv(report, os);
    text = os.str();
  }
  write_output(cfg.output, text);
  return kExitOk;
}

// ---- freq ----------------------------------------------------------------

Regime parse_regime(const ordered_json& in) {
  if (!in.contains("regime")) return Regime::Auto;
  const auto& v = in.at("regime");
  if (v == "auto") return Regime::Auto;
  if (v == "rational") return Regime::Rational;
  if (v == "irrational") return Regime::Irrational;
  throw ConfigParseError("field \"regime\" must be \"auto\", \"rational\" or \"irrational\"");
}

int cmd_freq(const RunConfig& cfg) {
  const std::string raw = read_file(cfg.input);
  const ordered_json in = parse_input(raw);

  if (in.is_object() && (in.contains("A") || in.contains("B"))) {
    const THConfig a = th_config_from_json(member(in, "A").dump(), "A");
    const THConfig b = th_config_from_json(member(in, "B").dump(), "B");
    const InvariantVector ia = invariant_vector(a.models ? resolve_model_charts(a, cfg.tol) : a);
    const InvariantVector ib = invariant_vector(b.models ? resolve_model_charts(b, cfg.tol) : b);
    const double tol = in.contains("tol") ? number_field(in, "tol") : kDefaultVerdictTolerance;
    std::optional<std::int64_t> q;
    if (in.contains("q")) q = integer_field(in, "q");
    if (cfg.check) {
      finish_checks(cfg, {check_invariants(a), check_invariants(b)});
      return kExitOk;
    }
    const VerdictResult v = equivalence_verdict(ia, ib, tol, parse_regime(in), q);
    std::string text;
    if (cfg.format == Format::Json) {
      ordered_json j;
      j["A"] = embed(to_json(ia));
      j["B"] = embed(to_json(ib));
      j["verdict"] = embed(to_json(v));
      text = dump(j);
    } else {
      std::ostringstream os;
      CsvWriter csv(os);
      csv.row({"verdict", "reason", "arc", "difference", "threshold", "message"});
      csv.row({to_string(v.verdict), to_string(v.reason), std::to_string(v.arc), format_double(v.difference),
               format_double(v.threshold), v.message});
      text = os.str();
    }
    write_output(cfg.output, text);
    return kExitOk;
  }

  const THConfig parsed = th_config_from_json(raw);
  const THConfig config = parsed.models ? resolve_model_charts(parsed, cfg.tol) : parsed;
  if (cfg.check) {
    finish_checks(cfg, {check_invariants(config)});
    return kExitOk;
  }
  const InvariantVector inv = invariant_vector(config);
  const std::vector<double> projective = projective_invariant(config);
  std::string text;
  if (cfg.format == Format::Json) {
    ordered_json j = embed(to_json(inv));
    j["projective"] = projective;
    text = dump(j);
  } else {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"quantity", "index", "value"});
    csv.row({"phi", "", format_double(inv.phi)});
    if (inv.fraction) {
      csv.row({"phi_p", "", std::to_string(inv.fraction->p)});
      csv.row({"phi_q", "", std::to_string(inv.fraction->q)});
    }
    for (std::size_t k = 0; k < inv.N(); ++k) csv.row({"Phi", std::to_string(k + 1), format_double(inv.Phi[k])});
    for (std::size_t i = 0; i < projective.size(); ++i) {
      csv.row({"projective", std::to_string(i + 1), format_double(projective[i])});
    }
    text = os.str();
  }
  write_output(cfg.output, text);
  return kExitOk;
}

// ---- rotate --------------------------------------------------------------

EndpointKind parse_kind(const ordered_json& arc) {
  if (!arc.contains("kind")) return EndpointKind::Closed;
  static const std::map<std::string, EndpointKind> kinds{{"closed", EndpointKind::Closed},
                                                        {"open", EndpointKind::Open},
                                                        {"left_open", EndpointKind::LeftOpen},
                                                        {"right_open", EndpointKind::RightOpen}};
  const auto& v = arc.at("kind");
  if (v.is_string()) {
    if (auto it = kinds.find(v.get<std::string>()); it != kinds.end()) return it->second;
  }
  throw ConfigParseError("field \"arc.kind\" must be one of closed, open, left_open, right_open");
}

int cmd_rotate(const RunConfig& cfg) {
  const ordered_json in = parse_input(read_file(cfg.input));
  RotationProblem problem;
  problem.c = in.contains("c") ? number_field(in, "c") : 0.0;
  problem.rho = number_field(in, "rho");
  const ordered_json& arc = member(in, "arc");
  const double start = number_field(arc, "start");
  if (arc.contains("length")) {
    problem.limit = Arc{circle_reduce(start, 1.0), number_field(arc, "length"), parse_kind(arc)};
  } else {
    problem.limit = Arc::from_endpoints(start, number_field(arc, "end"), parse_kind(arc));
  }
  if (in.contains("drift")) {
    const ordered_json& d = in.at("drift");
    const double r = number_field(d, "r");
    const double q = d.contains("q") ? number_field(d, "q") : 0.5;
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("drift.q must lie in [0, 1)");
    problem.drift = [r, q](std::int64_t n) { return r * std::pow(q, static_cast<double>(n)); };
  }
  const std::int64_t n = cfg.depth ? *cfg.depth : (in.contains("n") ? integer_field(in, "n") : 100'000);
  const std::int64_t min_window = in.contains("min_window") ? integer_field(in, "min_window") : 1000;

  if (cfg.check) {
    finish_checks(cfg, {check_rotation(problem, n)});
    return kExitOk;
  }

  const FrequencyTrace trace = orbit_frequency(problem, n, min_window);
  const Prediction pred = predicted_limit(problem.rho, problem.limit);
  std::vector<std::int64_t> marks;
  for (std::int64_t base = 1; base <= n; base *= 10) {
    for (std::int64_t f : {1, 2, 5}) {
      if (base * f <= n) marks.push_back(base * f);
    }
    if (base > n / 10) break;
  }
  if (marks.empty() || marks.back() != n) marks.push_back(n);

  std::string text;
  if (cfg.format == Format::Json) {
    ordered_json j;
    j["n"] = n;
    j["count"] = trace.count(n);
    j["psi"] = trace.psi(n);
    j["window"] = trace.window;
    j["liminf_est"] = trace.liminf_est;
    j["limsup_est"] = trace.limsup_est;
    j["arc_length"] = pred.length;
    if (pred.kind == Prediction::Kind::Exact) {
      j["prediction"] = {{"kind", "exact"}, {"limit", pred.length}};
    } else {
      const RationalCount rc = rational_orbit_count(problem.c, pred.p, pred.q, problem.limit);
      j["prediction"] = {{"kind", "bounds"}, {"p", pred.p}, {"q", pred.q}};
      j["periodic_count"] = {{"count", rc.count}, {"lower", rc.lower}, {"upper", rc.upper}};
    }
    j["satisfied"] = pred.kind == Prediction::Kind::Exact
                         ? ordered_json(nullptr)
                         : ordered_json(pred.satisfied_by(trace.liminf_est, trace.limsup_est));
    j["trace"] = ordered_json::array();
    for (auto m : marks) j["trace"].push_back({{"n", m}, {"count", trace.count(m)}, {"psi", trace.psi(m)}});
    text = dump(j);
  } else {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"n", "count", "psi"});
    for (auto m : marks) csv.row({std::to_string(m), std::to_string(trace.count(m)), format_double(trace.psi(m))});
    text = os.str();
  }
  write_output(cfg.output, text);
  return kExitOk;
}

// ---- certify -------------------------------------------------------------

int cmd_certify(const RunConfig& cfg) {
  std::vector<std::pair<std::string, MapFamilyPtr>> models;
  GridSpec grid;
  grid.seed = cfg.seed;
  grid.jitter = cfg.seed != 0 ? 0.5 : 0.0;
  if (cfg.input.empty()) {
    for (const auto& m : shipped_models()) models.emplace_back(m.name, make_power_law(m.params));
  } else {
    const ordered_json in = parse_input(read_file(cfg.input));
    if (in.is_object() && in.contains("jitter")) grid.jitter = number_field(in, "jitter");
    if (in.is_object() && in.contains("models")) {
      const auto& list = in.at("models");
      if (!list.is_array()) throw ConfigParseError("field \"models\" must be an array of model records");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "models[" + std::to_string(i) + "]";
        models.emplace_back(path, model_from_json(list[i].dump(), path));
      }
    } else {
      const bool wrapped = in.is_object() && in.contains("model");
      models.emplace_back("model", model_from_json(wrapped ? in.at("model").dump() : in.dump(), wrapped ? "model" : ""));
    }
  }

  std::vector<EstimateCertificate> certs;
  for (const auto& [name, model] : models) {
    EstimateCertificate c = certify_estimates(*model, grid);
    c.model = name + ": " + c.model;
    certs.push_back(std::move(c));
  }

  if (cfg.check) {
    std::vector<CheckReport> reports;
    for (const auto& c : certs) reports.push_back(check_certificate(c));
    finish_checks(cfg, reports);
    return kExitOk;
  }

  std::string text;
  if (cfg.format == Format::Json) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : certs) arr.push_back(embed(to_json(c)));
    text = dump(arr);
  } else {
    std::ostringstream os;
    CsvWriter csv(os);
    csv.row({"model", "property", "status", "checked", "failed", "c", "C", "note"});
    for (const auto& c : certs) {
      for (const auto& t : c.checks) {
        csv.row({c.model, t.property, to_string(t.status), std::to_string(t.checked), std::to_string(t.failed),
                 format_double(c.c), format_double(c.C), t.note});
      }
    }
    text = os.str();
  }

  std::string failed;
  for (const auto& c : certs) {
    if (c.pass) continue;
    for (const auto& t : c.checks) {
      if (t.status == CheckStatus::Fail) failed += (failed.empty() ? "" : "; ") + c.model + ": " + t.property;
    }
  }
  if (!failed.empty()) throw ValidationFailure("estimate certificate failed: " + failed, text);
  write_output(cfg.output, text);
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&)>> commands{
      {"rectify", cmd_rectify}, {"sparkle", cmd_sparkle}, {"th-run", cmd_th_run},
      {"freq", cmd_freq},       {"rotate", cmd_rotate},   {"certify", cmd_certify}};
  try {
    const auto it = commands.find(cfg.command);
    if (it == commands.end()) throw DomainError("unknown command '" + cfg.command + "'");
    if (!(cfg.tol > 0.0)) throw DomainError("--tol must be positive");
    if (cfg.depth && *cfg.depth < 1) throw DomainError("--depth must be at least 1");
    if (cfg.input.empty() && cfg.command != "certify") throw IoError("--input is required for " + cfg.command);
    return it->second(cfg);
  } catch (const ValidationFailure& e) {
    try {
      write_output(cfg.output, e.output());
    } catch (const Error& io) {
      err << "error: " << io.what() << "\n";
    }
    err << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InvalidConfig& e) {
    err << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace polycycle::lab
