#include "polycycle/json_io.hpp"

#include <cmath>
#include "json.hpp"

#include "polycycle/errors.hpp"

namespace polycycle {

using nlohmann::ordered_json;

namespace {

std::string field_name(std::string_view path, std::string_view field) {
  if (path.empty()) return std::string(field);
  return std::string(path) + "." + std::string(field);
}

ordered_json parse(std::string_view text) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const ordered_json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) +
                           ": " + what);
  }
}

void require_object(const ordered_json& j, std::string_view path) {
  if (!j.is_object()) {
    throw ConfigParseError((path.empty() ? std::string("top level") : std::string(path)) + ": expected an object");
  }
}

double number(const ordered_json& obj, std::string_view path, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw ConfigParseError("missing field \"" + field_name(path, field) + "\"");
  if (!it->is_number()) throw ConfigParseError("field \"" + field_name(path, field) + "\" must be a number");
  return it->get<double>();
}

double number_or(const ordered_json& obj, std::string_view path, const char* field, double fallback) {
  return obj.contains(field) ? number(obj, path, field) : fallback;
}

std::vector<double> number_list(const ordered_json& obj, std::string_view path, const char* field,
                                 bool allow_scalar) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw ConfigParseError("missing field \"" + field_name(path, field) + "\"");
  if (allow_scalar && it->is_number()) return {it->get<double>()};
  if (!it->is_array()) {
    throw ConfigParseError("field \"" + field_name(path, field) + "\" must be an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < it->size(); ++i) {
    if (!(*it)[i].is_number()) {
      throw ConfigParseError("field \"" + field_name(path, field) + "[" + std::to_string(i) + "]\" must be a number");
    }
    out.push_back((*it)[i].get<double>());
  }
  return out;
}

PowerLawParams power_law_from(const ordered_json& j, std::string_view path) {
  require_object(j, path);
  if (const auto it = j.find("kind"); it != j.end()) {
    if (!it->is_string() || it->get<std::string>() != "power_law") {
      throw ConfigParseError("field \"" + field_name(path, "kind") + "\": only \"power_law\" is supported");
    }
  }
  PowerLawParams p;
  p.C = number_or(j, path, "C", p.C);
  p.lambda = number(j, path, "Lambda");
  p.a = number_or(j, path, "a", p.a);
  p.beta = number_or(j, path, "beta", p.beta);
  p.delta = number_or(j, path, "delta", p.delta);
  if (const auto it = j.find("additive_eps"); it != j.end()) {
    if (!it->is_boolean()) throw ConfigParseError("field \"" + field_name(path, "additive_eps") + "\" must be a boolean");
    p.additive_eps = it->get<bool>();
  }
  return p;
}

THConfig th_config_from(const ordered_json& j, std::string_view path) {
  require_object(j, path);
  THConfig c;
  const bool has_models = j.contains("models");
  if (has_models) {
    const std::string mpath = field_name(path, "models");
    const auto& m = j.at("models");
    require_object(m, mpath);
    ModelAttachment att;
    if (!m.contains("interior")) throw ConfigParseError("missing field \"" + field_name(mpath, "interior") + "\"");
    if (!m.contains("exterior")) throw ConfigParseError("missing field \"" + field_name(mpath, "exterior") + "\"");
    att.interior = make_power_law(power_law_from(m.at("interior"), field_name(mpath, "interior")));
    att.exterior = make_power_law(power_law_from(m.at("exterior"), field_name(mpath, "exterior")));
    att.I = number(m, mpath, "I");
    att.E = number_list(m, mpath, "E", true);
    c.lambda_i = att.interior->exponent();
    c.lambda_e = 1.0 / att.exterior->exponent();
    c.models = std::move(att);
  }

  if (j.contains("lambda") || j.contains("mu")) {
    const double lambda = number(j, path, "lambda");
    const double mu = number(j, path, "mu");
    c.lambda_i = lambda;
    c.lambda_e = lambda * lambda * mu;
  } else if (j.contains("Lambda_i") || j.contains("Lambda_e") || !has_models) {
    c.lambda_i = number(j, path, "Lambda_i");
    c.lambda_e = number(j, path, "Lambda_e");
  }

  if (j.contains("xi_E") || !has_models) c.xi_E = number_list(j, path, "xi_E", false);
  if (j.contains("xi_I") || !has_models) c.xi_I = number_list(j, path, "xi_I", true);
  if (has_models) {
    // Placeholders until the charts are resolved; keeps N() meaningful.
    if (c.xi_E.empty()) c.xi_E.assign(c.models->E.size(), 0.0);
    if (c.xi_I.empty()) c.xi_I.assign(1, 0.0);
  }

  if (const auto it = j.find("perturbation"); it != j.end()) {
    const std::string ppath = field_name(path, "perturbation");
    require_object(*it, ppath);
    Perturbation p;
    p.r = number(*it, ppath, "r");
    p.q = number_or(*it, ppath, "q", p.q);
    c.perturbation = p;
  }
  return c;
}

ordered_json optional_number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

void check_json_syntax(std::string_view text) { (void)parse(text); }

PowerLawParams power_law_from_json(std::string_view text, std::string_view path) {
  return power_law_from(parse(text), path);
}

MapFamilyPtr model_from_json(std::string_view text, std::string_view path) {
  return make_power_law(power_law_from_json(text, path));
}

THConfig th_config_from_json(std::string_view text, std::string_view path) {
  return th_config_from(parse(text), path);
}

std::string to_json(const PowerLawParams& p) {
  ordered_json j{{"kind", "power_law"}, {"C", p.C},         {"Lambda", p.lambda},      {"a", p.a},
                 {"beta", p.beta},      {"additive_eps", p.additive_eps}, {"delta", p.delta}};
  return j.dump(2);
}

std::string to_json(const InvariantVector& inv) {
  ordered_json j;
  j["phi"] = inv.phi;
  j["Phi"] = inv.Phi;
  if (inv.fraction) {
    j["rational"] = {{"p", inv.fraction->p}, {"q", inv.fraction->q}};
  } else {
    j["rational"] = nullptr;
  }
  return j.dump(2);
}

std::string to_json(const FrequencyReport& r) {
  ordered_json j;
  j["depth"] = r.depth;
  j["phi"] = r.phi;
  j["window"] = r.window;
  j["pass"] = r.pass;
  ordered_json arcs = ordered_json::array();
  for (std::size_t k = 0; k < r.N(); ++k) {
    ordered_json a{{"k", k + 1},
                   {"count", r.counts[k]},
                   {"psi", r.psi[k]},
                   {"predicted", r.predicted[k]},
                   {"abs_error", r.abs_error[k]},
                   {"pass", static_cast<bool>(r.verdict[k])}};
    if (r.bounds[k]) {
      const auto& b = *r.bounds[k];
      a["bounds"] = {{"q", b.q},
                     {"liminf", b.liminf},
                     {"limsup", b.limsup},
                     {"lower_holds", b.lower_holds},
                     {"upper_holds", b.upper_holds}};
    }
    arcs.push_back(std::move(a));
  }
  j["arcs"] = std::move(arcs);
  return j.dump(2);
}

std::string to_json(const EstimateCertificate& c) {
  ordered_json j;
  j["model"] = c.model;
  j["Lambda"] = c.lambda;
  j["c"] = c.c;
  j["C"] = c.C;
  j["delta"] = c.delta;
  j["Lambda_prime"] = c.lambda_prime;
  j["grid_size"] = c.grid_size;
  j["pass"] = c.pass;
  const auto& w = c.worst_ratios;
  j["ratios"] = {{"map", {optional_number(w.map_min), optional_number(w.map_max)}},
                 {"log_derivative", {optional_number(w.dx_min), optional_number(w.dx_max)}},
                 {"eps_derivative", {optional_number(w.deps_min), optional_number(w.deps_max)}}};
  ordered_json checks = ordered_json::array();
  for (const auto& t : c.checks) {
    checks.push_back({{"property", t.property},
                      {"status", to_string(t.status)},
                      {"checked", t.checked},
                      {"failed", t.failed},
                      {"note", t.note}});
  }
  j["checks"] = std::move(checks);
  j["exemptions"] = c.exemptions;
  j["failures"] = c.failures;
  return j.dump(2);
}

std::string to_json(const VerdictResult& v) {
  ordered_json j;
  j["verdict"] = to_string(v.verdict);
  j["reason"] = to_string(v.reason);
  j["arc"] = v.arc;
  j["difference"] = v.difference;
  j["threshold"] = v.threshold;
  if (v.q) {
    j["q"] = *v.q;
  } else {
    j["q"] = nullptr;
  }
  j["message"] = v.message;
  return j.dump(2);
}

std::string to_json(const CheckReport& r) {
  ordered_json j;
  j["subject"] = r.subject;
  j["pass"] = r.pass();
  ordered_json results = ordered_json::array();
  for (const auto& p : r.results) {
    results.push_back({{"property", p.property}, {"status", to_string(p.status)}, {"detail", p.detail}});
  }
  j["results"] = std::move(results);
  return j.dump(2);
}

}  // namespace polycycle
