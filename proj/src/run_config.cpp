#include "ontic/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace ontic {

namespace {

enum class Kind { integer, number, text, boolean, number_list, int_list, int_or_list, number_or_list };

struct Rule {
  std::string key;
  Kind kind;
  bool required = true;
  double min = -std::numeric_limits<double>::infinity();
  bool min_exclusive = false;
  double max = std::numeric_limits<double>::infinity();
  std::vector<std::string> choices = {};
  bool nullable = false;
  bool even = false;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

Rule req(std::string k, Kind kind, double min = -kInf, bool excl = false, double max = kInf) {
  return {std::move(k), kind, true, min, excl, max};
}
Rule opt(std::string k, Kind kind, double min = -kInf, bool excl = false, double max = kInf) {
  return {std::move(k), kind, false, min, excl, max};
}
Rule choice(std::string k, std::vector<std::string> c, bool required) {
  Rule r{std::move(k), Kind::text, required};
  r.choices = std::move(c);
  return r;
}
Rule grid(std::string k) {
  Rule r = req(std::move(k), Kind::int_or_list, 2, false, 1 << 22);
  r.even = true;
  return r;
}
Rule cutoff() {
  Rule r = req("Lambda", Kind::number, 0, true);
  r.nullable = true;
  return r;
}

const std::map<Experiment, std::vector<Rule>>& rules() {
  static const std::map<Experiment, std::vector<Rule>> table = {
      {Experiment::identities,
       {req("levels", Kind::int_list, 2, false, 1024), req("omega", Kind::number, 0, true),
        opt("time_pairs", Kind::integer, 1, false, 10000), opt("time_scale", Kind::number, 0, true)}},
      {Experiment::spectrum, {req("N", Kind::integer, 2, false, 4096), req("dt", Kind::number, 0, true)}},
      {Experiment::kernel,
       {choice("kernel", {"F1", "F2"}, true), req("M", Kind::number, 0),
        choice("method", {"direct_quadrature", "radial_reduced", "contour"}, true), cutoff(),
        req("z", Kind::number_list, 0), opt("t", Kind::number),
        choice("window", {"cosine_taper", "erf_taper"}, false)}},
      {Experiment::decay,
       {req("M", Kind::number, 0, true), cutoff(), req("z_min", Kind::number, 0, true),
        req("z_max", Kind::number, 0, true), req("points", Kind::integer, 8, false, 100000),
        opt("prefactor_terms", Kind::integer, 0, false, 8),
        choice("method", {"contour", "radial_reduced"}, false),
        choice("window", {"cosine_taper", "erf_taper"}, false)}},
      {Experiment::front,
       {req("M", Kind::number, 0), req("k0", Kind::number), req("sigma", Kind::number, 0, true),
        req("L", Kind::number, 0, true), grid("n"), req("dt", Kind::number, 0, true),
        req("steps", Kind::integer, 2, false, 1e7), opt("record_every", Kind::integer, 1),
        opt("centre", Kind::number)}},
      {Experiment::evolve,
       {req("M", Kind::number, 0), req("lambda", Kind::number), req("L", Kind::number_or_list, 0, true), grid("n"),
        req("dt", Kind::number, 0, true), req("steps", Kind::integer, 2, false, 1e8),
        choice("method", {"spectral", "convolution_F2", "leapfrog_second_order"}, true),
        req("k0", Kind::number_or_list), req("sigma", Kind::number, 0, true),
        opt("record_every", Kind::integer, 1)}},
      {Experiment::interact,
       {req("M", Kind::number, 0), req("lambda", Kind::number), req("L", Kind::number_or_list, 0, true), grid("n"),
        req("dt", Kind::number, 0, true), req("steps", Kind::integer, 1, false, 1e8),
        req("sigma", Kind::number, 0, true), req("amplitude", Kind::number),
        choice("cubic", {"real_field", "complex_literal"}, false), opt("record_every", Kind::integer, 0),
        opt("energy_every", Kind::integer, 0), opt("reversibility", Kind::boolean)}},
      {Experiment::vacuum,
       {req("M", Kind::number, 0), req("L", Kind::number_or_list, 0, true), grid("n"),
        req("samples", Kind::integer, 100, false, 1e8), opt("times", Kind::number_list)}},
  };
  return table;
}

const std::set<std::string>& common_keys() {
  static const std::set<std::string> k = {"experiment", "output_dir", "seed", "description"};
  return k;
}

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::integer: return "an integer";
    case Kind::number: return "a number";
    case Kind::text: return "a string";
    case Kind::boolean: return "a boolean";
    case Kind::number_list: return "a non-empty list of numbers";
    case Kind::int_list: return "an integer or a non-empty list of integers";
    case Kind::int_or_list: return "an integer or a list of 1 to 3 integers";
    case Kind::number_or_list: return "a number or a list of 1 to 3 numbers";
  }
  return "?";
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

bool is_int(const Json& v) {
  if (v.is_number_integer()) return true;
  return v.is_number_float() && std::isfinite(v.get<double>()) && std::floor(v.get<double>()) == v.get<double>();
}

void check_range(const Rule& r, double x, const std::string& where, std::vector<Violation>& out) {
  if (!std::isfinite(x)) {
    out.push_back({where, "must be finite"});
    return;
  }
  if (r.min_exclusive ? !(x > r.min) : !(x >= r.min))
    out.push_back({where, "out of range: must be " + std::string(r.min_exclusive ? "> " : ">= ") + fmt(r.min) +
                              ", got " + fmt(x)});
  else if (x > r.max)
    out.push_back({where, "out of range: must be <= " + fmt(r.max) + ", got " + fmt(x)});
  if (r.even && std::fmod(x, 2.0) != 0.0) out.push_back({where, "must be even, got " + fmt(x)});
}

void check_value(const Rule& r, const Json& v, std::vector<Violation>& out) {
  const auto bad_type = [&] { out.push_back({r.key, "must be " + kind_name(r.kind)}); };
  if (v.is_null()) {
    if (!r.nullable) out.push_back({r.key, "must not be null"});
    return;
  }
  switch (r.kind) {
    case Kind::integer:
      if (!is_int(v)) return bad_type();
      return check_range(r, v.get<double>(), r.key, out);
    case Kind::number:
      if (!v.is_number()) return bad_type();
      return check_range(r, v.get<double>(), r.key, out);
    case Kind::boolean:
      if (!v.is_boolean()) bad_type();
      return;
    case Kind::text: {
      if (!v.is_string()) return bad_type();
      const auto s = v.get<std::string>();
      if (!r.choices.empty() && std::find(r.choices.begin(), r.choices.end(), s) == r.choices.end()) {
        std::string list;
        for (const auto& c : r.choices) list += (list.empty() ? "" : ", ") + c;
        out.push_back({r.key, "unknown value '" + s + "', expected one of: " + list});
      }
      return;
    }
    case Kind::number_list:
    case Kind::int_list:
    case Kind::int_or_list:
    case Kind::number_or_list: {
      const bool ints = r.kind == Kind::int_or_list || r.kind == Kind::int_list;
      const bool short_list = r.kind == Kind::int_or_list || r.kind == Kind::number_or_list;
      if (!v.is_array()) {
        if (r.kind == Kind::number_list || !(ints ? is_int(v) : v.is_number())) return bad_type();
        return check_range(r, v.get<double>(), r.key, out);
      }
      if (v.empty() || (short_list && v.size() > 3)) return bad_type();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(ints ? is_int(v[i]) : v[i].is_number())) return bad_type();
        check_range(r, v[i].get<double>(), r.key + "[" + std::to_string(i) + "]", out);
      }
      return;
    }
  }
}

std::size_t list_size(const Json& v) { return v.is_array() ? v.size() : 1; }

// Relations between keys that single-key rules cannot express.
void cross_checks(Experiment e, const Json& doc, std::vector<Violation>& out) {
  auto has = [&](const char* k) { return doc.contains(k) && !doc[k].is_null(); };
  if (e == Experiment::kernel && has("kernel") && doc["kernel"].is_string()) {
    const bool f2 = doc["kernel"] == "F2";
    if (f2 && !has("t")) out.push_back({"t", "required for kernel F2"});
    if (!f2 && doc.contains("t")) out.push_back({"t", "only meaningful for kernel F2"});
    if (doc.contains("method") && doc["method"] != "contour" && doc.contains("Lambda") && doc["Lambda"].is_null())
      out.push_back({"Lambda", "quadrature methods need a finite cutoff"});
  }
  if (e == Experiment::decay) {
    if (has("z_min") && has("z_max") && doc["z_min"].is_number() && doc["z_max"].is_number() &&
        !(doc["z_max"].get<double>() > doc["z_min"].get<double>()))
      out.push_back({"z_max", "must exceed z_min"});
    if (doc.value("method", std::string("contour")) != "contour" && doc.contains("Lambda") && doc["Lambda"].is_null())
      out.push_back({"Lambda", "radial_reduced needs a finite cutoff"});
  }
  if (e == Experiment::evolve && has("method") && doc["method"] != "leapfrog_second_order" && has("lambda") &&
      doc["lambda"].is_number() && doc["lambda"].get<double>() != 0.0)
    out.push_back({"lambda", "must be 0 for the free-field methods spectral and convolution_F2"});
  if (e == Experiment::front && has("n") && doc["n"].is_array() && doc["n"].size() != 1)
    out.push_back({"n", "front tracking runs on a 1D lattice"});
  if ((e == Experiment::evolve || e == Experiment::interact || e == Experiment::vacuum) && has("L") && has("n") &&
      list_size(doc["L"]) != list_size(doc["n"]))
    out.push_back({"L", "must have one entry per axis of n"});
  if (e == Experiment::evolve && has("k0") && has("n") && list_size(doc["k0"]) != list_size(doc["n"]))
    out.push_back({"k0", "must have one entry per axis of n"});
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::identities: return "identities";
    case Experiment::spectrum: return "spectrum";
    case Experiment::kernel: return "kernel";
    case Experiment::decay: return "decay";
    case Experiment::front: return "front";
    case Experiment::evolve: return "evolve";
    case Experiment::interact: return "interact";
    case Experiment::vacuum: return "vacuum";
  }
  return "?";
}

SchemaError::SchemaError(std::vector<Violation> v)
    : std::runtime_error("config violates the schema (" + std::to_string(v.size()) + " violation" +
                         (v.size() == 1 ? "" : "s") + ")"),
      violations_(std::move(v)) {}

Json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigIoError("cannot read config file " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigIoError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
}

std::vector<std::string> known_keys(Experiment e) {
  std::vector<std::string> keys;
  for (const auto& r : rules().at(e))
    if (r.required) keys.push_back(r.key);
  for (const auto& r : rules().at(e))
    if (!r.required) keys.push_back(r.key);
  return keys;
}

std::vector<Violation> validate_config(const Json& doc) {
  std::vector<Violation> out;
  if (!doc.is_object()) return {{"", "config must be a JSON object"}};
  if (!doc.contains("experiment")) return {{"experiment", "missing required key"}};
  if (!doc["experiment"].is_string()) return {{"experiment", "must be a string"}};
  std::optional<Experiment> exp;
  for (const auto& [e, unused] : rules())
    if (to_string(e) == doc["experiment"].get<std::string>()) exp = e;
  if (!exp) return {{"experiment", "unknown experiment '" + doc["experiment"].get<std::string>() + "'"}};

  if (doc.contains("output_dir") && !doc["output_dir"].is_string())
    out.push_back({"output_dir", "must be a string"});
  if (doc.contains("seed") && !doc["seed"].is_number_unsigned() &&
      !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0))
    out.push_back({"seed", "must be a non-negative integer"});

  const auto& rs = rules().at(*exp);
  std::set<std::string> allowed = common_keys();
  for (const auto& r : rs) {
    allowed.insert(r.key);
    if (!doc.contains(r.key)) {
      if (r.required) out.push_back({r.key, "missing required key"});
      continue;
    }
    check_value(r, doc[r.key], out);
  }
  for (const auto& [k, unused] : doc.items())
    if (!allowed.count(k)) out.push_back({k, "unknown key for experiment " + to_string(*exp)});
  cross_checks(*exp, doc, out);
  return out;
}

RunConfig parse_config(const Json& doc) {
  auto v = validate_config(doc);
  if (!v.empty()) throw SchemaError(std::move(v));
  RunConfig c;
  for (const auto& [e, unused] : rules())
    if (to_string(e) == doc["experiment"].get<std::string>()) c.experiment = e;
  c.params = doc;
  if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
  if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
  return c;
}

}  // namespace ontic
