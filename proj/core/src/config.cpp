#include "windfarm/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "windfarm/error.hpp"

namespace windfarm {
namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" in the source, or 0.
std::size_t key_line(std::string_view text, std::string_view key) {
  if (key.empty()) return 0;
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + pos, '\n'));
}

std::size_t line_of_byte(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& msg, const std::string& field) const {
    throw ConfigError(msg, field, key_line(text_, field));
  }

  void expect_object(const json& j, const std::string& where) const {
    if (!j.is_object()) fail(where + " must be an object", where);
  }

  void reject_unknown(const json& j, const std::set<std::string>& known,
                      const std::string& where) const {
    for (const auto& [key, value] : j.items()) {
      if (!known.contains(key)) fail("unknown key '" + key + "' in " + where, key);
    }
  }

  double number(const json& j, const std::string& key) const {
    if (!j.is_number()) fail("'" + key + "' must be a number", key);
    return j.get<double>();
  }

  template <typename Int>
  Int integer(const json& j, const std::string& key) const {
    if (!j.is_number_integer()) fail("'" + key + "' must be an integer", key);
    if constexpr (std::is_unsigned_v<Int>) {
      if (j.is_number_unsigned()) return j.get<Int>();
      if (j.get<std::int64_t>() < 0) fail("'" + key + "' must be non-negative", key);
    }
    return j.get<Int>();
  }

  StepEvents steps(const json& j, const std::string& key) const {
    if (!j.is_array()) fail("'" + key + "' must be an array of [time, value] pairs", key);
    StepEvents out;
    for (const auto& e : j) {
      if (!e.is_array() || e.size() != 2) fail("'" + key + "' entries must be [time, value]", key);
      out.emplace_back(number(e[0], key), number(e[1], key));
    }
    return out;
  }

  void set(double& dst, const json& obj, const char* key) const {
    if (obj.contains(key)) dst = number(obj[key], key);
  }

private:
  std::string_view text_;
};

void read_wind(const Reader& r, const json& j, WindSpec& w) {
  r.expect_object(j, "wind");
  r.reject_unknown(j,
                   {"kind", "value", "v0", "v1", "t_start", "t_stop", "steps", "mean",
                    "amplitude", "components", "f_min", "f_max"},
                   "scenario.wind");
  if (j.contains("kind")) {
    const json& k = j["kind"];
    const std::string s = k.is_string() ? k.get<std::string>() : std::string();
    if (s == "constant") w.kind = WindSpec::Kind::constant;
    else if (s == "ramp") w.kind = WindSpec::Kind::ramp;
    else if (s == "steps") w.kind = WindSpec::Kind::steps;
    else if (s == "filtered_random") w.kind = WindSpec::Kind::filtered_random;
    else r.fail("wind kind must be constant, ramp, steps or filtered_random", "kind");
  }
  r.set(w.value, j, "value");
  r.set(w.v0, j, "v0");
  r.set(w.v1, j, "v1");
  r.set(w.t_start, j, "t_start");
  r.set(w.t_stop, j, "t_stop");
  if (j.contains("steps")) w.steps = r.steps(j["steps"], "steps");
  r.set(w.mean, j, "mean");
  r.set(w.amplitude, j, "amplitude");
  if (j.contains("components")) w.components = r.integer<int>(j["components"], "components");
  r.set(w.f_min, j, "f_min");
  r.set(w.f_max, j, "f_max");
}

void read_grid(const Reader& r, const json& j, GridSpec& g) {
  r.expect_object(j, "grid");
  r.reject_unknown(j, {"magnitude", "phase", "steps"}, "scenario.grid");
  r.set(g.magnitude, j, "magnitude");
  r.set(g.phase, j, "phase");
  if (j.contains("steps")) g.steps = r.steps(j["steps"], "steps");
}

void read_integrator(const Reader& r, const json& j, IntegratorConfig& c) {
  r.expect_object(j, "integrator");
  r.reject_unknown(j, {"rtol", "atol", "h_init", "h_max", "method", "max_steps"},
                   "scenario.integrator");
  r.set(c.rtol, j, "rtol");
  r.set(c.atol, j, "atol");
  r.set(c.h_init, j, "h_init");
  r.set(c.h_max, j, "h_max");
  if (j.contains("method")) {
    const json& m = j["method"];
    const std::string s = m.is_string() ? m.get<std::string>() : std::string();
    if (s == "rk45_adaptive") c.method = Method::rk45_adaptive;
    else if (s == "rk4_fixed") c.method = Method::rk4_fixed;
    else r.fail("integrator method must be rk45_adaptive or rk4_fixed", "method");
  }
  if (j.contains("max_steps"))
    c.max_steps = r.integer<std::size_t>(j["max_steps"], "max_steps");
}

void read_scenario(const Reader& r, const json& j, ScenarioConfig& sc) {
  r.expect_object(j, "scenario");
  r.reject_unknown(j,
                   {"n_turbines", "t_end", "sample_dt", "seed", "q_star", "wind", "grid",
                    "integrator"},
                   "scenario");
  if (j.contains("n_turbines")) sc.n_turbines = r.integer<int>(j["n_turbines"], "n_turbines");
  r.set(sc.t_end, j, "t_end");
  r.set(sc.sample_dt, j, "sample_dt");
  if (j.contains("seed")) sc.seed = r.integer<std::uint64_t>(j["seed"], "seed");
  r.set(sc.q_star, j, "q_star");
  if (j.contains("wind")) read_wind(r, j["wind"], sc.wind);
  if (j.contains("grid")) read_grid(r, j["grid"], sc.grid);
  if (j.contains("integrator")) read_integrator(r, j["integrator"], sc.integrator);
}

json steps_json(const StepEvents& s) {
  json a = json::array();
  for (const auto& [t, v] : s) a.push_back({t, v});
  return a;
}

}  // namespace

std::string_view to_string(WindSpec::Kind kind) {
  switch (kind) {
    case WindSpec::Kind::constant: return "constant";
    case WindSpec::Kind::ramp: return "ramp";
    case WindSpec::Kind::steps: return "steps";
    case WindSpec::Kind::filtered_random: return "filtered_random";
  }
  return "";
}

std::string_view to_string(Method method) {
  return method == Method::rk45_adaptive ? "rk45_adaptive" : "rk4_fixed";
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  const bool blank = std::all_of(text.begin(), text.end(),
                                 [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (blank) {
    return cfg;
  }

  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON syntax error: ") + e.what(), {},
                      line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1));
  }

  const Reader r(text);
  r.expect_object(root, "config");
  r.reject_unknown(root, {"params", "scenario"}, "config");

  bool explicit_base = false;
  bool explicit_kopt = false;
  bool aero_changed = false;
  if (root.contains("params")) {
    const json& pj = root["params"];
    r.expect_object(pj, "params");
    for (const auto& [key, value] : pj.items()) {
      const ParamField* f = find_param_field(key);
      if (f == nullptr) r.fail("unknown key '" + key + "' in params", key);
      cfg.params.*(f->member) = r.number(value, key);
      explicit_base = explicit_base || key == "T_m_base";
      explicit_kopt = explicit_kopt || key == "K_opt";
      aero_changed = aero_changed || key == "P_rated" || key == "rho" || key == "R_blade" ||
                     key == "Cp_max" || key == "beta";
    }
  }
  if (root.contains("scenario")) read_scenario(r, root["scenario"], cfg.scenario);

  try {
    validate(cfg.params);
    // inductance and resistance checks come before the aero bases
    if (aero_changed && !explicit_base) cfg.params.T_m_base = default_torque_base(cfg.params);
    if (aero_changed && !explicit_kopt) cfg.params.K_opt = default_optimal_torque_constant(cfg.params);
    derive(cfg.params);
    validate(cfg.scenario);
  } catch (const ConfigError& e) {
    throw ConfigError(e.what(), e.field(), key_line(text, e.field()));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json params = json::object();
  for (const auto& f : param_fields()) {
    params[std::string(f.name)] = c.params.*(f.member);
  }
  const ScenarioConfig& s = c.scenario;
  const WindSpec& w = s.wind;
  json wind = {{"kind", to_string(w.kind)}, {"value", w.value},       {"v0", w.v0},
               {"v1", w.v1},                {"t_start", w.t_start},   {"t_stop", w.t_stop},
               {"steps", steps_json(w.steps)}, {"mean", w.mean},      {"amplitude", w.amplitude},
               {"components", w.components}, {"f_min", w.f_min},     {"f_max", w.f_max}};
  json grid = {{"magnitude", s.grid.magnitude},
               {"phase", s.grid.phase},
               {"steps", steps_json(s.grid.steps)}};
  const IntegratorConfig& ic = s.integrator;
  json integ = {{"rtol", ic.rtol},     {"atol", ic.atol},
                {"h_init", ic.h_init}, {"h_max", ic.h_max},
                {"method", to_string(ic.method)}, {"max_steps", ic.max_steps}};
  json scenario = {{"n_turbines", s.n_turbines}, {"t_end", s.t_end},   {"sample_dt", s.sample_dt},
                   {"seed", s.seed},             {"q_star", s.q_star}, {"wind", wind},
                   {"grid", grid},               {"integrator", integ}};
  json root = {{"params", params}, {"scenario", scenario}};
  return root.dump(2) + "\n";
}

}  // namespace windfarm
