#include "windfarm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "windfarm/error.hpp"

namespace windfarm {
namespace {

double step_value(const StepEvents& steps, double initial, double t) {
  double v = initial;
  for (const auto& [time, value] : steps) {
    if (t >= time) {
      v = value;
    }
  }
  return v;
}

StepEvents sorted(StepEvents s) {
  std::stable_sort(s.begin(), s.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return s;
}

void check_steps(const StepEvents& steps, double t_end, const char* field) {
  for (const auto& [time, value] : steps) {
    if (!(time >= 0.0 && time <= t_end) || !std::isfinite(value)) {
      throw ConfigError(std::string(field) + ": step events must lie in [0, t_end]", field);
    }
  }
}

struct Sinusoids {
  double mean;
  std::vector<double> amp, omega, phase;

  double operator()(double t) const {
    double v = mean;
    for (std::size_t k = 0; k < amp.size(); ++k) {
      v += amp[k] * std::sin(omega[k] * t + phase[k]);
    }
    return v;
  }
};

}  // namespace

ScenarioConfig reference_scenario() {
  ScenarioConfig sc;
  sc.grid.steps = {{10.0, 0.95}};
  return sc;
}

void validate(const ScenarioConfig& sc) {
  if (sc.n_turbines < 1) throw ConfigError("n_turbines must be at least 1", "n_turbines");
  if (!(sc.t_end > 0.0)) throw ConfigError("t_end must be positive", "t_end");
  if (!(sc.sample_dt > 0.0 && sc.sample_dt <= sc.t_end))
    throw ConfigError("sample_dt must lie in (0, t_end]", "sample_dt");
  if (!std::isfinite(sc.q_star)) throw ConfigError("q_star must be finite", "q_star");
  if (!(sc.grid.magnitude > 0.0)) throw ConfigError("grid magnitude must be positive", "magnitude");
  check_steps(sc.grid.steps, sc.t_end, "grid.steps");
  check_steps(sc.wind.steps, sc.t_end, "wind.steps");
  const WindSpec& w = sc.wind;
  switch (w.kind) {
    case WindSpec::Kind::constant:
      if (!(w.value >= 0.0)) throw ConfigError("wind value must be non-negative", "value");
      break;
    case WindSpec::Kind::ramp:
      if (!(w.v0 >= 0.0 && w.v1 >= 0.0)) throw ConfigError("ramp speeds must be non-negative", "v0");
      if (!(w.t_stop > w.t_start)) throw ConfigError("ramp needs t_stop > t_start", "t_stop");
      break;
    case WindSpec::Kind::steps:
      if (!(w.value >= 0.0)) throw ConfigError("wind value must be non-negative", "value");
      break;
    case WindSpec::Kind::filtered_random:
      if (!(w.amplitude >= 0.0 && w.mean - w.amplitude >= 0.0))
        throw ConfigError("random wind must stay non-negative", "amplitude");
      if (w.components < 1) throw ConfigError("components must be at least 1", "components");
      if (!(w.f_min > 0.0 && w.f_max >= w.f_min))
        throw ConfigError("need 0 < f_min <= f_max", "f_min");
      break;
  }
  validate(sc.integrator);
}

InputSignals build_inputs(const ScenarioConfig& sc, double omega_nom) {
  InputSignals u;
  u.q_star = sc.q_star;

  const GridSpec g{sc.grid.magnitude, sc.grid.phase, sorted(sc.grid.steps)};
  u.grid_abc = [g, omega_nom](double t) {
    return balanced_abc(step_value(g.steps, g.magnitude, t), omega_nom * t + g.phase);
  };

  const WindSpec& w = sc.wind;
  switch (w.kind) {
    case WindSpec::Kind::constant: {
      const double v = w.value;
      u.wind = [v](double) { return v; };
      break;
    }
    case WindSpec::Kind::ramp: {
      const double v0 = w.v0, v1 = w.v1, ta = w.t_start, tb = w.t_stop;
      u.wind = [=](double t) {
        const double s = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
        return v0 + s * (v1 - v0);
      };
      break;
    }
    case WindSpec::Kind::steps: {
      const StepEvents steps = sorted(w.steps);
      const double v = w.value;
      u.wind = [steps, v](double t) { return step_value(steps, v, t); };
      break;
    }
    case WindSpec::Kind::filtered_random: {
      std::mt19937_64 rng(sc.seed);
      std::uniform_real_distribution<double> freq(w.f_min, w.f_max);
      std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
      std::uniform_real_distribution<double> weight(0.5, 1.0);
      auto s = std::make_shared<Sinusoids>();
      s->mean = w.mean;
      double total = 0.0;
      for (int k = 0; k < w.components; ++k) {
        s->omega.push_back(2.0 * std::numbers::pi * freq(rng));
        s->phase.push_back(phase(rng));
        s->amp.push_back(weight(rng));
        total += s->amp.back();
      }
      for (double& a : s->amp) {
        a *= w.amplitude / total;
      }
      u.wind = [s](double t) { return (*s)(t); };
      break;
    }
  }
  return u;
}

std::vector<double> breakpoints(const ScenarioConfig& sc) {
  std::vector<double> out;
  auto add = [&](double t) {
    if (t > 0.0 && t < sc.t_end) out.push_back(t);
  };
  for (const auto& e : sc.grid.steps) add(e.first);
  if (sc.wind.kind == WindSpec::Kind::steps) {
    for (const auto& e : sc.wind.steps) add(e.first);
  }
  if (sc.wind.kind == WindSpec::Kind::ramp) {
    add(sc.wind.t_start);
    add(sc.wind.t_stop);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace windfarm
