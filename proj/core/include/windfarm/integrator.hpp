#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace windfarm {

enum class Method { rk45_adaptive, rk4_fixed };

struct IntegratorConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 1e-5;  // s; the fixed step for rk4_fixed
  double h_max = 1e-3;   // s
  Method method = Method::rk45_adaptive;
  std::size_t max_steps = 50'000'000;

  bool operator==(const IntegratorConfig&) const = default;
};

/// Throws ConfigError naming the first bad field.
void validate(const IntegratorConfig& cfg);

/// dx = f(t, x). Must be pure.
using VectorField = std::function<void(double t, std::span<const double> x, std::span<double> dx)>;

struct IntegratorStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
  std::int64_t wall_ns = 0;
};

/// Sampled solution. States are stored row-major, `dim` values per sample;
/// `outputs` is filled by the simulation layer with `output_dim` per sample.
struct Trajectory {
  std::size_t dim = 0;
  std::vector<double> times;
  std::vector<double> states;
  std::size_t output_dim = 0;
  std::vector<double> outputs;
  IntegratorStats stats;

  std::size_t size() const noexcept { return times.size(); }
  std::span<const double> state(std::size_t k) const {
    return std::span<const double>(states).subspan(k * dim, dim);
  }
  std::span<const double> output(std::size_t k) const {
    return std::span<const double>(outputs).subspan(k * output_dim, output_dim);
  }
};

/// Integrates from t0 to t1, sampling at t0 + k*sample_dt (and at t1 when it
/// lands on the grid). Times in `breakpoints` (input discontinuities) are hit
/// exactly: no step straddles one, and stages at the end of a step that stops
/// on one see the input from before it.
///
/// Throws StiffnessError when the adaptive step underflows 1e-14 s and
/// DivergenceError when the state or vector field becomes non-finite.
Trajectory integrate(const VectorField& f, std::span<const double> x0, double t0, double t1,
                     const IntegratorConfig& cfg, double sample_dt,
                     std::span<const double> breakpoints = {});

}  // namespace windfarm
