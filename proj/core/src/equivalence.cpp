#include <algorithm>
#include <cmath>
#include <numbers>

#include "windfarm/error.hpp"
#include "windfarm/simulation.hpp"

namespace windfarm {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

EquivalenceReport verify_equivalence(const Trajectory& farm, const Trajectory& aggregate, int n,
                                     double threshold) {
  const ScalingVector s = psi(n);
  const auto replicas = static_cast<std::size_t>(n);
  if (farm.dim != replicas * kStateSize || aggregate.dim != kStateSize) {
    throw Error("verify_equivalence: trajectory dimensions do not match n");
  }
  if (farm.times != aggregate.times) {
    throw Error("verify_equivalence: sample grids differ");
  }
  constexpr std::size_t kDelta = index(Var::delta);

  EquivalenceReport r;
  r.n = n;
  r.samples = farm.size();
  r.threshold = threshold;
  std::array<double, kStateSize> peak_scaled{};
  std::array<double, kStateSize> peak_plain{};
  std::array<double, kStateSize> plain_err{};

  for (std::size_t k = 0; k < farm.size(); ++k) {
    const auto xf = farm.state(k);
    const auto xa = aggregate.state(k);
    for (std::size_t i = 0; i < kStateSize; ++i) {
      const double ref = s.psi[i] * xf[i];
      double diff = xa[i] - ref;
      double plain = xa[i] / s.psi[i] - xf[i];
      double mag = std::abs(ref);
      double mag_plain = std::abs(xf[i]);
      if (i == kDelta) {
        diff = wrap_angle(diff);
        plain = wrap_angle(plain);
        mag = std::abs(wrap_angle(ref));
        mag_plain = std::abs(wrap_angle(xf[i]));
      }
      r.max_abs_error[i] = std::max(r.max_abs_error[i], std::abs(diff));
      plain_err[i] = std::max(plain_err[i], std::abs(plain));
      peak_scaled[i] = std::max(peak_scaled[i], mag);
      peak_plain[i] = std::max(peak_plain[i], mag_plain);
    }
    for (std::size_t j = 1; j < replicas; ++j) {
      for (std::size_t i = 0; i < kStateSize; ++i) {
        r.replica_spread = std::max(r.replica_spread, std::abs(xf[j * kStateSize + i] - xf[i]));
      }
    }
  }

  for (std::size_t i = 0; i < kStateSize; ++i) {
    r.max_rel_error[i] = r.max_abs_error[i] / (1.0 + peak_scaled[i]);
    r.partition_rel_error[i] = plain_err[i] / (1.0 + peak_plain[i]);
    if (r.max_rel_error[i] > r.global_max_rel_error) {
      r.global_max_rel_error = r.max_rel_error[i];
      r.worst_state = i;
    }
  }
  r.pass = r.global_max_rel_error <= threshold;
  r.farm_wall_s = static_cast<double>(farm.stats.wall_ns) * 1e-9;
  r.aggregate_wall_s = static_cast<double>(aggregate.stats.wall_ns) * 1e-9;
  r.speedup = r.farm_wall_s / std::max(r.aggregate_wall_s, 1e-9);
  return r;
}

}  // namespace windfarm
