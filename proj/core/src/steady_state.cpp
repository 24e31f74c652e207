#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "windfarm/error.hpp"
#include "windfarm/simulation.hpp"

namespace windfarm {
namespace {

constexpr std::size_t kUnknowns = kStateSize - 1;  // E_C is pinned
constexpr std::size_t kDelta = index(Var::delta);

// Accept threshold of the final residual; the iteration aims lower.
constexpr double kAcceptResidual = 1e-10;

using Vec = Eigen::Matrix<double, kUnknowns, 1>;
using Mat = Eigen::Matrix<double, kUnknowns, kUnknowns>;

double grid_angle(const InputSample& u) {
  const DqPair v = park(u.v_abc, 0.0);
  return std::atan2(v.d, v.q);
}

Vec residual(const Vec& z, double e_c, const InputSample& u, const TurbineParams& p,
             const DerivedParams& d) {
  State x;
  for (std::size_t i = 0; i < kUnknowns; ++i) x.values[i] = z[static_cast<Eigen::Index>(i)];
  x[Var::E_C] = e_c;
  const State dx = rhs(x, u, p, d);
  Vec r;
  for (std::size_t i = 0; i < kUnknowns; ++i) r[static_cast<Eigen::Index>(i)] = dx.values[i];
  r[kDelta] = dx.values[kDelta] / p.omega_nom - 1.0;
  return r;
}

double norm_inf(const Vec& r) { return r.cwiseAbs().maxCoeff(); }

// Damped Newton with a finite-difference Jacobian. Returns the final state
// and leaves the residual norm in `res`. Never throws on its own.
State newton(const State& start, const InputSample& u, const TurbineParams& p,
             const DerivedParams& d, const SteadyStateOptions& opt, double& res) {
  const double e_c = start[Var::E_C];
  Vec z;
  for (std::size_t i = 0; i < kUnknowns; ++i) z[static_cast<Eigen::Index>(i)] = start.values[i];

  Vec r;
  try {
    r = residual(z, e_c, u, p, d);
  } catch (const Error&) {
    res = std::numeric_limits<double>::infinity();
    return start;
  }
  res = norm_inf(r);

  for (int it = 0; it < opt.max_iterations && res > opt.tolerance; ++it) {
    Mat J;
    try {
      for (std::size_t j = 0; j < kUnknowns; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double h = 1e-7 * std::max(1.0, std::abs(z[jj]));
        Vec zp = z, zm = z;
        zp[jj] += h;
        zm[jj] -= h;
        J.col(jj) = (residual(zp, e_c, u, p, d) - residual(zm, e_c, u, p, d)) / (2.0 * h);
      }
    } catch (const Error&) {
      break;
    }
    const Vec step = J.fullPivLu().solve(-r);
    if (!step.allFinite()) break;

    double alpha = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
      const Vec trial = z + alpha * step;
      Vec rt;
      try {
        rt = residual(trial, e_c, u, p, d);
      } catch (const Error&) {
        continue;
      }
      if (rt.allFinite() && norm_inf(rt) <= (1.0 - 1e-4 * alpha) * res) {
        z = trial;
        r = rt;
        res = norm_inf(rt);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }

  State x;
  for (std::size_t i = 0; i < kUnknowns; ++i) x.values[i] = z[static_cast<Eigen::Index>(i)];
  x[Var::E_C] = e_c;
  return x;
}

}  // namespace

double steady_state_residual(const State& x, const InputSample& u, const TurbineParams& p,
                             const DerivedParams& d) {
  const State dx = rhs(x, u, p, d);
  double m = 0.0;
  for (std::size_t i = 0; i < kStateSize; ++i) {
    if (i != kDelta) m = std::max(m, std::abs(dx.values[i]));
  }
  return m;
}

State initial_guess(const InputSample& u, const TurbineParams& p, const DerivedParams& d) {
  const double theta = grid_angle(u);
  const double v = std::hypot(park(u.v_abc, 0.0).q, park(u.v_abc, 0.0).d);
  const double omega = std::clamp(u.v_w / d.v_rated, 0.3, 1.2);
  const double torque = p.K_opt * omega * omega;
  const double p_rotor = -(1.0 - omega / p.omega_s) * torque * p.omega_s;

  State x;
  x[Var::omega_r] = omega;
  x[Var::omega_t] = omega;
  x[Var::theta_tw] = torque / p.k_sh;
  x[Var::i_s_q] = torque * p.omega_s / v;
  x[Var::i_s_d] = -u.q_star / v;
  x[Var::e_s_q] = v;
  x[Var::p_avg] = p_rotor;
  x[Var::q_avg] = u.q_star;
  x[Var::i_g_q] = p_rotor / v;
  x[Var::i_g_d] = -u.q_star / v;
  x[Var::i_i_q] = x[Var::i_g_q];
  x[Var::i_i_d] = x[Var::i_g_d];
  x[Var::v_f_q] = v;
  x[Var::delta] = theta;
  x[Var::E_C] = 0.5;
  return x;
}

State find_steady_state(const TurbineParams& p, const DerivedParams& d, const InputSignals& u,
                        double t, const State& guess, const SteadyStateOptions& opt) {
  const InputSample sample = u.at(t);
  const double theta = grid_angle(sample);

  auto finish = [&](State x) {
    x[Var::delta] = theta + wrap_angle(x[Var::delta] - theta);
    return x;
  };
  auto accepted = [&](const State& x, double res) {
    return res <= kAcceptResidual && steady_state_residual(x, sample, p, d) <= kAcceptResidual;
  };

  double res = 0.0;
  State x = newton(guess, sample, p, d, opt, res);
  if (accepted(x, res)) {
    return finish(x);
  }
  if (!opt.allow_presim) {
    throw SteadyStateError("Newton iteration did not converge", res);
  }

  // settle with frozen inputs, then polish
  const InputSignals frozen = freeze(u, t, p.omega_nom);
  IntegratorConfig cfg;
  cfg.rtol = 1e-7;
  cfg.atol = 1e-9;
  const VectorField f = [&](double tau, std::span<const double> xs, std::span<double> dx) {
    rhs_into(std::span<const double, kStateSize>(xs.data(), kStateSize), frozen.at(tau), p, d,
             std::span<double, kStateSize>(dx.data(), kStateSize));
  };
  State settled;
  try {
    const Trajectory tr =
        integrate(f, guess.span(), t, t + opt.presim_duration, cfg, opt.presim_duration);
    settled = State::from(tr.state(tr.size() - 1));
  } catch (const IntegrationError& e) {
    throw SteadyStateError(std::string("settling run failed: ") + e.what(), res);
  }
  settled[Var::delta] -= p.omega_nom * opt.presim_duration;
  settled[Var::delta] = theta + wrap_angle(settled[Var::delta] - theta);

  x = newton(settled, sample, p, d, opt, res);
  if (!accepted(x, res)) {
    throw SteadyStateError("Newton iteration did not converge after settling run", res);
  }
  return finish(x);
}

}  // namespace windfarm
