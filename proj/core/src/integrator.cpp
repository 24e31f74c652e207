#include "windfarm/integrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "windfarm/error.hpp"

namespace windfarm {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// continuous extension
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kSafe = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;
constexpr double kMinStep = 1e-14;
constexpr int kMaxFailedEvaluations = 40;

using Clock = std::chrono::steady_clock;

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> sample_times(double t0, double t1, double dt) {
  const double span = t1 - t0;
  const auto count = static_cast<std::size_t>(std::floor(span / dt + 1e-9));
  std::vector<double> ts;
  ts.reserve(count + 1);
  for (std::size_t k = 0; k <= count; ++k) {
    ts.push_back(t0 + static_cast<double>(k) * dt);
  }
  if (std::abs(ts.back() - t1) <= 1e-9 * dt) {
    ts.back() = t1;
  } else {
    ts.push_back(t1);  // off-grid horizon still gets a final sample
  }
  return ts;
}

std::vector<double> interior_breakpoints(std::span<const double> bps, double t0, double t1) {
  std::vector<double> out;
  for (double b : bps) {
    if (b > t0 && b < t1) {
      out.push_back(b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Recorder {
  Trajectory& traj;
  const std::vector<double>& ts;
  std::size_t next = 0;

  void push(double t, std::span<const double> x) {
    traj.times.push_back(t);
    traj.states.insert(traj.states.end(), x.begin(), x.end());
    ++next;
  }
  bool pending() const { return next < ts.size(); }
  double time() const { return ts[next]; }
};

Trajectory integrate_dopri(const VectorField& f, std::span<const double> x0, double t0,
                           double t1, const IntegratorConfig& cfg,
                           const std::vector<double>& ts, const std::vector<double>& bps) {
  const std::size_t n = x0.size();
  Trajectory traj;
  traj.dim = n;
  traj.times.reserve(ts.size());
  traj.states.reserve(ts.size() * n);
  Recorder rec{traj, ts};
  IntegratorStats& st = traj.stats;

  std::vector<double> y(x0.begin(), x0.end()), y1(n), ys(n), err(n), dense(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> r2(n), r3(n), r4(n), r5(n);

  std::string last_failure;
  // Returns false when f threw or produced a non-finite derivative.
  auto eval = [&](double t, const std::vector<double>& x, std::vector<double>& dx) {
    ++st.rhs_evaluations;
    try {
      f(t, x, dx);
    } catch (const Error& e) {
      last_failure = e.what();
      return false;
    }
    if (!all_finite(dx)) {
      last_failure = "non-finite derivative";
      return false;
    }
    return true;
  };

  double t = t0;
  if (!all_finite(y) || !eval(t, y, k1)) {
    throw DivergenceError("vector field not finite at the initial state: " + last_failure, t0);
  }
  rec.push(t0, y);

  std::size_t bp_next = 0;
  double h = std::min(cfg.h_init, cfg.h_max);
  double facold = 1e-4;
  bool rejected_last = false;
  int failed = 0;

  while (t < t1) {
    if (st.accepted_steps + st.rejected_steps >= cfg.max_steps) {
      throw IntegrationError("step budget exhausted", t);
    }
    const bool to_bp = bp_next < bps.size();
    const double target = to_bp ? bps[bp_next] : t1;
    bool hits = false;
    if (t + 1.0001 * h >= target) {
      h = target - t;
      hits = true;
    }
    // end-of-step stages see the input from before a discontinuity
    const double t_end = hits ? (to_bp ? std::nextafter(target, -1e300) : target) : t + h;

    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + h * a21 * k1[i];
    ok = ok && eval(t + c2 * h, ys, k2);
    if (ok) {
      for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      ok = eval(t + c3 * h, ys, k3);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ys[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = eval(t + c4 * h, ys, k4);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ys[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ok = eval(t + c5 * h, ys, k5);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ys[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      ok = eval(t_end, ys, k6);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      ok = all_finite(y1) && eval(t_end, y1, k7);
    }

    double e = std::numeric_limits<double>::infinity();
    std::size_t worst = 0;
    if (ok) {
      double worst_ratio = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y1[i]));
        const double ratio = std::abs(err[i]) / sc;
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = i;
        }
      }
      e = worst_ratio;
      ok = std::isfinite(e);
    }

    if (!ok) {
      ++st.rejected_steps;
      if (++failed > kMaxFailedEvaluations) {
        throw DivergenceError("solution diverged: " + last_failure, t);
      }
      h *= kFacMin;
      rejected_last = true;
      if (h < kMinStep) {
        throw DivergenceError("solution diverged: " + last_failure, t);
      }
      continue;
    }
    failed = 0;

    if (e <= 1.0) {
      const double t_new = hits ? target : t + h;
      // dense output on (t, t_new]
      if (rec.pending() && rec.time() <= t_new) {
        for (std::size_t i = 0; i < n; ++i) {
          const double ydiff = y1[i] - y[i];
          const double bspl = h * k1[i] - ydiff;
          r2[i] = ydiff;
          r3[i] = bspl;
          r4[i] = ydiff - h * k7[i] - bspl;
          r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
        while (rec.pending() && rec.time() <= t_new) {
          const double ts_k = rec.time();
          if (ts_k == t_new) {
            rec.push(ts_k, y1);
          } else {
            const double th = (ts_k - t) / h;
            const double th1 = 1.0 - th;
            for (std::size_t i = 0; i < n; ++i) {
              dense[i] = y[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
            }
            rec.push(ts_k, dense);
          }
        }
      }
      ++st.accepted_steps;
      t = t_new;
      y.swap(y1);
      if (hits && to_bp) {
        ++bp_next;
        if (!eval(t, y, k1)) {
          throw DivergenceError("solution diverged: " + last_failure, t);
        }
      } else {
        k1.swap(k7);
      }
      double fac = std::pow(e, kExpo) / std::pow(facold, kBeta) / kSafe;
      fac = std::clamp(fac, 1.0 / kFacMax, 1.0 / kFacMin);
      double h_new = h / fac;
      if (rejected_last) {
        h_new = std::min(h_new, h);
      }
      facold = std::max(e, 1e-4);
      rejected_last = false;
      h = std::min(h_new, cfg.h_max);
    } else {
      ++st.rejected_steps;
      const double fac = std::min(1.0 / kFacMin, std::pow(e, kExpo) / kSafe);
      h /= fac;
      rejected_last = true;
      if (h < kMinStep) {
        throw StiffnessError("step size underflow at component " + std::to_string(worst), t,
                             worst);
      }
    }
  }
  return traj;
}

Trajectory integrate_rk4(const VectorField& f, std::span<const double> x0, double t0, double t1,
                         const IntegratorConfig& cfg, const std::vector<double>& ts,
                         const std::vector<double>& bps) {
  const std::size_t n = x0.size();
  Trajectory traj;
  traj.dim = n;
  IntegratorStats& st = traj.stats;

  std::vector<double> knots = ts;
  knots.insert(knots.end(), bps.begin(), bps.end());
  knots.push_back(t1);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  std::vector<double> y(x0.begin(), x0.end()), ys(n), k1(n), k2(n), k3(n), k4(n);
  auto eval = [&](double t, const std::vector<double>& x, std::vector<double>& dx) {
    ++st.rhs_evaluations;
    try {
      f(t, x, dx);
    } catch (const Error& e) {
      throw DivergenceError(std::string("solution diverged: ") + e.what(), t);
    }
    if (!all_finite(dx)) {
      throw DivergenceError("solution diverged: non-finite derivative", t);
    }
  };

  std::size_t next_sample = 0;
  auto record = [&](double t) {
    if (next_sample < ts.size() && ts[next_sample] == t) {
      traj.times.push_back(t);
      traj.states.insert(traj.states.end(), y.begin(), y.end());
      ++next_sample;
    }
  };
  record(t0);

  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double a = knots[k - 1];
    const double b = knots[k];
    const bool before_bp = std::binary_search(bps.begin(), bps.end(), b);
    const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / cfg.h_init - 1e-9)));
    const double h = (b - a) / static_cast<double>(m);
    for (std::size_t j = 0; j < m; ++j) {
      if (st.accepted_steps >= cfg.max_steps) {
        throw IntegrationError("step budget exhausted", a + static_cast<double>(j) * h);
      }
      const double t = a + static_cast<double>(j) * h;
      const bool last = j + 1 == m;
      const double t_end = last ? (before_bp ? std::nextafter(b, -1e300) : b) : t + h;
      eval(t, y, k1);
      for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + 0.5 * h * k1[i];
      eval(t + 0.5 * h, ys, k2);
      for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + 0.5 * h * k2[i];
      eval(t + 0.5 * h, ys, k3);
      for (std::size_t i = 0; i < n; ++i) ys[i] = y[i] + h * k3[i];
      eval(t_end, ys, k4);
      for (std::size_t i = 0; i < n; ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
      if (!all_finite(y)) {
        throw DivergenceError("solution diverged: non-finite state", t);
      }
      ++st.accepted_steps;
    }
    record(b);
  }
  return traj;
}

}  // namespace

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.atol > 0.0)) throw ConfigError("atol must be positive", "atol");
  if (!(cfg.rtol > 0.0 && cfg.rtol < 1.0)) throw ConfigError("rtol must lie in (0, 1)", "rtol");
  if (!(cfg.h_init > 0.0)) throw ConfigError("h_init must be positive", "h_init");
  if (!(cfg.h_max >= cfg.h_init)) throw ConfigError("h_max must be at least h_init", "h_max");
  if (cfg.max_steps == 0) throw ConfigError("max_steps must be positive", "max_steps");
}

Trajectory integrate(const VectorField& f, std::span<const double> x0, double t0, double t1,
                     const IntegratorConfig& cfg, double sample_dt,
                     std::span<const double> breakpoints) {
  validate(cfg);
  if (!(t1 > t0)) throw ConfigError("integration interval is empty", "t_end");
  if (!(sample_dt > 0.0)) throw ConfigError("sample_dt must be positive", "sample_dt");

  const auto start = Clock::now();
  const std::vector<double> ts = sample_times(t0, t1, sample_dt);
  const std::vector<double> bps = interior_breakpoints(breakpoints, t0, t1);
  Trajectory traj = cfg.method == Method::rk45_adaptive
                        ? integrate_dopri(f, x0, t0, t1, cfg, ts, bps)
                        : integrate_rk4(f, x0, t0, t1, cfg, ts, bps);
  traj.stats.wall_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
  return traj;
}

}  // namespace windfarm
