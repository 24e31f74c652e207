#include "windfarm/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "windfarm/aero.hpp"
#include "windfarm/error.hpp"

namespace windfarm {
namespace {

constexpr std::array<std::string_view, kOutputCount> kOutputNames{
    "T_e", "T_m", "p_s",    "q_s", "p_g",   "q_g",   "p_r",   "q_r",   "p_tot",
    "q_tot", "lambda", "C_p", "v_g_d", "v_g_q", "i_r_d", "i_r_q", "v_r_d", "v_r_q",
};

// Algebraic quantities shared by the vector field and the outputs.
struct Algebraic {
  DqPair v_g;
  double T_e, T_e_ref, T_m, lambda, C_p;
  double p_s, q_s;
  double i_r_d, i_r_q, i_r_d_ref, i_r_q_ref, v_r_d, v_r_q, p_r, q_r;
  double p_g, q_g;
  double i_i_d_ref, i_i_q_ref, v_i_d, v_i_q;
  double omega_pll;
};

Algebraic evaluate(std::span<const double, kStateSize> x, const InputSample& u,
                   const TurbineParams& p, const DerivedParams& d) {
  auto s = [&x](Var v) { return x[index(v)]; };
  Algebraic a{};

  a.v_g = park(u.v_abc, s(Var::delta));
  const double vq = a.v_g.q;
  const double vd = a.v_g.d;
  const double isd = s(Var::i_s_d);
  const double isq = s(Var::i_s_q);

  // DFIG outputs
  a.T_e = (vq * isq + vd * isd) / p.omega_s;
  a.p_s = vd * isd + vq * isq;
  a.q_s = -vq * isd + vd * isq;

  // rotor-side converter
  a.i_r_d = s(Var::e_s_q) / d.X_m - d.K_mrr * isd;
  a.i_r_q = s(Var::e_s_d) / d.X_m - d.K_mrr * isq;
  a.i_r_d_ref = p.k_p_RPC * (u.q_star - a.q_s) + p.k_i_RPC * s(Var::phi_r_q);
  a.T_e_ref = p.K_opt * s(Var::omega_r) * s(Var::omega_r);
  a.i_r_q_ref = p.k_p_RTC * (a.T_e_ref - a.T_e) + p.k_i_RTC * s(Var::phi_r_t);
  a.v_r_d = p.k_pd_RCC * (a.i_r_d_ref - a.i_r_d) + p.k_id_RCC * s(Var::phi_r_id);
  a.v_r_q = p.k_pq_RCC * (a.i_r_q_ref - a.i_r_q) + p.k_iq_RCC * s(Var::phi_r_iq);
  a.p_r = a.v_r_d * a.i_r_d + a.v_r_q * a.i_r_q;
  a.q_r = -a.v_r_q * a.i_r_d + a.v_r_d * a.i_r_q;

  // grid-side converter; the reactive channel reference carries the sign
  // that makes q_g = -v_q i_g_d a negative-feedback loop
  const double igd = s(Var::i_g_d);
  const double igq = s(Var::i_g_q);
  a.p_g = vd * igd + vq * igq;
  a.q_g = -vq * igd + vd * igq;
  a.i_i_d_ref = -(p.k_p_GPC * (u.q_star - s(Var::q_avg)) + p.k_i_GPC * s(Var::phi_g_q));
  a.i_i_q_ref = p.k_p_GPC * (a.p_r - s(Var::p_avg)) + p.k_i_GPC * s(Var::phi_g_p);
  a.v_i_d = p.k_p_GCC * (a.i_i_d_ref - s(Var::i_i_d)) + p.k_i_GCC * s(Var::phi_g_id);
  a.v_i_q = p.k_p_GCC * (a.i_i_q_ref - s(Var::i_i_q)) + p.k_i_GCC * s(Var::phi_g_iq);

  a.omega_pll = 1.0 - p.k_p_PLL * s(Var::v_PLL) + p.k_i_PLL * s(Var::phi_PLL);

  const double omega_t = s(Var::omega_t);
  a.T_m = mechanical_torque(omega_t, u.v_w, p, d);
  if (u.v_w > 0.0) {
    a.lambda = tip_speed_ratio(omega_t, u.v_w, p, d);
    a.C_p = cp_curve(a.lambda, p.beta, d);
  } else {
    a.lambda = std::numeric_limits<double>::infinity();
    a.C_p = 0.0;
  }
  return a;
}

void check_block(std::span<const double> dx, std::size_t first, std::size_t last,
                 const char* subsystem) {
  for (std::size_t i = first; i <= last; ++i) {
    if (!std::isfinite(dx[i])) {
      throw ModelError(subsystem, "non-finite derivative of " +
                                      std::string(state_names()[i]));
    }
  }
}

}  // namespace

std::array<double, kOutputCount> Outputs::as_array() const {
  return {T_e,  T_m,    p_s, q_s,   p_g,   q_g,   p_r,   q_r,   p_tot,
          q_tot, lambda, C_p, v_g_d, v_g_q, i_r_d, i_r_q, v_r_d, v_r_q};
}

std::span<const std::string_view, kOutputCount> output_names() { return kOutputNames; }

DqPair park(const std::array<double, 3>& v, double delta) {
  // The printed matrix with cos/sin(delta -/+ 120 deg) expanded, so only
  // one sine and one cosine are evaluated.
  constexpr double kHalfRoot3 = 0.5 * std::numbers::sqrt3;
  const double alpha = v[0] - 0.5 * (v[1] + v[2]);
  const double beta = kHalfRoot3 * (v[1] - v[2]);
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  return {2.0 / 3.0 * (c * alpha + s * beta), -2.0 / 3.0 * (s * alpha - c * beta)};
}

double cp_curve(double lambda, double beta, const DerivedParams& derived) {
  return PowerCoefficientCurve(derived.cp_scale)(lambda, beta);
}

double tip_speed_ratio(double omega_t, double v_w, const TurbineParams& params,
                       const DerivedParams& derived) {
  return omega_t * derived.omega_t_base * params.R_blade / v_w;
}

double mechanical_torque(double omega_t, double v_w, const TurbineParams& p,
                         const DerivedParams& d) {
  if (!(omega_t > 0.0)) {
    throw DomainError("mechanical_torque: turbine speed must be positive");
  }
  if (!(v_w > 0.0)) {
    return 0.0;
  }
  const double lambda = tip_speed_ratio(omega_t, v_w, p, d);
  const double cp = cp_curve(lambda, p.beta, d);
  const double area = std::numbers::pi * p.R_blade * p.R_blade;
  return p.rho * area * cp * v_w * v_w * v_w / (2.0 * p.T_m_base * omega_t);
}

void rhs_into(std::span<const double, kStateSize> x, const InputSample& u,
              const TurbineParams& p, const DerivedParams& d, std::span<double, kStateSize> dx) {
  const Algebraic a = evaluate(x, u, p, d);
  auto s = [&x](Var v) { return x[index(v)]; };
  auto out = [&dx](Var v) -> double& { return dx[index(v)]; };

  const double wn = p.omega_nom;
  const double ws = p.omega_s;
  const double vq = a.v_g.q;
  const double vd = a.v_g.d;
  const double wr = s(Var::omega_r);
  const double isd = s(Var::i_s_d);
  const double isq = s(Var::i_s_q);
  const double esd = s(Var::e_s_d);
  const double esq = s(Var::e_s_q);

  // DFIG
  out(Var::i_s_q) = wn / d.L_s_prime *
                    (-d.R_1 * isq + ws * d.L_s_prime * isd + wr / ws * esq -
                     esd / (d.T_r * ws) - vq + d.K_mrr * a.v_r_q);
  out(Var::i_s_d) = wn / d.L_s_prime *
                    (-d.R_1 * isd - ws * d.L_s_prime * isq + wr / ws * esd +
                     esq / (d.T_r * ws) - vd + d.K_mrr * a.v_r_d);
  out(Var::e_s_q) =
      wn * ws * (d.R_2 * isd - esq / (d.T_r * ws) + (1.0 - wr / ws) * esd - d.K_mrr * a.v_r_d);
  out(Var::e_s_d) =
      -wn * ws * (d.R_2 * isq + esd / (d.T_r * ws) + (1.0 - wr / ws) * esq - d.K_mrr * a.v_r_q);

  // rotor-side controller integrators
  out(Var::phi_r_q) = u.q_star - a.q_s;
  out(Var::phi_r_t) = a.T_e_ref - a.T_e;
  out(Var::phi_r_id) = a.i_r_d_ref - a.i_r_d;
  out(Var::phi_r_iq) = a.i_r_q_ref - a.i_r_q;
  check_block(dx, 0, 5, "DFIG/rotor-side converter");
  check_block(dx, 19, 20, "DFIG/rotor-side converter");

  // LCL filter in the PLL frame
  const double w_frame = wn * a.omega_pll;
  const double iid = s(Var::i_i_d);
  const double iiq = s(Var::i_i_q);
  const double igd = s(Var::i_g_d);
  const double igq = s(Var::i_g_q);
  const double vfd = s(Var::v_f_d);
  const double vfq = s(Var::v_f_q);
  out(Var::i_i_d) = wn / p.L_i * (a.v_i_d - vfd) + w_frame * iiq;
  out(Var::i_i_q) = wn / p.L_i * (a.v_i_q - vfq) - w_frame * iid;
  out(Var::i_g_d) = wn / p.L_g * (vfd - vd) + w_frame * igq;
  out(Var::i_g_q) = wn / p.L_g * (vfq - vq) - w_frame * igd;
  out(Var::v_f_d) = wn / p.C_f * (iid - igd) + w_frame * vfq;
  out(Var::v_f_q) = wn / p.C_f * (iiq - igq) - w_frame * vfd;

  // grid-side controllers
  out(Var::phi_g_id) = a.i_i_d_ref - iid;
  out(Var::phi_g_iq) = a.i_i_q_ref - iiq;
  out(Var::p_avg) = p.omega_c_PC * (a.p_g - s(Var::p_avg));
  out(Var::q_avg) = p.omega_c_PC * (a.q_g - s(Var::q_avg));
  out(Var::phi_g_p) = a.p_r - s(Var::p_avg);
  out(Var::phi_g_q) = u.q_star - s(Var::q_avg);
  check_block(dx, 6, 15, "grid-side converter/LCL filter");
  check_block(dx, 21, 22, "grid-side converter/LCL filter");

  // two-mass drivetrain
  const double shaft = p.k_sh * s(Var::theta_tw) + p.c_sh * wn * (s(Var::omega_t) - wr);
  out(Var::omega_r) = (shaft - a.T_e) / (2.0 * p.H_g);
  out(Var::theta_tw) = wn * (s(Var::omega_t) - wr);
  out(Var::omega_t) = (a.T_m - shaft) / (2.0 * p.H_t);
  check_block(dx, 16, 18, "turbine drivetrain");

  // PLL
  out(Var::v_PLL) = p.omega_c_PLL * (vd - s(Var::v_PLL));
  out(Var::phi_PLL) = -s(Var::v_PLL);
  out(Var::delta) = wn * a.omega_pll;
  check_block(dx, 23, 25, "PLL");

  out(Var::E_C) = (a.p_r - s(Var::p_avg)) / p.C;
  check_block(dx, 26, 26, "DC link");
}

State rhs(const State& x, const InputSample& u, const TurbineParams& p, const DerivedParams& d) {
  State dx;
  rhs_into(x.span(), u, p, d, dx.span());
  return dx;
}

State rhs(const State& x, double t, const InputSignals& u, const TurbineParams& p,
          const DerivedParams& d) {
  return rhs(x, u.at(t), p, d);
}

Outputs outputs(const State& x, const InputSample& u, const TurbineParams& p,
                const DerivedParams& d) {
  const Algebraic a = evaluate(x.span(), u, p, d);
  Outputs o{};
  o.T_e = a.T_e;
  o.T_m = a.T_m;
  o.p_s = a.p_s;
  o.q_s = a.q_s;
  o.p_g = a.p_g;
  o.q_g = a.q_g;
  o.p_r = a.p_r;
  o.q_r = a.q_r;
  o.p_tot = o.p_s + o.p_g;
  o.q_tot = o.q_s + o.q_g;
  o.lambda = a.lambda;
  o.C_p = a.C_p;
  o.v_g_d = a.v_g.d;
  o.v_g_q = a.v_g.q;
  o.i_r_d = a.i_r_d;
  o.i_r_q = a.i_r_q;
  o.v_r_d = a.v_r_d;
  o.v_r_q = a.v_r_q;
  return o;
}

Outputs outputs(const State& x, double t, const InputSignals& u, const TurbineParams& p,
                const DerivedParams& d) {
  return outputs(x, u.at(t), p, d);
}

}  // namespace windfarm
