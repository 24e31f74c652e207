#include "windfarm/appendix.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "windfarm/model.hpp"

namespace windfarm {
namespace {

// Short tag explaining why a row of the printed form departs from the
// componentwise equations. Only shown for rows that actually disagree.
constexpr const char* kRowTags[kStateSize] = {
    "rotor voltage terms expanded with different gains and couplings",      // i_s_d
    "rotor voltage terms expanded with different gains and couplings",      // i_s_q
    "reactive power integrator",                                            // phi_r_q
    "torque integrator",                                                    // phi_r_t
    "rotor current couplings differ from the rotor current relation",       // phi_r_id
    "rotor current couplings differ from the rotor current relation",       // phi_r_iq
    "grid-side channels swapped, no frame coupling, printed reactive sign", // i_i_d
    "no frame coupling in the linear part, g_8 placed on this row",         // i_i_q
    "(9,9) printed as +omega_nom, disagrees with the LCL equation",         // i_g_d
    "(10,10) printed as +omega_nom, disagrees with the LCL equation",       // i_g_q
    "(11,1) couples to stator current instead of inverter current",         // phi_g_id
    "(12,2) couples to stator current instead of inverter current",         // phi_g_iq
    "active power filter",                                                  // p_avg
    "reactive power filter",                                                // q_avg
    "g_15 uses RPC gains in the torque branch and e_s in place of v_g",     // phi_g_p
    "reactive integrator",                                                  // phi_g_q
    "g_17 uses e_s in place of v_g in the torque",                          // omega_r
    "g_18 lacks the 1/(2 H_t) factor",                                      // omega_t
    "shaft twist",                                                          // theta_tw
    "rotor voltage terms expanded with different gains and couplings",      // e_s_d
    "rotor voltage terms expanded with different gains and couplings",      // e_s_q
    "filter voltage",                                                       // v_f_d
    "filter voltage",                                                       // v_f_q
    "PLL filter",                                                           // v_PLL
    "PLL integrator",                                                       // phi_PLL
    "angle rate printed in p.u., implemented as omega_nom * omega_PLL",     // delta
    "g_27 = g_15 / C inherits the g_15 differences",                        // E_C
};

}  // namespace

std::vector<MatrixEntry> appendix_A(const TurbineParams& p, const DerivedParams& d) {
  const double wn = p.omega_nom;
  const double ws = p.omega_s;
  const double K = d.K_mrr;
  const double Ls = d.L_s_prime;
  const double Xm = d.X_m;
  const double Tr = d.T_r;
  const double kpd = p.k_pd_RCC, kid = p.k_id_RCC, kpq = p.k_pq_RCC, kiq = p.k_iq_RCC;
  const double kpG = p.k_p_GCC, kiG = p.k_i_GCC, kpP = p.k_p_GPC, kiP = p.k_i_GPC;
  const double Li = p.L_i, Lg = p.L_g, Cf = p.C_f;

  return {
      {1, 1, wn * (-d.R_1 + K * K * kid) / Ls},
      {1, 2, -wn * ws},
      {1, 3, wn * K * kpd * p.k_i_RPC / Ls},
      {1, 5, wn * K * kid / Ls},
      {1, 21, -wn * (K * kpd / (Ls * Xm) + 1.0 / (Ls * Tr * ws))},
      {2, 1, wn * ws},
      {2, 2, wn * (-d.R_1 + K * K * kiq) / Ls},
      {2, 4, wn * K * kpq * p.k_i_RTC / Ls},
      {2, 6, wn * K * kiq / Ls},
      {2, 20, wn * (-1.0 / (Ls * Tr * ws) + K * kpq / (Ls * Xm))},
      {5, 1, K},
      {5, 3, p.k_i_RPC},
      {5, 21, K},
      {6, 2, -1.0 / Xm},
      {6, 4, p.k_i_RTC},
      {6, 20, 1.0 / Xm},
      {7, 7, -wn * kpG / Li},
      {7, 11, wn * kiG / Li},
      {7, 14, -wn * kpG * kpP / Li},
      {7, 16, wn * kpG * kiP / Li},
      {7, 22, -wn / Li},
      {8, 8, -wn * kpG / Li},
      {8, 12, wn * kiG / Li},
      {8, 13, -wn * kpG * kpP / Li},
      {8, 15, wn * kpG * kiP / Li},
      {8, 23, -wn / Li},
      {9, 9, wn},
      {9, 22, wn / Lg},
      {10, 10, wn},
      {10, 23, wn / Lg},
      {11, 1, -1.0},
      {11, 14, -kpP},
      {11, 16, kiP},
      {12, 2, -1.0},
      {12, 13, -kpP},
      {12, 15, kiP},
      {13, 13, -p.omega_c_PC},
      {14, 14, -p.omega_c_PC},
      {15, 13, -1.0},
      {16, 14, -1.0},
      {17, 17, -wn * p.c_sh / (2.0 * p.H_g)},
      {17, 18, wn * p.c_sh / (2.0 * p.H_g)},
      {17, 19, p.k_sh / (2.0 * p.H_g)},
      {18, 17, wn * p.c_sh / (2.0 * p.H_t)},
      {18, 18, -wn * p.c_sh / (2.0 * p.H_t)},
      {18, 19, -p.k_sh / (2.0 * p.H_t)},
      {19, 17, -wn},
      {19, 18, wn},
      {20, 2, wn * ws * (-d.R_2 + kpq * K * K)},
      {20, 4, wn * ws * K * kpq * p.k_i_RTC},
      {20, 6, wn * ws * K * kiq},
      {20, 20, wn * (-1.0 / Tr + ws * K * kiq / Xm)},
      {20, 21, -wn * ws},
      {21, 4, wn * ws * (-d.R_2 + kpd * K * K)},
      {21, 5, wn * ws * K * kpd * p.k_i_RPC},
      {21, 7, wn * ws * K * kid},
      {21, 20, wn * ws},
      {21, 21, -wn * (1.0 / Tr + ws * K * kpd / Xm)},
      {22, 7, wn / Cf},
      {22, 9, -wn / Cf},
      {22, 23, wn},
      {23, 8, wn / Cf},
      {23, 10, -wn / Cf},
      {23, 22, -wn},
      {24, 24, -p.omega_c_PLL},
      {25, 24, -1.0},
      {26, 24, -p.k_p_PLL},
      {26, 25, p.k_i_PLL},
      {27, 13, -1.0 / p.C},
  };
}

std::vector<MatrixEntry> appendix_B(const TurbineParams& p, const DerivedParams& d) {
  const double wn = p.omega_nom;
  const double K = d.K_mrr;
  return {
      {1, 1, wn * K * p.k_pd_RCC * p.k_p_RPC / d.L_s_prime},
      {3, 1, 1.0},
      {5, 1, p.k_p_RPC},
      {21, 1, -wn * p.omega_s * K * p.k_pd_RCC * p.k_p_RPC},
      {7, 1, wn * p.k_p_GCC * p.k_p_GPC / p.L_i},
      {11, 1, p.k_p_GPC},
      {16, 1, 1.0},
  };
}

State appendix_g(const State& x, const InputSample& u, const TurbineParams& p,
                 const DerivedParams& d) {
  const double wn = p.omega_nom;
  const double ws = p.omega_s;
  const double K = d.K_mrr;
  const double Ls = d.L_s_prime;
  const double Xm = d.X_m;

  const DqPair v = park(u.v_abc, x[Var::delta]);
  const double vq = v.q, vd = v.d;
  const double isd = x[Var::i_s_d], isq = x[Var::i_s_q];
  const double esd = x[Var::e_s_d], esq = x[Var::e_s_q];
  const double wr = x[Var::omega_r];
  const double wpll = -p.k_p_PLL * x[Var::v_PLL] + p.k_i_PLL * x[Var::phi_PLL];

  const double cross = vq * isd - vd * isq;
  const double torque = vq / ws * isq + vd / ws * isd;
  const double te_ref = p.K_opt * wr * wr;
  const double ird = esq / Xm - K * isd;
  const double irq = esd / Xm - K * isq;

  State g;
  const double g15 =
      (p.k_pd_RCC * (p.k_p_RPC * (u.q_star - (-vq * isd + vd * isq)) +
                     p.k_i_RPC * x[Var::phi_r_q] - ird) +
       p.k_id_RCC * x[Var::phi_r_id]) *
          (esq / Xm - K * isd) +
      (p.k_pq_RCC * (p.k_p_RPC * (te_ref - (esd / ws * isd + esq / ws * isq)) +
                     p.k_i_RPC * x[Var::phi_r_t] - irq) +
       p.k_iq_RCC * x[Var::phi_r_iq]) *
          (esd / Xm - K * isq);

  g.values[0] = wn * K * p.k_pd_RCC * p.k_p_RPC / Ls * cross + wn * wr * esd / (Ls * ws) -
                wn / Ls * vd;
  g.values[1] = -wn * K * p.k_pq_RCC * p.k_p_RTC / Ls * (torque - te_ref) +
                wn * wr * esq / (Ls * ws) - wn / Ls * vd;
  g.values[2] = cross;
  g.values[3] = te_ref - torque;
  g.values[4] = p.k_p_RPC * cross;
  g.values[5] = p.k_p_RTC * (te_ref - torque);
  g.values[7] = wn * p.k_p_GCC * p.k_p_GPC / p.L_i * g15;
  g.values[8] = wn * (wpll * x[Var::i_g_q] - vd / p.L_g);
  g.values[9] = wn * (-wpll * x[Var::i_g_d] - vq / p.L_g);
  g.values[12] = p.omega_c_PC * (vd * x[Var::i_g_d] + vq * x[Var::i_g_q]);
  g.values[13] = p.omega_c_PC * (-vq * x[Var::i_g_d] + vd * x[Var::i_g_q]);
  g.values[14] = g15;
  g.values[16] = -1.0 / (2.0 * p.H_g) * (esq / ws * isq + esd / ws * isd);
  if (u.v_w > 0.0) {
    const double lambda = tip_speed_ratio(x[Var::omega_t], u.v_w, p, d);
    g.values[17] = 1.0 / (2.0 * p.T_m_base) *
                   (p.rho * std::numbers::pi * p.R_blade * p.R_blade *
                    cp_curve(lambda, p.beta, d) * u.v_w * u.v_w * u.v_w / x[Var::omega_t]);
  }
  g.values[19] = -wn * ws * K * p.k_pq_RCC * p.k_p_RTC * (torque - te_ref) + wn * wr * esq;
  g.values[20] = -wn * (ws * K * p.k_pd_RCC * p.k_p_RPC * cross - wr * esd);
  g.values[21] = wn * wpll * x[Var::v_f_q];
  g.values[22] = -wn * wpll * x[Var::v_f_d];
  g.values[23] = p.omega_c_PLL * vd;
  g.values[25] = 1.0;
  g.values[26] = g15 / p.C;
  return g;
}

State rhs_appendix(const State& x, const InputSample& u, const TurbineParams& p,
                   const DerivedParams& d) {
  State dx = appendix_g(x, u, p, d);
  for (const auto& e : appendix_A(p, d)) {
    dx.values[e.row - 1] += e.value * x.values[e.col - 1];
  }
  for (const auto& e : appendix_B(p, d)) {
    dx.values[e.row - 1] += e.value * u.q_star;
  }
  return dx;
}

State rhs_appendix(const State& x, double t, const InputSignals& u, const TurbineParams& p,
                   const DerivedParams& d) {
  return rhs_appendix(x, u.at(t), p, d);
}

bool agrees(const DiscrepancyRow& row) {
  return row.max_abs_diff <= kAgreeTolerance * (1.0 + row.peak_magnitude);
}

std::vector<DiscrepancyRow> crosscheck(const TurbineParams& p, const DerivedParams& d,
                                       std::size_t samples, std::uint64_t seed) {
  std::vector<DiscrepancyRow> rows;
  if (samples == 0) {
    return rows;
  }
  rows.resize(kStateSize);
  for (std::size_t i = 0; i < kStateSize; ++i) {
    rows[i] = {i + 1, {}, 0.0, 0, 0.0};
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> speed(0.5, 1.2);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> wind(4.0, 12.0);
  std::uniform_real_distribution<double> grid(0.9, 1.1);

  for (std::size_t k = 0; k < samples; ++k) {
    State x;
    for (auto& v : x.values) {
      v = unit(rng);
    }
    x[Var::omega_r] = speed(rng);
    x[Var::omega_t] = speed(rng);
    x[Var::delta] = angle(rng);
    InputSample u{0.2 * unit(rng), balanced_abc(grid(rng), angle(rng)), wind(rng)};

    const State a = rhs(x, u, p, d);
    const State b = rhs_appendix(x, u, p, d);
    for (std::size_t i = 0; i < kStateSize; ++i) {
      const double diff = std::abs(a.values[i] - b.values[i]);
      rows[i].peak_magnitude = std::max(rows[i].peak_magnitude, std::abs(a.values[i]));
      if (diff > rows[i].max_abs_diff) {
        rows[i].max_abs_diff = diff;
        rows[i].sample_state_id = k;
      }
    }
  }
  for (std::size_t i = 0; i < kStateSize; ++i) {
    const bool agree = agrees(rows[i]);
    rows[i].description = std::string(state_names()[i]) + ": " +
                          (agree ? std::string("agrees") : std::string(kRowTags[i]));
  }
  return rows;
}

}  // namespace windfarm
