#include "windfarm/state.hpp"

#include <algorithm>

#include "windfarm/error.hpp"

namespace windfarm {
namespace {

constexpr std::array<std::string_view, kStateSize> kNames{
    "i_s_d",    "i_s_q",    "phi_r_q",  "phi_r_t", "phi_r_id", "phi_r_iq", "i_i_d",
    "i_i_q",    "i_g_d",    "i_g_q",    "phi_g_id", "phi_g_iq", "p_avg",   "q_avg",
    "phi_g_p",  "phi_g_q",  "omega_r",  "omega_t", "theta_tw", "e_s_d",   "e_s_q",
    "v_f_d",    "v_f_q",    "v_PLL",    "phi_PLL", "delta",    "E_C",
};

}  // namespace

std::span<const std::string_view, kStateSize> state_names() { return kNames; }

std::size_t state_index(std::string_view name) {
  const auto it = std::find(kNames.begin(), kNames.end(), name);
  return static_cast<std::size_t>(it - kNames.begin());
}

State State::from(std::span<const double> x) {
  if (x.size() != kStateSize) {
    throw Error("State::from: expected 27 entries");
  }
  State s;
  std::copy(x.begin(), x.end(), s.values.begin());
  return s;
}

}  // namespace windfarm
