#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace windfarm {

inline constexpr std::size_t kStateSize = 27;

/// Number of leading states that scale with the turbine count (currents,
/// powers and their controller integrators).
inline constexpr std::size_t kScaledStates = 16;

enum class Var : std::size_t {
  i_s_d,
  i_s_q,
  phi_r_q,
  phi_r_t,
  phi_r_id,
  phi_r_iq,
  i_i_d,
  i_i_q,
  i_g_d,
  i_g_q,
  phi_g_id,
  phi_g_iq,
  p_avg,
  q_avg,
  phi_g_p,
  phi_g_q,
  omega_r,
  omega_t,
  theta_tw,
  e_s_d,
  e_s_q,
  v_f_d,
  v_f_q,
  v_PLL,
  phi_PLL,
  delta,
  E_C,
};

constexpr std::size_t index(Var v) noexcept { return static_cast<std::size_t>(v); }

std::span<const std::string_view, kStateSize> state_names();

/// Index of a state by name, or kStateSize when unknown.
std::size_t state_index(std::string_view name);

/// One turbine's (or one aggregate's) state in the fixed 27-entry order.
struct State {
  std::array<double, kStateSize> values{};

  double& operator[](Var v) noexcept { return values[index(v)]; }
  double operator[](Var v) const noexcept { return values[index(v)]; }
  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }

  std::span<double, kStateSize> span() noexcept { return values; }
  std::span<const double, kStateSize> span() const noexcept { return values; }

  static State from(std::span<const double> x);

  bool operator==(const State&) const = default;
};

}  // namespace windfarm
