#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "windfarm/inputs.hpp"
#include "windfarm/params.hpp"
#include "windfarm/state.hpp"

namespace windfarm {

/// One printed nonzero of the linear part. Indices are 1-based as printed.
struct MatrixEntry {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Literal transcription of the printed state matrix, the input column and
/// the nonlinear remainder. Deliberately independent of model.cpp: it is an
/// oracle to compare against, not an alternative implementation.
std::vector<MatrixEntry> appendix_A(const TurbineParams& p, const DerivedParams& d);
std::vector<MatrixEntry> appendix_B(const TurbineParams& p, const DerivedParams& d);
State appendix_g(const State& x, const InputSample& u, const TurbineParams& p,
                 const DerivedParams& d);

State rhs_appendix(const State& x, const InputSample& u, const TurbineParams& p,
                   const DerivedParams& d);
State rhs_appendix(const State& x, double t, const InputSignals& u, const TurbineParams& p,
                   const DerivedParams& d);

struct DiscrepancyRow {
  std::size_t state_index;  // 1-based
  std::string description;  // "<state>: <tag>"
  double max_abs_diff;
  std::size_t sample_state_id;  // sample where the max was attained
  double peak_magnitude;        // max |rhs_i| over the samples
};

/// A row agrees when max_abs_diff <= kAgreeTolerance * (1 + peak_magnitude).
/// Rows carry coefficients up to ~4e3, so a bare 1e-12 sits below round-off.
inline constexpr double kAgreeTolerance = 1e-12;

bool agrees(const DiscrepancyRow& row);

/// Compares rhs and rhs_appendix on `samples` random states drawn from `seed`.
/// Returns one row per state index, or no rows when samples == 0.
std::vector<DiscrepancyRow> crosscheck(const TurbineParams& p, const DerivedParams& d,
                                       std::size_t samples, std::uint64_t seed);

}  // namespace windfarm
