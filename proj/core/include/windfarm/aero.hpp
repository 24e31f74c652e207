#pragma once

namespace windfarm {

/// Heier-style exponential power-coefficient surface
///
///   C_p = s * [c1 (c2/li - c3*beta - c4) exp(-c5/li) + c6*lambda],
///   1/li = 1/(lambda + 0.08 beta) - 0.035/(beta^3 + 1),
///
/// with c = (0.5176, 116, 0.4, 5, 21, 0.0068). The scale `s` is calibrated
/// so the beta = 0 maximum equals a requested Cp_max. Values are clamped at 0
/// from below. beta is in degrees.
class PowerCoefficientCurve {
public:
  explicit PowerCoefficientCurve(double scale = 1.0) : scale_(scale) {}

  /// Returns a curve whose maximum over lambda at beta = 0 equals cp_max.
  static PowerCoefficientCurve calibrated(double cp_max);

  double operator()(double lambda, double beta) const;

  /// Unscaled, unclamped surface value.
  static double raw(double lambda, double beta);

  /// Tip-speed ratio maximizing C_p at the given pitch, searched on [1, 15].
  double argmax(double beta) const;

  double scale() const noexcept { return scale_; }

private:
  double scale_;
};

}  // namespace windfarm
