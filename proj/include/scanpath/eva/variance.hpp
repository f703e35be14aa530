#pragma once

#include <cmath>
#include <stdexcept>

#include "scanpath/eva/config.hpp"

namespace scanpath {
namespace eva {

// Prediction-error driven exploration control. Two EMAs of the error stream
// at different horizons; their gap is the uncertainty u, squashed into
// [sigma_min, sigma_max]. The caller samples with the current sigma, then
// feeds the observed error to produce the next step's sigma.
struct VarianceController {
  double tau_long = 0.99;
  double tau_short = 0.9;
  double alpha_gain = 5.0;
  double sigma_min = 0.05;
  double sigma_max = 0.5;

  double ema_long = 0.0;
  double ema_short = 0.0;
  double uncertainty = 0.0;
  double sigma = 0.5;  // starts at sigma_max: maximal exploration

  static VarianceController from_config(const EvaConfig& cfg) {
    VarianceController vc;
    vc.tau_long = cfg.tau_long;
    vc.tau_short = cfg.tau_short;
    vc.alpha_gain = cfg.alpha_gain;
    vc.sigma_min = cfg.sigma_min;
    vc.sigma_max = cfg.sigma_max;
    vc.sigma = cfg.sigma_max;
    return vc;
  }

  void validate() const {
    if (!(tau_long > 0.0 && tau_long < 1.0 && tau_short > 0.0 && tau_short < 1.0))
      throw std::invalid_argument("variance: tau values must lie in (0,1)");
    if (!(tau_long > tau_short))
      throw std::invalid_argument("variance: tau_long must exceed tau_short");
    if (!(alpha_gain > 0.0)) throw std::invalid_argument("variance: alpha_gain must be > 0");
    if (!(sigma_max > sigma_min) || sigma_min < 0.0)
      throw std::invalid_argument("variance: need 0 <= sigma_min < sigma_max");
  }

  void update(double e) {
    if (!std::isfinite(e) || e < 0.0)
      throw std::invalid_argument("variance: error must be finite and >= 0");
    ema_long = tau_long * ema_long + (1.0 - tau_long) * e;
    ema_short = tau_short * ema_short + (1.0 - tau_short) * e;
    uncertainty = std::abs(ema_short - ema_long);
    sigma = sigma_min + (sigma_max - sigma_min) * std::tanh(alpha_gain * uncertainty);
  }
};

}  // namespace eva
}  // namespace scanpath
