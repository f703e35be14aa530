#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scanpath/core.hpp"
#include "scanpath/eva/config.hpp"
#include "scanpath/eva/network.hpp"
#include "scanpath/eva/variance.hpp"
#include "scanpath/eva/weights.hpp"

namespace scanpath {
namespace eva {

struct StepRecord {
  double x = 0.0;  // fixation of this step, pixel coords, unclamped
  double y = 0.0;
  double sigma = 0.0;        // policy sigma in effect at this step
  double uncertainty = 0.0;  // EMA gap behind that sigma
  double gate_mean = 0.0;    // mean component of beta_bar
  double gate_bu_mean = 0.0; // mean component of beta_bar_b
  Eigen::VectorXd probs;     // class distribution y_t
  double baseline = 0.0;
  int predicted = 0;         // argmax of probs
  // log N(l_{t+1} | mu_t, sigma_t^2), recorded on steps 1..T-1; absent when
  // sigma was 0 (deterministic policy, density undefined)
  std::optional<double> log_density;
  Eigen::VectorXd h1, h2;
  Eigen::VectorXd beta_bar, beta_bar_b;
};

struct RolloutTrace {
  std::string image_id;
  std::string policy = "predicted";
  ReferenceFrame frame;  // the image's own pixel frame
  std::uint64_t seed = 0;
  std::optional<int> label;
  int predicted = 0;  // argmax of the final step's distribution
  std::vector<StepRecord> steps;

  Scanpath scanpath() const;  // fixation view, clamped into the frame
};

// Overrides for the initial conditions the sensitivity harness varies.
struct RolloutInit {
  std::optional<std::pair<double, double>> loc0_px;  // default: frame center
  std::optional<double> sigma1;                      // default: sigma_max
  double state_fill = 0.0;                           // recurrent h/c init value
};

// Runs T forward steps: glimpse, encode, lower cell, gate, relay, upper
// cell, heads, location sampling, error signal, variance update. When
// `override_path` is non-null its fixations replace every sampled location
// (it must hold exactly T fixations in image pixel coordinates) and no
// generator state is consumed; the location head's log-density of each
// forced fixation is still recorded.
RolloutTrace rollout(const ImageFrame& img, const WeightBundle& w, const GlimpseConfig& gcfg,
                     const EvaConfig& ecfg, std::uint64_t seed,
                     std::optional<int> label = std::nullopt,
                     const Scanpath* override_path = nullptr,
                     const RolloutInit* init = nullptr, const std::string& image_id = "",
                     const std::string& policy_name = "predicted");

std::string trace_to_json(const RolloutTrace& trace, const std::string& meta_json = "");
RolloutTrace trace_from_json(const std::string& text);

}  // namespace eva
}  // namespace scanpath
