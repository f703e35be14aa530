#pragma once

#include <Eigen/Dense>
#include <utility>

#include "scanpath/core.hpp"
#include "scanpath/eva/config.hpp"
#include "scanpath/eva/weights.hpp"

namespace scanpath {
namespace eva {

struct GlimpseObservation {
  ImageFrame fovea;                       // fovea_size square
  ImageFrame periphery;                   // downscaled to fovea_size
  std::pair<double, double> location;     // normalized to [-1,1]^2
};

// Crops a fovea patch and a wider periphery patch (bilinearly downscaled to
// the fovea size) around a pixel location; out-of-frame pixels are zero.
GlimpseObservation extract_glimpse(const ImageFrame& img, std::pair<double, double> loc_px,
                                   const GlimpseConfig& cfg);

struct EncodedGlimpse {
  Eigen::VectorXd s;           // [fovea_feat + periphery_feat]
  Eigen::VectorXd fovea_feat;  // convolutional features alone, for the relay
};

// Fovea: 4 conv3x3+ReLU stages (widths 64-128-256-256), 2x2 maxpool after
// the first three, global average pool. Periphery: one affine+ReLU over the
// flattened patch concatenated with the normalized location.
EncodedGlimpse encode_glimpse(const GlimpseObservation& obs, const WeightBundle& w);

// One step of the two-gate recurrent cell; returns the new (h, c).
std::pair<Eigen::VectorXd, Eigen::VectorXd> cell_step(const CellParams& cell,
                                                      const Eigen::VectorXd& x,
                                                      const Eigen::VectorXd& h,
                                                      const Eigen::VectorXd& c);

struct GateState {
  double gamma = 0.9;
  Eigen::VectorXd beta;        // instantaneous gate, in [0,1]
  Eigen::VectorXd beta_bar;    // EMA of beta
  Eigen::VectorXd beta_bar_b;  // EMA of the clamped bottom-up branch

  static GateState init(int h2, double gamma);
};

// beta = clamp((f_td(h2_prev) - sigma) * (f_bu(h1_prev) + sigma), 0, 1),
// then EMA updates of beta_bar and of the bottom-up branch.
void gate_step(GateState& gs, const Eigen::VectorXd& h1_prev, const Eigen::VectorXd& h2_prev,
               double sigma, const WeightBundle& w);

// Attention-style gated integration: scalar attention between the upper
// state query and the fused lower evidence, leaked by eps, gated by
// beta_bar. Returns U = [z | rho] of length 2*h2.
Eigen::VectorXd relay(const Eigen::VectorXd& h1, const Eigen::VectorXd& fovea_feat,
                      const Eigen::VectorXd& h2_prev, const Eigen::VectorXd& beta_bar,
                      const WeightBundle& w, double eps);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

}  // namespace eva
}  // namespace scanpath
