#pragma once

namespace scanpath {
namespace eva {

struct GlimpseConfig {
  int fovea_size = 8;      // px, square crop at full resolution
  int periphery_size = 16; // px, square crop downscaled to fovea_size
  int steps = 12;          // glimpses per episode
};

// Network dimensions carried in the weight file. The fovea encoder's
// convolutional widths (64-128-256-256) are fixed by construction, so its
// output is always 256-dimensional.
struct EvaDims {
  int channels = 3;
  int fovea_size = 8;
  int periphery_size = 16;
  int periphery_feat = 128;
  int h1 = 256;  // lower recurrent state
  int h2 = 256;  // upper recurrent state
  int attn = 64; // relay key dimension
  int classes = 10;

  static constexpr int fovea_feat = 256;

  bool operator==(const EvaDims&) const = default;
};

// Scalar dynamics constants. Sigma values live in normalized [-1,1]
// location units.
struct EvaConfig {
  double sigma_min = 0.05;
  double sigma_max = 0.5;
  double alpha_gain = 5.0;  // uncertainty-to-sigma gain inside tanh
  double tau_long = 0.99;
  double tau_short = 0.9;
  double gamma = 0.9;       // gate EMA factor
  double eps_relay = 0.01;  // relay leak
  double lambda_cost = 0.1;
  double lambda_l1 = 0.01;
  double lambda_entropy = 0.05;
  double reg_eps = 1e-8;    // inside the gate entropy logs
};

}  // namespace eva
}  // namespace scanpath
