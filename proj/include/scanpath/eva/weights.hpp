#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scanpath/eva/config.hpp"

namespace scanpath {
namespace eva {

// 3x3 convolution kernel bank, weights in [out][in][ky][kx] order.
struct ConvLayer {
  int out_c = 0;
  int in_c = 0;
  std::vector<double> w;
  std::vector<double> b;
};

// Two-gate recurrent cell (coupled input-forget): f and o sigmoid gates,
// tanh candidate z, c' = f*c + (1-f)*z, h' = o*tanh(c').
struct CellParams {
  Eigen::MatrixXd wf, uf, wo, uo, wz, uz;  // input and state projections
  Eigen::VectorXd bf, bo, bz;
};

constexpr std::array<int, 4> kFoveaWidths = {64, 128, 256, 256};

struct WeightBundle {
  EvaDims dims;

  std::array<ConvLayer, 4> fovea;       // conv stages, pool after 1-3, GAP after 4
  Eigen::MatrixXd peri_w;               // [p_feat x (fovea^2*channels + 2)]
  Eigen::VectorXd peri_b;
  CellParams lower;                     // input [fovea_feat + p_feat], state h1
  CellParams upper;                     // input [2*h2], state h2
  Eigen::MatrixXd loc_w;                // [2 x h1]
  Eigen::VectorXd loc_b;
  Eigen::MatrixXd act_w;                // [classes x h2]
  Eigen::VectorXd act_b;
  Eigen::MatrixXd base_w;               // [1 x h2]
  Eigen::VectorXd base_b;
  Eigen::MatrixXd gate_td_w;            // [h2 x h2]
  Eigen::VectorXd gate_td_b;
  Eigen::MatrixXd gate_bu_w;            // [h2 x h1]
  Eigen::VectorXd gate_bu_b;
  Eigen::MatrixXd attn_q;               // [attn x h2]
  Eigen::MatrixXd attn_k;               // [attn x (h1 + fovea_feat)]
  Eigen::MatrixXd attn_v;               // [h2 x (h1 + fovea_feat)]
};

// Zero-valued bundle with every block shaped for `dims`.
WeightBundle allocate_weights(const EvaDims& dims);

// Seeded uniform init in [-0.05, 0.05]. Values are quantized through
// float32 so that save/load round-trips are bit-exact.
WeightBundle init_weights(const EvaDims& dims, std::uint64_t seed);

// Binary weight file: magic "EVAW1", little-endian throughout; an integer
// metadata table for the dimensions, then named blocks of float32 data.
void save_weights(const WeightBundle& w, const std::string& path);
WeightBundle load_weights(const std::string& path);

bool weights_equal(const WeightBundle& a, const WeightBundle& b);

// Enumeration of every parameter block in canonical order, used by init,
// serialization and equality so they can never disagree.
struct BlockRef {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::size_t count = 0;
  std::function<double(std::size_t)> get;           // row-major flat index
  std::function<void(std::size_t, double)> set;
};
std::vector<BlockRef> weight_blocks(WeightBundle& w);

}  // namespace eva
}  // namespace scanpath
