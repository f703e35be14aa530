#pragma once

#include <cstdint>
#include <vector>

#include "scanpath/core.hpp"

namespace scanpath {
namespace metrics {

struct MetricConfig {
  int scanmatch_cols = 14;
  int scanmatch_rows = 14;
  double scanmatch_gap = 0.2;        // gap penalty, in units of sub_scale
  double scanmatch_sub_scale = 1.0;  // score of a perfect cell match
  double nss_sigma = 11.2;           // density kernel, px (5% of frame width)
  int auc_negatives = 1000;
  std::uint64_t rng_seed = 1;
};

struct RawMetrics {
  double dtw = 0.0;       // lower is better
  double scanmatch = 0.0; // [0,1]
  double nss = 0.0;
  double auc = 0.5;       // [0,1]
};

// Classical dynamic time warping: minimum summed Euclidean cost over all
// boundary-aligned monotone alignments. No band, no length normalization.
double dtw(const Scanpath& a, const Scanpath& b);

// Grid-quantized Needleman-Wunsch similarity. Substitution score is
// sub_scale*(1 - d/d_max) with d the Euclidean distance between cell
// indices and d_max the grid diagonal; gaps cost gap*sub_scale. The optimal
// score is divided by sub_scale*max(len a, len b), so self-match is 1.
double scanmatch(const Scanpath& a, const Scanpath& b, const MetricConfig& cfg);

// Cell index of a fixation on a cols x rows grid over the frame.
std::pair<int, int> quantize_cell(const Fixation& f, const ReferenceFrame& frame,
                                  int cols, int rows);

// Sum of isotropic Gaussians (truncated at 4 sigma) at each fixation,
// normalized to sum 1.
DensityGrid density_grid(const std::vector<Scanpath>& paths, const ReferenceFrame& frame,
                         double sigma);

// Mean z-scored grid value, sampled bilinearly at the fixations.
// A zero-variance grid scores 0 by definition.
double nss(const DensityGrid& sal, const std::vector<Fixation>& fixations);

// Mann-Whitney AUC of grid values at fixations vs cfg.auc_negatives
// uniformly sampled in-frame points, ties counted 0.5. The negative set is
// a pure function of cfg.rng_seed, so every call with the same config ranks
// against identical negatives. A zero-variance grid scores 0.5.
double auc(const DensityGrid& sal, const std::vector<Fixation>& fixations,
           const MetricConfig& cfg);

RawMetrics raw_metrics(const Scanpath& model, const Scanpath& human,
                       const DensityGrid& human_density, const MetricConfig& cfg);

}  // namespace metrics
}  // namespace scanpath
