#pragma once

#include <string>
#include <vector>

#include "scanpath/core.hpp"
#include "scanpath/metrics.hpp"

namespace scanpath {
namespace gcs {

using metrics::MetricConfig;
using metrics::RawMetrics;

struct GcsConfig {
  double lambda = 0.1;        // weight of the movement-similarity bonus
  double tau = 1.0;           // temperature of the similarity map exp(-d/tau)
  double eps = 1e-6;          // relative-error guard in movement distance
  int coverage_cols = 7;
  int coverage_rows = 7;
  double collapse_radius = 8.0;  // px; saccades shorter than this count as collapsed
  MetricConfig metric;
};

// Raw metric values of the three calibration policies, each evaluated
// against the same human data as the model.
struct CalibrationRefs {
  RawMetrics upper;   // human reference (best case)
  RawMetrics lower;   // corner-fixation reference (worst case)
  RawMetrics center;  // always-center reference (the bias being removed)
};

struct MovementStats {
  double path_length = 0.0;
  double mean_saccade_amplitude = 0.0;
  double mean_dist_to_center = 0.0;
  double spatial_coverage = 0.0;
  double direction_entropy = 0.0;  // nats, 8 angular bins
  double collapse_rate = 0.0;
  bool degenerate = false;  // fewer than 2 fixations, or no nonzero saccade
};

// One value per metric, in the fixed order (dtw, scanmatch, nss, auc).
struct MetricQuad {
  double dtw = 0.0;
  double scanmatch = 0.0;
  double nss = 0.0;
  double auc = 0.0;

  double mean() const { return 0.25 * (dtw + scanmatch + nss + auc); }
};

struct GcsReport {
  RawMetrics raw;
  CalibrationRefs refs;
  MetricQuad normalized;         // model scores after per-metric normalization
  MetricQuad normalized_center;  // always-center policy, same normalization
  MetricQuad debiased;           // normalized - normalized_center
  MovementStats movement_model;
  MovementStats movement_human;
  double movement_distance = 0.0;
  double movement_similarity = 1.0;
  double gcs = 0.0;
  double lambda = 0.1;
  double sim_temperature = 1.0;
  std::string upper_mode = "self";  // "self" or "external"
  std::vector<std::string> warnings;
};

// (D_min - D)/(D_min - D_max): 1 at the human (best) reference, 0 at the
// corner (worst) reference. Unclamped; out-of-range values are informative.
double normalize_dtw(double d, const CalibrationRefs& refs);

// (m - m_min)/(m_max - m_min) for higher-is-better metrics, unclamped.
double normalize_updir(double m, double m_min, double m_max);

double debias(double normalized_model, double normalized_center);

MovementStats movement_stats(const Scanpath& sp, const ReferenceFrame& frame,
                             int coverage_cols, int coverage_rows, double collapse_radius);

// Root-mean-square relative error across the six movement statistics.
double movement_distance(const MovementStats& model, const MovementStats& human, double eps);

double movement_similarity(double d, double tau);

struct GcsRefInputs {
  Scanpath human_ref;   // upper reference scanpath
  Scanpath corner_ref;  // lower reference scanpath
  Scanpath center_ref;  // always-center scanpath
};

// Full pipeline: raw metrics for model and references, per-metric
// normalization, center debiasing, movement similarity, aggregate score.
GcsReport compute_gcs(const Scanpath& model, const Scanpath& human,
                      const DensityGrid& human_density, const GcsRefInputs& refs,
                      const GcsConfig& cfg);

}  // namespace gcs
}  // namespace scanpath
