#include "scanpath/gcs.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace scanpath {
namespace gcs {

double normalize_dtw(double d, const CalibrationRefs& refs) {
  const double d_min = refs.lower.dtw;  // corner reference, worst case
  const double d_max = refs.upper.dtw;  // human reference, best case
  if (d_min == d_max)
    throw std::invalid_argument("gcs: degenerate calibration range for metric dtw");
  return (d_min - d) / (d_min - d_max);
}

double normalize_updir(double m, double m_min, double m_max) {
  if (m_min == m_max)
    throw std::invalid_argument("gcs: degenerate calibration range for up-direction metric");
  return (m - m_min) / (m_max - m_min);
}

double debias(double normalized_model, double normalized_center) {
  return normalized_model - normalized_center;
}

MovementStats movement_stats(const Scanpath& sp, const ReferenceFrame& frame,
                             int coverage_cols, int coverage_rows, double collapse_radius) {
  if (sp.empty()) throw std::invalid_argument("movement_stats: empty scanpath");
  if (coverage_cols < 1 || coverage_rows < 1)
    throw std::invalid_argument("movement_stats: coverage grid must be at least 1x1");
  MovementStats ms;

  const double cx = frame.width / 2.0;
  const double cy = frame.height / 2.0;
  double dist_sum = 0.0;
  std::set<std::pair<int, int>> cells;
  for (const auto& f : sp.fixations) {
    dist_sum += std::hypot(f.x - cx, f.y - cy);
    cells.insert(metrics::quantize_cell(f, frame, coverage_cols, coverage_rows));
  }
  ms.mean_dist_to_center = dist_sum / static_cast<double>(sp.size());
  ms.spatial_coverage =
      static_cast<double>(cells.size()) / (static_cast<double>(coverage_cols) * coverage_rows);

  const std::size_t n = sp.size();
  if (n < 2) {
    // zero-saccade scanpath: saccade statistics are degenerate by definition
    ms.collapse_rate = 1.0;
    ms.degenerate = true;
    return ms;
  }

  std::size_t collapsed = 0;
  int dir_counts[8] = {0};
  std::size_t dir_total = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double dx = sp.fixations[i].x - sp.fixations[i - 1].x;
    const double dy = sp.fixations[i].y - sp.fixations[i - 1].y;
    const double amp = std::hypot(dx, dy);
    ms.path_length += amp;
    if (amp < collapse_radius) ++collapsed;
    if (amp > 0.0) {
      const double theta = std::atan2(dy, dx);  // [-pi, pi]
      const int bin = std::min(static_cast<int>((theta + M_PI) / (M_PI / 4.0)), 7);
      ++dir_counts[bin];
      ++dir_total;
    }
  }
  ms.mean_saccade_amplitude = ms.path_length / static_cast<double>(n - 1);
  ms.collapse_rate = static_cast<double>(collapsed) / static_cast<double>(n - 1);
  if (dir_total == 0) {
    ms.degenerate = true;
  } else {
    for (const int c : dir_counts) {
      if (c == 0) continue;
      const double p = static_cast<double>(c) / static_cast<double>(dir_total);
      ms.direction_entropy -= p * std::log(p);
    }
  }
  return ms;
}

double movement_distance(const MovementStats& model, const MovementStats& human, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("movement_distance: eps must be > 0");
  const double m[6] = {model.path_length, model.mean_saccade_amplitude,
                       model.mean_dist_to_center, model.spatial_coverage,
                       model.direction_entropy, model.collapse_rate};
  const double h[6] = {human.path_length, human.mean_saccade_amplitude,
                       human.mean_dist_to_center, human.spatial_coverage,
                       human.direction_entropy, human.collapse_rate};
  double acc = 0.0;
  for (int k = 0; k < 6; ++k) {
    const double rel = std::abs(m[k] - h[k]) / (std::abs(h[k]) + eps);
    acc += rel * rel;
  }
  return std::sqrt(acc / 6.0);
}

double movement_similarity(double d, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("movement_similarity: tau must be > 0");
  if (d < 0.0) throw std::invalid_argument("movement_similarity: d must be >= 0");
  return std::exp(-d / tau);
}

GcsReport compute_gcs(const Scanpath& model, const Scanpath& human,
                      const DensityGrid& human_density, const GcsRefInputs& refs,
                      const GcsConfig& cfg) {
  GcsReport rep;
  rep.lambda = cfg.lambda;
  rep.sim_temperature = cfg.tau;

  rep.raw = metrics::raw_metrics(model, human, human_density, cfg.metric);
  rep.refs.upper = metrics::raw_metrics(refs.human_ref, human, human_density, cfg.metric);
  rep.refs.lower = metrics::raw_metrics(refs.corner_ref, human, human_density, cfg.metric);
  rep.refs.center = metrics::raw_metrics(refs.center_ref, human, human_density, cfg.metric);

  // expected orderings; violations flag calibration problems but do not stop
  if (rep.refs.lower.dtw < rep.refs.upper.dtw)
    rep.warnings.push_back("dtw: corner reference beats human reference");
  if (rep.refs.upper.scanmatch < rep.refs.lower.scanmatch)
    rep.warnings.push_back("scanmatch: human reference below corner reference");
  if (rep.refs.upper.nss < rep.refs.lower.nss)
    rep.warnings.push_back("nss: human reference below corner reference");
  if (rep.refs.upper.auc < rep.refs.lower.auc)
    rep.warnings.push_back("auc: human reference below corner reference");

  auto norm_updir = [&](double m, double lo, double hi, const char* name) {
    if (lo == hi)
      throw std::invalid_argument(std::string("gcs: degenerate calibration range for metric ") +
                                  name);
    return (m - lo) / (hi - lo);
  };
  rep.normalized.dtw = normalize_dtw(rep.raw.dtw, rep.refs);
  rep.normalized.scanmatch =
      norm_updir(rep.raw.scanmatch, rep.refs.lower.scanmatch, rep.refs.upper.scanmatch, "scanmatch");
  rep.normalized.nss = norm_updir(rep.raw.nss, rep.refs.lower.nss, rep.refs.upper.nss, "nss");
  rep.normalized.auc = norm_updir(rep.raw.auc, rep.refs.lower.auc, rep.refs.upper.auc, "auc");

  rep.normalized_center.dtw = normalize_dtw(rep.refs.center.dtw, rep.refs);
  rep.normalized_center.scanmatch = norm_updir(rep.refs.center.scanmatch, rep.refs.lower.scanmatch,
                                               rep.refs.upper.scanmatch, "scanmatch");
  rep.normalized_center.nss =
      norm_updir(rep.refs.center.nss, rep.refs.lower.nss, rep.refs.upper.nss, "nss");
  rep.normalized_center.auc =
      norm_updir(rep.refs.center.auc, rep.refs.lower.auc, rep.refs.upper.auc, "auc");

  rep.debiased.dtw = debias(rep.normalized.dtw, rep.normalized_center.dtw);
  rep.debiased.scanmatch = debias(rep.normalized.scanmatch, rep.normalized_center.scanmatch);
  rep.debiased.nss = debias(rep.normalized.nss, rep.normalized_center.nss);
  rep.debiased.auc = debias(rep.normalized.auc, rep.normalized_center.auc);

  rep.movement_model = movement_stats(model, model.frame, cfg.coverage_cols, cfg.coverage_rows,
                                      cfg.collapse_radius);
  rep.movement_human = movement_stats(human, human.frame, cfg.coverage_cols, cfg.coverage_rows,
                                      cfg.collapse_radius);
  rep.movement_distance = movement_distance(rep.movement_model, rep.movement_human, cfg.eps);
  rep.movement_similarity = movement_similarity(rep.movement_distance, cfg.tau);

  rep.gcs = rep.debiased.mean() + cfg.lambda * rep.movement_similarity;
  return rep;
}

}  // namespace gcs
}  // namespace scanpath
