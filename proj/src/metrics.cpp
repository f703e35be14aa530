#include "scanpath/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scanpath/rng.hpp"

namespace scanpath {
namespace metrics {

namespace {

void check_pair(const Scanpath& a, const Scanpath& b, const char* op) {
  if (a.empty() || b.empty())
    throw std::invalid_argument(std::string(op) + ": empty scanpath");
  if (!(a.frame == b.frame))
    throw std::invalid_argument(std::string(op) + ": reference frame mismatch");
}

}  // namespace

double dtw(const Scanpath& a, const Scanpath& b) {
  check_pair(a, b, "dtw");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  // rolling rows of the accumulated-cost matrix
  std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double d = std::hypot(a.fixations[i - 1].x - b.fixations[j - 1].x,
                                  a.fixations[i - 1].y - b.fixations[j - 1].y);
      cur[j] = d + std::min({prev[j - 1], prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

std::pair<int, int> quantize_cell(const Fixation& f, const ReferenceFrame& frame,
                                  int cols, int rows) {
  const double cw = static_cast<double>(frame.width) / cols;
  const double ch = static_cast<double>(frame.height) / rows;
  const int c = std::clamp(static_cast<int>(std::floor(f.x / cw)), 0, cols - 1);
  const int r = std::clamp(static_cast<int>(std::floor(f.y / ch)), 0, rows - 1);
  return {c, r};
}

double scanmatch(const Scanpath& a, const Scanpath& b, const MetricConfig& cfg) {
  check_pair(a, b, "scanmatch");
  if (cfg.scanmatch_cols < 1 || cfg.scanmatch_rows < 1)
    throw std::invalid_argument("scanmatch: grid must be at least 1x1");
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::pair<int, int>> sa(n), sb(m);
  for (std::size_t i = 0; i < n; ++i)
    sa[i] = quantize_cell(a.fixations[i], a.frame, cfg.scanmatch_cols, cfg.scanmatch_rows);
  for (std::size_t j = 0; j < m; ++j)
    sb[j] = quantize_cell(b.fixations[j], b.frame, cfg.scanmatch_cols, cfg.scanmatch_rows);

  const double d_max = std::hypot(cfg.scanmatch_cols - 1.0, cfg.scanmatch_rows - 1.0);
  const double gap = cfg.scanmatch_gap * cfg.scanmatch_sub_scale;
  auto sub = [&](std::size_t i, std::size_t j) {
    // 1x1 grids have d_max 0; every fixation shares the single cell
    const double d = d_max == 0.0
                         ? 0.0
                         : std::hypot(sa[i].first - sb[j].first, sa[i].second - sb[j].second) / d_max;
    return cfg.scanmatch_sub_scale * (1.0 - d);
  };

  std::vector<double> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = -gap * static_cast<double>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = -gap * static_cast<double>(i);
    for (std::size_t j = 1; j <= m; ++j)
      cur[j] = std::max({prev[j - 1] + sub(i - 1, j - 1), prev[j] - gap, cur[j - 1] - gap});
    std::swap(prev, cur);
  }
  return prev[m] / (cfg.scanmatch_sub_scale * static_cast<double>(std::max(n, m)));
}

DensityGrid density_grid(const std::vector<Scanpath>& paths, const ReferenceFrame& frame,
                         double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("density_grid: sigma must be > 0");
  DensityGrid g = DensityGrid::zeros(frame, DensityGrid::probability);
  const double radius = 4.0 * sigma;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  std::size_t total = 0;
  for (const auto& sp : paths) {
    for (const auto& f : sp.fixations) {
      ++total;
      const int c_lo = std::max(0, static_cast<int>(std::floor(f.x - radius - 0.5)));
      const int c_hi = std::min(frame.width - 1, static_cast<int>(std::ceil(f.x + radius - 0.5)));
      const int r_lo = std::max(0, static_cast<int>(std::floor(f.y - radius - 0.5)));
      const int r_hi = std::min(frame.height - 1, static_cast<int>(std::ceil(f.y + radius - 0.5)));
      for (int r = r_lo; r <= r_hi; ++r) {
        const double dy = (r + 0.5) - f.y;
        for (int c = c_lo; c <= c_hi; ++c) {
          const double dx = (c + 0.5) - f.x;
          const double d2 = dx * dx + dy * dy;
          if (d2 > radius * radius) continue;
          g.at(r, c) += std::exp(-d2 * inv2s2);
        }
      }
    }
  }
  if (total == 0) throw std::invalid_argument("density_grid: no fixations");
  double sum = 0.0;
  for (const double v : g.values) sum += v;
  if (sum <= 0.0) throw std::invalid_argument("density_grid: all mass truncated away");
  for (double& v : g.values) v /= sum;
  return g;
}

namespace {

// Population mean/std over all cells; std 0 signals a constant grid.
std::pair<double, double> grid_moments(const DensityGrid& g) {
  double mean = 0.0;
  for (const double v : g.values) mean += v;
  mean /= static_cast<double>(g.values.size());
  double var = 0.0;
  for (const double v : g.values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(g.values.size());
  return {mean, std::sqrt(var)};
}

}  // namespace

double nss(const DensityGrid& sal, const std::vector<Fixation>& fixations) {
  if (fixations.empty()) throw std::invalid_argument("nss: no fixations");
  const auto [mean, sd] = grid_moments(sal);
  if (sd == 0.0) return 0.0;
  double acc = 0.0;
  for (const auto& f : fixations) acc += (sal.sample(f.x, f.y) - mean) / sd;
  return acc / static_cast<double>(fixations.size());
}

double auc(const DensityGrid& sal, const std::vector<Fixation>& fixations,
           const MetricConfig& cfg) {
  if (fixations.empty()) throw std::invalid_argument("auc: no fixations");
  if (cfg.auc_negatives < 1) throw std::invalid_argument("auc: need at least 1 negative");
  const auto [mean, sd] = grid_moments(sal);
  if (sd == 0.0) return 0.5;
  std::vector<double> pos;
  pos.reserve(fixations.size());
  for (const auto& f : fixations) pos.push_back(sal.sample(f.x, f.y));
  Rng rng(hash_seed(cfg.rng_seed, "auc-negatives"));
  double wins = 0.0;
  for (int i = 0; i < cfg.auc_negatives; ++i) {
    const double nx = rng.uniform(0.0, sal.frame.width);
    const double ny = rng.uniform(0.0, sal.frame.height);
    const double neg = sal.sample(nx, ny);
    for (const double p : pos) {
      if (p > neg) wins += 1.0;
      else if (p == neg) wins += 0.5;
    }
  }
  return wins / (static_cast<double>(pos.size()) * cfg.auc_negatives);
}

RawMetrics raw_metrics(const Scanpath& model, const Scanpath& human,
                       const DensityGrid& human_density, const MetricConfig& cfg) {
  RawMetrics rm;
  rm.dtw = dtw(model, human);
  rm.scanmatch = scanmatch(model, human, cfg);
  rm.nss = nss(human_density, model.fixations);
  rm.auc = auc(human_density, model.fixations, cfg);
  return rm;
}

}  // namespace metrics
}  // namespace scanpath
