#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scanpath/core.hpp"
#include "scanpath/eva/rollout.hpp"
#include "scanpath/policies.hpp"

namespace scanpath {
namespace analysis {

struct LabeledImage {
  std::string image_id;
  ImageFrame image;
  int label = 0;
};

struct ImageOutcome {
  std::string image_id;
  int predicted = 0;
  bool correct = false;
};

struct PolicyRow {
  std::string policy;
  double accuracy = 0.0;
  double delta = 0.0;  // accuracy - predicted-policy accuracy
  std::vector<ImageOutcome> outcomes;
};

struct PerturbationReport {
  std::vector<PolicyRow> rows;
};

// Runs every image under the predicted policy, then replays it under each
// override policy; `shuffled` permutes the image's own predicted fixations.
// Weights are read-only; per-image seeds derive from (seed, image_id), so
// the thread count cannot change any result.
PerturbationReport run_perturbation_study(const std::vector<LabeledImage>& items,
                                          const eva::WeightBundle& w,
                                          const eva::GlimpseConfig& gcfg,
                                          const eva::EvaConfig& ecfg,
                                          const std::vector<policies::PolicyKind>& kinds,
                                          std::uint64_t seed, int jobs = 1);

struct PcaResult {
  Eigen::VectorXd pc1, pc2;          // orthonormal components, fixed sign
  double ev1 = 0.0, ev2 = 0.0;       // explained variance, non-increasing
  struct Point {
    int label = 0;
    int step = 0;
    double p1 = 0.0, p2 = 0.0;
  };
  std::vector<Point> projected;      // class-wise per-step mean trajectories
};

// Top-2 PCA of pooled per-step hidden states (population covariance), then
// projection of class-wise per-step means. Each component's sign is fixed
// so its largest-magnitude coordinate is positive (first index on ties).
PcaResult pca_trajectories(const std::vector<std::vector<Eigen::VectorXd>>& states,
                           const std::vector<int>& labels);

struct InitCondition {
  std::string name;
  std::optional<std::pair<double, double>> loc0_px;  // default: frame center
  std::optional<double> sigma1;                      // default: sigma_max
  double state_fill = 0.0;
};

struct InitSweepRow {
  std::string name;
  double first_step_amplitude = 0.0;  // mean distance from step-1 to step-2 fixation, px
  double spatial_coverage = 0.0;      // mean over images, 7x7 grid
  double accuracy = 0.0;
};

struct InitSweepReport {
  std::vector<InitSweepRow> rows;
};

// Rollouts per condition with identical per-image seeds, so conditions are
// compared under paired noise. Weights are fixed across conditions.
InitSweepReport init_sweep(const std::vector<LabeledImage>& items, const eva::WeightBundle& w,
                           const eva::GlimpseConfig& gcfg, const eva::EvaConfig& ecfg,
                           const std::vector<InitCondition>& conditions, std::uint64_t seed,
                           int jobs = 1);

}  // namespace analysis
}  // namespace scanpath
