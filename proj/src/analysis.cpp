#include "scanpath/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "scanpath/gcs.hpp"
#include "scanpath/io_util.hpp"
#include "scanpath/rng.hpp"

namespace scanpath {
namespace analysis {

namespace {

std::vector<std::size_t> sorted_order(const std::vector<LabeledImage>& items) {
  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].image_id < items[b].image_id;
  });
  return order;
}

Scanpath policy_path(const policies::PolicyKind& kind, const ReferenceFrame& frame, int steps,
                     const Scanpath& predicted, std::uint64_t episode_seed, int fovea_size) {
  using V = policies::PolicyKind::Variant;
  switch (kind.variant) {
    case V::center_fixed:
      return policies::center_fixed(frame, steps);
    case V::corner_fixed:
      return policies::corner_fixed(frame, steps, kind.corner, fovea_size / 2.0);
    case V::random_uniform:
      return policies::random_uniform(frame, steps, hash_seed(episode_seed, "random"));
    case V::shuffled:
      return policies::shuffled(predicted, hash_seed(episode_seed, "shuffle"));
    case V::predicted:
      break;
  }
  throw std::logic_error("policy_path: predicted has no override");
}

}  // namespace

PerturbationReport run_perturbation_study(const std::vector<LabeledImage>& items,
                                          const eva::WeightBundle& w,
                                          const eva::GlimpseConfig& gcfg,
                                          const eva::EvaConfig& ecfg,
                                          const std::vector<policies::PolicyKind>& kinds,
                                          std::uint64_t seed, int jobs) {
  if (items.empty()) throw std::invalid_argument("perturbation study: no images");
  const auto order = sorted_order(items);
  const std::size_t n = items.size();

  // one row of outcomes per (policy, image), filled independently per image
  std::vector<std::vector<ImageOutcome>> outcomes(kinds.size(),
                                                  std::vector<ImageOutcome>(n));
  parallel_for(n, jobs, [&](std::size_t rank) {
    const LabeledImage& item = items[order[rank]];
    const std::uint64_t episode_seed = hash_seed(seed, "episode/" + item.image_id);
    const ReferenceFrame frame{item.image.width, item.image.height};
    const eva::RolloutTrace predicted =
        eva::rollout(item.image, w, gcfg, ecfg, episode_seed, item.label, nullptr, nullptr,
                     item.image_id, "predicted");
    const Scanpath predicted_path = predicted.scanpath();
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      int pred;
      if (kinds[k].variant == policies::PolicyKind::Variant::predicted) {
        pred = predicted.predicted;
      } else {
        const Scanpath ov = policy_path(kinds[k], frame, gcfg.steps, predicted_path,
                                        episode_seed, gcfg.fovea_size);
        const eva::RolloutTrace trace =
            eva::rollout(item.image, w, gcfg, ecfg, episode_seed, item.label, &ov, nullptr,
                         item.image_id, kinds[k].name());
        pred = trace.predicted;
      }
      outcomes[k][rank] = ImageOutcome{item.image_id, pred, pred == item.label};
    }
  });

  PerturbationReport report;
  double predicted_acc = 0.0;
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    PolicyRow row;
    row.policy = kinds[k].name();
    double correct = 0.0;
    for (const auto& oc : outcomes[k]) correct += oc.correct ? 1.0 : 0.0;
    row.accuracy = correct / static_cast<double>(n);
    row.outcomes = std::move(outcomes[k]);
    if (kinds[k].variant == policies::PolicyKind::Variant::predicted)
      predicted_acc = row.accuracy;
    report.rows.push_back(std::move(row));
  }
  for (auto& row : report.rows) row.delta = row.accuracy - predicted_acc;
  return report;
}

PcaResult pca_trajectories(const std::vector<std::vector<Eigen::VectorXd>>& states,
                           const std::vector<int>& labels) {
  if (states.size() < 2) throw std::invalid_argument("pca: need at least 2 samples");
  if (states.size() != labels.size())
    throw std::invalid_argument("pca: one label per sample required");
  const std::size_t steps = states[0].size();
  if (steps == 0) throw std::invalid_argument("pca: empty state sequence");
  const Eigen::Index dim = states[0][0].size();
  if (dim < 2) throw std::invalid_argument("pca: need at least 2 dimensions");
  for (const auto& seq : states) {
    if (seq.size() != steps) throw std::invalid_argument("pca: ragged step counts");
    for (const auto& v : seq)
      if (v.size() != dim) throw std::invalid_argument("pca: ragged state dimensions");
  }

  const double count = static_cast<double>(states.size() * steps);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
  for (const auto& seq : states)
    for (const auto& v : seq) mean += v;
  mean /= count;

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& seq : states)
    for (const auto& v : seq) {
      const Eigen::VectorXd d = v - mean;
      cov.noalias() += d * d.transpose();
    }
  cov /= count;  // population covariance

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca: eigensolver failed");
  const Eigen::VectorXd evals = solver.eigenvalues();  // ascending
  if (!(evals(dim - 1) > 0.0)) throw std::invalid_argument("pca: rank-0 data");

  auto fix_sign = [](Eigen::VectorXd v) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i)
      if (std::abs(v(i)) > std::abs(v(best))) best = i;
    if (v(best) < 0.0) v = -v;
    return v;
  };

  PcaResult res;
  res.pc1 = fix_sign(solver.eigenvectors().col(dim - 1));
  res.pc2 = fix_sign(solver.eigenvectors().col(dim - 2));
  res.ev1 = evals(dim - 1);
  res.ev2 = evals(dim - 2);

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [label, members] : by_class) {
    for (std::size_t s = 0; s < steps; ++s) {
      Eigen::VectorXd m = Eigen::VectorXd::Zero(dim);
      for (const std::size_t i : members) m += states[i][s];
      m /= static_cast<double>(members.size());
      const Eigen::VectorXd d = m - mean;
      res.projected.push_back(
          {label, static_cast<int>(s + 1), d.dot(res.pc1), d.dot(res.pc2)});
    }
  }
  return res;
}

InitSweepReport init_sweep(const std::vector<LabeledImage>& items, const eva::WeightBundle& w,
                           const eva::GlimpseConfig& gcfg, const eva::EvaConfig& ecfg,
                           const std::vector<InitCondition>& conditions, std::uint64_t seed,
                           int jobs) {
  if (items.empty()) throw std::invalid_argument("init_sweep: no images");
  if (conditions.empty()) throw std::invalid_argument("init_sweep: no conditions");
  const auto order = sorted_order(items);
  const std::size_t n = items.size();

  InitSweepReport report;
  for (const auto& cond : conditions) {
    std::vector<double> amplitude(n, 0.0), coverage(n, 0.0);
    std::vector<int> correct(n, 0);
    parallel_for(n, jobs, [&](std::size_t rank) {
      const LabeledImage& item = items[order[rank]];
      // seeds depend only on (seed, image), so conditions see paired noise
      const std::uint64_t episode_seed = hash_seed(seed, "episode/" + item.image_id);
      eva::RolloutInit init;
      init.loc0_px = cond.loc0_px;
      init.sigma1 = cond.sigma1;
      init.state_fill = cond.state_fill;
      const eva::RolloutTrace trace =
          eva::rollout(item.image, w, gcfg, ecfg, episode_seed, item.label, nullptr, &init,
                       item.image_id, "predicted");
      if (trace.steps.size() >= 2)
        amplitude[rank] = std::hypot(trace.steps[1].x - trace.steps[0].x,
                                     trace.steps[1].y - trace.steps[0].y);
      const ReferenceFrame frame{item.image.width, item.image.height};
      coverage[rank] =
          gcs::movement_stats(trace.scanpath(), frame, 7, 7, 8.0).spatial_coverage;
      correct[rank] = trace.predicted == item.label ? 1 : 0;
    });
    InitSweepRow row;
    row.name = cond.name;
    for (std::size_t i = 0; i < n; ++i) {
      row.first_step_amplitude += amplitude[i];
      row.spatial_coverage += coverage[i];
      row.accuracy += correct[i];
    }
    row.first_step_amplitude /= static_cast<double>(n);
    row.spatial_coverage /= static_cast<double>(n);
    row.accuracy /= static_cast<double>(n);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace analysis
}  // namespace scanpath
