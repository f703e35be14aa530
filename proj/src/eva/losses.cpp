#include "scanpath/eva/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace scanpath {
namespace eva {

double self_error(const Eigen::VectorXd& y_prev, const Eigen::VectorXd& y_cur) {
  if (y_prev.size() != y_cur.size())
    throw std::invalid_argument("self_error: distribution length mismatch");
  return 0.5 * (y_cur - y_prev).cwiseAbs().sum();
}

double label_error(const Eigen::VectorXd& y, int label) {
  if (label < 0 || label >= y.size())
    throw std::invalid_argument("label_error: label out of range");
  return 1.0 - y(label);
}

double reinforce_loss(const RolloutTrace& trace, int label) {
  if (trace.steps.empty()) throw std::invalid_argument("reinforce_loss: empty trace");
  const double reward = trace.predicted == label ? 1.0 : 0.0;
  double loss = 0.0;
  for (std::size_t t = 0; t + 1 < trace.steps.size(); ++t) {
    const auto& s = trace.steps[t];
    if (!s.log_density)
      throw std::invalid_argument("reinforce_loss: step " + std::to_string(t + 1) +
                                  " has no recorded log-density");
    loss -= (reward - s.baseline) * (*s.log_density);
  }
  return loss;
}

double ce_loss(const RolloutTrace& trace, int label, bool* floored) {
  if (trace.steps.empty()) throw std::invalid_argument("ce_loss: empty trace");
  if (floored) *floored = false;
  double loss = 0.0;
  for (const auto& s : trace.steps) {
    if (label < 0 || label >= s.probs.size())
      throw std::invalid_argument("ce_loss: label out of range");
    double p = s.probs(label);
    if (p < 1e-12) {
      p = 1e-12;
      if (floored) *floored = true;
    }
    loss -= std::log(p);
  }
  return loss;
}

namespace {

// x * log(x + eps) with the x -> 0 limit made exact.
double ent_term(double x, double eps) {
  return x == 0.0 ? 0.0 : -x * std::log(x + eps);
}

}  // namespace

GateRegularizers gate_regularizers(const RolloutTrace& trace, const RegLambdas& lambdas,
                                   double eps) {
  if (trace.steps.empty()) throw std::invalid_argument("gate_regularizers: empty trace");
  GateRegularizers reg;
  double cost_acc = 0.0, l1_acc = 0.0, ent_acc = 0.0;
  for (const auto& s : trace.steps) {
    cost_acc += s.beta_bar_b.mean();
    l1_acc += s.beta_bar_b.cwiseAbs().sum();
    double ent = 0.0;
    for (Eigen::Index i = 0; i < s.beta_bar.size(); ++i)
      ent += ent_term(s.beta_bar(i), eps) + ent_term(s.beta_bar_b(i), eps);
    ent_acc += ent / static_cast<double>(s.beta_bar.size());
  }
  const double n = static_cast<double>(trace.steps.size());
  reg.cost = lambdas.cost * cost_acc / n;
  reg.l1 = lambdas.l1 * l1_acc / n;
  reg.entropy = lambdas.entropy * ent_acc / n;
  reg.total = reg.cost + reg.l1 + reg.entropy;
  return reg;
}

double total_objective(const RolloutTrace& trace, int label, const RegLambdas& lambdas,
                       double eps) {
  return ce_loss(trace, label) + reinforce_loss(trace, label) +
         gate_regularizers(trace, lambdas, eps).total;
}

}  // namespace eva
}  // namespace scanpath
