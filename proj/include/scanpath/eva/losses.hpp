#pragma once

#include <Eigen/Dense>

#include "scanpath/eva/rollout.hpp"

namespace scanpath {
namespace eva {

// Total-variation distance between consecutive prediction vectors, in [0,1].
double self_error(const Eigen::VectorXd& y_prev, const Eigen::VectorXd& y_cur);

// 1 - y[label].
double label_error(const Eigen::VectorXd& y, int label);

// -sum_t (R - b_t) * log pi(l_{t+1} | h1_t), with R = 1 iff the final
// prediction matches the label. Scalar diagnostic; requires the trace's
// recorded log-densities.
double reinforce_loss(const RolloutTrace& trace, int label);

// -sum_t log y_t[label], probabilities floored at 1e-12. `floored` reports
// whether the floor fired.
double ce_loss(const RolloutTrace& trace, int label, bool* floored = nullptr);

struct RegLambdas {
  double cost = 0.1;
  double l1 = 0.01;
  double entropy = 0.05;
};

struct GateRegularizers {
  double cost = 0.0;
  double l1 = 0.0;
  double entropy = 0.0;
  double total = 0.0;
};

// Scalar gate penalties, each averaged over steps: mean bottom-up gate
// level, its L1 norm, and the gate entropy -x*log(x+eps) summed over the
// beta_bar and beta_bar_b branches (exact 0 at x = 0).
GateRegularizers gate_regularizers(const RolloutTrace& trace, const RegLambdas& lambdas,
                                   double eps);

double total_objective(const RolloutTrace& trace, int label, const RegLambdas& lambdas,
                       double eps);

}  // namespace eva
}  // namespace scanpath
