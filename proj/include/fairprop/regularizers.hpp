// The six fairness regularizers R(t; s; p) — demographic parity, false
// positive/negative rate differences, expected equality of opportunity,
// calibration, and bounded group loss — plus the soft (differentiable)
// surrogates the trainer descends on. Hard formulas follow the display
// equations verbatim, including their asymmetric denominators.
#pragma once

#include "fairprop/core.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fairprop {

// Per-group tallies shared by the rate-difference regularizers.
struct GroupAggregate {
  int group = 0;
  int count = 0;          // n_g, members of the group
  double sum_treat = 0.0; // sum of treatments over the group
  double sum_prob = 0.0;  // sum of p1 over the group
  int positives = 0;      // |{i : s_i = g, t_i = 1}|
};

// Tallies for every declared group, in group-id order.
std::vector<GroupAggregate> group_aggregates(const TreatmentVector& t,
                                             const Population& pop);

// |rate_a - rate_b| where rate_g = (1/n_g) sum_{s=g} t_i. Independent of p.
// Requires exactly two groups.
double dp(const TreatmentVector& t, const Population& pop);

// |FPR_a - FPR_b| with FPR_g the mean of (1 - p1) over members of g treated
// 1; a group with no positive treatments contributes FPR_g = 0.
double fpr(const TreatmentVector& t, const Population& pop);

// |(1/n_a) sum_{s=a, t=0} p1 - (1/n_b) sum_{s=b, t=0} p1|. Denominators are
// the full group sizes n_g, not the counts of negative treatments.
double fnr(const TreatmentVector& t, const Population& pop);

// |EEO_a - EEO_b| with EEO_g = (mean of p1 over members of g treated 1)
// * (sum_i t_i) / (sum_i p1_i); a group with no positive treatments
// contributes EEO_g = 0. Values may exceed 1. Requires sum_i p1_i > 0;
// in lenient mode a zero-mass population yields 0 and sets *degenerate.
double eeo(const TreatmentVector& t, const Population& pop,
           bool lenient = false, bool* degenerate = nullptr);

// sum_g (1/n_g) sum_{s=g} |t_i - p1_i|. Any number of groups.
double cal(const TreatmentVector& t, const Population& pop);

// sum_g (1/n_g) sum_{s=g} expected_loss(loss, t_i, p_i). Any group count.
double bgl(const TreatmentVector& t, const Population& pop, LossKind loss);

// Dispatch by id; loss feeds bgl only. RegularizerKind::None is the
// constant-zero regularizer.
double regularizer_value(RegularizerKind reg, const TreatmentVector& t,
                         const Population& pop, LossKind loss,
                         bool lenient = false);

// ---------------------------------------------------------- soft variants ---

// Differentiable relaxation: the hard formula with t_i replaced by
// scores[i] in [0,1] and p1_i replaced by labels[i] in {0,1}. Ratio
// denominators are clamped below at kDenominatorFloor. With integer scores
// the value equals the hard regularizer exactly.
double soft_surrogate(RegularizerKind reg, const Eigen::VectorXd& scores,
                      const Eigen::VectorXd& labels,
                      const std::vector<int>& groups, int num_groups);

// Value plus the analytic gradient with respect to scores. Absolute values
// use the sign subgradient with subgradient 0 at 0.
double soft_surrogate_grad(RegularizerKind reg, const Eigen::VectorXd& scores,
                           const Eigen::VectorXd& labels,
                           const std::vector<int>& groups, int num_groups,
                           Eigen::VectorXd& grad);

}  // namespace fairprop
