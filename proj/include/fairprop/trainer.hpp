// Gradient-descent training of a linear (logistic) classifier on the mixed
// objective (1-lambda)*BCE + lambda*soft_surrogate, with hard-threshold
// fairness metrics at evaluation and the sweep harness that produces the
// experiment result tables.
#pragma once

#include "fairprop/core.hpp"
#include "fairprop/data.hpp"
#include "fairprop/regularizers.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace fairprop {

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
};

struct TrainConfig {
  double lambda = 0.0;
  RegularizerKind regularizer = RegularizerKind::None;
  double learning_rate = 0.001;
  int epochs = 1500;
  int trials = 10;
  bool full_batch = true;
  std::uint64_t seed = 0;
};

// Metrics of hard predictions at threshold 0.5. The violation fields are
// the hard regularizer formulas with observed labels in the p-slots.
struct EvalReport {
  double accuracy = 0.0;
  double dp_violation = 0.0;
  double fpr_violation = 0.0;
  double fnr_violation = 0.0;
  double eeo_violation = 0.0;
};

// Mixed training loss at the given parameters plus its analytic gradient;
// exposed separately so finite-difference checks can probe it. With
// regularizer none, lambda is treated as 0 (the two are equivalent by
// definition and plain BCE keeps the unregularized baseline comparable).
double training_loss_and_grad(const LinearModel& model,
                              const TabularDataset& dataset, double lambda,
                              RegularizerKind reg, Eigen::VectorXd& grad_w,
                              double& grad_b);

// Full-batch gradient descent for config.epochs from a small random init
// seeded by config.seed. Aborts with a diagnostic if the loss turns
// non-finite. Deterministic: same seed, same dataset, same weights.
LinearModel train(const TabularDataset& dataset, const TrainConfig& config);

EvalReport evaluate(const LinearModel& model, const TabularDataset& dataset);

// One sweep cell: which regularizer and lambda produced it, the sweep
// coordinate (p_b or lambda), the trial index, and the trial's metrics.
struct ResultRow {
  RegularizerKind regularizer = RegularizerKind::None;
  double lambda = 0.0;
  double grid_value = 0.0;
  int trial = 0;
  EvalReport metrics;
};

// The regularizers compared in the experiment protocols.
std::vector<RegularizerKind> experiment_regularizers();

// Fresh synthetic dataset per trial (seeded spec.seed + trial), one
// training per (p_b, regularizer, trial). grid_value = p_b.
std::vector<ResultRow> run_pb_sweep(const SyntheticSpec& spec,
                                    const std::vector<double>& pb_grid,
                                    const TrainConfig& config,
                                    const std::vector<RegularizerKind>& regs,
                                    int jobs = 1);

// Fixed dataset, one training per (lambda, regularizer, trial) with
// per-trial inits. grid_value = lambda.
std::vector<ResultRow> run_lambda_sweep(
    const TabularDataset& dataset, const std::vector<double>& lambda_grid,
    const TrainConfig& config, const std::vector<RegularizerKind>& regs,
    int jobs = 1);

// CSV with header regularizer,lambda,grid_value,trial,accuracy,dp,fpr,fnr,eeo.
void write_results_csv(const std::vector<ResultRow>& rows,
                       const std::string& path);

// Mean and standard error of the mean (sample std / sqrt(n)).
double mean_of(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);

}  // namespace fairprop
