#include "fairprop/trainer.hpp"

#include "fairprop/io_util.hpp"
#include "fairprop/parallel.hpp"
#include "fairprop/rng.hpp"

#include <cmath>
#include <sstream>

namespace fairprop {
namespace {

// Offset between the dataset seed stream and the init seed stream so the
// two never alias for neighboring trials.
constexpr std::uint64_t kInitSeedOffset = 1000003;

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

Eigen::VectorXd sigmoid(const Eigen::VectorXd& u) {
  return (1.0 + (-u.array()).exp()).inverse().matrix();
}

void require_trainable(const TabularDataset& dataset) {
  if (dataset.num_groups() != 2) {
    throw GroupStructureError(
        "training requires exactly two groups, got " +
        std::to_string(dataset.num_groups()));
  }
  if (dataset.size() < 2) {
    throw DataError("training requires at least two samples");
  }
}

}  // namespace

double training_loss_and_grad(const LinearModel& model,
                              const TabularDataset& dataset, double lambda,
                              RegularizerKind reg, Eigen::VectorXd& grad_w,
                              double& grad_b) {
  require_trainable(dataset);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0,1]");
  }
  if (reg == RegularizerKind::None) {
    lambda = 0.0;
  }
  const Eigen::Index n = dataset.labels.size();
  const Eigen::VectorXd u =
      (dataset.features * model.weights).array() + model.bias;
  const Eigen::VectorXd s = sigmoid(u);

  double bce = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    bce += softplus(u[i]) - dataset.labels[i] * u[i];
  }
  bce /= static_cast<double>(n);

  // d(loss)/du per sample; the BCE part is (s - y)/n.
  Eigen::VectorXd du =
      (1.0 - lambda) / static_cast<double>(n) * (s - dataset.labels);

  double reg_value = 0.0;
  if (lambda > 0.0) {
    Eigen::VectorXd dreg_ds;
    reg_value = soft_surrogate_grad(reg, s, dataset.labels, dataset.groups,
                                    dataset.num_groups(), dreg_ds);
    // Chain through the sigmoid: ds/du = s (1 - s).
    du += lambda *
          (dreg_ds.array() * s.array() * (1.0 - s.array())).matrix();
  }

  grad_w = dataset.features.transpose() * du;
  grad_b = du.sum();
  return (1.0 - lambda) * bce + lambda * reg_value;
}

LinearModel train(const TabularDataset& dataset, const TrainConfig& config) {
  require_trainable(dataset);
  if (!(config.learning_rate > 0.0)) {
    throw ConfigError("learning rate must be positive");
  }
  if (config.epochs < 1) {
    throw ConfigError("epochs must be positive");
  }
  if (!config.full_batch) {
    throw ConfigError("only full-batch training is supported");
  }

  Rng rng(config.seed + kInitSeedOffset);
  LinearModel model;
  model.weights.resize(dataset.num_features());
  for (Eigen::Index c = 0; c < model.weights.size(); ++c) {
    model.weights[c] = rng.uniform(-0.01, 0.01);
  }
  model.bias = rng.uniform(-0.01, 0.01);

  Eigen::VectorXd grad_w;
  double grad_b = 0.0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double loss = training_loss_and_grad(
        model, dataset, config.lambda, config.regularizer, grad_w, grad_b);
    if (!std::isfinite(loss) || !grad_w.allFinite() ||
        !std::isfinite(grad_b)) {
      std::ostringstream msg;
      msg << "training diverged at epoch " << epoch << ": loss=" << loss
          << " |grad_w|=" << grad_w.norm() << " grad_b=" << grad_b;
      throw std::runtime_error(msg.str());
    }
    model.weights -= config.learning_rate * grad_w;
    model.bias -= config.learning_rate * grad_b;
  }
  if (!model.weights.allFinite() || !std::isfinite(model.bias)) {
    throw std::runtime_error("training produced non-finite weights");
  }
  return model;
}

EvalReport evaluate(const LinearModel& model, const TabularDataset& dataset) {
  require_trainable(dataset);
  const Eigen::VectorXd u =
      (dataset.features * model.weights).array() + model.bias;
  // sigma(u) >= 0.5 exactly when u >= 0.
  const Eigen::VectorXd preds =
      (u.array() >= 0.0).cast<double>().matrix();

  EvalReport report;
  report.accuracy =
      (preds.array() == dataset.labels.array()).cast<double>().mean();
  // Integer predictions make the soft surrogate coincide exactly with the
  // hard regularizer formulas, labels standing in for the p-slots.
  const auto violation = [&](RegularizerKind reg) {
    return soft_surrogate(reg, preds, dataset.labels, dataset.groups,
                          dataset.num_groups());
  };
  report.dp_violation = violation(RegularizerKind::Dp);
  report.fpr_violation = violation(RegularizerKind::Fpr);
  report.fnr_violation = violation(RegularizerKind::Fnr);
  report.eeo_violation = violation(RegularizerKind::Eeo);
  return report;
}

std::vector<RegularizerKind> experiment_regularizers() {
  return {RegularizerKind::None, RegularizerKind::Dp, RegularizerKind::Fpr,
          RegularizerKind::Fnr, RegularizerKind::Eeo};
}

std::vector<ResultRow> run_pb_sweep(const SyntheticSpec& spec,
                                    const std::vector<double>& pb_grid,
                                    const TrainConfig& config,
                                    const std::vector<RegularizerKind>& regs,
                                    int jobs) {
  const std::int64_t cells = static_cast<std::int64_t>(pb_grid.size()) *
                             static_cast<std::int64_t>(regs.size()) *
                             config.trials;
  std::vector<ResultRow> rows(static_cast<std::size_t>(cells));
  parallel_for(cells, jobs, [&](std::int64_t idx) {
    const int trial = static_cast<int>(idx % config.trials);
    const std::int64_t rest = idx / config.trials;
    const std::size_t reg_idx =
        static_cast<std::size_t>(rest % static_cast<std::int64_t>(regs.size()));
    const std::size_t pb_idx =
        static_cast<std::size_t>(rest / static_cast<std::int64_t>(regs.size()));

    SyntheticSpec trial_spec = spec;
    trial_spec.p_b = pb_grid[pb_idx];
    trial_spec.seed = spec.seed + static_cast<std::uint64_t>(trial);
    const TabularDataset dataset = generate_synthetic(trial_spec);

    TrainConfig trial_config = config;
    trial_config.regularizer = regs[reg_idx];
    trial_config.seed = config.seed + static_cast<std::uint64_t>(trial);
    const LinearModel model = train(dataset, trial_config);

    ResultRow& row = rows[static_cast<std::size_t>(idx)];
    row.regularizer = regs[reg_idx];
    row.lambda = regs[reg_idx] == RegularizerKind::None ? 0.0 : config.lambda;
    row.grid_value = pb_grid[pb_idx];
    row.trial = trial;
    row.metrics = evaluate(model, dataset);
  });
  return rows;
}

std::vector<ResultRow> run_lambda_sweep(
    const TabularDataset& dataset, const std::vector<double>& lambda_grid,
    const TrainConfig& config, const std::vector<RegularizerKind>& regs,
    int jobs) {
  require_trainable(dataset);
  const std::int64_t cells = static_cast<std::int64_t>(lambda_grid.size()) *
                             static_cast<std::int64_t>(regs.size()) *
                             config.trials;
  std::vector<ResultRow> rows(static_cast<std::size_t>(cells));
  parallel_for(cells, jobs, [&](std::int64_t idx) {
    const int trial = static_cast<int>(idx % config.trials);
    const std::int64_t rest = idx / config.trials;
    const std::size_t reg_idx =
        static_cast<std::size_t>(rest % static_cast<std::int64_t>(regs.size()));
    const std::size_t lam_idx =
        static_cast<std::size_t>(rest / static_cast<std::int64_t>(regs.size()));

    TrainConfig trial_config = config;
    trial_config.lambda = lambda_grid[lam_idx];
    trial_config.regularizer = regs[reg_idx];
    trial_config.seed = config.seed + static_cast<std::uint64_t>(trial);
    const LinearModel model = train(dataset, trial_config);

    ResultRow& row = rows[static_cast<std::size_t>(idx)];
    row.regularizer = regs[reg_idx];
    row.lambda = regs[reg_idx] == RegularizerKind::None
                     ? 0.0
                     : lambda_grid[lam_idx];
    row.grid_value = lambda_grid[lam_idx];
    row.trial = trial;
    row.metrics = evaluate(model, dataset);
  });
  return rows;
}

void write_results_csv(const std::vector<ResultRow>& rows,
                       const std::string& path) {
  std::ofstream out = open_output(path);
  out << "regularizer,lambda,grid_value,trial,accuracy,dp,fpr,fnr,eeo\n";
  for (const ResultRow& row : rows) {
    out << to_string(row.regularizer) << ',' << format_double(row.lambda)
        << ',' << format_double(row.grid_value) << ',' << row.trial << ','
        << format_double(row.metrics.accuracy) << ','
        << format_double(row.metrics.dp_violation) << ','
        << format_double(row.metrics.fpr_violation) << ','
        << format_double(row.metrics.fnr_violation) << ','
        << format_double(row.metrics.eeo_violation) << '\n';
  }
  if (!out) {
    throw IoError("failed while writing: " + path);
  }
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) {
    throw ConfigError("mean of an empty sample");
  }
  double total = 0.0;
  for (const double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) {
    throw ConfigError("standard error needs at least two samples");
  }
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (const double x : xs) ss += (x - mu) * (x - mu);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace fairprop
