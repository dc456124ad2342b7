// Dataset construction: the synthetic two-group generator used by the
// training sweeps, a CSV loader with sensitive-group derivation, and the
// "average member" population that places a dataset on the level-set
// diagrams.
#pragma once

#include "fairprop/core.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace fairprop {

// Two-group Bernoulli mixture: group b is drawn with probability
// group_balance, labels are Bernoulli(p_group), and features are the pair
// (own-group rate, other-group rate) followed by k_noise uniform
// distractors in [-1, 1].
struct SyntheticSpec {
  double p_a = 0.3;
  double p_b = 0.5;
  int n_samples = 2000;
  int k_noise = 3;
  std::uint64_t seed = 0;
  double group_balance = 0.5;
};

struct GroupStat {
  std::string name;
  int count = 0;
  double base_rate = 0.0;  // Pr[Y=1 | group]
  double share = 0.0;      // Pr[group]
};

struct TabularDataset {
  Eigen::MatrixXd features;  // n x d
  Eigen::VectorXd labels;    // entries in {0, 1}
  std::vector<int> groups;   // entries in [0, num_groups)
  std::vector<std::string> feature_names;
  std::vector<std::string> group_names;

  int size() const { return static_cast<int>(labels.size()); }
  int num_features() const { return static_cast<int>(features.cols()); }
  int num_groups() const { return static_cast<int>(group_names.size()); }

  // Recomputed per-group base rates and shares, in group-id order.
  std::vector<GroupStat> group_stats() const;
};

// Deterministic under spec.seed; identical specs yield identical datasets.
TabularDataset generate_synthetic(const SyntheticSpec& spec);

// How to derive the sensitive group from a CSV column: categorical values
// mapped in first-seen order, or a numeric threshold where group b is
// value < threshold (and a is the rest).
struct GroupRule {
  std::string column;
  std::optional<double> threshold;
};

// Loads a headered CSV; every column other than the label and group-source
// columns must be numeric and becomes a feature. Features are standardized
// to zero mean and unit variance (constant columns are left at 0).
TabularDataset load_csv(const std::string& path, const std::string& label_col,
                        const GroupRule& group_rule);

// Writes features (raw, as stored), label, and group-name columns; loading
// the result back reproduces labels/groups exactly and features up to the
// idempotence of standardization.
void save_dataset_csv(const TabularDataset& dataset, const std::string& path);

// The two-agent population of group-average members ((a, rate_a),
// (b, rate_b)); requires exactly two groups.
Population population_from_group_stats(const std::vector<GroupStat>& stats);

// Population CSV serialization, columns group,p1 with a header. Group
// fields may be integers or categorical names (mapped first-seen).
void save_population_csv(const Population& pop, const std::string& path);
Population load_population_csv(const std::string& path);

}  // namespace fairprop
