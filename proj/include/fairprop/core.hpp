// Core domain types for regularized property elicitation on finite outcome
// spaces: outcome distributions, populations of grouped agents, treatment
// vectors, and the mixed objective (1-lambda)*base-loss + lambda*regularizer.
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairprop {

// Absolute tolerance for argmin tie detection. Objectives are short sums of
// double-precision products, so true ties land well inside this band while
// distinct vertices of the piecewise-linear landscape stay far outside it.
inline constexpr double kTieTolerance = 1e-9;

// Tolerance for validating that distribution entries sum to one.
inline constexpr double kDistributionTolerance = 1e-12;

// Floor applied to ratio denominators in the soft (differentiable)
// regularizer surrogates.
inline constexpr double kDenominatorFloor = 1e-6;

// ----------------------------------------------------------------- errors ---

// Unknown identifiers, out-of-range weights, malformed configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A regularizer was asked to operate on a group structure it does not
// support (e.g. the two-group rate-difference regularizers on != 2 groups).
struct GroupStructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The population makes a formula undefined (e.g. all-zero outcome mass where
// a ratio needs positive total probability).
struct DegeneratePopulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force enumeration of T^m would exceed the configured cap.
struct EnumerationLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File/stream failures; messages always carry the offending path.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed tabular data (missing columns, non-numeric cells, ...).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ identifiers ---

enum class LossKind { ZeroOne, Squared };

enum class RegularizerKind { None, Dp, Fpr, Fnr, Eeo, Cal, Bgl };

// Lowercase wire names: "zero-one" | "squared".
std::string to_string(LossKind loss);
LossKind parse_loss(const std::string& name);

// Lowercase wire names: none|dp|fpr|fnr|eeo|cal|bgl.
std::string to_string(RegularizerKind reg);
RegularizerKind parse_regularizer(const std::string& name);

// ------------------------------------------------------------------ types ---

// A point in the simplex over a finite outcome set Y = {0, .., k-1}.
class OutcomeDistribution {
 public:
  // Validates entries (nonnegative, sum within kDistributionTolerance of 1).
  // With normalize=true, rescales a nonnegative vector with positive sum
  // instead of rejecting it; nothing is ever normalized silently.
  explicit OutcomeDistribution(Eigen::VectorXd probs, bool normalize = false);

  // Binary convenience: the distribution (1-p1, p1) on Y = {0, 1}.
  static OutcomeDistribution binary(double p1);

  const Eigen::VectorXd& probs() const { return probs_; }
  int num_outcomes() const { return static_cast<int>(probs_.size()); }

  // Probability of outcome 1; defined only for binary Y.
  double p1() const;

 private:
  Eigen::VectorXd probs_;
};

// One agent: a sensitive-group label and an outcome distribution.
struct Agent {
  int group = 0;
  OutcomeDistribution dist;
};

// An ordered list of m agents over a declared group set {0, .., G-1}.
// Immutable after construction; every declared group must be nonempty and
// all agents must share one outcome space.
class Population {
 public:
  Population(std::vector<Agent> agents, int num_groups);

  // Binary shorthand: agent i has distribution binary(p1s[i]) and group
  // groups[i]; the declared group count is inferred as max(groups)+1 unless
  // given explicitly.
  static Population binary(const std::vector<double>& p1s,
                           const std::vector<int>& groups,
                           int num_groups = -1);

  int size() const { return static_cast<int>(agents_.size()); }
  int num_groups() const { return num_groups_; }
  int num_outcomes() const { return agents_.front().dist.num_outcomes(); }

  int group(int i) const { return agents_[i].group; }
  const OutcomeDistribution& dist(int i) const { return agents_[i].dist; }
  double p1(int i) const { return agents_[i].dist.p1(); }

  // Number of agents in group g (n_g, always >= 1).
  int group_size(int g) const { return group_sizes_[g]; }
  const std::vector<int>& members_of(int g) const { return members_[g]; }

 private:
  std::vector<Agent> agents_;
  int num_groups_ = 0;
  std::vector<int> group_sizes_;
  std::vector<std::vector<int>> members_;
};

// One treatment per agent, each drawn from T = {0, .., num_treatments-1}.
struct TreatmentVector {
  Eigen::VectorXi t;
  int num_treatments = 2;

  int size() const { return static_cast<int>(t.size()); }
};

// Rank of t in the lexicographic enumeration of T^m with agent 0 most
// significant; the inverse of decode_treatments.
std::uint64_t encode_treatments(const TreatmentVector& tv);
TreatmentVector decode_treatments(std::uint64_t code, int m,
                                  int num_treatments = 2);

// Digit string "t0 t1 .. t{m-1}" without separators, e.g. "10" for t=(1,0).
std::string treatment_label(const TreatmentVector& tv);
TreatmentVector parse_treatment_label(const std::string& label,
                                      int num_treatments = 2);

// The mixed objective: base loss id, regularizer id, and weight lambda.
struct RegularizedObjective {
  LossKind loss = LossKind::ZeroOne;
  RegularizerKind regularizer = RegularizerKind::None;
  double lambda = 0.0;
};

// Throws ConfigError unless lambda is in [0,1].
void validate(const RegularizedObjective& obj);

// ------------------------------------------------------------- operations ---

// E_{Y~p}[L(t, Y)] for a single agent. Zero-one on binary Y: t=1 -> 1-p1,
// t=0 -> p1. Squared: sum_y p_y * (t - y)^2.
double expected_loss(LossKind loss, int t, const OutcomeDistribution& p);

// Mean expected base loss over the population, (1/m) sum_i L(t_i; p_i).
double mean_expected_loss(LossKind loss, const TreatmentVector& t,
                          const Population& pop);

// (1-lambda) * mean base loss + lambda * R(t; s; p). With regularizer none
// the R term is identically zero. When lenient is true, degenerate
// populations yield R = 0 instead of an error (see regularizers).
double objective_value(const RegularizedObjective& obj,
                       const TreatmentVector& t, const Population& pop,
                       bool lenient = false);

}  // namespace fairprop
