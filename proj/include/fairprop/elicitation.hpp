// Exact brute-force properties and regularized properties over finite
// treatment spaces, plus the equivalence / nonenforcing / containment
// checkers built on them. All argmins are global enumerations of T^m with
// tie detection at kTieTolerance; nothing here is approximate except the
// choice of sample points handed to the checkers.
#pragma once

#include "fairprop/core.hpp"
#include "fairprop/parallel.hpp"
#include "fairprop/regularizers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fairprop {

// Refuse to enumerate treatment spaces larger than this.
inline constexpr std::uint64_t kEnumerationCap = 1ull << 20;

// The argmin set of an objective over T^m at one population, with the
// attained minimum and the tie band that defines membership.
struct PropertyValue {
  // Lexicographic ranks of the minimizers, ascending (agent 0 most
  // significant); never empty.
  std::vector<std::uint64_t> minimizer_codes;
  int m = 0;
  int num_treatments = 2;
  double min_value = 0.0;
  double tie_tolerance = kTieTolerance;

  bool contains(std::uint64_t code) const {
    return std::binary_search(minimizer_codes.begin(), minimizer_codes.end(),
                              code);
  }
  bool contains(const TreatmentVector& t) const {
    return contains(encode_treatments(t));
  }
  // Decoded minimizers in enumeration order.
  std::vector<TreatmentVector> minimizers() const;
  // The lexicographically smallest minimizer.
  TreatmentVector canonical() const;
};

// One equivalence failure: a belief vector where the unregularized and
// regularized minimizer sets differ.
struct EquivalenceCounterexample {
  Eigen::VectorXd p1s;
  std::vector<std::uint64_t> gamma_codes;
  std::vector<std::uint64_t> theta_codes;
};

struct EquivalenceReport {
  bool equivalent = true;
  std::vector<EquivalenceCounterexample> counterexamples;
  std::int64_t samples_checked = 0;
};

// Outcome of a containment check: the sampled points where the asserted
// containment failed, plus how many points it even applied to.
struct ContainmentReport {
  bool holds = true;
  std::vector<Eigen::VectorXd> violations;
  std::int64_t samples_checked = 0;
  std::int64_t applicable = 0;
};

// ------------------------------------------------------------ enumeration ---

// Number of treatment vectors |T|^m; throws EnumerationLimitError above cap.
std::uint64_t enumeration_size(int m, int num_treatments,
                               std::uint64_t cap = kEnumerationCap);

// Exact argmin of fn over T^m in lexicographic order. fn receives each
// candidate TreatmentVector; ties within tie_tolerance of the minimum are
// kept. This is the workhorse behind every checker, and tests may pass
// arbitrary (even deliberately broken) objectives through it.
template <typename Fn>
PropertyValue minimize_over_treatments(int m, int num_treatments, Fn&& fn,
                                       double tie_tolerance = kTieTolerance,
                                       std::uint64_t cap = kEnumerationCap) {
  const std::uint64_t total = enumeration_size(m, num_treatments, cap);
  std::vector<double> values(total);
  TreatmentVector tv;
  tv.num_treatments = num_treatments;
  tv.t = Eigen::VectorXi::Zero(m);
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < total; ++code) {
    const double v = fn(static_cast<const TreatmentVector&>(tv));
    values[code] = v;
    best = std::min(best, v);
    // Lexicographic successor: increment the least significant digit.
    for (int i = m - 1; i >= 0; --i) {
      if (++tv.t[i] < num_treatments) break;
      tv.t[i] = 0;
    }
  }
  PropertyValue pv;
  pv.m = m;
  pv.num_treatments = num_treatments;
  pv.min_value = best;
  pv.tie_tolerance = tie_tolerance;
  for (std::uint64_t code = 0; code < total; ++code) {
    if (values[code] <= best + tie_tolerance) {
      pv.minimizer_codes.push_back(code);
    }
  }
  return pv;
}

// ------------------------------------------------------------- properties ---

// The extension Gamma-hat: the cartesian product of per-agent argmins of
// the base expected loss, with per-agent ties kept.
PropertyValue unregularized_property(LossKind loss, const Population& pop,
                                     std::uint64_t cap = kEnumerationCap);

// Exact argmin of the mixed objective over T^m. Checkers evaluate with
// lenient degenerate handling so boundary beliefs (e.g. all-zero outcome
// mass) stay comparable.
PropertyValue regularized_property(const RegularizedObjective& obj,
                                   const Population& pop,
                                   bool lenient = false,
                                   std::uint64_t cap = kEnumerationCap);

// min_t objective_value: the pointwise minimum the concavity checks probe.
double bayes_risk(const RegularizedObjective& obj, const Population& pop,
                  bool lenient = false, std::uint64_t cap = kEnumerationCap);

// Closed-form membership test for (0,0) in the two-agent demographic-parity
// level set under zero-one loss: p1 >= (1-3*lambda)/(2*(1-lambda)), same
// for p2, and p1 + p2 <= 1. At lambda = 1 the threshold diverges to
// -infinity and only the sum constraint binds.
bool dp_levelset_00_membership(double p1, double p2, double lambda);

// ---------------------------------------------------------------- samplers --

// All (i*step, j*step) pairs covering [0,1]^2 inclusively, row-major.
std::vector<Eigen::VectorXd> grid_points_2d(double step);

// count uniform draws from [0,1]^m, deterministic under seed.
std::vector<Eigen::VectorXd> random_points(int m, int count,
                                           std::uint64_t seed);

// -------------------------------------------------------------- checkers ----

// Compares Gamma-hat and Theta minimizer sets at every sampled belief
// vector for a fixed group assignment; exact set equality required.
EquivalenceReport check_equivalence(LossKind loss,
                                    const RegularizedObjective& obj,
                                    const std::vector<int>& groups,
                                    std::span<const Eigen::VectorXd> points,
                                    int jobs = 1);

// True iff at every sampled belief, every treatment vector minimizes the
// regularizer (its property's level sets cover everything).
bool check_nonenforcing(RegularizerKind reg, const std::vector<int>& groups,
                        std::span<const Eigen::VectorXd> points,
                        LossKind loss = LossKind::ZeroOne, int jobs = 1);

// At every sampled p where t is optimal for both the base loss extension
// and the regularizer alone, asserts t is optimal for the mixed objective.
// Requires lambda in (0,1). The two regularizer slots are split so tests
// can probe the negative path with mismatched objectives.
template <typename ObjFn, typename RegFn>
ContainmentReport check_subset_intersection_with(
    LossKind loss, double lambda, ObjFn&& mixed_reg, RegFn&& h_reg,
    const TreatmentVector& t, const std::vector<int>& groups,
    std::span<const Eigen::VectorXd> points, int jobs = 1) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ConfigError("subset-intersection check requires lambda in (0,1)");
  }
  const int m = static_cast<int>(groups.size());
  std::vector<int> verdict(points.size(), 0);  // 0 n/a, 1 ok, 2 violation
  parallel_for(static_cast<std::int64_t>(points.size()), jobs,
               [&](std::int64_t idx) {
    const Eigen::VectorXd& p = points[static_cast<std::size_t>(idx)];
    std::vector<double> p1s(p.data(), p.data() + p.size());
    const Population pop = Population::binary(p1s, groups, 2);
    const PropertyValue gamma = unregularized_property(loss, pop);
    if (!gamma.contains(t)) return;
    const PropertyValue h = minimize_over_treatments(
        m, t.num_treatments,
        [&](const TreatmentVector& cand) { return h_reg(cand, pop); });
    if (!h.contains(t)) return;
    const PropertyValue theta = minimize_over_treatments(
        m, t.num_treatments, [&](const TreatmentVector& cand) {
          return (1.0 - lambda) * mean_expected_loss(loss, cand, pop) +
                 lambda * mixed_reg(cand, pop);
        });
    verdict[static_cast<std::size_t>(idx)] = theta.contains(t) ? 1 : 2;
  });
  ContainmentReport report;
  report.samples_checked = static_cast<std::int64_t>(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (verdict[i] == 0) continue;
    ++report.applicable;
    if (verdict[i] == 2) report.violations.push_back(points[i]);
  }
  report.holds = report.violations.empty();
  return report;
}

// The standard form: one regularizer drives both the mixed objective and
// the H-membership test.
ContainmentReport check_subset_intersection(
    LossKind loss, const RegularizedObjective& obj, const TreatmentVector& t,
    const std::vector<int>& groups, std::span<const Eigen::VectorXd> points,
    int jobs = 1);

// At every sampled p where the group-a indicator treatment is optimal for
// the DP-regularized objective, asserts it is also optimal unregularized.
ContainmentReport check_unfair_optimum_containment(
    double lambda, const std::vector<int>& groups,
    std::span<const Eigen::VectorXd> points, int jobs = 1);

// One counterexample per line: the belief vector, then both minimizer sets.
std::string format_equivalence_report(const EquivalenceReport& report);

}  // namespace fairprop
