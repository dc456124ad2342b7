#include "fairprop/elicitation.hpp"

#include "fairprop/rng.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fairprop {

std::vector<TreatmentVector> PropertyValue::minimizers() const {
  std::vector<TreatmentVector> out;
  out.reserve(minimizer_codes.size());
  for (const std::uint64_t code : minimizer_codes) {
    out.push_back(decode_treatments(code, m, num_treatments));
  }
  return out;
}

TreatmentVector PropertyValue::canonical() const {
  if (minimizer_codes.empty()) {
    throw ConfigError("property value has no minimizers");
  }
  return decode_treatments(minimizer_codes.front(), m, num_treatments);
}

std::uint64_t enumeration_size(int m, int num_treatments, std::uint64_t cap) {
  if (m < 1 || num_treatments < 1) {
    throw ConfigError("enumeration needs m >= 1 and at least one treatment");
  }
  std::uint64_t total = 1;
  for (int i = 0; i < m; ++i) {
    if (total > cap / static_cast<std::uint64_t>(num_treatments) + 1) {
      throw EnumerationLimitError("treatment space exceeds enumeration cap");
    }
    total *= static_cast<std::uint64_t>(num_treatments);
  }
  if (total > cap) {
    throw EnumerationLimitError("treatment space exceeds enumeration cap");
  }
  return total;
}

PropertyValue unregularized_property(LossKind loss, const Population& pop,
                                     std::uint64_t cap) {
  const int m = pop.size();
  const int num_treatments = pop.num_outcomes();
  enumeration_size(m, num_treatments, cap);

  // Per-agent argmin sets; the extension is their cartesian product.
  std::vector<std::vector<int>> agent_sets(static_cast<std::size_t>(m));
  double total_min = 0.0;
  for (int i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> vals(static_cast<std::size_t>(num_treatments));
    for (int t = 0; t < num_treatments; ++t) {
      vals[static_cast<std::size_t>(t)] = expected_loss(loss, t, pop.dist(i));
      best = std::min(best, vals[static_cast<std::size_t>(t)]);
    }
    for (int t = 0; t < num_treatments; ++t) {
      if (vals[static_cast<std::size_t>(t)] <= best + kTieTolerance) {
        agent_sets[static_cast<std::size_t>(i)].push_back(t);
      }
    }
    total_min += best;
  }

  PropertyValue pv;
  pv.m = m;
  pv.num_treatments = num_treatments;
  pv.min_value = total_min / static_cast<double>(m);
  pv.tie_tolerance = kTieTolerance;

  // Walk the product in lexicographic order (agent 0 most significant).
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    std::uint64_t code = 0;
    for (int i = 0; i < m; ++i) {
      code = code * static_cast<std::uint64_t>(num_treatments) +
             static_cast<std::uint64_t>(
                 agent_sets[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]);
    }
    pv.minimizer_codes.push_back(code);
    int i = m - 1;
    for (; i >= 0; --i) {
      if (++idx[static_cast<std::size_t>(i)] <
          agent_sets[static_cast<std::size_t>(i)].size()) {
        break;
      }
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i < 0) break;
  }
  return pv;
}

PropertyValue regularized_property(const RegularizedObjective& obj,
                                   const Population& pop, bool lenient,
                                   std::uint64_t cap) {
  validate(obj);
  return minimize_over_treatments(
      pop.size(), pop.num_outcomes(),
      [&](const TreatmentVector& t) {
        return objective_value(obj, t, pop, lenient);
      },
      kTieTolerance, cap);
}

double bayes_risk(const RegularizedObjective& obj, const Population& pop,
                  bool lenient, std::uint64_t cap) {
  return regularized_property(obj, pop, lenient, cap).min_value;
}

bool dp_levelset_00_membership(double p1, double p2, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0,1]");
  }
  if (p1 + p2 > 1.0) return false;
  if (lambda == 1.0) {
    // Threshold diverges to -infinity; only the sum constraint binds.
    return true;
  }
  const double threshold = (1.0 - 3.0 * lambda) / (2.0 * (1.0 - lambda));
  return p1 >= threshold && p2 >= threshold;
}

std::vector<Eigen::VectorXd> grid_points_2d(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw ConfigError("grid step must lie in (0,1]");
  }
  const int n = static_cast<int>(std::lround(1.0 / step));
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      Eigen::VectorXd p(2);
      p << std::min(1.0, i * step), std::min(1.0, j * step);
      points.push_back(std::move(p));
    }
  }
  return points;
}

std::vector<Eigen::VectorXd> random_points(int m, int count,
                                           std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Eigen::VectorXd> points;
  points.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd p(m);
    for (int i = 0; i < m; ++i) p[i] = rng.uniform();
    points.push_back(std::move(p));
  }
  return points;
}

EquivalenceReport check_equivalence(LossKind loss,
                                    const RegularizedObjective& obj,
                                    const std::vector<int>& groups,
                                    std::span<const Eigen::VectorXd> points,
                                    int jobs) {
  validate(obj);
  std::vector<std::optional<EquivalenceCounterexample>> found(points.size());
  parallel_for(static_cast<std::int64_t>(points.size()), jobs,
               [&](std::int64_t idx) {
    const Eigen::VectorXd& p = points[static_cast<std::size_t>(idx)];
    std::vector<double> p1s(p.data(), p.data() + p.size());
    const Population pop = Population::binary(p1s, groups, 2);
    const PropertyValue gamma = unregularized_property(loss, pop);
    const PropertyValue theta = regularized_property(obj, pop,
                                                     /*lenient=*/true);
    if (gamma.minimizer_codes != theta.minimizer_codes) {
      found[static_cast<std::size_t>(idx)] = EquivalenceCounterexample{
          p, gamma.minimizer_codes, theta.minimizer_codes};
    }
  });
  EquivalenceReport report;
  report.samples_checked = static_cast<std::int64_t>(points.size());
  for (auto& cx : found) {
    if (cx.has_value()) report.counterexamples.push_back(std::move(*cx));
  }
  report.equivalent = report.counterexamples.empty();
  return report;
}

bool check_nonenforcing(RegularizerKind reg, const std::vector<int>& groups,
                        std::span<const Eigen::VectorXd> points, LossKind loss,
                        int jobs) {
  const int m = static_cast<int>(groups.size());
  std::vector<char> enforcing_at(points.size(), 0);
  parallel_for(static_cast<std::int64_t>(points.size()), jobs,
               [&](std::int64_t idx) {
    const Eigen::VectorXd& p = points[static_cast<std::size_t>(idx)];
    std::vector<double> p1s(p.data(), p.data() + p.size());
    const Population pop = Population::binary(p1s, groups, 2);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    TreatmentVector tv;
    tv.num_treatments = 2;
    tv.t = Eigen::VectorXi::Zero(m);
    const std::uint64_t total = enumeration_size(m, 2);
    for (std::uint64_t code = 0; code < total; ++code) {
      const double v =
          regularizer_value(reg, tv, pop, loss, /*lenient=*/true);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      for (int i = m - 1; i >= 0; --i) {
        if (++tv.t[i] < 2) break;
        tv.t[i] = 0;
      }
    }
    // Some treatment fails to minimize R at this belief, so the
    // regularizer's property does constrain treatments here.
    if (hi - lo > kTieTolerance) {
      enforcing_at[static_cast<std::size_t>(idx)] = 1;
    }
  });
  for (const char flag : enforcing_at) {
    if (flag != 0) return false;
  }
  return true;
}

ContainmentReport check_subset_intersection(
    LossKind loss, const RegularizedObjective& obj, const TreatmentVector& t,
    const std::vector<int>& groups, std::span<const Eigen::VectorXd> points,
    int jobs) {
  validate(obj);
  const auto reg_fn = [&](const TreatmentVector& cand, const Population& pop) {
    return regularizer_value(obj.regularizer, cand, pop, obj.loss,
                             /*lenient=*/true);
  };
  return check_subset_intersection_with(loss, obj.lambda, reg_fn, reg_fn, t,
                                        groups, points, jobs);
}

ContainmentReport check_unfair_optimum_containment(
    double lambda, const std::vector<int>& groups,
    std::span<const Eigen::VectorXd> points, int jobs) {
  const int m = static_cast<int>(groups.size());
  TreatmentVector indicator;
  indicator.num_treatments = 2;
  indicator.t.resize(m);
  for (int i = 0; i < m; ++i) {
    indicator.t[i] = groups[static_cast<std::size_t>(i)] == 0 ? 1 : 0;
  }
  const RegularizedObjective obj{LossKind::ZeroOne, RegularizerKind::Dp,
                                 lambda};
  std::vector<int> verdict(points.size(), 0);  // 0 n/a, 1 ok, 2 violation
  parallel_for(static_cast<std::int64_t>(points.size()), jobs,
               [&](std::int64_t idx) {
    const Eigen::VectorXd& p = points[static_cast<std::size_t>(idx)];
    std::vector<double> p1s(p.data(), p.data() + p.size());
    const Population pop = Population::binary(p1s, groups, 2);
    const PropertyValue theta = regularized_property(obj, pop);
    if (!theta.contains(indicator)) return;
    const PropertyValue gamma =
        unregularized_property(LossKind::ZeroOne, pop);
    verdict[static_cast<std::size_t>(idx)] = gamma.contains(indicator) ? 1 : 2;
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

namespace {

std::string format_code_set(const std::vector<std::uint64_t>& codes, int m,
                            int num_treatments) {
  std::string out = "{";
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (i > 0) out += ",";
    out += treatment_label(decode_treatments(codes[i], m, num_treatments));
  }
  out += "}";
  return out;
}

}  // namespace

std::string format_equivalence_report(const EquivalenceReport& report) {
  std::ostringstream out;
  out << "equivalent: " << (report.equivalent ? "yes" : "no") << "\n";
  out << "samples_checked: " << report.samples_checked << "\n";
  out << "counterexamples: " << report.counterexamples.size() << "\n";
  for (const auto& cx : report.counterexamples) {
    const int m = static_cast<int>(cx.p1s.size());
    out << "p=(";
    for (int i = 0; i < m; ++i) {
      if (i > 0) out << ",";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", cx.p1s[i]);
      out << buf;
    }
    out << ") gamma=" << format_code_set(cx.gamma_codes, m, 2)
        << " theta=" << format_code_set(cx.theta_codes, m, 2) << "\n";
  }
  return out.str();
}

}  // namespace fairprop
