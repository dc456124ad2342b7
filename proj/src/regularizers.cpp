#include "fairprop/regularizers.hpp"

#include <cmath>

namespace fairprop {
namespace {

void require_two_groups(const Population& pop, const char* what) {
  if (pop.num_groups() != 2) {
    throw GroupStructureError(std::string(what) +
                              " requires exactly two groups, got " +
                              std::to_string(pop.num_groups()));
  }
}

double sign_of(double x) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return 0.0;
}

}  // namespace

std::vector<GroupAggregate> group_aggregates(const TreatmentVector& t,
                                             const Population& pop) {
  if (t.size() != pop.size()) {
    throw ConfigError("treatment vector length must equal population size");
  }
  std::vector<GroupAggregate> aggs(static_cast<std::size_t>(pop.num_groups()));
  for (int g = 0; g < pop.num_groups(); ++g) {
    aggs[static_cast<std::size_t>(g)].group = g;
  }
  for (int i = 0; i < pop.size(); ++i) {
    GroupAggregate& a = aggs[static_cast<std::size_t>(pop.group(i))];
    ++a.count;
    a.sum_treat += static_cast<double>(t.t[i]);
    a.sum_prob += pop.p1(i);
    if (t.t[i] == 1) ++a.positives;
  }
  return aggs;
}

double dp(const TreatmentVector& t, const Population& pop) {
  require_two_groups(pop, "dp");
  const auto aggs = group_aggregates(t, pop);
  const double rate_a = aggs[0].sum_treat / aggs[0].count;
  const double rate_b = aggs[1].sum_treat / aggs[1].count;
  return std::abs(rate_a - rate_b);
}

double fpr(const TreatmentVector& t, const Population& pop) {
  require_two_groups(pop, "fpr");
  if (t.size() != pop.size()) {
    throw ConfigError("treatment vector length must equal population size");
  }
  double rate[2] = {0.0, 0.0};
  int positives[2] = {0, 0};
  for (int i = 0; i < pop.size(); ++i) {
    if (t.t[i] == 1) {
      rate[pop.group(i)] += 1.0 - pop.p1(i);
      ++positives[pop.group(i)];
    }
  }
  for (int g = 0; g < 2; ++g) {
    rate[g] = positives[g] > 0 ? rate[g] / positives[g] : 0.0;
  }
  return std::abs(rate[0] - rate[1]);
}

double fnr(const TreatmentVector& t, const Population& pop) {
  require_two_groups(pop, "fnr");
  const auto aggs = group_aggregates(t, pop);
  double rate[2] = {0.0, 0.0};
  for (int i = 0; i < pop.size(); ++i) {
    if (t.t[i] == 0) {
      rate[pop.group(i)] += pop.p1(i);
    }
  }
  return std::abs(rate[0] / aggs[0].count - rate[1] / aggs[1].count);
}

double eeo(const TreatmentVector& t, const Population& pop, bool lenient,
           bool* degenerate) {
  require_two_groups(pop, "eeo");
  if (t.size() != pop.size()) {
    throw ConfigError("treatment vector length must equal population size");
  }
  if (degenerate != nullptr) *degenerate = false;
  double sum_prob = 0.0;
  double sum_treat = 0.0;
  double pos_prob[2] = {0.0, 0.0};
  int positives[2] = {0, 0};
  for (int i = 0; i < pop.size(); ++i) {
    sum_prob += pop.p1(i);
    sum_treat += static_cast<double>(t.t[i]);
    if (t.t[i] == 1) {
      pos_prob[pop.group(i)] += pop.p1(i);
      ++positives[pop.group(i)];
    }
  }
  if (sum_prob <= 0.0) {
    if (!lenient) {
      throw DegeneratePopulationError(
          "eeo undefined: total outcome probability is zero");
    }
    if (degenerate != nullptr) *degenerate = true;
    return 0.0;
  }
  double e[2];
  for (int g = 0; g < 2; ++g) {
    e[g] = positives[g] > 0
               ? (pos_prob[g] / positives[g]) * (sum_treat / sum_prob)
               : 0.0;
  }
  return std::abs(e[0] - e[1]);
}

double cal(const TreatmentVector& t, const Population& pop) {
  if (t.size() != pop.size()) {
    throw ConfigError("treatment vector length must equal population size");
  }
  std::vector<double> per_group(static_cast<std::size_t>(pop.num_groups()), 0.0);
  for (int i = 0; i < pop.size(); ++i) {
    per_group[static_cast<std::size_t>(pop.group(i))] +=
        std::abs(static_cast<double>(t.t[i]) - pop.p1(i));
  }
  double total = 0.0;
  for (int g = 0; g < pop.num_groups(); ++g) {
    total += per_group[static_cast<std::size_t>(g)] / pop.group_size(g);
  }
  return total;
}

double bgl(const TreatmentVector& t, const Population& pop, LossKind loss) {
  if (t.size() != pop.size()) {
    throw ConfigError("treatment vector length must equal population size");
  }
  std::vector<double> per_group(static_cast<std::size_t>(pop.num_groups()), 0.0);
  for (int i = 0; i < pop.size(); ++i) {
    per_group[static_cast<std::size_t>(pop.group(i))] +=
        expected_loss(loss, t.t[i], pop.dist(i));
  }
  double total = 0.0;
  for (int g = 0; g < pop.num_groups(); ++g) {
    total += per_group[static_cast<std::size_t>(g)] / pop.group_size(g);
  }
  return total;
}

double regularizer_value(RegularizerKind reg, const TreatmentVector& t,
                         const Population& pop, LossKind loss, bool lenient) {
  switch (reg) {
    case RegularizerKind::None:
      return 0.0;
    case RegularizerKind::Dp:
      return dp(t, pop);
    case RegularizerKind::Fpr:
      return fpr(t, pop);
    case RegularizerKind::Fnr:
      return fnr(t, pop);
    case RegularizerKind::Eeo:
      return eeo(t, pop, lenient);
    case RegularizerKind::Cal:
      return cal(t, pop);
    case RegularizerKind::Bgl:
      return bgl(t, pop, loss);
  }
  throw ConfigError("unknown regularizer id");
}

// ---------------------------------------------------------- soft variants ---

namespace {

struct SoftTallies {
  // Per-group: size, sum of scores, sum s*y, sum s*(1-y), sum (1-s)*y.
  std::vector<double> n, sum_s, sum_sy, sum_s1y, sum_1sy;
  double total_s = 0.0;
  double total_y = 0.0;
};

SoftTallies soft_tallies(const Eigen::VectorXd& scores,
                         const Eigen::VectorXd& labels,
                         const std::vector<int>& groups, int num_groups) {
  if (scores.size() != labels.size() ||
      static_cast<std::size_t>(scores.size()) != groups.size()) {
    throw ConfigError("scores, labels, and groups must have equal length");
  }
  SoftTallies st;
  st.n.assign(static_cast<std::size_t>(num_groups), 0.0);
  st.sum_s.assign(static_cast<std::size_t>(num_groups), 0.0);
  st.sum_sy.assign(static_cast<std::size_t>(num_groups), 0.0);
  st.sum_s1y.assign(static_cast<std::size_t>(num_groups), 0.0);
  st.sum_1sy.assign(static_cast<std::size_t>(num_groups), 0.0);
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const int g = groups[static_cast<std::size_t>(i)];
    if (g < 0 || g >= num_groups) {
      throw GroupStructureError("group label outside the declared set");
    }
    const double s = scores[i];
    const double y = labels[i];
    st.n[g] += 1.0;
    st.sum_s[g] += s;
    st.sum_sy[g] += s * y;
    st.sum_s1y[g] += s * (1.0 - y);
    st.sum_1sy[g] += (1.0 - s) * y;
    st.total_s += s;
    st.total_y += y;
  }
  for (int g = 0; g < num_groups; ++g) {
    if (st.n[static_cast<std::size_t>(g)] == 0.0) {
      throw GroupStructureError("declared group " + std::to_string(g) +
                                " has no members");
    }
  }
  return st;
}

void require_two_groups_soft(int num_groups, const char* what) {
  if (num_groups != 2) {
    throw GroupStructureError(std::string(what) +
                              " requires exactly two groups, got " +
                              std::to_string(num_groups));
  }
}

}  // namespace

// grad may be null when only the value is needed; both paths share the
// tallies so value and gradient always agree.
static double soft_eval(RegularizerKind reg, const Eigen::VectorXd& scores,
                        const Eigen::VectorXd& labels,
                        const std::vector<int>& groups, int num_groups,
                        Eigen::VectorXd* grad) {
  const SoftTallies st = soft_tallies(scores, labels, groups, num_groups);
  const Eigen::Index n = scores.size();
  if (grad != nullptr) {
    grad->setZero(n);
  }
  switch (reg) {
    case RegularizerKind::None:
      return 0.0;

    case RegularizerKind::Dp: {
      require_two_groups_soft(num_groups, "dp");
      const double diff = st.sum_s[0] / st.n[0] - st.sum_s[1] / st.n[1];
      if (grad != nullptr) {
        const double sign = sign_of(diff);
        for (Eigen::Index i = 0; i < n; ++i) {
          const int g = groups[static_cast<std::size_t>(i)];
          (*grad)[i] = (g == 0 ? sign : -sign) / st.n[g];
        }
      }
      return std::abs(diff);
    }

    case RegularizerKind::Fpr: {
      require_two_groups_soft(num_groups, "fpr");
      double rate[2], denom[2];
      for (int g = 0; g < 2; ++g) {
        denom[g] = std::max(st.sum_s[g], kDenominatorFloor);
        rate[g] = st.sum_s1y[g] / denom[g];
      }
      const double diff = rate[0] - rate[1];
      if (grad != nullptr) {
        const double sign = sign_of(diff);
        for (Eigen::Index i = 0; i < n; ++i) {
          const int g = groups[static_cast<std::size_t>(i)];
          const double one_my = 1.0 - labels[i];
          // Quotient rule when the true denominator is active, constant
          // denominator when the clamp is.
          const double drate = st.sum_s[g] > kDenominatorFloor
                                   ? (one_my - rate[g]) / st.sum_s[g]
                                   : one_my / kDenominatorFloor;
          (*grad)[i] = (g == 0 ? sign : -sign) * drate;
        }
      }
      return std::abs(diff);
    }

    case RegularizerKind::Fnr: {
      require_two_groups_soft(num_groups, "fnr");
      const double diff = st.sum_1sy[0] / st.n[0] - st.sum_1sy[1] / st.n[1];
      if (grad != nullptr) {
        const double sign = sign_of(diff);
        for (Eigen::Index i = 0; i < n; ++i) {
          const int g = groups[static_cast<std::size_t>(i)];
          (*grad)[i] = (g == 0 ? sign : -sign) * (-labels[i] / st.n[g]);
        }
      }
      return std::abs(diff);
    }

    case RegularizerKind::Eeo: {
      require_two_groups_soft(num_groups, "eeo");
      const double label_mass = std::max(st.total_y, kDenominatorFloor);
      const double scale = st.total_s / label_mass;
      double frac[2], denom[2];
      for (int g = 0; g < 2; ++g) {
        denom[g] = std::max(st.sum_s[g], kDenominatorFloor);
        frac[g] = st.sum_sy[g] / denom[g];
      }
      const double diff = (frac[0] - frac[1]) * scale;
      if (grad != nullptr) {
        const double sign = sign_of(diff);
        for (Eigen::Index i = 0; i < n; ++i) {
          const int g = groups[static_cast<std::size_t>(i)];
          const double dfrac = st.sum_s[g] > kDenominatorFloor
                                   ? (labels[i] - frac[g]) / st.sum_s[g]
                                   : labels[i] / kDenominatorFloor;
          // Every score feeds the shared sum_i s_i factor; only group
          // members feed their group's positive-mass fraction.
          double d = (frac[0] - frac[1]) / label_mass;
          d += (g == 0 ? scale : -scale) * dfrac;
          (*grad)[i] = sign * d;
        }
      }
      return std::abs(diff);
    }

    case RegularizerKind::Cal: {
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int g = groups[static_cast<std::size_t>(i)];
        total += std::abs(scores[i] - labels[i]) / st.n[g];
        if (grad != nullptr) {
          (*grad)[i] = sign_of(scores[i] - labels[i]) / st.n[g];
        }
      }
      return total;
    }

    case RegularizerKind::Bgl: {
      // Linear extension of expected zero-one loss to fractional reports:
      // s*(1-y) + (1-s)*y.
      double total = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int g = groups[static_cast<std::size_t>(i)];
        const double y = labels[i];
        total += (scores[i] * (1.0 - y) + (1.0 - scores[i]) * y) / st.n[g];
        if (grad != nullptr) {
          (*grad)[i] = (1.0 - 2.0 * y) / st.n[g];
        }
      }
      return total;
    }
  }
  throw ConfigError("unknown regularizer id");
}

double soft_surrogate(RegularizerKind reg, const Eigen::VectorXd& scores,
                      const Eigen::VectorXd& labels,
                      const std::vector<int>& groups, int num_groups) {
  return soft_eval(reg, scores, labels, groups, num_groups, nullptr);
}

double soft_surrogate_grad(RegularizerKind reg, const Eigen::VectorXd& scores,
                           const Eigen::VectorXd& labels,
                           const std::vector<int>& groups, int num_groups,
                           Eigen::VectorXd& grad) {
  return soft_eval(reg, scores, labels, groups, num_groups, &grad);
}

}  // namespace fairprop
