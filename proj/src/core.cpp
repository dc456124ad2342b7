#include "fairprop/core.hpp"

#include "fairprop/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fairprop {

// ------------------------------------------------------------ identifiers ---

std::string to_string(LossKind loss) {
  switch (loss) {
    case LossKind::ZeroOne:
      return "zero-one";
    case LossKind::Squared:
      return "squared";
  }
  throw ConfigError("unknown loss id");
}

LossKind parse_loss(const std::string& name) {
  if (name == "zero-one" || name == "zeroone" || name == "01") {
    return LossKind::ZeroOne;
  }
  if (name == "squared") {
    return LossKind::Squared;
  }
  throw ConfigError("unknown loss id: '" + name + "'");
}

std::string to_string(RegularizerKind reg) {
  switch (reg) {
    case RegularizerKind::None:
      return "none";
    case RegularizerKind::Dp:
      return "dp";
    case RegularizerKind::Fpr:
      return "fpr";
    case RegularizerKind::Fnr:
      return "fnr";
    case RegularizerKind::Eeo:
      return "eeo";
    case RegularizerKind::Cal:
      return "cal";
    case RegularizerKind::Bgl:
      return "bgl";
  }
  throw ConfigError("unknown regularizer id");
}

RegularizerKind parse_regularizer(const std::string& name) {
  if (name == "none") return RegularizerKind::None;
  if (name == "dp") return RegularizerKind::Dp;
  if (name == "fpr") return RegularizerKind::Fpr;
  if (name == "fnr") return RegularizerKind::Fnr;
  if (name == "eeo") return RegularizerKind::Eeo;
  if (name == "cal") return RegularizerKind::Cal;
  if (name == "bgl") return RegularizerKind::Bgl;
  throw ConfigError("unknown regularizer id: '" + name + "'");
}

// ------------------------------------------------------------------ types ---

OutcomeDistribution::OutcomeDistribution(Eigen::VectorXd probs, bool normalize)
    : probs_(std::move(probs)) {
  if (probs_.size() < 1) {
    throw ConfigError("outcome distribution needs at least one outcome");
  }
  if ((probs_.array() < 0.0).any()) {
    throw ConfigError("outcome distribution has a negative entry");
  }
  const double total = probs_.sum();
  if (normalize) {
    if (total <= 0.0) {
      throw ConfigError("cannot normalize a distribution with zero mass");
    }
    probs_ /= total;
  } else if (std::abs(total - 1.0) > kDistributionTolerance) {
    std::ostringstream msg;
    msg << "outcome distribution entries sum to " << total << ", not 1";
    throw ConfigError(msg.str());
  }
}

OutcomeDistribution OutcomeDistribution::binary(double p1) {
  if (p1 < 0.0 || p1 > 1.0) {
    throw ConfigError("binary outcome probability must lie in [0,1]");
  }
  Eigen::VectorXd probs(2);
  probs << 1.0 - p1, p1;
  // The complement may miss 1 - p1 by one ulp; renormalization is exact here.
  return OutcomeDistribution(std::move(probs), /*normalize=*/true);
}

double OutcomeDistribution::p1() const {
  if (probs_.size() != 2) {
    throw ConfigError("p1 accessor requires a binary outcome space");
  }
  return probs_[1];
}

Population::Population(std::vector<Agent> agents, int num_groups)
    : agents_(std::move(agents)), num_groups_(num_groups) {
  if (agents_.empty()) {
    throw ConfigError("population must contain at least one agent");
  }
  if (num_groups_ < 1) {
    throw ConfigError("population must declare at least one group");
  }
  const int k = agents_.front().dist.num_outcomes();
  group_sizes_.assign(num_groups_, 0);
  members_.assign(num_groups_, {});
  for (int i = 0; i < static_cast<int>(agents_.size()); ++i) {
    const Agent& a = agents_[i];
    if (a.group < 0 || a.group >= num_groups_) {
      throw GroupStructureError("agent group label outside the declared set");
    }
    if (a.dist.num_outcomes() != k) {
      throw ConfigError("agents must share a common outcome space");
    }
    ++group_sizes_[a.group];
    members_[a.group].push_back(i);
  }
  for (int g = 0; g < num_groups_; ++g) {
    if (group_sizes_[g] == 0) {
      throw GroupStructureError("declared group " + std::to_string(g) +
                                " has no members");
    }
  }
}

Population Population::binary(const std::vector<double>& p1s,
                              const std::vector<int>& groups, int num_groups) {
  if (p1s.size() != groups.size()) {
    throw ConfigError("p1s and groups must have equal length");
  }
  if (num_groups < 0) {
    num_groups = groups.empty() ? 0 : *std::max_element(groups.begin(), groups.end()) + 1;
  }
  std::vector<Agent> agents;
  agents.reserve(p1s.size());
  for (std::size_t i = 0; i < p1s.size(); ++i) {
    agents.push_back(Agent{groups[i], OutcomeDistribution::binary(p1s[i])});
  }
  return Population(std::move(agents), num_groups);
}

std::uint64_t encode_treatments(const TreatmentVector& tv) {
  std::uint64_t code = 0;
  for (int i = 0; i < tv.size(); ++i) {
    code = code * static_cast<std::uint64_t>(tv.num_treatments) +
           static_cast<std::uint64_t>(tv.t[i]);
  }
  return code;
}

TreatmentVector decode_treatments(std::uint64_t code, int m,
                                  int num_treatments) {
  TreatmentVector tv;
  tv.num_treatments = num_treatments;
  tv.t.resize(m);
  for (int i = m - 1; i >= 0; --i) {
    tv.t[i] = static_cast<int>(code % static_cast<std::uint64_t>(num_treatments));
    code /= static_cast<std::uint64_t>(num_treatments);
  }
  return tv;
}

std::string treatment_label(const TreatmentVector& tv) {
  std::string label;
  label.reserve(static_cast<std::size_t>(tv.size()));
  for (int i = 0; i < tv.size(); ++i) {
    if (tv.t[i] < 0 || tv.t[i] > 9) {
      throw ConfigError("treatment labels support single-digit treatments");
    }
    label.push_back(static_cast<char>('0' + tv.t[i]));
  }
  return label;
}

TreatmentVector parse_treatment_label(const std::string& label,
                                      int num_treatments) {
  TreatmentVector tv;
  tv.num_treatments = num_treatments;
  tv.t.resize(static_cast<Eigen::Index>(label.size()));
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (label[i] < '0' || label[i] >= '0' + num_treatments) {
      throw ConfigError("bad treatment label: '" + label + "'");
    }
    tv.t[static_cast<Eigen::Index>(i)] = label[i] - '0';
  }
  return tv;
}

void validate(const RegularizedObjective& obj) {
  if (!(obj.lambda >= 0.0 && obj.lambda <= 1.0)) {
    throw ConfigError("lambda must lie in [0,1]");
  }
}

// ------------------------------------------------------------- operations ---

double expected_loss(LossKind loss, int t, const OutcomeDistribution& p) {
  const Eigen::VectorXd& probs = p.probs();
  if (t < 0 || t >= probs.size()) {
    throw ConfigError("treatment outside the outcome-indexed treatment space");
  }
  switch (loss) {
    case LossKind::ZeroOne:
      return 1.0 - probs[t];
    case LossKind::Squared: {
      double value = 0.0;
      for (int y = 0; y < probs.size(); ++y) {
        const double diff = static_cast<double>(t - y);
        value += probs[y] * diff * diff;
      }
      return value;
    }
  }
  throw ConfigError("unknown loss id");
}

double mean_expected_loss(LossKind loss, const TreatmentVector& t,
                          const Population& pop) {
  if (t.size() != pop.size()) {
    throw ConfigError("treatment vector length must equal population size");
  }
  double total = 0.0;
  for (int i = 0; i < pop.size(); ++i) {
    total += expected_loss(loss, t.t[i], pop.dist(i));
  }
  return total / static_cast<double>(pop.size());
}

double objective_value(const RegularizedObjective& obj,
                       const TreatmentVector& t, const Population& pop,
                       bool lenient) {
  validate(obj);
  const double base = mean_expected_loss(obj.loss, t, pop);
  if (obj.regularizer == RegularizerKind::None) {
    return (1.0 - obj.lambda) * base;
  }
  const double reg =
      regularizer_value(obj.regularizer, t, pop, obj.loss, lenient);
  return (1.0 - obj.lambda) * base + obj.lambda * reg;
}

}  // namespace fairprop
