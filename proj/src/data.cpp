#include "fairprop/data.hpp"

#include "fairprop/io_util.hpp"
#include "fairprop/rng.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace fairprop {

std::vector<GroupStat> TabularDataset::group_stats() const {
  std::vector<GroupStat> stats(static_cast<std::size_t>(num_groups()));
  for (int g = 0; g < num_groups(); ++g) {
    stats[static_cast<std::size_t>(g)].name =
        group_names[static_cast<std::size_t>(g)];
  }
  std::vector<int> positives(static_cast<std::size_t>(num_groups()), 0);
  for (int i = 0; i < size(); ++i) {
    const int g = groups[static_cast<std::size_t>(i)];
    ++stats[static_cast<std::size_t>(g)].count;
    if (labels[i] == 1.0) ++positives[static_cast<std::size_t>(g)];
  }
  for (int g = 0; g < num_groups(); ++g) {
    GroupStat& s = stats[static_cast<std::size_t>(g)];
    if (s.count == 0) {
      throw DataError("group '" + s.name + "' has no rows");
    }
    s.base_rate = static_cast<double>(positives[static_cast<std::size_t>(g)]) /
                  s.count;
    s.share = static_cast<double>(s.count) / size();
  }
  return stats;
}

TabularDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_samples < 1) {
    throw ConfigError("synthetic spec needs at least one sample");
  }
  if (spec.k_noise < 0) {
    throw ConfigError("k_noise must be nonnegative");
  }
  for (const double p : {spec.p_a, spec.p_b}) {
    if (p < 0.0 || p > 1.0) {
      throw ConfigError("synthetic base rates must lie in [0,1]");
    }
  }
  if (!(spec.group_balance > 0.0 && spec.group_balance < 1.0)) {
    throw ConfigError("group_balance must lie in (0,1)");
  }
  const int n = spec.n_samples;
  const int d = 2 + spec.k_noise;
  TabularDataset ds;
  ds.features.resize(n, d);
  ds.labels.resize(n);
  ds.groups.resize(static_cast<std::size_t>(n));
  ds.group_names = {"a", "b"};
  ds.feature_names = {"p_own", "p_other"};
  for (int k = 1; k <= spec.k_noise; ++k) {
    ds.feature_names.push_back("noise" + std::to_string(k));
  }
  Rng rng(spec.seed);
  for (int i = 0; i < n; ++i) {
    const int g = rng.bernoulli(spec.group_balance);  // 1 = group b
    const double p_own = g == 0 ? spec.p_a : spec.p_b;
    const double p_other = g == 0 ? spec.p_b : spec.p_a;
    ds.groups[static_cast<std::size_t>(i)] = g;
    ds.labels[i] = rng.bernoulli(p_own);
    ds.features(i, 0) = p_own;
    ds.features(i, 1) = p_other;
    for (int k = 0; k < spec.k_noise; ++k) {
      ds.features(i, 2 + k) = rng.uniform(-1.0, 1.0);
    }
  }
  // Both groups must appear for the group-rate machinery downstream.
  if (std::find(ds.groups.begin(), ds.groups.end(), 0) == ds.groups.end() ||
      std::find(ds.groups.begin(), ds.groups.end(), 1) == ds.groups.end()) {
    throw DataError("synthetic draw produced a single-group dataset; "
                    "increase n_samples or adjust group_balance");
  }
  return ds;
}

namespace {

void standardize_features(Eigen::MatrixXd& features) {
  const Eigen::Index n = features.rows();
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const double mean = features.col(c).mean();
    features.col(c).array() -= mean;
    const double var = features.col(c).squaredNorm() / static_cast<double>(n);
    const double sd = std::sqrt(var);
    if (sd > 1e-12) {
      features.col(c) /= sd;
    } else {
      features.col(c).setZero();
    }
  }
}

}  // namespace

TabularDataset load_csv(const std::string& path, const std::string& label_col,
                        const GroupRule& group_rule) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty csv: " + path);
  }
  const std::vector<std::string> header = split_csv_line(line);
  const auto find_col = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError("missing column '" + name + "' in " + path);
    }
    return static_cast<int>(it - header.begin());
  };
  const int label_idx = find_col(label_col);
  const int group_idx = find_col(group_rule.column);
  if (label_idx == group_idx) {
    throw DataError("label and group columns must differ in " + path);
  }

  std::vector<int> feature_cols;
  TabularDataset ds;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (c == label_idx || c == group_idx) continue;
    feature_cols.push_back(c);
    ds.feature_names.push_back(header[static_cast<std::size_t>(c)]);
  }

  std::vector<std::vector<double>> feature_rows;
  std::vector<double> labels;
  std::unordered_map<std::string, int> group_ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(header.size()) + " in " + path);
    }
    const std::string where = path + ":" + std::to_string(line_no);
    const double y = parse_double(fields[static_cast<std::size_t>(label_idx)],
                                  where + " (label)");
    if (y != 0.0 && y != 1.0) {
      throw DataError("label must be 0 or 1 at " + where);
    }
    labels.push_back(y);

    const std::string& group_field =
        fields[static_cast<std::size_t>(group_idx)];
    int gid;
    if (group_rule.threshold.has_value()) {
      const double v = parse_double(group_field, where + " (group)");
      gid = v < *group_rule.threshold ? 1 : 0;  // below threshold -> group b
    } else {
      const auto [it, inserted] =
          group_ids.emplace(group_field, static_cast<int>(group_ids.size()));
      gid = it->second;
      (void)inserted;
    }
    ds.groups.push_back(gid);

    std::vector<double> row;
    row.reserve(feature_cols.size());
    for (const int c : feature_cols) {
      row.push_back(parse_double(fields[static_cast<std::size_t>(c)],
                                 where + " (" +
                                     header[static_cast<std::size_t>(c)] +
                                     ")"));
    }
    feature_rows.push_back(std::move(row));
  }
  if (feature_rows.empty()) {
    throw DataError("no data rows in " + path);
  }

  if (group_rule.threshold.has_value()) {
    ds.group_names = {group_rule.column + ">=" +
                          format_double_short(*group_rule.threshold),
                      group_rule.column + "<" +
                          format_double_short(*group_rule.threshold)};
  } else {
    ds.group_names.resize(group_ids.size());
    for (const auto& [name, id] : group_ids) {
      ds.group_names[static_cast<std::size_t>(id)] = name;
    }
  }
  // A threshold rule may leave one side empty; categorical data may be
  // uniform. Either way downstream group comparisons are meaningless.
  std::vector<int> seen(ds.group_names.size(), 0);
  for (const int g : ds.groups) seen[static_cast<std::size_t>(g)] = 1;
  if (ds.group_names.size() < 2 ||
      std::count(seen.begin(), seen.end(), 1) < 2) {
    throw DataError("dataset has a single sensitive group: " + path);
  }

  const int n = static_cast<int>(feature_rows.size());
  const int d = static_cast<int>(feature_cols.size());
  ds.features.resize(n, d);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) {
      ds.features(i, c) =
          feature_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
    }
  }
  ds.labels = Eigen::Map<Eigen::VectorXd>(labels.data(), n);
  standardize_features(ds.features);
  return ds;
}

void save_dataset_csv(const TabularDataset& dataset, const std::string& path) {
  std::ofstream out = open_output(path);
  for (const std::string& name : dataset.feature_names) {
    out << name << ',';
  }
  out << "label,group\n";
  for (int i = 0; i < dataset.size(); ++i) {
    for (int c = 0; c < dataset.num_features(); ++c) {
      out << format_double(dataset.features(i, c)) << ',';
    }
    out << format_double_short(dataset.labels[i]) << ','
        << dataset.group_names[static_cast<std::size_t>(
               dataset.groups[static_cast<std::size_t>(i)])]
        << '\n';
  }
  if (!out) {
    throw IoError("failed while writing: " + path);
  }
}

Population population_from_group_stats(const std::vector<GroupStat>& stats) {
  if (stats.size() != 2) {
    throw GroupStructureError(
        "average-member population requires exactly two groups, got " +
        std::to_string(stats.size()));
  }
  return Population::binary({stats[0].base_rate, stats[1].base_rate}, {0, 1},
                            2);
}

void save_population_csv(const Population& pop, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "group,p1\n";
  for (int i = 0; i < pop.size(); ++i) {
    out << pop.group(i) << ',' << format_double(pop.p1(i)) << '\n';
  }
  if (!out) {
    throw IoError("failed while writing: " + path);
  }
}

Population load_population_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty population csv: " + path);
  }
  if (split_csv_line(line) != std::vector<std::string>{"group", "p1"}) {
    throw DataError("unexpected population csv header in " + path);
  }
  std::vector<double> p1s;
  std::vector<int> groups;
  std::unordered_map<std::string, int> group_ids;
  bool all_numeric = true;
  std::vector<std::string> raw_groups;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) {
      throw DataError("expected 2 columns per population row in " + path);
    }
    raw_groups.push_back(fields[0]);
    p1s.push_back(parse_double(fields[1],
                               path + ":" + std::to_string(line_no)));
    char* end = nullptr;
    const long v = std::strtol(fields[0].c_str(), &end, 10);
    if (end == nullptr || *end != '\0' || v < 0) {
      all_numeric = false;
    }
  }
  groups.reserve(raw_groups.size());
  for (const std::string& g : raw_groups) {
    if (all_numeric) {
      groups.push_back(static_cast<int>(std::strtol(g.c_str(), nullptr, 10)));
    } else {
      const auto [it, inserted] =
          group_ids.emplace(g, static_cast<int>(group_ids.size()));
      groups.push_back(it->second);
      (void)inserted;
    }
  }
  return Population::binary(p1s, groups);
}

}  // namespace fairprop
