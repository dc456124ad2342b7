// Dataset plumbing: the synthetic generator's distributional guarantees,
// CSV loading with both group-derivation rules against the committed
// fixtures, serialization round trips, and the group-average population.
#include "fairprop/data.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace fairprop;

#ifndef FAIRPROP_FIXTURE_DIR
#define FAIRPROP_FIXTURE_DIR "tests/fixtures"
#endif

namespace {

const std::string kFixtures = FAIRPROP_FIXTURE_DIR;

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = "data_test_" + name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("degenerate Bernoullis give deterministic labels") {
  SyntheticSpec spec;
  spec.p_a = 1.0;
  spec.p_b = 0.0;
  spec.n_samples = 1000;
  spec.seed = 5;
  const TabularDataset d = generate_synthetic(spec);
  REQUIRE(d.size() == 1000);
  for (int i = 0; i < d.size(); ++i) {
    CHECK(d.labels[i] == (d.groups[i] == 0 ? 1.0 : 0.0));
  }
}

TEST_CASE("pooled base rate concentrates around the common rate") {
  SyntheticSpec spec;
  spec.p_a = 0.3;
  spec.p_b = 0.3;
  spec.n_samples = 10000;
  spec.seed = 7;
  const TabularDataset d = generate_synthetic(spec);
  CHECK(std::abs(d.labels.mean() - 0.3) <= 0.02);
}

TEST_CASE("feature layout: rate pair plus noise columns") {
  SyntheticSpec spec;
  spec.k_noise = 3;
  spec.n_samples = 50;
  const TabularDataset d = generate_synthetic(spec);
  CHECK(d.num_features() == 5);
  REQUIRE(d.feature_names.size() == 5);
  // First two columns carry the group rates: own rate then other rate.
  for (int i = 0; i < d.size(); ++i) {
    const double own = d.groups[i] == 0 ? spec.p_a : spec.p_b;
    const double other = d.groups[i] == 0 ? spec.p_b : spec.p_a;
    CHECK(d.features(i, 0) == doctest::Approx(own));
    CHECK(d.features(i, 1) == doctest::Approx(other));
    for (int c = 2; c < 5; ++c) {
      CHECK(d.features(i, c) >= -1.0);
      CHECK(d.features(i, c) <= 1.0);
    }
  }
}

TEST_CASE("generation is a pure function of the spec") {
  SyntheticSpec spec;
  spec.n_samples = 500;
  spec.seed = 42;
  const TabularDataset a = generate_synthetic(spec);
  const TabularDataset b = generate_synthetic(spec);
  CHECK((a.features.array() == b.features.array()).all());
  CHECK((a.labels.array() == b.labels.array()).all());
  CHECK(a.groups == b.groups);
  spec.seed = 43;
  const TabularDataset c = generate_synthetic(spec);
  CHECK_FALSE((a.features.array() == c.features.array()).all());
}

TEST_CASE("group statistics converge to the generator rates") {
  SyntheticSpec spec;
  spec.p_a = 0.65;
  spec.p_b = 0.2;
  spec.n_samples = 8000;
  spec.seed = 11;
  const TabularDataset d = generate_synthetic(spec);
  const auto stats = d.group_stats();
  REQUIRE(stats.size() == 2);
  for (int g = 0; g < 2; ++g) {
    const double p = g == 0 ? spec.p_a : spec.p_b;
    const double se =
        std::sqrt(p * (1 - p) / static_cast<double>(stats[g].count));
    CHECK(std::abs(stats[g].base_rate - p) <= 3.0 * se);
  }
  CHECK(stats[0].share + stats[1].share == doctest::Approx(1.0));
}

TEST_CASE("threshold-rule fixture: lending-style group statistics") {
  const TabularDataset d =
      load_csv(kFixtures + "/german_synth.csv", "label", {"age", 25.0});
  REQUIRE(d.num_groups() == 2);
  CHECK(d.group_names[0] == "age>=25");
  CHECK(d.group_names[1] == "age<25");
  const auto stats = d.group_stats();
  CHECK(stats[0].count == 1618);
  CHECK(stats[1].count == 382);
  CHECK(stats[0].base_rate == doctest::Approx(0.728).epsilon(0.001));
  CHECK(stats[1].base_rate == doctest::Approx(0.5785).epsilon(0.001));
  CHECK(stats[1].share == doctest::Approx(0.191).epsilon(1e-9));
  // age itself is consumed by the rule; the rest are features.
  CHECK(d.num_features() == 3);
}

TEST_CASE("categorical-rule fixture: cardiac-style group statistics") {
  const TabularDataset d = load_csv(kFixtures + "/heart_synth.csv", "label",
                                    {"sex", std::nullopt});
  REQUIRE(d.num_groups() == 2);
  // First-seen order: the file starts with a sex=0 row.
  CHECK(d.group_names[0] == "0");
  CHECK(d.group_names[1] == "1");
  const auto stats = d.group_stats();
  CHECK(stats[0].base_rate == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(stats[1].base_rate == doctest::Approx(0.4484).epsilon(0.001));
  CHECK(stats[1].share == doctest::Approx(0.63).epsilon(1e-9));
}

TEST_CASE("standardization and the two-row round trip") {
  const std::string path = write_temp(
      "tiny.csv", "x,y,label,grp\n1.0,5.0,1,m\n3.0,5.0,0,f\n");
  const TabularDataset d = load_csv(path, "label", {"grp", std::nullopt});
  REQUIRE(d.size() == 2);
  // x standardizes to -1, +1 (population variance); constant y zeroes out.
  CHECK(d.features(0, 0) == doctest::Approx(-1.0));
  CHECK(d.features(1, 0) == doctest::Approx(1.0));
  CHECK(d.features(0, 1) == doctest::Approx(0.0));
  CHECK(d.features(1, 1) == doctest::Approx(0.0));
  CHECK(d.labels[0] == 1.0);
  CHECK(d.labels[1] == 0.0);
  CHECK(d.group_names[0] == "m");  // first seen
  CHECK(d.groups[0] == 0);
  CHECK(d.groups[1] == 1);
  std::remove(path.c_str());
}

TEST_CASE("save then load is idempotent on features, labels, groups") {
  SyntheticSpec spec;
  spec.n_samples = 120;
  spec.seed = 9;
  const TabularDataset d = generate_synthetic(spec);
  const std::string path = "data_test_roundtrip.csv";
  save_dataset_csv(d, path);
  const TabularDataset first = load_csv(path, "label", {"group", std::nullopt});
  save_dataset_csv(first, path);
  const TabularDataset second =
      load_csv(path, "label", {"group", std::nullopt});
  CHECK(first.groups == second.groups);
  CHECK((first.labels.array() == second.labels.array()).all());
  // Standardizing an already-standardized matrix is the identity.
  CHECK((first.features - second.features).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).scale(1.0));
  std::remove(path.c_str());
}

TEST_CASE("loader error paths") {
  CHECK_THROWS_AS(load_csv("no_such_file.csv", "label", {"g", std::nullopt}),
                  IoError);

  const std::string missing = write_temp(
      "missing_col.csv", "x,label\n1,0\n2,1\n");
  CHECK_THROWS_AS(load_csv(missing, "label", {"grp", std::nullopt}),
                  DataError);
  CHECK_THROWS_AS(load_csv(missing, "wrong", {"x", std::nullopt}), DataError);
  std::remove(missing.c_str());

  const std::string text = write_temp(
      "text_feature.csv", "x,label,grp\nabc,0,m\n1.0,1,f\n");
  CHECK_THROWS_AS(load_csv(text, "label", {"grp", std::nullopt}), DataError);
  std::remove(text.c_str());

  const std::string single = write_temp(
      "single_group.csv", "x,label,grp\n1,0,m\n2,1,m\n");
  CHECK_THROWS_AS(load_csv(single, "label", {"grp", std::nullopt}),
                  DataError);
  std::remove(single.c_str());

  const std::string badlabel = write_temp(
      "bad_label.csv", "x,label,grp\n1,2,m\n2,1,f\n");
  CHECK_THROWS_AS(load_csv(badlabel, "label", {"grp", std::nullopt}),
                  DataError);
  std::remove(badlabel.c_str());

  // Degenerate synthetic draw: a forced single group.
  SyntheticSpec spec;
  spec.group_balance = 0.5;
  spec.n_samples = 1;
  CHECK_THROWS_AS(generate_synthetic(spec), DataError);
}

TEST_CASE("group-average population placement") {
  const TabularDataset d =
      load_csv(kFixtures + "/german_synth.csv", "label", {"age", 25.0});
  const Population pop = population_from_group_stats(d.group_stats());
  REQUIRE(pop.size() == 2);
  CHECK(pop.p1(0) == doctest::Approx(0.728059).epsilon(1e-5));
  CHECK(pop.p1(1) == doctest::Approx(0.578534).epsilon(1e-5));
  CHECK(pop.group(0) == 0);
  CHECK(pop.group(1) == 1);

  // The symmetric point sits on every boundary by construction.
  std::vector<GroupStat> equal(2);
  equal[0] = {"a", 10, 0.5, 0.5};
  equal[1] = {"b", 10, 0.5, 0.5};
  const Population sym = population_from_group_stats(equal);
  CHECK(sym.p1(0) == doctest::Approx(0.5));
  CHECK(sym.p1(1) == doctest::Approx(0.5));

  std::vector<GroupStat> three(3);
  CHECK_THROWS_AS(population_from_group_stats(three), GroupStructureError);
}

TEST_CASE("population csv round trip") {
  const Population pop = Population::binary({0.728, 0.578}, {0, 1}, 2);
  const std::string path = "data_test_population.csv";
  save_population_csv(pop, path);
  const Population back = load_population_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(back.p1(0) == doctest::Approx(0.728).epsilon(1e-12));
  CHECK(back.p1(1) == doctest::Approx(0.578).epsilon(1e-12));
  CHECK(back.group(0) == 0);
  CHECK(back.group(1) == 1);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_population_csv("missing_population.csv"), IoError);
}

}  // TEST_SUITE
