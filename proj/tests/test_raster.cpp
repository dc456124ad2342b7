// Level-set rasters: quadrant structure at lambda = 0, collapse of mixed
// treatments at heavy regularization, area accounting, export round trips,
// and the geometric signatures of each regularizer family.
#include "fairprop/elicitation.hpp"
#include "fairprop/raster.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace fairprop;

namespace {

TreatmentVector tv2(int a, int b) {
  TreatmentVector t;
  t.num_treatments = 2;
  t.t.resize(2);
  t.t << a, b;
  return t;
}

std::string temp_path(const std::string& name) {
  return "raster_test_" + name;
}

}  // namespace

TEST_SUITE("raster") {

TEST_CASE("lambda zero is the mode partition in quadrants") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.0, 100);
  REQUIRE(r.resolution == 100);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const int expect = (r.center(i) > 0.5 ? 2 : 0) +
                         (r.center(j) > 0.5 ? 1 : 0);
      CHECK(r.labels(i, j) == expect);
      CHECK(r.tie_mask(i, j) == 0);  // centers never sit on 0.5
    }
  }
  // Quadrant areas.
  CHECK(cell_area(r, tv2(0, 0)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(cell_area(r, tv2(1, 1)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("lambda zero rasters are identical across regularizer ids") {
  const LevelSetRaster base = rasterize(RegularizerKind::None, 0.0, 101);
  for (const RegularizerKind reg :
       {RegularizerKind::Dp, RegularizerKind::Fpr, RegularizerKind::Fnr,
        RegularizerKind::Eeo, RegularizerKind::Cal, RegularizerKind::Bgl}) {
    const LevelSetRaster r = rasterize(reg, 0.0, 101);
    CHECK((r.labels.array() == base.labels.array()).all());
  }
}

TEST_CASE("heavy dp weight leaves only the uniform treatments") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.95, 100);
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const bool uniform = r.labels(i, j) == 0 || r.labels(i, j) == 3;
      CHECK(uniform);
      // The split line is p1 + p2 = 1.
      const double sum = r.center(i) + r.center(j);
      if (std::abs(sum - 1.0) > 2.0 / 100) {
        CHECK(r.labels(i, j) == (sum < 1.0 ? 0 : 3));
      }
    }
  }
  CHECK(cell_area(r, tv2(1, 0)) == doctest::Approx(0.0));
  CHECK(cell_area(r, tv2(0, 1)) == doctest::Approx(0.0));
}

TEST_CASE("areas partition the square") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.0, 64);
  double total = 0.0;
  for (std::uint64_t code = 0; code < 4; ++code) {
    total += cell_area(r, decode_treatments(code, 2, 2));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Mixed treatments vanish already at lambda = 0.9.
  const LevelSetRaster heavy = rasterize(RegularizerKind::Dp, 0.9, 64);
  CHECK(cell_area(heavy, tv2(1, 0)) == doctest::Approx(0.0));
}

TEST_CASE("dp labels match the upper-threshold region at lambda 0.2") {
  // Off-boundary agreement between the raster labels and the closed-form
  // region p1, p2 <= (1+lambda)/(2(1-lambda)), p1 + p2 <= 1 for (0,0).
  const double lambda = 0.2;
  const double upper = (1.0 + lambda) / (2.0 * (1.0 - lambda));
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, lambda, 100);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double p1 = r.center(i), p2 = r.center(j);
      const double step = 1.0 / 100;
      if (std::abs(p1 - upper) <= step || std::abs(p2 - upper) <= step ||
          std::abs(p1 + p2 - 1.0) <= step) {
        continue;
      }
      const bool in_region = p1 <= upper && p2 <= upper && p1 + p2 <= 1.0;
      const bool labeled = r.labels(i, j) == 0;
      if (in_region != labeled) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("dp uniform-region area grows monotonically with lambda") {
  double prev = 0.0;
  for (int k = 0; k <= 9; ++k) {
    const double lambda = k / 10.0;
    const LevelSetRaster r = rasterize(RegularizerKind::Dp, lambda, 101);
    const double uniform =
        cell_area(r, tv2(0, 0)) + cell_area(r, tv2(1, 1));
    CHECK(uniform >= prev - 1e-12);
    prev = uniform;
  }
  // Starting point: half the square at lambda = 0.
  const LevelSetRaster base = rasterize(RegularizerKind::Dp, 0.0, 101);
  CHECK(cell_area(base, tv2(0, 0)) + cell_area(base, tv2(1, 1)) ==
        doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("dp raster has complement symmetry away from ties") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.3, 100);
  int compared = 0;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      // p -> (1-p1, 1-p2) maps cell (i,j) to (n-1-i, n-1-j) and a unique
      // minimizer to its bitwise complement. Tie cells are excluded: the
      // stored label is the smallest tied code, which the complement map
      // sends to the largest.
      if (r.tie_mask(i, j) != 0 || r.tie_mask(99 - i, 99 - j) != 0) continue;
      const int mirrored = r.labels(99 - i, 99 - j);
      CHECK(r.labels(i, j) == 3 - mirrored);
      ++compared;
    }
  }
  CHECK(compared > 9000);
}

TEST_CASE("fpr suppresses positive treatment beyond the half line") {
  // At lambda = 0.3 some cell with p1 > 0.5 still carries treatment 0 for
  // agent 1 — the first coordinate of the label pair.
  const LevelSetRaster r = rasterize(RegularizerKind::Fpr, 0.3, 101);
  bool found = false;
  for (int i = 0; i < 101; ++i) {
    for (int j = 0; j < 101; ++j) {
      if (r.center(i) > 0.5 && r.labels(i, j) < 2) found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("fnr promotes positive treatment below the half line") {
  const LevelSetRaster r = rasterize(RegularizerKind::Fnr, 0.3, 101);
  bool found = false;
  for (int i = 0; i < 101; ++i) {
    for (int j = 0; j < 101; ++j) {
      if (r.center(i) < 0.5 && r.labels(i, j) >= 2) found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("csv export and reload round trip") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.25, 17);
  const std::string path = temp_path("roundtrip.csv");
  export_raster_csv(r, path);

  // Header plus n^2 data rows.
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  int lines = 0;
  std::getline(in, line);
  CHECK(line == "i,j,p1,p2,label,tie");
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 17 * 17);
  in.close();

  const LevelSetRaster back = load_raster_csv(path);
  CHECK(back.resolution == 17);
  CHECK((back.labels.array() == r.labels.array()).all());
  CHECK((back.tie_mask.array() == r.tie_mask.array()).all());
  std::remove(path.c_str());
}

TEST_CASE("pgm export carries the P5 magic and the full pixel payload") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.0, 2);
  const std::string path = temp_path("tiny.pgm");
  export_raster_pgm(r, path);
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::string magic;
  in >> magic;
  CHECK(magic == "P5");
  // Entire file: header lines then exactly n*n bytes of pixels.
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  CHECK(static_cast<long>(size) > 2 * 2);
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("export format dispatch and error paths") {
  const LevelSetRaster r = rasterize(RegularizerKind::Dp, 0.0, 4);
  CHECK_THROWS_AS(export_raster(r, temp_path("x.bmp"), "bmp"), ConfigError);
  CHECK_THROWS_AS(export_raster_csv(r, "no_such_dir/x.csv"), IoError);
  CHECK_THROWS_AS(load_raster_csv("missing_raster_file.csv"), IoError);
  CHECK_THROWS_AS(rasterize(RegularizerKind::Dp, 0.0, 1), ConfigError);

  // A tampered header is rejected with the path in the message.
  const std::string bad = temp_path("bad.csv");
  {
    std::ofstream out(bad);
    out << "a,b,c\n0,0,0\n";
  }
  CHECK_THROWS_AS(load_raster_csv(bad), DataError);
  std::remove(bad.c_str());
}

TEST_CASE("file naming convention") {
  CHECK(raster_filename(RegularizerKind::Dp, 0.25, 201, "csv") ==
        "dp_0.25_201.csv");
  CHECK(raster_filename(RegularizerKind::Eeo, 1.0 / 3.0, 101, "pgm") ==
        "eeo_0.333333_101.pgm");
}

}  // TEST_SUITE
