#include "fairprop/raster.hpp"

#include "fairprop/elicitation.hpp"
#include "fairprop/io_util.hpp"
#include "fairprop/parallel.hpp"

#include <cmath>

namespace fairprop {

LevelSetRaster rasterize(RegularizerKind reg, double lambda, int resolution,
                         int jobs) {
  if (resolution < 2) {
    throw ConfigError("raster resolution must be at least 2");
  }
  const RegularizedObjective obj{LossKind::ZeroOne, reg, lambda};
  validate(obj);

  LevelSetRaster raster;
  raster.resolution = resolution;
  raster.lambda = lambda;
  raster.regularizer = reg;
  raster.loss = LossKind::ZeroOne;
  raster.labels.resize(resolution, resolution);
  raster.tie_mask.resize(resolution, resolution);

  const std::vector<int> groups = {0, 1};
  parallel_for(resolution, jobs, [&](std::int64_t i) {
    const double p1 = raster.center(static_cast<int>(i));
    for (int j = 0; j < resolution; ++j) {
      const double p2 = raster.center(j);
      const Population pop = Population::binary({p1, p2}, groups, 2);
      const PropertyValue pv = regularized_property(obj, pop);
      raster.labels(static_cast<int>(i), j) =
          static_cast<int>(pv.minimizer_codes.front());
      raster.tie_mask(static_cast<int>(i), j) =
          pv.minimizer_codes.size() > 1 ? 1 : 0;
    }
  });
  return raster;
}

double cell_area(const LevelSetRaster& raster, const TreatmentVector& t) {
  const int code = static_cast<int>(encode_treatments(t));
  const std::int64_t hits =
      (raster.labels.array() == code).count();
  const double cells =
      static_cast<double>(raster.resolution) * raster.resolution;
  return static_cast<double>(hits) / cells;
}

void export_raster_csv(const LevelSetRaster& raster, const std::string& path) {
  std::ofstream out = open_output(path);
  out << "i,j,p1,p2,label,tie\n";
  for (int i = 0; i < raster.resolution; ++i) {
    for (int j = 0; j < raster.resolution; ++j) {
      const TreatmentVector tv = decode_treatments(
          static_cast<std::uint64_t>(raster.labels(i, j)), 2, 2);
      out << i << ',' << j << ',' << format_double(raster.center(i)) << ','
          << format_double(raster.center(j)) << ',' << treatment_label(tv)
          << ',' << raster.tie_mask(i, j) << '\n';
    }
  }
  if (!out) {
    throw IoError("failed while writing: " + path);
  }
}

void export_raster_pgm(const LevelSetRaster& raster, const std::string& path) {
  std::ofstream out = open_output(path, /*binary=*/true);
  const int n = raster.resolution;
  const int num_labels = 4;  // two binary agents
  out << "P5\n";
  out << "# level-set raster reg=" << to_string(raster.regularizer)
      << " lambda=" << format_double_short(raster.lambda) << " res=" << n
      << "\n";
  out << "# gray = label * 255 / " << (num_labels - 1)
      << " for labels 00,01,10,11 in lexicographic order\n";
  out << "# rows top to bottom: p2 from 1 to 0; columns left to right: "
         "p1 from 0 to 1\n";
  out << n << ' ' << n << "\n255\n";
  std::vector<unsigned char> row(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    const int j = n - 1 - r;
    for (int i = 0; i < n; ++i) {
      row[static_cast<std::size_t>(i)] = static_cast<unsigned char>(
          raster.labels(i, j) * 255 / (num_labels - 1));
    }
    out.write(reinterpret_cast<const char*>(row.data()), n);
  }
  if (!out) {
    throw IoError("failed while writing: " + path);
  }
}

void export_raster(const LevelSetRaster& raster, const std::string& path,
                   const std::string& format) {
  if (format == "csv") {
    export_raster_csv(raster, path);
  } else if (format == "pgm") {
    export_raster_pgm(raster, path);
  } else {
    throw ConfigError("unknown raster format: '" + format + "'");
  }
}

LevelSetRaster load_raster_csv(const std::string& path) {
  std::ifstream in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw DataError("empty raster csv: " + path);
  }
  if (split_csv_line(line) !=
      std::vector<std::string>{"i", "j", "p1", "p2", "label", "tie"}) {
    throw DataError("unexpected raster csv header in " + path);
  }
  struct Row {
    int i, j, label, tie;
  };
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw DataError("expected 6 columns per raster row in " + path);
    }
    Row row;
    row.i = static_cast<int>(parse_double(fields[0], path));
    row.j = static_cast<int>(parse_double(fields[1], path));
    row.label =
        static_cast<int>(encode_treatments(parse_treatment_label(fields[4])));
    row.tie = static_cast<int>(parse_double(fields[5], path));
    rows.push_back(row);
  }
  const double side = std::sqrt(static_cast<double>(rows.size()));
  const int n = static_cast<int>(std::lround(side));
  if (n < 2 || static_cast<std::size_t>(n) * n != rows.size()) {
    throw DataError("raster csv is not a square grid: " + path);
  }
  LevelSetRaster raster;
  raster.resolution = n;
  raster.labels.setConstant(n, n, -1);
  raster.tie_mask.setZero(n, n);
  for (const Row& row : rows) {
    if (row.i < 0 || row.i >= n || row.j < 0 || row.j >= n) {
      throw DataError("raster cell index out of range in " + path);
    }
    raster.labels(row.i, row.j) = row.label;
    raster.tie_mask(row.i, row.j) = row.tie;
  }
  if ((raster.labels.array() < 0).any()) {
    throw DataError("raster csv misses at least one cell: " + path);
  }
  return raster;
}

std::string raster_filename(RegularizerKind reg, double lambda, int resolution,
                            const std::string& ext) {
  return to_string(reg) + "_" + format_double_short(lambda) + "_" +
         std::to_string(resolution) + "." + ext;
}

}  // namespace fairprop
