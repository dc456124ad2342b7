// Level-set rasters: label every cell of an n-by-n grid over [0,1]^2 with
// the canonical optimal treatment vector for a two-agent, two-group
// population whose belief pair sits at the cell center. Exports to CSV and
// binary PGM for downstream plotting.
#pragma once

#include "fairprop/core.hpp"

#include <Eigen/Dense>

#include <string>

namespace fairprop {

struct LevelSetRaster {
  int resolution = 0;
  double lambda = 0.0;
  RegularizerKind regularizer = RegularizerKind::None;
  LossKind loss = LossKind::ZeroOne;
  // labels(i, j) is the lexicographic rank of the canonical (smallest)
  // minimizer at p = ((i+0.5)/n, (j+0.5)/n); tie_mask(i, j) is 1 where the
  // minimizer set has more than one element.
  Eigen::MatrixXi labels;
  Eigen::MatrixXi tie_mask;

  // Belief coordinate of a cell center along either axis.
  double center(int idx) const {
    return (idx + 0.5) / static_cast<double>(resolution);
  }
};

// Brute-force rasterization at each cell center for the two-agent
// population with groups (a, b) under zero-one loss.
LevelSetRaster rasterize(RegularizerKind reg, double lambda, int resolution,
                         int jobs = 1);

// Fraction of grid cells whose canonical label is t.
double cell_area(const LevelSetRaster& raster, const TreatmentVector& t);

// CSV rows "i,j,p1,p2,label,tie" (header included); labels are treatment
// digit strings such as "10".
void export_raster_csv(const LevelSetRaster& raster, const std::string& path);

// 8-bit binary graymap ("P5"); the label-to-gray mapping and the row
// orientation are documented in header comments. Tie information is not
// representable in PGM and is dropped.
void export_raster_pgm(const LevelSetRaster& raster, const std::string& path);

void export_raster(const LevelSetRaster& raster, const std::string& path,
                   const std::string& format);

// Rebuilds grid geometry (resolution, labels, ties) from an exported CSV.
// The objective metadata (regularizer, lambda) is not stored in the CSV and
// stays at its defaults.
LevelSetRaster load_raster_csv(const std::string& path);

// Conventional file name {reg}_{lambda}_{n}.{ext}.
std::string raster_filename(RegularizerKind reg, double lambda, int resolution,
                            const std::string& ext);

}  // namespace fairprop
