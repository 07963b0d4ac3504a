#pragma once

#include <string>
#include <vector>

#include "ag/volume.hpp"

namespace ag::metrics {

struct MetricReport {
    double dice = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double nsd = 0.0;
    double hd95_mm = 0.0;
};

struct MetricOptions {
    double nsd_tol_mm = 4.0;
    /// HD95 reported when exactly one of the two surfaces is empty.
    double hd_penalty_mm = 1000.0;
};

/// Exact Euclidean distance (mm) from every voxel to the nearest true voxel,
/// using per-axis spacing. All +infinity when the mask is empty.
RealGrid edt(const Mask& mask, const Spacing& spacing);

/// True voxels with at least one face neighbour that is false or outside the grid.
Mask surface_voxels(const Mask& mask);

/// Distances (mm) from each surface voxel of `from` to the nearest surface
/// voxel of `to`, in z-major order of `from`'s surface.
std::vector<double> directed_surface_distances(const Mask& from, const Mask& to);

/// Nearest-rank percentile: the ceil(q/100 * m)-th smallest value. `q` in (0, 100].
double nearest_rank_percentile(std::vector<double> values, double q);

/// Overlap and surface metrics of a prediction against ground truth. Both
/// grids must share dims and spacing; distances use that spacing.
MetricReport seg_metrics(const Mask& truth, const Mask& pred, const MetricOptions& opts = {});

}  // namespace ag::metrics
