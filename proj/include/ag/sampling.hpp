#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ag/volume.hpp"

namespace ag::sampling {

/// Training patch size and the truncated Gaussian kernel derived from it.
///
/// The kernel covariance is diag(0.1 * size). By default those entries are
/// variances; with `sigma_is_stddev` they are standard deviations instead.
/// The kernel support is |q - p| <= floor(size / 2) per axis, inclusive.
struct PatchSpec {
    Extent3 size{16, 64, 64};
    bool sigma_is_stddev = false;

    void validate() const;

    /// Per-axis variance of the kernel, (z, y, x).
    [[nodiscard]] std::array<double, 3> variances() const;
    /// Per-axis inclusive half-width floor(size / 2), (z, y, x).
    [[nodiscard]] std::array<std::int64_t, 3> half_widths() const;
    /// (2 pi)^(-3/2) det(Sigma)^(-1/2).
    [[nodiscard]] double norm_const() const;
};

struct GainField {
    RealGrid grid;
    PatchSpec patch;
};

/// Per-voxel probabilities over the whole grid; nonnegative, summing to 1.
class SamplingMap {
public:
    SamplingMap() = default;
    /// Validates nonnegativity and that the values sum to 1 within `tolerance`.
    explicit SamplingMap(RealGrid probabilities, double tolerance = 1e-9);

    /// Normalises arbitrary nonnegative weights (e.g. a map re-read from float32).
    static SamplingMap from_weights(RealGrid weights);

    [[nodiscard]] const RealGrid& grid() const noexcept { return grid_; }

private:
    RealGrid grid_;
};

/// Gain of every voxel: inner product of the truncated Gaussian kernel centred
/// there with the zero-padded interest mask. Computed as three 1D passes.
GainField gain_map(const Mask& interest, const PatchSpec& patch);

/// Direct triple-loop evaluation of the gain at one voxel.
double gain_at_naive(const Mask& interest, const PatchSpec& patch, const Coord& p);

/// s_i proportional to g_i / mu + 1 / n, normalised to sum to 1.
SamplingMap psm_from_gain(const GainField& gain, double mu = 1.0);

/// (1 - lambda) * organ + lambda * tumor.
SamplingMap combine_psm(const SamplingMap& organ, const SamplingMap& tumor,
                        double lambda = 0.33);

/// `count` independent categorical draws by inverse CDF over the flat z-major
/// order. Identical (map, count, seed) give identical output.
std::vector<Coord> draw_centers(const SamplingMap& map, std::size_t count,
                                std::uint64_t seed);

/// Compensated (Neumaier) sum in index order.
double stable_sum(std::span<const double> values);

}  // namespace ag::sampling
