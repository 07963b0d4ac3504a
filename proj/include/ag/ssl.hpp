#pragma once

#include <cstdint>

#include "ag/volume.hpp"

namespace ag::ssl {

struct NoiseSpec {
    double mean = 0.0;
    double stddev = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Replaces every voxel of `image` inside `wall` with an independent
/// Normal(mean, stddev^2) draw. Draws are taken in z-major order from one
/// seeded stream; voxels outside `wall` are copied unchanged.
RealGrid mask_bowel_wall(const RealGrid& image, const Mask& wall, const NoiseSpec& noise);

/// Mean absolute difference over all voxels.
double l1_recon_loss(const RealGrid& image, const RealGrid& recon);

/// Mean absolute difference over the voxels of `region` only (0 if empty).
double l1_recon_loss(const RealGrid& image, const RealGrid& recon, const Mask& region);

}  // namespace ag::ssl
