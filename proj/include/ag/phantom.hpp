#pragma once

#include <cstdint>

#include "ag/volume.hpp"

namespace ag::phantom {

struct Intensity {
    double mean = 0.0;
    double stddev = 0.0;
};

/// Synthetic abdomen: a hollow tube bent along a 270 degree arc in the
/// central axial plane, a spherical tumour on its wall, and random
/// ellipsoidal distractor organs. Lengths are in millimetres.
struct PhantomSpec {
    Dims dims{64, 96, 96};
    Spacing spacing{2.5, 1.0, 1.0};
    double arc_radius_mm = 28.0;
    double tube_radius_mm = 10.0;
    double wall_thickness_mm = 3.0;
    double tumor_radius_mm = 6.0;
    /// Arc position of the tumour, degrees from the +x axis towards +y.
    double tumor_angle_deg = 135.0;
    int n_distractors = 3;
    Intensity background{-1.0, 0.2};
    Intensity lumen{-0.5, 0.2};
    Intensity wall{0.6, 0.15};
    Intensity tumor{1.0, 0.2};
    Intensity organ{0.8, 0.2};
    std::uint64_t seed = 7;

    void validate() const;
};

inline constexpr std::int32_t kBackground = 0;
inline constexpr std::int32_t kColon = 1;
inline constexpr std::int32_t kFirstDistractor = 2;
inline constexpr double kArcSpanDeg = 270.0;

struct Phantom {
    RealGrid ct;
    /// 0 background, 1 colon (wall, lumen and tumour tissue), 2.. distractors.
    LabelGrid labels;
    Mask tumor;
};

Phantom gen_phantom(const PhantomSpec& spec);

/// Distance (mm) from a voxel centre to the tube centreline.
double centerline_distance_mm(const PhantomSpec& spec, const Coord& c);

/// In-plane angle of a voxel around the arc centre, degrees in [0, 360).
double arc_angle_deg(const PhantomSpec& spec, const Coord& c);

/// Voxels whose centreline distance lies in [tube - wall, tube].
Mask analytic_wall(const PhantomSpec& spec);

/// Wall voxel the tumour sphere is centred on.
Coord tumor_center(const PhantomSpec& spec);

/// Copy of `labels` with colon voxels whose arc angle lies in
/// [from_deg, to_deg] reset to background; simulates a segmentation miss.
LabelGrid erase_colon_segment(const LabelGrid& labels, const PhantomSpec& spec,
                              double from_deg, double to_deg);

}  // namespace ag::phantom
