#include "ag/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "ag/random.hpp"

namespace ag::phantom {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Decorrelates the distractor-placement stream from the intensity stream.
constexpr std::uint64_t kPlacementSalt = 0x9E3779B97F4A7C15ULL;

struct Point {
    double z, y, x;
};

Point centre_mm(const PhantomSpec& s) {
    return {0.5 * static_cast<double>(s.dims.nz - 1) * s.spacing.sz,
            0.5 * static_cast<double>(s.dims.ny - 1) * s.spacing.sy,
            0.5 * static_cast<double>(s.dims.nx - 1) * s.spacing.sx};
}

Point position_mm(const PhantomSpec& s, const Coord& c) {
    return {static_cast<double>(c.z) * s.spacing.sz, static_cast<double>(c.y) * s.spacing.sy,
            static_cast<double>(c.x) * s.spacing.sx};
}

Point arc_point(const PhantomSpec& s, double angle_deg, double radius) {
    const Point o = centre_mm(s);
    const double a = angle_deg * kDegToRad;
    return {o.z, o.y + radius * std::sin(a), o.x + radius * std::cos(a)};
}

double distance(const Point& a, const Point& b) {
    return std::sqrt((a.z - b.z) * (a.z - b.z) + (a.y - b.y) * (a.y - b.y) +
                     (a.x - b.x) * (a.x - b.x));
}

struct Ellipsoid {
    Point centre;
    Point semi_axes;
};

bool inside(const Ellipsoid& e, const Point& p) {
    const double dz = (p.z - e.centre.z) / e.semi_axes.z;
    const double dy = (p.y - e.centre.y) / e.semi_axes.y;
    const double dx = (p.x - e.centre.x) / e.semi_axes.x;
    return dz * dz + dy * dy + dx * dx <= 1.0;
}

}  // namespace

void PhantomSpec::validate() const {
    validate_dims(dims);
    validate_spacing(spacing);
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(arc_radius_mm) || !positive(tube_radius_mm) ||
        !positive(wall_thickness_mm) || !positive(tumor_radius_mm)) {
        throw InvalidArgument("phantom: radii and wall thickness must be positive");
    }
    if (!(wall_thickness_mm < tube_radius_mm)) {
        throw InvalidArgument("phantom: wall thickness must be smaller than the tube radius");
    }
    if (!(tube_radius_mm < arc_radius_mm)) {
        throw InvalidArgument("phantom: tube radius must be smaller than the arc radius");
    }
    const Point half = centre_mm(*this);
    if (arc_radius_mm + tube_radius_mm > std::min(half.y, half.x) ||
        tube_radius_mm > half.z) {
        throw InvalidArgument("phantom: tube does not fit inside the volume");
    }
    if (!std::isfinite(tumor_angle_deg) || tumor_angle_deg < 0.0 ||
        tumor_angle_deg > kArcSpanDeg) {
        throw InvalidArgument("phantom: tumor angle must lie on the arc [0, 270]");
    }
    if (n_distractors < 0) throw InvalidArgument("phantom: n_distractors must be >= 0");
    for (const Intensity& i : {background, lumen, wall, tumor, organ}) {
        if (!std::isfinite(i.mean) || !(i.stddev >= 0.0) || !std::isfinite(i.stddev)) {
            throw InvalidArgument("phantom: intensity mean/stddev must be finite, stddev >= 0");
        }
    }
}

double arc_angle_deg(const PhantomSpec& spec, const Coord& c) {
    const Point o = centre_mm(spec);
    const Point p = position_mm(spec, c);
    double a = std::atan2(p.y - o.y, p.x - o.x) / kDegToRad;
    if (a < 0.0) a += 360.0;
    return a;
}

double centerline_distance_mm(const PhantomSpec& spec, const Coord& c) {
    const Point o = centre_mm(spec);
    const Point p = position_mm(spec, c);
    const double angle = arc_angle_deg(spec, c);
    if (angle <= kArcSpanDeg) {
        const double rho = std::hypot(p.y - o.y, p.x - o.x);
        return std::hypot(rho - spec.arc_radius_mm, p.z - o.z);
    }
    return std::min(distance(p, arc_point(spec, 0.0, spec.arc_radius_mm)),
                    distance(p, arc_point(spec, kArcSpanDeg, spec.arc_radius_mm)));
}

Mask analytic_wall(const PhantomSpec& spec) {
    spec.validate();
    Mask wall(spec.dims, spec.spacing, std::uint8_t{0});
    const double inner = spec.tube_radius_mm - spec.wall_thickness_mm;
    for (std::size_t i = 0; i < wall.size(); ++i) {
        const double d = centerline_distance_mm(spec, wall.coord(i));
        wall[i] = (d >= inner && d <= spec.tube_radius_mm) ? 1 : 0;
    }
    return wall;
}

Coord tumor_center(const PhantomSpec& spec) {
    spec.validate();
    const Point ideal = arc_point(spec, spec.tumor_angle_deg,
                                  spec.arc_radius_mm + spec.tube_radius_mm -
                                      0.5 * spec.wall_thickness_mm);
    const Mask wall = analytic_wall(spec);
    Coord best{};
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < wall.size(); ++i) {
        if (!wall[i]) continue;
        const Coord c = wall.coord(i);
        const double d = distance(position_mm(spec, c), ideal);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    if (!std::isfinite(best_d)) {
        throw InvalidArgument("phantom: wall is thinner than the voxel grid can resolve");
    }
    return best;
}

Phantom gen_phantom(const PhantomSpec& spec) {
    spec.validate();
    const Dims& d = spec.dims;
    LabelGrid labels(d, spec.spacing, kBackground);
    Mask tumor(d, spec.spacing, std::uint8_t{0});

    enum class Region : std::uint8_t { Background, Lumen, Wall, Tumor, Organ };
    std::vector<Region> region(d.voxels(), Region::Background);

    const double inner = spec.tube_radius_mm - spec.wall_thickness_mm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double dist = centerline_distance_mm(spec, labels.coord(i));
        if (dist <= spec.tube_radius_mm) {
            labels[i] = kColon;
            region[i] = dist >= inner ? Region::Wall : Region::Lumen;
        }
    }

    const Point tc = position_mm(spec, tumor_center(spec));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (distance(position_mm(spec, labels.coord(i)), tc) <= spec.tumor_radius_mm) {
            tumor[i] = 1;
            labels[i] = kColon;
            region[i] = Region::Tumor;
        }
    }

    Rng placement(spec.seed ^ kPlacementSalt);
    const Point extent{static_cast<double>(d.nz - 1) * spec.spacing.sz,
                       static_cast<double>(d.ny - 1) * spec.spacing.sy,
                       static_cast<double>(d.nx - 1) * spec.spacing.sx};
    for (int k = 0; k < spec.n_distractors; ++k) {
        Ellipsoid e;
        e.centre = {placement.uniform(0.0, extent.z), placement.uniform(0.0, extent.y),
                    placement.uniform(0.0, extent.x)};
        e.semi_axes = {placement.uniform(8.0, 20.0), placement.uniform(6.0, 14.0),
                       placement.uniform(6.0, 14.0)};
        const std::int32_t code = kFirstDistractor + k;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != kBackground) continue;
            if (inside(e, position_mm(spec, labels.coord(i)))) {
                labels[i] = code;
                region[i] = Region::Organ;
            }
        }
    }

    RealGrid ct(d, spec.spacing, 0.0);
    Rng intensities(spec.seed);
    for (std::size_t i = 0; i < ct.size(); ++i) {
        const Intensity* level = &spec.background;
        switch (region[i]) {
            case Region::Background: level = &spec.background; break;
            case Region::Lumen: level = &spec.lumen; break;
            case Region::Wall: level = &spec.wall; break;
            case Region::Tumor: level = &spec.tumor; break;
            case Region::Organ: level = &spec.organ; break;
        }
        ct[i] = intensities.normal(level->mean, level->stddev);
    }
    return {std::move(ct), std::move(labels), std::move(tumor)};
}

LabelGrid erase_colon_segment(const LabelGrid& labels, const PhantomSpec& spec,
                              double from_deg, double to_deg) {
    if (labels.dims() != spec.dims) {
        throw InvalidArgument("erase_colon_segment: labels do not match the phantom spec");
    }
    LabelGrid out = labels;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] != kColon) continue;
        const double a = arc_angle_deg(spec, out.coord(i));
        if (a >= from_deg && a <= to_deg) out[i] = kBackground;
    }
    return out;
}

}  // namespace ag::phantom
