#include "ag/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ag/random.hpp"

namespace ag::sampling {

namespace {

/// w[k] = exp(-k^2 / (2 var)) for k = 0..half.
std::vector<double> half_kernel(double variance, std::int64_t half) {
    std::vector<double> w(static_cast<std::size_t>(half) + 1);
    for (std::int64_t k = 0; k <= half; ++k) {
        const auto kk = static_cast<double>(k * k);
        w[static_cast<std::size_t>(k)] = std::exp(-kk / (2.0 * variance));
    }
    return w;
}

/// Truncated 1D correlation of `src` with a symmetric kernel along one axis.
/// `stride` steps one voxel along the axis; each of `line_starts` begins a
/// line of `length` voxels.
void convolve_axis(const std::vector<double>& src, std::vector<double>& dst,
                   const std::vector<std::size_t>& line_starts, std::size_t stride,
                   std::int64_t length, const std::vector<double>& w) {
    const auto half = static_cast<std::int64_t>(w.size()) - 1;
    for (std::size_t start : line_starts) {
        for (std::int64_t i = 0; i < length; ++i) {
            const std::int64_t lo = std::max<std::int64_t>(i - half, 0);
            const std::int64_t hi = std::min<std::int64_t>(i + half, length - 1);
            double acc = 0.0;
            for (std::int64_t j = lo; j <= hi; ++j) {
                const double v = src[start + static_cast<std::size_t>(j) * stride];
                if (v != 0.0) acc += w[static_cast<std::size_t>(std::abs(j - i))] * v;
            }
            dst[start + static_cast<std::size_t>(i) * stride] = acc;
        }
    }
}

}  // namespace

void PatchSpec::validate() const {
    if (size.z < 1 || size.y < 1 || size.x < 1) {
        throw InvalidArgument("patch size components must be >= 1");
    }
    const double c = norm_const();
    if (!(std::isfinite(c) && c > 0.0)) {
        throw InvalidArgument("patch kernel normalising constant is not finite");
    }
}

std::array<double, 3> PatchSpec::variances() const {
    std::array<double, 3> v{0.1 * static_cast<double>(size.z),
                            0.1 * static_cast<double>(size.y),
                            0.1 * static_cast<double>(size.x)};
    if (sigma_is_stddev) {
        for (auto& s : v) s *= s;
    }
    return v;
}

std::array<std::int64_t, 3> PatchSpec::half_widths() const {
    return {size.z / 2, size.y / 2, size.x / 2};
}

double PatchSpec::norm_const() const {
    const auto v = variances();
    return std::pow(2.0 * std::numbers::pi, -1.5) / std::sqrt(v[0] * v[1] * v[2]);
}

SamplingMap::SamplingMap(RealGrid probabilities, double tolerance)
    : grid_(std::move(probabilities)) {
    for (double v : grid_.data()) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("sampling map values must be finite and nonnegative");
        }
    }
    const double total = stable_sum(grid_.data());
    if (std::abs(total - 1.0) > tolerance) {
        throw InvalidArgument("sampling map sums to " + std::to_string(total) +
                              ", expected 1");
    }
}

SamplingMap SamplingMap::from_weights(RealGrid weights) {
    for (double v : weights.data()) {
        if (!std::isfinite(v) || v < 0.0) {
            throw InvalidArgument("sampling weights must be finite and nonnegative");
        }
    }
    const double total = stable_sum(weights.data());
    if (!(total > 0.0)) throw InvalidArgument("sampling weights sum to zero");
    for (auto& v : weights.data()) v /= total;
    return SamplingMap(std::move(weights), 1e-9);
}

double stable_sum(std::span<const double> values) {
    double sum = 0.0;
    double comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

GainField gain_map(const Mask& interest, const PatchSpec& patch) {
    patch.validate();
    const Dims& d = interest.dims();
    const auto var = patch.variances();
    const auto half = patch.half_widths();

    std::vector<double> a(interest.data().begin(), interest.data().end());
    std::vector<double> b(a.size(), 0.0);

    const auto nz = static_cast<std::size_t>(d.nz);
    const auto ny = static_cast<std::size_t>(d.ny);
    const auto nx = static_cast<std::size_t>(d.nx);

    std::vector<std::size_t> starts;
    starts.reserve(nz * ny);
    for (std::size_t z = 0; z < nz; ++z)
        for (std::size_t y = 0; y < ny; ++y) starts.push_back((z * ny + y) * nx);
    convolve_axis(a, b, starts, 1, d.nx, half_kernel(var[2], half[2]));

    starts.clear();
    for (std::size_t z = 0; z < nz; ++z)
        for (std::size_t x = 0; x < nx; ++x) starts.push_back(z * ny * nx + x);
    convolve_axis(b, a, starts, nx, d.ny, half_kernel(var[1], half[1]));

    starts.clear();
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x) starts.push_back(y * nx + x);
    convolve_axis(a, b, starts, ny * nx, d.nz, half_kernel(var[0], half[0]));

    const double c = patch.norm_const();
    for (auto& v : b) v *= c;
    return {RealGrid(d, interest.spacing(), std::move(b)), patch};
}

double gain_at_naive(const Mask& interest, const PatchSpec& patch, const Coord& p) {
    patch.validate();
    const auto var = patch.variances();
    const auto half = patch.half_widths();
    const double c = patch.norm_const();
    double g = 0.0;
    for (std::int64_t dz = -half[0]; dz <= half[0]; ++dz) {
        for (std::int64_t dy = -half[1]; dy <= half[1]; ++dy) {
            for (std::int64_t dx = -half[2]; dx <= half[2]; ++dx) {
                const Coord q{p.z + dz, p.y + dy, p.x + dx};
                if (!interest.contains(q) || !interest.at(q)) continue;
                const double quad = static_cast<double>(dz * dz) / var[0] +
                                    static_cast<double>(dy * dy) / var[1] +
                                    static_cast<double>(dx * dx) / var[2];
                g += c * std::exp(-0.5 * quad);
            }
        }
    }
    return g;
}

SamplingMap psm_from_gain(const GainField& gain, double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw InvalidArgument("psm_from_gain: mu must be positive and finite");
    }
    const RealGrid& g = gain.grid;
    const double mean = 1.0 / static_cast<double>(g.size());
    std::vector<double> s(g.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(g[i] >= 0.0) || !std::isfinite(g[i])) {
            throw InvalidArgument("psm_from_gain: gain values must be finite and nonnegative");
        }
        s[i] = g[i] / mu + mean;
    }
    const double total = stable_sum(s);
    for (auto& v : s) v /= total;
    return SamplingMap(RealGrid(g.dims(), g.spacing(), std::move(s)));
}

SamplingMap combine_psm(const SamplingMap& organ, const SamplingMap& tumor, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument("combine_psm: lambda must lie in [0, 1]");
    }
    require_same_geometry(organ.grid(), tumor.grid(), "combine_psm");
    const auto a = organ.grid().data();
    const auto b = tumor.grid().data();
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (1.0 - lambda) * a[i] + lambda * b[i];
    }
    return SamplingMap(RealGrid(organ.grid().dims(), organ.grid().spacing(), std::move(out)));
}

std::vector<Coord> draw_centers(const SamplingMap& map, std::size_t count,
                                std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("draw_centers: count must be >= 1");
    const auto p = map.grid().data();
    std::vector<double> cdf(p.size());
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        running += p[i];
        cdf[i] = running;
        if (p[i] > 0.0) last_positive = i;
    }
    Rng rng(seed);
    std::vector<Coord> centers;
    centers.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double u = rng.uniform01() * running;
        auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                                            cdf.begin());
        if (idx > last_positive) idx = last_positive;
        centers.push_back(map.grid().coord(idx));
    }
    return centers;
}

}  // namespace ag::sampling
