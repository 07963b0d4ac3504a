#include "ag/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ag::metrics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// One axis of the separable squared-distance transform (lower envelope of
/// parabolas). `f` holds the current squared distances along one line;
/// infinite entries are not sites.
void envelope_1d(const std::vector<double>& f, std::vector<double>& out, double w,
                 std::vector<std::int64_t>& v, std::vector<double>& z) {
    const auto n = static_cast<std::int64_t>(f.size());
    const double w2 = w * w;
    auto intersect = [&](std::int64_t q, std::int64_t p) {
        const auto qd = static_cast<double>(q);
        const auto pd = static_cast<double>(p);
        return ((f[q] + w2 * qd * qd) - (f[p] + w2 * pd * pd)) / (2.0 * w2 * (qd - pd));
    };
    std::int64_t k = -1;
    for (std::int64_t q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = intersect(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = intersect(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(out.begin(), out.end(), kInf);
        return;
    }
    k = 0;
    for (std::int64_t q = 0; q < n; ++q) {
        while (z[k + 1] < static_cast<double>(q)) ++k;
        const auto d = static_cast<double>(q - v[k]);
        out[q] = w2 * d * d + f[v[k]];
    }
}

/// Applies envelope_1d along one axis of a flat z-major buffer.
void edt_pass(std::vector<double>& data, const Dims& d, int axis, double w) {
    const std::int64_t len = axis == 0 ? d.nz : axis == 1 ? d.ny : d.nx;
    const std::size_t stride = axis == 0   ? static_cast<std::size_t>(d.ny * d.nx)
                               : axis == 1 ? static_cast<std::size_t>(d.nx)
                                           : 1;
    std::vector<double> line(static_cast<std::size_t>(len));
    std::vector<double> out(static_cast<std::size_t>(len));
    std::vector<std::int64_t> v(static_cast<std::size_t>(len));
    std::vector<double> z(static_cast<std::size_t>(len) + 1);
    auto run = [&](std::size_t start) {
        for (std::int64_t i = 0; i < len; ++i) line[i] = data[start + i * stride];
        envelope_1d(line, out, w, v, z);
        for (std::int64_t i = 0; i < len; ++i) data[start + i * stride] = out[i];
    };
    const auto nz = static_cast<std::size_t>(d.nz);
    const auto ny = static_cast<std::size_t>(d.ny);
    const auto nx = static_cast<std::size_t>(d.nx);
    if (axis == 2) {
        for (std::size_t r = 0; r < nz * ny; ++r) run(r * nx);
    } else if (axis == 1) {
        for (std::size_t zz = 0; zz < nz; ++zz)
            for (std::size_t x = 0; x < nx; ++x) run(zz * ny * nx + x);
    } else {
        for (std::size_t r = 0; r < ny * nx; ++r) run(r);
    }
}

}  // namespace

RealGrid edt(const Mask& mask, const Spacing& spacing) {
    validate_spacing(spacing);
    const Dims& d = mask.dims();
    std::vector<double> sq(mask.size());
    const auto m = mask.data();
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = m[i] ? 0.0 : kInf;
    edt_pass(sq, d, 2, spacing.sx);
    edt_pass(sq, d, 1, spacing.sy);
    edt_pass(sq, d, 0, spacing.sz);
    for (auto& v : sq) v = std::sqrt(v);
    return RealGrid(d, spacing, std::move(sq));
}

Mask surface_voxels(const Mask& mask) {
    Mask out(mask.dims(), mask.spacing(), std::uint8_t{0});
    const Dims& d = mask.dims();
    constexpr std::array<std::array<int, 3>, 6> kFaces{
        {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}}};
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            for (std::int64_t x = 0; x < d.nx; ++x) {
                if (!mask.at({z, y, x})) continue;
                for (const auto& f : kFaces) {
                    const Coord q{z + f[0], y + f[1], x + f[2]};
                    if (!mask.contains(q) || !mask.at(q)) {
                        out.at({z, y, x}) = 1;
                        break;
                    }
                }
            }
        }
    }
    return out;
}

std::vector<double> directed_surface_distances(const Mask& from, const Mask& to) {
    require_same_geometry(from, to, "directed_surface_distances");
    const Mask from_surface = surface_voxels(from);
    const RealGrid dist = edt(surface_voxels(to), to.spacing());
    std::vector<double> out;
    for (std::size_t i = 0; i < from_surface.size(); ++i) {
        if (from_surface[i]) out.push_back(dist[i]);
    }
    return out;
}

double nearest_rank_percentile(std::vector<double> values, double q) {
    if (values.empty()) throw InvalidArgument("nearest_rank_percentile: no values");
    if (!(q > 0.0 && q <= 100.0)) {
        throw InvalidArgument("nearest_rank_percentile: q must lie in (0, 100]");
    }
    const auto m = static_cast<double>(values.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * m / 100.0));
    rank = std::clamp<std::size_t>(rank, 1, values.size());
    auto nth = values.begin() + static_cast<std::ptrdiff_t>(rank - 1);
    std::nth_element(values.begin(), nth, values.end());
    return *nth;
}

MetricReport seg_metrics(const Mask& truth, const Mask& pred, const MetricOptions& opts) {
    require_same_geometry(truth, pred, "seg_metrics");
    if (!(opts.nsd_tol_mm >= 0.0) || !(opts.hd_penalty_mm >= 0.0)) {
        throw InvalidArgument("seg_metrics: tolerance and penalty must be >= 0");
    }
    std::size_t n_truth = 0;
    std::size_t n_pred = 0;
    std::size_t n_both = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        n_truth += truth[i] ? 1 : 0;
        n_pred += pred[i] ? 1 : 0;
        n_both += (truth[i] && pred[i]) ? 1 : 0;
    }
    MetricReport r;
    if (n_truth == 0 && n_pred == 0) {
        r.dice = r.precision = r.recall = r.nsd = 1.0;
        r.hd95_mm = 0.0;
        return r;
    }
    const auto both = static_cast<double>(n_both);
    r.dice = 2.0 * both / static_cast<double>(n_truth + n_pred);
    r.precision = n_pred == 0 ? 0.0 : both / static_cast<double>(n_pred);
    r.recall = n_truth == 0 ? 0.0 : both / static_cast<double>(n_truth);
    if (n_truth == 0 || n_pred == 0) {
        r.nsd = 0.0;
        r.hd95_mm = opts.hd_penalty_mm;
        return r;
    }
    const std::vector<double> pred_to_truth = directed_surface_distances(pred, truth);
    const std::vector<double> truth_to_pred = directed_surface_distances(truth, pred);
    auto within = [&](const std::vector<double>& ds) {
        return static_cast<std::size_t>(std::count_if(
            ds.begin(), ds.end(), [&](double v) { return v <= opts.nsd_tol_mm; }));
    };
    r.nsd = static_cast<double>(within(pred_to_truth) + within(truth_to_pred)) /
            static_cast<double>(pred_to_truth.size() + truth_to_pred.size());
    r.hd95_mm = std::max(nearest_rank_percentile(pred_to_truth, 95.0),
                         nearest_rank_percentile(truth_to_pred, 95.0));
    return r;
}

}  // namespace ag::metrics
