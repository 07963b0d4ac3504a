#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ag/loss.hpp"
#include "ag/metrics.hpp"
#include "oracles.hpp"

using namespace ag;

namespace {

Mask plate(const Dims& d, const Spacing& s, std::int64_t x) {
    Mask m(d, s, std::uint8_t{0});
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = m.coord(i).x == x ? 1 : 0;
    return m;
}

Mask with_spacing(const Mask& m, const Spacing& s) {
    return Mask(m.dims(), s, std::vector<std::uint8_t>(m.data().begin(), m.data().end()));
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("edt small cases") {
    const Spacing s{1.0, 1.0, 1.0};
    const Mask full({3, 4, 5}, s, std::uint8_t{1});
    const RealGrid zero = metrics::edt(full, s);
    for (double v : zero.data()) REQUIRE(v == 0.0);

    Mask origin({4, 4, 4}, s, std::uint8_t{0});
    origin.at({0, 0, 0}) = 1;
    const RealGrid d = metrics::edt(origin, s);
    CHECK(d.at({0, 0, 3}) == 3.0);
    CHECK(d.at({3, 3, 3}) == doctest::Approx(std::sqrt(27.0)).epsilon(1e-15));

    const RealGrid aniso = metrics::edt(origin, {2.0, 0.5, 1.0});
    CHECK(aniso.at({1, 2, 0}) == doctest::Approx(std::sqrt(4.0 + 1.0)).epsilon(1e-15));

    const Mask empty({3, 3, 3}, s, std::uint8_t{0});
    const RealGrid inf = metrics::edt(empty, s);
    for (double v : inf.data()) REQUIRE(std::isinf(v));
}

TEST_CASE("edt matches brute force under anisotropic spacing") {
    std::mt19937_64 rng(606);
    const Spacing s{5.0, 0.78, 0.78};
    for (int trial = 0; trial < 15; ++trial) {
        const Dims d = test::random_dims(rng, 1, 10);
        const double density = trial % 3 == 0 ? 0.02 : 0.2;
        const Mask m = test::random_mask(rng, d, density, s);
        const RealGrid fast = metrics::edt(m, s);
        const RealGrid slow = test::brute_edt(m, s);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (std::isinf(slow[i])) {
                REQUIRE(std::isinf(fast[i]));
            } else {
                REQUIRE(std::abs(fast[i] - slow[i]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("surface voxels") {
    Mask cube({5, 5, 5}, {}, std::uint8_t{0});
    for (int z = 1; z <= 3; ++z)
        for (int y = 1; y <= 3; ++y)
            for (int x = 1; x <= 3; ++x) cube.at({z, y, x}) = 1;
    const Mask s = metrics::surface_voxels(cube);
    CHECK(count_true(s) == 26);
    CHECK(s.at({2, 2, 2}) == 0);

    Mask dot({3, 3, 3}, {}, std::uint8_t{0});
    dot.at({1, 1, 1}) = 1;
    CHECK(metrics::surface_voxels(dot) == dot);

    const Mask full({4, 4, 4}, {}, std::uint8_t{1});
    CHECK(count_true(metrics::surface_voxels(full)) == 64 - 8);

    std::mt19937_64 rng(2);
    const Mask m = test::random_mask(rng, {6, 7, 8}, 0.6);
    const Mask fast = metrics::surface_voxels(m);
    Mask brute(m.dims(), m.spacing(), std::uint8_t{0});
    for (const Coord& c : test::brute_surface(m)) brute.at(c) = 1;
    CHECK(fast == brute);
}

TEST_CASE("nearest rank percentile") {
    std::vector<double> v(20);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(20 - i);
    CHECK(metrics::nearest_rank_percentile(v, 95.0) == 19.0);
    CHECK(metrics::nearest_rank_percentile(v, 100.0) == 20.0);
    CHECK(metrics::nearest_rank_percentile({7.0}, 95.0) == 7.0);
    CHECK(metrics::nearest_rank_percentile({1.0, 2.0, 3.0}, 95.0) == 3.0);
    CHECK_THROWS_AS(metrics::nearest_rank_percentile({}, 95.0), InvalidArgument);
    CHECK_THROWS_AS(metrics::nearest_rank_percentile({1.0}, 0.0), InvalidArgument);
    std::mt19937_64 rng(3);
    for (int m = 1; m < 300; m += 7) {
        std::vector<double> r(static_cast<std::size_t>(m));
        for (auto& x : r) x = std::uniform_real_distribution<double>(0, 10)(rng);
        REQUIRE(metrics::nearest_rank_percentile(r, 95.0) == test::brute_p95(r));
    }
}

TEST_CASE("seg_metrics edge cases") {
    std::mt19937_64 rng(7);
    const Mask y = test::random_mask(rng, {6, 6, 6}, 0.4);
    const metrics::MetricReport same = metrics::seg_metrics(y, y);
    CHECK(same.dice == 1.0);
    CHECK(same.precision == 1.0);
    CHECK(same.recall == 1.0);
    CHECK(same.nsd == 1.0);
    CHECK(same.hd95_mm == 0.0);

    const Mask empty(y.dims(), y.spacing(), std::uint8_t{0});
    const metrics::MetricReport miss = metrics::seg_metrics(y, empty);
    CHECK(miss.dice == 0.0);
    CHECK(miss.nsd == 0.0);
    CHECK(miss.hd95_mm == 1000.0);
    CHECK(metrics::seg_metrics(empty, y).hd95_mm == 1000.0);
    CHECK(metrics::seg_metrics(y, empty, {4.0, 250.0}).hd95_mm == 250.0);

    const metrics::MetricReport none = metrics::seg_metrics(empty, empty);
    CHECK(none.dice == 1.0);
    CHECK(none.nsd == 1.0);
    CHECK(none.hd95_mm == 0.0);

    CHECK_THROWS_AS(metrics::seg_metrics(y, Mask({6, 6, 7}, {}, std::uint8_t{0})),
                    InvalidArgument);
    CHECK_THROWS_AS(metrics::seg_metrics(y, with_spacing(y, {1.0, 1.0, 2.0})), InvalidArgument);
}

TEST_CASE("parallel plates") {
    const Dims d{6, 6, 12};
    const Spacing s{1.0, 1.0, 1.0};
    const Mask a = plate(d, s, 2);
    const metrics::MetricReport near = metrics::seg_metrics(a, plate(d, s, 5));
    CHECK(near.nsd == 1.0);
    CHECK(near.hd95_mm == 3.0);
    CHECK(near.dice == 0.0);
    const metrics::MetricReport far = metrics::seg_metrics(a, plate(d, s, 7));
    CHECK(far.nsd == 0.0);
    CHECK(far.hd95_mm == 5.0);
    const metrics::MetricReport edge = metrics::seg_metrics(a, plate(d, s, 6));
    CHECK(edge.nsd == 1.0);  // the tolerance is inclusive
}

TEST_CASE("seg_metrics matches the all-pairs oracle") {
    std::mt19937_64 rng(99);
    const Spacing spacings[] = {{1.0, 1.0, 1.0}, {5.0, 0.78, 0.78}, {2.5, 1.0, 0.5}};
    for (int trial = 0; trial < 30; ++trial) {
        const Spacing s = spacings[trial % 3];
        const Dims d = test::random_dims(rng, 2, 10);
        const Mask y = test::random_mask(rng, d, 0.35, s);
        const Mask p = test::random_mask(rng, d, 0.35, s);
        if (count_true(y) == 0 || count_true(p) == 0) continue;
        const metrics::MetricReport r = metrics::seg_metrics(y, p);
        const auto o = test::brute_surface_metrics(y, p, 4.0);
        REQUIRE(std::abs(r.nsd - o.nsd) <= 1e-9);
        REQUIRE(std::abs(r.hd95_mm - o.hd95) <= 1e-9);

        double tp = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) tp += (y[i] && p[i]) ? 1.0 : 0.0;
        const auto ny = static_cast<double>(count_true(y));
        const auto np = static_cast<double>(count_true(p));
        REQUIRE(r.dice == doctest::Approx(2.0 * tp / (ny + np)).epsilon(1e-15));
        REQUIRE(r.precision == doctest::Approx(tp / np).epsilon(1e-15));
        REQUIRE(r.recall == doctest::Approx(tp / ny).epsilon(1e-15));
    }
}

TEST_CASE("metric symmetries and scaling") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 15; ++trial) {
        const Dims d = test::random_dims(rng, 3, 9);
        const Spacing s{2.0, 1.0, 0.5};
        const Mask y = test::random_mask(rng, d, 0.4, s);
        const Mask p = test::random_mask(rng, d, 0.4, s);
        if (count_true(y) == 0 || count_true(p) == 0) continue;
        const auto yp = metrics::seg_metrics(y, p);
        const auto py = metrics::seg_metrics(p, y);
        REQUIRE(yp.dice == py.dice);
        REQUIRE(yp.nsd == py.nsd);
        REQUIRE(yp.hd95_mm == py.hd95_mm);
        REQUIRE(yp.precision == py.recall);

        // Hard-mask Dice agrees with one minus the soft Dice loss up to its smoothing.
        RealGrid prob(d, s, 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) prob[i] = p[i];
        REQUIRE(std::abs(yp.dice - (1.0 - loss::soft_dice_loss(y, prob))) < 1e-5);

        // Scaling all spacings scales distances and leaves NSD fixed at a scaled tolerance.
        const Spacing big{6.0, 3.0, 1.5};
        const auto scaled = metrics::seg_metrics(with_spacing(y, big), with_spacing(p, big),
                                                 {12.0, 1000.0});
        REQUIRE(scaled.dice == yp.dice);
        REQUIRE(scaled.nsd == yp.nsd);
        REQUIRE(scaled.hd95_mm == doctest::Approx(3.0 * yp.hd95_mm).epsilon(1e-12));
    }
}

}
