#include <doctest.h>

#include <random>

#include "ag/morphology.hpp"
#include "oracles.hpp"

using namespace ag;
using morph::StructElem;

namespace {

/// Union of each voxel with its neighbourhood, written directly from the
/// definition of the structuring element.
Mask neighbourhood_union(const Mask& in, StructElem elem) {
    Mask out(in.dims(), in.spacing(), std::uint8_t{0});
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (!in[i]) continue;
        const Coord c = in.coord(i);
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int l1 = std::abs(dz) + std::abs(dy) + std::abs(dx);
                    if (elem == StructElem::Face6 && l1 > 1) continue;
                    const Coord q{c.z + dz, c.y + dy, c.x + dx};
                    if (out.contains(q)) out.at(q) = 1;
                }
    }
    return out;
}

/// Mask with a false one-voxel border so complement duality holds with zero padding.
Mask interior_random(std::mt19937_64& rng, const Dims& d, double density) {
    Mask m = test::random_mask(rng, d, density);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Coord c = m.coord(i);
        if (c.z == 0 || c.y == 0 || c.x == 0 || c.z == d.nz - 1 || c.y == d.ny - 1 ||
            c.x == d.nx - 1) {
            m[i] = 0;
        }
    }
    return m;
}

}  // namespace

TEST_SUITE("morphology") {

TEST_CASE("dilation basics") {
    const Mask empty({9, 9, 9}, {}, std::uint8_t{0});
    for (auto e : {StructElem::Face6, StructElem::Full26}) {
        CHECK(morph::dilate(empty, e, 5) == empty);
    }
    Mask dot = empty;
    dot.at({4, 4, 4}) = 1;
    CHECK(count_true(morph::dilate(dot, StructElem::Face6, 1)) == 7);
    CHECK(count_true(morph::dilate(dot, StructElem::Full26, 1)) == 27);
    CHECK(morph::dilate(dot, StructElem::Face6, 0) == dot);
    CHECK_THROWS_AS(morph::dilate(dot, StructElem::Face6, -1), InvalidArgument);
}

TEST_CASE("dilation matches repeated neighbourhood union") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const Mask m = test::random_mask(rng, {8, 8, 8}, 0.05);
        for (auto e : {StructElem::Face6, StructElem::Full26}) {
            const Mask expect = neighbourhood_union(neighbourhood_union(m, e), e);
            REQUIRE(morph::dilate(m, e, 2) == expect);
        }
    }
}

TEST_CASE("erosion basics") {
    const Mask full({5, 6, 7}, {}, std::uint8_t{1});
    const Mask eroded = morph::erode(full, StructElem::Face6, 1);
    for (std::size_t i = 0; i < eroded.size(); ++i) {
        const Coord c = eroded.coord(i);
        const bool interior = c.z > 0 && c.y > 0 && c.x > 0 && c.z < 4 && c.y < 5 && c.x < 6;
        REQUIRE(static_cast<bool>(eroded[i]) == interior);
    }
    Mask dot({9, 9, 9}, {}, std::uint8_t{0});
    dot.at({4, 4, 4}) = 1;
    CHECK(morph::erode(morph::dilate(dot, StructElem::Face6, 1), StructElem::Face6, 1) == dot);
}

TEST_CASE("packed path equals naive path across shapes and word boundaries") {
    std::mt19937_64 rng(99);
    const std::int64_t widths[] = {1, 2, 63, 64, 65, 130};
    for (std::int64_t nx : widths) {
        for (double density : {0.1, 0.5, 0.9}) {
            const Mask m = test::random_mask(rng, {3, 4, nx}, density);
            for (auto e : {StructElem::Face6, StructElem::Full26}) {
                for (int t : {1, 2, 3}) {
                    CAPTURE(nx);
                    CAPTURE(t);
                    REQUIRE(morph::dilate(m, e, t) == morph::naive::dilate(m, e, t));
                    REQUIRE(morph::erode(m, e, t) == morph::naive::erode(m, e, t));
                }
            }
        }
    }
}

TEST_CASE("morphology laws on random masks") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 30; ++trial) {
        const Dims d = test::random_dims(rng, 3, 10);
        const Mask a = interior_random(rng, d, 0.4);
        const Mask extra = test::random_mask(rng, d, 0.2);
        const Mask b = binary_combine(a, extra, BoolOp::Or);  // a is a subset of b
        for (auto e : {StructElem::Face6, StructElem::Full26}) {
            REQUIRE(is_subset(a, morph::dilate(a, e, 1)));
            REQUIRE(is_subset(morph::erode(a, e, 1), a));
            REQUIRE(is_subset(morph::dilate(a, e, 2), morph::dilate(b, e, 2)));
            REQUIRE(is_subset(morph::erode(a, e, 2), morph::erode(b, e, 2)));
            REQUIRE(morph::dilate(a, e, 3) == morph::dilate(morph::dilate(a, e, 1), e, 2));
            REQUIRE(morph::erode(a, e, 1) ==
                    logical_not(morph::dilate(logical_not(a), e, 1)));
        }
    }
}

TEST_CASE("boundary_band") {
    Mask cube({11, 11, 11}, {}, std::uint8_t{0});
    for (int z = 3; z <= 7; ++z)
        for (int y = 3; y <= 7; ++y)
            for (int x = 3; x <= 7; ++x) cube.at({z, y, x}) = 1;

    const Mask band = morph::boundary_band(cube, StructElem::Face6, 1, 1);
    const Mask expect =
        binary_combine(neighbourhood_union(cube, StructElem::Face6),
                       logical_not(neighbourhood_union(logical_not(cube), StructElem::Face6)),
                       BoolOp::AndNot);
    CHECK(band == expect);
    // 5^3 cube: dilated = 125 + 6*25 = 275 voxels, eroded = 27; band = 248.
    CHECK(count_true(band) == 248);
    for (const Coord& c : test::brute_surface(cube)) CHECK(band.at(c) == 1);

    const Mask empty({6, 6, 6}, {}, std::uint8_t{0});
    CHECK(morph::boundary_band(empty, StructElem::Face6, 2, 2) == empty);
    CHECK(morph::boundary_band(cube, StructElem::Full26, 0, 0) ==
          Mask(cube.dims(), cube.spacing(), std::uint8_t{0}));
    CHECK_THROWS_AS(morph::boundary_band(cube, StructElem::Face6, -1, 0), InvalidArgument);
}

TEST_CASE("boundary_band contains the face boundary for r >= 1") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        const Mask m = test::random_mask(rng, test::random_dims(rng, 2, 9), 0.5);
        for (int r : {1, 2}) {
            const Mask band = morph::boundary_band(m, StructElem::Face6, r, r);
            for (const Coord& c : test::brute_surface(m)) REQUIRE(band.at(c) == 1);
        }
    }
}

TEST_CASE("structuring element names") {
    CHECK(morph::struct_elem_from_string("face6") == StructElem::Face6);
    CHECK(morph::struct_elem_from_string("full-26") == StructElem::Full26);
    CHECK_THROWS_AS(morph::struct_elem_from_string("ball"), InvalidArgument);
}

}
