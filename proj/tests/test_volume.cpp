#include <doctest.h>

#include <random>

#include "ag/volume.hpp"
#include "oracles.hpp"

using namespace ag;

TEST_SUITE("volume") {

TEST_CASE("make_grid fills and validates dims") {
    const auto g = make_grid<double>({2, 2, 2}, {}, 0.0);
    CHECK(g.size() == 8);
    for (double v : g.data()) CHECK(v == 0.0);

    const auto one = make_grid<double>({1, 1, 1}, {}, 1.0);
    CHECK(one.size() == 1);
    CHECK(one[0] == 1.0);

    CHECK_THROWS_AS(make_grid<double>({0, 3, 3}, {}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid<double>({2, -1, 3}, {}, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid<double>({2, 2, 2}, {0.0, 1.0, 1.0}, 0.0), InvalidArgument);
}

TEST_CASE("grid rejects data of the wrong length") {
    CHECK_THROWS_AS(RealGrid({2, 2, 2}, {}, std::vector<double>(7)), InvalidArgument);
}

TEST_CASE("flat index and coord round-trip") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Dims d = test::random_dims(rng, 1, 9);
        const Mask m(d, {}, std::uint8_t{0});
        for (std::size_t i = 0; i < m.size(); ++i) {
            const Coord c = m.coord(i);
            REQUIRE(m.contains(c));
            REQUIRE(m.index(c) == i);
        }
    }
}

TEST_CASE("extract_patch geometry") {
    const auto ones = make_grid<double>({3, 3, 3}, {2.0, 1.0, 1.0}, 1.0);

    SUBCASE("full cover") {
        const auto p = extract_patch(ones, {1, 1, 1}, {3, 3, 3}, 0.0);
        CHECK(p == ones);
    }
    SUBCASE("corner centre overlaps one octant") {
        const auto p = extract_patch(ones, {0, 0, 0}, {3, 3, 3}, 0.0);
        int n_ones = 0;
        int n_zeros = 0;
        for (double v : p.data()) (v == 1.0 ? n_ones : n_zeros)++;
        CHECK(n_ones == 8);
        CHECK(n_zeros == 19);
        CHECK(p.spacing() == ones.spacing());
    }
    SUBCASE("even size centres on the high voxel of the central pair") {
        RealGrid ramp({6, 6, 6}, {}, 0.0);
        for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
        const Coord c{3, 2, 4};
        const auto p = extract_patch(ramp, c, {2, 2, 2}, -1.0);
        CHECK(p.at({0, 0, 0}) == ramp.at({2, 1, 3}));
        CHECK(p.at({1, 1, 1}) == ramp.at({3, 2, 4}));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(extract_patch(ones, {3, 0, 0}, {3, 3, 3}, 0.0), InvalidArgument);
        CHECK_THROWS_AS(extract_patch(ones, {1, 1, 1}, {0, 3, 3}, 0.0), InvalidArgument);
    }
}

TEST_CASE("extract_patch is idempotent for interior patches") {
    std::mt19937_64 rng(5);
    const auto g = test::random_real(rng, {10, 11, 12}, -1.0, 1.0);
    std::uniform_int_distribution<int> sz(1, 5);
    for (int trial = 0; trial < 50; ++trial) {
        const Extent3 size{sz(rng), sz(rng), sz(rng)};
        std::uniform_int_distribution<std::int64_t> cz(size.z / 2, 9 - (size.z - 1) / 2);
        std::uniform_int_distribution<std::int64_t> cy(size.y / 2, 10 - (size.y - 1) / 2);
        std::uniform_int_distribution<std::int64_t> cx(size.x / 2, 11 - (size.x - 1) / 2);
        const Coord c{cz(rng), cy(rng), cx(rng)};
        const auto once = extract_patch(g, c, size, 99.0);
        for (double v : once.data()) REQUIRE(v != 99.0);
        const Coord inner{size.z / 2, size.y / 2, size.x / 2};
        REQUIRE(extract_patch(once, inner, size, 99.0) == once);
    }
}

TEST_CASE("binary_combine identities") {
    const Mask ones({3, 4, 5}, {}, std::uint8_t{1});
    const Mask zeros({3, 4, 5}, {}, std::uint8_t{0});
    CHECK(binary_combine(ones, zeros, BoolOp::Or) == ones);
    CHECK(binary_combine(ones, ones, BoolOp::Xor) == zeros);
    std::mt19937_64 rng(3);
    const Mask m = test::random_mask(rng, {3, 4, 5}, 0.4);
    CHECK(binary_combine(m, m, BoolOp::And) == m);
    CHECK(binary_combine(m, m, BoolOp::AndNot) == zeros);

    const Mask other({3, 4, 6}, {}, std::uint8_t{0});
    CHECK_THROWS_AS(binary_combine(ones, other, BoolOp::Or), InvalidArgument);
    const Mask respaced({3, 4, 5}, {2.0, 1.0, 1.0}, std::uint8_t{0});
    CHECK_THROWS_AS(binary_combine(ones, respaced, BoolOp::Or), InvalidArgument);
}

TEST_CASE("binary_combine obeys boolean algebra on random masks") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Dims d = test::random_dims(rng, 1, 7);
        const Mask a = test::random_mask(rng, d, 0.5);
        const Mask b = test::random_mask(rng, d, 0.5);
        const Mask c = test::random_mask(rng, d, 0.5);
        const Mask full(d, {}, std::uint8_t{1});
        for (BoolOp op : {BoolOp::And, BoolOp::Or, BoolOp::Xor}) {
            REQUIRE(binary_combine(a, b, op) == binary_combine(b, a, op));
        }
        REQUIRE(binary_combine(binary_combine(a, b, BoolOp::Xor), c, BoolOp::Xor) ==
                binary_combine(a, binary_combine(b, c, BoolOp::Xor), BoolOp::Xor));
        // De Morgan via AND-NOT: not(a or b) == (1 andnot a) andnot b
        const Mask lhs = logical_not(binary_combine(a, b, BoolOp::Or));
        const Mask rhs =
            binary_combine(binary_combine(full, a, BoolOp::AndNot), b, BoolOp::AndNot);
        REQUIRE(lhs == rhs);
        // not(a and b) == (1 andnot a) or (1 andnot b)
        REQUIRE(logical_not(binary_combine(a, b, BoolOp::And)) ==
                binary_combine(binary_combine(full, a, BoolOp::AndNot),
                               binary_combine(full, b, BoolOp::AndNot), BoolOp::Or));
    }
}

}
