#include "ag/volume.hpp"

#include <cmath>

namespace ag {

bool Spacing::valid() const noexcept {
    auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
    return ok(sz) && ok(sy) && ok(sx);
}

void validate_dims(const Dims& dims) {
    if (!dims.valid()) {
        throw InvalidArgument("dims must be strictly positive, got " + to_string(dims));
    }
    constexpr std::int64_t kMaxVoxels = std::int64_t{1} << 40;
    if (dims.nz > kMaxVoxels / dims.ny / dims.nx) {
        throw InvalidArgument("dims too large: " + to_string(dims));
    }
}

void validate_spacing(const Spacing& spacing) {
    if (!spacing.valid()) {
        throw InvalidArgument("spacing must be positive and finite");
    }
}

std::string to_string(const Dims& dims) {
    return "(" + std::to_string(dims.nz) + "," + std::to_string(dims.ny) + "," +
           std::to_string(dims.nx) + ")";
}

Mask binary_combine(const Mask& a, const Mask& b, BoolOp op) {
    require_same_geometry(a, b, "binary_combine");
    Mask out(a.dims(), a.spacing(), std::uint8_t{0});
    const auto av = a.data();
    const auto bv = b.data();
    auto ov = out.data();
    switch (op) {
        case BoolOp::And:
            for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] & bv[i];
            break;
        case BoolOp::Or:
            for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] | bv[i];
            break;
        case BoolOp::Xor:
            for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] ^ bv[i];
            break;
        case BoolOp::AndNot:
            for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = av[i] & (bv[i] ^ 1U);
            break;
    }
    return out;
}

Mask logical_not(const Mask& a) {
    Mask out = a;
    for (auto& v : out.data()) v ^= 1U;
    return out;
}

bool is_subset(const Mask& a, const Mask& b) {
    require_same_geometry(a, b, "is_subset");
    const auto av = a.data();
    const auto bv = b.data();
    for (std::size_t i = 0; i < av.size(); ++i) {
        if (av[i] && !bv[i]) return false;
    }
    return true;
}

std::size_t count_true(const Mask& m) {
    std::size_t n = 0;
    for (auto v : m.data()) n += v ? 1 : 0;
    return n;
}

void require_finite(const RealGrid& g, const char* what) {
    for (double v : g.data()) {
        if (!std::isfinite(v)) {
            throw InvalidArgument(std::string(what) + ": non-finite value");
        }
    }
}

}  // namespace ag
