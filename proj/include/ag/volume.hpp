#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ag/errors.hpp"

namespace ag {

/// Voxel counts in canonical (z, y, x) order; z varies slowest in memory.
struct Dims {
    std::int64_t nz = 0;
    std::int64_t ny = 0;
    std::int64_t nx = 0;

    [[nodiscard]] std::size_t voxels() const noexcept {
        return static_cast<std::size_t>(nz) * static_cast<std::size_t>(ny) *
               static_cast<std::size_t>(nx);
    }
    [[nodiscard]] bool valid() const noexcept { return nz > 0 && ny > 0 && nx > 0; }
    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Millimetres per voxel along z, y, x.
struct Spacing {
    double sz = 1.0;
    double sy = 1.0;
    double sx = 1.0;

    [[nodiscard]] bool valid() const noexcept;
    friend bool operator==(const Spacing&, const Spacing&) = default;
};

struct Coord {
    std::int64_t z = 0;
    std::int64_t y = 0;
    std::int64_t x = 0;
    friend bool operator==(const Coord&, const Coord&) = default;
};

/// Patch or kernel extent in voxels, (z, y, x).
struct Extent3 {
    std::int64_t z = 1;
    std::int64_t y = 1;
    std::int64_t x = 1;
    friend bool operator==(const Extent3&, const Extent3&) = default;
};

void validate_dims(const Dims& dims);
void validate_spacing(const Spacing& spacing);
std::string to_string(const Dims& dims);

/// Dense 3D array with physical voxel spacing. Storage is flat, z-major.
template <class T>
class Grid {
public:
    using value_type = T;

    Grid() = default;

    Grid(Dims dims, Spacing spacing, T fill = T{})
        : dims_(dims), spacing_(spacing) {
        validate_dims(dims_);
        validate_spacing(spacing_);
        data_.assign(dims_.voxels(), fill);
    }

    Grid(Dims dims, Spacing spacing, std::vector<T> data)
        : dims_(dims), spacing_(spacing), data_(std::move(data)) {
        validate_dims(dims_);
        validate_spacing(spacing_);
        if (data_.size() != dims_.voxels()) {
            throw InvalidArgument("grid data length " + std::to_string(data_.size()) +
                                  " does not match dims " + to_string(dims_));
        }
    }

    [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
    [[nodiscard]] const Spacing& spacing() const noexcept { return spacing_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] std::span<T> data() noexcept { return data_; }
    [[nodiscard]] std::span<const T> data() const noexcept { return data_; }
    [[nodiscard]] const std::vector<T>& values() const noexcept { return data_; }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    [[nodiscard]] bool contains(const Coord& c) const noexcept {
        return c.z >= 0 && c.y >= 0 && c.x >= 0 && c.z < dims_.nz && c.y < dims_.ny &&
               c.x < dims_.nx;
    }
    [[nodiscard]] std::size_t index(const Coord& c) const noexcept {
        return static_cast<std::size_t>((c.z * dims_.ny + c.y) * dims_.nx + c.x);
    }
    [[nodiscard]] Coord coord(std::size_t i) const noexcept {
        const auto flat = static_cast<std::int64_t>(i);
        const std::int64_t plane = dims_.ny * dims_.nx;
        return {flat / plane, (flat % plane) / dims_.nx, flat % dims_.nx};
    }

    T& at(const Coord& c) noexcept { return data_[index(c)]; }
    const T& at(const Coord& c) const noexcept { return data_[index(c)]; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Dims dims_{};
    Spacing spacing_{};
    std::vector<T> data_;
};

/// Boolean voxel set; every element is 0 or 1.
using Mask = Grid<std::uint8_t>;
/// Integer organ / class codes.
using LabelGrid = Grid<std::int32_t>;
/// Real-valued scalar field.
using RealGrid = Grid<double>;

template <class A, class B>
bool same_geometry(const Grid<A>& a, const Grid<B>& b) noexcept {
    return a.dims() == b.dims() && a.spacing() == b.spacing();
}

/// Throws InvalidArgument naming `what` when the two grids differ in dims or spacing.
template <class A, class B>
void require_same_geometry(const Grid<A>& a, const Grid<B>& b, const char* what) {
    if (a.dims() != b.dims()) {
        throw InvalidArgument(std::string(what) + ": shape mismatch " + to_string(a.dims()) +
                              " vs " + to_string(b.dims()));
    }
    if (!(a.spacing() == b.spacing())) {
        throw InvalidArgument(std::string(what) + ": spacing mismatch");
    }
}

template <class T>
Grid<T> make_grid(const Dims& dims, const Spacing& spacing, T fill) {
    return Grid<T>(dims, spacing, fill);
}

/// Copies a `size`-shaped block whose voxel k maps to `center - size/2 + k`.
/// Even sizes put the centre on the high-index voxel of the central pair.
/// Reads outside the grid yield `pad`.
template <class T>
Grid<T> extract_patch(const Grid<T>& grid, const Coord& center, const Extent3& size, T pad) {
    if (size.z < 1 || size.y < 1 || size.x < 1) {
        throw InvalidArgument("extract_patch: size components must be positive");
    }
    if (!grid.contains(center)) {
        throw InvalidArgument("extract_patch: center outside grid");
    }
    Grid<T> out(Dims{size.z, size.y, size.x}, grid.spacing(), pad);
    const Coord origin{center.z - size.z / 2, center.y - size.y / 2, center.x - size.x / 2};
    const Dims& d = grid.dims();
    for (std::int64_t kz = 0; kz < size.z; ++kz) {
        const std::int64_t z = origin.z + kz;
        if (z < 0 || z >= d.nz) continue;
        for (std::int64_t ky = 0; ky < size.y; ++ky) {
            const std::int64_t y = origin.y + ky;
            if (y < 0 || y >= d.ny) continue;
            const std::int64_t x0 = std::max<std::int64_t>(origin.x, 0);
            const std::int64_t x1 = std::min<std::int64_t>(origin.x + size.x, d.nx);
            for (std::int64_t x = x0; x < x1; ++x) {
                out.at({kz, ky, x - origin.x}) = grid.at({z, y, x});
            }
        }
    }
    return out;
}

enum class BoolOp { And, Or, Xor, AndNot };

/// Element-wise boolean algebra; AndNot is `a & !b`.
Mask binary_combine(const Mask& a, const Mask& b, BoolOp op);

Mask logical_not(const Mask& a);

/// True when every voxel of `a` is also set in `b`.
bool is_subset(const Mask& a, const Mask& b);

std::size_t count_true(const Mask& m);

/// Throws InvalidArgument if any value is NaN or infinite.
void require_finite(const RealGrid& g, const char* what);

}  // namespace ag
