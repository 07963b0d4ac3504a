#pragma once

#include <string_view>

#include "ag/volume.hpp"

namespace ag::morph {

/// Face-6: the six axis neighbours. Full-26: the whole 3x3x3 cube.
enum class StructElem { Face6, Full26 };

std::string_view to_string(StructElem elem) noexcept;
StructElem struct_elem_from_string(std::string_view name);

/// Iterated binary dilation; voxels outside the grid are false.
/// Runs on 64-voxel words along x.
Mask dilate(const Mask& mask, StructElem elem, int times);

/// Iterated binary erosion with the same zero padding, so voxels on the grid
/// border erode away.
Mask erode(const Mask& mask, StructElem elem, int times);

/// XOR of dilate(mask, r_out) and erode(mask, r_in): a band straddling the boundary.
Mask boundary_band(const Mask& mask, StructElem elem, int r_out, int r_in);

/// Voxel-at-a-time implementations, kept as the reference for the packed path.
namespace naive {
Mask dilate(const Mask& mask, StructElem elem, int times);
Mask erode(const Mask& mask, StructElem elem, int times);
}  // namespace naive

}  // namespace ag::morph
