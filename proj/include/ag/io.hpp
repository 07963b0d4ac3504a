#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ag/volume.hpp"

namespace ag::io {

enum class Datatype : std::int16_t {
    UInt8 = 2,
    Int16 = 4,
    Int32 = 8,
    Float32 = 16,
};

enum class SourceFormat { Nifti1, RawJson };

std::string_view to_string(Datatype dt) noexcept;
Datatype datatype_from_string(std::string_view name);
std::size_t bytes_per_voxel(Datatype dt) noexcept;

struct VolumeMeta {
    Dims dims{};
    Spacing spacing{};
    Datatype datatype = Datatype::Float32;
    /// NIfTI intensity scaling; a zero slope means "no scaling".
    double scl_slope = 0.0;
    double scl_inter = 0.0;
    SourceFormat source_format = SourceFormat::Nifti1;
    /// Verbatim 348-byte NIfTI header of the file this came from, if any.
    /// Fields the library does not interpret (qform/sform, description, ...)
    /// are carried through when the volume is written back out.
    std::vector<std::uint8_t> header;
};

struct Volume {
    RealGrid grid;
    VolumeMeta meta;
};

/// Reads `.nii` (uncompressed single-file NIfTI-1) or `.raw`/`.json` pairs.
/// Stored values are scaled by scl_slope/scl_inter when the slope is nonzero.
Volume read_volume(const std::filesystem::path& path);

/// Writes `grid` using `meta.datatype` (dims/spacing come from the grid).
/// The format is chosen by extension. Values the datatype cannot hold
/// exactly raise InvalidArgument; float32 accepts any finite value in range.
void write_volume(const RealGrid& grid, const VolumeMeta& meta,
                  const std::filesystem::path& path);

/// Boolean masks are always stored as uint8 {0,1}.
void write_volume(const Mask& mask, const std::filesystem::path& path);
void write_volume(const LabelGrid& labels, const std::filesystem::path& path,
                  Datatype datatype = Datatype::Int32);
/// Real grids default to float32 storage.
void write_volume(const RealGrid& grid, const std::filesystem::path& path);

VolumeMeta make_meta(Datatype datatype);

RealGrid to_real(const Mask& mask);
RealGrid to_real(const LabelGrid& labels);
/// Nonzero voxels become true.
Mask to_mask(const RealGrid& grid);
/// Requires integral values representable as int32.
LabelGrid to_labels(const RealGrid& grid);

Mask read_mask(const std::filesystem::path& path);
LabelGrid read_labels(const std::filesystem::path& path);
RealGrid read_real(const std::filesystem::path& path);

}  // namespace ag::io
