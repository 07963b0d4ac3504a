#include "ag/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include <json.hpp>

namespace ag::io {

namespace {

namespace fs = std::filesystem;
using Bytes = std::vector<std::uint8_t>;

constexpr std::int32_t kHeaderSize = 348;
constexpr std::int64_t kVoxOffset = 352;

// Field offsets in the NIfTI-1 header.
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffXyztUnits = 123;
constexpr std::size_t kOffMagic = 344;

template <class T>
T load_le(const std::uint8_t* p) {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
        auto* b = reinterpret_cast<std::uint8_t*>(&v);
        std::reverse(b, b + sizeof(T));
    }
    return v;
}

template <class T>
void store_le(std::uint8_t* p, T v) {
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
        auto* b = reinterpret_cast<std::uint8_t*>(&v);
        std::reverse(b, b + sizeof(T));
    }
    std::memcpy(p, &v, sizeof(T));
}

std::int32_t byteswap32(std::int32_t v) {
    auto u = static_cast<std::uint32_t>(v);
    u = (u >> 24) | ((u >> 8) & 0xFF00U) | ((u << 8) & 0xFF0000U) | (u << 24);
    return static_cast<std::int32_t>(u);
}

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file(const fs::path& path, const Bytes& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

bool is_known_datatype(std::int32_t code) {
    return code == 2 || code == 4 || code == 8 || code == 16;
}

double decode_voxel(const std::uint8_t* p, Datatype dt) {
    switch (dt) {
        case Datatype::UInt8: return static_cast<double>(*p);
        case Datatype::Int16: return static_cast<double>(load_le<std::int16_t>(p));
        case Datatype::Int32: return static_cast<double>(load_le<std::int32_t>(p));
        case Datatype::Float32: return static_cast<double>(load_le<float>(p));
    }
    return 0.0;
}

void encode_voxel(std::uint8_t* p, Datatype dt, double v) {
    switch (dt) {
        case Datatype::UInt8: *p = static_cast<std::uint8_t>(v); break;
        case Datatype::Int16: store_le(p, static_cast<std::int16_t>(v)); break;
        case Datatype::Int32: store_le(p, static_cast<std::int32_t>(v)); break;
        case Datatype::Float32: store_le(p, static_cast<float>(v)); break;
    }
}

bool representable(double v, Datatype dt) {
    if (!std::isfinite(v)) return false;
    auto integral_in = [v](double lo, double hi) {
        return v == std::floor(v) && v >= lo && v <= hi;
    };
    switch (dt) {
        case Datatype::UInt8: return integral_in(0.0, 255.0);
        case Datatype::Int16: return integral_in(-32768.0, 32767.0);
        case Datatype::Int32: return integral_in(-2147483648.0, 2147483647.0);
        case Datatype::Float32:
            return std::abs(v) <= static_cast<double>(std::numeric_limits<float>::max());
    }
    return false;
}

bool has_scaling(const VolumeMeta& meta) {
    return meta.scl_slope != 0.0 && !(meta.scl_slope == 1.0 && meta.scl_inter == 0.0);
}

/// Converts grid values into stored values, checking the datatype holds them exactly.
Bytes encode_payload(const RealGrid& grid, const VolumeMeta& meta) {
    const std::size_t bpv = bytes_per_voxel(meta.datatype);
    Bytes payload(grid.size() * bpv);
    const bool scaled = has_scaling(meta);
    const auto values = grid.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
        double stored = values[i];
        if (scaled) {
            stored = (stored - meta.scl_inter) / meta.scl_slope;
            if (meta.datatype != Datatype::Float32) stored = std::nearbyint(stored);
            if (stored * meta.scl_slope + meta.scl_inter != values[i] &&
                meta.datatype != Datatype::Float32) {
                throw InvalidArgument("write_volume: value " + std::to_string(values[i]) +
                                      " not representable under scl_slope/scl_inter");
            }
        }
        if (!representable(stored, meta.datatype)) {
            throw InvalidArgument("write_volume: value " + std::to_string(values[i]) +
                                  " cannot be stored losslessly as " +
                                  std::string(to_string(meta.datatype)));
        }
        encode_voxel(payload.data() + i * bpv, meta.datatype, stored);
    }
    return payload;
}

RealGrid decode_payload(const std::uint8_t* p, const VolumeMeta& meta) {
    const std::size_t bpv = bytes_per_voxel(meta.datatype);
    std::vector<double> values(meta.dims.voxels());
    const bool scaled = meta.scl_slope != 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = decode_voxel(p + i * bpv, meta.datatype);
        if (scaled) v = v * meta.scl_slope + meta.scl_inter;
        if (!std::isfinite(v)) throw CorruptFile("non-finite voxel value in payload");
        values[i] = v;
    }
    return RealGrid(meta.dims, meta.spacing, std::move(values));
}

// ---- NIfTI-1 ---------------------------------------------------------------

Volume read_nifti(const fs::path& path) {
    const Bytes bytes = read_file(path);
    if (bytes.size() < static_cast<std::size_t>(kHeaderSize)) {
        throw CorruptFile(path.string() + ": file shorter than a NIfTI-1 header");
    }
    const std::uint8_t* h = bytes.data();
    const auto sizeof_hdr = load_le<std::int32_t>(h + kOffSizeofHdr);
    if (sizeof_hdr != kHeaderSize) {
        if (byteswap32(sizeof_hdr) == kHeaderSize) {
            throw FormatError(path.string() +
                              ": byte-swapped (big-endian) NIfTI header is not supported");
        }
        throw FormatError(path.string() + ": sizeof_hdr is " + std::to_string(sizeof_hdr) +
                          ", expected 348");
    }
    if (std::memcmp(h + kOffMagic, "n+1\0", 4) != 0) {
        if (std::memcmp(h + kOffMagic, "ni1\0", 4) == 0) {
            throw FormatError(path.string() + ": two-file NIfTI (.hdr/.img) is not supported");
        }
        throw FormatError(path.string() + ": bad magic, expected \"n+1\"");
    }
    std::array<std::int16_t, 8> dim{};
    for (std::size_t k = 0; k < 8; ++k) dim[k] = load_le<std::int16_t>(h + kOffDim + 2 * k);
    if (dim[0] < 1 || dim[0] > 7) {
        throw FormatError(path.string() + ": implausible dim[0]=" + std::to_string(dim[0]) +
                          " (byte-swapped header?)");
    }
    for (int k = 4; k <= dim[0]; ++k) {
        if (dim[k] > 1) throw FormatError(path.string() + ": only 3D volumes are supported");
    }
    VolumeMeta meta;
    meta.source_format = SourceFormat::Nifti1;
    meta.dims = {dim[0] >= 3 ? dim[3] : 1, dim[0] >= 2 ? dim[2] : 1, dim[1]};
    if (!meta.dims.valid()) {
        throw FormatError(path.string() + ": non-positive dimension " + to_string(meta.dims));
    }
    const auto code = load_le<std::int16_t>(h + kOffDatatype);
    if (!is_known_datatype(code)) {
        throw UnsupportedDatatype(path.string() + ": unsupported NIfTI datatype code " +
                                  std::to_string(code));
    }
    meta.datatype = static_cast<Datatype>(code);
    const auto px = load_le<float>(h + kOffPixdim + 4);
    const auto py = load_le<float>(h + kOffPixdim + 8);
    const auto pz = load_le<float>(h + kOffPixdim + 12);
    meta.spacing = {dim[0] >= 3 ? static_cast<double>(pz) : 1.0, static_cast<double>(py),
                    static_cast<double>(px)};
    if (!meta.spacing.valid()) {
        throw FormatError(path.string() + ": pixdim must be positive and finite");
    }
    meta.scl_slope = static_cast<double>(load_le<float>(h + kOffSclSlope));
    meta.scl_inter = static_cast<double>(load_le<float>(h + kOffSclInter));
    if (!std::isfinite(meta.scl_slope)) meta.scl_slope = 0.0;
    if (!std::isfinite(meta.scl_inter)) meta.scl_inter = 0.0;
    const auto vox_offset = load_le<float>(h + kOffVoxOffset);
    if (!(vox_offset >= static_cast<float>(kHeaderSize)) ||
        vox_offset != std::floor(vox_offset)) {
        throw FormatError(path.string() + ": invalid vox_offset");
    }
    const auto offset = static_cast<std::size_t>(vox_offset);
    const std::size_t payload = meta.dims.voxels() * bytes_per_voxel(meta.datatype);
    if (bytes.size() < offset + payload) {
        throw CorruptFile(path.string() + ": truncated payload (" +
                          std::to_string(bytes.size()) + " bytes, need " +
                          std::to_string(offset + payload) + ")");
    }
    meta.header.assign(h, h + kHeaderSize);
    RealGrid grid = decode_payload(bytes.data() + offset, meta);
    return {std::move(grid), std::move(meta)};
}

void write_nifti(const RealGrid& grid, const VolumeMeta& meta, const fs::path& path) {
    for (auto n : {grid.dims().nz, grid.dims().ny, grid.dims().nx}) {
        if (n > std::numeric_limits<std::int16_t>::max()) {
            throw InvalidArgument("write_volume: dimension exceeds NIfTI-1 limit");
        }
    }
    Bytes payload = encode_payload(grid, meta);
    Bytes out(static_cast<std::size_t>(kVoxOffset), 0);
    std::uint8_t* h = out.data();
    if (meta.header.size() == static_cast<std::size_t>(kHeaderSize)) {
        std::memcpy(h, meta.header.data(), kHeaderSize);
    } else {
        store_le<float>(h + kOffPixdim, 1.0F);  // qfac
        h[kOffXyztUnits] = 2;                   // millimetres
    }
    store_le<std::int32_t>(h + kOffSizeofHdr, kHeaderSize);
    const std::array<std::int16_t, 8> dim{3,
                                          static_cast<std::int16_t>(grid.dims().nx),
                                          static_cast<std::int16_t>(grid.dims().ny),
                                          static_cast<std::int16_t>(grid.dims().nz),
                                          1, 1, 1, 1};
    for (std::size_t k = 0; k < 8; ++k) store_le(h + kOffDim + 2 * k, dim[k]);
    store_le<std::int16_t>(h + kOffDatatype, static_cast<std::int16_t>(meta.datatype));
    store_le<std::int16_t>(h + kOffBitpix,
                           static_cast<std::int16_t>(8 * bytes_per_voxel(meta.datatype)));
    store_le<float>(h + kOffPixdim + 4, static_cast<float>(grid.spacing().sx));
    store_le<float>(h + kOffPixdim + 8, static_cast<float>(grid.spacing().sy));
    store_le<float>(h + kOffPixdim + 12, static_cast<float>(grid.spacing().sz));
    store_le<float>(h + kOffVoxOffset, static_cast<float>(kVoxOffset));
    store_le<float>(h + kOffSclSlope, static_cast<float>(meta.scl_slope));
    store_le<float>(h + kOffSclInter, static_cast<float>(meta.scl_inter));
    std::memcpy(h + kOffMagic, "n+1\0", 4);
    // Bytes 348..351 stay zero: no extensions.
    out.insert(out.end(), payload.begin(), payload.end());
    write_file(path, out);
}

// ---- raw + JSON sidecar ----------------------------------------------------

struct RawPaths {
    fs::path raw;
    fs::path json;
};

RawPaths raw_paths(const fs::path& path) {
    fs::path base = path;
    base.replace_extension();
    return {fs::path(base).concat(".raw"), fs::path(base).concat(".json")};
}

Volume read_rawjson(const fs::path& path) {
    const RawPaths paths = raw_paths(path);
    std::ifstream js(paths.json);
    if (!js) throw IoError("cannot open " + paths.json.string());
    VolumeMeta meta;
    meta.source_format = SourceFormat::RawJson;
    try {
        const auto j = nlohmann::json::parse(js);
        const auto d = j.at("dims").get<std::vector<std::int64_t>>();
        const auto s = j.at("spacing").get<std::vector<double>>();
        if (d.size() != 3 || s.size() != 3) {
            throw FormatError(paths.json.string() + ": dims and spacing need 3 entries");
        }
        meta.dims = {d[0], d[1], d[2]};
        meta.spacing = {s[0], s[1], s[2]};
        meta.datatype = datatype_from_string(j.at("datatype").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(paths.json.string() + ": malformed sidecar: " + e.what());
    }
    if (!meta.dims.valid()) throw FormatError(paths.json.string() + ": non-positive dims");
    if (!meta.spacing.valid()) throw FormatError(paths.json.string() + ": invalid spacing");
    const Bytes bytes = read_file(paths.raw);
    const std::size_t payload = meta.dims.voxels() * bytes_per_voxel(meta.datatype);
    if (bytes.size() < payload) {
        throw CorruptFile(paths.raw.string() + ": truncated payload");
    }
    RealGrid grid = decode_payload(bytes.data(), meta);
    return {std::move(grid), std::move(meta)};
}

void write_rawjson(const RealGrid& grid, const VolumeMeta& meta, const fs::path& path) {
    const RawPaths paths = raw_paths(path);
    const Bytes payload = encode_payload(grid, meta);
    nlohmann::ordered_json j;
    j["dims"] = {grid.dims().nz, grid.dims().ny, grid.dims().nx};
    j["spacing"] = {grid.spacing().sz, grid.spacing().sy, grid.spacing().sx};
    j["datatype"] = std::string(to_string(meta.datatype));
    write_file(paths.raw, payload);
    const std::string text = j.dump() + "\n";
    write_file(paths.json, Bytes(text.begin(), text.end()));
}

enum class Kind { Nifti, Raw, Unknown };

Kind kind_of(const fs::path& path) {
    const std::string name = path.filename().string();
    auto ends_with = [&name](std::string_view suffix) {
        return name.size() >= suffix.size() &&
               name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".nii")) return Kind::Nifti;
    if (ends_with(".raw") || ends_with(".json")) return Kind::Raw;
    return Kind::Unknown;
}

}  // namespace

std::string_view to_string(Datatype dt) noexcept {
    switch (dt) {
        case Datatype::UInt8: return "uint8";
        case Datatype::Int16: return "int16";
        case Datatype::Int32: return "int32";
        case Datatype::Float32: return "float32";
    }
    return "unknown";
}

Datatype datatype_from_string(std::string_view name) {
    if (name == "uint8") return Datatype::UInt8;
    if (name == "int16") return Datatype::Int16;
    if (name == "int32") return Datatype::Int32;
    if (name == "float32") return Datatype::Float32;
    throw UnsupportedDatatype("unsupported datatype '" + std::string(name) + "'");
}

std::size_t bytes_per_voxel(Datatype dt) noexcept {
    switch (dt) {
        case Datatype::UInt8: return 1;
        case Datatype::Int16: return 2;
        case Datatype::Int32: return 4;
        case Datatype::Float32: return 4;
    }
    return 0;
}

Volume read_volume(const fs::path& path) {
    switch (kind_of(path)) {
        case Kind::Nifti: return read_nifti(path);
        case Kind::Raw: return read_rawjson(path);
        case Kind::Unknown: break;
    }
    throw FormatError(path.string() + ": unrecognised volume extension (expected .nii, .raw or .json)");
}

void write_volume(const RealGrid& grid, const VolumeMeta& meta, const fs::path& path) {
    if (!is_known_datatype(static_cast<std::int32_t>(meta.datatype))) {
        throw UnsupportedDatatype("write_volume: unsupported datatype");
    }
    require_finite(grid, "write_volume");
    switch (kind_of(path)) {
        case Kind::Nifti: write_nifti(grid, meta, path); return;
        case Kind::Raw: write_rawjson(grid, meta, path); return;
        case Kind::Unknown: break;
    }
    throw InvalidArgument(path.string() + ": unrecognised volume extension (expected .nii, .raw or .json)");
}

VolumeMeta make_meta(Datatype datatype) {
    VolumeMeta meta;
    meta.datatype = datatype;
    return meta;
}

void write_volume(const Mask& mask, const fs::path& path) {
    write_volume(to_real(mask), make_meta(Datatype::UInt8), path);
}

void write_volume(const LabelGrid& labels, const fs::path& path, Datatype datatype) {
    write_volume(to_real(labels), make_meta(datatype), path);
}

void write_volume(const RealGrid& grid, const fs::path& path) {
    write_volume(grid, make_meta(Datatype::Float32), path);
}

RealGrid to_real(const Mask& mask) {
    std::vector<double> v(mask.data().begin(), mask.data().end());
    for (auto& x : v) x = x != 0.0 ? 1.0 : 0.0;
    return RealGrid(mask.dims(), mask.spacing(), std::move(v));
}

RealGrid to_real(const LabelGrid& labels) {
    std::vector<double> v(labels.data().begin(), labels.data().end());
    return RealGrid(labels.dims(), labels.spacing(), std::move(v));
}

Mask to_mask(const RealGrid& grid) {
    Mask out(grid.dims(), grid.spacing(), std::uint8_t{0});
    const auto in = grid.data();
    auto o = out.data();
    for (std::size_t i = 0; i < in.size(); ++i) o[i] = in[i] != 0.0 ? 1 : 0;
    return out;
}

LabelGrid to_labels(const RealGrid& grid) {
    LabelGrid out(grid.dims(), grid.spacing(), 0);
    const auto in = grid.data();
    auto o = out.data();
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (!representable(in[i], Datatype::Int32)) {
            throw InvalidArgument("label volume holds a non-integral value");
        }
        o[i] = static_cast<std::int32_t>(in[i]);
    }
    return out;
}

Mask read_mask(const fs::path& path) { return to_mask(read_volume(path).grid); }

LabelGrid read_labels(const fs::path& path) { return to_labels(read_volume(path).grid); }

RealGrid read_real(const fs::path& path) { return read_volume(path).grid; }

}  // namespace ag::io
