#include "ag/morphology.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

namespace ag::morph {

namespace {

using Word = std::uint64_t;

/// Bit-packed mask: each (z, y) row of x voxels is `words` 64-bit words.
/// Bits past nx are always zero.
class PackedMask {
public:
    explicit PackedMask(const Dims& d)
        : dims_(d), words_((static_cast<std::size_t>(d.nx) + 63) / 64),
          rows_(static_cast<std::size_t>(d.nz * d.ny)), bits_(rows_ * words_, 0) {
        const auto tail = static_cast<unsigned>(d.nx % 64);
        tail_mask_ = tail == 0 ? ~Word{0} : (Word{1} << tail) - 1;
    }

    static PackedMask pack(const Mask& m) {
        PackedMask p(m.dims());
        const auto v = m.data();
        const auto nx = static_cast<std::size_t>(m.dims().nx);
        for (std::size_t r = 0; r < p.rows_; ++r) {
            Word* row = p.row(r);
            const std::uint8_t* src = v.data() + r * nx;
            for (std::size_t x = 0; x < nx; ++x) {
                if (src[x]) row[x >> 6] |= Word{1} << (x & 63);
            }
        }
        return p;
    }

    Mask unpack(const Spacing& spacing) const {
        Mask m(dims_, spacing, std::uint8_t{0});
        auto v = m.data();
        const auto nx = static_cast<std::size_t>(dims_.nx);
        for (std::size_t r = 0; r < rows_; ++r) {
            const Word* row = this->row(r);
            std::uint8_t* dst = v.data() + r * nx;
            for (std::size_t x = 0; x < nx; ++x) {
                dst[x] = static_cast<std::uint8_t>((row[x >> 6] >> (x & 63)) & 1U);
            }
        }
        return m;
    }

    Word* row(std::size_t r) noexcept { return bits_.data() + r * words_; }
    const Word* row(std::size_t r) const noexcept { return bits_.data() + r * words_; }
    std::size_t row_index(std::int64_t z, std::int64_t y) const noexcept {
        return static_cast<std::size_t>(z * dims_.ny + y);
    }

    const Dims& dims() const noexcept { return dims_; }
    std::size_t words() const noexcept { return words_; }
    std::size_t rows() const noexcept { return rows_; }
    Word tail_mask() const noexcept { return tail_mask_; }

private:
    Dims dims_;
    std::size_t words_;
    std::size_t rows_;
    std::vector<Word> bits_;
    Word tail_mask_ = ~Word{0};
};

// Row value at x+1 (bit x takes bit x+1) and x-1, with zero fill across words.
inline Word shifted_from_right(const Word* row, std::size_t w, std::size_t words) {
    Word v = row[w] >> 1;
    if (w + 1 < words) v |= row[w + 1] << 63;
    return v;
}

inline Word shifted_from_left(const Word* row, std::size_t w) {
    Word v = row[w] << 1;
    if (w > 0) v |= row[w - 1] >> 63;
    return v;
}

/// One step along x: OR (dilate) or AND (erode) of x-1, x, x+1.
void step_x(const PackedMask& in, PackedMask& out, bool dilating) {
    const std::size_t words = in.words();
    for (std::size_t r = 0; r < in.rows(); ++r) {
        const Word* src = in.row(r);
        Word* dst = out.row(r);
        for (std::size_t w = 0; w < words; ++w) {
            const Word l = shifted_from_left(src, w);
            const Word rr = shifted_from_right(src, w, words);
            dst[w] = dilating ? (src[w] | l | rr) : (src[w] & l & rr);
        }
        dst[words - 1] &= in.tail_mask();
    }
}

/// Combines rows at yz offsets from `offsets` into out; out-of-grid rows are zero.
/// For erosion an out-of-grid neighbour clears the whole row.
template <std::size_t N>
void step_yz(const PackedMask& center, const PackedMask& neighbour_src, PackedMask& out,
             const std::array<std::array<int, 2>, N>& offsets, bool dilating) {
    const Dims& d = center.dims();
    const std::size_t words = center.words();
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            Word* dst = out.row(out.row_index(z, y));
            const Word* c = center.row(center.row_index(z, y));
            for (std::size_t w = 0; w < words; ++w) dst[w] = c[w];
            for (const auto& off : offsets) {
                const std::int64_t zz = z + off[0];
                const std::int64_t yy = y + off[1];
                if (zz < 0 || zz >= d.nz || yy < 0 || yy >= d.ny) {
                    if (!dilating) {
                        for (std::size_t w = 0; w < words; ++w) dst[w] = 0;
                    }
                    continue;
                }
                const Word* n = neighbour_src.row(neighbour_src.row_index(zz, yy));
                if (dilating) {
                    for (std::size_t w = 0; w < words; ++w) dst[w] |= n[w];
                } else {
                    for (std::size_t w = 0; w < words; ++w) dst[w] &= n[w];
                }
            }
        }
    }
}

constexpr std::array<std::array<int, 2>, 4> kFaceYz{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
constexpr std::array<std::array<int, 2>, 8> kCubeYz{
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};

void packed_step(PackedMask& cur, PackedMask& xpass, PackedMask& next, StructElem elem,
                 bool dilating) {
    step_x(cur, xpass, dilating);
    if (elem == StructElem::Face6) {
        // x-neighbours come from the x pass; yz-neighbours from the unshifted rows.
        step_yz(xpass, cur, next, kFaceYz, dilating);
    } else {
        // The 3x3x3 cube is separable: x pass, then the 3x3 yz box of x-passed rows.
        step_yz(xpass, xpass, next, kCubeYz, dilating);
    }
    std::swap(cur, next);
}

Mask packed_iterate(const Mask& mask, StructElem elem, int times, bool dilating) {
    if (times < 0) throw InvalidArgument("morphology: times must be >= 0");
    if (times == 0) return mask;
    PackedMask cur = PackedMask::pack(mask);
    PackedMask xpass(mask.dims());
    PackedMask next(mask.dims());
    for (int t = 0; t < times; ++t) packed_step(cur, xpass, next, elem, dilating);
    return cur.unpack(mask.spacing());
}

}  // namespace

std::string_view to_string(StructElem elem) noexcept {
    return elem == StructElem::Face6 ? "face6" : "full26";
}

StructElem struct_elem_from_string(std::string_view name) {
    if (name == "face6" || name == "face-6") return StructElem::Face6;
    if (name == "full26" || name == "full-26") return StructElem::Full26;
    throw InvalidArgument("unknown structuring element '" + std::string(name) +
                          "' (expected face6 or full26)");
}

Mask dilate(const Mask& mask, StructElem elem, int times) {
    return packed_iterate(mask, elem, times, true);
}

Mask erode(const Mask& mask, StructElem elem, int times) {
    return packed_iterate(mask, elem, times, false);
}

Mask boundary_band(const Mask& mask, StructElem elem, int r_out, int r_in) {
    if (r_out < 0 || r_in < 0) throw InvalidArgument("boundary_band: radii must be >= 0");
    return binary_combine(dilate(mask, elem, r_out), erode(mask, elem, r_in), BoolOp::Xor);
}

namespace naive {

namespace {

std::vector<Coord> offsets_of(StructElem elem) {
    std::vector<Coord> out;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int manhattan = std::abs(dz) + std::abs(dy) + std::abs(dx);
                if (manhattan == 0) continue;
                if (elem == StructElem::Face6 && manhattan != 1) continue;
                out.push_back({dz, dy, dx});
            }
        }
    }
    return out;
}

Mask step(const Mask& in, const std::vector<Coord>& offsets, bool dilating) {
    Mask out = in;
    const Dims& d = in.dims();
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            for (std::int64_t x = 0; x < d.nx; ++x) {
                bool acc = in.at({z, y, x}) != 0;
                for (const Coord& o : offsets) {
                    const Coord q{z + o.z, y + o.y, x + o.x};
                    const bool v = in.contains(q) && in.at(q) != 0;
                    acc = dilating ? (acc || v) : (acc && v);
                }
                out.at({z, y, x}) = acc ? 1 : 0;
            }
        }
    }
    return out;
}

Mask iterate(const Mask& mask, StructElem elem, int times, bool dilating) {
    if (times < 0) throw InvalidArgument("morphology: times must be >= 0");
    const auto offsets = offsets_of(elem);
    Mask cur = mask;
    for (int t = 0; t < times; ++t) cur = step(cur, offsets, dilating);
    return cur;
}

}  // namespace

Mask dilate(const Mask& mask, StructElem elem, int times) {
    return iterate(mask, elem, times, true);
}

Mask erode(const Mask& mask, StructElem elem, int times) {
    return iterate(mask, elem, times, false);
}

}  // namespace naive

}  // namespace ag::morph
