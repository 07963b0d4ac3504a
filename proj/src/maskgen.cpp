#include "ag/maskgen.hpp"

#include <algorithm>

namespace ag::maskgen {

void OrganConfig::validate() const {
    if (set_ts.empty() || set_word.empty()) {
        throw InvalidArgument("organ config: indicator sets must be nonempty");
    }
    if (dilate_times < 0) throw InvalidArgument("organ config: dilate_times must be >= 0");
    if (wall_r_out < 0 || wall_r_in < 0) {
        throw InvalidArgument("organ config: wall radii must be >= 0");
    }
}

Mask select_labels(const LabelGrid& labels, const std::set<std::int32_t>& indicator) {
    Mask out(labels.dims(), labels.spacing(), std::uint8_t{0});
    const auto in = labels.data();
    auto o = out.data();
    const std::vector<std::int32_t> codes(indicator.begin(), indicator.end());
    for (std::size_t i = 0; i < in.size(); ++i) {
        o[i] = std::binary_search(codes.begin(), codes.end(), in[i]) ? 1 : 0;
    }
    return out;
}

Mask build_ooi(const LabelGrid& ts_labels, const LabelGrid& word_labels,
               const OrganConfig& cfg) {
    cfg.validate();
    require_same_geometry(ts_labels, word_labels, "build_ooi");
    const Mask o_ts = morph::dilate(select_labels(ts_labels, cfg.set_ts), cfg.elem,
                                    cfg.dilate_times);
    const Mask o_word = morph::dilate(select_labels(word_labels, cfg.set_word), cfg.elem,
                                      cfg.dilate_times);
    return binary_combine(o_word, o_ts, BoolOp::Or);
}

Mask bowel_wall(const Mask& ooi_raw, morph::StructElem elem, int r_out, int r_in) {
    return morph::boundary_band(ooi_raw, elem, r_out, r_in);
}

}  // namespace ag::maskgen
