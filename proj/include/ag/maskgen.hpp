#pragma once

#include <cstdint>
#include <set>

#include "ag/morphology.hpp"
#include "ag/volume.hpp"

namespace ag::maskgen {

/// Which label codes count as organs of interest in each segmentation source,
/// and how the resulting masks are grown.
struct OrganConfig {
    std::set<std::int32_t> set_ts;
    std::set<std::int32_t> set_word;
    int dilate_times = 3;
    morph::StructElem elem = morph::StructElem::Face6;
    int wall_r_out = 1;
    int wall_r_in = 1;

    void validate() const;
};

/// True exactly where the label is in `indicator`.
Mask select_labels(const LabelGrid& labels, const std::set<std::int32_t>& indicator);

/// Organs-of-interest mask from two multi-organ label maps: each source's
/// selection is dilated `dilate_times` times, then the two are OR-ed.
Mask build_ooi(const LabelGrid& ts_labels, const LabelGrid& word_labels,
               const OrganConfig& cfg);

/// Bowel-wall mask B. `ooi_raw` must be the undilated OOI.
Mask bowel_wall(const Mask& ooi_raw, morph::StructElem elem, int r_out, int r_in);

}  // namespace ag::maskgen
