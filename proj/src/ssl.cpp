#include "ag/ssl.hpp"

#include <cmath>

#include "ag/random.hpp"
#include "ag/sampling.hpp"

namespace ag::ssl {

void NoiseSpec::validate() const {
    if (!std::isfinite(mean)) throw InvalidArgument("noise mean must be finite");
    if (!(stddev >= 0.0) || !std::isfinite(stddev)) {
        throw InvalidArgument("noise stddev must be finite and >= 0");
    }
}

RealGrid mask_bowel_wall(const RealGrid& image, const Mask& wall, const NoiseSpec& noise) {
    noise.validate();
    require_same_geometry(image, wall, "mask_bowel_wall");
    RealGrid out = image;
    Rng rng(noise.seed);
    auto o = out.data();
    const auto b = wall.data();
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (b[i]) o[i] = rng.normal(noise.mean, noise.stddev);
    }
    return out;
}

double l1_recon_loss(const RealGrid& image, const RealGrid& recon) {
    require_same_geometry(image, recon, "l1_recon_loss");
    std::vector<double> diffs(image.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) diffs[i] = std::abs(image[i] - recon[i]);
    return sampling::stable_sum(diffs) / static_cast<double>(diffs.size());
}

double l1_recon_loss(const RealGrid& image, const RealGrid& recon, const Mask& region) {
    require_same_geometry(image, recon, "l1_recon_loss");
    require_same_geometry(image, region, "l1_recon_loss");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (region[i]) diffs.push_back(std::abs(image[i] - recon[i]));
    }
    if (diffs.empty()) return 0.0;
    return sampling::stable_sum(diffs) / static_cast<double>(diffs.size());
}

}  // namespace ag::ssl
