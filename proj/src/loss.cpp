#include "ag/loss.hpp"

#include <algorithm>
#include <cmath>

#include "ag/sampling.hpp"

namespace ag::loss {

namespace {

void check_inputs(const Mask& truth, const RealGrid& prob, const char* what) {
    require_same_geometry(truth, prob, what);
    for (double p : prob.data()) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument(std::string(what) + ": probabilities must lie in [0, 1]");
        }
    }
}

struct DiceSums {
    double intersection;
    double total;  // sum P + sum Y
};

DiceSums dice_sums(const Mask& truth, const RealGrid& prob) {
    std::vector<double> inter(prob.size());
    std::vector<double> both(prob.size());
    for (std::size_t i = 0; i < prob.size(); ++i) {
        const double y = truth[i] ? 1.0 : 0.0;
        inter[i] = prob[i] * y;
        both[i] = prob[i] + y;
    }
    return {sampling::stable_sum(inter), sampling::stable_sum(both)};
}

}  // namespace

void LossConfig::validate() const {
    auto in_range = [](double e) { return e > 0.0 && e <= 1e-2; };
    if (!in_range(dice_eps) || !in_range(ce_eps)) {
        throw InvalidArgument("loss config: dice_eps and ce_eps must lie in (0, 1e-2]");
    }
    if (!(dice_weight >= 0.0) || !(ce_weight >= 0.0) || !std::isfinite(dice_weight) ||
        !std::isfinite(ce_weight)) {
        throw InvalidArgument("loss config: weights must be finite and >= 0");
    }
}

double soft_dice_loss(const Mask& truth, const RealGrid& prob, const LossConfig& cfg) {
    cfg.validate();
    check_inputs(truth, prob, "soft_dice_loss");
    const DiceSums s = dice_sums(truth, prob);
    return 1.0 - (2.0 * s.intersection + cfg.dice_eps) / (s.total + cfg.dice_eps);
}

double cross_entropy_loss(const Mask& truth, const RealGrid& prob, const LossConfig& cfg) {
    cfg.validate();
    check_inputs(truth, prob, "cross_entropy_loss");
    std::vector<double> terms(prob.size());
    for (std::size_t i = 0; i < prob.size(); ++i) {
        const double p = std::clamp(prob[i], cfg.ce_eps, 1.0 - cfg.ce_eps);
        terms[i] = truth[i] ? -std::log(p) : -std::log(1.0 - p);
    }
    return sampling::stable_sum(terms) / static_cast<double>(terms.size());
}

double combined_loss(const Mask& truth, const RealGrid& prob, const LossConfig& cfg) {
    return cfg.dice_weight * soft_dice_loss(truth, prob, cfg) +
           cfg.ce_weight * cross_entropy_loss(truth, prob, cfg);
}

RealGrid mask_prediction(const RealGrid& prob, const Mask& ooi) {
    require_same_geometry(prob, ooi, "mask_prediction");
    RealGrid out = prob;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!ooi[i]) out[i] = 0.0;
    }
    return out;
}

double af_loss(const Mask& truth, const RealGrid& prob, const Mask& ooi,
               const LossConfig& cfg) {
    require_same_geometry(truth, ooi, "af_loss");
    check_inputs(truth, prob, "af_loss");
    return combined_loss(truth, mask_prediction(prob, ooi), cfg);
}

RealGrid soft_dice_grad(const Mask& truth, const RealGrid& prob, const LossConfig& cfg) {
    cfg.validate();
    check_inputs(truth, prob, "soft_dice_grad");
    const DiceSums s = dice_sums(truth, prob);
    const double num = 2.0 * s.intersection + cfg.dice_eps;
    const double den = s.total + cfg.dice_eps;
    RealGrid g(prob.dims(), prob.spacing(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double y = truth[i] ? 1.0 : 0.0;
        g[i] = -(2.0 * y * den - num) / (den * den);
    }
    return g;
}

RealGrid cross_entropy_grad(const Mask& truth, const RealGrid& prob, const LossConfig& cfg) {
    cfg.validate();
    check_inputs(truth, prob, "cross_entropy_grad");
    const auto n = static_cast<double>(prob.size());
    RealGrid g(prob.dims(), prob.spacing(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double p = prob[i];
        if (p < cfg.ce_eps || p > 1.0 - cfg.ce_eps) continue;
        g[i] = truth[i] ? -1.0 / (p * n) : 1.0 / ((1.0 - p) * n);
    }
    return g;
}

}  // namespace ag::loss
