#pragma once

#include "ag/volume.hpp"

namespace ag::loss {

struct LossConfig {
    double dice_eps = 1e-5;
    /// Probabilities are clamped to [ce_eps, 1 - ce_eps] before the log.
    double ce_eps = 1e-7;
    double dice_weight = 1.0;
    double ce_weight = 1.0;

    void validate() const;
};

/// 1 - (2 sum(P Y) + eps) / (sum P + sum Y + eps).
double soft_dice_loss(const Mask& truth, const RealGrid& prob, const LossConfig& cfg = {});

/// Mean binary cross-entropy with clamped probabilities.
double cross_entropy_loss(const Mask& truth, const RealGrid& prob, const LossConfig& cfg = {});

/// Weighted Dice + cross-entropy.
double combined_loss(const Mask& truth, const RealGrid& prob, const LossConfig& cfg = {});

/// Anatomy-focalised loss: combined_loss(truth, prob * ooi). Ground truth is
/// not masked, so foreground outside the OOI still counts against the model.
double af_loss(const Mask& truth, const RealGrid& prob, const Mask& ooi,
               const LossConfig& cfg = {});

/// prob with every voxel outside `ooi` set to 0.
RealGrid mask_prediction(const RealGrid& prob, const Mask& ooi);

/// d soft_dice_loss / d P_i for every voxel.
RealGrid soft_dice_grad(const Mask& truth, const RealGrid& prob, const LossConfig& cfg = {});

/// d cross_entropy_loss / d P_i; zero where the clamp is active.
RealGrid cross_entropy_grad(const Mask& truth, const RealGrid& prob,
                            const LossConfig& cfg = {});

}  // namespace ag::loss
