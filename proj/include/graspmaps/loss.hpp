#pragma once

#include <string>

#include "graspmaps/ground_truth.hpp"

namespace graspmaps {

enum class LossKind { kMse, kSmoothL1 };
enum class Reduction { kMean, kSum };

const char* loss_kind_name(LossKind k);
LossKind parse_loss_kind(const std::string& name);

struct LossBreakdown {
    double total = 0.0;  // scale * (q + ang_cos + ang_sin + width)
    double q = 0.0;
    double ang_cos = 0.0;
    double ang_sin = 0.0;
    double width = 0.0;
    int scale = 1;  // the bin count N
};

// Elementwise loss reduced over one channel raster.
// mse: (p - t)^2; smooth_l1: 0.5 (p - t)^2 for |p - t| < 1, else |p - t| - 0.5.
double channel_loss(const std::vector<double>& pred, const std::vector<double>& target,
                    LossKind kind, Reduction reduction = Reduction::kMean);

// N * (L(Q) + L(cos) + L(sin) + L(W)).
LossBreakdown total_loss(const GraspMapStack& pred, const GraspMapStack& gt, LossKind kind,
                         Reduction reduction = Reduction::kMean);

// N * (L(Q) + Qhat-weighted angle and width terms): each angle/width element
// loss is multiplied by the ground-truth quality at the same bin and pixel
// before reduction.
LossBreakdown positional_loss(const GraspMapStack& pred, const GraspMapStack& gt, LossKind kind,
                              Reduction reduction = Reduction::kMean);

// Analytic d(loss)/d(pred) for every element of every channel, shaped like
// the inputs. `positional` selects which of the two losses to differentiate.
GraspMapStack loss_gradient(const GraspMapStack& pred, const GraspMapStack& gt, LossKind kind,
                            bool positional, Reduction reduction = Reduction::kMean);

}  // namespace graspmaps
