#include "graspmaps/loss.hpp"

#include <algorithm>
#include <cmath>

namespace graspmaps {

const char* loss_kind_name(LossKind k) {
    return k == LossKind::kMse ? "mse" : "smooth_l1";
}

LossKind parse_loss_kind(const std::string& name) {
    if (name == "mse") return LossKind::kMse;
    if (name == "smooth_l1") return LossKind::kSmoothL1;
    throw ValidationError("unknown loss kind '" + name + "' (expected mse|smooth_l1)");
}

namespace {

double element_loss(double diff, LossKind kind) {
    if (kind == LossKind::kMse) {
        return diff * diff;
    }
    const double a = std::fabs(diff);
    return a < 1.0 ? 0.5 * diff * diff : a - 0.5;
}

double element_loss_grad(double diff, LossKind kind) {
    if (kind == LossKind::kMse) {
        return 2.0 * diff;
    }
    if (diff >= 1.0) return 1.0;
    if (diff <= -1.0) return -1.0;
    return diff;
}

// Fixed accumulation grain. Partial sums are always taken over blocks of
// this many elements and combined in block order, so the reduction is
// bit-identical for any OpenMP thread count and for any stack shape.
constexpr size_t kReduceBlock = 1024;

double reduce_channel(const std::vector<double>& pred, const std::vector<double>& target,
                      const std::vector<double>* weights, LossKind kind, Reduction reduction) {
    const size_t n = pred.size();
    const size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < static_cast<long>(blocks); ++r) {
        const size_t base = static_cast<size_t>(r) * kReduceBlock;
        const size_t end = std::min(n, base + kReduceBlock);
        double acc = 0.0;
        for (size_t e = base; e < end; ++e) {
            double term = element_loss(pred[e] - target[e], kind);
            if (weights != nullptr) {
                term *= (*weights)[e];
            }
            acc += term;
        }
        partial[r] = acc;
    }
    double sum = 0.0;
    for (double p : partial) {
        sum += p;
    }
    return reduction == Reduction::kMean ? sum / static_cast<double>(n) : sum;
}

void check_shapes(const GraspMapStack& pred, const GraspMapStack& gt) {
    if (!pred.same_shape(gt)) {
        throw ValidationError("prediction and ground-truth stacks have different shapes");
    }
    if (pred.channel_size() == 0) {
        throw ValidationError("empty grasp map stack");
    }
}

}  // namespace

double channel_loss(const std::vector<double>& pred, const std::vector<double>& target,
                    LossKind kind, Reduction reduction) {
    if (pred.size() != target.size()) {
        throw ValidationError("channel shapes do not match");
    }
    if (pred.empty()) {
        throw ValidationError("empty channel");
    }
    return reduce_channel(pred, target, nullptr, kind, reduction);
}

LossBreakdown total_loss(const GraspMapStack& pred, const GraspMapStack& gt, LossKind kind,
                         Reduction reduction) {
    check_shapes(pred, gt);
    LossBreakdown out;
    out.scale = pred.bins;
    out.q = reduce_channel(pred.q, gt.q, nullptr, kind, reduction);
    out.ang_cos = reduce_channel(pred.ang_cos, gt.ang_cos, nullptr, kind, reduction);
    out.ang_sin = reduce_channel(pred.ang_sin, gt.ang_sin, nullptr, kind, reduction);
    out.width = reduce_channel(pred.width, gt.width, nullptr, kind, reduction);
    out.total = pred.bins * (out.q + out.ang_cos + out.ang_sin + out.width);
    return out;
}

LossBreakdown positional_loss(const GraspMapStack& pred, const GraspMapStack& gt, LossKind kind,
                              Reduction reduction) {
    check_shapes(pred, gt);
    LossBreakdown out;
    out.scale = pred.bins;
    out.q = reduce_channel(pred.q, gt.q, nullptr, kind, reduction);
    out.ang_cos = reduce_channel(pred.ang_cos, gt.ang_cos, &gt.q, kind, reduction);
    out.ang_sin = reduce_channel(pred.ang_sin, gt.ang_sin, &gt.q, kind, reduction);
    out.width = reduce_channel(pred.width, gt.width, &gt.q, kind, reduction);
    out.total = pred.bins * (out.q + out.ang_cos + out.ang_sin + out.width);
    return out;
}

GraspMapStack loss_gradient(const GraspMapStack& pred, const GraspMapStack& gt, LossKind kind,
                            bool positional, Reduction reduction) {
    check_shapes(pred, gt);
    GraspMapStack grad(pred.bins, pred.h, pred.w);
    const double n = static_cast<double>(pred.channel_size());
    const double scale =
        pred.bins * (reduction == Reduction::kMean ? 1.0 / n : 1.0);
    const long total = static_cast<long>(pred.channel_size());
#pragma omp parallel for schedule(static)
    for (long e = 0; e < total; ++e) {
        grad.q[e] = scale * element_loss_grad(pred.q[e] - gt.q[e], kind);
        const double w = positional ? gt.q[e] : 1.0;
        grad.ang_cos[e] = scale * w * element_loss_grad(pred.ang_cos[e] - gt.ang_cos[e], kind);
        grad.ang_sin[e] = scale * w * element_loss_grad(pred.ang_sin[e] - gt.ang_sin[e], kind);
        grad.width[e] = scale * w * element_loss_grad(pred.width[e] - gt.width[e], kind);
    }
    return grad;
}

}  // namespace graspmaps
