#include "graspmaps/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "graspmaps/common.hpp"

namespace graspmaps::reference {

GraspMapStack generate_maps_serial(const GraspScene& scene, const MapGenConfig& cfg) {
    cfg.validate();
    scene.validate();
    if (scene.grasps.empty()) {
        throw ValidationError("scene '" + scene.scene_id + "': no grasp annotations");
    }

    GraspMapStack stack(cfg.bins, scene.image_h, scene.image_w);
    std::vector<int> grasp_bin(scene.grasps.size());
    std::vector<GraspRectangle> thirds;
    thirds.reserve(scene.grasps.size());
    for (size_t gi = 0; gi < scene.grasps.size(); ++gi) {
        grasp_bin[gi] = assign_bin(scene.grasps[gi].theta, cfg.bins);
        thirds.push_back(center_third(scene.grasps[gi]));
    }

    for (int i = 0; i < scene.image_h; ++i) {
        for (int j = 0; j < scene.image_w; ++j) {
            const double px = j + 0.5;
            const double py = i + 0.5;
            for (int b = 0; b < cfg.bins; ++b) {
                double best_q = 0.0;
                const GraspRectangle* best = nullptr;
                for (size_t gi = 0; gi < scene.grasps.size(); ++gi) {
                    if (grasp_bin[gi] != b || !point_in_rect(thirds[gi], px, py)) {
                        continue;
                    }
                    const GraspRectangle& g = scene.grasps[gi];
                    const double dx = px - g.cx;
                    const double dy = py - g.cy;
                    const double quality =
                        pixel_quality(std::sqrt(dx * dx + dy * dy), true, cfg);
                    if (best == nullptr || quality > best_q ||
                        (quality == best_q && g.width < best->width)) {
                        best_q = quality;
                        best = &g;
                    }
                }
                if (best != nullptr) {
                    const size_t at = stack.idx(b, i, j);
                    const auto [c2, s2] = encode_angle(best->theta);
                    stack.q[at] = best_q;
                    stack.ang_cos[at] = c2;
                    stack.ang_sin[at] = s2;
                    stack.width[at] = std::min(best->width, cfg.w_max) / cfg.w_max;
                }
            }
        }
    }
    return stack;
}

namespace {

double element_loss(double diff, LossKind kind) {
    if (kind == LossKind::kMse) {
        return diff * diff;
    }
    const double a = std::abs(diff);
    return a < 1.0 ? 0.5 * diff * diff : a - 0.5;
}

void check_shapes(const GraspMapStack& pred, const GraspMapStack& gt) {
    if (!pred.same_shape(gt) || pred.channel_size() == 0) {
        throw ValidationError("loss inputs must be non-empty and equally shaped");
    }
}

}  // namespace

LossBreakdown total_loss_serial(const GraspMapStack& pred, const GraspMapStack& gt,
                                LossKind kind, Reduction reduction) {
    check_shapes(pred, gt);
    const size_t n = pred.channel_size();
    LossBreakdown out;
    for (size_t e = 0; e < n; ++e) {
        out.q += element_loss(pred.q[e] - gt.q[e], kind);
        out.ang_cos += element_loss(pred.ang_cos[e] - gt.ang_cos[e], kind);
        out.ang_sin += element_loss(pred.ang_sin[e] - gt.ang_sin[e], kind);
        out.width += element_loss(pred.width[e] - gt.width[e], kind);
    }
    if (reduction == Reduction::kMean) {
        out.q /= static_cast<double>(n);
        out.ang_cos /= static_cast<double>(n);
        out.ang_sin /= static_cast<double>(n);
        out.width /= static_cast<double>(n);
    }
    out.scale = pred.bins;
    out.total = pred.bins * (out.q + out.ang_cos + out.ang_sin + out.width);
    return out;
}

LossBreakdown positional_loss_serial(const GraspMapStack& pred, const GraspMapStack& gt,
                                     LossKind kind, Reduction reduction) {
    check_shapes(pred, gt);
    const size_t n = pred.channel_size();
    LossBreakdown out;
    for (size_t e = 0; e < n; ++e) {
        out.q += element_loss(pred.q[e] - gt.q[e], kind);
        out.ang_cos += gt.q[e] * element_loss(pred.ang_cos[e] - gt.ang_cos[e], kind);
        out.ang_sin += gt.q[e] * element_loss(pred.ang_sin[e] - gt.ang_sin[e], kind);
        out.width += gt.q[e] * element_loss(pred.width[e] - gt.width[e], kind);
    }
    if (reduction == Reduction::kMean) {
        out.q /= static_cast<double>(n);
        out.ang_cos /= static_cast<double>(n);
        out.ang_sin /= static_cast<double>(n);
        out.width /= static_cast<double>(n);
    }
    out.scale = pred.bins;
    out.total = pred.bins * (out.q + out.ang_cos + out.ang_sin + out.width);
    return out;
}

GraspMapStack loss_gradient_fd(const GraspMapStack& pred, const GraspMapStack& gt,
                               LossKind kind, bool positional, Reduction reduction,
                               double step) {
    check_shapes(pred, gt);
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw ValidationError("finite-difference step must be positive");
    }
    const auto eval = [&](const GraspMapStack& p) {
        return positional ? positional_loss(p, gt, kind, reduction).total
                          : total_loss(p, gt, kind, reduction).total;
    };

    GraspMapStack grad(pred.bins, pred.h, pred.w);
    GraspMapStack work = pred;
    const auto diff_channel = [&](std::vector<double> GraspMapStack::* channel) {
        std::vector<double>& wv = work.*channel;
        std::vector<double>& gv = grad.*channel;
        for (size_t e = 0; e < wv.size(); ++e) {
            const double orig = wv[e];
            wv[e] = orig + step;
            const double up = eval(work);
            wv[e] = orig - step;
            const double down = eval(work);
            wv[e] = orig;
            gv[e] = (up - down) / (2.0 * step);
        }
    };
    diff_channel(&GraspMapStack::q);
    diff_channel(&GraspMapStack::ang_cos);
    diff_channel(&GraspMapStack::ang_sin);
    diff_channel(&GraspMapStack::width);
    return grad;
}

double rect_iou_monte_carlo(const GraspRectangle& a, const GraspRectangle& b,
                            uint64_t samples, uint64_t seed) {
    if (samples == 0) {
        throw ValidationError("sample count must be positive");
    }
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = xmax;
    for (const GraspRectangle* r : {&a, &b}) {
        for (const Vec2& c : rect_corners(*r)) {
            xmin = std::min(xmin, c.x);
            xmax = std::max(xmax, c.x);
            ymin = std::min(ymin, c.y);
            ymax = std::max(ymax, c.y);
        }
    }
    if (!(xmax > xmin) || !(ymax > ymin)) {
        return 0.0;  // degenerate: both rectangles collapse to a segment/point
    }

    struct ClosedRect {
        double cx, cy, cos_t, sin_t, hw, hh;
        bool contains(double x, double y) const {
            const double dx = x - cx;
            const double dy = y - cy;
            const double u = dx * cos_t + dy * sin_t;
            const double v = -dx * sin_t + dy * cos_t;
            return std::abs(u) <= hw && std::abs(v) <= hh;
        }
    };
    const auto closed = [](const GraspRectangle& r) {
        return ClosedRect{r.cx,           r.cy,           std::cos(r.theta),
                          std::sin(r.theta), r.width / 2.0, r.height / 2.0};
    };
    const ClosedRect ra = closed(a);
    const ClosedRect rb = closed(b);

    Rng rng(seed);
    uint64_t n_both = 0;
    uint64_t n_either = 0;
    for (uint64_t s = 0; s < samples; ++s) {
        const double x = rng.uniform(xmin, xmax);
        const double y = rng.uniform(ymin, ymax);
        const bool in_a = ra.contains(x, y);
        const bool in_b = rb.contains(x, y);
        n_either += (in_a || in_b) ? 1 : 0;
        n_both += (in_a && in_b) ? 1 : 0;
    }
    return n_either == 0
               ? 0.0
               : static_cast<double>(n_both) / static_cast<double>(n_either);
}

PixelMask rasterize_rect_brute(const GraspRectangle& r, int image_h, int image_w) {
    if (image_h <= 0 || image_w <= 0) {
        throw ValidationError("raster dimensions must be positive");
    }
    const std::array<Vec2, 4> c = rect_corners(r);
    PixelMask mask(image_w, image_h);
    for (int i = 0; i < image_h; ++i) {
        for (int j = 0; j < image_w; ++j) {
            const Vec2 p{j + 0.5, i + 0.5};
            bool covered = true;
            for (int k = 0; k < 4 && covered; ++k) {
                const Vec2 edge = c[(k + 1) % 4] - c[k];
                const double side = cross(edge, p - c[k]);
                // Edges through the local (-w/2, -h/2) corner (k = 0 and 3)
                // are the included half-open boundaries.
                covered = (k == 0 || k == 3) ? side >= 0.0 : side > 0.0;
            }
            if (covered) {
                mask.set(i, j, true);
            }
        }
    }
    return mask;
}

}  // namespace graspmaps::reference
