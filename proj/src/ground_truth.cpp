#include "graspmaps/ground_truth.hpp"

#include <algorithm>
#include <cmath>

namespace graspmaps {

void GraspScene::validate() const {
    if (image_w <= 0 || image_h <= 0) {
        throw ValidationError("scene '" + scene_id + "': image dimensions must be positive");
    }
    for (const GraspRectangle& g : grasps) {
        if (g.width <= 0.0 || g.height <= 0.0) {
            throw ValidationError("scene '" + scene_id + "': grasp extents must be positive");
        }
        if (g.cx < 0.0 || g.cx >= image_w || g.cy < 0.0 || g.cy >= image_h) {
            throw ValidationError("scene '" + scene_id + "': grasp centre outside image");
        }
    }
    if (mask && (mask->width != image_w || mask->height != image_h)) {
        throw ValidationError("scene '" + scene_id + "': mask dimensions do not match image");
    }
}

const char* map_mode_name(MapMode m) {
    switch (m) {
        case MapMode::kBinary: return "binary";
        case MapMode::kSoft: return "soft";
        case MapMode::kStrong: return "strong";
    }
    return "?";
}

MapMode parse_map_mode(const std::string& name) {
    if (name == "binary") return MapMode::kBinary;
    if (name == "soft") return MapMode::kSoft;
    if (name == "strong") return MapMode::kStrong;
    throw ValidationError("unknown map mode '" + name + "' (expected binary|soft|strong)");
}

void MapGenConfig::validate() const {
    if (sigma <= 0.0 || !std::isfinite(sigma)) {
        throw ValidationError("sigma must be positive");
    }
    if (bins < 1) {
        throw ValidationError("bin count must be >= 1");
    }
    if (w_max <= 0.0 || !std::isfinite(w_max)) {
        throw ValidationError("w_max must be positive");
    }
    if (!(soft_floor > 0.0 && soft_floor < 1.0)) {
        throw ValidationError("soft_floor must be in (0, 1)");
    }
}

GraspMapStack::GraspMapStack(int bins_, int h_, int w_) : bins(bins_), h(h_), w(w_) {
    if (bins < 1 || h < 1 || w < 1) {
        throw ValidationError("grasp map stack dimensions must be positive");
    }
    const size_t n = channel_size();
    q.assign(n, 0.0);
    ang_cos.assign(n, 0.0);
    ang_sin.assign(n, 0.0);
    width.assign(n, 0.0);
}

std::pair<double, double> encode_angle(double theta) {
    return {std::cos(2.0 * theta), std::sin(2.0 * theta)};
}

double bin_lower_bound_rad(int k, int bins) {
    return deg2rad(-90.0 + k * (180.0 / bins));
}

int assign_bin(double theta, int bins) {
    if (bins < 1) {
        throw ValidationError("bin count must be >= 1");
    }
    // Scan the left-closed boundaries instead of dividing, so an angle that
    // equals a boundary value lands in the upper bin regardless of rounding.
    int bin = 0;
    for (int k = 1; k < bins; ++k) {
        if (theta >= bin_lower_bound_rad(k, bins)) {
            bin = k;
        } else {
            break;
        }
    }
    return bin;
}

namespace {

double gaussian_ratio(double d, double sigma) {
    return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

// Per-grasp constants hoisted out of the pixel loop.
struct GraspTerms {
    double cx, cy;
    double cos_t, sin_t;
    double half_third;   // width / 6
    double half_height;  // height / 2
    double opening;
    double cos2, sin2;
    double wnorm;
};

}  // namespace

double pixel_quality(double d, bool in_center_third, const MapGenConfig& cfg) {
    if (!in_center_third) {
        return 0.0;
    }
    switch (cfg.mode) {
        case MapMode::kBinary:
            return 1.0;
        case MapMode::kSoft: {
            const double ratio = gaussian_ratio(d, cfg.sigma);
            return cfg.soft_floor_is_cap ? std::min(ratio, cfg.soft_floor)
                                         : std::max(ratio, cfg.soft_floor);
        }
        case MapMode::kStrong:
            return gaussian_ratio(d, cfg.sigma);
    }
    return 0.0;
}

GraspMapStack generate_maps(const GraspScene& scene, const MapGenConfig& cfg) {
    cfg.validate();
    scene.validate();
    if (scene.grasps.empty()) {
        throw ValidationError("scene '" + scene.scene_id + "': no grasp annotations");
    }

    const int h = scene.image_h;
    const int w = scene.image_w;
    GraspMapStack stack(cfg.bins, h, w);

    // Bucket grasps by bin, preserving annotation order for tie-breaking.
    std::vector<std::vector<GraspTerms>> by_bin(cfg.bins);
    for (const GraspRectangle& g : scene.grasps) {
        GraspTerms t;
        t.cx = g.cx;
        t.cy = g.cy;
        t.cos_t = std::cos(g.theta);
        t.sin_t = std::sin(g.theta);
        t.half_third = g.width / 6.0;
        t.half_height = g.height / 2.0;
        t.opening = g.width;
        const auto [c2, s2] = encode_angle(g.theta);
        t.cos2 = c2;
        t.sin2 = s2;
        t.wnorm = std::min(g.width, cfg.w_max) / cfg.w_max;
        by_bin[assign_bin(g.theta, cfg.bins)].push_back(t);
    }

    const long total_rows = static_cast<long>(cfg.bins) * h;
#pragma omp parallel for schedule(static)
    for (long br = 0; br < total_rows; ++br) {
        const int b = static_cast<int>(br / h);
        const int i = static_cast<int>(br % h);
        const auto& grasps = by_bin[b];
        if (grasps.empty()) {
            continue;
        }
        const double py = i + 0.5;
        const size_t row_base = stack.idx(b, i, 0);
        for (int j = 0; j < w; ++j) {
            const double px = j + 0.5;
            double best_q = 0.0;
            const GraspTerms* best = nullptr;
            for (const GraspTerms& g : grasps) {
                const double dx = px - g.cx;
                const double dy = py - g.cy;
                const double u = dx * g.cos_t + dy * g.sin_t;
                const double v = -dx * g.sin_t + dy * g.cos_t;
                const bool delta = u >= -g.half_third && u < g.half_third &&
                                   v >= -g.half_height && v < g.half_height;
                if (!delta) {
                    continue;
                }
                const double contribution =
                    pixel_quality(std::sqrt(dx * dx + dy * dy), true, cfg);
                const bool wins =
                    best == nullptr || contribution > best_q ||
                    (contribution == best_q && g.opening < best->opening);
                if (wins) {
                    best_q = contribution;
                    best = &g;
                }
            }
            if (best != nullptr) {
                const size_t at = row_base + j;
                stack.q[at] = best_q;
                stack.ang_cos[at] = best->cos2;
                stack.ang_sin[at] = best->sin2;
                stack.width[at] = best->wnorm;
            }
        }
    }
    return stack;
}

std::vector<PixelMask> support(const GraspMapStack& stack) {
    std::vector<PixelMask> masks;
    masks.reserve(stack.bins);
    for (int b = 0; b < stack.bins; ++b) {
        PixelMask m(stack.w, stack.h);
        for (int i = 0; i < stack.h; ++i) {
            for (int j = 0; j < stack.w; ++j) {
                if (stack.q[stack.idx(b, i, j)] > 0.0) {
                    m.set(i, j, true);
                }
            }
        }
        masks.push_back(std::move(m));
    }
    return masks;
}

}  // namespace graspmaps
