#include "graspmaps/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "graspmaps/common.hpp"
#include "graspmaps/io.hpp"

namespace graspmaps {

namespace {

// Fold a degree angle into [-90, 90); exact for integer inputs.
double fold_degrees(double deg) {
    double folded = std::remainder(deg, 180.0);
    if (folded >= 90.0) {
        folded -= 180.0;
    }
    return folded;
}

// Nearest pixel centre, so a grasp centred here is at distance zero from one
// pixel and a strong-Gaussian map reaches exactly 1.
Vec2 snap_to_pixel_center(Vec2 p) {
    return {std::floor(p.x) + 0.5, std::floor(p.y) + 0.5};
}

// Deliberately off every pixel centre (offset 0.25 in both axes), so no
// strong-Gaussian value under this grasp ever reaches 1 and argmax decoding
// prefers the spine annotations.
Vec2 snap_off_pixel_center(Vec2 p) {
    return {std::floor(p.x) + 0.25, std::floor(p.y) + 0.25};
}

struct SceneBuilder {
    GraspScene scene;
    const GripperParams& gripper;

    SceneBuilder(std::string id, int w, int h, const GripperParams& gp) : gripper(gp) {
        scene.scene_id = std::move(id);
        scene.image_w = w;
        scene.image_h = h;
        scene.mask = PixelMask(w, h);
    }

    void paint_rect(const GraspRectangle& r) {
        const PixelMask m = rasterize_rect(r, scene.image_h, scene.image_w);
        for (size_t i = 0; i < m.data.size(); ++i) {
            if (m.data[i]) {
                scene.mask->data[i] = 1;
            }
        }
    }

    void paint_ring(double cx, double cy, int outer_r, int inner_r) {
        for (int i = 0; i < scene.image_h; ++i) {
            for (int j = 0; j < scene.image_w; ++j) {
                const double dx = (j + 0.5) - cx;
                const double dy = (i + 0.5) - cy;
                const double d2 = dx * dx + dy * dy;
                if (d2 >= static_cast<double>(inner_r) * inner_r &&
                    d2 <= static_cast<double>(outer_r) * outer_r) {
                    scene.mask->set(i, j, true);
                }
            }
        }
    }

    void add_grasp(Vec2 center, double theta_deg, double opening, double jaw) {
        const GraspRectangle g(center.x, center.y, deg2rad(fold_degrees(theta_deg)),
                               opening, jaw);
        if (check_grasp(*scene.mask, g, gripper) != GraspOutcome::kSuccess) {
            throw ValidationError("scene '" + scene.scene_id +
                                  "': synthesized annotation fails the grasp "
                                  "simulation with the configured gripper");
        }
        scene.grasps.push_back(g);
    }
};

// A single oriented bar. Grasps pinch across the bar: a few along the spine
// and one overhanging each end.
GraspScene make_bar_scene(Rng& rng, std::string id, int image_w, int image_h,
                          const GripperParams& gp) {
    SceneBuilder b(std::move(id), image_w, image_h, gp);

    const double thickness = 5.0 + static_cast<double>(rng.next_below(2));
    const double length = 20.0 + static_cast<double>(rng.next_below(5));
    const double phi_deg = 15.0 * static_cast<double>(rng.next_below(12));
    const double phi = deg2rad(phi_deg);
    const Vec2 axis{std::cos(phi), std::sin(phi)};

    // Covers the farthest overhang jaw corner (about length/2 + 16 out).
    const double margin = length / 2.0 + 18.0;
    const Vec2 center{rng.uniform(margin, image_w - margin),
                      rng.uniform(margin, image_h - margin)};
    b.paint_rect(GraspRectangle(center.x, center.y, phi, length, thickness));

    const double grasp_theta_deg = phi_deg + 90.0;
    const double gap = 3.0 + static_cast<double>(rng.next_below(2));
    const double opening = thickness + 2.0 * gap;

    const int spine_count = 2 + static_cast<int>(rng.next_below(2));
    const double reach = length / 2.0 - 4.0;
    for (int k = 0; k < spine_count; ++k) {
        const double t = -reach + (2.0 * reach) * k / (spine_count - 1);
        b.add_grasp(snap_to_pixel_center(center + t * axis), grasp_theta_deg,
                    opening, opening / 2.0);
    }

    const double overhang = 2.0 + static_cast<double>(rng.next_below(3));
    const double over_opening = thickness + 8.0;
    for (double sign : {-1.0, 1.0}) {
        const Vec2 end = center + (sign * (length / 2.0 + overhang)) * axis;
        b.add_grasp(snap_off_pixel_center(end), grasp_theta_deg, over_opening, 16.0);
    }

    return b.scene;
}

// Two axis-aligned arms joined at a corner; spine grasps keep clear of the
// joint so the jaw plates never sweep the other arm, and each free end gets
// an overhanging annotation.
GraspScene make_l_scene(Rng& rng, std::string id, int image_w, int image_h,
                        const GripperParams& gp) {
    SceneBuilder b(std::move(id), image_w, image_h, gp);

    const double thickness = 5.0;
    const double len_a = 24.0 + static_cast<double>(rng.next_below(5));  // rightward
    const double len_b = 24.0 + static_cast<double>(rng.next_below(5));  // upward
    const double margin = 18.0;
    const Vec2 joint{rng.uniform(margin, image_w - margin - len_a),
                     rng.uniform(margin + len_b, image_h - margin)};

    b.paint_rect(GraspRectangle(joint.x + len_a / 2.0, joint.y, 0.0, len_a, thickness));
    b.paint_rect(
        GraspRectangle(joint.x, joint.y - len_b / 2.0, deg2rad(90.0), len_b, thickness));

    const double gap = 3.0 + static_cast<double>(rng.next_below(2));
    const double opening = thickness + 2.0 * gap;
    const double joint_clear = gp.jaw_length / 2.0 + thickness / 2.0 + 2.0;

    b.add_grasp(snap_to_pixel_center({rng.uniform(joint.x + joint_clear,
                                                  joint.x + len_a - 3.0),
                                      joint.y}),
                90.0, opening, opening / 2.0);
    b.add_grasp(snap_to_pixel_center({joint.x, rng.uniform(joint.y - len_b + 3.0,
                                                           joint.y - joint_clear)}),
                0.0, opening, opening / 2.0);

    const double overhang = 2.0 + static_cast<double>(rng.next_below(3));
    const double over_opening = thickness + 8.0;
    b.add_grasp(snap_off_pixel_center({joint.x + len_a + overhang, joint.y}), 90.0,
                over_opening, 16.0);
    b.add_grasp(snap_off_pixel_center({joint.x, joint.y - len_b - overhang}), 0.0,
                over_opening, 16.0);

    return b.scene;
}

// An annulus grasped across its full diameter: jaws land outside the outer
// circle, the closing region always crosses the ring body.
GraspScene make_ring_scene(Rng& rng, std::string id, int image_w, int image_h,
                           const GripperParams& gp) {
    SceneBuilder b(std::move(id), image_w, image_h, gp);

    const int outer_r = 8 + static_cast<int>(rng.next_below(4));
    const int inner_r = outer_r - 4 - static_cast<int>(rng.next_below(2));
    const double margin = outer_r + 14.0;
    const double cx =
        std::floor(rng.uniform(margin, image_w - margin)) + 0.5;
    const double cy =
        std::floor(rng.uniform(margin, image_h - margin)) + 0.5;
    b.paint_ring(cx, cy, outer_r, inner_r);

    const double opening = 2.0 * outer_r + 6.0;
    const int first_angle = static_cast<int>(rng.next_below(3));
    const int n_grasps = 2 + static_cast<int>(rng.next_below(2));
    for (int k = 0; k < n_grasps; ++k) {
        const double theta_deg = 30.0 * (first_angle + 2 * k);
        b.add_grasp({cx, cy}, theta_deg, opening, opening / 2.0);
    }

    return b.scene;
}

}  // namespace

void SynthConfig::validate() const {
    if (scene_count < 0) {
        throw ValidationError("scene count must be non-negative");
    }
    if (image_w < 64 || image_h < 64) {
        throw ValidationError("synthetic scenes need at least a 64x64 canvas");
    }
    gripper.validate();
    if (gripper.jaw_length < 14.0) {
        throw ValidationError(
            "synthetic overhang annotations need a gripper jaw length >= 14");
    }
    if (gripper.w_max < 40.0) {
        throw ValidationError("synthetic openings need gripper w_max >= 40");
    }
    if (gripper.w_min > 11.0) {
        throw ValidationError("synthetic openings need gripper w_min <= 11");
    }
    if (gripper.jaw_thickness > 3.0) {
        throw ValidationError("synthetic clearances assume jaw thickness <= 3");
    }
}

std::vector<GraspScene> synth_corpus(const SynthConfig& cfg) {
    cfg.validate();
    std::vector<GraspScene> scenes;
    scenes.reserve(static_cast<size_t>(cfg.scene_count));
    for (int i = 0; i < cfg.scene_count; ++i) {
        // Per-scene streams: scene i draws the same values no matter how many
        // scenes surround it.
        uint64_t state = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<uint64_t>(i) + 1));
        Rng rng(splitmix64(state));

        char id[32];
        std::snprintf(id, sizeof(id), "scene_%04d", i);

        const uint64_t kind = rng.next_below(10);
        GraspScene scene;
        if (kind < 5) {
            scene = make_bar_scene(rng, id, cfg.image_w, cfg.image_h, cfg.gripper);
        } else if (kind < 8) {
            scene = make_l_scene(rng, id, cfg.image_w, cfg.image_h, cfg.gripper);
        } else {
            scene = make_ring_scene(rng, id, cfg.image_w, cfg.image_h, cfg.gripper);
        }
        scene.validate();
        scenes.push_back(std::move(scene));
    }
    return scenes;
}

void write_corpus(const std::filesystem::path& corpus_dir, const SynthConfig& cfg) {
    const std::vector<GraspScene> scenes = synth_corpus(cfg);
    std::error_code ec;
    std::filesystem::create_directories(corpus_dir, ec);
    if (ec) {
        throw IoError("cannot create directory: " + corpus_dir.string());
    }
    for (const GraspScene& scene : scenes) {
        save_scene(corpus_dir / scene.scene_id, scene);
    }
}

}  // namespace graspmaps
