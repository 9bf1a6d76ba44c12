#include "graspmaps/sim2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "graspmaps/common.hpp"

namespace graspmaps {

std::string outcome_name(GraspOutcome o) {
    switch (o) {
        case GraspOutcome::kSuccess: return "success";
        case GraspOutcome::kJawCollision: return "jaw_collision";
        case GraspOutcome::kMiss: return "miss";
        case GraspOutcome::kOutOfBounds: return "out_of_bounds";
    }
    throw ValidationError("unknown grasp outcome");
}

void GripperParams::validate() const {
    if (!std::isfinite(jaw_thickness) || jaw_thickness <= 0.0) {
        throw ValidationError("gripper jaw_thickness must be positive");
    }
    if (!std::isfinite(jaw_length) || jaw_length <= 0.0) {
        throw ValidationError("gripper jaw_length must be positive");
    }
    if (!std::isfinite(w_min) || w_min < 0.0) {
        throw ValidationError("gripper w_min must be non-negative");
    }
    if (!std::isfinite(w_max) || w_max <= w_min) {
        throw ValidationError("gripper w_max must exceed w_min");
    }
}

JawFootprints jaw_footprints(const GraspRectangle& g, const GripperParams& gp) {
    gp.validate();
    const Vec2 axis = g.axis();
    const double offset = g.width / 2.0 + gp.jaw_thickness / 2.0;
    const Vec2 c = g.center();
    const Vec2 cl{c.x - axis.x * offset, c.y - axis.y * offset};
    const Vec2 cr{c.x + axis.x * offset, c.y + axis.y * offset};
    JawFootprints f{
        GraspRectangle(cl.x, cl.y, g.theta, gp.jaw_thickness, gp.jaw_length),
        GraspRectangle(cr.x, cr.y, g.theta, gp.jaw_thickness, gp.jaw_length),
        GraspRectangle(c.x, c.y, g.theta, g.width, gp.jaw_length),
    };
    return f;
}

namespace {

bool inside_image(const GraspRectangle& r, double image_w, double image_h) {
    for (const Vec2& p : rect_corners(r)) {
        if (p.x < 0.0 || p.x > image_w || p.y < 0.0 || p.y > image_h) {
            return false;
        }
    }
    return true;
}

bool hits_occupied(const PixelMask& occupancy, const GraspRectangle& r) {
    const PixelMask footprint = rasterize_rect(r, occupancy.height, occupancy.width);
    for (int i = 0; i < occupancy.height; ++i) {
        for (int j = 0; j < occupancy.width; ++j) {
            if (footprint.at(i, j) && occupancy.at(i, j)) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

GraspOutcome check_grasp(const PixelMask& occupancy, const GraspRectangle& g,
                         const GripperParams& gp) {
    const JawFootprints f = jaw_footprints(g, gp);
    const double image_w = static_cast<double>(occupancy.width);
    const double image_h = static_cast<double>(occupancy.height);
    if (!inside_image(f.left, image_w, image_h) || !inside_image(f.right, image_w, image_h)) {
        return GraspOutcome::kOutOfBounds;
    }
    if (hits_occupied(occupancy, f.left) || hits_occupied(occupancy, f.right)) {
        return GraspOutcome::kJawCollision;
    }
    if (g.width < gp.w_min || g.width > gp.w_max) {
        return GraspOutcome::kMiss;
    }
    if (!hits_occupied(occupancy, f.closing_region)) {
        return GraspOutcome::kMiss;
    }
    return GraspOutcome::kSuccess;
}

double OutcomeCounts::success_rate() const {
    const size_t n = total();
    if (n == 0) {
        throw ValidationError("success rate of an empty outcome tally is undefined");
    }
    return static_cast<double>(success) / static_cast<double>(n);
}

void OutcomeCounts::add(GraspOutcome o) {
    switch (o) {
        case GraspOutcome::kSuccess: ++success; return;
        case GraspOutcome::kJawCollision: ++jaw_collision; return;
        case GraspOutcome::kMiss: ++miss; return;
        case GraspOutcome::kOutOfBounds: ++out_of_bounds; return;
    }
    throw ValidationError("unknown grasp outcome");
}

OutcomeCounts simulate_predictions(
    const std::vector<GraspScene>& scenes,
    const std::vector<std::pair<std::string, GraspRectangle>>& predictions,
    const GripperParams& gp) {
    gp.validate();
    std::map<std::string, const GraspRectangle*> by_id;
    for (const auto& [id, rect] : predictions) {
        if (!by_id.emplace(id, &rect).second) {
            throw ValidationError("duplicate prediction for scene '" + id + "'");
        }
    }

    std::vector<const GraspScene*> ordered;
    ordered.reserve(scenes.size());
    for (const GraspScene& s : scenes) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const GraspScene* a, const GraspScene* b) { return a->scene_id < b->scene_id; });

    OutcomeCounts counts;
    for (const GraspScene* s : ordered) {
        if (!s->mask.has_value()) {
            throw ValidationError("scene '" + s->scene_id + "' carries no occupancy mask");
        }
        auto it = by_id.find(s->scene_id);
        if (it == by_id.end()) {
            throw ValidationError("missing prediction for scene '" + s->scene_id + "'");
        }
        counts.add(check_grasp(*s->mask, *it->second, gp));
    }
    return counts;
}

double simulated_success_rate(
    const std::vector<GraspScene>& scenes,
    const std::vector<std::pair<std::string, GraspRectangle>>& predictions,
    const GripperParams& gp) {
    return simulate_predictions(scenes, predictions, gp).success_rate();
}

}  // namespace graspmaps
