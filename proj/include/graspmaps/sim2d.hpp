#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "graspmaps/geometry.hpp"
#include "graspmaps/ground_truth.hpp"

namespace graspmaps {

// Outcome of attempting a parallel-jaw grasp against an occupancy mask.
// Checks run in a fixed order; the first failing check is reported, so a
// grasp that both leaves the image and collides reports OutOfBounds.
enum class GraspOutcome {
    kSuccess,
    kJawCollision,
    kMiss,
    kOutOfBounds,
};

std::string outcome_name(GraspOutcome o);

// Physical gripper model for the 2D simulation. Lengths are in pixels.
struct GripperParams {
    double jaw_thickness = 2.0;   // jaw extent along the closing direction
    double jaw_length = 20.0;     // jaw extent across the closing direction
    double w_min = 0.0;           // smallest commanded opening the gripper accepts
    double w_max = 150.0;         // largest commanded opening the gripper accepts

    void validate() const;
};

// Footprints of the two jaws at their initial (fully open) pose. The grasp
// rectangle's width is the commanded opening; each jaw sits just outside it.
struct JawFootprints {
    GraspRectangle left;
    GraspRectangle right;
    GraspRectangle closing_region;
};

JawFootprints jaw_footprints(const GraspRectangle& g, const GripperParams& gp);

// Simulates the grasp `g` against the occupancy mask. Checks, in order:
//   1. both jaw footprints lie inside [0, W] x [0, H]   -> else OutOfBounds
//   2. no jaw footprint pixel is occupied               -> else JawCollision
//   3. the closing region contains an occupied pixel and
//      the opening is within [w_min, w_max]             -> else Miss
GraspOutcome check_grasp(const PixelMask& occupancy, const GraspRectangle& g,
                         const GripperParams& gp);

// Tally of outcomes over a batch of grasp attempts.
struct OutcomeCounts {
    size_t success = 0;
    size_t jaw_collision = 0;
    size_t miss = 0;
    size_t out_of_bounds = 0;

    size_t total() const { return success + jaw_collision + miss + out_of_bounds; }
    double success_rate() const;
    void add(GraspOutcome o);
};

// Runs check_grasp for each scene's predicted rectangle against that scene's
// occupancy mask. Every scene must carry a mask and a prediction keyed by
// scene_id. Scenes are processed in scene_id order.
OutcomeCounts simulate_predictions(
    const std::vector<GraspScene>& scenes,
    const std::vector<std::pair<std::string, GraspRectangle>>& predictions,
    const GripperParams& gp);

// Fraction of Success outcomes over the batch. Errors on an empty batch.
double simulated_success_rate(
    const std::vector<GraspScene>& scenes,
    const std::vector<std::pair<std::string, GraspRectangle>>& predictions,
    const GripperParams& gp);

}  // namespace graspmaps
