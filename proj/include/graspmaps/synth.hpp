#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "graspmaps/ground_truth.hpp"
#include "graspmaps/sim2d.hpp"

namespace graspmaps {

// Seeded generator of small synthetic scenes: bar, L, and ring shapes with
// annotated antipodal grasps. Spine annotations sit exactly on pixel centres
// (so a strong-Gaussian ground-truth map peaks at exactly 1 there), while
// elongated shapes also carry deliberately overhanging annotations at their
// ends whose centre-third support sticks out past the object, off the
// object's body. Every emitted annotation passes the grasp simulation with
// the configured gripper.
struct SynthConfig {
    int scene_count = 100;
    uint64_t seed = 0;
    int image_w = 64;
    int image_h = 64;
    GripperParams gripper{2.0, 20.0, 0.0, 150.0};

    void validate() const;
};

std::vector<GraspScene> synth_corpus(const SynthConfig& cfg);

// synth_corpus + one scene directory per scene. Identical config gives
// byte-identical output trees.
void write_corpus(const std::filesystem::path& corpus_dir, const SynthConfig& cfg);

}  // namespace graspmaps
