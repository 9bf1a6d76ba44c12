#pragma once

#include <vector>

#include "graspmaps/ground_truth.hpp"

namespace graspmaps {

struct DecodedGrasp {
    GraspRectangle rect;
    double quality = 0.0;  // Q value at the selected pixel
    int bin = 0;
};

// Inverse of encode_angle: atan2(sin, cos) / 2, wrapped into [-pi/2, pi/2).
// Throws when both components are zero (angle undefined).
double decode_angle(double cos_comp, double sin_comp);

// Argmax decode of a predicted stack. The globally best-quality pixel gives
// the grasp centre (at the pixel centre); angle and width are read from the
// same bin and pixel, and the jaw size is half the opening. Ties break to
// the lowest bin, then row-major pixel order. Throws when no pixel has
// positive quality.
DecodedGrasp extract_grasp(const GraspMapStack& stack, double w_max);

// Greedy non-maximum suppression by descending quality: candidates are all
// positive-quality pixels, and an accepted grasp suppresses later candidates
// whose centres lie closer than min_separation. May return fewer than k.
std::vector<DecodedGrasp> extract_top_k(const GraspMapStack& stack, double w_max, int k,
                                        double min_separation);

// Separable Gaussian blur of the quality channels, reflect-padded. Used by
// the CLI's optional pre-argmax smoothing; off by default.
GraspMapStack smooth_quality(const GraspMapStack& stack, double sigma);

}  // namespace graspmaps
