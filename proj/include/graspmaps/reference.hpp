#pragma once

#include <cstdint>

#include "graspmaps/geometry.hpp"
#include "graspmaps/ground_truth.hpp"
#include "graspmaps/loss.hpp"

// Slow, obviously-correct counterparts to the parallel kernels. They share no
// loop structure with the fast paths and exist so tests and benchmarks can
// compare the two: map generation and losses must agree, geometric routines
// must agree within sampling error.
namespace graspmaps::reference {

// Same contract as generate_maps (including tie rules), written as a
// straightforward serial sweep over grasps, bins, and pixels.
GraspMapStack generate_maps_serial(const GraspScene& scene, const MapGenConfig& cfg);

// Naive serial accumulation in index order.
LossBreakdown total_loss_serial(const GraspMapStack& pred, const GraspMapStack& gt,
                                LossKind kind, Reduction reduction = Reduction::kMean);
LossBreakdown positional_loss_serial(const GraspMapStack& pred, const GraspMapStack& gt,
                                     LossKind kind,
                                     Reduction reduction = Reduction::kMean);

// Central finite differences of the selected loss with respect to every
// prediction element. O(elements^2); keep the stacks small.
GraspMapStack loss_gradient_fd(const GraspMapStack& pred, const GraspMapStack& gt,
                               LossKind kind, bool positional,
                               Reduction reduction = Reduction::kMean,
                               double step = 1e-4);

// Monte-Carlo IoU estimate: uniform samples over the united bounding box,
// counting membership in either and both rectangles (closed edges; the
// boundary has measure zero). Deterministic for a given seed.
double rect_iou_monte_carlo(const GraspRectangle& a, const GraspRectangle& b,
                            uint64_t samples, uint64_t seed);

// Edge-function rasterizer: a pixel is covered when its centre is on the
// inner side of all four CCW edges, closing the edges that the half-open
// convention includes (those through the local (-w/2, -h/2) corner).
PixelMask rasterize_rect_brute(const GraspRectangle& r, int image_h, int image_w);

}  // namespace graspmaps::reference
