#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graspmaps/geometry.hpp"

namespace graspmaps {

// One annotated image: dimensions plus the grasp set, with optional
// occupancy/depth/colour rasters attached when the scene directory has them.
struct GraspScene {
    std::string scene_id;
    int image_w = 0;
    int image_h = 0;
    std::vector<GraspRectangle> grasps;
    std::optional<PixelMask> mask;   // object occupancy, nonzero = occupied
    std::optional<Raster> depth;
    std::vector<Raster> rgb;         // empty or 3 planes

    // Checks dimensions, positive grasp extents, and that every grasp
    // centre lies inside the image. Corrupt annotations fail here rather
    // than being clipped downstream.
    void validate() const;
};

enum class MapMode { kBinary, kSoft, kStrong };

const char* map_mode_name(MapMode m);
MapMode parse_map_mode(const std::string& name);

struct MapGenConfig {
    MapMode mode = MapMode::kBinary;
    double sigma = 2.0;       // Gaussian strength, pixels
    int bins = 1;             // angle bins over [-90, 90) degrees
    double w_max = 150.0;     // maximum gripper opening, pixels
    double soft_floor = 0.9;  // minimum quality inside the centre third (soft mode)
    // Legacy soft variant: treat soft_floor as an upper cap, min(ratio, floor),
    // instead of a floor. Off by default.
    bool soft_floor_is_cap = false;

    void validate() const;
};

// Four per-bin map channels. Values are stored bin-major, then row-major:
// index (b, i, j) -> (b*h + i)*w + j. Width is stored normalized by w_max.
struct GraspMapStack {
    int bins = 0;
    int h = 0;
    int w = 0;
    std::vector<double> q;
    std::vector<double> ang_cos;
    std::vector<double> ang_sin;
    std::vector<double> width;

    GraspMapStack() = default;
    GraspMapStack(int bins_, int h_, int w_);

    size_t plane_size() const { return static_cast<size_t>(h) * w; }
    size_t channel_size() const { return static_cast<size_t>(bins) * h * w; }
    size_t idx(int b, int i, int j) const {
        return (static_cast<size_t>(b) * h + i) * w + j;
    }
    bool same_shape(const GraspMapStack& o) const {
        return bins == o.bins && h == o.h && w == o.w;
    }
    bool operator==(const GraspMapStack& o) const = default;
};

// Angle encoded as the doubled-angle unit vector (cos 2theta, sin 2theta),
// which is continuous across the +-pi/2 wrap.
std::pair<double, double> encode_angle(double theta);

// Lower bound of bin k (0-based) when [-90, 90) degrees is split into
// `bins` equal ranges.
double bin_lower_bound_rad(int k, int bins);

// Left-closed, right-open bin assignment; equivalent to
// floor((theta + pi/2) / (pi / bins)) clamped to bins-1.
int assign_bin(double theta, int bins);

// Quality contribution of a single grasp at a pixel `d` pixels from its
// centre. `in_center_third` gates everything to the centre third.
double pixel_quality(double d, bool in_center_third, const MapGenConfig& cfg);

// Ground-truth stack synthesis. For every bin and pixel the best-scoring
// covering grasp provides the quality value and the angle/width channels;
// ties go to the smaller opening, then annotation order. Uncovered pixels
// carry zeros in all channels. OpenMP-parallel over pixels; output is
// identical for any thread count.
GraspMapStack generate_maps(const GraspScene& scene, const MapGenConfig& cfg);

// Per-bin masks of pixels with q > 0.
std::vector<PixelMask> support(const GraspMapStack& stack);

}  // namespace graspmaps
