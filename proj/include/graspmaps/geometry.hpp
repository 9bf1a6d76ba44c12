#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "graspmaps/common.hpp"

namespace graspmaps {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

// Oriented planar grasp. The width axis (gripper opening) runs along
// direction theta; height is the jaw size, perpendicular to it.
// Degenerate extents (zero width or height) are representable so that
// geometric edge cases stay well defined; annotation ingestion requires
// strictly positive extents.
struct GraspRectangle {
    double cx = 0.0;     // centre x, pixels (continuous)
    double cy = 0.0;     // centre y, pixels
    double theta = 0.0;  // radians in [-pi/2, pi/2)
    double width = 0.0;  // gripper opening, extent along the grasp axis
    double height = 0.0; // jaw size, extent perpendicular to the grasp axis

    GraspRectangle() = default;
    GraspRectangle(double cx_, double cy_, double theta_rad, double width_, double height_);

    Vec2 center() const { return {cx, cy}; }
    // Unit vector along the grasp (opening) axis.
    Vec2 axis() const { return {std::cos(theta), std::sin(theta)}; }
    double area() const { return width * height; }
};

// Row-major boolean occupancy grid.
struct PixelMask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> data;  // nonzero = set, length width*height

    PixelMask() = default;
    PixelMask(int width_, int height_);

    bool at(int row, int col) const { return data[static_cast<size_t>(row) * width + col] != 0; }
    void set(int row, int col, bool v) {
        data[static_cast<size_t>(row) * width + col] = v ? 1 : 0;
    }
    size_t count() const;
    bool operator==(const PixelMask& o) const = default;
};

// Single-channel image plane of doubles, row-major.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<double> v;

    Raster() = default;
    Raster(int width_, int height_, double fill = 0.0);

    double at(int row, int col) const { return v[static_cast<size_t>(row) * width + col]; }
    double& at(int row, int col) { return v[static_cast<size_t>(row) * width + col]; }
    bool operator==(const Raster& o) const = default;
};

// Corners counter-clockwise, starting at local (-w/2, -h/2).
std::array<Vec2, 4> rect_corners(const GraspRectangle& r);

// Same rectangle with the opening width shrunk to a third.
GraspRectangle center_third(const GraspRectangle& r);

// Exact intersection-over-union via convex polygon clipping.
// Zero-area inputs give 0.
double rect_iou(const GraspRectangle& a, const GraspRectangle& b);

// Minimal angular distance under pi-periodicity, in degrees within [0, 90].
double angle_offset_deg(double a_rad, double b_rad);

// Membership test in the rectangle's local frame. Half-open on the positive
// side of both axes so that adjacent rectangles tile without overlap:
// u in [-w/2, w/2), v in [-h/2, h/2).
bool point_in_rect(const GraspRectangle& r, double x, double y);

// Pixel (row, col) is set iff its centre (col + 0.5, row + 0.5) lies inside
// the rectangle. Pixels outside the image are dropped.
PixelMask rasterize_rect(const GraspRectangle& r, int image_h, int image_w);
PixelMask rasterize_center_third(const GraspRectangle& r, int image_h, int image_w);

// Shoelace area; positive for counter-clockwise order.
double polygon_area(const std::vector<Vec2>& poly);

// Sutherland-Hodgman clip of a polygon against a convex clipper (CCW).
std::vector<Vec2> clip_polygon_convex(const std::vector<Vec2>& subject,
                                      const std::array<Vec2, 4>& clipper);

}  // namespace graspmaps
