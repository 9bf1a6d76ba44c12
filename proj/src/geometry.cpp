#include "graspmaps/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace graspmaps {

GraspRectangle::GraspRectangle(double cx_, double cy_, double theta_rad, double width_,
                               double height_)
    : cx(cx_), cy(cy_), theta(normalize_angle(theta_rad)), width(width_), height(height_) {
    if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(width) ||
        !std::isfinite(height)) {
        throw ValidationError("grasp rectangle fields must be finite");
    }
    if (width < 0.0 || height < 0.0) {
        throw ValidationError("grasp rectangle extents must be non-negative");
    }
}

PixelMask::PixelMask(int width_, int height_) : width(width_), height(height_) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("pixel mask dimensions must be positive");
    }
    data.assign(static_cast<size_t>(width) * height, 0);
}

Raster::Raster(int width_, int height_, double fill) : width(width_), height(height_) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("raster dimensions must be positive");
    }
    v.assign(static_cast<size_t>(width) * height, fill);
}

size_t PixelMask::count() const {
    size_t n = 0;
    for (uint8_t v : data) {
        n += (v != 0);
    }
    return n;
}

std::array<Vec2, 4> rect_corners(const GraspRectangle& r) {
    const double c = std::cos(r.theta);
    const double s = std::sin(r.theta);
    const double hw = r.width / 2.0;
    const double hh = r.height / 2.0;
    // Local corners (u, v) in CCW order, rotated into image coordinates.
    const double us[4] = {-hw, hw, hw, -hw};
    const double vs[4] = {-hh, -hh, hh, hh};
    std::array<Vec2, 4> out;
    for (int k = 0; k < 4; ++k) {
        out[k] = {r.cx + us[k] * c - vs[k] * s, r.cy + us[k] * s + vs[k] * c};
    }
    return out;
}

GraspRectangle center_third(const GraspRectangle& r) {
    GraspRectangle t = r;
    t.width = r.width / 3.0;
    return t;
}

double polygon_area(const std::vector<Vec2>& poly) {
    if (poly.size() < 3) {
        return 0.0;
    }
    double acc = 0.0;
    for (size_t i = 0, n = poly.size(); i < n; ++i) {
        acc += cross(poly[i], poly[(i + 1) % n]);
    }
    return acc / 2.0;
}

std::vector<Vec2> clip_polygon_convex(const std::vector<Vec2>& subject,
                                      const std::array<Vec2, 4>& clipper) {
    std::vector<Vec2> poly = subject;
    std::vector<Vec2> next;
    for (int e = 0; e < 4 && !poly.empty(); ++e) {
        const Vec2 a = clipper[e];
        const Vec2 b = clipper[(e + 1) % 4];
        const Vec2 edge = b - a;
        next.clear();
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec2 p = poly[i];
            const Vec2 q = poly[(i + 1) % n];
            const double side_p = cross(edge, p - a);
            const double side_q = cross(edge, q - a);
            if (side_p >= 0.0) {
                next.push_back(p);
            }
            if ((side_p > 0.0 && side_q < 0.0) || (side_p < 0.0 && side_q > 0.0)) {
                const double t = side_p / (side_p - side_q);
                next.push_back(p + t * (q - p));
            }
        }
        poly = next;
    }
    return poly;
}

double rect_iou(const GraspRectangle& a, const GraspRectangle& b) {
    const double area_a = a.area();
    const double area_b = b.area();
    if (area_a <= 0.0 || area_b <= 0.0) {
        return 0.0;
    }
    const auto ca = rect_corners(a);
    const auto cb = rect_corners(b);
    const std::vector<Vec2> subject(ca.begin(), ca.end());
    const double inter = polygon_area(clip_polygon_convex(subject, cb));
    const double uni = area_a + area_b - inter;
    if (uni <= 0.0) {
        return 0.0;
    }
    return std::clamp(inter / uni, 0.0, 1.0);
}

double angle_offset_deg(double a_rad, double b_rad) {
    if (!std::isfinite(a_rad) || !std::isfinite(b_rad)) {
        throw ValidationError("angles must be finite");
    }
    double d = std::fabs(std::remainder(a_rad - b_rad, kPi));  // [0, pi/2]
    return rad2deg(d);
}

bool point_in_rect(const GraspRectangle& r, double x, double y) {
    const double c = std::cos(r.theta);
    const double s = std::sin(r.theta);
    const double dx = x - r.cx;
    const double dy = y - r.cy;
    const double u = dx * c + dy * s;
    const double v = -dx * s + dy * c;
    const double hw = r.width / 2.0;
    const double hh = r.height / 2.0;
    return u >= -hw && u < hw && v >= -hh && v < hh;
}

PixelMask rasterize_rect(const GraspRectangle& r, int image_h, int image_w) {
    PixelMask mask(image_w, image_h);
    if (r.width <= 0.0 || r.height <= 0.0) {
        return mask;
    }
    // Touch only rows/cols overlapping the rectangle's bounding box.
    const auto corners = rect_corners(r);
    double min_x = corners[0].x, max_x = corners[0].x;
    double min_y = corners[0].y, max_y = corners[0].y;
    for (const Vec2& p : corners) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const int row_lo = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
    const int row_hi = std::min(image_h - 1, static_cast<int>(std::ceil(max_y)));
    const int col_lo = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
    const int col_hi = std::min(image_w - 1, static_cast<int>(std::ceil(max_x)));
    for (int i = row_lo; i <= row_hi; ++i) {
        for (int j = col_lo; j <= col_hi; ++j) {
            if (point_in_rect(r, j + 0.5, i + 0.5)) {
                mask.set(i, j, true);
            }
        }
    }
    return mask;
}

PixelMask rasterize_center_third(const GraspRectangle& r, int image_h, int image_w) {
    return rasterize_rect(center_third(r), image_h, image_w);
}

}  // namespace graspmaps
