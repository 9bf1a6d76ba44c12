#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "graspmaps/geometry.hpp"
#include "graspmaps/ground_truth.hpp"

namespace graspmaps {

// ---------------------------------------------------------------------------
// Annotation text format
//
// One grasp per non-empty line: "x;y;theta_degrees;opening;jaw_size".
// Angles are stored in degrees on disk and radians in memory. UTF-8, LF or
// CRLF. Identical grasps (after parsing) are deduplicated, keeping first
// occurrence order.
// ---------------------------------------------------------------------------

// Converts an on-disk degree angle to the in-memory radian representation:
// fold into [-90, 90) in the degree domain (exact for the common integer
// annotations), then convert.
double theta_from_degrees(double degrees);

// Finds a degree value whose parse reproduces `theta_rad` bit-for-bit, so
// parse -> serialize -> parse is a fixed point for any parsed angle. Radians
// with no exact degree preimage fall back to the nearest degree value.
double annotation_theta_degrees(double theta_rad);

std::vector<GraspRectangle> parse_annotation_lines(const std::string& text);

// Parses annotation text into a validated scene (grasp centers must lie
// inside the image). Throws ParseError with a 1-based line number on
// malformed lines and ValidationError when no grasp survives parsing.
GraspScene parse_annotations(const std::string& text, std::string scene_id,
                             int image_w, int image_h);

std::string serialize_annotations(const std::vector<GraspRectangle>& grasps);

// ---------------------------------------------------------------------------
// Grasp-map tensor file (GMAP1)
//
// Little-endian regardless of host:
//   bytes 0..4   magic "GMAP1"
//   byte  5      dtype tag 0x01 = 32-bit float
//   bytes 6..21  uint32 dims: channels (always 4), bins, height, width
//   payload      4 * bins*h*w float32 values, channel-major in the order
//                Q, cos, sin, width; each channel row-major over (bin, y, x)
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> write_tensor(const GraspMapStack& stack);

// Rejects wrong magic or dtype, dimension/length mismatches, and non-finite
// payload values.
GraspMapStack read_tensor(const std::vector<std::uint8_t>& bytes);

void save_tensor(const std::filesystem::path& path, const GraspMapStack& stack);
GraspMapStack load_tensor(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// 8-bit images and PNG codec
// ---------------------------------------------------------------------------

struct GrayImage8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, width*height

    std::uint8_t at(int i, int j) const {
        return pixels[static_cast<size_t>(i) * width + j];
    }
};

struct RgbImage8 {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major interleaved RGB, 3*width*height
};

// PNG encoding is pinned (fixed compression level, no filtering) so equal
// pixels always produce equal bytes.
std::vector<std::uint8_t> encode_gray8_png(const GrayImage8& img);
std::vector<std::uint8_t> encode_rgb8_png(const RgbImage8& img);

// Strict decoder for the mask format: 8-bit single-channel grayscale only.
GrayImage8 decode_gray8_png(const std::vector<std::uint8_t>& bytes);

// Occupancy masks on disk: 8-bit grayscale PNG, nonzero = occupied.
PixelMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const PixelMask& mask);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& bytes);
std::string read_file_text(const std::filesystem::path& path);
void write_file_text(const std::filesystem::path& path, const std::string& text);

// ---------------------------------------------------------------------------
// Input preprocessing
// ---------------------------------------------------------------------------

// Scales color channels to [0,1] (dividing by `scale_max`) and subtracts the
// per-channel image mean. Channels must share dimensions.
std::vector<Raster> preprocess_rgb(const std::vector<Raster>& channels,
                                   double scale_max = 255.0);
std::vector<Raster> preprocess_rgb(const RgbImage8& image);

// Fills invalid depth readings (exactly 0, the invalid marker) with the value
// of the nearest valid pixel in 4-neighbor grid distance. Idempotent: the
// output contains no invalid pixels. Throws when every pixel is invalid.
Raster inpaint_depth(const Raster& depth);

// Inpaints, min-max scales to [-1,1] (constant images map to 0), subtracts
// the image mean, and clamps back into [-1,1].
Raster preprocess_depth(const Raster& depth);

// ---------------------------------------------------------------------------
// Heatmap rendering
// ---------------------------------------------------------------------------

enum class Colormap { kGray, kHot, kJet };

Colormap parse_colormap(const std::string& name);

// Maps values through (v - lo) / (hi - lo), clamped to [0,1], then through the
// colormap. lo == hi renders the lowest color everywhere.
RgbImage8 render_heatmap(const Raster& values, Colormap map, double lo = 0.0,
                         double hi = 1.0);
std::vector<std::uint8_t> render_heatmap_png(const Raster& values, Colormap map,
                                             double lo = 0.0, double hi = 1.0);

// ---------------------------------------------------------------------------
// Scene directories
//
// A corpus is a directory of scene subdirectories. Each scene dir holds
//   scene.json   {"scene_id": str, "width": int, "height": int}
//   grasps.txt   annotation lines (or grasps.json, a JSON array of objects
//                with keys x, y, theta_degrees, opening, jaw_size)
//   mask.png     optional occupancy mask
// ---------------------------------------------------------------------------

GraspScene load_scene(const std::filesystem::path& scene_dir);
void save_scene(const std::filesystem::path& scene_dir, const GraspScene& scene);

// Loads every immediate subdirectory containing a scene.json, sorted by
// scene_id. Duplicate scene ids are an error.
std::vector<GraspScene> load_corpus(const std::filesystem::path& corpus_dir);

}  // namespace graspmaps
