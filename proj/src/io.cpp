#include "graspmaps/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <deque>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <system_error>

#include <png.h>

#include "json.hpp"

#include "graspmaps/common.hpp"

namespace fs = std::filesystem;

namespace graspmaps {

namespace {

// Shortest representation that parses back to the same double.
void append_double(std::string& out, double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

double parse_field(std::string_view field, int line_no, const char* name) {
    const std::string_view t = trim(field);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
        throw ParseError(line_no, std::string("cannot parse ") + name + " '" +
                                      std::string(t) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError(line_no, std::string(name) + " must be finite");
    }
    return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

double theta_from_degrees(double degrees) {
    if (!std::isfinite(degrees)) {
        throw ValidationError("grasp angle must be finite");
    }
    double folded = std::remainder(degrees, 180.0);  // [-90, 90], exact
    if (folded >= 90.0) {
        folded -= 180.0;
    }
    return normalize_angle(deg2rad(folded));
}

double annotation_theta_degrees(double theta_rad) {
    const double d0 = rad2deg(theta_rad);
    if (theta_from_degrees(d0) == theta_rad) {
        return d0;
    }
    double up = d0;
    double down = d0;
    for (int k = 0; k < 4; ++k) {
        up = std::nextafter(up, std::numeric_limits<double>::infinity());
        if (theta_from_degrees(up) == theta_rad) {
            return up;
        }
        down = std::nextafter(down, -std::numeric_limits<double>::infinity());
        if (theta_from_degrees(down) == theta_rad) {
            return down;
        }
    }
    // No degree value converts to exactly theta_rad; fall back to the nearest.
    return d0;
}

std::vector<GraspRectangle> parse_annotation_lines(const std::string& text) {
    std::vector<GraspRectangle> grasps;
    std::set<std::array<uint64_t, 5>> seen;

    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        const size_t nl = text.find('\n', pos);
        const size_t end = (nl == std::string::npos) ? text.size() : nl;
        const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        ++line_no;
        pos = end + 1;
        if (nl == std::string::npos && line.empty()) {
            break;
        }
        if (line.empty()) {
            continue;
        }

        std::array<std::string_view, 5> fields;
        size_t fpos = 0;
        int nfields = 0;
        while (true) {
            const size_t sep = line.find(';', fpos);
            const std::string_view field =
                line.substr(fpos, sep == std::string_view::npos ? std::string_view::npos
                                                                : sep - fpos);
            if (nfields == 5) {
                throw ParseError(line_no, "expected 5 ';'-separated fields");
            }
            fields[nfields++] = field;
            if (sep == std::string_view::npos) {
                break;
            }
            fpos = sep + 1;
        }
        if (nfields != 5) {
            throw ParseError(line_no, "expected 5 ';'-separated fields, got " +
                                          std::to_string(nfields));
        }

        const double x = parse_field(fields[0], line_no, "x");
        const double y = parse_field(fields[1], line_no, "y");
        const double theta_deg = parse_field(fields[2], line_no, "theta");
        const double opening = parse_field(fields[3], line_no, "opening");
        const double jaw = parse_field(fields[4], line_no, "jaw size");
        if (opening <= 0.0) {
            throw ParseError(line_no, "opening must be positive");
        }
        if (jaw <= 0.0) {
            throw ParseError(line_no, "jaw size must be positive");
        }

        GraspRectangle g(x, y, theta_from_degrees(theta_deg), opening, jaw);
        const std::array<uint64_t, 5> key{
            std::bit_cast<uint64_t>(g.cx), std::bit_cast<uint64_t>(g.cy),
            std::bit_cast<uint64_t>(g.theta), std::bit_cast<uint64_t>(g.width),
            std::bit_cast<uint64_t>(g.height)};
        if (seen.insert(key).second) {
            grasps.push_back(g);
        }
    }
    return grasps;
}

GraspScene parse_annotations(const std::string& text, std::string scene_id,
                             int image_w, int image_h) {
    GraspScene scene;
    scene.scene_id = std::move(scene_id);
    scene.image_w = image_w;
    scene.image_h = image_h;
    scene.grasps = parse_annotation_lines(text);
    if (scene.grasps.empty()) {
        throw ValidationError("no grasp annotations found");
    }
    scene.validate();
    return scene;
}

std::string serialize_annotations(const std::vector<GraspRectangle>& grasps) {
    std::string out;
    for (const GraspRectangle& g : grasps) {
        append_double(out, g.cx);
        out.push_back(';');
        append_double(out, g.cy);
        out.push_back(';');
        append_double(out, annotation_theta_degrees(g.theta));
        out.push_back(';');
        append_double(out, g.width);
        out.push_back(';');
        append_double(out, g.height);
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// GMAP1 tensor files
// ---------------------------------------------------------------------------

namespace {

constexpr char kTensorMagic[5] = {'G', 'M', 'A', 'P', '1'};
constexpr uint8_t kDtypeFloat32 = 0x01;
constexpr size_t kTensorHeaderSize = 22;

void append_u32le(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

uint32_t read_u32le(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
           (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

void append_channel(std::vector<uint8_t>& out, const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw ValidationError("tensor contains a non-finite value");
        }
        const float f = static_cast<float>(v);
        if (!std::isfinite(f)) {
            throw ValidationError("tensor value out of 32-bit float range");
        }
        append_u32le(out, std::bit_cast<uint32_t>(f));
    }
}

}  // namespace

std::vector<uint8_t> write_tensor(const GraspMapStack& stack) {
    if (stack.bins <= 0 || stack.h <= 0 || stack.w <= 0) {
        throw ValidationError("tensor dimensions must be positive");
    }
    const size_t n = stack.channel_size();
    if (stack.q.size() != n || stack.ang_cos.size() != n ||
        stack.ang_sin.size() != n || stack.width.size() != n) {
        throw ValidationError("tensor channel sizes do not match dimensions");
    }
    std::vector<uint8_t> out;
    out.reserve(kTensorHeaderSize + 16 * n);
    out.insert(out.end(), kTensorMagic, kTensorMagic + 5);
    out.push_back(kDtypeFloat32);
    append_u32le(out, 4);
    append_u32le(out, static_cast<uint32_t>(stack.bins));
    append_u32le(out, static_cast<uint32_t>(stack.h));
    append_u32le(out, static_cast<uint32_t>(stack.w));
    append_channel(out, stack.q);
    append_channel(out, stack.ang_cos);
    append_channel(out, stack.ang_sin);
    append_channel(out, stack.width);
    return out;
}

GraspMapStack read_tensor(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < kTensorHeaderSize) {
        throw ValidationError("tensor file truncated: incomplete header");
    }
    if (std::memcmp(bytes.data(), kTensorMagic, 5) != 0) {
        throw ValidationError("tensor file has wrong magic (expected GMAP1)");
    }
    if (bytes[5] != kDtypeFloat32) {
        throw ValidationError("tensor file has unsupported dtype tag");
    }
    const uint32_t channels = read_u32le(bytes.data() + 6);
    const uint32_t bins = read_u32le(bytes.data() + 10);
    const uint32_t h = read_u32le(bytes.data() + 14);
    const uint32_t w = read_u32le(bytes.data() + 18);
    if (channels != 4) {
        throw ValidationError("tensor file must have 4 channels, has " +
                              std::to_string(channels));
    }
    if (bins == 0 || h == 0 || w == 0) {
        throw ValidationError("tensor file has a zero dimension");
    }
    constexpr uint64_t kMaxElements = uint64_t{1} << 31;
    const uint64_t n = uint64_t{bins} * h * w;
    if (n > kMaxElements) {
        throw ValidationError("tensor file dimensions unreasonably large");
    }
    const uint64_t expected = kTensorHeaderSize + 16 * n;
    if (bytes.size() != expected) {
        throw ValidationError("tensor payload length mismatch: expected " +
                              std::to_string(expected) + " bytes, got " +
                              std::to_string(bytes.size()));
    }

    GraspMapStack stack(static_cast<int>(bins), static_cast<int>(h),
                        static_cast<int>(w));
    const auto read_channel = [&](std::vector<double>& dst, size_t channel) {
        const uint8_t* base = bytes.data() + kTensorHeaderSize + channel * 4 * n;
        for (uint64_t i = 0; i < n; ++i) {
            const float f = std::bit_cast<float>(read_u32le(base + 4 * i));
            if (!std::isfinite(f)) {
                throw ValidationError("tensor payload contains a non-finite value");
            }
            dst[i] = static_cast<double>(f);
        }
    };
    read_channel(stack.q, 0);
    read_channel(stack.ang_cos, 1);
    read_channel(stack.ang_sin, 2);
    read_channel(stack.width, 3);
    return stack;
}

void save_tensor(const fs::path& path, const GraspMapStack& stack) {
    write_file_bytes(path, write_tensor(stack));
}

GraspMapStack load_tensor(const fs::path& path) {
    try {
        return read_tensor(read_file_bytes(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Plain file helpers
// ---------------------------------------------------------------------------

std::vector<uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    std::vector<uint8_t> bytes;
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    if (size < 0) {
        throw IoError("cannot determine size of: " + path.string());
    }
    in.seekg(0, std::ios::beg);
    bytes.resize(static_cast<size_t>(size));
    if (size > 0) {
        in.read(reinterpret_cast<char*>(bytes.data()), size);
    }
    if (!in) {
        throw IoError("read failed: " + path.string());
    }
    return bytes;
}

void write_file_bytes(const fs::path& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    if (!bytes.empty()) {
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    out.flush();
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

std::string read_file_text(const fs::path& path) {
    const std::vector<uint8_t> bytes = read_file_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

void write_file_text(const fs::path& path, const std::string& text) {
    write_file_bytes(path, std::vector<uint8_t>(text.begin(), text.end()));
}

// ---------------------------------------------------------------------------
// PNG codec (libpng, pinned settings for byte-stable output)
// ---------------------------------------------------------------------------

namespace {

struct PngMemReader {
    const uint8_t* data;
    size_t size;
    size_t pos;
};

extern "C" void png_mem_read(png_structp png, png_bytep out, png_size_t count) {
    auto* r = static_cast<PngMemReader*>(png_get_io_ptr(png));
    if (r->pos + count > r->size) {
        png_error(png, "unexpected end of PNG stream");
    }
    std::memcpy(out, r->data + r->pos, count);
    r->pos += count;
}

extern "C" void png_mem_write(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

extern "C" void png_mem_flush(png_structp) {}

std::vector<uint8_t> encode_png(const uint8_t* pixels, int width, int height,
                                int color_type, int bytes_per_pixel) {
    if (width <= 0 || height <= 0) {
        throw ValidationError("PNG dimensions must be positive");
    }
    std::vector<uint8_t> out;
    std::vector<png_bytep> rows(static_cast<size_t>(height));
    for (int i = 0; i < height; ++i) {
        rows[static_cast<size_t>(i)] = const_cast<png_bytep>(
            pixels + static_cast<size_t>(i) * width * bytes_per_pixel);
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    if (!png) {
        throw IoError("PNG encoder allocation failed");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("PNG encoder allocation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed");
    }
    png_set_write_fn(png, &out, png_mem_write, png_mem_flush);
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

}  // namespace

std::vector<uint8_t> encode_gray8_png(const GrayImage8& img) {
    if (img.pixels.size() != static_cast<size_t>(img.width) * img.height) {
        throw ValidationError("gray image pixel count does not match dimensions");
    }
    return encode_png(img.pixels.data(), img.width, img.height,
                      PNG_COLOR_TYPE_GRAY, 1);
}

std::vector<uint8_t> encode_rgb8_png(const RgbImage8& img) {
    if (img.pixels.size() != 3 * static_cast<size_t>(img.width) * img.height) {
        throw ValidationError("rgb image pixel count does not match dimensions");
    }
    return encode_png(img.pixels.data(), img.width, img.height,
                      PNG_COLOR_TYPE_RGB, 3);
}

GrayImage8 decode_gray8_png(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw ValidationError("not a PNG file");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             nullptr, nullptr);
    if (!png) {
        throw IoError("PNG decoder allocation failed");
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("PNG decoder allocation failed");
    }

    GrayImage8 img;
    std::vector<png_bytep> rows;
    PngMemReader reader{bytes.data(), bytes.size(), 0};
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("corrupt PNG data");
    }
    png_set_read_fn(png, &reader, png_mem_read);
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("mask PNG must be 8-bit grayscale");
    }
    if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ValidationError("PNG dimensions out of range");
    }

    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.pixels.assign(static_cast<size_t>(width) * height, 0);
    rows.resize(height);
    for (png_uint_32 i = 0; i < height; ++i) {
        rows[i] = img.pixels.data() + static_cast<size_t>(i) * width;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

PixelMask read_mask_png(const fs::path& path) {
    GrayImage8 img;
    try {
        img = decode_gray8_png(read_file_bytes(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    PixelMask mask(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        mask.data[i] = img.pixels[i] != 0 ? 1 : 0;
    }
    return mask;
}

void write_mask_png(const fs::path& path, const PixelMask& mask) {
    GrayImage8 img;
    img.width = mask.width;
    img.height = mask.height;
    img.pixels.resize(mask.data.size());
    for (size_t i = 0; i < mask.data.size(); ++i) {
        img.pixels[i] = mask.data[i] != 0 ? 255 : 0;
    }
    write_file_bytes(path, encode_gray8_png(img));
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

std::vector<Raster> preprocess_rgb(const std::vector<Raster>& channels,
                                   double scale_max) {
    if (channels.empty()) {
        throw ValidationError("rgb preprocessing needs at least one channel");
    }
    if (!(scale_max > 0.0) || !std::isfinite(scale_max)) {
        throw ValidationError("rgb scale maximum must be positive");
    }
    std::vector<Raster> out;
    out.reserve(channels.size());
    for (const Raster& ch : channels) {
        if (ch.width != channels[0].width || ch.height != channels[0].height) {
            throw ValidationError("rgb channels must share dimensions");
        }
        if (ch.v.empty()) {
            throw ValidationError("rgb channel is empty");
        }
        Raster scaled(ch.width, ch.height);
        double sum = 0.0;
        for (size_t i = 0; i < ch.v.size(); ++i) {
            if (!std::isfinite(ch.v[i])) {
                throw ValidationError("rgb channel contains a non-finite value");
            }
            scaled.v[i] = ch.v[i] / scale_max;
            sum += scaled.v[i];
        }
        const double mean = sum / static_cast<double>(scaled.v.size());
        for (double& v : scaled.v) {
            v -= mean;
        }
        out.push_back(std::move(scaled));
    }
    return out;
}

std::vector<Raster> preprocess_rgb(const RgbImage8& image) {
    if (image.pixels.size() != 3 * static_cast<size_t>(image.width) * image.height) {
        throw ValidationError("rgb image pixel count does not match dimensions");
    }
    std::vector<Raster> channels(3, Raster(image.width, image.height));
    const size_t n = static_cast<size_t>(image.width) * image.height;
    for (size_t i = 0; i < n; ++i) {
        channels[0].v[i] = image.pixels[3 * i];
        channels[1].v[i] = image.pixels[3 * i + 1];
        channels[2].v[i] = image.pixels[3 * i + 2];
    }
    return preprocess_rgb(channels, 255.0);
}

Raster inpaint_depth(const Raster& depth) {
    if (depth.v.empty()) {
        throw ValidationError("depth raster is empty");
    }
    for (double v : depth.v) {
        if (!std::isfinite(v)) {
            throw ValidationError("depth raster contains a non-finite value");
        }
    }
    Raster out = depth;
    std::vector<uint8_t> known(out.v.size(), 0);
    std::deque<size_t> frontier;
    for (size_t i = 0; i < out.v.size(); ++i) {
        if (out.v[i] != 0.0) {
            known[i] = 1;
            frontier.push_back(i);
        }
    }
    if (frontier.empty()) {
        throw ValidationError("depth raster has no valid pixels to inpaint from");
    }
    if (frontier.size() == out.v.size()) {
        return out;
    }

    // Multi-source BFS: each invalid pixel takes the value of its nearest
    // valid pixel; equal distances resolve by fixed queue order, so the fill
    // is deterministic.
    const int w = out.width;
    const int h = out.height;
    const int di[4] = {-1, 1, 0, 0};
    const int dj[4] = {0, 0, -1, 1};
    while (!frontier.empty()) {
        const size_t cur = frontier.front();
        frontier.pop_front();
        const int ci = static_cast<int>(cur) / w;
        const int cj = static_cast<int>(cur) % w;
        for (int k = 0; k < 4; ++k) {
            const int ni = ci + di[k];
            const int nj = cj + dj[k];
            if (ni < 0 || ni >= h || nj < 0 || nj >= w) {
                continue;
            }
            const size_t nidx = static_cast<size_t>(ni) * w + nj;
            if (!known[nidx]) {
                known[nidx] = 1;
                out.v[nidx] = out.v[cur];
                frontier.push_back(nidx);
            }
        }
    }
    return out;
}

Raster preprocess_depth(const Raster& depth) {
    Raster out = inpaint_depth(depth);
    double lo = out.v[0];
    double hi = out.v[0];
    for (double v : out.v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi > lo) {
        for (double& v : out.v) {
            v = -1.0 + 2.0 * (v - lo) / (hi - lo);
        }
    } else {
        for (double& v : out.v) {
            v = 0.0;
        }
    }
    double sum = 0.0;
    for (double v : out.v) {
        sum += v;
    }
    const double mean = sum / static_cast<double>(out.v.size());
    for (double& v : out.v) {
        v = std::clamp(v - mean, -1.0, 1.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heatmaps
// ---------------------------------------------------------------------------

Colormap parse_colormap(const std::string& name) {
    if (name == "gray") return Colormap::kGray;
    if (name == "hot") return Colormap::kHot;
    if (name == "jet") return Colormap::kJet;
    throw ValidationError("unknown colormap '" + name + "' (expected gray|hot|jet)");
}

namespace {

uint8_t to_byte(double unit) {
    return static_cast<uint8_t>(std::lround(std::clamp(unit, 0.0, 1.0) * 255.0));
}

void colormap_rgb(Colormap map, double t, uint8_t* rgb) {
    switch (map) {
        case Colormap::kGray: {
            const uint8_t g = to_byte(t);
            rgb[0] = rgb[1] = rgb[2] = g;
            return;
        }
        case Colormap::kHot:
            rgb[0] = to_byte(3.0 * t);
            rgb[1] = to_byte(3.0 * t - 1.0);
            rgb[2] = to_byte(3.0 * t - 2.0);
            return;
        case Colormap::kJet:
            rgb[0] = to_byte(1.5 - std::abs(4.0 * t - 3.0));
            rgb[1] = to_byte(1.5 - std::abs(4.0 * t - 2.0));
            rgb[2] = to_byte(1.5 - std::abs(4.0 * t - 1.0));
            return;
    }
    throw ValidationError("unknown colormap");
}

}  // namespace

RgbImage8 render_heatmap(const Raster& values, Colormap map, double lo, double hi) {
    if (values.v.empty()) {
        throw ValidationError("heatmap raster is empty");
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw ValidationError("heatmap range must be finite");
    }
    RgbImage8 img;
    img.width = values.width;
    img.height = values.height;
    img.pixels.resize(3 * values.v.size());
    const double span = hi - lo;
    for (size_t i = 0; i < values.v.size(); ++i) {
        const double v = values.v[i];
        if (!std::isfinite(v)) {
            throw ValidationError("heatmap raster contains a non-finite value");
        }
        const double t = span > 0.0 ? std::clamp((v - lo) / span, 0.0, 1.0) : 0.0;
        colormap_rgb(map, t, img.pixels.data() + 3 * i);
    }
    return img;
}

std::vector<uint8_t> render_heatmap_png(const Raster& values, Colormap map,
                                        double lo, double hi) {
    return encode_rgb8_png(render_heatmap(values, map, lo, hi));
}

// ---------------------------------------------------------------------------
// Scene directories
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json parse_json_file(const fs::path& path) {
    const std::string text = read_file_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<GraspRectangle> grasps_from_json(const fs::path& path) {
    const json doc = parse_json_file(path);
    if (!doc.is_array()) {
        throw ValidationError(path.string() + ": expected a JSON array of grasps");
    }
    // Reuse the text parser so both formats share one validation path.
    std::string lines;
    try {
        for (const json& g : doc) {
            append_double(lines, g.at("x").get<double>());
            lines.push_back(';');
            append_double(lines, g.at("y").get<double>());
            lines.push_back(';');
            append_double(lines, g.at("theta_degrees").get<double>());
            lines.push_back(';');
            append_double(lines, g.at("opening").get<double>());
            lines.push_back(';');
            append_double(lines, g.at("jaw_size").get<double>());
            lines.push_back('\n');
        }
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    try {
        return parse_annotation_lines(lines);
    } catch (const ParseError& e) {
        throw ValidationError(path.string() + ": grasp entry " +
                              std::to_string(e.line()) + ": " + e.what());
    }
}

}  // namespace

GraspScene load_scene(const fs::path& scene_dir) {
    const fs::path meta_path = scene_dir / "scene.json";
    if (!fs::exists(meta_path)) {
        throw ValidationError("not a scene directory (no scene.json): " +
                              scene_dir.string());
    }
    const json meta = parse_json_file(meta_path);

    GraspScene scene;
    try {
        scene.scene_id = meta.at("scene_id").get<std::string>();
        scene.image_w = meta.at("width").get<int>();
        scene.image_h = meta.at("height").get<int>();
    } catch (const json::exception& e) {
        throw ValidationError(meta_path.string() + ": " + e.what());
    }

    const fs::path txt_path = scene_dir / "grasps.txt";
    const fs::path json_path = scene_dir / "grasps.json";
    if (fs::exists(txt_path)) {
        try {
            scene.grasps = parse_annotation_lines(read_file_text(txt_path));
        } catch (const ParseError& e) {
            throw ValidationError(txt_path.string() + ": " + e.what());
        }
    } else if (fs::exists(json_path)) {
        scene.grasps = grasps_from_json(json_path);
    } else {
        throw ValidationError("scene '" + scene.scene_id +
                              "' has no grasps.txt or grasps.json");
    }
    if (scene.grasps.empty()) {
        throw ValidationError("scene '" + scene.scene_id + "' has no grasp annotations");
    }

    const fs::path mask_path = scene_dir / "mask.png";
    if (fs::exists(mask_path)) {
        scene.mask = read_mask_png(mask_path);
    }

    try {
        scene.validate();
    } catch (const ValidationError& e) {
        throw ValidationError("scene '" + scene.scene_id + "': " + e.what());
    }
    return scene;
}

void save_scene(const fs::path& scene_dir, const GraspScene& scene) {
    scene.validate();
    if (scene.grasps.empty()) {
        throw ValidationError("refusing to save a scene with no grasps");
    }
    std::error_code ec;
    fs::create_directories(scene_dir, ec);
    if (ec) {
        throw IoError("cannot create directory: " + scene_dir.string());
    }
    json meta;
    meta["scene_id"] = scene.scene_id;
    meta["width"] = scene.image_w;
    meta["height"] = scene.image_h;
    write_file_text(scene_dir / "scene.json", meta.dump(2) + "\n");
    write_file_text(scene_dir / "grasps.txt", serialize_annotations(scene.grasps));
    if (scene.mask.has_value()) {
        write_mask_png(scene_dir / "mask.png", *scene.mask);
    }
}

std::vector<GraspScene> load_corpus(const fs::path& corpus_dir) {
    if (!fs::is_directory(corpus_dir)) {
        throw IoError("corpus directory does not exist: " + corpus_dir.string());
    }
    std::vector<fs::path> scene_dirs;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "scene.json")) {
            scene_dirs.push_back(entry.path());
        }
    }
    std::sort(scene_dirs.begin(), scene_dirs.end());

    std::vector<GraspScene> scenes;
    scenes.reserve(scene_dirs.size());
    std::set<std::string> ids;
    for (const fs::path& dir : scene_dirs) {
        GraspScene scene = load_scene(dir);
        if (!ids.insert(scene.scene_id).second) {
            throw ValidationError("duplicate scene id '" + scene.scene_id + "' in " +
                                  corpus_dir.string());
        }
        scenes.push_back(std::move(scene));
    }
    std::sort(scenes.begin(), scenes.end(),
              [](const GraspScene& a, const GraspScene& b) {
                  return a.scene_id < b.scene_id;
              });
    return scenes;
}

}  // namespace graspmaps
