#include <doctest.h>

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "graspmaps/ground_truth.hpp"
#include "graspmaps/reference.hpp"
#include "graspmaps/synth.hpp"

using namespace graspmaps;

namespace {

GraspScene small_scene(std::vector<GraspRectangle> grasps, int w = 32, int h = 32) {
    GraspScene s;
    s.scene_id = "t";
    s.image_w = w;
    s.image_h = h;
    s.grasps = std::move(grasps);
    return s;
}

MapGenConfig config(MapMode mode, double sigma = 2.0, int bins = 1) {
    MapGenConfig cfg;
    cfg.mode = mode;
    cfg.sigma = sigma;
    cfg.bins = bins;
    return cfg;
}

}  // namespace

TEST_SUITE("ground_truth") {

TEST_CASE("angle encoding doubles the angle") {
    const auto [c0, s0] = encode_angle(0.0);
    CHECK_EQ(c0, 1.0);
    CHECK_EQ(s0, 0.0);
    const auto [c, s] = encode_angle(-kPi / 3.0);
    CHECK_EQ(c, doctest::Approx(-0.5).epsilon(1e-12));
    CHECK_EQ(s, doctest::Approx(-0.8660254037844386).epsilon(1e-12));
}

TEST_CASE("bin assignment is left-closed") {
    CHECK_EQ(assign_bin(0.0, 1), 0);
    CHECK_EQ(assign_bin(-kHalfPi, 3), 0);
    CHECK_EQ(assign_bin(deg2rad(-30.0), 3), 1);  // exactly on the lower bound
    CHECK_EQ(assign_bin(deg2rad(29.999), 3), 1);
    CHECK_EQ(assign_bin(deg2rad(30.0), 3), 2);
    CHECK_EQ(assign_bin(deg2rad(89.9), 3), 2);
    const double below = std::nextafter(bin_lower_bound_rad(1, 3), -1.0);
    CHECK_EQ(assign_bin(below, 3), 0);
    CHECK_EQ(bin_lower_bound_rad(0, 4), doctest::Approx(deg2rad(-90.0)).epsilon(1e-15));
    CHECK_EQ(bin_lower_bound_rad(2, 4), doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("pixel quality per mode") {
    const MapGenConfig strong = config(MapMode::kStrong, 2.0);
    CHECK_EQ(pixel_quality(0.0, true, strong), 1.0);
    CHECK_EQ(pixel_quality(2.0, true, strong),
             doctest::Approx(0.6065306597126334).epsilon(1e-9));
    CHECK_EQ(pixel_quality(4.0, true, strong),
             doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK_EQ(pixel_quality(0.0, false, strong), 0.0);

    const MapGenConfig binary = config(MapMode::kBinary);
    CHECK_EQ(pixel_quality(0.0, true, binary), 1.0);
    CHECK_EQ(pixel_quality(1e9, true, binary), 1.0);
    CHECK_EQ(pixel_quality(5.0, false, binary), 0.0);

    const MapGenConfig soft = config(MapMode::kSoft, 2.0);
    CHECK_EQ(pixel_quality(0.0, true, soft), 1.0);
    CHECK_EQ(pixel_quality(50.0, true, soft), 0.9);  // floor holds far away

    MapGenConfig cap = soft;
    cap.soft_floor_is_cap = true;
    CHECK_EQ(pixel_quality(0.0, true, cap), 0.9);  // literal min() variant
    CHECK(pixel_quality(50.0, true, cap) < 1e-6);
}

TEST_CASE("mode and config parsing") {
    CHECK_EQ(parse_map_mode("binary"), MapMode::kBinary);
    CHECK_EQ(parse_map_mode("soft"), MapMode::kSoft);
    CHECK_EQ(parse_map_mode("strong"), MapMode::kStrong);
    CHECK_THROWS_AS(parse_map_mode("gaussian"), ValidationError);
    CHECK_EQ(map_mode_name(MapMode::kSoft), std::string("soft"));

    MapGenConfig bad = config(MapMode::kStrong);
    bad.sigma = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config(MapMode::kStrong);
    bad.bins = 0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = config(MapMode::kStrong);
    bad.w_max = -1.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("scene validation") {
    CHECK_NOTHROW(small_scene({{16.0, 16.0, 0.0, 8.0, 4.0}}).validate());
    GraspScene s = small_scene({{16.0, 16.0, 0.0, 8.0, 4.0}});
    s.image_w = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    // Center outside the image.
    CHECK_THROWS_AS(small_scene({{40.0, 16.0, 0.0, 8.0, 4.0}}).validate(),
                    ValidationError);
    // Zero extents are representable geometrically but invalid as annotations.
    GraspScene z = small_scene({{16.0, 16.0, 0.0, 8.0, 4.0}});
    z.grasps[0].width = 0.0;
    CHECK_THROWS_AS(z.validate(), ValidationError);
}

TEST_CASE("single axis-aligned grasp produces the expected binary plane") {
    // Opening 12 along x: the center third is 4 wide, so it spans x in
    // [14, 18); the jaw size 4 gives y in [14, 18).
    const GraspScene s = small_scene({{16.0, 16.0, 0.0, 12.0, 4.0}});
    const GraspMapStack m = generate_maps(s, config(MapMode::kBinary));
    REQUIRE_EQ(m.bins, 1);
    size_t on = 0;
    for (int i = 0; i < m.h; ++i) {
        for (int j = 0; j < m.w; ++j) {
            const double q = m.q[m.idx(0, i, j)];
            const bool expect = (j + 0.5 >= 14.0 && j + 0.5 < 18.0) &&
                                (i + 0.5 >= 14.0 && i + 0.5 < 18.0);
            CHECK_EQ(q, expect ? 1.0 : 0.0);
            if (expect) {
                ++on;
                CHECK_EQ(m.ang_cos[m.idx(0, i, j)], 1.0);
                CHECK_EQ(m.ang_sin[m.idx(0, i, j)], 0.0);
                CHECK_EQ(m.width[m.idx(0, i, j)], 12.0 / 150.0);
            } else {
                CHECK_EQ(m.ang_cos[m.idx(0, i, j)], 0.0);
                CHECK_EQ(m.ang_sin[m.idx(0, i, j)], 0.0);
                CHECK_EQ(m.width[m.idx(0, i, j)], 0.0);
            }
        }
    }
    CHECK_EQ(on, 16);  // 4x4 pixel centers
}

TEST_CASE("overlap ties go to the smaller opening, then annotation order") {
    // Two concentric grasps; in binary mode both contribute 1.0 where they
    // overlap, so the narrower opening must win there.
    const GraspScene s =
        small_scene({{16.0, 16.0, 0.0, 12.0, 8.0}, {16.0, 16.0, 0.0, 6.0, 8.0}});
    const GraspMapStack m = generate_maps(s, config(MapMode::kBinary));
    // Pixel (16, 16): center (16.5, 16.5), covered by both center thirds.
    CHECK_EQ(m.width[m.idx(0, 16, 16)], 6.0 / 150.0);
    // Pixel (16, 17): center (17.5, 16.5), u = 1.5 — outside the narrow
    // grasp's center third (half-width 1) but inside the wide one's (2).
    CHECK_EQ(m.width[m.idx(0, 16, 17)], 12.0 / 150.0);

    // Same contribution and same opening: the earlier annotation wins.
    const GraspScene tie =
        small_scene({{16.0, 16.0, 0.0, 9.0, 8.0}, {16.0, 16.0, deg2rad(20.0), 9.0, 8.0}});
    const GraspMapStack mt = generate_maps(tie, config(MapMode::kBinary));
    CHECK_EQ(mt.ang_cos[mt.idx(0, 16, 16)], 1.0);
    CHECK_EQ(mt.ang_sin[mt.idx(0, 16, 16)], 0.0);
}

TEST_CASE("width channel is clamped by w_max") {
    MapGenConfig cfg = config(MapMode::kBinary);
    cfg.w_max = 10.0;
    const GraspScene s = small_scene({{16.0, 16.0, 0.0, 24.0, 6.0}});
    const GraspMapStack m = generate_maps(s, cfg);
    CHECK_EQ(m.width[m.idx(0, 16, 16)], 1.0);
    cfg.w_max = 48.0;
    const GraspMapStack m2 = generate_maps(s, cfg);
    CHECK_EQ(m2.width[m2.idx(0, 16, 16)], 0.5);
}

TEST_CASE("grasps land in their angle bin") {
    const GraspScene s = small_scene({{10.0, 16.0, deg2rad(-60.0), 9.0, 6.0},
                                      {22.0, 16.0, deg2rad(45.0), 9.0, 6.0}});
    const GraspMapStack m = generate_maps(s, config(MapMode::kBinary, 2.0, 3));
    const auto planes = support(m);
    REQUIRE_EQ(planes.size(), 3);
    CHECK(planes[0].count() > 0);   // -60 deg lives in [-90, -30)
    CHECK_EQ(planes[1].count(), 0); // nothing in [-30, 30)
    CHECK(planes[2].count() > 0);   // 45 deg lives in [30, 90)
}

TEST_CASE("supports are identical across modes and quality is ordered") {
    SynthConfig sc;
    sc.scene_count = 20;
    sc.seed = 5;
    const std::vector<GraspScene> scenes = synth_corpus(sc);
    for (const GraspScene& scene : scenes) {
        const GraspMapStack b = generate_maps(scene, config(MapMode::kBinary, 1.5, 3));
        const GraspMapStack s = generate_maps(scene, config(MapMode::kSoft, 1.5, 3));
        const GraspMapStack g = generate_maps(scene, config(MapMode::kStrong, 1.5, 3));
        CHECK(support(b) == support(s));
        CHECK(support(s) == support(g));
        for (size_t i = 0; i < b.q.size(); ++i) {
            CHECK(b.q[i] >= s.q[i]);
            CHECK(s.q[i] >= g.q[i]);
            CHECK(b.q[i] <= 1.0);
            CHECK(g.q[i] >= 0.0);
        }
    }
}

TEST_CASE("angle channels are unit vectors on the support") {
    SynthConfig sc;
    sc.scene_count = 6;
    sc.seed = 9;
    for (const GraspScene& scene : synth_corpus(sc)) {
        const GraspMapStack m = generate_maps(scene, config(MapMode::kSoft, 1.5, 3));
        for (size_t i = 0; i < m.q.size(); ++i) {
            const double n = m.ang_cos[i] * m.ang_cos[i] + m.ang_sin[i] * m.ang_sin[i];
            if (m.q[i] > 0.0) {
                CHECK_EQ(n, doctest::Approx(1.0).epsilon(1e-12));
                CHECK(m.width[i] > 0.0);
                CHECK(m.width[i] <= 1.0);
            } else {
                CHECK_EQ(n, 0.0);
                CHECK_EQ(m.width[i], 0.0);
            }
        }
    }
}

TEST_CASE("strong maps peak at exactly 1.0 on pixel-centered annotations") {
    SynthConfig sc;
    sc.scene_count = 8;
    sc.seed = 3;
    for (const GraspScene& scene : synth_corpus(sc)) {
        const GraspMapStack m = generate_maps(scene, config(MapMode::kStrong, 1.0, 3));
        double best = 0.0;
        for (double q : m.q) {
            best = std::max(best, q);
        }
        CHECK_EQ(best, 1.0);
    }
}

TEST_CASE("parallel kernel matches the serial reference bit for bit") {
    SynthConfig sc;
    sc.scene_count = 10;
    sc.seed = 11;
    const std::vector<GraspScene> scenes = synth_corpus(sc);
    for (const GraspScene& scene : scenes) {
        for (const MapMode mode : {MapMode::kBinary, MapMode::kSoft, MapMode::kStrong}) {
            for (const int bins : {1, 3}) {
                const MapGenConfig cfg = config(mode, 1.25, bins);
                CHECK(generate_maps(scene, cfg) ==
                      reference::generate_maps_serial(scene, cfg));
            }
        }
    }
}

#ifdef _OPENMP
TEST_CASE("output is independent of the thread count") {
    SynthConfig sc;
    sc.scene_count = 4;
    sc.seed = 13;
    const std::vector<GraspScene> scenes = synth_corpus(sc);
    const MapGenConfig cfg = config(MapMode::kStrong, 1.0, 3);
    const int before = omp_get_max_threads();
    std::vector<GraspMapStack> at_one;
    omp_set_num_threads(1);
    for (const GraspScene& scene : scenes) {
        at_one.push_back(generate_maps(scene, cfg));
    }
    omp_set_num_threads(4);
    for (size_t i = 0; i < scenes.size(); ++i) {
        CHECK(generate_maps(scenes[i], cfg) == at_one[i]);
    }
    omp_set_num_threads(before);
}
#endif

}  // TEST_SUITE
