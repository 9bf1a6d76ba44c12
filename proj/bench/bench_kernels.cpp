// Compares the OpenMP kernels against their serial reference
// implementations: same inputs, wall-clock per variant, and a checksum so a
// disagreement is visible immediately.
//
// Usage: graspmaps_bench [repeats]

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#else
#include <chrono>
#endif

#include "graspmaps/common.hpp"
#include "graspmaps/geometry.hpp"
#include "graspmaps/ground_truth.hpp"
#include "graspmaps/loss.hpp"
#include "graspmaps/reference.hpp"
#include "graspmaps/synth.hpp"

using namespace graspmaps;

namespace {

double now_seconds() {
#ifdef _OPENMP
    return omp_get_wtime();
#else
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
#endif
}

uint64_t checksum(const std::vector<double>& v) {
    uint64_t acc = 0x9e3779b97f4a7c15ULL;
    for (double x : v) {
        uint64_t bits;
        static_assert(sizeof(bits) == sizeof(x));
        __builtin_memcpy(&bits, &x, sizeof(bits));
        acc = (acc ^ bits) * 0x2545f4914f6cdd1dULL;
    }
    return acc;
}

uint64_t checksum(const GraspMapStack& s) {
    return checksum(s.q) ^ checksum(s.ang_cos) ^ checksum(s.ang_sin) ^
           checksum(s.width);
}

struct Timing {
    double serial_s = 0.0;
    double parallel_s = 0.0;
    uint64_t serial_sum = 0;
    uint64_t parallel_sum = 0;
};

void report(const char* name, const Timing& t) {
    std::printf("%-18s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n",
                name, t.serial_s * 1e3, t.parallel_s * 1e3,
                t.serial_s / t.parallel_s,
                t.serial_sum == t.parallel_sum ? "checksums equal"
                                               : "CHECKSUM MISMATCH");
}

GraspScene big_scene() {
    // One dense scene: many grasps over a mid-sized canvas.
    SynthConfig cfg;
    cfg.scene_count = 24;
    cfg.seed = 7;
    const std::vector<GraspScene> scenes = synth_corpus(cfg);
    GraspScene merged = scenes[0];
    merged.scene_id = "bench";
    merged.image_w = 384;
    merged.image_h = 384;
    merged.mask.reset();
    merged.grasps.clear();
    for (size_t i = 0; i < scenes.size(); ++i) {
        const double ox = 64.0 * (i % 6);
        const double oy = 64.0 * (i / 6);
        for (GraspRectangle g : scenes[i].grasps) {
            merged.grasps.emplace_back(g.cx + ox, g.cy + oy, g.theta, g.width,
                                       g.height);
        }
    }
    return merged;
}

Timing bench_generate(const GraspScene& scene, int repeats) {
    MapGenConfig cfg;
    cfg.mode = MapMode::kStrong;
    cfg.sigma = 1.0;
    cfg.bins = 3;
    cfg.w_max = 40.0;

    Timing t;
    GraspMapStack out;
    double t0 = now_seconds();
    for (int r = 0; r < repeats; ++r) {
        out = reference::generate_maps_serial(scene, cfg);
    }
    t.serial_s = (now_seconds() - t0) / repeats;
    t.serial_sum = checksum(out);

    t0 = now_seconds();
    for (int r = 0; r < repeats; ++r) {
        out = generate_maps(scene, cfg);
    }
    t.parallel_s = (now_seconds() - t0) / repeats;
    t.parallel_sum = checksum(out);
    return t;
}

GraspMapStack random_stack(int bins, int h, int w, uint64_t seed) {
    GraspMapStack s(bins, h, w);
    Rng rng(seed);
    for (size_t i = 0; i < s.channel_size(); ++i) {
        s.q[i] = rng.next_double();
        s.ang_cos[i] = rng.uniform(-1.0, 1.0);
        s.ang_sin[i] = rng.uniform(-1.0, 1.0);
        s.width[i] = rng.next_double();
    }
    return s;
}

// Serial and blocked-parallel reductions sum in different orders, so totals
// agree to rounding, not bit-for-bit; report the relative difference.
void bench_loss(int repeats) {
    const GraspMapStack pred = random_stack(3, 256, 256, 11);
    const GraspMapStack gt = random_stack(3, 256, 256, 12);

    LossBreakdown serial;
    double t0 = now_seconds();
    for (int r = 0; r < repeats; ++r) {
        serial = reference::positional_loss_serial(pred, gt, LossKind::kSmoothL1);
    }
    const double serial_s = (now_seconds() - t0) / repeats;

    LossBreakdown parallel;
    t0 = now_seconds();
    for (int r = 0; r < repeats; ++r) {
        parallel = positional_loss(pred, gt, LossKind::kSmoothL1);
    }
    const double parallel_s = (now_seconds() - t0) / repeats;

    const double rel =
        std::abs(serial.total - parallel.total) / std::abs(serial.total);
    std::printf("%-18s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   "
                "rel diff %.2e\n",
                "positional_loss", serial_s * 1e3, parallel_s * 1e3,
                serial_s / parallel_s, rel);

    t0 = now_seconds();
    GraspMapStack grad;
    for (int r = 0; r < repeats; ++r) {
        grad = loss_gradient(pred, gt, LossKind::kSmoothL1, true);
    }
    const double grad_s = (now_seconds() - t0) / repeats;
    std::printf("%-18s parallel %9.3f ms   checksum %016" PRIx64 "\n",
                "loss_gradient", grad_s * 1e3, checksum(grad));
}

void bench_iou(int repeats) {
    Rng rng(99);
    std::vector<std::pair<GraspRectangle, GraspRectangle>> pairs;
    for (int i = 0; i < 64; ++i) {
        const GraspRectangle a(rng.uniform(20, 40), rng.uniform(20, 40),
                               rng.uniform(-kHalfPi, kHalfPi), rng.uniform(5, 25),
                               rng.uniform(5, 25));
        const GraspRectangle b(a.cx + rng.uniform(-8, 8), a.cy + rng.uniform(-8, 8),
                               rng.uniform(-kHalfPi, kHalfPi), rng.uniform(5, 25),
                               rng.uniform(5, 25));
        pairs.emplace_back(a, b);
    }

    double mc_sink = 0.0;
    double t0 = now_seconds();
    for (int r = 0; r < repeats; ++r) {
        mc_sink = 0.0;
        for (size_t i = 0; i < pairs.size(); ++i) {
            mc_sink += reference::rect_iou_monte_carlo(pairs[i].first,
                                                       pairs[i].second, 20000,
                                                       1000 + i);
        }
    }
    const double mc_s = (now_seconds() - t0) / repeats;

    double exact_sink = 0.0;
    t0 = now_seconds();
    for (int r = 0; r < repeats; ++r) {
        exact_sink = 0.0;
        for (const auto& [a, b] : pairs) {
            exact_sink += rect_iou(a, b);
        }
    }
    const double exact_s = (now_seconds() - t0) / repeats;

    std::printf("%-18s mc(20k) %9.3f ms   exact %12.6f ms   mean |diff| %.4f "
                "over %zu pairs\n",
                "rect_iou", mc_s * 1e3, exact_s * 1e3,
                std::abs(mc_sink - exact_sink) / pairs.size(), pairs.size());
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::atoi(argv[1]) : 5;
    if (repeats < 1) {
        std::fprintf(stderr, "repeats must be >= 1\n");
        return 2;
    }
#ifdef _OPENMP
    std::printf("OpenMP max threads: %d, repeats: %d\n", omp_get_max_threads(),
                repeats);
#else
    std::printf("built without OpenMP, repeats: %d\n", repeats);
#endif

    const GraspScene scene = big_scene();
    std::printf("map generation: %dx%d canvas, %zu grasps, 3 bins\n", scene.image_w,
                scene.image_h, scene.grasps.size());

    report("generate_maps", bench_generate(scene, repeats));
    bench_loss(repeats);
    bench_iou(repeats);
    return 0;
}
