#include <doctest.h>

#include <cmath>

#include "graspmaps/loss.hpp"
#include "graspmaps/reference.hpp"

using namespace graspmaps;

namespace {

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

// Prediction offset from gt so that smooth-L1 exercises both of its regions,
// staying clear of the |diff| = 1 kink where finite differences break down.
GraspMapStack offset_pred(const GraspMapStack& gt, uint64_t seed) {
    GraspMapStack p = gt;
    Rng rng(seed);
    auto nudge = [&](std::vector<double>& v) {
        for (double& x : v) {
            const double mag = rng.next_double() < 0.5 ? rng.uniform(0.05, 0.9)
                                                       : rng.uniform(1.1, 2.0);
            x += rng.next_double() < 0.5 ? mag : -mag;
        }
    };
    nudge(p.q);
    nudge(p.ang_cos);
    nudge(p.ang_sin);
    nudge(p.width);
    return p;
}

GraspMapStack single(double pq, double pc, double ps, double pw) {
    GraspMapStack s(1, 1, 1);
    s.q[0] = pq;
    s.ang_cos[0] = pc;
    s.ang_sin[0] = ps;
    s.width[0] = pw;
    return s;
}

}  // namespace

TEST_SUITE("loss") {

TEST_CASE("elementwise values") {
    CHECK_EQ(channel_loss({0.5}, {1.0}, LossKind::kMse), 0.25);
    CHECK_EQ(channel_loss({0.5}, {1.0}, LossKind::kSmoothL1), 0.125);
    CHECK_EQ(channel_loss({3.0}, {1.0}, LossKind::kSmoothL1), 1.5);
    // At the transition point both branches give 0.5.
    CHECK_EQ(channel_loss({2.0}, {1.0}, LossKind::kSmoothL1), 0.5);
    CHECK_EQ(channel_loss({1.0}, {1.0}, LossKind::kMse), 0.0);
}

TEST_CASE("mean and sum reductions") {
    const std::vector<double> pred{0.0, 1.0};
    const std::vector<double> target{1.0, 1.0};
    CHECK_EQ(channel_loss(pred, target, LossKind::kMse, Reduction::kMean), 0.5);
    CHECK_EQ(channel_loss(pred, target, LossKind::kMse, Reduction::kSum), 1.0);
}

TEST_CASE("total loss sums channels and scales by the bin count") {
    const GraspMapStack pred = single(0.5, 0.1, 0.2, 0.3);
    const GraspMapStack gt = single(0.0, 0.0, 0.0, 0.0);
    const LossBreakdown b = total_loss(pred, gt, LossKind::kMse);
    CHECK_EQ(b.scale, 1);
    CHECK_EQ(b.q, 0.25);
    CHECK_EQ(b.total, doctest::Approx(0.25 + 0.01 + 0.04 + 0.09).epsilon(1e-12));

    // Replicating the plane across bins multiplies the total by N.
    GraspMapStack pred3(3, 1, 1);
    GraspMapStack gt3(3, 1, 1);
    for (int bin = 0; bin < 3; ++bin) {
        pred3.q[bin] = 0.5;
        pred3.ang_cos[bin] = 0.1;
        pred3.ang_sin[bin] = 0.2;
        pred3.width[bin] = 0.3;
    }
    const LossBreakdown b3 = total_loss(pred3, gt3, LossKind::kMse);
    CHECK_EQ(b3.scale, 3);
    CHECK_EQ(b3.total, doctest::Approx(3.0 * b.total).epsilon(1e-12));
}

TEST_CASE("positional loss with zero ground-truth quality keeps only the Q term") {
    const GraspMapStack pred = random_stack(2, 6, 6, 31);
    GraspMapStack gt = random_stack(2, 6, 6, 32);
    for (double& q : gt.q) {
        q = 0.0;
    }
    for (const LossKind kind : {LossKind::kMse, LossKind::kSmoothL1}) {
        const LossBreakdown b = positional_loss(pred, gt, kind);
        CHECK_EQ(b.ang_cos, 0.0);
        CHECK_EQ(b.ang_sin, 0.0);
        CHECK_EQ(b.width, 0.0);
        CHECK_EQ(b.total, 2.0 * channel_loss(pred.q, gt.q, kind));
    }
}

TEST_CASE("positional loss never exceeds total loss for quality in [0,1]") {
    const GraspMapStack gt = random_stack(2, 8, 8, 41);
    const GraspMapStack pred = offset_pred(gt, 42);
    for (const LossKind kind : {LossKind::kMse, LossKind::kSmoothL1}) {
        CHECK(positional_loss(pred, gt, kind).total <=
              total_loss(pred, gt, kind).total + 1e-12);
    }
}

TEST_CASE("blocked reduction matches the serial reference") {
    // Stacks larger than one reduction block, odd tail included.
    const GraspMapStack gt = random_stack(3, 41, 37, 51);
    const GraspMapStack pred = offset_pred(gt, 52);
    for (const LossKind kind : {LossKind::kMse, LossKind::kSmoothL1}) {
        for (const Reduction red : {Reduction::kMean, Reduction::kSum}) {
            const LossBreakdown a = total_loss(pred, gt, kind, red);
            const LossBreakdown b = reference::total_loss_serial(pred, gt, kind, red);
            CHECK(std::abs(a.total - b.total) <= 1e-12 * std::abs(b.total));
            const LossBreakdown c = positional_loss(pred, gt, kind, red);
            const LossBreakdown d = reference::positional_loss_serial(pred, gt, kind, red);
            CHECK(std::abs(c.total - d.total) <= 1e-12 * std::abs(d.total));
        }
    }
}

TEST_CASE("hand-checked single-element gradients") {
    const GraspMapStack gt = single(0.2, 0.1, 0.0, 0.5);
    const GraspMapStack pred = single(0.7, 0.5, 0.0, 0.5);
    // d/dp (p-t)^2 = 2 (p-t); one element, mean reduction, one bin.
    const GraspMapStack g = loss_gradient(pred, gt, LossKind::kMse, false);
    CHECK_EQ(g.q[0], doctest::Approx(1.0).epsilon(1e-12));
    CHECK_EQ(g.ang_cos[0], doctest::Approx(0.8).epsilon(1e-12));
    CHECK_EQ(g.width[0], 0.0);

    // Smooth L1: gradient is the difference inside the quadratic region and
    // its sign outside.
    const GraspMapStack inside = loss_gradient(pred, gt, LossKind::kSmoothL1, false);
    CHECK_EQ(inside.q[0], doctest::Approx(0.5).epsilon(1e-12));
    const GraspMapStack far = single(3.0, 0.1, 0.0, 0.5);
    const GraspMapStack outside = loss_gradient(far, gt, LossKind::kSmoothL1, false);
    CHECK_EQ(outside.q[0], doctest::Approx(1.0).epsilon(1e-12));

    // Positional: the angle gradient is weighted by gt quality.
    const GraspMapStack pg = loss_gradient(pred, gt, LossKind::kMse, true);
    CHECK_EQ(pg.ang_cos[0], doctest::Approx(0.2 * 0.8).epsilon(1e-12));
    CHECK_EQ(pg.q[0], doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
    const GraspMapStack gt = random_stack(1, 8, 8, 61);
    const GraspMapStack pred = offset_pred(gt, 62);
    for (const LossKind kind : {LossKind::kMse, LossKind::kSmoothL1}) {
        for (const bool positional : {false, true}) {
            const GraspMapStack analytic = loss_gradient(pred, gt, kind, positional);
            const GraspMapStack fd =
                reference::loss_gradient_fd(pred, gt, kind, positional);
            for (const auto channel : {&GraspMapStack::q, &GraspMapStack::ang_cos,
                                       &GraspMapStack::ang_sin, &GraspMapStack::width}) {
                const auto& a = analytic.*channel;
                const auto& f = fd.*channel;
                for (size_t i = 0; i < a.size(); ++i) {
                    CHECK(std::abs(a[i] - f[i]) <=
                          1e-5 * std::max(1e-3, std::abs(f[i])));
                }
            }
        }
    }
}

TEST_CASE("sum-reduced gradients scale by the element count") {
    const GraspMapStack gt = random_stack(2, 4, 4, 71);
    const GraspMapStack pred = offset_pred(gt, 72);
    const GraspMapStack mean = loss_gradient(pred, gt, LossKind::kMse, false);
    const GraspMapStack sum =
        loss_gradient(pred, gt, LossKind::kMse, false, Reduction::kSum);
    const double n = static_cast<double>(gt.channel_size());
    for (size_t i = 0; i < mean.q.size(); ++i) {
        CHECK_EQ(sum.q[i], doctest::Approx(n * mean.q[i]).epsilon(1e-12));
    }
}

TEST_CASE("shape mismatches and empty stacks are rejected") {
    const GraspMapStack a = random_stack(1, 4, 4, 81);
    const GraspMapStack b = random_stack(1, 4, 5, 82);
    CHECK_THROWS_AS(total_loss(a, b, LossKind::kMse), ValidationError);
    CHECK_THROWS_AS(positional_loss(a, b, LossKind::kMse), ValidationError);
    CHECK_THROWS_AS(loss_gradient(a, b, LossKind::kMse, false), ValidationError);
    const GraspMapStack empty;
    CHECK_THROWS_AS(total_loss(empty, empty, LossKind::kMse), ValidationError);
    CHECK_THROWS_AS(channel_loss({}, {}, LossKind::kMse), ValidationError);
    CHECK_THROWS_AS(channel_loss({1.0}, {1.0, 2.0}, LossKind::kMse), ValidationError);
}

TEST_CASE("loss kind parsing") {
    CHECK_EQ(parse_loss_kind("mse"), LossKind::kMse);
    CHECK_EQ(parse_loss_kind("smooth_l1"), LossKind::kSmoothL1);
    CHECK_THROWS_AS(parse_loss_kind("l2"), ValidationError);
    CHECK_EQ(loss_kind_name(LossKind::kSmoothL1), std::string("smooth_l1"));
}

}  // TEST_SUITE
