#include "graspmaps/extraction.hpp"

#include <algorithm>
#include <cmath>

namespace graspmaps {

double decode_angle(double cos_comp, double sin_comp) {
    if (cos_comp == 0.0 && sin_comp == 0.0) {
        throw ValidationError("angle undefined: both encoded components are zero");
    }
    double theta = std::atan2(sin_comp, cos_comp) / 2.0;
    if (theta >= kHalfPi) {
        theta -= kPi;
    }
    return theta;
}

namespace {

DecodedGrasp decode_at(const GraspMapStack& stack, int b, int i, int j, double w_max) {
    const size_t at = stack.idx(b, i, j);
    const double theta = decode_angle(stack.ang_cos[at], stack.ang_sin[at]);
    const double opening = stack.width[at] * w_max;
    DecodedGrasp out;
    out.rect = GraspRectangle(j + 0.5, i + 0.5, theta, opening, opening / 2.0);
    out.quality = stack.q[at];
    out.bin = b;
    return out;
}

}  // namespace

DecodedGrasp extract_grasp(const GraspMapStack& stack, double w_max) {
    if (stack.channel_size() == 0) {
        throw ValidationError("empty grasp map stack");
    }
    double best = 0.0;
    long best_at = -1;
    const size_t n = stack.channel_size();
    for (size_t k = 0; k < n; ++k) {
        if (stack.q[k] > best) {
            best = stack.q[k];
            best_at = static_cast<long>(k);
        }
    }
    if (best_at < 0) {
        throw ValidationError("no grasp: quality map has no positive values");
    }
    const size_t plane = stack.plane_size();
    const int b = static_cast<int>(best_at / plane);
    const int i = static_cast<int>((best_at % plane) / stack.w);
    const int j = static_cast<int>(best_at % stack.w);
    return decode_at(stack, b, i, j, w_max);
}

std::vector<DecodedGrasp> extract_top_k(const GraspMapStack& stack, double w_max, int k,
                                        double min_separation) {
    if (k < 1) {
        throw ValidationError("k must be >= 1");
    }
    if (min_separation < 0.0) {
        throw ValidationError("min_separation must be >= 0");
    }
    struct Candidate {
        double q;
        size_t at;
    };
    std::vector<Candidate> candidates;
    const size_t n = stack.channel_size();
    for (size_t at = 0; at < n; ++at) {
        if (stack.q[at] > 0.0) {
            candidates.push_back({stack.q[at], at});
        }
    }
    // Descending quality; index order breaks ties (lowest bin, row-major).
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.q > b.q; });

    const size_t plane = stack.plane_size();
    const double min_sep2 = min_separation * min_separation;
    std::vector<DecodedGrasp> out;
    for (const Candidate& c : candidates) {
        if (static_cast<int>(out.size()) >= k) {
            break;
        }
        const int b = static_cast<int>(c.at / plane);
        const int i = static_cast<int>((c.at % plane) / stack.w);
        const int j = static_cast<int>(c.at % stack.w);
        const double cx = j + 0.5;
        const double cy = i + 0.5;
        bool suppressed = false;
        for (const DecodedGrasp& g : out) {
            const double dx = cx - g.rect.cx;
            const double dy = cy - g.rect.cy;
            if (dx * dx + dy * dy < min_sep2) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) {
            out.push_back(decode_at(stack, b, i, j, w_max));
        }
    }
    return out;
}

GraspMapStack smooth_quality(const GraspMapStack& stack, double sigma) {
    if (sigma <= 0.0) {
        return stack;
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double norm = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        kernel[t + radius] = std::exp(-(t * t) / (2.0 * sigma * sigma));
        norm += kernel[t + radius];
    }
    for (double& kv : kernel) {
        kv /= norm;
    }
    auto reflect = [](int x, int n) {
        while (x < 0 || x >= n) {
            if (x < 0) x = -x - 1;
            if (x >= n) x = 2 * n - 1 - x;
        }
        return x;
    };
    GraspMapStack out = stack;
    std::vector<double> tmp(stack.plane_size());
    for (int b = 0; b < stack.bins; ++b) {
        // Horizontal pass into tmp, vertical pass back into out.q.
        for (int i = 0; i < stack.h; ++i) {
            for (int j = 0; j < stack.w; ++j) {
                double acc = 0.0;
                for (int t = -radius; t <= radius; ++t) {
                    acc += kernel[t + radius] * stack.q[stack.idx(b, i, reflect(j + t, stack.w))];
                }
                tmp[static_cast<size_t>(i) * stack.w + j] = acc;
            }
        }
        for (int i = 0; i < stack.h; ++i) {
            for (int j = 0; j < stack.w; ++j) {
                double acc = 0.0;
                for (int t = -radius; t <= radius; ++t) {
                    acc += kernel[t + radius] *
                           tmp[static_cast<size_t>(reflect(i + t, stack.h)) * stack.w + j];
                }
                out.q[out.idx(b, i, j)] = acc;
            }
        }
    }
    return out;
}

}  // namespace graspmaps
