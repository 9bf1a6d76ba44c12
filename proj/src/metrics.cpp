#include "graspmaps/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace graspmaps {

bool grasp_success(const GraspRectangle& pred, const std::vector<GraspRectangle>& gts,
                   double iou_threshold) {
    if (gts.empty()) {
        throw ValidationError("grasp_success: empty annotation set");
    }
    for (const GraspRectangle& gt : gts) {
        if (passes_rectangle_metric(rect_iou(pred, gt), angle_offset_deg(pred.theta, gt.theta),
                                    iou_threshold)) {
            return true;
        }
    }
    return false;
}

double scene_best_iou(const GraspRectangle& pred, const std::vector<GraspRectangle>& gts) {
    if (gts.empty()) {
        throw ValidationError("scene_best_iou: empty annotation set");
    }
    double best = 0.0;
    for (const GraspRectangle& gt : gts) {
        if (angle_offset_deg(pred.theta, gt.theta) <= kAngleGateDeg) {
            best = std::max(best, rect_iou(pred, gt));
        }
    }
    return best;
}

double scene_best_iou_ungated(const GraspRectangle& pred,
                              const std::vector<GraspRectangle>& gts) {
    if (gts.empty()) {
        throw ValidationError("scene_best_iou: empty annotation set");
    }
    double best = 0.0;
    for (const GraspRectangle& gt : gts) {
        best = std::max(best, rect_iou(pred, gt));
    }
    return best;
}

EvalReport evaluate_dataset(const std::map<std::string, GraspRectangle>& preds,
                            const std::vector<GraspScene>& scenes,
                            const std::vector<double>& thresholds) {
    for (double t : thresholds) {
        if (!(t > 0.0 && t < 1.0)) {
            throw ValidationError("IoU thresholds must lie in (0, 1)");
        }
    }
    // Deterministic order regardless of how the caller listed the scenes.
    std::vector<const GraspScene*> ordered;
    ordered.reserve(scenes.size());
    for (const GraspScene& s : scenes) {
        ordered.push_back(&s);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const GraspScene* a, const GraspScene* b) { return a->scene_id < b->scene_id; });
    for (size_t s = 0; s < ordered.size(); ++s) {
        if (s > 0 && ordered[s]->scene_id == ordered[s - 1]->scene_id) {
            throw ValidationError("duplicate scene id '" + ordered[s]->scene_id + "'");
        }
        if (preds.find(ordered[s]->scene_id) == preds.end()) {
            throw ValidationError("missing prediction for scene '" + ordered[s]->scene_id + "'");
        }
    }

    EvalReport report;
    report.thresholds = thresholds;
    report.scene_count = static_cast<int>(ordered.size());
    report.per_scene.resize(ordered.size());

#pragma omp parallel for schedule(dynamic)
    for (long s = 0; s < static_cast<long>(ordered.size()); ++s) {
        const GraspScene& scene = *ordered[s];
        const GraspRectangle& pred = preds.at(scene.scene_id);
        SceneEval& ev = report.per_scene[s];
        ev.scene_id = scene.scene_id;
        ev.best_iou = scene_best_iou(pred, scene.grasps);
        ev.best_iou_ungated = scene_best_iou_ungated(pred, scene.grasps);
        ev.success_at.resize(thresholds.size());
        for (size_t t = 0; t < thresholds.size(); ++t) {
            ev.success_at[t] = ev.best_iou > thresholds[t];
        }
    }

    report.success_rate.assign(thresholds.size(), 0.0);
    double iou_sum = 0.0;
    double iou_sum_ungated = 0.0;
    for (const SceneEval& ev : report.per_scene) {
        iou_sum += ev.best_iou;
        iou_sum_ungated += ev.best_iou_ungated;
        for (size_t t = 0; t < thresholds.size(); ++t) {
            report.success_rate[t] += ev.success_at[t] ? 1.0 : 0.0;
        }
    }
    if (!ordered.empty()) {
        for (double& rate : report.success_rate) {
            rate /= static_cast<double>(ordered.size());
        }
        report.iou_avg = iou_sum / static_cast<double>(ordered.size());
        report.iou_avg_ungated = iou_sum_ungated / static_cast<double>(ordered.size());
    }
    return report;
}

std::string render_report_table(const EvalReport& report) {
    std::ostringstream out;
    char buf[64];
    out << "scenes: " << report.scene_count << "\n";
    out << "threshold  success\n";
    for (size_t t = 0; t < report.thresholds.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%8.2f%%  %6.2f%%\n", report.thresholds[t] * 100.0,
                      report.success_rate[t] * 100.0);
        out << buf;
    }
    std::snprintf(buf, sizeof(buf), "iou_avg           %.4f\n", report.iou_avg);
    out << buf;
    std::snprintf(buf, sizeof(buf), "iou_avg (ungated) %.4f\n", report.iou_avg_ungated);
    out << buf;
    return out.str();
}

}  // namespace graspmaps
