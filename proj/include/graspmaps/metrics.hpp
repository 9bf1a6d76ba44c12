#pragma once

#include <map>
#include <string>
#include <vector>

#include "graspmaps/ground_truth.hpp"

namespace graspmaps {

// Angle gate of the rectangle metric, degrees.
inline constexpr double kAngleGateDeg = 30.0;

struct SceneEval {
    std::string scene_id;
    double best_iou = 0.0;          // angle-gated best IoU against the annotation set
    double best_iou_ungated = 0.0;  // best IoU ignoring the angle gate
    std::vector<bool> success_at;   // parallel to EvalReport::thresholds
};

struct EvalReport {
    std::vector<double> thresholds;
    std::vector<SceneEval> per_scene;  // sorted by scene_id
    std::vector<double> success_rate;  // parallel to thresholds
    double iou_avg = 0.0;              // mean angle-gated best IoU
    double iou_avg_ungated = 0.0;
    int scene_count = 0;
};

// The rectangle-metric decision rule: IoU strictly above the threshold and
// angle offset within the 30 degree gate.
inline bool passes_rectangle_metric(double iou, double angle_offset_degrees,
                                    double iou_threshold) {
    return iou > iou_threshold && angle_offset_degrees <= kAngleGateDeg;
}

// True iff some ground-truth rectangle satisfies the rectangle metric
// against the prediction. Throws on an empty annotation set.
bool grasp_success(const GraspRectangle& pred, const std::vector<GraspRectangle>& gts,
                   double iou_threshold);

// Best IoU over annotations that pass the angle gate; 0 when none does.
double scene_best_iou(const GraspRectangle& pred, const std::vector<GraspRectangle>& gts);

// As above but ignoring the angle gate.
double scene_best_iou_ungated(const GraspRectangle& pred, const std::vector<GraspRectangle>& gts);

// Evaluate one prediction per scene at the given thresholds. Scenes are
// processed in scene_id order (input order is irrelevant); missing
// predictions are an error. Parallel over scenes.
EvalReport evaluate_dataset(const std::map<std::string, GraspRectangle>& preds,
                            const std::vector<GraspScene>& scenes,
                            const std::vector<double>& thresholds);

// Fixed-width text rendering of a report.
std::string render_report_table(const EvalReport& report);

}  // namespace graspmaps
