// Batch front-end for grasp-map workflows: ground-truth generation,
// rectangle extraction, loss reports, rectangle-metric evaluation, the grasp
// simulation, corpus synthesis, and heatmap rendering.
//
// Exit codes: 0 success, 1 I/O failure, 2 validation/input failure.
// All outputs are deterministic for a given input, config, and seed, at any
// --jobs value.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "graspmaps/common.hpp"
#include "graspmaps/extraction.hpp"
#include "graspmaps/ground_truth.hpp"
#include "graspmaps/io.hpp"
#include "graspmaps/loss.hpp"
#include "graspmaps/metrics.hpp"
#include "graspmaps/reference.hpp"
#include "graspmaps/sim2d.hpp"
#include "graspmaps/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace graspmaps;

namespace {

constexpr int kReportVersion = 1;

void set_jobs(int jobs) {
    if (jobs < 1) {
        throw ValidationError("--jobs must be >= 1");
    }
#ifdef _OPENMP
    omp_set_num_threads(jobs);
#endif
}

json load_config_file(const std::string& path) {
    if (path.empty()) {
        return json::object();
    }
    const std::string text = read_file_text(path);
    try {
        json cfg = json::parse(text);
        if (!cfg.is_object()) {
            throw ValidationError(path + ": config must be a JSON object");
        }
        return cfg;
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

// Flags win over the config file: only fill values the user did not pass.
template <typename T>
void config_default(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
    if (opt->count() == 0 && cfg.contains(key)) {
        try {
            value = cfg.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ValidationError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

void write_json_file(const fs::path& path, const json& doc) {
    write_file_text(path, doc.dump(2) + "\n");
}

std::vector<fs::path> list_sorted(const fs::path& dir, const std::string& extension) {
    if (!fs::is_directory(dir)) {
        throw IoError("directory does not exist: " + dir.string());
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<fs::path> scene_dirs_sorted(const fs::path& corpus_dir) {
    if (!fs::is_directory(corpus_dir)) {
        throw IoError("corpus directory does not exist: " + corpus_dir.string());
    }
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "scene.json")) {
            dirs.push_back(entry.path());
        }
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

// Loads every scene, collecting per-directory failures so the user sees all
// offending files at once.
std::vector<GraspScene> load_corpus_collecting(const fs::path& corpus_dir) {
    const std::vector<fs::path> dirs = scene_dirs_sorted(corpus_dir);
    if (dirs.empty()) {
        throw ValidationError("no scene directories under " + corpus_dir.string());
    }
    std::vector<GraspScene> scenes;
    std::string failures;
    std::set<std::string> ids;
    for (const fs::path& dir : dirs) {
        try {
            GraspScene scene = load_scene(dir);
            if (!ids.insert(scene.scene_id).second) {
                throw ValidationError("duplicate scene id '" + scene.scene_id + "'");
            }
            scenes.push_back(std::move(scene));
        } catch (const ValidationError& e) {
            failures += "\n  " + dir.string() + ": " + e.what();
        }
    }
    if (!failures.empty()) {
        throw ValidationError("invalid scene input:" + failures);
    }
    std::sort(scenes.begin(), scenes.end(),
              [](const GraspScene& a, const GraspScene& b) {
                  return a.scene_id < b.scene_id;
              });
    return scenes;
}

struct NamedStack {
    std::string scene_id;
    GraspMapStack stack;
};

std::vector<NamedStack> load_maps_dir(const fs::path& dir) {
    const std::vector<fs::path> files = list_sorted(dir, ".gmap");
    if (files.empty()) {
        throw ValidationError("no .gmap files in " + dir.string());
    }
    std::vector<NamedStack> out;
    out.reserve(files.size());
    std::string failures;
    for (const fs::path& file : files) {
        try {
            out.push_back({file.stem().string(), load_tensor(file)});
        } catch (const ValidationError& e) {
            failures += "\n  ";
            failures += e.what();
        }
    }
    if (!failures.empty()) {
        throw ValidationError("invalid map input:" + failures);
    }
    return out;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory: " + dir.string());
    }
}

double channel_low(const std::string& channel) {
    return (channel == "cos" || channel == "sin") ? -1.0 : 0.0;
}

const std::vector<double>& stack_channel(const GraspMapStack& s, const std::string& name) {
    if (name == "q") return s.q;
    if (name == "cos") return s.ang_cos;
    if (name == "sin") return s.ang_sin;
    if (name == "width") return s.width;
    throw ValidationError("unknown channel '" + name + "' (expected q|cos|sin|width)");
}

void write_channel_heatmaps(const fs::path& out_dir, const std::string& scene_id,
                            const GraspMapStack& stack, const std::string& channel,
                            Colormap map, double lo, double hi) {
    const std::vector<double>& values = stack_channel(stack, channel);
    for (int b = 0; b < stack.bins; ++b) {
        Raster plane(stack.w, stack.h);
        std::copy_n(values.begin() + static_cast<long>(b) * stack.plane_size(),
                    stack.plane_size(), plane.v.begin());
        const std::string name = scene_id + "." + channel + std::to_string(b) + ".png";
        write_file_bytes(out_dir / name, render_heatmap_png(plane, map, lo, hi));
    }
}

// ---------------------------------------------------------------------------
// Predictions file
// ---------------------------------------------------------------------------

json prediction_to_json(const std::string& scene_id, const DecodedGrasp& d) {
    json j;
    j["scene_id"] = scene_id;
    j["cx"] = d.rect.cx;
    j["cy"] = d.rect.cy;
    j["theta_radians"] = d.rect.theta;
    j["width"] = d.rect.width;
    j["height"] = d.rect.height;
    j["quality"] = d.quality;
    j["bin"] = d.bin;
    return j;
}

std::map<std::string, GraspRectangle> load_predictions(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_file_text(path));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    std::map<std::string, GraspRectangle> preds;
    try {
        if (doc.at("report_version").get<int>() != kReportVersion) {
            throw ValidationError(path.string() + ": unsupported report_version");
        }
        for (const json& p : doc.at("predictions")) {
            const std::string id = p.at("scene_id").get<std::string>();
            const GraspRectangle rect(
                p.at("cx").get<double>(), p.at("cy").get<double>(),
                p.at("theta_radians").get<double>(), p.at("width").get<double>(),
                p.at("height").get<double>());
            if (!preds.emplace(id, rect).second) {
                throw ValidationError(path.string() + ": duplicate prediction for scene '" +
                                      id + "'");
            }
        }
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    if (preds.empty()) {
        throw ValidationError(path.string() + ": no predictions");
    }
    return preds;
}

// ---------------------------------------------------------------------------
// Subcommand options
// ---------------------------------------------------------------------------

struct GenOpts {
    std::string corpus;
    std::string out;
    std::string config;
    std::string mode = "binary";
    double sigma = 2.0;
    int bins = 1;
    double wmax = 150.0;
    double soft_floor = 0.9;
    bool heatmaps = false;
    int jobs = 1;
    CLI::Option* mode_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
    CLI::Option* bins_opt = nullptr;
    CLI::Option* wmax_opt = nullptr;
    CLI::Option* floor_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void run_gen(GenOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.mode_opt, cfg, "mode", o.mode);
    config_default(o.sigma_opt, cfg, "sigma", o.sigma);
    config_default(o.bins_opt, cfg, "bins", o.bins);
    config_default(o.wmax_opt, cfg, "wmax", o.wmax);
    config_default(o.floor_opt, cfg, "soft_floor", o.soft_floor);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);

    MapGenConfig mc;
    mc.mode = parse_map_mode(o.mode);
    mc.sigma = o.sigma;
    mc.bins = o.bins;
    mc.w_max = o.wmax;
    mc.soft_floor = o.soft_floor;
    mc.validate();

    const std::vector<GraspScene> scenes = load_corpus_collecting(o.corpus);
    ensure_out_dir(o.out);
    for (const GraspScene& scene : scenes) {
        const GraspMapStack stack = generate_maps(scene, mc);
        save_tensor(fs::path(o.out) / (scene.scene_id + ".gmap"), stack);
        if (o.heatmaps) {
            write_channel_heatmaps(o.out, scene.scene_id, stack, "q", Colormap::kJet,
                                   0.0, 1.0);
        }
    }
    std::cout << "generated " << scenes.size() << " map stacks in " << o.out << "\n";
}

struct ExtractOpts {
    std::string maps;
    std::string out;
    std::string config;
    double wmax = 150.0;
    double smooth_sigma = 0.0;
    int top_k = 0;
    double min_sep = 2.0;
    int jobs = 1;
    CLI::Option* wmax_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void run_extract(ExtractOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.wmax_opt, cfg, "wmax", o.wmax);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);
    if (o.smooth_sigma < 0.0) {
        throw ValidationError("--smooth-sigma must be >= 0");
    }
    if (!(o.wmax > 0.0)) {
        throw ValidationError("--wmax must be positive");
    }

    const std::vector<NamedStack> maps = load_maps_dir(o.maps);
    json predictions = json::array();
    json candidates = json::array();
    for (const NamedStack& m : maps) {
        const GraspMapStack* stack = &m.stack;
        GraspMapStack smoothed;
        if (o.smooth_sigma > 0.0) {
            smoothed = smooth_quality(m.stack, o.smooth_sigma);
            stack = &smoothed;
        }
        try {
            predictions.push_back(prediction_to_json(m.scene_id, extract_grasp(*stack, o.wmax)));
            if (o.top_k > 0) {
                json list = json::array();
                for (const DecodedGrasp& d :
                     extract_top_k(*stack, o.wmax, o.top_k, o.min_sep)) {
                    list.push_back(prediction_to_json(m.scene_id, d));
                }
                candidates.push_back(std::move(list));
            }
        } catch (const ValidationError& e) {
            throw ValidationError("scene '" + m.scene_id + "': " + e.what());
        }
    }

    json doc;
    doc["report_version"] = kReportVersion;
    doc["w_max"] = o.wmax;
    doc["predictions"] = std::move(predictions);
    if (o.top_k > 0) {
        doc["candidates"] = std::move(candidates);
    }
    write_json_file(o.out, doc);
    std::cout << "extracted " << maps.size() << " grasps to " << o.out << "\n";
}

struct LossOpts {
    std::string pred;
    std::string gt;
    std::string out;
    std::string kind = "mse";
    std::string reduction = "mean";
    bool positional = false;
    int jobs = 1;
    CLI::Option* jobs_opt = nullptr;
    std::string config;
};

void run_loss(LossOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);
    const LossKind kind = parse_loss_kind(o.kind);
    Reduction reduction;
    if (o.reduction == "mean") {
        reduction = Reduction::kMean;
    } else if (o.reduction == "sum") {
        reduction = Reduction::kSum;
    } else {
        throw ValidationError("unknown reduction '" + o.reduction + "' (expected mean|sum)");
    }

    const std::vector<NamedStack> preds = load_maps_dir(o.pred);
    const std::vector<NamedStack> gts = load_maps_dir(o.gt);
    std::map<std::string, const GraspMapStack*> gt_by_id;
    for (const NamedStack& g : gts) {
        gt_by_id[g.scene_id] = &g.stack;
    }

    json scenes = json::array();
    double total_sum = 0.0;
    for (const NamedStack& p : preds) {
        const auto it = gt_by_id.find(p.scene_id);
        if (it == gt_by_id.end()) {
            throw ValidationError("no ground-truth map for scene '" + p.scene_id + "'");
        }
        const LossBreakdown b =
            o.positional ? positional_loss(p.stack, *it->second, kind, reduction)
                         : total_loss(p.stack, *it->second, kind, reduction);
        json row;
        row["scene_id"] = p.scene_id;
        row["total"] = b.total;
        row["q"] = b.q;
        row["cos"] = b.ang_cos;
        row["sin"] = b.ang_sin;
        row["width"] = b.width;
        scenes.push_back(std::move(row));
        total_sum += b.total;
    }

    json doc;
    doc["report_version"] = kReportVersion;
    doc["kind"] = o.kind;
    doc["positional"] = o.positional;
    doc["reduction"] = o.reduction;
    doc["scenes"] = std::move(scenes);
    doc["aggregate"] = {{"mean_total", total_sum / static_cast<double>(preds.size())},
                        {"scene_count", preds.size()}};
    if (!o.out.empty()) {
        write_json_file(o.out, doc);
    }
    std::printf("%-16s %12s\n", "scene", "total");
    for (const json& row : doc["scenes"]) {
        std::printf("%-16s %12.6f\n", row["scene_id"].get<std::string>().c_str(),
                    row["total"].get<double>());
    }
    std::printf("mean total: %.6f over %zu scenes\n",
                doc["aggregate"]["mean_total"].get<double>(), preds.size());
}

struct EvalOpts {
    std::string preds;
    std::string corpus;
    std::string out;
    std::string config;
    std::vector<double> thresholds = {0.25, 0.30, 0.50, 0.75};
    int jobs = 1;
    CLI::Option* thresholds_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void run_eval(EvalOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.thresholds_opt, cfg, "thresholds", o.thresholds);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);
    std::sort(o.thresholds.begin(), o.thresholds.end());
    o.thresholds.erase(std::unique(o.thresholds.begin(), o.thresholds.end()),
                       o.thresholds.end());

    const std::map<std::string, GraspRectangle> preds = load_predictions(o.preds);
    const std::vector<GraspScene> scenes = load_corpus_collecting(o.corpus);
    const EvalReport report = evaluate_dataset(preds, scenes, o.thresholds);

    json doc;
    doc["report_version"] = kReportVersion;
    doc["thresholds"] = report.thresholds;
    doc["success_rate"] = report.success_rate;
    doc["iou_avg"] = report.iou_avg;
    doc["iou_avg_ungated"] = report.iou_avg_ungated;
    doc["scene_count"] = report.scene_count;
    json per_scene = json::array();
    for (const SceneEval& s : report.per_scene) {
        json row;
        row["scene_id"] = s.scene_id;
        row["best_iou"] = s.best_iou;
        row["best_iou_ungated"] = s.best_iou_ungated;
        row["success"] = s.success_at;
        per_scene.push_back(std::move(row));
    }
    doc["per_scene"] = std::move(per_scene);
    if (!o.out.empty()) {
        write_json_file(o.out, doc);
    }
    std::cout << render_report_table(report);
}

struct OracleOpts {
    std::string preds;
    std::string corpus;
    std::string out;
    std::string config;
    double jaw_thickness = 2.0;
    double jaw_length = 20.0;
    double gripper_wmin = 0.0;
    double gripper_wmax = 150.0;
    int jobs = 1;
    CLI::Option* jobs_opt = nullptr;
};

void run_oracle(OracleOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);
    GripperParams gp{o.jaw_thickness, o.jaw_length, o.gripper_wmin, o.gripper_wmax};
    gp.validate();

    const std::map<std::string, GraspRectangle> pred_map = load_predictions(o.preds);
    const std::vector<GraspScene> scenes = load_corpus_collecting(o.corpus);

    OutcomeCounts counts;
    json per_scene = json::array();
    for (const GraspScene& scene : scenes) {
        if (!scene.mask.has_value()) {
            throw ValidationError("scene '" + scene.scene_id + "' carries no occupancy mask");
        }
        const auto it = pred_map.find(scene.scene_id);
        if (it == pred_map.end()) {
            throw ValidationError("missing prediction for scene '" + scene.scene_id + "'");
        }
        const GraspOutcome outcome = check_grasp(*scene.mask, it->second, gp);
        counts.add(outcome);
        json row;
        row["scene_id"] = scene.scene_id;
        row["outcome"] = outcome_name(outcome);
        per_scene.push_back(std::move(row));
    }

    json doc;
    doc["report_version"] = kReportVersion;
    doc["outcomes"] = {{"success", counts.success},
                       {"jaw_collision", counts.jaw_collision},
                       {"miss", counts.miss},
                       {"out_of_bounds", counts.out_of_bounds}};
    doc["success_rate"] = counts.success_rate();
    doc["scene_count"] = counts.total();
    doc["per_scene"] = std::move(per_scene);
    if (!o.out.empty()) {
        write_json_file(o.out, doc);
    }
    std::printf("success       %zu\njaw_collision %zu\nmiss          %zu\nout_of_bounds %zu\n",
                counts.success, counts.jaw_collision, counts.miss, counts.out_of_bounds);
    std::printf("success rate  %.4f over %zu scenes\n", counts.success_rate(),
                counts.total());
}

struct SynthOpts {
    std::string out;
    std::string config;
    int count = 100;
    uint64_t seed = 0;
    int width = 64;
    int height = 64;
    int jobs = 1;
    CLI::Option* count_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void run_synth(SynthOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.count_opt, cfg, "count", o.count);
    config_default(o.seed_opt, cfg, "seed", o.seed);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);

    SynthConfig sc;
    sc.scene_count = o.count;
    sc.seed = o.seed;
    sc.image_w = o.width;
    sc.image_h = o.height;
    write_corpus(o.out, sc);
    std::cout << "wrote " << o.count << " scenes to " << o.out << "\n";
}

struct VizOpts {
    std::string maps;
    std::string out;
    std::string config;
    std::string channel = "q";
    std::string colormap = "jet";
    double lo = 0.0;
    double hi = 1.0;
    int jobs = 1;
    CLI::Option* lo_opt = nullptr;
    CLI::Option* hi_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;
};

void run_viz(VizOpts& o) {
    const json cfg = load_config_file(o.config);
    config_default(o.jobs_opt, cfg, "jobs", o.jobs);
    set_jobs(o.jobs);
    const Colormap map = parse_colormap(o.colormap);
    if (o.lo_opt->count() == 0) {
        o.lo = channel_low(o.channel);
    }

    const std::vector<NamedStack> maps = load_maps_dir(o.maps);
    ensure_out_dir(o.out);
    for (const NamedStack& m : maps) {
        write_channel_heatmaps(o.out, m.scene_id, m.stack, o.channel, map, o.lo, o.hi);
    }
    std::cout << "rendered " << maps.size() << " map stacks to " << o.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grasp-map toolkit: ground-truth maps, extraction, losses, "
                 "evaluation, and a 2D grasp simulation"};
    app.require_subcommand(1);

    GenOpts gen;
    CLI::App* cgen = app.add_subcommand("gen", "generate ground-truth map stacks");
    cgen->add_option("corpus", gen.corpus, "corpus directory of scene subdirs")->required();
    cgen->add_option("--out", gen.out, "output directory for .gmap files")->required();
    cgen->add_option("--config", gen.config, "JSON config file (flags win)");
    gen.mode_opt = cgen->add_option("--mode", gen.mode, "binary|soft|strong");
    gen.sigma_opt = cgen->add_option("--sigma", gen.sigma, "Gaussian strength, pixels");
    gen.bins_opt = cgen->add_option("--bins", gen.bins, "angle bin count");
    gen.wmax_opt = cgen->add_option("--wmax", gen.wmax, "width normalization limit");
    gen.floor_opt = cgen->add_option("--soft-floor", gen.soft_floor, "soft-mode floor");
    cgen->add_flag("--heatmaps", gen.heatmaps, "also render Q heatmaps");
    gen.jobs_opt = cgen->add_option("--jobs", gen.jobs, "worker threads");
    cgen->callback([&gen] { run_gen(gen); });

    ExtractOpts ext;
    CLI::App* cext = app.add_subcommand("extract", "decode best grasps from map stacks");
    cext->add_option("maps", ext.maps, "directory of .gmap files")->required();
    cext->add_option("--out", ext.out, "predictions JSON path")->required();
    cext->add_option("--config", ext.config, "JSON config file (flags win)");
    ext.wmax_opt = cext->add_option("--wmax", ext.wmax, "width denormalization limit");
    cext->add_option("--smooth-sigma", ext.smooth_sigma,
                     "Gaussian blur of Q before argmax (0 = off)");
    cext->add_option("--top-k", ext.top_k, "also emit up to K candidates per scene");
    cext->add_option("--min-sep", ext.min_sep, "candidate separation, pixels");
    ext.jobs_opt = cext->add_option("--jobs", ext.jobs, "worker threads");
    cext->callback([&ext] { run_extract(ext); });

    LossOpts loss;
    CLI::App* closs = app.add_subcommand("loss", "loss report between map stacks");
    closs->add_option("pred", loss.pred, "directory of predicted .gmap files")->required();
    closs->add_option("gt", loss.gt, "directory of ground-truth .gmap files")->required();
    closs->add_option("--out", loss.out, "JSON report path");
    closs->add_option("--config", loss.config, "JSON config file (flags win)");
    closs->add_option("--kind", loss.kind, "mse|smooth_l1");
    closs->add_option("--reduction", loss.reduction, "mean|sum");
    closs->add_flag("--positional", loss.positional,
                    "weight angle/width terms by ground-truth quality");
    loss.jobs_opt = closs->add_option("--jobs", loss.jobs, "worker threads");
    closs->callback([&loss] { run_loss(loss); });

    EvalOpts ev;
    CLI::App* cev = app.add_subcommand("eval", "rectangle-metric evaluation");
    cev->add_option("preds", ev.preds, "predictions JSON from extract")->required();
    cev->add_option("corpus", ev.corpus, "corpus directory with annotations")->required();
    cev->add_option("--out", ev.out, "JSON report path");
    cev->add_option("--config", ev.config, "JSON config file (flags win)");
    ev.thresholds_opt = cev->add_option("--thresholds", ev.thresholds,
                                        "IoU thresholds, comma separated")
                            ->delimiter(',');
    ev.jobs_opt = cev->add_option("--jobs", ev.jobs, "worker threads");
    cev->callback([&ev] { run_eval(ev); });

    OracleOpts orc;
    CLI::App* corc = app.add_subcommand("oracle", "2D grasp simulation over predictions");
    corc->add_option("preds", orc.preds, "predictions JSON from extract")->required();
    corc->add_option("corpus", orc.corpus, "corpus directory with masks")->required();
    corc->add_option("--out", orc.out, "JSON report path");
    corc->add_option("--config", orc.config, "JSON config file (flags win)");
    corc->add_option("--jaw-thickness", orc.jaw_thickness, "jaw plate thickness, pixels");
    corc->add_option("--jaw-length", orc.jaw_length, "jaw plate length, pixels");
    corc->add_option("--gripper-wmin", orc.gripper_wmin, "smallest commanded opening");
    corc->add_option("--gripper-wmax", orc.gripper_wmax, "largest commanded opening");
    orc.jobs_opt = corc->add_option("--jobs", orc.jobs, "worker threads");
    corc->callback([&orc] { run_oracle(orc); });

    SynthOpts syn;
    CLI::App* csyn = app.add_subcommand("synth", "generate a synthetic corpus");
    csyn->add_option("--out", syn.out, "corpus output directory")->required();
    csyn->add_option("--config", syn.config, "JSON config file (flags win)");
    syn.count_opt = csyn->add_option("--count", syn.count, "number of scenes");
    syn.seed_opt = csyn->add_option("--seed", syn.seed, "RNG seed");
    csyn->add_option("--width", syn.width, "scene width, pixels");
    csyn->add_option("--height", syn.height, "scene height, pixels");
    syn.jobs_opt = csyn->add_option("--jobs", syn.jobs, "worker threads");
    csyn->callback([&syn] { run_synth(syn); });

    VizOpts viz;
    CLI::App* cviz = app.add_subcommand("viz", "render map channels as heatmap PNGs");
    cviz->add_option("maps", viz.maps, "directory of .gmap files")->required();
    cviz->add_option("--out", viz.out, "output directory")->required();
    cviz->add_option("--config", viz.config, "JSON config file (flags win)");
    cviz->add_option("--channel", viz.channel, "q|cos|sin|width");
    cviz->add_option("--colormap", viz.colormap, "gray|hot|jet");
    viz.lo_opt = cviz->add_option("--lo", viz.lo, "value mapped to the lowest color");
    viz.hi_opt = cviz->add_option("--hi", viz.hi, "value mapped to the highest color");
    viz.jobs_opt = cviz->add_option("--jobs", viz.jobs, "worker threads");
    cviz->callback([&viz] { run_viz(viz); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
