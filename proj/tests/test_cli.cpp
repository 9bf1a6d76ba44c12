#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graspmaps/io.hpp"

using namespace graspmaps;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the CLI with stdout/stderr captured to files. `args` is shell-quoted
// by the caller where needed; paths used here contain no spaces.
CliResult run_cli(const fs::path& dir, const std::string& args) {
    static int counter = 0;
    const fs::path out = dir / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(GRASPMAPS_CLI_PATH) + " " + args + " >" +
                            out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.code = (raw >= 0 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("graspmaps_test_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

bool same_tree(const fs::path& a, const fs::path& b) {
    size_t count_a = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        ++count_a;
        const fs::path rel = fs::relative(entry.path(), a);
        if (!fs::exists(b / rel) || slurp(entry.path()) != slurp(b / rel)) {
            return false;
        }
    }
    size_t count_b = 0;
    for (const auto& entry : fs::recursive_directory_iterator(b)) {
        count_b += entry.is_regular_file() ? 1 : 0;
    }
    return count_a == count_b;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and argument errors") {
    const fs::path dir = fresh_dir("help");
    CHECK_EQ(run_cli(dir, "--help").code, 0);
    CHECK_EQ(run_cli(dir, "").code, 2);              // a subcommand is required
    CHECK_EQ(run_cli(dir, "frobnicate").code, 2);    // unknown subcommand
    CHECK_EQ(run_cli(dir, "gen").code, 2);           // missing positional
    const CliResult bad = run_cli(dir, "synth --out x --count -3");
    CHECK_EQ(bad.code, 2);
}

TEST_CASE("pipeline runs end to end and is deterministic across jobs") {
    const fs::path dir = fresh_dir("pipeline");
    const std::string corpus = (dir / "corpus").string();
    CHECK_EQ(run_cli(dir, "synth --out " + corpus + " --count 6 --seed 3").code, 0);

    const std::string gen_flags = " --mode strong --sigma 1 --bins 3";
    CHECK_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "maps1").string() +
                              gen_flags + " --jobs 1")
                 .code,
             0);
    CHECK_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "maps8").string() +
                              gen_flags + " --jobs 8")
                 .code,
             0);
    CHECK(same_tree(dir / "maps1", dir / "maps8"));

    const std::string preds = (dir / "preds.json").string();
    CHECK_EQ(run_cli(dir, "extract " + (dir / "maps1").string() + " --out " + preds).code,
             0);
    const json pj = json::parse(slurp(preds));
    CHECK_EQ(pj.at("report_version").get<int>(), 1);
    CHECK_EQ(pj.at("predictions").size(), 6);

    const std::string report = (dir / "report.json").string();
    const CliResult ev = run_cli(dir, "eval " + preds + " " + corpus + " --out " + report +
                                          " --thresholds 0.25,0.5");
    CHECK_EQ(ev.code, 0);
    CHECK(ev.out.find("scenes: 6") != std::string::npos);
    const json rj = json::parse(slurp(report));
    CHECK_EQ(rj.at("report_version").get<int>(), 1);
    CHECK_EQ(rj.at("scene_count").get<int>(), 6);
    CHECK_EQ(rj.at("success_rate")[0].get<double>(), 1.0);

    const std::string oracle = (dir / "oracle.json").string();
    const CliResult orc = run_cli(dir, "oracle " + preds + " " + corpus + " --out " + oracle);
    CHECK_EQ(orc.code, 0);
    const json oj = json::parse(slurp(oracle));
    CHECK_EQ(oj.at("success_rate").get<double>(), 1.0);
    CHECK_EQ(oj.at("outcomes").at("success").get<int>(), 6);

    // Self-loss is exactly zero.
    const CliResult ls = run_cli(dir, "loss " + (dir / "maps1").string() + " " +
                                          (dir / "maps1").string() + " --out " +
                                          (dir / "loss.json").string());
    CHECK_EQ(ls.code, 0);
    const json lj = json::parse(slurp(dir / "loss.json"));
    CHECK_EQ(lj.at("aggregate").at("mean_total").get<double>(), 0.0);

    // viz renders one PNG per bin and channel choice.
    CHECK_EQ(run_cli(dir, "viz " + (dir / "maps1").string() + " --out " +
                              (dir / "viz").string() + " --channel q --colormap jet")
                 .code,
             0);
    size_t pngs = 0;
    for (const auto& entry : fs::directory_iterator(dir / "viz")) {
        const std::string bytes = slurp(entry.path());
        REQUIRE(bytes.size() > 8);
        CHECK_EQ(static_cast<unsigned char>(bytes[0]), 0x89);
        CHECK_EQ(bytes.substr(1, 3), "PNG");
        ++pngs;
    }
    CHECK_EQ(pngs, 6 * 3);
}

TEST_CASE("a single threshold produces a single-column report") {
    const fs::path dir = fresh_dir("threshold");
    const std::string corpus = (dir / "corpus").string();
    REQUIRE_EQ(run_cli(dir, "synth --out " + corpus + " --count 3 --seed 1").code, 0);
    REQUIRE_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "maps").string() +
                                " --mode strong --sigma 1 --bins 3")
                   .code,
               0);
    const std::string preds = (dir / "preds.json").string();
    REQUIRE_EQ(run_cli(dir, "extract " + (dir / "maps").string() + " --out " + preds).code,
               0);
    const std::string report = (dir / "report.json").string();
    REQUIRE_EQ(run_cli(dir, "eval " + preds + " " + corpus + " --out " + report +
                                " --thresholds 0.5")
                   .code,
               0);
    const json rj = json::parse(slurp(report));
    REQUIRE_EQ(rj.at("thresholds").size(), 1);
    CHECK_EQ(rj.at("thresholds")[0].get<double>(), 0.5);
    CHECK_EQ(rj.at("success_rate").size(), 1);
}

TEST_CASE("exit codes distinguish missing files from invalid content") {
    const fs::path dir = fresh_dir("errors");
    // Missing inputs are I/O failures: exit 1.
    CHECK_EQ(run_cli(dir, "gen " + (dir / "nope").string() + " --out " +
                              (dir / "x").string())
                 .code,
             1);
    CHECK_EQ(run_cli(dir, "extract " + (dir / "nope").string() + " --out x.json").code, 1);
    CHECK_EQ(run_cli(dir, "eval " + (dir / "nope.json").string() + " " +
                              (dir / "nope").string())
                 .code,
             1);

    // Invalid content is a validation failure: exit 2, listing every bad scene.
    const std::string corpus = (dir / "corpus").string();
    REQUIRE_EQ(run_cli(dir, "synth --out " + corpus + " --count 4 --seed 0").code, 0);
    write_file_text(dir / "corpus" / "scene_0001" / "grasps.txt", "a;b;c\n");
    write_file_text(dir / "corpus" / "scene_0003" / "grasps.txt", "1;2\n");
    const CliResult bad = run_cli(dir, "gen " + corpus + " --out " + (dir / "y").string());
    CHECK_EQ(bad.code, 2);
    CHECK(bad.err.find("scene_0001") != std::string::npos);
    CHECK(bad.err.find("scene_0003") != std::string::npos);

    // Empty prediction sets are rejected.
    write_file_text(dir / "empty.json",
                    "{\"report_version\": 1, \"w_max\": 150.0, \"predictions\": []}");
    REQUIRE_EQ(run_cli(dir, "synth --out " + (dir / "c2").string() + " --count 2").code, 0);
    CHECK_EQ(run_cli(dir, "eval " + (dir / "empty.json").string() + " " +
                              (dir / "c2").string())
                 .code,
             2);

    // Mismatched stack shapes in loss are a validation failure.
    REQUIRE_EQ(run_cli(dir, "gen " + (dir / "c2").string() + " --out " +
                                (dir / "m1").string() + " --bins 1")
                   .code,
               0);
    REQUIRE_EQ(run_cli(dir, "gen " + (dir / "c2").string() + " --out " +
                                (dir / "m3").string() + " --bins 3")
                   .code,
               0);
    CHECK_EQ(run_cli(dir, "loss " + (dir / "m1").string() + " " + (dir / "m3").string())
                 .code,
             2);
}

TEST_CASE("config files fill in defaults but flags win") {
    const fs::path dir = fresh_dir("config");
    const std::string corpus = (dir / "corpus").string();
    REQUIRE_EQ(run_cli(dir, "synth --out " + corpus + " --count 3 --seed 9").code, 0);

    write_file_text(dir / "cfg.json", "{\"mode\": \"soft\", \"sigma\": 2.5}");
    REQUIRE_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "from_config").string() +
                                " --config " + (dir / "cfg.json").string())
                   .code,
               0);
    REQUIRE_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "plain").string() +
                                " --mode soft --sigma 2.5")
                   .code,
               0);
    CHECK(same_tree(dir / "from_config", dir / "plain"));

    // An explicit flag overrides the config value.
    REQUIRE_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "override").string() +
                                " --config " + (dir / "cfg.json").string() +
                                " --mode strong")
                   .code,
               0);
    REQUIRE_EQ(run_cli(dir, "gen " + corpus + " --out " + (dir / "strong").string() +
                                " --mode strong --sigma 2.5")
                   .code,
               0);
    CHECK(same_tree(dir / "override", dir / "strong"));
    CHECK_FALSE(same_tree(dir / "override", dir / "plain"));

    CHECK_EQ(run_cli(dir, "gen " + corpus + " --out z --config " +
                              (dir / "missing.json").string())
                 .code,
             1);
}

TEST_CASE("an empty synthetic corpus is allowed") {
    const fs::path dir = fresh_dir("empty");
    const CliResult r = run_cli(dir, "synth --out " + (dir / "corpus").string() +
                                         " --count 0");
    CHECK_EQ(r.code, 0);
    CHECK(r.out.find("wrote 0 scenes") != std::string::npos);
    CHECK(fs::exists(dir / "corpus"));
}

}  // TEST_SUITE
