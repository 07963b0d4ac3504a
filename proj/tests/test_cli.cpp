#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "ag/cli.hpp"
#include "ag/config.hpp"
#include "ag/io.hpp"
#include "oracles.hpp"

using namespace ag;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ag_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    [[nodiscard]] std::string operator/(const std::string& name) const {
        return (path / name).string();
    }
};

void write_file(const std::string& p, const std::string& text) {
    std::ofstream(p) << text;
}

std::string read_file(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

const char* kSmallSpec = R"({"dims":[16,40,40],"spacing":[2.0,1.0,1.0],
  "arc_radius_mm":11.0,"tube_radius_mm":5.0,"wall_thickness_mm":2.0,
  "tumor_radius_mm":3.0,"n_distractors":2})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with code 2") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"nope"}).code == cli::kExitUsage);
    CHECK(run({"ooi", "--bogus", "1"}).code == cli::kExitUsage);
    CHECK(run({"phantom", "--out-dir", "/tmp/x"}).code == cli::kExitUsage);  // no seed
}

TEST_CASE("config files are validated") {
    TempDir t;
    write_file(t / "bad.json", R"({"organ":{"set_ts":[1],"set_word":[1],"colour":3}})");
    CHECK(run({"ooi", "--config", t / "bad.json", "--print-config"}).code == cli::kExitUsage);
    write_file(t / "bad2.json", R"({"lamda":0.5})");
    CHECK(run({"psm", "--config", t / "bad2.json", "--print-config"}).code == cli::kExitUsage);
    write_file(t / "broken.json", "{");
    CHECK(run({"psm", "--config", t / "broken.json", "--print-config"}).code == cli::kExitUsage);
}

TEST_CASE("print-config reflects flags over config") {
    TempDir t;
    write_file(t / "cfg.json",
               R"({"organ":{"set_ts":[6,18],"set_word":[5],"dilate_times":2},"lambda":0.5})");
    const Result r = run({"psm", "--config", t / "cfg.json", "--lambda", "0.25", "--print-config"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["lambda"] == 0.25);
    CHECK(j["organ"]["dilate_times"] == 2);
    CHECK(j["organ"]["set_ts"] == json::array({6, 18}));

    const Result o = run({"ooi", "--config", t / "cfg.json", "--dilate-times", "4", "--print-config"});
    REQUIRE(o.code == 0);
    CHECK(json::parse(o.out)["organ"]["dilate_times"] == 4);
}

TEST_CASE("pipeline on a small phantom") {
    TempDir t;
    write_file(t / "spec.json", kSmallSpec);
    REQUIRE(run({"phantom", "--spec", t / "spec.json", "--seed", "3", "--out-dir", t / "ph",
                 "--erase-deg", "120,150"})
                .code == 0);
    for (const char* f : {"ct.nii", "labels.nii", "tumor.nii", "labels_erased.nii", "phantom_spec.json"}) {
        CHECK(fs::exists(t.path / "ph" / f));
    }

    REQUIRE(run({"ooi", "--ts", t / "ph/labels_erased.nii", "--word", t / "ph/labels.nii",
                 "--ts-set", "1", "--word-set", "1", "--out", t / "ooi.nii", "--raw-out",
                 t / "raw.nii"})
                .code == 0);
    REQUIRE(run({"wall", "--ooi", t / "raw.nii", "--out", t / "wall.nii"}).code == 0);
    const Result psm = run({"psm", "--ooi", t / "ooi.nii", "--tumor", t / "ph/tumor.nii",
                            "--out", t / "psm.nii", "--patch", "4,8,8"});
    REQUIRE(psm.code == 0);
    const io::Volume map = io::read_volume(t / "psm.nii");
    double total = 0.0;
    for (double v : map.grid.data()) total += v;
    CHECK(std::abs(total - 1.0) <= 1e-6);

    const Result s1 = run({"sample", "--psm", t / "psm.nii", "--count", "25", "--seed", "9"});
    const Result s2 = run({"sample", "--psm", t / "psm.nii", "--count", "25", "--seed", "9"});
    REQUIRE(s1.code == 0);
    CHECK(s1.out == s2.out);
    const json centres = json::parse(s1.out);
    CHECK(centres["count"] == 25);
    CHECK(centres["centers"].size() == 25);
    CHECK(run({"sample", "--psm", t / "psm.nii", "--count", "0", "--seed", "9"}).code ==
          cli::kExitUsage);

    REQUIRE(run({"sample", "--psm", t / "psm.nii", "--count", "2", "--seed", "1", "--out",
                 t / "c.json", "--image", t / "ph/ct.nii", "--patch-dir", t / "patches",
                 "--patch", "4,8,8"})
                .code == 0);
    const io::Volume patch = io::read_volume(t / "patches/patch_000000.nii");
    CHECK(patch.grid.dims() == Dims{4, 8, 8});

    REQUIRE(run({"ssl-mask", "--ct", t / "ph/ct.nii", "--wall", t / "wall.nii", "--out",
                 t / "m1.nii", "--seed", "5"})
                .code == 0);
    REQUIRE(run({"ssl-mask", "--ct", t / "ph/ct.nii", "--wall", t / "wall.nii", "--out",
                 t / "m2.nii", "--seed", "5"})
                .code == 0);
    CHECK(read_file(t / "m1.nii") == read_file(t / "m2.nii"));

    const Result lossr = run({"loss", "--gt", t / "ph/tumor.nii", "--pred", t / "ph/tumor.nii",
                              "--ooi", t / "ooi.nii"});
    REQUIRE(lossr.code == 0);
    const json lj = json::parse(lossr.out);
    CHECK(lj["dice_loss"] == 0.0);
    CHECK(lj.contains("ce_loss"));
    CHECK(lj.contains("af_loss"));

    // An all-false prediction: same geometry as the tumour mask.
    const io::Volume tumor = io::read_volume(t / "ph/tumor.nii");
    io::write_volume(Mask(tumor.grid.dims(), tumor.grid.spacing(), std::uint8_t{0}), t / "empty.nii");
    const Result m = run({"metrics", "--gt", t / "ph/tumor.nii", "--pred", t / "empty.nii",
                          "--case-id", "c1"});
    REQUIRE(m.code == 0);
    std::istringstream lines(m.out);
    std::string first, second;
    std::getline(lines, first);
    std::getline(lines, second);
    const json row = json::parse(first);
    CHECK(row["case_id"] == "c1");
    CHECK(row["hd95_mm"] == 1000.0);
    CHECK(row["dice"] == 0.0);
    CHECK(json::parse(second)["aggregate"] == "mean");
}

TEST_CASE("metrics cohort keeps case order across workers") {
    TempDir t;
    std::mt19937_64 rng(4);
    json cohort = json::array();
    std::vector<std::string> ids;
    for (int k = 0; k < 5; ++k) {
        const Mask a = test::random_mask(rng, {6, 6, 6}, 0.4);
        const Mask b = test::random_mask(rng, {6, 6, 6}, 0.4);
        const std::string ga = t / ("g" + std::to_string(k) + ".nii");
        const std::string pb = t / ("p" + std::to_string(k) + ".nii");
        io::write_volume(a, ga);
        io::write_volume(b, pb);
        ids.push_back("case" + std::to_string(k));
        cohort.push_back({{"case_id", ids.back()}, {"gt", ga}, {"pred", pb}});
    }
    write_file(t / "cohort.json", cohort.dump());
    const Result one = run({"metrics", "--cohort", t / "cohort.json", "--jobs", "1"});
    const Result many = run({"metrics", "--cohort", t / "cohort.json", "--jobs", "3"});
    REQUIRE(one.code == 0);
    CHECK(one.out == many.out);
    std::istringstream lines(one.out);
    std::string line;
    for (const std::string& id : ids) {
        std::getline(lines, line);
        CHECK(json::parse(line)["case_id"] == id);
    }
}

TEST_CASE("processing errors exit with code 1 and name the file") {
    TempDir t;
    const std::string missing = t / "missing.nii";
    const Result r = run({"wall", "--ooi", missing, "--out", t / "w.nii"});
    CHECK(r.code == cli::kExitProcessing);
    CHECK(r.err.find("missing.nii") != std::string::npos);

    write_file(t / "junk.nii", std::string(400, 'x'));
    CHECK(run({"wall", "--ooi", t / "junk.nii", "--out", t / "w.nii"}).code ==
          cli::kExitProcessing);
}

TEST_CASE("raw format round trip through the CLI") {
    TempDir t;
    write_file(t / "spec.json", kSmallSpec);
    REQUIRE(run({"phantom", "--spec", t / "spec.json", "--seed", "3", "--out-dir", t / "a",
                 "--format", "raw"})
                .code == 0);
    REQUIRE(run({"phantom", "--spec", t / "spec.json", "--seed", "3", "--out-dir", t / "b"})
                .code == 0);
    const io::Volume raw = io::read_volume(t / "a/labels.raw");
    const io::Volume nii = io::read_volume(t / "b/labels.nii");
    CHECK(raw.grid == nii.grid);
    CHECK(fs::exists(t.path / "a/labels.json"));
}

}
