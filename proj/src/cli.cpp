#include "ag/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ag/config.hpp"
#include "ag/io.hpp"
#include "ag/loss.hpp"
#include "ag/maskgen.hpp"
#include "ag/metrics.hpp"
#include "ag/morphology.hpp"
#include "ag/phantom.hpp"
#include "ag/sampling.hpp"
#include "ag/ssl.hpp"

namespace ag::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// Flags shared by every subcommand.
struct Common {
    std::optional<std::string> config;
    bool print_config = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "Pipeline config JSON; explicit flags override it");
    sub->add_flag("--print-config", c.print_config, "Print the effective config and exit");
}

config::PipelineConfig base_config(const Common& c) {
    if (!c.config) return {};
    return config::load_pipeline_config(*c.config);
}

template <class T>
const T& require(const std::optional<T>& v, const char* flag) {
    if (!v) throw UsageError(std::string("missing required option ") + flag);
    return *v;
}

Extent3 to_extent(const std::vector<std::int64_t>& v, const char* flag) {
    if (v.size() != 3) throw UsageError(std::string(flag) + " expects three values z,y,x");
    if (v[0] < 1 || v[1] < 1 || v[2] < 1) {
        throw UsageError(std::string(flag) + " components must be >= 1");
    }
    return {v[0], v[1], v[2]};
}

morph::StructElem parse_elem(const std::string& name) {
    try {
        return morph::struct_elem_from_string(name);
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& flag,
                           const config::PipelineConfig& cfg) {
    if (flag) return *flag;
    if (cfg.seed) return *cfg.seed;
    throw UsageError("missing required option --seed (randomised subcommands need an explicit seed)");
}

void write_text(const std::optional<std::string>& path, const std::string& text,
                std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream f(*path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + *path);
    f << text;
    if (!f) throw IoError("write failed: " + *path);
}

bool print_config(const Common& c, const config::PipelineConfig& cfg, std::ostream& out) {
    if (!c.print_config) return false;
    out << config::to_json(cfg).dump(2) << "\n";
    return true;
}

// ---- ooi -------------------------------------------------------------------

struct OoiArgs {
    Common common;
    std::optional<std::string> ts, word, out, raw_out, mos_out, elem;
    std::optional<std::vector<std::int32_t>> ts_set, word_set;
    std::optional<int> dilate_times;
};

int run_ooi(const OoiArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.ts_set) cfg.organ.set_ts = {a.ts_set->begin(), a.ts_set->end()};
    if (a.word_set) cfg.organ.set_word = {a.word_set->begin(), a.word_set->end()};
    if (a.dilate_times) cfg.organ.dilate_times = *a.dilate_times;
    if (a.elem) cfg.organ.elem = parse_elem(*a.elem);
    if (print_config(a.common, cfg, out)) return kExitOk;
    if (cfg.organ.set_ts.empty() || cfg.organ.set_word.empty()) {
        throw UsageError("indicator sets are empty: pass --ts-set/--word-set or a --config");
    }
    if (cfg.organ.dilate_times < 0) throw UsageError("--dilate-times must be >= 0");
    const LabelGrid ts = io::read_labels(require(a.ts, "--ts"));
    const LabelGrid word = io::read_labels(require(a.word, "--word"));
    const std::string& out_path = require(a.out, "--out");
    io::write_volume(maskgen::build_ooi(ts, word, cfg.organ), out_path);
    if (a.raw_out) {
        maskgen::OrganConfig raw = cfg.organ;
        raw.dilate_times = 0;
        io::write_volume(maskgen::build_ooi(ts, word, raw), *a.raw_out);
    }
    if (a.mos_out) io::write_volume(ts, *a.mos_out);
    return kExitOk;
}

// ---- wall ------------------------------------------------------------------

struct WallArgs {
    Common common;
    std::optional<std::string> ooi, out, elem;
    std::optional<int> r_out, r_in;
};

int run_wall(const WallArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.r_out) cfg.organ.wall_r_out = *a.r_out;
    if (a.r_in) cfg.organ.wall_r_in = *a.r_in;
    if (a.elem) cfg.organ.elem = parse_elem(*a.elem);
    if (print_config(a.common, cfg, out)) return kExitOk;
    if (cfg.organ.wall_r_out < 0 || cfg.organ.wall_r_in < 0) {
        throw UsageError("--r-out and --r-in must be >= 0");
    }
    const Mask ooi = io::read_mask(require(a.ooi, "--ooi"));
    const std::string& out_path = require(a.out, "--out");
    io::write_volume(maskgen::bowel_wall(ooi, cfg.organ.elem, cfg.organ.wall_r_out,
                                         cfg.organ.wall_r_in),
                     out_path);
    return kExitOk;
}

// ---- psm -------------------------------------------------------------------

struct PsmArgs {
    Common common;
    std::optional<std::string> ooi, tumor, out, organ_out, tumor_out;
    std::optional<std::vector<std::int64_t>> patch;
    std::optional<double> lambda, mu;
    bool sigma_is_stddev = false;
};

int run_psm(const PsmArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.patch) cfg.patch.size = to_extent(*a.patch, "--patch");
    if (a.lambda) cfg.lambda = *a.lambda;
    if (a.mu) cfg.mu = *a.mu;
    if (a.sigma_is_stddev) cfg.patch.sigma_is_stddev = true;
    if (print_config(a.common, cfg, out)) return kExitOk;
    if (!(cfg.lambda >= 0.0 && cfg.lambda <= 1.0)) throw UsageError("--lambda must lie in [0, 1]");
    if (!(cfg.mu > 0.0)) throw UsageError("--mu must be positive");
    const Mask ooi = io::read_mask(require(a.ooi, "--ooi"));
    const Mask tumor = io::read_mask(require(a.tumor, "--tumor"));
    const std::string& out_path = require(a.out, "--out");
    const auto s_organ = sampling::psm_from_gain(sampling::gain_map(ooi, cfg.patch), cfg.mu);
    const auto s_tumor = sampling::psm_from_gain(sampling::gain_map(tumor, cfg.patch), cfg.mu);
    const auto s_final = sampling::combine_psm(s_organ, s_tumor, cfg.lambda);
    io::write_volume(s_final.grid(), out_path);
    if (a.organ_out) io::write_volume(s_organ.grid(), *a.organ_out);
    if (a.tumor_out) io::write_volume(s_tumor.grid(), *a.tumor_out);
    return kExitOk;
}

// ---- sample ----------------------------------------------------------------

struct SampleArgs {
    Common common;
    std::optional<std::string> psm, out, image, patch_dir;
    std::optional<std::int64_t> count;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::int64_t>> patch;
    double pad = 0.0;
};

int run_sample(const SampleArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.patch) cfg.patch.size = to_extent(*a.patch, "--patch");
    if (a.seed) cfg.seed = *a.seed;
    if (print_config(a.common, cfg, out)) return kExitOk;
    const std::int64_t count = require(a.count, "--count");
    if (count < 1) throw UsageError("--count must be >= 1");
    const std::uint64_t seed = require_seed(a.seed, cfg);
    if (a.patch_dir.has_value() != a.image.has_value()) {
        throw UsageError("--image and --patch-dir must be given together");
    }
    const auto map = sampling::SamplingMap::from_weights(io::read_real(require(a.psm, "--psm")));
    const auto centers = sampling::draw_centers(map, static_cast<std::size_t>(count), seed);

    ordered_json j;
    j["count"] = count;
    j["seed"] = seed;
    auto& list = j["centers"] = ordered_json::array();
    for (const Coord& c : centers) list.push_back({c.z, c.y, c.x});
    write_text(a.out, j.dump() + "\n", out);

    if (a.image) {
        const RealGrid image = io::read_real(*a.image);
        require_same_geometry(image, map.grid(), "sample --image");
        fs::create_directories(*a.patch_dir);
        for (std::size_t k = 0; k < centers.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "patch_%06zu.nii", k);
            io::write_volume(extract_patch(image, centers[k], cfg.patch.size, a.pad),
                             fs::path(*a.patch_dir) / name);
        }
    }
    return kExitOk;
}

// ---- ssl-mask --------------------------------------------------------------

struct SslArgs {
    Common common;
    std::optional<std::string> ct, wall, out;
    std::optional<std::uint64_t> seed;
    std::optional<double> mean, stddev;
};

int run_ssl(const SslArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.mean) cfg.noise.mean = *a.mean;
    if (a.stddev) cfg.noise.stddev = *a.stddev;
    if (a.seed) cfg.seed = *a.seed;
    if (print_config(a.common, cfg, out)) return kExitOk;
    if (!(cfg.noise.stddev >= 0.0)) throw UsageError("--noise-std must be >= 0");
    cfg.noise.seed = require_seed(a.seed, cfg);
    const RealGrid ct = io::read_real(require(a.ct, "--ct"));
    const Mask wall = io::read_mask(require(a.wall, "--wall"));
    const std::string& out_path = require(a.out, "--out");
    io::write_volume(ssl::mask_bowel_wall(ct, wall, cfg.noise), out_path);
    return kExitOk;
}

// ---- loss ------------------------------------------------------------------

struct LossArgs {
    Common common;
    std::optional<std::string> gt, pred, ooi, out;
};

int run_loss(const LossArgs& a, std::ostream& out) {
    const config::PipelineConfig cfg = base_config(a.common);
    if (print_config(a.common, cfg, out)) return kExitOk;
    const Mask gt = io::read_mask(require(a.gt, "--gt"));
    const RealGrid pred = io::read_real(require(a.pred, "--pred"));
    const Mask ooi = io::read_mask(require(a.ooi, "--ooi"));
    ordered_json j;
    j["dice_loss"] = loss::soft_dice_loss(gt, pred, cfg.loss);
    j["ce_loss"] = loss::cross_entropy_loss(gt, pred, cfg.loss);
    j["af_loss"] = loss::af_loss(gt, pred, ooi, cfg.loss);
    write_text(a.out, j.dump() + "\n", out);
    return kExitOk;
}

// ---- metrics ---------------------------------------------------------------

struct MetricsArgs {
    Common common;
    std::optional<std::string> gt, pred, cohort, out;
    std::string case_id = "case";
    std::optional<double> nsd_tol, hd_penalty;
    int jobs = 1;
};

struct CaseSpec {
    std::string id;
    fs::path gt;
    fs::path pred;
};

std::vector<CaseSpec> load_cohort(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open cohort file " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(path.string() + ": " + e.what());
    }
    const nlohmann::json& list = j.is_object() && j.contains("cases") ? j.at("cases") : j;
    if (!list.is_array()) throw UsageError(path.string() + ": expected an array of cases");
    std::vector<CaseSpec> cases;
    const fs::path base = path.parent_path();
    for (const auto& c : list) {
        try {
            cases.push_back({c.at("case_id").get<std::string>(),
                             base / c.at("gt").get<std::string>(),
                             base / c.at("pred").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw UsageError(path.string() + ": malformed case entry: " + e.what());
        }
    }
    return cases;
}

ordered_json report_json(const std::string& id, const metrics::MetricReport& r) {
    ordered_json j;
    j["case_id"] = id;
    j["dice"] = r.dice;
    j["precision"] = r.precision;
    j["recall"] = r.recall;
    j["nsd"] = r.nsd;
    j["hd95_mm"] = r.hd95_mm;
    return j;
}

int run_metrics(const MetricsArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.nsd_tol) cfg.nsd_tol_mm = *a.nsd_tol;
    if (a.hd_penalty) cfg.hd_penalty_mm = *a.hd_penalty;
    if (print_config(a.common, cfg, out)) return kExitOk;
    if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
    if (!(cfg.nsd_tol_mm >= 0.0) || !(cfg.hd_penalty_mm >= 0.0)) {
        throw UsageError("--nsd-tol and --hd-penalty must be >= 0");
    }
    std::vector<CaseSpec> cases;
    if (a.cohort) {
        if (a.gt || a.pred) throw UsageError("--cohort cannot be combined with --gt/--pred");
        cases = load_cohort(*a.cohort);
    } else {
        cases.push_back({a.case_id, require(a.gt, "--gt"), require(a.pred, "--pred")});
    }
    const metrics::MetricOptions opts{cfg.nsd_tol_mm, cfg.hd_penalty_mm};

    std::vector<metrics::MetricReport> reports(cases.size());
    std::vector<std::exception_ptr> failures(cases.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < cases.size(); k = next++) {
            try {
                reports[k] = metrics::seg_metrics(io::read_mask(cases[k].gt),
                                                  io::read_mask(cases[k].pred), opts);
            } catch (...) {
                failures[k] = std::current_exception();
            }
        }
    };
    const auto n_threads =
        static_cast<std::size_t>(std::min<std::int64_t>(a.jobs, std::ssize(cases)));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    std::ostringstream text;
    metrics::MetricReport mean;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        text << report_json(cases[k].id, reports[k]).dump() << "\n";
        mean.dice += reports[k].dice;
        mean.precision += reports[k].precision;
        mean.recall += reports[k].recall;
        mean.nsd += reports[k].nsd;
        mean.hd95_mm += reports[k].hd95_mm;
    }
    const auto n = static_cast<double>(cases.size());
    ordered_json agg;
    agg["aggregate"] = "mean";
    agg["n_cases"] = cases.size();
    agg["dice"] = mean.dice / n;
    agg["precision"] = mean.precision / n;
    agg["recall"] = mean.recall / n;
    agg["nsd"] = mean.nsd / n;
    agg["hd95_mm"] = mean.hd95_mm / n;
    text << agg.dump() << "\n";
    write_text(a.out, text.str(), out);
    return kExitOk;
}

// ---- phantom ---------------------------------------------------------------

struct PhantomArgs {
    Common common;
    std::optional<std::string> spec, out_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "nii";
    std::optional<std::vector<double>> erase_deg;
};

int run_phantom(const PhantomArgs& a, std::ostream& out) {
    config::PipelineConfig cfg = base_config(a.common);
    if (a.seed) cfg.seed = *a.seed;
    if (print_config(a.common, cfg, out)) return kExitOk;
    phantom::PhantomSpec spec;
    if (a.spec) spec = config::load_phantom_spec(*a.spec);
    spec.seed = require_seed(a.seed, cfg);
    if (a.format != "nii" && a.format != "raw") throw UsageError("--format must be nii or raw");
    if (a.erase_deg && a.erase_deg->size() != 2) {
        throw UsageError("--erase-deg expects two angles from,to");
    }
    const fs::path dir = require(a.out_dir, "--out-dir");
    fs::create_directories(dir);
    const std::string ext = "." + a.format;
    const phantom::Phantom p = phantom::gen_phantom(spec);
    io::write_volume(p.ct, dir / ("ct" + ext));
    io::write_volume(p.labels, dir / ("labels" + ext));
    io::write_volume(p.tumor, dir / ("tumor" + ext));
    if (a.erase_deg) {
        io::write_volume(phantom::erase_colon_segment(p.labels, spec, (*a.erase_deg)[0],
                                                      (*a.erase_deg)[1]),
                         dir / ("labels_erased" + ext));
    }
    std::ofstream js(dir / "phantom_spec.json", std::ios::trunc);
    js << config::to_json(spec).dump(2) << "\n";
    if (!js) throw IoError("cannot write " + (dir / "phantom_spec.json").string());
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anatomy-guided volume processing pipeline"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "ag-pipeline 1.0.0");

    OoiArgs ooi;
    auto* s_ooi = app.add_subcommand("ooi", "Organs-of-interest mask from two label maps");
    add_common(s_ooi, ooi.common);
    s_ooi->add_option("--ts", ooi.ts, "Primary multi-organ label volume");
    s_ooi->add_option("--word", ooi.word, "Secondary multi-organ label volume");
    s_ooi->add_option("--out", ooi.out, "Output OOI mask");
    s_ooi->add_option("--raw-out", ooi.raw_out, "Also write the undilated OOI");
    s_ooi->add_option("--mos-out", ooi.mos_out, "Also write the primary label map unchanged");
    s_ooi->add_option("--ts-set", ooi.ts_set, "Primary organ codes, comma separated")
        ->delimiter(',');
    s_ooi->add_option("--word-set", ooi.word_set, "Secondary organ codes, comma separated")
        ->delimiter(',');
    s_ooi->add_option("--dilate-times", ooi.dilate_times, "Dilation steps");
    s_ooi->add_option("--elem", ooi.elem, "Structuring element: face6 or full26");

    WallArgs wall;
    auto* s_wall = app.add_subcommand("wall", "Bowel-wall band from an undilated OOI mask");
    add_common(s_wall, wall.common);
    s_wall->add_option("--ooi", wall.ooi, "Undilated OOI mask");
    s_wall->add_option("--out", wall.out, "Output wall mask");
    s_wall->add_option("--r-out", wall.r_out, "Dilation steps");
    s_wall->add_option("--r-in", wall.r_in, "Erosion steps");
    s_wall->add_option("--elem", wall.elem, "Structuring element: face6 or full26");

    PsmArgs psm;
    auto* s_psm = app.add_subcommand("psm", "Probabilistic sampling map from OOI and tumour masks");
    add_common(s_psm, psm.common);
    s_psm->add_option("--ooi", psm.ooi, "OOI mask");
    s_psm->add_option("--tumor", psm.tumor, "Tumour ground-truth mask");
    s_psm->add_option("--out", psm.out, "Output combined map (float32)");
    s_psm->add_option("--organ-out", psm.organ_out, "Also write the organ map");
    s_psm->add_option("--tumor-out", psm.tumor_out, "Also write the tumour map");
    s_psm->add_option("--patch", psm.patch, "Patch size z,y,x")->delimiter(',');
    s_psm->add_option("--lambda", psm.lambda, "Tumour map weight in [0, 1]");
    s_psm->add_option("--mu", psm.mu, "Diversity weight (> 0)");
    s_psm->add_flag("--sigma-is-stddev", psm.sigma_is_stddev,
                    "Treat 0.1*size as standard deviations rather than variances");

    SampleArgs sample;
    auto* s_sample = app.add_subcommand("sample", "Draw patch centres from a sampling map");
    add_common(s_sample, sample.common);
    s_sample->add_option("--psm", sample.psm, "Sampling map volume");
    s_sample->add_option("--count", sample.count, "Number of centres (>= 1)");
    s_sample->add_option("--seed", sample.seed, "Random seed");
    s_sample->add_option("--out", sample.out, "Centres JSON (default: stdout)");
    s_sample->add_option("--image", sample.image, "Volume to cut patches from");
    s_sample->add_option("--patch-dir", sample.patch_dir, "Directory for patch volumes");
    s_sample->add_option("--patch", sample.patch, "Patch size z,y,x")->delimiter(',');
    s_sample->add_option("--pad", sample.pad, "Value for out-of-volume patch voxels");

    SslArgs sslm;
    auto* s_ssl = app.add_subcommand("ssl-mask", "Replace bowel-wall voxels with Gaussian noise");
    add_common(s_ssl, sslm.common);
    s_ssl->add_option("--ct", sslm.ct, "Intensity volume");
    s_ssl->add_option("--wall", sslm.wall, "Bowel-wall mask");
    s_ssl->add_option("--out", sslm.out, "Output masked volume");
    s_ssl->add_option("--seed", sslm.seed, "Random seed");
    s_ssl->add_option("--noise-mean", sslm.mean, "Noise mean");
    s_ssl->add_option("--noise-std", sslm.stddev, "Noise standard deviation");

    LossArgs lossa;
    auto* s_loss = app.add_subcommand("loss", "Dice, cross-entropy and anatomy-focalised loss");
    add_common(s_loss, lossa.common);
    s_loss->add_option("--gt", lossa.gt, "Ground-truth mask");
    s_loss->add_option("--pred", lossa.pred, "Soft prediction in [0, 1]");
    s_loss->add_option("--ooi", lossa.ooi, "OOI mask");
    s_loss->add_option("--out", lossa.out, "Output JSON (default: stdout)");

    MetricsArgs met;
    auto* s_met = app.add_subcommand("metrics", "Dice, precision, recall, NSD and HD95");
    add_common(s_met, met.common);
    s_met->add_option("--gt", met.gt, "Ground-truth mask");
    s_met->add_option("--pred", met.pred, "Predicted mask");
    s_met->add_option("--case-id", met.case_id, "Case identifier for the report");
    s_met->add_option("--cohort", met.cohort, "JSON list of {case_id, gt, pred}");
    s_met->add_option("--jobs", met.jobs, "Worker threads for cohorts");
    s_met->add_option("--nsd-tol", met.nsd_tol, "NSD tolerance in mm");
    s_met->add_option("--hd-penalty", met.hd_penalty, "HD95 when one mask is empty, mm");
    s_met->add_option("--out", met.out, "Output JSON lines (default: stdout)");

    PhantomArgs ph;
    auto* s_ph = app.add_subcommand("phantom", "Generate a synthetic abdomen phantom");
    add_common(s_ph, ph.common);
    s_ph->add_option("--spec", ph.spec, "Phantom spec JSON");
    s_ph->add_option("--seed", ph.seed, "Random seed");
    s_ph->add_option("--out-dir", ph.out_dir, "Output directory");
    s_ph->add_option("--format", ph.format, "nii or raw");
    s_ph->add_option("--erase-deg", ph.erase_deg,
                     "Also write labels_erased with the colon removed between two arc angles")
        ->delimiter(',');

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (s_ooi->parsed()) return run_ooi(ooi, out);
        if (s_wall->parsed()) return run_wall(wall, out);
        if (s_psm->parsed()) return run_psm(psm, out);
        if (s_sample->parsed()) return run_sample(sample, out);
        if (s_ssl->parsed()) return run_ssl(sslm, out);
        if (s_loss->parsed()) return run_loss(lossa, out);
        if (s_met->parsed()) return run_metrics(met, out);
        if (s_ph->parsed()) return run_phantom(ph, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const config::ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitProcessing;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace ag::cli
