#include "ag/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <string_view>

namespace ag::config {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
    if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) {
            throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
void read_key(const json& j, const char* key, T& out, std::string_view where) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string(where) + "." + key + ": " + e.what());
    }
}

std::array<double, 3> read_triple(const json& j, const char* key, std::string_view where) {
    std::vector<double> v;
    read_key(j, key, v, where);
    if (v.size() != 3) {
        throw ConfigError(std::string(where) + "." + key + ": expected 3 numbers");
    }
    return {v[0], v[1], v[2]};
}

json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void read_intensity(const json& j, const char* key, phantom::Intensity& out) {
    if (!j.contains(key)) return;
    const json& s = j.at(key);
    const std::string where = std::string("phantom.") + key;
    reject_unknown(s, {"mean", "stddev"}, where);
    read_key(s, "mean", out.mean, where);
    read_key(s, "stddev", out.stddev, where);
}

}  // namespace

maskgen::OrganConfig parse_organ_config(const json& j, maskgen::OrganConfig base) {
    constexpr std::string_view where = "organ";
    reject_unknown(j, {"set_ts", "set_word", "dilate_times", "elem", "wall_r_out", "wall_r_in"},
                   where);
    read_key(j, "set_ts", base.set_ts, where);
    read_key(j, "set_word", base.set_word, where);
    read_key(j, "dilate_times", base.dilate_times, where);
    read_key(j, "wall_r_out", base.wall_r_out, where);
    read_key(j, "wall_r_in", base.wall_r_in, where);
    if (j.contains("elem")) {
        std::string name;
        read_key(j, "elem", name, where);
        try {
            base.elem = morph::struct_elem_from_string(name);
        } catch (const InvalidArgument& e) {
            throw ConfigError(std::string("organ.elem: ") + e.what());
        }
    }
    if (base.dilate_times < 0 || base.wall_r_out < 0 || base.wall_r_in < 0) {
        throw ConfigError("organ: dilate_times and wall radii must be >= 0");
    }
    return base;
}

PipelineConfig parse_pipeline_config(const json& j) {
    PipelineConfig cfg;
    if (j.is_object() && j.contains("set_ts")) {
        cfg.organ = parse_organ_config(j);
        return cfg;
    }
    constexpr std::string_view where = "config";
    reject_unknown(j, {"organ", "patch", "lambda", "mu", "noise", "loss", "nsd_tol_mm",
                       "hd_penalty_mm", "seed"},
                   where);
    if (j.contains("organ")) cfg.organ = parse_organ_config(j.at("organ"));
    if (j.contains("patch")) {
        const json& p = j.at("patch");
        reject_unknown(p, {"size", "sigma_is_stddev"}, "patch");
        if (p.contains("size")) {
            std::vector<std::int64_t> size;
            read_key(p, "size", size, "patch");
            if (size.size() != 3) throw ConfigError("patch.size: expected [dz, dy, dx]");
            cfg.patch.size = {size[0], size[1], size[2]};
        }
        read_key(p, "sigma_is_stddev", cfg.patch.sigma_is_stddev, "patch");
    }
    read_key(j, "lambda", cfg.lambda, where);
    read_key(j, "mu", cfg.mu, where);
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        reject_unknown(n, {"mean", "stddev"}, "noise");
        read_key(n, "mean", cfg.noise.mean, "noise");
        read_key(n, "stddev", cfg.noise.stddev, "noise");
    }
    if (j.contains("loss")) {
        const json& l = j.at("loss");
        reject_unknown(l, {"dice_eps", "ce_eps", "dice_weight", "ce_weight"}, "loss");
        read_key(l, "dice_eps", cfg.loss.dice_eps, "loss");
        read_key(l, "ce_eps", cfg.loss.ce_eps, "loss");
        read_key(l, "dice_weight", cfg.loss.dice_weight, "loss");
        read_key(l, "ce_weight", cfg.loss.ce_weight, "loss");
    }
    read_key(j, "nsd_tol_mm", cfg.nsd_tol_mm, where);
    read_key(j, "hd_penalty_mm", cfg.hd_penalty_mm, where);
    if (j.contains("seed") && !j.at("seed").is_null()) {
        std::uint64_t seed = 0;
        read_key(j, "seed", seed, where);
        cfg.seed = seed;
    }
    return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
    return parse_pipeline_config(read_file(path));
}

nlohmann::ordered_json to_json(const maskgen::OrganConfig& organ) {
    nlohmann::ordered_json j;
    j["set_ts"] = organ.set_ts;
    j["set_word"] = organ.set_word;
    j["dilate_times"] = organ.dilate_times;
    j["elem"] = std::string(morph::to_string(organ.elem));
    j["wall_r_out"] = organ.wall_r_out;
    j["wall_r_in"] = organ.wall_r_in;
    return j;
}

nlohmann::ordered_json to_json(const PipelineConfig& cfg) {
    nlohmann::ordered_json j;
    j["organ"] = to_json(cfg.organ);
    j["patch"] = {{"size", {cfg.patch.size.z, cfg.patch.size.y, cfg.patch.size.x}},
                  {"sigma_is_stddev", cfg.patch.sigma_is_stddev}};
    j["lambda"] = cfg.lambda;
    j["mu"] = cfg.mu;
    j["noise"] = {{"mean", cfg.noise.mean}, {"stddev", cfg.noise.stddev}};
    j["loss"] = {{"dice_eps", cfg.loss.dice_eps},
                 {"ce_eps", cfg.loss.ce_eps},
                 {"dice_weight", cfg.loss.dice_weight},
                 {"ce_weight", cfg.loss.ce_weight}};
    j["nsd_tol_mm"] = cfg.nsd_tol_mm;
    j["hd_penalty_mm"] = cfg.hd_penalty_mm;
    if (cfg.seed) {
        j["seed"] = *cfg.seed;
    } else {
        j["seed"] = nullptr;
    }
    return j;
}

phantom::PhantomSpec parse_phantom_spec(const json& j) {
    phantom::PhantomSpec s;
    constexpr std::string_view where = "phantom";
    reject_unknown(j, {"dims", "spacing", "arc_radius_mm", "tube_radius_mm",
                       "wall_thickness_mm", "tumor_radius_mm", "tumor_angle_deg",
                       "n_distractors", "background", "lumen", "wall", "tumor", "organ",
                       "seed"},
                   where);
    if (j.contains("dims")) {
        const auto d = read_triple(j, "dims", where);
        s.dims = {static_cast<std::int64_t>(d[0]), static_cast<std::int64_t>(d[1]),
                  static_cast<std::int64_t>(d[2])};
    }
    if (j.contains("spacing")) {
        const auto sp = read_triple(j, "spacing", where);
        s.spacing = {sp[0], sp[1], sp[2]};
    }
    read_key(j, "arc_radius_mm", s.arc_radius_mm, where);
    read_key(j, "tube_radius_mm", s.tube_radius_mm, where);
    read_key(j, "wall_thickness_mm", s.wall_thickness_mm, where);
    read_key(j, "tumor_radius_mm", s.tumor_radius_mm, where);
    read_key(j, "tumor_angle_deg", s.tumor_angle_deg, where);
    read_key(j, "n_distractors", s.n_distractors, where);
    read_intensity(j, "background", s.background);
    read_intensity(j, "lumen", s.lumen);
    read_intensity(j, "wall", s.wall);
    read_intensity(j, "tumor", s.tumor);
    read_intensity(j, "organ", s.organ);
    read_key(j, "seed", s.seed, where);
    return s;
}

phantom::PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
    return parse_phantom_spec(read_file(path));
}

nlohmann::ordered_json to_json(const phantom::PhantomSpec& s) {
    auto level = [](const phantom::Intensity& i) {
        return nlohmann::ordered_json{{"mean", i.mean}, {"stddev", i.stddev}};
    };
    nlohmann::ordered_json j;
    j["dims"] = {s.dims.nz, s.dims.ny, s.dims.nx};
    j["spacing"] = {s.spacing.sz, s.spacing.sy, s.spacing.sx};
    j["arc_radius_mm"] = s.arc_radius_mm;
    j["tube_radius_mm"] = s.tube_radius_mm;
    j["wall_thickness_mm"] = s.wall_thickness_mm;
    j["tumor_radius_mm"] = s.tumor_radius_mm;
    j["tumor_angle_deg"] = s.tumor_angle_deg;
    j["n_distractors"] = s.n_distractors;
    j["background"] = level(s.background);
    j["lumen"] = level(s.lumen);
    j["wall"] = level(s.wall);
    j["tumor"] = level(s.tumor);
    j["organ"] = level(s.organ);
    j["seed"] = s.seed;
    return j;
}

}  // namespace ag::config
