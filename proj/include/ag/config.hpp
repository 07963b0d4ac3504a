#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ag/errors.hpp"
#include "ag/loss.hpp"
#include "ag/maskgen.hpp"
#include "ag/phantom.hpp"
#include "ag/sampling.hpp"
#include "ag/ssl.hpp"

namespace ag::config {

/// Malformed or unknown configuration keys; the CLI maps this to a usage error.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct PipelineConfig {
    maskgen::OrganConfig organ;
    sampling::PatchSpec patch;
    double lambda = 0.33;
    double mu = 1.0;
    ssl::NoiseSpec noise;
    loss::LossConfig loss;
    double nsd_tol_mm = 4.0;
    double hd_penalty_mm = 1000.0;
    std::optional<std::uint64_t> seed;
};

/// Parses the flat organ schema
/// {"set_ts":[..],"set_word":[..],"dilate_times":3,"elem":"face6","wall_r_out":1,"wall_r_in":1}.
/// Missing keys keep the values already in `base`.
maskgen::OrganConfig parse_organ_config(const nlohmann::json& j, maskgen::OrganConfig base = {});

/// Full pipeline config. A document whose top level holds "set_ts" is read as
/// an organ-only config.
PipelineConfig parse_pipeline_config(const nlohmann::json& j);
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const maskgen::OrganConfig& organ);
nlohmann::ordered_json to_json(const PipelineConfig& cfg);

phantom::PhantomSpec parse_phantom_spec(const nlohmann::json& j);
phantom::PhantomSpec load_phantom_spec(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const phantom::PhantomSpec& spec);

}  // namespace ag::config
