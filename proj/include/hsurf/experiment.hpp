#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hsurf/curvature_field.hpp"
#include "hsurf/discrete_surface.hpp"

namespace hsurf {

struct RunOptions {
    std::string out_dir = ".";
    int resolution = 0; // 0 = command default
    bool quick = false;
    std::uint64_t seed = 0;
};

/// Validated experiment configuration: one command id plus its JSON
/// parameters.  Unknown keys are rejected up front.
struct ExperimentConfig {
    std::string command;
    nlohmann::json params;

    static ExperimentConfig parse(const std::string& command, const nlohmann::json& params);
};

const std::vector<std::string>& command_names();

/// Executes a subcommand: computes, writes the artifacts under
/// opts.out_dir, and returns the JSON summary (also written there).
/// Throws ConfigError for invalid configs and Error subclasses for
/// computation failures.
nlohmann::json run_command(const ExperimentConfig& config, const RunOptions& opts);

/// Shared surface-spec parser ({"kind": "round-sphere" | ...}); the field
/// is needed for solved-graph kinds.
DiscreteSurface surface_from_json(const nlohmann::json& spec, const CurvatureField& field);

} // namespace hsurf
