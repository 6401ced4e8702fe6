// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "gsforge/augment.hpp"
#include "gsforge/labeler.hpp"
#include "gsforge/renderer.hpp"
#include "gsforge/view_synth.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace gsforge {

// Everything the pipeline stages consume. Defaults here are the pipeline
// defaults; a config file overrides them, CLI flags override the file.
struct PipelineConfig {
    std::uint64_t seed = 0;
    bool seed_set = false; // whether the file or a flag pinned the seed
    int jobs = 0;          // 0 = library default

    std::string depth_mode = "plane"; // alpha|dominant|plane|all (render), + analytic (eval)
    RenderSettings render;

    SynthSettings synth;
    double tau_depth_auto_factor = 3.0; // tau_depth = factor * median valid depth when 0

    ManifestSettings manifest;
    std::size_t eval_pairs = 100;

    // align_math defaults
    double infonce_tau = 0.07;
    double lambda_v = 1.0;
    double lambda_q = 1.0;
    std::string negative_pool = "intra"; // intra|cross

    bool augment_enabled = false;
    AugmentRecipe augment;
};

// Flat `key = value` file, UTF-8, '#' comments. Unknown keys are rejected
// with file:line diagnostics; values are validated eagerly.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

// Applies one key=value assignment (shared by file parsing and tests).
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& where);

std::vector<OverlapBin> parse_overlap_bins(const std::string& text); // "0.1:0.3,0.3:0.5,..."
std::string format_overlap_bins(const std::vector<OverlapBin>& bins);

} // namespace gsforge
