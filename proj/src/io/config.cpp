// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#include "gsforge/io/config.hpp"

#include "gsforge/error.hpp"
#include "gsforge/io/file_util.hpp"

#include <charconv>
#include <sstream>

namespace gsforge {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& where) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return d;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + v + "'");
    }
}

std::int64_t to_int(const std::string& v, const std::string& where) {
    try {
        std::size_t used = 0;
        const std::int64_t i = std::stoll(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return i;
    } catch (const std::exception&) {
        throw ConfigError(where + ": not an integer: '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "off" || v == "0") {
        return false;
    }
    throw ConfigError(where + ": not a boolean: '" + v + "'");
}

template <typename Op>
Op& ensure_op(AugmentRecipe& recipe) {
    for (auto& op : recipe.ops) {
        if (auto* p = std::get_if<Op>(&op)) {
            return *p;
        }
    }
    recipe.ops.emplace_back(Op{});
    return std::get<Op>(recipe.ops.back());
}

} // namespace

std::vector<OverlapBin> parse_overlap_bins(const std::string& text) {
    std::vector<OverlapBin> bins;
    std::istringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        const auto colon = part.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("overlap bin '" + part + "' must be lo:hi");
        }
        OverlapBin b;
        b.lo = to_double(trim(part.substr(0, colon)), "overlap_bins");
        b.hi = to_double(trim(part.substr(colon + 1)), "overlap_bins");
        if (!(b.lo < b.hi)) {
            throw ConfigError("overlap bin '" + part + "' must have lo < hi");
        }
        bins.push_back(b);
    }
    if (bins.empty()) {
        throw ConfigError("overlap_bins: no bins given");
    }
    return bins;
}

std::string format_overlap_bins(const std::vector<OverlapBin>& bins) {
    std::string out;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (i) {
            out += ",";
        }
        std::ostringstream ss;
        ss << bins[i].lo << ":" << bins[i].hi;
        out += ss.str();
    }
    return out;
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& where) {
    if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(to_int(value, where));
        cfg.seed_set = true;
    } else if (key == "jobs") {
        cfg.jobs = static_cast<int>(to_int(value, where));
    } else if (key == "depth_mode") {
        if (value != "alpha" && value != "dominant" && value != "plane" && value != "all" &&
            value != "analytic") {
            throw ConfigError(where + ": unknown depth_mode '" + value + "'");
        }
        cfg.depth_mode = value;
        if (value != "all" && value != "analytic") {
            cfg.render.depth_mode = depth_mode_from_name(value);
        }
    } else if (key == "tau") {
        cfg.render.tau = to_double(value, where);
    } else if (key == "tau_alpha") {
        cfg.render.tau_alpha = to_double(value, where);
    } else if (key == "tau_depth") {
        cfg.render.tau_depth = to_double(value, where);
    } else if (key == "tau_depth_auto_factor") {
        cfg.tau_depth_auto_factor = to_double(value, where);
    } else if (key == "z_near") {
        cfg.render.z_near = to_double(value, where);
        cfg.manifest.z_near = cfg.render.z_near;
    } else if (key == "tile_size") {
        cfg.render.tile_size = static_cast<int>(to_int(value, where));
    } else if (key == "rot_jitter_max") {
        cfg.synth.perturb.rot_jitter_max = to_double(value, where);
    } else if (key == "trans_jitter_max") {
        cfg.synth.perturb.trans_jitter_max = to_double(value, where);
    } else if (key == "scale_lo") {
        cfg.synth.perturb.scale_lo = to_double(value, where);
    } else if (key == "scale_hi") {
        cfg.synth.perturb.scale_hi = to_double(value, where);
    } else if (key == "per_view_count") {
        cfg.synth.per_view_count = static_cast<int>(to_int(value, where));
    } else if (key == "extra_ratio") {
        cfg.synth.extra_ratio = to_double(value, where);
    } else if (key == "filter_scope") {
        if (value == "global") {
            cfg.synth.scope = FilterScope::Global;
        } else if (value == "per_view") {
            cfg.synth.scope = FilterScope::PerTrainView;
        } else {
            throw ConfigError(where + ": filter_scope must be global|per_view");
        }
    } else if (key == "rel_tol") {
        cfg.manifest.rel_tol = to_double(value, where);
    } else if (key == "grid_step") {
        cfg.manifest.grid_step = static_cast<int>(to_int(value, where));
    } else if (key == "overlap_bins") {
        cfg.manifest.bins = parse_overlap_bins(value);
    } else if (key == "keep_unbinned") {
        cfg.manifest.keep_unbinned = to_bool(value, where);
    } else if (key == "eval_pairs") {
        cfg.eval_pairs = static_cast<std::size_t>(to_int(value, where));
    } else if (key == "infonce_tau") {
        cfg.infonce_tau = to_double(value, where);
    } else if (key == "lambda_v") {
        cfg.lambda_v = to_double(value, where);
    } else if (key == "lambda_q") {
        cfg.lambda_q = to_double(value, where);
    } else if (key == "negative_pool") {
        if (value != "intra" && value != "cross") {
            throw ConfigError(where + ": negative_pool must be intra|cross");
        }
        cfg.negative_pool = value;
    } else if (key == "augment") {
        cfg.augment_enabled = to_bool(value, where);
    } else if (key == "augment_gain_lo") {
        ensure_op<ColorJitterOp>(cfg.augment).gain_lo = to_double(value, where);
    } else if (key == "augment_gain_hi") {
        ensure_op<ColorJitterOp>(cfg.augment).gain_hi = to_double(value, where);
    } else if (key == "augment_bias_lo") {
        ensure_op<ColorJitterOp>(cfg.augment).bias_lo = to_double(value, where);
    } else if (key == "augment_bias_hi") {
        ensure_op<ColorJitterOp>(cfg.augment).bias_hi = to_double(value, where);
    } else if (key == "augment_gamma_lo") {
        ensure_op<GammaOp>(cfg.augment).lo = to_double(value, where);
    } else if (key == "augment_gamma_hi") {
        ensure_op<GammaOp>(cfg.augment).hi = to_double(value, where);
    } else if (key == "augment_blur_max") {
        ensure_op<MotionBlurOp>(cfg.augment).max_len = static_cast<int>(to_int(value, where));
    } else if (key == "augment_noise_lo") {
        ensure_op<IsoNoiseOp>(cfg.augment).strength_lo = to_double(value, where);
    } else if (key == "augment_noise_hi") {
        ensure_op<IsoNoiseOp>(cfg.augment).strength_hi = to_double(value, where);
    } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    const auto bytes = read_file(path);
    std::istringstream in(std::string(bytes.begin(), bytes.end()));
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError(where + ": empty key or value");
        }
        apply_config_entry(base, key, value, where);
    }

    // Eager validation so bad values fail at load, not mid-pipeline.
    base.render.validate();
    base.synth.perturb.validate();
    base.augment.validate();
    if (!(base.manifest.rel_tol > 0.0)) {
        throw ConfigError(path.string() + ": rel_tol must be positive");
    }
    if (base.manifest.grid_step < 1) {
        throw ConfigError(path.string() + ": grid_step must be at least 1");
    }
    return base;
}

} // namespace gsforge
