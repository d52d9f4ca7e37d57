// SPDX-License-Identifier: Apache-2.0
//
// beamadapt: pose-aware beamwidth adaptation for planar receive arrays
// Copyright (C) 2026 The beamadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end for the sweep drivers.
//
// Configuration precedence, lowest first: built-in defaults, --config file,
// --set overrides in order, dedicated flags (--out, --seed, --policy, ...).

#include <CLI11.hpp>
#include <fmt/format.h>
#include <iostream>

#include "beamadapt/errors.hpp"
#include "beamadapt/experiments.hpp"

namespace
{

using namespace beamadapt;

enum ExitCode
{
    kOk = 0,
    kConfigError = 2,
    kInfeasible = 3,
    kIoError = 4,
};

struct GlobalOptions
{
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy;
    std::optional<unsigned> threads;
    bool plots = false;
};

ExperimentConfig resolve(const GlobalOptions &opt)
{
    ExperimentConfig cfg;
    if (!opt.config_path.empty())
        cfg = load_config(opt.config_path);
    for (const auto &item : opt.overrides)
    {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError(item, "--set expects section.key=value");
        apply_override(cfg, item.substr(0, eq), item.substr(eq + 1));
    }
    if (opt.out)
        cfg.output_dir = *opt.out;
    if (opt.seed)
        cfg.seed = *opt.seed;
    if (opt.policy)
    {
        const auto p = parse_policy_selection(*opt.policy);
        if (!p)
            throw ConfigError("output.policy", fmt::format("unknown policy '{}'", *opt.policy));
        cfg.policy = *p;
    }
    if (opt.threads)
        cfg.threads = *opt.threads;
    if (opt.plots)
        cfg.plots = true;
    cfg.validate();
    return cfg;
}

void report_written(const std::vector<std::filesystem::path> &paths, const std::filesystem::path &manifest)
{
    for (const auto &p : paths)
        fmt::print("wrote {}\n", p.string());
    fmt::print("wrote {}\n", manifest.string());
}

std::string opt_str(const std::optional<double> &v) { return v ? format_float(*v) : std::string("n/a"); }

int sweep_distance(const ExperimentConfig &cfg)
{
    const auto result = run_distance_sweep(cfg);
    report_written(emit_outputs(result, cfg), write_manifest(cfg, "sweep-distance"));
    fmt::print("max feasible distance (m): generalized {}, baseline {}\n", opt_str(result.max_distance_generalized_m),
               opt_str(result.max_distance_baseline_m));
    if (result.coverage_distance_improvement)
        fmt::print("coverage distance improvement {:.2f}%, area improvement {:.2f}%\n",
                   100.0 * *result.coverage_distance_improvement, 100.0 * *result.coverage_area_improvement);
    if (result.peak_power_saving)
        fmt::print("peak power saving {:.2f}% at {} m\n", 100.0 * *result.peak_power_saving,
                   format_float(*result.peak_power_saving_distance_m));
    return infeasible_everywhere(result.records) ? kInfeasible : kOk;
}

int sweep_correlation(const ExperimentConfig &cfg)
{
    const auto result = run_correlation_sweep(cfg);
    report_written(emit_outputs(result, cfg), write_manifest(cfg, "sweep-correlation"));
    return infeasible_everywhere(result.records) ? kInfeasible : kOk;
}

int sweep_orientation(const ExperimentConfig &cfg)
{
    const auto result = run_orientation_sweep(cfg);
    report_written(emit_outputs(result, cfg), write_manifest(cfg, "sweep-orientation"));
    if (result.argmax_gap_phi_deg)
        fmt::print("largest outage gap at phi = {} deg\n", format_float(*result.argmax_gap_phi_deg));
    return infeasible_everywhere(result.records) ? kInfeasible : kOk;
}

int single_outage(const ExperimentConfig &cfg, double distance_m, std::uint64_t mc_samples)
{
    const double g0 = required_gain_threshold(cfg.link, distance_m);
    const auto scenario = cfg.scenario();
    fmt::print("distance_m = {}\ng0_db = {}\n", format_float(distance_m), format_float(g0));
    for (const PolicyKind kind : cfg.policies())
    {
        const auto policy = cfg.policy_for(kind);
        const auto eval = evaluate_family(scenario, policy, std::span<const double>(&g0, 1), std::nullopt);
        const auto range = feasible_range_at(eval, 0, cfg.outage_threshold);
        const auto best = optimal_count_at(eval, 0);
        fmt::print("[{}]\nfeasible = {}\nn_min = {}\nn_max = {}\noptimal_count = {}\noutage = {}\n", to_string(kind),
                   range.feasible, range.n_min, range.n_max, best.count, format_float(best.outage));
        if (mc_samples > 0)
        {
            const auto it = std::find_if(eval.candidates.begin(), eval.candidates.end(),
                                         [&](const MaskCandidate &c) { return c.scale == best.scale; });
            const auto mc = outage_probability_mc(scenario.geom, scenario.pattern, it->mask, policy.steer(),
                                                  scenario.cov, policy.steer(), g0, mc_samples, cfg.seed);
            fmt::print("outage_mc = {}\noutage_mc_stderr = {}\n", format_float(mc.probability),
                       format_float(mc.standard_error));
        }
    }
    return kOk;
}

int print_mask(const ExperimentConfig &cfg, double scale)
{
    const auto geom = cfg.geometry();
    for (const PolicyKind kind : cfg.policies())
    {
        auto ellipse = policy_ellipse(cfg.policy_for(kind), cfg.covariance(), geom);
        ellipse.scale = scale;
        const auto selection = activation_mask(geom, ellipse);
        fmt::print("[{}] m_a = {} n_a = {} phi_deg = {} scale = {} active = {}{}\n{}", to_string(kind),
                   format_float(ellipse.m_a), format_float(ellipse.n_a), format_float(ellipse.phi_deg),
                   format_float(scale), selection.mask.active_count(), selection.fallback ? " (fallback pair)" : "",
                   selection.mask.to_ascii());
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Beamwidth adaptation under correlated direction-of-arrival uncertainty"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--set", opt.overrides, "Override one key, section.key=value (repeatable)");
    app.add_option("--out", opt.out, "Output directory");
    app.add_option("--seed", opt.seed, "Random seed");
    app.add_option("--policy", opt.policy, "generalized, baseline or both");
    app.add_option("--threads", opt.threads, "Worker threads (0: all cores)");
    app.add_flag("--plots", opt.plots, "Also write SVG plots");

    auto *distance = app.add_subcommand("sweep-distance", "Allowable and optimal antenna counts versus distance");
    auto *correlation = app.add_subcommand("sweep-correlation", "Optimal outage versus correlation coefficient");
    auto *orientation = app.add_subcommand("sweep-orientation", "Optimal outage versus covariance orientation");

    double outage_distance = 0.0;
    std::uint64_t mc_samples = 0;
    auto *outage = app.add_subcommand("outage", "Optimal count and outage at one distance");
    outage->add_option("--distance", outage_distance, "Link distance in metres")->required();
    outage->add_option("--mc-samples", mc_samples, "Also run a Monte Carlo check with this many samples");

    double mask_scale = 1.0;
    auto *mask = app.add_subcommand("mask", "Print the activation masks as ASCII grids");
    mask->add_option("--scale", mask_scale, "Ellipse scale in (0, 1]")->check(CLI::Range(0.0, 1.0));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try
    {
        const ExperimentConfig cfg = resolve(opt);
        if (*distance)
            return sweep_distance(cfg);
        if (*correlation)
            return sweep_correlation(cfg);
        if (*orientation)
            return sweep_orientation(cfg);
        if (*outage)
        {
            if (!(outage_distance > 0.0))
                throw ConfigError("--distance", "must be positive");
            if (mc_samples != 0 && mc_samples < 10000)
                throw ConfigError("--mc-samples", "must be 0 or >= 10000");
            return single_outage(cfg, outage_distance, mc_samples);
        }
        if (*mask)
        {
            if (!(mask_scale > 0.0))
                throw ConfigError("--scale", "must lie in (0, 1]");
            return print_mask(cfg, mask_scale);
        }
    }
    catch (const ConfigError &e)
    {
        fmt::print(stderr, "config error: {}\n", e.what());
        return kConfigError;
    }
    catch (const IoError &e)
    {
        fmt::print(stderr, "i/o error: {}\n", e.what());
        return kIoError;
    }
    catch (const DomainError &e)
    {
        fmt::print(stderr, "invalid input: {}\n", e.what());
        return kConfigError;
    }
    return kOk;
}
