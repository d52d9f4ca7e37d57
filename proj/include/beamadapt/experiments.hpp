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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "beamadapt/adaptation.hpp"

namespace beamadapt
{

inline constexpr std::string_view kToolVersion = "1.0.0";

enum class PolicySelection
{
    generalized,
    baseline,
    both,
};

std::string_view to_string(PolicySelection selection);
std::optional<PolicySelection> parse_policy_selection(std::string_view name);

struct SweepSpec
{
    double distance_min_m = 10.0;
    double distance_max_m = 4000.0;
    int distance_points = 60; // logarithmically spaced, both ends included

    double rho_min = 0.0;
    double rho_max = 0.9;
    double rho_step = 0.1;
    double correlation_distance_m = 2000.0;

    double phi_min_deg = 0.0;
    double phi_max_deg = 90.0;
    double phi_step_deg = 5.0;
    double orientation_distance_m = 2000.0;

    bool operator==(const SweepSpec &) const = default;
};

/// Resolved experiment configuration. Defaults reproduce the reference
/// scenario: 16x16 half-wavelength array, 28 GHz link, sigma = 2 deg, rho = 0.5.
struct ExperimentConfig
{
    LinkBudget link;

    int rows = 16;
    int cols = 16;
    double spacing_wavelengths = 0.5;

    ElementPattern element;

    double sigma_theta_deg = 2.0;
    double sigma_psi_deg = 2.0;
    double rho = 0.5;
    double confidence_level = 0.95;

    double outage_threshold = 0.05;
    IntegrationGrid grid;
    std::uint64_t mc_samples = 1000000;

    double steer_offset_beta_deg = 0.0;

    SweepSpec sweep;

    std::string output_dir = "results";
    bool plots = false;
    PolicySelection policy = PolicySelection::both;

    std::uint64_t seed = 1;
    unsigned threads = 0; // 0: hardware concurrency

    // Throws ConfigError naming the first offending key.
    void validate() const;

    PlanarArrayGeometry geometry() const;
    AngularCovariance covariance() const;
    LinkScenario scenario() const;
    AdaptationPolicy policy_for(PolicyKind kind) const;
    std::vector<PolicyKind> policies() const; // generalized first

    bool operator==(const ExperimentConfig &) const = default;
};

// INI text: "[section]" headers, "key = value" lines, ';' or '#' comments.
// Keys not present in the text keep their value from base. Unknown sections or
// keys, malformed values and failed validation throw ConfigError.
ExperimentConfig parse_config(std::string_view text, const ExperimentConfig &base = {});
ExperimentConfig load_config(const std::filesystem::path &path, const ExperimentConfig &base = {});

// Applies one "section.key" = value override (the CLI --set flag).
void apply_override(ExperimentConfig &cfg, std::string_view dotted_key, std::string_view value);

// Full configuration in the same INI dialect; parse_config(render_config(c)) == c.
// The manifest form adds the tool version to the [run] section.
std::string render_config(const ExperimentConfig &cfg, bool manifest = false);

/// One row of a sweep: the outcome for one policy at one swept value.
struct SweepRecord
{
    double swept_value;
    PolicyKind policy;
    double g0_db;
    bool feasible;
    std::size_t n_min; // 0 when infeasible
    std::size_t n_max;
    std::size_t optimal_count;
    double outage; // at the optimal count
    bool saturated;
};

struct PowerSavingPoint
{
    double distance_m;
    std::size_t n_min_generalized;
    std::size_t n_min_baseline;
    double saving; // 1 - n_gen / n_base
};

struct DistanceSweepResult
{
    std::vector<SweepRecord> records; // sorted by distance, generalized first
    std::optional<double> max_distance_generalized_m;
    std::optional<double> max_distance_baseline_m;
    std::optional<double> coverage_distance_improvement; // d_gen / d_base - 1
    std::optional<double> coverage_area_improvement;     // (d_gen / d_base)^2 - 1
    std::vector<PowerSavingPoint> power_saving;           // distances where both policies are feasible
    std::optional<double> peak_power_saving;
    std::optional<double> peak_power_saving_distance_m;
};

struct CorrelationSweepResult
{
    double distance_m;
    std::vector<SweepRecord> records; // swept value is rho
};

struct OrientationGap
{
    double phi_deg;
    double gap; // baseline outage - generalized outage
};

struct OrientationSweepResult
{
    double distance_m;
    double major_variance;
    double minor_variance;
    std::vector<SweepRecord> records; // swept value is the orientation in degrees
    std::vector<OrientationGap> gaps; // present when both policies run
    std::optional<double> argmax_gap_phi_deg;
};

std::vector<double> distance_grid(const SweepSpec &sweep);
std::vector<double> correlation_grid(const SweepSpec &sweep);
std::vector<double> orientation_grid(const SweepSpec &sweep);

DistanceSweepResult run_distance_sweep(const ExperimentConfig &cfg);
CorrelationSweepResult run_correlation_sweep(const ExperimentConfig &cfg);
OrientationSweepResult run_orientation_sweep(const ExperimentConfig &cfg);

// True when no record of the sweep is feasible.
bool infeasible_everywhere(const std::vector<SweepRecord> &records);

// CSV / SVG / manifest emission into cfg.output_dir. Every writer returns the
// paths it created. Throws IoError naming the path on failure.
std::vector<std::filesystem::path> emit_outputs(const DistanceSweepResult &result, const ExperimentConfig &cfg);
std::vector<std::filesystem::path> emit_outputs(const CorrelationSweepResult &result, const ExperimentConfig &cfg);
std::vector<std::filesystem::path> emit_outputs(const OrientationSweepResult &result, const ExperimentConfig &cfg);
std::filesystem::path write_manifest(const ExperimentConfig &cfg, std::string_view command);

std::string format_float(double value); // 9 significant digits

} // namespace beamadapt
