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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "beamadapt/array.hpp"
#include "beamadapt/linkbudget.hpp"
#include "beamadapt/outage.hpp"
#include "beamadapt/uncertainty.hpp"

namespace beamadapt
{

// Beamwidth-to-aperture constant of a uniform linear aperture (3 dB width in
// radians times aperture length in wavelengths).
inline constexpr double kBeamwidthApertureConstant = 0.886;

enum class PolicyKind
{
    generalized,           // ellipse oriented and shaped by the full covariance
    axis_aligned_baseline, // marginal standard deviations only, no correlation
};

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

struct AdaptationPolicy
{
    PolicyKind kind = PolicyKind::generalized;
    double confidence_level = 0.95;
    double steer_offset_beta_deg = 0.0; // elevation of the steered beam (and of the mean DoA)

    void validate() const;
    Direction steer() const { return {steer_offset_beta_deg, 0.0}; }
};

/// Activation ellipse in element-index space.
///
/// m_a is the semi-axis (in element pitches) along the direction phi_deg,
/// measured from the row (azimuth) index axis towards the column index axis;
/// n_a is the perpendicular semi-axis. Normalised so that m_a >= n_a.
struct AntennaEllipse
{
    double m_a;
    double n_a;
    double phi_deg;
    double scale = 1.0;

    void validate() const;
};

struct AntennaCounts
{
    int m_a;
    int n_a;
};

// Largest semi-aperture M (elements) with 2M elements still producing a 3 dB
// beam at least full_width_deg wide: floor(0.886 / (2 w spacing cos(beta))),
// w in radians. Unclamped.
int semi_aperture_for_beamwidth(double full_width_deg, double spacing_wavelengths, double beta_deg);

// Semi-axis counts for a confidence ellipse. The narrow confidence axis gives
// m_a (the larger count) and the wide axis gives n_a; both clamped to
// [1, max(1, min(rows, cols) / 2)].
AntennaCounts required_counts(const ConfidenceEllipse &ellipse, const PlanarArrayGeometry &geom, double beta_deg);

struct MaskSelection
{
    ActivationMask mask;
    bool fallback; // ellipse held no element; the centre-most symmetric pair was used
};

// Element (m, n), centred indices, is active iff
//   (m cos phi + n sin phi)^2 / (s m_a)^2 + (m sin phi - n cos phi)^2 / (s n_a)^2 <= 1.
MaskSelection activation_mask(const PlanarArrayGeometry &geom, const AntennaEllipse &ellipse);

// Antenna ellipse for a confidence ellipse: the wide confidence axis gets the
// short aperture, so the m_a axis lies perpendicular to the confidence major axis.
AntennaEllipse antenna_ellipse(const ConfidenceEllipse &confidence, const PlanarArrayGeometry &geom, double beta_deg);

// Axis-aligned confidence ellipse from the marginals alone (rho ignored).
ConfidenceEllipse baseline_confidence_ellipse(const AngularCovariance &cov, double confidence_level);

AntennaEllipse baseline_ellipse(const AngularCovariance &cov, double confidence_level, const PlanarArrayGeometry &geom,
                                double beta_deg);
AntennaEllipse generalized_ellipse(const AngularCovariance &cov, double confidence_level,
                                   const PlanarArrayGeometry &geom, double beta_deg);
AntennaEllipse policy_ellipse(const AdaptationPolicy &policy, const AngularCovariance &cov,
                              const PlanarArrayGeometry &geom);

struct MaskCandidate
{
    double scale;
    ActivationMask mask;
    bool fallback;
};

// Every distinct mask produced by scaling the ellipse over (0, 1], ordered by
// scale (and so by strictly increasing active count). Elements whose critical
// scales agree to 1e-10 relative enter together.
std::vector<MaskCandidate> mask_family(const PlanarArrayGeometry &geom, const AntennaEllipse &ellipse);

/// Everything the outage search needs about one link.
struct LinkScenario
{
    PlanarArrayGeometry geom;
    ElementPattern pattern;
    LinkBudget link;
    AngularCovariance cov;
    IntegrationGrid grid;
    unsigned threads = 0;
};

/// Outages of every family member at a list of gain thresholds.
struct FamilyEvaluation
{
    std::vector<MaskCandidate> candidates;
    std::vector<double> g0_db;
    std::vector<std::vector<double>> outage; // [candidate][threshold]
    // Largest g0 meeting outage_threshold for each candidate; empty when no
    // outage threshold was requested.
    std::vector<double> critical_gain_db;
    std::optional<double> outage_threshold;
};

FamilyEvaluation evaluate_family(const LinkScenario &scenario, const AdaptationPolicy &policy,
                                 std::span<const double> g0_db, std::optional<double> outage_threshold);

struct FeasibleRange
{
    bool feasible;
    std::size_t n_min; // 0 when infeasible
    std::size_t n_max;
};

struct OptimalCount
{
    std::size_t count;
    double outage;
    double scale;
    bool saturated; // every candidate is in full outage; the largest one is reported
};

// Outages closer than this are treated as equal when picking the optimum.
inline constexpr double kOutageTieTolerance = 1e-12;

FeasibleRange feasible_range_at(const FamilyEvaluation &eval, std::size_t threshold_index, double outage_threshold);
OptimalCount optimal_count_at(const FamilyEvaluation &eval, std::size_t threshold_index);

// Largest distance at which some candidate meets the outage threshold given to
// evaluate_family.
double max_feasible_distance(const FamilyEvaluation &eval, const LinkBudget &link);

FeasibleRange feasible_antenna_range(const LinkScenario &scenario, const AdaptationPolicy &policy, double distance_m,
                                     double outage_threshold);
OptimalCount optimal_antenna_count(const LinkScenario &scenario, const AdaptationPolicy &policy, double distance_m);

} // namespace beamadapt
