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

#include "beamadapt/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "beamadapt/errors.hpp"

namespace beamadapt
{

std::string_view to_string(PolicyKind kind)
{
    switch (kind)
    {
    case PolicyKind::generalized: return "generalized";
    case PolicyKind::axis_aligned_baseline: return "baseline";
    }
    return "unknown";
}

std::optional<PolicyKind> parse_policy_kind(std::string_view name)
{
    if (name == "generalized")
        return PolicyKind::generalized;
    if (name == "baseline" || name == "axis_aligned_baseline")
        return PolicyKind::axis_aligned_baseline;
    return std::nullopt;
}

void AdaptationPolicy::validate() const
{
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw DomainError(fmt::format("confidence level must lie in (0, 1), got {}", confidence_level));
    if (!(std::abs(steer_offset_beta_deg) < 90.0))
        throw DomainError(fmt::format("steering offset must satisfy |beta| < 90 deg, got {}", steer_offset_beta_deg));
}

void AntennaEllipse::validate() const
{
    if (!(n_a > 0.0) || !(m_a >= n_a) || !std::isfinite(m_a))
        throw DomainError(fmt::format("antenna ellipse needs m_a >= n_a > 0, got ({}, {})", m_a, n_a));
    if (!(scale > 0.0 && scale <= 1.0))
        throw DomainError(fmt::format("antenna ellipse scale must lie in (0, 1], got {}", scale));
    if (!std::isfinite(phi_deg))
        throw DomainError("antenna ellipse orientation must be finite");
}

int semi_aperture_for_beamwidth(double full_width_deg, double spacing_wavelengths, double beta_deg)
{
    if (!(full_width_deg > 0.0))
        throw DomainError(fmt::format("beamwidth must be positive, got {}", full_width_deg));
    const double denom = 2.0 * deg_to_rad(full_width_deg) * spacing_wavelengths * std::cos(deg_to_rad(beta_deg));
    const double count = kBeamwidthApertureConstant / denom;
    // The slack keeps exact inversions of the beamwidth formula from flooring down.
    const double floored = std::floor(count + 1e-9);
    return floored > static_cast<double>(std::numeric_limits<int>::max()) ? std::numeric_limits<int>::max()
                                                                          : static_cast<int>(floored);
}

AntennaCounts required_counts(const ConfidenceEllipse &ellipse, const PlanarArrayGeometry &geom, double beta_deg)
{
    if (!(ellipse.semi_minor_deg > 0.0) || !(ellipse.semi_major_deg >= ellipse.semi_minor_deg))
        throw DomainError("confidence ellipse needs semi_major >= semi_minor > 0");
    if (!(std::abs(beta_deg) < 90.0))
        throw DomainError(fmt::format("steering offset must satisfy |beta| < 90 deg, got {}", beta_deg));
    const int upper = std::max(1, std::min(geom.rows(), geom.cols()) / 2);
    auto clamp = [&](int v) { return std::clamp(v, 1, upper); };
    return {clamp(semi_aperture_for_beamwidth(2.0 * ellipse.semi_minor_deg, geom.spacing(), beta_deg)),
            clamp(semi_aperture_for_beamwidth(2.0 * ellipse.semi_major_deg, geom.spacing(), beta_deg))};
}

namespace
{

// Normalised ellipse radius (q <= 1 inside) of every element at scale 1, row-major.
std::vector<double> element_radii(const PlanarArrayGeometry &geom, const AntennaEllipse &e)
{
    const CosSin cs = cos_sin_deg(e.phi_deg);
    std::vector<double> q(geom.size());
    for (int m = 0; m < geom.rows(); ++m)
        for (int n = 0; n < geom.cols(); ++n)
        {
            const double mc = geom.centered_row(m);
            const double nc = geom.centered_col(n);
            const double along = mc * cs.cos + nc * cs.sin;
            const double across = mc * cs.sin - nc * cs.cos;
            q[static_cast<std::size_t>(m * geom.cols() + n)] =
                along * along / (e.m_a * e.m_a) + across * across / (e.n_a * e.n_a);
        }
    return q;
}

} // namespace

MaskSelection activation_mask(const PlanarArrayGeometry &geom, const AntennaEllipse &ellipse)
{
    ellipse.validate();
    const CosSin cs = cos_sin_deg(ellipse.phi_deg);
    const double sm = ellipse.scale * ellipse.m_a;
    const double sn = ellipse.scale * ellipse.n_a;
    ActivationMask mask(geom.rows(), geom.cols());
    for (int m = 0; m < geom.rows(); ++m)
        for (int n = 0; n < geom.cols(); ++n)
        {
            const double mc = geom.centered_row(m);
            const double nc = geom.centered_col(n);
            const double along = mc * cs.cos + nc * cs.sin;
            const double across = mc * cs.sin - nc * cs.cos;
            if (along * along / (sm * sm) + across * across / (sn * sn) <= 1.0)
                mask.set(m, n, true);
        }
    if (mask.active_count() > 0)
        return {std::move(mask), false};

    const auto q = element_radii(geom, ellipse);
    const auto best = static_cast<int>(std::min_element(q.begin(), q.end()) - q.begin());
    const int m = best / geom.cols();
    const int n = best % geom.cols();
    mask.set(m, n, true);
    mask.set(geom.rows() - 1 - m, geom.cols() - 1 - n, true);
    return {std::move(mask), true};
}

AntennaEllipse antenna_ellipse(const ConfidenceEllipse &confidence, const PlanarArrayGeometry &geom, double beta_deg)
{
    const AntennaCounts counts = required_counts(confidence, geom, beta_deg);
    return {static_cast<double>(counts.m_a), static_cast<double>(counts.n_a),
            normalize_axis_angle(confidence.orientation_deg + 90.0), 1.0};
}

ConfidenceEllipse baseline_confidence_ellipse(const AngularCovariance &cov, double confidence_level)
{
    const double k = confidence_scale(confidence_level);
    if (cov.sigma_psi() >= cov.sigma_theta())
        return {0.0, k * cov.sigma_psi(), k * cov.sigma_theta(), confidence_level};
    return {90.0, k * cov.sigma_theta(), k * cov.sigma_psi(), confidence_level};
}

AntennaEllipse baseline_ellipse(const AngularCovariance &cov, double confidence_level, const PlanarArrayGeometry &geom,
                                double beta_deg)
{
    return antenna_ellipse(baseline_confidence_ellipse(cov, confidence_level), geom, beta_deg);
}

AntennaEllipse generalized_ellipse(const AngularCovariance &cov, double confidence_level,
                                   const PlanarArrayGeometry &geom, double beta_deg)
{
    return antenna_ellipse(confidence_ellipse(cov, confidence_level), geom, beta_deg);
}

AntennaEllipse policy_ellipse(const AdaptationPolicy &policy, const AngularCovariance &cov,
                              const PlanarArrayGeometry &geom)
{
    policy.validate();
    switch (policy.kind)
    {
    case PolicyKind::generalized:
        return generalized_ellipse(cov, policy.confidence_level, geom, policy.steer_offset_beta_deg);
    case PolicyKind::axis_aligned_baseline:
        return baseline_ellipse(cov, policy.confidence_level, geom, policy.steer_offset_beta_deg);
    }
    throw std::logic_error("unhandled policy kind");
}

std::vector<MaskCandidate> mask_family(const PlanarArrayGeometry &geom, const AntennaEllipse &ellipse)
{
    AntennaEllipse base = ellipse;
    base.scale = 1.0;
    base.validate();

    std::vector<double> radii = element_radii(geom, base);
    std::sort(radii.begin(), radii.end());

    constexpr double kGroupTolerance = 1e-10;
    std::vector<double> group_tops;
    for (const double q : radii)
    {
        if (q > 1.0)
            break;
        if (!group_tops.empty() && q <= group_tops.back() * (1.0 + kGroupTolerance))
            group_tops.back() = q;
        else
            group_tops.push_back(q);
    }

    std::vector<MaskCandidate> family;
    auto push = [&](double scale) {
        AntennaEllipse e = base;
        e.scale = scale;
        MaskSelection sel = activation_mask(geom, e);
        if (!family.empty() && family.back().mask == sel.mask)
            return;
        family.push_back({scale, std::move(sel.mask), sel.fallback});
    };

    // Vanishing scale: the degenerate centre pair (or a centre element).
    const double smallest = radii.front();
    push(smallest > 0.0 ? 0.5 * std::sqrt(smallest) : 1e-9);
    for (const double top : group_tops)
    {
        const double scale = top > 0.0 ? std::min(1.0, std::sqrt(top * (1.0 + 0.1 * kGroupTolerance))) : 1e-9;
        push(scale);
    }
    return family;
}

FamilyEvaluation evaluate_family(const LinkScenario &scenario, const AdaptationPolicy &policy,
                                 std::span<const double> g0_db, std::optional<double> outage_threshold)
{
    FamilyEvaluation out;
    out.candidates = mask_family(scenario.geom, policy_ellipse(policy, scenario.cov, scenario.geom));
    out.g0_db.assign(g0_db.begin(), g0_db.end());
    out.outage_threshold = outage_threshold;

    const Direction mean = policy.steer();
    const GridLayout layout(scenario.grid, scenario.cov, mean);
    const auto probabilities = cell_probabilities(layout, scenario.cov, mean);

    out.outage.reserve(out.candidates.size());
    for (const auto &candidate : out.candidates)
    {
        const BeamPattern beam(scenario.geom, scenario.pattern, candidate.mask, mean);
        const GainField field(layout, beam, scenario.threads);
        out.outage.push_back(outage_from_field(field, probabilities, g0_db));
        if (outage_threshold)
            out.critical_gain_db.push_back(critical_gain_db(field, probabilities, *outage_threshold));
    }
    return out;
}

FeasibleRange feasible_range_at(const FamilyEvaluation &eval, std::size_t threshold_index, double outage_threshold)
{
    if (!(outage_threshold > 0.0 && outage_threshold <= 1.0))
        throw DomainError(fmt::format("outage threshold must lie in (0, 1], got {}", outage_threshold));
    FeasibleRange range{false, 0, 0};
    for (std::size_t c = 0; c < eval.candidates.size(); ++c)
    {
        if (eval.outage[c].at(threshold_index) > outage_threshold)
            continue;
        const std::size_t count = eval.candidates[c].mask.active_count();
        if (!range.feasible)
            range = {true, count, count};
        range.n_min = std::min(range.n_min, count);
        range.n_max = std::max(range.n_max, count);
    }
    return range;
}

OptimalCount optimal_count_at(const FamilyEvaluation &eval, std::size_t threshold_index)
{
    if (eval.candidates.empty())
        throw std::logic_error("empty mask family");
    std::size_t best = 0;
    for (std::size_t c = 1; c < eval.candidates.size(); ++c)
        if (eval.outage[c].at(threshold_index) < eval.outage[best].at(threshold_index) - kOutageTieTolerance)
            best = c;

    const double best_outage = eval.outage[best].at(threshold_index);
    if (best_outage >= 1.0)
    {
        const auto &largest = eval.candidates.back();
        return {largest.mask.active_count(), eval.outage.back().at(threshold_index), largest.scale, true};
    }
    return {eval.candidates[best].mask.active_count(), best_outage, eval.candidates[best].scale, false};
}

double max_feasible_distance(const FamilyEvaluation &eval, const LinkBudget &link)
{
    if (eval.critical_gain_db.empty())
        throw std::logic_error("family was evaluated without an outage threshold");
    const double best = *std::max_element(eval.critical_gain_db.begin(), eval.critical_gain_db.end());
    if (!std::isfinite(best))
        return 0.0;
    return distance_for_gain_threshold(link, best);
}

FeasibleRange feasible_antenna_range(const LinkScenario &scenario, const AdaptationPolicy &policy, double distance_m,
                                     double outage_threshold)
{
    const double g0 = required_gain_threshold(scenario.link, distance_m);
    const auto eval = evaluate_family(scenario, policy, std::span<const double>(&g0, 1), std::nullopt);
    return feasible_range_at(eval, 0, outage_threshold);
}

OptimalCount optimal_antenna_count(const LinkScenario &scenario, const AdaptationPolicy &policy, double distance_m)
{
    const double g0 = required_gain_threshold(scenario.link, distance_m);
    const auto eval = evaluate_family(scenario, policy, std::span<const double>(&g0, 1), std::nullopt);
    return optimal_count_at(eval, 0);
}

} // namespace beamadapt
