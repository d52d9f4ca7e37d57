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

#include "doctest.h"

#include <cmath>
#include <random>

#include "beamadapt/adaptation.hpp"
#include "beamadapt/errors.hpp"

using namespace beamadapt;

namespace
{

const PlanarArrayGeometry k16(16, 16, 0.5, 28e9);

LinkScenario scenario(double sigma_theta, double sigma_psi, double rho, double resolution = 0.1)
{
    return {k16, ElementPattern{}, LinkBudget{}, AngularCovariance(sigma_theta, sigma_psi, rho),
            IntegrationGrid{6, resolution}, 0};
}

// Exhaustive count of lattice points inside an axis-aligned ellipse.
std::size_t enumerate_axis_aligned(int rows, int cols, double a_rows, double a_cols)
{
    std::size_t count = 0;
    for (int m = 0; m < rows; ++m)
        for (int n = 0; n < cols; ++n)
        {
            const double x = m - (rows - 1) / 2.0;
            const double y = n - (cols - 1) / 2.0;
            if ((x / a_rows) * (x / a_rows) + (y / a_cols) * (y / a_cols) <= 1.0)
                ++count;
        }
    return count;
}

} // namespace

TEST_CASE("beamwidth to aperture inversion")
{
    const double b = rad_to_deg(0.886 / (16 * 0.5));
    CHECK(b == doctest::Approx(6.345).epsilon(1e-3));
    CHECK(2 * semi_aperture_for_beamwidth(b, 0.5, 0.0) == 16);
    CHECK(semi_aperture_for_beamwidth(2 * b, 0.5, 0.0) == 4);
    CHECK(semi_aperture_for_beamwidth(2 * b, 0.5, 60.0) == 8);
    CHECK_THROWS_AS(semi_aperture_for_beamwidth(0.0, 0.5, 0.0), DomainError);
}

TEST_CASE("required counts from the reference confidence ellipse")
{
    const auto conf = confidence_ellipse(AngularCovariance(2, 2, 0.5), 0.95);
    const auto counts = required_counts(conf, k16, 0.0);
    // Narrow 6.92 deg axis and wide 11.99 deg axis.
    CHECK(counts.m_a == static_cast<int>(0.886 / (deg_to_rad(2 * conf.semi_minor_deg) * 0.5) / 2));
    CHECK(counts.n_a == static_cast<int>(0.886 / (deg_to_rad(2 * conf.semi_major_deg) * 0.5) / 2));
    CHECK(counts.m_a == 7);
    CHECK(counts.n_a == 4);

    const ConfidenceEllipse tiny{0, 0.01, 0.01, 0.95};
    CHECK(required_counts(tiny, k16, 0.0).m_a == 8);
    const ConfidenceEllipse huge{0, 80, 80, 0.95};
    CHECK(required_counts(huge, k16, 0.0).n_a == 1);
    CHECK_THROWS_AS(required_counts(conf, k16, 90.0), DomainError);
}

TEST_CASE("activation mask examples")
{
    const auto all = activation_mask(k16, {100, 100, 0});
    CHECK(all.mask.active_count() == 256);
    CHECK_FALSE(all.fallback);

    const auto ellipse = activation_mask(k16, {8, 4, 0});
    CHECK(ellipse.mask.active_count() == enumerate_axis_aligned(16, 16, 8, 4));

    const auto rotated = activation_mask(k16, {8, 4, 90});
    CHECK(rotated.mask == ellipse.mask.transposed());

    for (double a : {1.0, 2.5, 3.7, 6.0})
        for (double b : {0.6, 1.0, 2.2})
            if (a >= b)
                CHECK(activation_mask(k16, {a, b, 0}).mask.active_count() == enumerate_axis_aligned(16, 16, a, b));

    const auto fallback = activation_mask(k16, {1, 1, 0, 0.1});
    CHECK(fallback.fallback);
    CHECK(fallback.mask.active_count() == 2);
    CHECK(fallback.mask.is_point_symmetric());

    CHECK_THROWS_AS(activation_mask(k16, {2, 3, 0}), DomainError);
    CHECK_THROWS_AS(activation_mask(k16, {3, 2, 0, 1.5}), DomainError);
}

TEST_CASE("antenna ellipse orientation follows the narrow confidence axis")
{
    const auto gen = generalized_ellipse(AngularCovariance(2, 2, 0.5), 0.95, k16, 0.0);
    CHECK(gen.m_a == 7.0);
    CHECK(gen.n_a == 4.0);
    CHECK(gen.phi_deg == doctest::Approx(-45.0));

    const auto flat = generalized_ellipse(AngularCovariance(1, 3, 0.0), 0.95, k16, 0.0);
    CHECK(flat.phi_deg == 90.0);
}

TEST_CASE("baseline ellipse")
{
    const AngularCovariance corr(2, 2, 0.5);
    const auto base = baseline_confidence_ellipse(corr, 0.95);
    const double k = confidence_scale(0.95);
    CHECK(base.semi_major_deg == doctest::Approx(2 * k));
    CHECK(base.semi_minor_deg == doctest::Approx(2 * k));
    const auto gen = confidence_ellipse(corr, 0.95);
    CHECK(gen.semi_major_deg == doctest::Approx(k * std::sqrt(6.0)));
    CHECK(gen.semi_minor_deg == doctest::Approx(k * std::sqrt(2.0)));
    CHECK(gen.orientation_deg == doctest::Approx(45.0));

    for (double rho : {-0.8, 0.0, 0.3, 0.9})
    {
        const auto b = baseline_ellipse(AngularCovariance(1.5, 2.5, rho), 0.95, k16, 0.0);
        const auto b0 = baseline_ellipse(AngularCovariance(1.5, 2.5, 0.0), 0.95, k16, 0.0);
        CHECK(b.m_a == b0.m_a);
        CHECK(b.n_a == b0.n_a);
        CHECK(b.phi_deg == b0.phi_deg);
    }

    for (const auto &[st, sp] : {std::pair{2.0, 2.0}, std::pair{1.0, 3.0}, std::pair{3.0, 1.0}})
    {
        const AngularCovariance diag(st, sp, 0.0);
        const auto g = generalized_ellipse(diag, 0.95, k16, 0.0);
        const auto b = baseline_ellipse(diag, 0.95, k16, 0.0);
        CHECK(g.m_a == b.m_a);
        CHECK(g.n_a == b.n_a);
        CHECK(g.phi_deg == b.phi_deg);
    }
}

TEST_CASE("mask family properties")
{
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> axis(1.0, 8.0), ang(-90.0, 90.0);
    for (int trial = 0; trial < 30; ++trial)
    {
        double a = axis(rng), b = axis(rng);
        if (a < b)
            std::swap(a, b);
        const AntennaEllipse e{a, b, trial % 3 == 0 ? 0.0 : ang(rng)};
        const auto family = mask_family(k16, e);
        REQUIRE_FALSE(family.empty());
        CHECK(family.back().mask == activation_mask(k16, e).mask);
        for (std::size_t i = 0; i < family.size(); ++i)
        {
            CHECK(family[i].mask.is_point_symmetric());
            CHECK(family[i].mask == activation_mask(k16, {a, b, e.phi_deg, family[i].scale}).mask);
            if (i > 0)
            {
                CHECK(family[i].scale > family[i - 1].scale);
                CHECK(family[i].mask.active_count() > family[i - 1].mask.active_count());
                CHECK(family[i - 1].mask.is_subset_of(family[i].mask));
            }
        }
        // Every distinct mask on a fine scale sweep appears in the family.
        for (double s = 0.01; s <= 1.0; s += 0.01)
        {
            const auto mask = activation_mask(k16, {a, b, e.phi_deg, s}).mask;
            const bool present = std::any_of(family.begin(), family.end(),
                                             [&](const MaskCandidate &c) { return c.mask == mask; });
            CHECK(present);
        }
    }
}

TEST_CASE("feasible range and optimum")
{
    const auto sc = scenario(2, 2, 0.5);
    const AdaptationPolicy gen{PolicyKind::generalized, 0.95, 0.0};
    const auto family = mask_family(k16, policy_ellipse(gen, sc.cov, sc.geom));

    SUBCASE("short distance: smallest member already clears the threshold")
    {
        const auto range = feasible_antenna_range(sc, gen, 10.0, 0.05);
        CHECK(range.feasible);
        CHECK(range.n_min == family.front().mask.active_count());
        CHECK(required_gain_threshold(sc.link, 10.0) <= 10 * std::log10(double(range.n_min)) + 8);
    }
    SUBCASE("beyond the crossover nothing is feasible")
    {
        CHECK_FALSE(feasible_antenna_range(sc, gen, 3500.0, 0.05).feasible);
    }
    SUBCASE("a vacuous outage threshold admits the whole family")
    {
        for (double d : {10.0, 1000.0, 3000.0, 50000.0})
        {
            const auto range = feasible_antenna_range(sc, gen, d, 1.0);
            CHECK(range.feasible);
            CHECK(range.n_min == family.front().mask.active_count());
            CHECK(range.n_max == family.back().mask.active_count());
        }
    }
    SUBCASE("saturated when every member is in full outage")
    {
        const auto best = optimal_antenna_count(sc, gen, 1e5);
        CHECK(best.saturated);
        CHECK(best.outage == 1.0);
        CHECK(best.count == family.back().mask.active_count());
    }
    SUBCASE("optimum sits inside the feasible range")
    {
        for (double d : {50.0, 400.0, 1200.0, 2000.0, 2600.0})
        {
            const auto range = feasible_antenna_range(sc, gen, d, 0.05);
            const auto best = optimal_antenna_count(sc, gen, d);
            CHECK(best.outage >= 0.0);
            CHECK(best.outage <= 1.0);
            if (range.feasible)
            {
                CHECK(best.count >= range.n_min);
                CHECK(best.count <= range.n_max);
            }
        }
    }
    SUBCASE("bad threshold")
    {
        CHECK_THROWS_AS(feasible_antenna_range(sc, gen, 100.0, 0.0), DomainError);
    }
}

TEST_CASE("tight uncertainty favours larger apertures when gain is scarce")
{
    const AdaptationPolicy gen{PolicyKind::generalized, 0.95, 0.0};
    const auto tight = scenario(0.1, 0.1, 0.0, 0.005);
    std::size_t previous = 0;
    for (double d : {1000.0, 2000.0, 3000.0, 3900.0})
    {
        const auto best = optimal_antenna_count(tight, gen, d);
        CHECK_FALSE(best.saturated);
        CHECK(best.outage <= 0.05);
        CHECK(best.count >= previous);
        CHECK(10 * std::log10(double(best.count)) + 8 >= required_gain_threshold(LinkBudget{}, d));
        previous = best.count;
    }
    CHECK(previous > 100);
    CHECK_FALSE(feasible_antenna_range(scenario(2, 2, 0.0), gen, 3900.0, 0.05).feasible);
}

TEST_CASE("optimum prefers fewer elements on exact ties")
{
    FamilyEvaluation eval;
    for (int i = 1; i <= 3; ++i)
    {
        ActivationMask mask(4, 4);
        for (int n = 0; n < i; ++n)
        {
            mask.set(1, n, true);
            mask.set(2, 3 - n, true);
        }
        eval.candidates.push_back({0.3 * i, mask, false});
    }
    eval.g0_db = {0.0};
    eval.outage = {{0.1}, {0.1 - 1e-13}, {0.1}};
    const auto best = optimal_count_at(eval, 0);
    CHECK(best.count == 2);
    CHECK_FALSE(best.saturated);
    eval.outage[1][0] = 0.05;
    CHECK(optimal_count_at(eval, 0).count == 4);
}

TEST_CASE("allowable counts shrink with distance")
{
    const auto sc = scenario(2, 2, 0.5);
    for (const auto kind : {PolicyKind::generalized, PolicyKind::axis_aligned_baseline})
    {
        const AdaptationPolicy policy{kind, 0.95, 0.0};
        std::vector<double> g0;
        for (double d = 10.0; d < 4000.0; d *= 1.15)
            g0.push_back(required_gain_threshold(sc.link, d));
        const auto eval = evaluate_family(sc, policy, g0, 0.05);
        std::size_t lo = 0, hi = 1000;
        bool was_feasible = true;
        for (std::size_t i = 0; i < g0.size(); ++i)
        {
            const auto r = feasible_range_at(eval, i, 0.05);
            if (!r.feasible)
            {
                was_feasible = false;
                continue;
            }
            CHECK(was_feasible);
            CHECK(r.n_min >= lo);
            CHECK(r.n_max <= hi);
            lo = r.n_min;
            hi = r.n_max;
        }
        CHECK_FALSE(was_feasible);
        const double dmax = max_feasible_distance(eval, sc.link);
        CHECK(feasible_antenna_range(sc, policy, dmax * 0.999, 0.05).feasible);
        CHECK_FALSE(feasible_antenna_range(sc, policy, dmax * 1.001, 0.05).feasible);
    }
}

TEST_CASE("policy names")
{
    CHECK(to_string(PolicyKind::generalized) == "generalized");
    CHECK(to_string(PolicyKind::axis_aligned_baseline) == "baseline");
    CHECK(parse_policy_kind("baseline") == PolicyKind::axis_aligned_baseline);
    CHECK_FALSE(parse_policy_kind("both").has_value());
    CHECK_THROWS_AS(AdaptationPolicy({PolicyKind::generalized, 1.0, 0.0}).validate(), DomainError);
}
