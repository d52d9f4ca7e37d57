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
#include <limits>
#include <random>

#include "beamadapt/errors.hpp"
#include "beamadapt/outage.hpp"

using namespace beamadapt;

namespace
{

const PlanarArrayGeometry k16(16, 16, 0.5, 28e9);
const ElementPattern kPattern;
const double kInf = std::numeric_limits<double>::infinity();

// Hard-indicator midpoint sum with the slow free functions on a grid `refine`
// times finer than the one under test; no factoring, no fractional cells.
double brute_outage(const ActivationMask &mask, const AngularCovariance &cov, double g0, const IntegrationGrid &grid,
                    int refine)
{
    const GridLayout layout(grid, cov, {0, 0});
    const double h = layout.thetas()[1] - layout.thetas()[0];
    const double sub = h / refine;
    double covered = 0.0;
    for (const double tc : layout.thetas())
        for (const double pc : layout.psis())
            for (int a = 0; a < refine; ++a)
                for (int b = 0; b < refine; ++b)
                {
                    const Direction d{tc - h / 2 + (a + 0.5) * sub, pc - h / 2 + (b + 0.5) * sub};
                    if (receive_gain(k16, kPattern, mask, {0, 0}, d) >= g0)
                        covered += gaussian_pdf(cov, {0, 0}, d) * sub * sub;
                }
    return std::clamp(1.0 - covered, 0.0, 1.0);
}

ActivationMask centred_block(int half_rows, int half_cols)
{
    ActivationMask mask(16, 16);
    for (int m = 8 - half_rows; m < 8 + half_rows; ++m)
        for (int n = 8 - half_cols; n < 8 + half_cols; ++n)
            mask.set(m, n, true);
    return mask;
}

} // namespace

TEST_CASE("grid layout spans the window")
{
    const AngularCovariance cov(1, 2, 0);
    const GridLayout layout({6, 0.5}, cov, {0, 0});
    CHECK(layout.rows() == 48);
    CHECK(layout.cols() == 48);
    CHECK(layout.thetas().front() == doctest::Approx(-11.75));
    CHECK(layout.psis().back() == doctest::Approx(11.75));
    CHECK(layout.cell_area() == doctest::Approx(0.25));

    // Clipped at the pole.
    const GridLayout edge({6, 0.5}, cov, {85, 0});
    CHECK(edge.thetas().back() < 90.0);
    CHECK(edge.thetas().front() == doctest::Approx(73.25));

    CHECK_THROWS_AS(IntegrationGrid({2.0, 0.05}).validate(), DomainError);
    CHECK_THROWS_AS(IntegrationGrid({6.0, 0.0}).validate(), DomainError);
}

TEST_CASE("indicator thresholds")
{
    const auto full = ActivationMask::full(16, 16);
    const double peak = 10 * std::log10(256.0) + kPattern.g_max_dbi;
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-89, 89);
    for (int i = 0; i < 200; ++i)
    {
        const Direction d{u(rng), u(rng)};
        CHECK(indicator(k16, kPattern, full, {0, 0}, kGainFloorDb - 1, d));
        CHECK_FALSE(indicator(k16, kPattern, full, {0, 0}, peak + 1e-9, d));
    }
    // 3 dB contour of the full array: 0.886 / 8 rad full width.
    for (const Direction d : {Direction{3.0, 0}, Direction{-3.0, 0}, Direction{0, 3.0}, Direction{0, -3.0}})
        CHECK(indicator(k16, kPattern, full, {0, 0}, peak - 3, d));
    for (const Direction d : {Direction{3.4, 0}, Direction{-3.4, 0}, Direction{0, 3.4}, Direction{0, -3.4}})
        CHECK_FALSE(indicator(k16, kPattern, full, {0, 0}, peak - 3, d));
    for (const Direction d : {Direction{10, 0}, Direction{0, 20}, Direction{-30, 30}})
        CHECK_FALSE(indicator(k16, kPattern, full, {0, 0}, peak - 3, d));
}

TEST_CASE("trivial outage bounds")
{
    const auto mask = centred_block(3, 2);
    const AngularCovariance cov(2, 2, 0.5);
    const IntegrationGrid grid;
    CHECK(outage_probability(k16, kPattern, mask, {0, 0}, cov, {0, 0}, -kInf, grid) < 1e-6);
    CHECK(outage_probability(k16, kPattern, mask, {0, 0}, cov, {0, 0}, kInf, grid) == 1.0);

    const auto lo = outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, -kInf, 20000, 1);
    const auto hi = outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, kInf, 20000, 1);
    CHECK(lo.probability == 0.0);
    CHECK(hi.probability == 1.0);
    CHECK(lo.standard_error == 0.0);
    CHECK_THROWS_AS(outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, 0.0, 9999, 1), DomainError);
}

TEST_CASE("gain field matches receive_gain at the cell centres")
{
    const auto mask = centred_block(3, 5);
    const AngularCovariance cov(1.5, 1, 0.3);
    const GridLayout layout(IntegrationGrid{6, 0.25}, cov, {0, 0});
    const GainField field(layout, BeamPattern(k16, kPattern, mask, {0, 0}));
    for (std::size_t i = 0; i < layout.rows(); i += 3)
        for (std::size_t j = 0; j < layout.cols(); j += 5)
        {
            const double ref = receive_gain(k16, kPattern, mask, {0, 0}, {layout.thetas()[i], layout.psis()[j]});
            if (ref > -100.0)
                CHECK(field.values()[i * layout.cols() + j] == doctest::Approx(ref).epsilon(1e-9));
        }
}

TEST_CASE("fractional boundary cells agree with a much finer hard-indicator sum")
{
    const IntegrationGrid grid{6, 0.2};
    const struct
    {
        int half_rows, half_cols;
        double sigma_theta, sigma_psi, rho, drop_db;
    } cases[] = {{3, 3, 1.0, 1.0, 0.0, 1.0}, {5, 2, 1.2, 0.8, 0.6, 2.5}};
    for (const auto &c : cases)
    {
        const auto mask = centred_block(c.half_rows, c.half_cols);
        const AngularCovariance cov(c.sigma_theta, c.sigma_psi, c.rho);
        const double g0 = 10 * std::log10(static_cast<double>(mask.active_count())) + 8 - c.drop_db;
        const double coarse = outage_probability(k16, kPattern, mask, {0, 0}, cov, {0, 0}, g0, grid);
        const double fine = brute_outage(mask, cov, g0, grid, 16);
        CHECK(std::abs(coarse - fine) < 3e-4);
    }
}

TEST_CASE("halving the resolution barely moves the outage")
{
    const auto mask = centred_block(5, 4);
    const AngularCovariance cov(2, 2, 0.5);
    for (double drop : {0.5, 2.0, 5.0})
    {
        const double g0 = 10 * std::log10(80.0) + 8 - drop;
        const double a = outage_probability(k16, kPattern, mask, {0, 0}, cov, {0, 0}, g0, {6, 0.1});
        const double b = outage_probability(k16, kPattern, mask, {0, 0}, cov, {0, 0}, g0, {6, 0.05});
        CHECK(std::abs(a - b) < 1e-4);
    }
}

TEST_CASE("outage is monotone in the threshold")
{
    const auto mask = centred_block(4, 3);
    const AngularCovariance cov(2, 2, 0.5);
    const GridLayout layout(IntegrationGrid{6, 0.1}, cov, {0, 0});
    const auto probabilities = cell_probabilities(layout, cov, {0, 0});
    const GainField field(layout, BeamPattern(k16, kPattern, mask, {0, 0}));
    std::vector<double> thresholds;
    for (double g = -40; g <= 30; g += 0.5)
        thresholds.push_back(g);
    const auto batch = outage_from_field(field, probabilities, thresholds);
    double previous = -1.0;
    for (std::size_t i = 0; i < thresholds.size(); ++i)
    {
        CHECK(batch[i] >= previous);
        CHECK(batch[i] >= 0.0);
        CHECK(batch[i] <= 1.0);
        CHECK(batch[i] == outage_from_field(field, probabilities, thresholds[i]));
        previous = batch[i];
    }
}

TEST_CASE("critical gain is the largest threshold meeting the target")
{
    const auto mask = centred_block(5, 4);
    const AngularCovariance cov(2, 2, 0.5);
    const GridLayout layout(IntegrationGrid{6, 0.1}, cov, {0, 0});
    const auto probabilities = cell_probabilities(layout, cov, {0, 0});
    const GainField field(layout, BeamPattern(k16, kPattern, mask, {0, 0}));
    for (double target : {0.01, 0.05, 0.2})
    {
        const double g = critical_gain_db(field, probabilities, target);
        CHECK(outage_from_field(field, probabilities, g) <= target + 1e-12);
        CHECK(outage_from_field(field, probabilities, g + 1e-8) > target);
    }
    CHECK(critical_gain_db(field, probabilities, 1e-12) == -kInf);
}

TEST_CASE("elliptical indicator gives the closed-form mass")
{
    const AngularCovariance cov(2, 2, 0.5);
    const IntegrationGrid grid;
    for (double level : {0.5, 0.9, 0.95, 0.99})
    {
        const double k2 = -2 * std::log(1 - level);
        const auto inside = [&](Direction d) { return mahalanobis_sq(cov, {0, 0}, d) <= k2; };
        CHECK(std::abs(outage_probability(cov, {0, 0}, grid, inside) - (1 - level)) < 1e-3);
        const auto mc = outage_probability_mc(cov, {0, 0}, inside, 200000, 9);
        CHECK(std::abs(mc.probability - (1 - level)) < 3.5 * mc.standard_error);
    }
}

TEST_CASE("quadrature agrees with Monte Carlo on a small battery")
{
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> sig(0.8, 3.0), rho(0.0, 0.9);
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto mask = centred_block(2 + static_cast<int>(rng() % 6), 2 + static_cast<int>(rng() % 6));
        const AngularCovariance cov(sig(rng), sig(rng), rho(rng));
        const double g0 = 10 * std::log10(static_cast<double>(mask.active_count())) + 8 - 3;
        const double q = outage_probability(k16, kPattern, mask, {0, 0}, cov, {0, 0}, g0, IntegrationGrid{});
        const auto mc = outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, g0, 100000, 1000 + trial);
        CHECK(std::abs(q - mc.probability) < 3.5 * mc.standard_error);
    }
}

TEST_CASE("Monte Carlo is deterministic in the seed")
{
    const auto mask = centred_block(3, 3);
    const AngularCovariance cov(2, 1, 0.4);
    const auto a = outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, 22.5, 150000, 77);
    const auto b = outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, 22.5, 150000, 77);
    const auto c = outage_probability_mc(k16, kPattern, mask, {0, 0}, cov, {0, 0}, 22.5, 150000, 78);
    CHECK(a.probability == b.probability);
    CHECK(a.samples == 150000);
    CHECK(a.probability != c.probability);
}

TEST_CASE("gain field is independent of the worker count")
{
    const auto mask = centred_block(4, 6);
    const AngularCovariance cov(2, 2, 0.5);
    const GridLayout layout(IntegrationGrid{6, 0.1}, cov, {0, 0});
    const BeamPattern beam(k16, kPattern, mask, {0, 0});
    const GainField one(layout, beam, 1);
    const GainField many(layout, beam, 4);
    CHECK(std::equal(one.values().begin(), one.values().end(), many.values().begin()));
}

TEST_CASE("uniform-gain approximation")
{
    CHECK(uniform_gain_approx(kPi * kPi) == doctest::Approx(1.0));
    CHECK(uniform_gain_approx(kPi * kPi / 256) == doctest::Approx(256.0));
    CHECK(uniform_gain_approx(0.5) == doctest::Approx(2 * uniform_gain_approx(1.0)));
    CHECK_THROWS_AS(uniform_gain_approx(0.0), DomainError);
}
