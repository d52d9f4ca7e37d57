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

#include "beamadapt/errors.hpp"
#include "beamadapt/uncertainty.hpp"

using namespace beamadapt;

namespace
{

// Fraction of N(0, cov) samples inside the level-p confidence ellipse, tested
// geometrically against the ellipse axes rather than through the inverse.
double mc_mass_inside(const AngularCovariance &cov, double level, std::uint64_t n, std::uint64_t seed)
{
    const auto e = confidence_ellipse(cov, level);
    const auto m = cov.matrix();
    // Cholesky of [[a, b], [b, c]] in (theta, psi) order.
    const double l11 = std::sqrt(m.a);
    const double l21 = m.b / l11;
    const double l22 = std::sqrt(m.c - l21 * l21);
    const double c = std::cos(deg_to_rad(e.orientation_deg));
    const double s = std::sin(deg_to_rad(e.orientation_deg));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::uint64_t inside = 0;
    for (std::uint64_t i = 0; i < n; ++i)
    {
        const double z1 = z(rng), z2 = z(rng);
        const double theta = l11 * z1;
        const double psi = l21 * z1 + l22 * z2;
        // Orientation is measured from the azimuth axis towards elevation.
        const double along = psi * c + theta * s;
        const double across = -psi * s + theta * c;
        const double r = along * along / (e.semi_major_deg * e.semi_major_deg) +
                         across * across / (e.semi_minor_deg * e.semi_minor_deg);
        inside += r <= 1.0 ? 1 : 0;
    }
    return static_cast<double>(inside) / static_cast<double>(n);
}

} // namespace

TEST_CASE("eigendecomposition examples")
{
    const auto e = eigendecompose({4, 2, 4});
    CHECK(e.values[0] == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(e.values[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(e.major_angle_deg - 45.0) < 1e-12);

    const auto d = eigendecompose({4, 0, 1});
    CHECK(d.values[0] == 4.0);
    CHECK(d.values[1] == 1.0);
    CHECK(d.major_angle_deg == 0.0);

    CHECK(std::abs(eigendecompose({4, -2, 4}).major_angle_deg + 45.0) < 1e-12);
    CHECK(eigendecompose({3, 0, 3}).major_angle_deg == 0.0);
    CHECK_THROWS_AS(eigendecompose({1, 2, 1}), DomainError);
    CHECK_THROWS_AS(eigendecompose({0, 0, 1}), DomainError);
}

TEST_CASE("eigen reconstruction and Rayleigh bounds")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> sig(0.1, 5.0), rho(-0.95, 0.95), ang(0, 2 * kPi);
    for (int trial = 0; trial < 200; ++trial)
    {
        const AngularCovariance cov(sig(rng), sig(rng), rho(rng));
        const auto m = cov.matrix();
        const auto e = eigendecompose(m);
        const auto &v = e.vectors;
        double rec[2][2] = {};
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    rec[i][j] += e.values[k] * v[k][i] * v[k][j];
        const double norm = std::max(std::abs(m.a) + std::abs(m.b), std::abs(m.b) + std::abs(m.c));
        CHECK(std::abs(rec[0][0] - m.a) <= 1e-12 * norm);
        CHECK(std::abs(rec[0][1] - m.b) <= 1e-12 * norm);
        CHECK(std::abs(rec[1][1] - m.c) <= 1e-12 * norm);
        for (int i = 0; i < 5; ++i)
        {
            const double t = ang(rng);
            const double x = std::cos(t), y = std::sin(t);
            const double q = m.a * x * x + 2 * m.b * x * y + m.c * y * y;
            CHECK(q <= e.values[0] * (1 + 1e-12));
            CHECK(q >= e.values[1] * (1 - 1e-12));
        }
    }
}

TEST_CASE("covariance construction")
{
    const AngularCovariance cov(2, 2, 0.5);
    CHECK(cov.matrix() == SymmetricMatrix2{4, 2, 4});
    CHECK_THROWS_AS(AngularCovariance(0, 1, 0), DomainError);
    CHECK_THROWS_AS(AngularCovariance(1, 1, 1.0), DomainError);
    CHECK_THROWS_AS(AngularCovariance(1, 1, -1.0), DomainError);

    const auto back = AngularCovariance::from_matrix({4, 2, 4});
    CHECK(back.rho() == doctest::Approx(0.5));

    for (double phi : {-60.0, 0.0, 10.0, 45.0, 90.0})
    {
        const auto r = AngularCovariance::from_axes(6, 2, phi);
        const auto e = eigendecompose(r.matrix());
        CHECK(e.values[0] == doctest::Approx(6.0));
        CHECK(e.values[1] == doctest::Approx(2.0));
        CHECK(major_axis_orientation_deg(r) == doctest::Approx(normalize_axis_angle(phi)));
    }
}

TEST_CASE("orientation is measured from the azimuth axis")
{
    CHECK(major_axis_orientation_deg(AngularCovariance(2, 2, 0.5)) == doctest::Approx(45.0));
    CHECK(major_axis_orientation_deg(AngularCovariance(2, 2, -0.5)) == doctest::Approx(-45.0));
    CHECK(major_axis_orientation_deg(AngularCovariance(1, 2, 0.0)) == 0.0);
    CHECK(major_axis_orientation_deg(AngularCovariance(2, 1, 0.0)) == 90.0);
    CHECK(major_axis_orientation_deg(AngularCovariance(1.5, 1.5, 0.0)) == 0.0);
    CHECK(normalize_axis_angle(-90.0) == 90.0);
    CHECK(normalize_axis_angle(135.0) == doctest::Approx(-45.0));
}

TEST_CASE("confidence ellipse examples")
{
    CHECK(confidence_scale(0.95) == doctest::Approx(2.4477).epsilon(1e-4));
    CHECK(confidence_scale(1.0 - std::exp(-0.5)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(confidence_scale(1.0), DomainError);
    CHECK_THROWS_AS(confidence_scale(0.0), DomainError);

    const auto e = confidence_ellipse(AngularCovariance(2, 2, 0.5), 0.95);
    CHECK(e.semi_major_deg == doctest::Approx(5.995).epsilon(1e-3));
    CHECK(e.semi_minor_deg == doctest::Approx(3.461).epsilon(1e-3));
    CHECK(e.orientation_deg == doctest::Approx(45.0));

    const auto unit = confidence_ellipse(AngularCovariance(1, 1, 0), 1.0 - std::exp(-0.5));
    CHECK(unit.semi_major_deg == doctest::Approx(1.0));
    CHECK(unit.semi_minor_deg == doctest::Approx(1.0));

    const auto scaled = confidence_ellipse(AngularCovariance(6, 6, 0.5), 0.95);
    CHECK(scaled.semi_major_deg == doctest::Approx(3 * e.semi_major_deg));
    CHECK(scaled.semi_minor_deg == doctest::Approx(3 * e.semi_minor_deg));
    CHECK(scaled.orientation_deg == doctest::Approx(e.orientation_deg));
}

TEST_CASE("rotating the covariance rotates the ellipse")
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> var(0.5, 9.0), ang(-180.0, 180.0);
    for (int i = 0; i < 100; ++i)
    {
        double a = var(rng), b = var(rng);
        if (a < b)
            std::swap(a, b);
        if (a - b < 1e-3)
            continue;
        const double phi = ang(rng), delta = ang(rng);
        const auto e1 = confidence_ellipse(AngularCovariance::from_axes(a, b, phi), 0.9);
        const auto e2 = confidence_ellipse(AngularCovariance::from_axes(a, b, phi + delta), 0.9);
        const double diff = normalize_axis_angle(e2.orientation_deg - e1.orientation_deg - delta);
        CHECK(std::min(std::abs(diff), 180.0 - std::abs(diff)) < 1e-8);
        CHECK(e2.semi_major_deg == doctest::Approx(e1.semi_major_deg));
        CHECK(e2.semi_minor_deg == doctest::Approx(e1.semi_minor_deg));
    }
}

TEST_CASE("ellipse mass by Monte Carlo")
{
    std::uint64_t seed = 100;
    for (double level : {0.5, 0.9, 0.95})
        for (const auto &cov : {AngularCovariance(2, 2, 0.5), AngularCovariance(1, 3, -0.7), AngularCovariance(2, 1, 0)})
        {
            const std::uint64_t n = 200000;
            const double p = mc_mass_inside(cov, level, n, seed++);
            const double se = std::sqrt(level * (1 - level) / static_cast<double>(n));
            CHECK(std::abs(p - level) < 3.5 * se);
        }
}

TEST_CASE("gaussian density")
{
    const AngularCovariance cov(2, 2, 0.5);
    const Direction mean{0, 0};
    CHECK(gaussian_pdf(cov, mean, mean) == doctest::Approx(1.0 / (2 * kPi * std::sqrt(12.0))));
    CHECK(gaussian_pdf(cov, mean, mean) == doctest::Approx(0.04595).epsilon(1e-4));
    CHECK(mahalanobis_sq(cov, mean, {2, 2}) == doctest::Approx(8.0 / 6.0));
    CHECK(mahalanobis_sq(cov, {0, 179}, {0, -179}) == doctest::Approx(mahalanobis_sq(cov, {0, 0}, {0, 2})));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-8, 8);
    for (int i = 0; i < 200; ++i)
        CHECK(gaussian_pdf(cov, mean, {u(rng), u(rng)}) <= gaussian_pdf(cov, mean, mean));

    // Midpoint rule over +-6 sigma in both axes.
    const double h = 0.02;
    double sum = 0.0;
    for (double t = -12 + h / 2; t < 12; t += h)
        for (double p = -12 + h / 2; p < 12; p += h)
            sum += gaussian_pdf(cov, mean, {t, p});
    CHECK(std::abs(sum * h * h - 1.0) < 1e-6);
}
