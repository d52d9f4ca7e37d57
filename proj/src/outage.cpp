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

#include "beamadapt/outage.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <random>
#include <utility>

#include "beamadapt/errors.hpp"
#include "beamadapt/parallel.hpp"

namespace beamadapt
{

void IntegrationGrid::validate() const
{
    if (!(resolution_deg > 0.0) || !std::isfinite(resolution_deg))
        throw DomainError(fmt::format("grid resolution must be positive, got {}", resolution_deg));
    if (!(half_width_sigmas >= 3.0) || !std::isfinite(half_width_sigmas))
        throw DomainError(fmt::format("grid half width must be at least 3 sigma, got {}", half_width_sigmas));
}

namespace
{

std::vector<double> axis_centres(double center, double half_width, double lo, double hi, double resolution)
{
    const double a = std::max(center - half_width, lo);
    const double b = std::min(center + half_width, hi);
    const double width = b - a;
    if (!(width > 0.0))
        return {};
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(width / resolution - 1e-9)));
    const double step = width / static_cast<double>(n);
    std::vector<double> centres(n);
    for (std::size_t i = 0; i < n; ++i)
        centres[i] = a + (static_cast<double>(i) + 0.5) * step;
    return centres;
}

} // namespace

GridLayout::GridLayout(const IntegrationGrid &grid, const AngularCovariance &cov, Direction center)
{
    grid.validate();
    const double half = grid.half_width_sigmas * std::max(cov.sigma_theta(), cov.sigma_psi());
    thetas_ = axis_centres(center.theta_deg, half, -90.0, 90.0, grid.resolution_deg);
    psis_ = axis_centres(center.psi_deg, half, -180.0, 180.0, grid.resolution_deg);
    if (thetas_.empty() || psis_.empty())
        throw DomainError(fmt::format("integration grid around ({}, {}) has no cells", center.theta_deg,
                                      center.psi_deg));
    const double d_theta = thetas_.size() > 1 ? thetas_[1] - thetas_[0]
                                              : 2.0 * (thetas_[0] - std::max(center.theta_deg - half, -90.0));
    const double d_psi = psis_.size() > 1 ? psis_[1] - psis_[0]
                                          : 2.0 * (psis_[0] - std::max(center.psi_deg - half, -180.0));
    cell_area_ = d_theta * d_psi;
}

std::vector<double> cell_probabilities(const GridLayout &layout, const AngularCovariance &cov, Direction mean)
{
    std::vector<double> p(layout.cell_count());
    const auto thetas = layout.thetas();
    const auto psis = layout.psis();
    for (std::size_t i = 0; i < layout.rows(); ++i)
        for (std::size_t j = 0; j < layout.cols(); ++j)
            p[i * layout.cols() + j] = gaussian_pdf(cov, mean, {thetas[i], psis[j]}) * layout.cell_area();
    return p;
}

namespace
{

// P(a U + b V <= s) for U, V uniform on [-1/2, 1/2], a >= b >= 0: the area of a
// unit cell on the covered side of a linear gain with centre excess s.
double trapezoid_cdf(double s, double a, double b)
{
    if (a <= 0.0)
        return s >= 0.0 ? 1.0 : 0.0;
    const double outer = 0.5 * (a + b);
    const double inner = 0.5 * (a - b);
    const double t = std::abs(s);
    double upper; // probability mass above t
    if (t >= outer)
        upper = 0.0;
    else if (t > inner)
        upper = (outer - t) * (outer - t) / (2.0 * a * b);
    else
        upper = 0.5 - t / a;
    return s >= 0.0 ? 1.0 - upper : upper;
}

} // namespace

GainField::GainField(const GridLayout &layout, const BeamPattern &beam, unsigned threads)
    : rows_(layout.rows()), cols_(layout.cols()), values_(layout.cell_count()), local_(layout.cell_count())
{
    const auto thetas = layout.thetas();
    const auto psis = layout.psis();
    parallel_for(
        rows_,
        [&](std::size_t i) { beam.gain_row_db(thetas[i], psis, std::span<double>(values_).subspan(i * cols_, cols_)); },
        threads);

    auto at = [&](std::size_t i, std::size_t j) { return values_[i * cols_ + j]; };
    auto slope = [](double lo, double hi, double span) { return span > 0 ? (hi - lo) / span : 0.0; };
    lowest_ = std::numeric_limits<double>::infinity();
    highest_ = -lowest_;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
        {
            const std::size_t i0 = i > 0 ? i - 1 : i, i1 = i + 1 < rows_ ? i + 1 : i;
            const std::size_t j0 = j > 0 ? j - 1 : j, j1 = j + 1 < cols_ ? j + 1 : j;
            const double g = at(i, j);
            const double gi = std::abs(slope(at(i0, j), at(i1, j), static_cast<double>(i1 - i0)));
            const double gj = std::abs(slope(at(i, j0), at(i, j1), static_cast<double>(j1 - j0)));
            const double lo = std::min({g, at(i0, j), at(i1, j), at(i, j0), at(i, j1)});
            const double hi = std::max({g, at(i0, j), at(i1, j), at(i, j0), at(i, j1)});
            const double reach = 0.5 * (gi + gj);
            Local &l = local_[i * cols_ + j];
            l.slope_a = std::max(gi, gj);
            l.slope_b = std::min(gi, gj);
            l.full = std::max(g - reach, lo);
            l.none = std::min(g + reach, hi);
            lowest_ = std::min(lowest_, l.full);
            highest_ = std::max(highest_, l.none);
        }
}

double GainField::covered_fraction(std::size_t k, double g0_db) const
{
    const Local &l = local_[k];
    if (g0_db <= l.full)
        return 1.0;
    if (g0_db > l.none)
        return 0.0;
    return std::clamp(trapezoid_cdf(values_[k] - g0_db, l.slope_a, l.slope_b), 0.0, 1.0);
}

double covered_mass(std::size_t rows, std::size_t cols, std::span<const double> probabilities,
                    const std::function<bool(std::size_t)> &covered)
{
    double total = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
    {
        double row = 0.0;
        for (std::size_t j = 0; j < cols; ++j)
        {
            const std::size_t k = i * cols + j;
            if (covered(k))
                row += probabilities[k];
        }
        total += row;
    }
    return total;
}

namespace
{

double outage_from_mass(double mass) { return std::clamp(1.0 - mass, 0.0, 1.0); }

void check_sizes(const GainField &field, std::span<const double> probabilities)
{
    if (probabilities.size() != field.values().size())
        throw std::invalid_argument("probability weights do not match the gain field");
}

} // namespace

double outage_from_field(const GainField &field, std::span<const double> probabilities, double g0_db)
{
    return outage_from_field(field, probabilities, std::span<const double>(&g0_db, 1)).front();
}

std::vector<double> outage_from_field(const GainField &field, std::span<const double> probabilities,
                                      std::span<const double> g0_db)
{
    check_sizes(field, probabilities);
    const std::size_t nt = g0_db.size();
    std::vector<double> total(nt, 0.0);
    std::vector<double> row(nt);
    for (std::size_t i = 0; i < field.rows(); ++i)
    {
        std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t j = 0; j < field.cols(); ++j)
        {
            const std::size_t k = i * field.cols() + j;
            for (std::size_t t = 0; t < nt; ++t)
                row[t] += probabilities[k] * field.covered_fraction(k, g0_db[t]);
        }
        for (std::size_t t = 0; t < nt; ++t)
            total[t] += row[t];
    }
    std::vector<double> out(nt);
    for (std::size_t t = 0; t < nt; ++t)
        out[t] = outage_from_mass(total[t]);
    return out;
}

double critical_gain_db(const GainField &field, std::span<const double> probabilities, double outage_threshold)
{
    check_sizes(field, probabilities);
    // Outage is continuous and non-decreasing in g0: bisect.
    double lo = field.lowest_partial_db();
    double hi = field.highest_partial_db();
    if (outage_from_field(field, probabilities, lo) > outage_threshold)
        return -std::numeric_limits<double>::infinity();
    if (outage_from_field(field, probabilities, hi) <= outage_threshold)
        return hi;
    while (hi - lo > 1e-9)
    {
        const double mid = 0.5 * (lo + hi);
        if (outage_from_field(field, probabilities, mid) <= outage_threshold)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

bool indicator(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
               Direction steer, double g0_db, Direction eval)
{
    return receive_gain(geom, pattern, mask, steer, eval) >= g0_db;
}

double outage_probability(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
                          Direction steer, const AngularCovariance &cov, Direction mean, double g0_db,
                          const IntegrationGrid &grid)
{
    const GridLayout layout(grid, cov, mean);
    const BeamPattern beam(geom, pattern, mask, steer);
    const GainField field(layout, beam);
    const auto probabilities = cell_probabilities(layout, cov, mean);
    return outage_from_field(field, probabilities, g0_db);
}

double outage_probability(const AngularCovariance &cov, Direction mean, const IntegrationGrid &grid,
                          const CoverageTest &covered)
{
    const GridLayout layout(grid, cov, mean);
    const auto probabilities = cell_probabilities(layout, cov, mean);
    const auto thetas = layout.thetas();
    const auto psis = layout.psis();
    const std::size_t cols = layout.cols();
    return outage_from_mass(covered_mass(layout.rows(), cols, probabilities, [&](std::size_t k) {
        return covered({thetas[k / cols], psis[k % cols]});
    }));
}

namespace
{

constexpr std::uint64_t kMonteCarloBlock = 1u << 16;

MonteCarloEstimate run_monte_carlo(const AngularCovariance &cov, Direction mean, const CoverageTest &covered,
                                   std::uint64_t n_samples, std::uint64_t seed)
{
    if (n_samples < 10000)
        throw DomainError(fmt::format("Monte Carlo needs at least 10^4 samples, got {}", n_samples));

    const double s_theta = cov.sigma_theta();
    const double s_psi = cov.sigma_psi();
    const double rho = cov.rho();
    const double rho_c = std::sqrt(1.0 - rho * rho);

    const std::uint64_t blocks = (n_samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
    std::vector<std::uint64_t> misses(blocks, 0);
    parallel_for(blocks, [&](std::size_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(static_cast<std::uint64_t>(b) >> 32)};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> normal(0.0, 1.0);
        const std::uint64_t begin = b * kMonteCarloBlock;
        const std::uint64_t end = std::min(n_samples, begin + kMonteCarloBlock);
        std::uint64_t count = 0;
        for (std::uint64_t s = begin; s < end; ++s)
        {
            const double z1 = normal(rng);
            const double z2 = normal(rng);
            const double theta = mean.theta_deg + s_theta * z1;
            const double psi = mean.psi_deg + s_psi * (rho * z1 + rho_c * z2);
            if (!covered(normalize_direction(theta, psi)))
                ++count;
        }
        misses[b] = count;
    });

    std::uint64_t total = 0;
    for (const auto m : misses)
        total += m;
    const double p = static_cast<double>(total) / static_cast<double>(n_samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples)), n_samples};
}

} // namespace

MonteCarloEstimate outage_probability_mc(const PlanarArrayGeometry &geom, const ElementPattern &pattern,
                                         const ActivationMask &mask, Direction steer, const AngularCovariance &cov,
                                         Direction mean, double g0_db, std::uint64_t n_samples, std::uint64_t seed)
{
    const BeamPattern beam(geom, pattern, mask, steer);
    return run_monte_carlo(
        cov, mean, [&](Direction d) { return beam.gain_db(d) >= g0_db; }, n_samples, seed);
}

MonteCarloEstimate outage_probability_mc(const AngularCovariance &cov, Direction mean, const CoverageTest &covered,
                                         std::uint64_t n_samples, std::uint64_t seed)
{
    return run_monte_carlo(cov, mean, covered, n_samples, seed);
}

double uniform_gain_approx(double coverage_area_rad2)
{
    if (!(coverage_area_rad2 > 0.0))
        throw DomainError(fmt::format("coverage area must be positive, got {}", coverage_area_rad2));
    return kPi * kPi / coverage_area_rad2;
}

} // namespace beamadapt
