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
#include <functional>
#include <span>
#include <vector>

#include "beamadapt/array.hpp"
#include "beamadapt/uncertainty.hpp"

namespace beamadapt
{

/// Discretisation of the outage integral: a midpoint-rule grid spanning
/// mean +- half_width_sigmas * max(sigma_theta, sigma_psi) on both axes,
/// clipped to the valid angle ranges.
struct IntegrationGrid
{
    double half_width_sigmas = 6.0;
    double resolution_deg = 0.05;

    void validate() const;
    bool operator==(const IntegrationGrid &) const = default;
};

/// Cell centres of an IntegrationGrid resolved around a mean direction.
/// Cells are stored row-major: elevation rows, azimuth columns.
class GridLayout
{
public:
    GridLayout(const IntegrationGrid &grid, const AngularCovariance &cov, Direction center);

    std::span<const double> thetas() const { return thetas_; }
    std::span<const double> psis() const { return psis_; }
    std::size_t rows() const { return thetas_.size(); }
    std::size_t cols() const { return psis_.size(); }
    std::size_t cell_count() const { return rows() * cols(); }
    double cell_area() const { return cell_area_; } // deg^2

private:
    std::vector<double> thetas_;
    std::vector<double> psis_;
    double cell_area_;
};

// Probability mass pdf(cell centre) * cell area of every cell.
std::vector<double> cell_probabilities(const GridLayout &layout, const AngularCovariance &cov, Direction mean);

/// Receive gain (dB) at every cell of a layout for one beam.
///
/// Also keeps, per cell, the local gain slopes (dB per cell, central
/// differences) and the gain range over the cell and its four neighbours. A
/// cell that the threshold contour crosses counts with the fraction of its area
/// on the covered side of the linearised gain, clipped to that local range;
/// every other cell counts fully or not at all. This removes the lattice noise a
/// hard midpoint indicator picks up along curved contours.
class GainField
{
public:
    GainField(const GridLayout &layout, const BeamPattern &beam, unsigned threads = 0);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::span<const double> values() const { return values_; }

    // Covered fraction of cell k at threshold g0, in [0, 1]. Exactly 1 when
    // g0 <= every local gain and exactly 0 when g0 exceeds every local gain.
    double covered_fraction(std::size_t k, double g0_db) const;

    // Thresholds below which / above which every cell is fully covered / uncovered.
    double lowest_partial_db() const { return lowest_; }
    double highest_partial_db() const { return highest_; }

private:
    struct Local
    {
        double slope_a; // larger absolute slope, dB per cell
        double slope_b; // smaller absolute slope
        double full;    // g0 at or below this: fully covered
        double none;    // g0 above this: uncovered
    };

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::vector<Local> local_;
    double lowest_;
    double highest_;
};

// Covered mass: sum of probabilities[i] over cells with covered(i). Partial
// sums run along each grid row, then rows are added top to bottom; every outage
// figure in the library goes through this order.
double covered_mass(std::size_t rows, std::size_t cols, std::span<const double> probabilities,
                    const std::function<bool(std::size_t)> &covered);

// 1 - covered mass of {gain >= g0}, clamped to [0, 1].
double outage_from_field(const GainField &field, std::span<const double> probabilities, double g0_db);

// The same for several thresholds in one pass; identical to calling the
// single-threshold form for each entry.
std::vector<double> outage_from_field(const GainField &field, std::span<const double> probabilities,
                                      std::span<const double> g0_db);

// Largest threshold g0 whose outage is <= outage_threshold, to 1e-9 dB
// (-infinity when the window itself holds too little mass).
double critical_gain_db(const GainField &field, std::span<const double> probabilities, double outage_threshold);

// True iff receive_gain(eval) >= g0.
bool indicator(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
               Direction steer, double g0_db, Direction eval);

// Misalignment outage 1 - integral of N(x; mean, cov) over {x : gain(x) >= g0}.
// Throws DomainError when the grid resolves to zero cells.
double outage_probability(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
                          Direction steer, const AngularCovariance &cov, Direction mean, double g0_db,
                          const IntegrationGrid &grid);

// Covered region given as a predicate over directions; same quadrature.
using CoverageTest = std::function<bool(Direction)>;
double outage_probability(const AngularCovariance &cov, Direction mean, const IntegrationGrid &grid,
                          const CoverageTest &covered);

struct MonteCarloEstimate
{
    double probability;
    double standard_error; // binomial, sqrt(p (1 - p) / n)
    std::uint64_t samples;
};

// Seeded Monte Carlo estimate of the outage. Samples are drawn in fixed blocks,
// each block with its own generator derived from (seed, block index), so the
// result is independent of the worker count. n_samples must be >= 10^4.
MonteCarloEstimate outage_probability_mc(const PlanarArrayGeometry &geom, const ElementPattern &pattern,
                                         const ActivationMask &mask, Direction steer, const AngularCovariance &cov,
                                         Direction mean, double g0_db, std::uint64_t n_samples, std::uint64_t seed);

MonteCarloEstimate outage_probability_mc(const AngularCovariance &cov, Direction mean, const CoverageTest &covered,
                                         std::uint64_t n_samples, std::uint64_t seed);

// Idealised beam of uniform gain over an angular area (rad^2): pi^2 / area.
double uniform_gain_approx(double coverage_area_rad2);

} // namespace beamadapt
