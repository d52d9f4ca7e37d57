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

#include <array>

#include "beamadapt/array.hpp"

namespace beamadapt
{

// Symmetric 2x2 matrix [[a, b], [b, c]].
struct SymmetricMatrix2
{
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double determinant() const { return a * c - b * b; }
    bool operator==(const SymmetricMatrix2 &) const = default;
};

struct EigenDecomposition
{
    std::array<double, 2> values;                 // descending
    std::array<std::array<double, 2>, 2> vectors; // vectors[i] pairs with values[i], unit norm
    double major_angle_deg;                       // major eigenvector, measured from the first coordinate axis
};

// Closed-form symmetric eigensolver. The major eigenvector maximises the
// Rayleigh quotient v'Av over unit vectors. Throws DomainError unless the
// matrix is positive definite.
EigenDecomposition eigendecompose(const SymmetricMatrix2 &matrix);

/// Gaussian DoA-error covariance in degrees.
///
/// matrix() is ordered (elevation, azimuth):
///   [[s_theta^2,            rho s_theta s_psi],
///    [rho s_theta s_psi,    s_psi^2          ]]
class AngularCovariance
{
public:
    AngularCovariance(double sigma_theta_deg, double sigma_psi_deg, double rho);

    // Accepts an (elevation, azimuth) ordered matrix; must be positive definite.
    static AngularCovariance from_matrix(const SymmetricMatrix2 &matrix);

    // Covariance with eigenvalues major_var >= minor_var (deg^2) whose major
    // axis sits at orientation_deg from the azimuth axis towards elevation.
    static AngularCovariance from_axes(double major_var, double minor_var, double orientation_deg);

    double sigma_theta() const { return sigma_theta_; }
    double sigma_psi() const { return sigma_psi_; }
    double rho() const { return rho_; }
    SymmetricMatrix2 matrix() const;

    bool operator==(const AngularCovariance &) const = default;

private:
    double sigma_theta_;
    double sigma_psi_;
    double rho_;
};

struct ConfidenceEllipse
{
    double orientation_deg; // major axis from the azimuth axis, in (-90, 90]
    double semi_major_deg;
    double semi_minor_deg;
    double confidence_level;
};

// k = sqrt(-2 ln(1 - p)): Mahalanobis radius enclosing probability p.
double confidence_scale(double confidence_level);

// Orientation of the major axis of a covariance, from the azimuth axis, in
// (-90, 90]. A circular covariance reports 0.
double major_axis_orientation_deg(const AngularCovariance &cov);

ConfidenceEllipse confidence_ellipse(const AngularCovariance &cov, double confidence_level);

// Squared Mahalanobis distance of x from mean; the azimuth difference is wrapped.
double mahalanobis_sq(const AngularCovariance &cov, Direction mean, Direction x);

// Bivariate normal density, per deg^2.
double gaussian_pdf(const AngularCovariance &cov, Direction mean, Direction x);

// Folds an angle into (-90, 90] (axis orientations are defined modulo 180).
double normalize_axis_angle(double angle_deg);

} // namespace beamadapt
