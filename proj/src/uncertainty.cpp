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

#include "beamadapt/uncertainty.hpp"

#include <cmath>
#include <fmt/format.h>

#include "beamadapt/errors.hpp"

namespace beamadapt
{

namespace
{

void require_positive_definite(const SymmetricMatrix2 &m)
{
    if (!std::isfinite(m.a) || !std::isfinite(m.b) || !std::isfinite(m.c))
        throw DomainError("covariance has non-finite entries");
    if (!(m.a > 0.0) || !(m.determinant() > 0.0))
        throw DomainError(fmt::format("matrix [[{}, {}], [{}, {}]] is not positive definite", m.a, m.b, m.b, m.c));
}

} // namespace

double normalize_axis_angle(double angle_deg)
{
    double a = std::fmod(angle_deg, 180.0);
    if (a <= -90.0)
        a += 180.0;
    else if (a > 90.0)
        a -= 180.0;
    return a;
}

EigenDecomposition eigendecompose(const SymmetricMatrix2 &matrix)
{
    require_positive_definite(matrix);
    const double mean = 0.5 * (matrix.a + matrix.c);
    const double radius = std::hypot(0.5 * (matrix.a - matrix.c), matrix.b);
    const double major = mean + radius;
    const double minor = matrix.determinant() / major;

    const double t = 0.5 * std::atan2(2.0 * matrix.b, matrix.a - matrix.c);
    const double ct = std::cos(t);
    const double st = std::sin(t);

    EigenDecomposition out;
    out.values = {major, minor};
    out.vectors = {{{ct, st}, {-st, ct}}};
    out.major_angle_deg = rad_to_deg(t);
    return out;
}

AngularCovariance::AngularCovariance(double sigma_theta_deg, double sigma_psi_deg, double rho)
    : sigma_theta_(sigma_theta_deg), sigma_psi_(sigma_psi_deg), rho_(rho)
{
    if (!(sigma_theta_deg > 0.0) || !(sigma_psi_deg > 0.0) || !std::isfinite(sigma_theta_deg) ||
        !std::isfinite(sigma_psi_deg))
        throw DomainError(fmt::format("standard deviations must be positive, got ({}, {})", sigma_theta_deg,
                                      sigma_psi_deg));
    if (!(rho > -1.0 && rho < 1.0))
        throw DomainError(fmt::format("correlation must lie in (-1, 1), got {}", rho));
}

AngularCovariance AngularCovariance::from_matrix(const SymmetricMatrix2 &matrix)
{
    require_positive_definite(matrix);
    const double st = std::sqrt(matrix.a);
    const double sp = std::sqrt(matrix.c);
    return {st, sp, matrix.b / (st * sp)};
}

AngularCovariance AngularCovariance::from_axes(double major_var, double minor_var, double orientation_deg)
{
    if (!(minor_var > 0.0) || !(major_var >= minor_var))
        throw DomainError(fmt::format("need major >= minor > 0, got ({}, {})", major_var, minor_var));
    const CosSin cs = cos_sin_deg(orientation_deg);
    // Major axis direction is (cos, sin) in (azimuth, elevation) coordinates.
    SymmetricMatrix2 m;
    m.a = major_var * cs.sin * cs.sin + minor_var * cs.cos * cs.cos;
    m.c = major_var * cs.cos * cs.cos + minor_var * cs.sin * cs.sin;
    m.b = (major_var - minor_var) * cs.sin * cs.cos;
    return from_matrix(m);
}

SymmetricMatrix2 AngularCovariance::matrix() const
{
    return {sigma_theta_ * sigma_theta_, rho_ * sigma_theta_ * sigma_psi_, sigma_psi_ * sigma_psi_};
}

double confidence_scale(double confidence_level)
{
    if (!(confidence_level > 0.0 && confidence_level < 1.0))
        throw DomainError(fmt::format("confidence level must lie in (0, 1), got {}", confidence_level));
    return std::sqrt(-2.0 * std::log1p(-confidence_level));
}

double major_axis_orientation_deg(const AngularCovariance &cov)
{
    const SymmetricMatrix2 m = cov.matrix();
    // Same half-angle formula as eigendecompose, with azimuth as the first axis.
    const double angle = rad_to_deg(0.5 * std::atan2(2.0 * m.b, m.c - m.a));
    double phi = normalize_axis_angle(angle);
    const double snapped = 90.0 * std::round(phi / 90.0);
    if (std::abs(phi - snapped) < 1e-9)
        phi = normalize_axis_angle(snapped);
    return phi;
}

ConfidenceEllipse confidence_ellipse(const AngularCovariance &cov, double confidence_level)
{
    const double k = confidence_scale(confidence_level);
    const EigenDecomposition eig = eigendecompose(cov.matrix());
    return {major_axis_orientation_deg(cov), k * std::sqrt(eig.values[0]), k * std::sqrt(eig.values[1]),
            confidence_level};
}

double mahalanobis_sq(const AngularCovariance &cov, Direction mean, Direction x)
{
    const SymmetricMatrix2 m = cov.matrix();
    const double dt = x.theta_deg - mean.theta_deg;
    const double dp = wrap_azimuth(x.psi_deg - mean.psi_deg);
    const double det = m.determinant();
    return (m.c * dt * dt - 2.0 * m.b * dt * dp + m.a * dp * dp) / det;
}

double gaussian_pdf(const AngularCovariance &cov, Direction mean, Direction x)
{
    const double det = cov.matrix().determinant();
    if (!(det > 0.0))
        throw DomainError("covariance is not positive definite");
    return std::exp(-0.5 * mahalanobis_sq(cov, mean, x)) / (2.0 * kPi * std::sqrt(det));
}

} // namespace beamadapt
