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

#include "beamadapt/array.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "beamadapt/errors.hpp"

namespace beamadapt
{

CosSin cos_sin_deg(double angle_deg)
{
    const double quarter = angle_deg / 90.0;
    const double nearest = std::round(quarter);
    if (std::abs(angle_deg - 90.0 * nearest) < 1e-9)
    {
        switch (((static_cast<long long>(nearest) % 4) + 4) % 4)
        {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    const double rad = deg_to_rad(angle_deg);
    return {std::cos(rad), std::sin(rad)};
}

double wrap_azimuth(double psi_deg)
{
    double wrapped = std::fmod(psi_deg + 180.0, 360.0);
    if (wrapped < 0.0)
        wrapped += 360.0;
    wrapped -= 180.0;
    // fmod can land exactly on +180 after the shift for inputs like -180 - eps.
    return wrapped >= 180.0 ? wrapped - 360.0 : wrapped;
}

Direction make_direction(double theta_deg, double psi_deg)
{
    if (!(theta_deg >= -90.0 && theta_deg <= 90.0))
        throw DomainError(fmt::format("elevation {} deg outside [-90, 90]", theta_deg));
    if (!(psi_deg >= -180.0 && psi_deg < 180.0))
        throw DomainError(fmt::format("azimuth {} deg outside [-180, 180)", psi_deg));
    return {theta_deg, psi_deg};
}

Direction normalize_direction(double theta_deg, double psi_deg)
{
    double theta = std::fmod(theta_deg, 360.0);
    if (theta > 180.0)
        theta -= 360.0;
    else if (theta <= -180.0)
        theta += 360.0;
    double psi = psi_deg;
    if (theta > 90.0)
    {
        theta = 180.0 - theta;
        psi += 180.0;
    }
    else if (theta < -90.0)
    {
        theta = -180.0 - theta;
        psi += 180.0;
    }
    return {theta, wrap_azimuth(psi)};
}

UnitVector unit_vector(Direction dir)
{
    const double th = deg_to_rad(dir.theta_deg);
    const double ps = deg_to_rad(dir.psi_deg);
    const double ct = std::cos(th);
    return {ct * std::sin(ps), std::sin(th), ct * std::cos(ps)};
}

PlanarArrayGeometry::PlanarArrayGeometry(int rows, int cols, double spacing_wavelengths, double carrier_frequency_hz)
    : rows_(rows), cols_(cols), spacing_(spacing_wavelengths), carrier_frequency_hz_(carrier_frequency_hz)
{
    if (rows < 1 || cols < 1)
        throw DomainError(fmt::format("array needs at least one row and column, got {}x{}", rows, cols));
    if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths))
        throw DomainError(fmt::format("element spacing must be positive, got {}", spacing_wavelengths));
    if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz))
        throw DomainError(fmt::format("carrier frequency must be positive, got {}", carrier_frequency_hz));
}

Position PlanarArrayGeometry::position(int m, int n) const
{
    const double pitch = spacing_ * wavelength();
    return {centered_row(m) * pitch, centered_col(n) * pitch, 0.0};
}

void ElementPattern::validate() const
{
    if (!(theta_3db_deg > 0.0) || !(psi_3db_deg > 0.0))
        throw DomainError("element 3 dB beamwidths must be positive");
    if (!(sl_v_db > 0.0))
        throw DomainError("element side-lobe limit SL_V must be positive");
    if (!(a_m_db > 0.0))
        throw DomainError("element front-back ratio A_m must be positive");
    if (!std::isfinite(g_max_dbi))
        throw DomainError("element peak gain must be finite");
}

ActivationMask::ActivationMask(int rows, int cols, bool active)
    : rows_(rows), cols_(cols)
{
    if (rows < 1 || cols < 1)
        throw DomainError(fmt::format("mask needs at least one row and column, got {}x{}", rows, cols));
    cells_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), active ? 1 : 0);
    active_count_ = active ? cells_.size() : 0;
}

std::size_t ActivationMask::index(int m, int n) const
{
    if (m < 0 || m >= rows_ || n < 0 || n >= cols_)
        throw std::out_of_range(fmt::format("element ({}, {}) outside {}x{} mask", m, n, rows_, cols_));
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(n);
}

void ActivationMask::set(int m, int n, bool on)
{
    auto &cell = cells_[index(m, n)];
    if ((cell != 0) == on)
        return;
    cell = on ? 1 : 0;
    if (on)
        ++active_count_;
    else
        --active_count_;
}

ActivationMask ActivationMask::transposed() const
{
    ActivationMask out(cols_, rows_);
    for (int m = 0; m < rows_; ++m)
        for (int n = 0; n < cols_; ++n)
            out.set(n, m, active(m, n));
    return out;
}

bool ActivationMask::is_point_symmetric() const
{
    for (int m = 0; m < rows_; ++m)
        for (int n = 0; n < cols_; ++n)
            if (active(m, n) != active(rows_ - 1 - m, cols_ - 1 - n))
                return false;
    return true;
}

bool ActivationMask::is_subset_of(const ActivationMask &other) const
{
    if (other.rows_ != rows_ || other.cols_ != cols_)
        return false;
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i] != 0 && other.cells_[i] == 0)
            return false;
    return true;
}

std::string ActivationMask::to_ascii() const
{
    std::string out;
    out.reserve(cells_.size() + static_cast<std::size_t>(rows_));
    for (int m = 0; m < rows_; ++m)
    {
        for (int n = 0; n < cols_; ++n)
            out.push_back(active(m, n) ? '#' : '.');
        out.push_back('\n');
    }
    return out;
}

double element_gain(const ElementPattern &pattern, Direction dir)
{
    const double vertical = std::min(12.0 * std::pow(dir.theta_deg / pattern.theta_3db_deg, 2), pattern.sl_v_db);
    const double horizontal = std::min(12.0 * std::pow(dir.psi_deg / pattern.psi_3db_deg, 2), pattern.a_m_db);
    return pattern.g_max_dbi - std::min(vertical + horizontal, pattern.a_m_db);
}

std::vector<std::complex<double>> steering_weights(const PlanarArrayGeometry &geom, Direction steer)
{
    const UnitVector r = unit_vector(steer);
    const double scale = 2.0 * kPi * geom.spacing();
    std::vector<std::complex<double>> w;
    w.reserve(geom.size());
    for (int m = 0; m < geom.rows(); ++m)
        for (int n = 0; n < geom.cols(); ++n)
            w.push_back(std::polar(1.0, scale * (r.x * geom.centered_row(m) + r.y * geom.centered_col(n))));
    return w;
}

std::complex<double> array_factor(const PlanarArrayGeometry &geom, const ActivationMask &mask, Direction steer,
                                  Direction eval)
{
    if (mask.rows() != geom.rows() || mask.cols() != geom.cols())
        throw DomainError("mask shape does not match array geometry");
    if (mask.active_count() == 0)
        throw DegenerateBeamError("array factor of an empty activation mask");

    const auto weights = steering_weights(geom, steer);
    const UnitVector r = unit_vector(eval);
    const double scale = 2.0 * kPi * geom.spacing();
    std::complex<double> af{0.0, 0.0};
    for (int m = 0; m < geom.rows(); ++m)
        for (int n = 0; n < geom.cols(); ++n)
        {
            if (!mask.active(m, n))
                continue;
            const double phase = scale * (r.x * geom.centered_row(m) + r.y * geom.centered_col(n));
            af += weights[static_cast<std::size_t>(m * geom.cols() + n)] * std::polar(1.0, -phase);
        }
    return af;
}

namespace
{

double gain_from_power(double af_power, double log_active_count_db, double element_db)
{
    if (!(af_power > 0.0))
        return kGainFloorDb;
    return std::max(10.0 * std::log10(af_power) - log_active_count_db + element_db, kGainFloorDb);
}

} // namespace

double receive_gain(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
                    Direction steer, Direction eval)
{
    const double power = std::norm(array_factor(geom, mask, steer, eval));
    return gain_from_power(power, 10.0 * std::log10(static_cast<double>(mask.active_count())),
                           element_gain(pattern, eval));
}

BeamPattern::BeamPattern(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
                         Direction steer)
    : pattern_(pattern), rows_(geom.rows()), cols_(geom.cols()), phase_scale_(2.0 * kPi * geom.spacing())
{
    if (mask.rows() != geom.rows() || mask.cols() != geom.cols())
        throw DomainError("mask shape does not match array geometry");
    if (mask.active_count() == 0)
        throw DegenerateBeamError("beam pattern of an empty activation mask");
    const UnitVector s = unit_vector(steer);
    steer_u_ = s.x;
    steer_v_ = s.y;
    cells_.resize(geom.size());
    for (int m = 0; m < rows_; ++m)
        for (int n = 0; n < cols_; ++n)
            cells_[static_cast<std::size_t>(m * cols_ + n)] = mask.active(m, n) ? 1 : 0;
    active_count_ = mask.active_count();
    log_active_count_db_ = 10.0 * std::log10(static_cast<double>(active_count_));
}

void BeamPattern::row_sums_for(double v_offset, std::span<std::complex<double>> row_sums) const
{
    // exp(-j phase n_c) for the centred column indices, by recurrence.
    const double phase = phase_scale_ * v_offset;
    const std::complex<double> step = std::polar(1.0, -phase);
    std::complex<double> col_phasor = std::polar(1.0, phase * 0.5 * (cols_ - 1));
    std::fill(row_sums.begin(), row_sums.end(), std::complex<double>{0.0, 0.0});
    for (int n = 0; n < cols_; ++n)
    {
        for (int m = 0; m < rows_; ++m)
            if (cells_[static_cast<std::size_t>(m * cols_ + n)] != 0)
                row_sums[static_cast<std::size_t>(m)] += col_phasor;
        col_phasor *= step;
    }
}

double BeamPattern::power_at(double u_offset, std::span<const std::complex<double>> row_sums) const
{
    const double phase = phase_scale_ * u_offset;
    const std::complex<double> step = std::polar(1.0, -phase);
    std::complex<double> row_phasor = std::polar(1.0, phase * 0.5 * (rows_ - 1));
    std::complex<double> af{0.0, 0.0};
    for (int m = 0; m < rows_; ++m)
    {
        af += row_phasor * row_sums[static_cast<std::size_t>(m)];
        row_phasor *= step;
    }
    return std::norm(af);
}

double BeamPattern::gain_db(Direction dir) const
{
    const UnitVector r = unit_vector(dir);
    thread_local std::vector<std::complex<double>> sums;
    sums.resize(static_cast<std::size_t>(rows_));
    row_sums_for(r.y - steer_v_, sums);
    return gain_from_power(power_at(r.x - steer_u_, sums), log_active_count_db_, element_gain(pattern_, dir));
}

void BeamPattern::gain_row_db(double theta_deg, std::span<const double> psi_deg, std::span<double> out) const
{
    if (out.size() != psi_deg.size())
        throw std::invalid_argument("gain_row_db: output span size mismatch");
    const double th = deg_to_rad(theta_deg);
    const double cos_theta = std::cos(th);
    std::vector<std::complex<double>> sums(static_cast<std::size_t>(rows_));
    row_sums_for(std::sin(th) - steer_v_, sums);
    for (std::size_t j = 0; j < psi_deg.size(); ++j)
    {
        const double u = cos_theta * std::sin(deg_to_rad(psi_deg[j]));
        out[j] = gain_from_power(power_at(u - steer_u_, sums), log_active_count_db_,
                                 element_gain(pattern_, {theta_deg, psi_deg[j]}));
    }
}

} // namespace beamadapt
