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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace beamadapt
{

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Receive gains below this value (exact pattern nulls) are reported as this value.
inline constexpr double kGainFloorDb = -250.0;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// cos/sin of an angle in degrees. Angles within 1e-9 deg of a multiple of 90 deg
// return exact 0/+-1 so that axis-aligned ellipses stay exactly axis-aligned.
struct CosSin
{
    double cos;
    double sin;
};
CosSin cos_sin_deg(double angle_deg);

// Wraps an azimuth into [-180, 180).
double wrap_azimuth(double psi_deg);

// Direction of arrival in the array frame. theta is the elevation above the
// horizontal boresight plane, psi the azimuth; (0, 0) is the array boresight.
// Degrees throughout.
struct Direction
{
    double theta_deg = 0.0;
    double psi_deg = 0.0;

    bool operator==(const Direction &) const = default;
};

// Validating constructor: theta in [-90, 90], psi in [-180, 180).
Direction make_direction(double theta_deg, double psi_deg);

// Folds an arbitrary (theta, psi) pair back into the valid ranges while keeping
// the physical direction (theta past +-90 continues over the pole).
Direction normalize_direction(double theta_deg, double psi_deg);

// Unit propagation vector of a direction:
//   x = cos(theta) sin(psi)   (azimuth axis, array rows)
//   y = sin(theta)            (elevation axis, array columns)
//   z = cos(theta) cos(psi)   (boresight, normal of the array plane)
struct UnitVector
{
    double x, y, z;
};
UnitVector unit_vector(Direction dir);

struct Position
{
    double x, y, z; // meters
};

/// Uniform rectangular array on the z = 0 plane, centred on the origin.
///
/// Element (m, n) with m in [0, rows) and n in [0, cols) sits at
/// ((m - (rows-1)/2) * spacing * lambda, (n - (cols-1)/2) * spacing * lambda, 0).
/// Rows advance along the azimuth axis and columns along the elevation axis.
class PlanarArrayGeometry
{
public:
    PlanarArrayGeometry(int rows, int cols, double spacing_wavelengths, double carrier_frequency_hz);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_); }
    double spacing() const { return spacing_; } // in wavelengths
    double carrier_frequency() const { return carrier_frequency_hz_; }
    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz_; }

    // Centred indices, half-integer for even dimensions.
    double centered_row(int m) const { return m - 0.5 * (rows_ - 1); }
    double centered_col(int n) const { return n - 0.5 * (cols_ - 1); }

    Position position(int m, int n) const;

    bool operator==(const PlanarArrayGeometry &) const = default;

private:
    int rows_;
    int cols_;
    double spacing_;
    double carrier_frequency_hz_;
};

/// Per-element gain pattern: the 3GPP vertical/horizontal cut model,
///   G(theta, psi) = G_max - min{ min[12 (theta/theta_3dB)^2, SL_V]
///                               + min[12 (psi/psi_3dB)^2, A_m], A_m }.
/// The pattern is fixed to boresight and does not follow the steered beam.
struct ElementPattern
{
    double theta_3db_deg = 65.0; // full vertical 3 dB beamwidth
    double psi_3db_deg = 65.0;   // full horizontal 3 dB beamwidth
    double sl_v_db = 30.0;       // vertical side-lobe limit
    double a_m_db = 30.0;        // front-back ratio
    double g_max_dbi = 8.0;

    void validate() const;
    bool operator==(const ElementPattern &) const = default;
};

/// Boolean on/off grid over the array elements, row-major.
class ActivationMask
{
public:
    ActivationMask(int rows, int cols, bool active = false);

    static ActivationMask full(int rows, int cols) { return {rows, cols, true}; }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t active_count() const { return active_count_; }

    bool active(int m, int n) const { return cells_[index(m, n)] != 0; }
    void set(int m, int n, bool on);

    ActivationMask transposed() const;

    // Invariant under (m, n) -> (rows-1-m, cols-1-n).
    bool is_point_symmetric() const;

    // Every element active here is also active in other.
    bool is_subset_of(const ActivationMask &other) const;

    // One line per row, '#' active and '.' inactive.
    std::string to_ascii() const;

    bool operator==(const ActivationMask &) const = default;

private:
    std::size_t index(int m, int n) const;

    int rows_;
    int cols_;
    std::vector<std::uint8_t> cells_;
    std::size_t active_count_ = 0;
};

// Element gain in dBi.
double element_gain(const ElementPattern &pattern, Direction dir);

// Phase-only steering weights, row-major over (m, n): w = exp(+j k(steer) . d).
std::vector<std::complex<double>> steering_weights(const PlanarArrayGeometry &geom, Direction steer);

// AF(eval) = sum over active elements of w_n(steer) exp(-j k(eval) . d_n).
// Throws DegenerateBeamError for an empty mask.
std::complex<double> array_factor(const PlanarArrayGeometry &geom, const ActivationMask &mask, Direction steer,
                                  Direction eval);

// 10 log10(|AF|^2 / active_count) + element_gain, floored at kGainFloorDb.
double receive_gain(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
                    Direction steer, Direction eval);

/// Precomputed receive-gain evaluator for one (geometry, pattern, mask, steer).
///
/// Gives the same values as receive_gain() but factors the array factor into
/// per-row partial sums so that whole rows of an integration grid (fixed theta)
/// are evaluated in O(rows) per cell.
class BeamPattern
{
public:
    BeamPattern(const PlanarArrayGeometry &geom, const ElementPattern &pattern, const ActivationMask &mask,
                Direction steer);

    std::size_t active_count() const { return active_count_; }

    double gain_db(Direction dir) const;

    // Gains at (theta, psi[j]) for every j; out.size() must equal psi_deg.size().
    void gain_row_db(double theta_deg, std::span<const double> psi_deg, std::span<double> out) const;

private:
    // |AF|^2 given the per-row column sums for the current theta.
    double power_at(double u_offset, std::span<const std::complex<double>> row_sums) const;
    void row_sums_for(double v_offset, std::span<std::complex<double>> row_sums) const;

    ElementPattern pattern_;
    int rows_;
    int cols_;
    double phase_scale_; // 2 pi * spacing
    double steer_u_;
    double steer_v_;
    std::vector<std::uint8_t> cells_;
    std::size_t active_count_;
    double log_active_count_db_;
};

} // namespace beamadapt
