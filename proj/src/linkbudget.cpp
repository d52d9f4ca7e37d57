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

#include "beamadapt/linkbudget.hpp"

#include <cmath>
#include <fmt/format.h>

#include "beamadapt/array.hpp"
#include "beamadapt/errors.hpp"

namespace beamadapt
{

void LinkBudget::validate() const
{
    if (!(bandwidth_mhz > 0.0))
        throw DomainError(fmt::format("bandwidth must be positive, got {} MHz", bandwidth_mhz));
    if (!(carrier_frequency_ghz > 0.0))
        throw DomainError(fmt::format("carrier frequency must be positive, got {} GHz", carrier_frequency_ghz));
    if (n_tx_antennas < 1)
        throw DomainError(fmt::format("need at least one transmit antenna, got {}", n_tx_antennas));
    if (!(path_loss_exponent >= 2.0))
        throw DomainError(fmt::format("path loss exponent must be >= 2, got {}", path_loss_exponent));
    if (!std::isfinite(tx_power_density_dbm_per_mhz) || !std::isfinite(noise_psd_dbm_per_hz) ||
        !std::isfinite(snr_threshold_db))
        throw DomainError("link budget levels must be finite");
}

double LinkBudget::wavelength_m() const { return kSpeedOfLight / (carrier_frequency_ghz * 1e9); }

double LinkBudget::total_tx_power_dbm() const { return tx_power_density_dbm_per_mhz + 10.0 * std::log10(bandwidth_mhz); }

double LinkBudget::tx_gain_db() const { return 10.0 * std::log10(static_cast<double>(n_tx_antennas)); }

double path_loss_db(const LinkBudget &lb, double distance_m)
{
    if (!(distance_m > 0.0) || !std::isfinite(distance_m))
        throw DomainError(fmt::format("distance must be positive, got {} m", distance_m));
    return lb.path_loss_exponent * 10.0 * std::log10(4.0 * kPi * distance_m / lb.wavelength_m());
}

double received_power(const LinkBudget &lb, double g_rx_db, double distance_m)
{
    return lb.total_tx_power_dbm() + lb.tx_gain_db() + g_rx_db - path_loss_db(lb, distance_m);
}

double noise_power(const LinkBudget &lb) { return lb.noise_psd_dbm_per_hz + 10.0 * std::log10(lb.bandwidth_mhz * 1e6); }

double required_gain_threshold(const LinkBudget &lb, double distance_m)
{
    return lb.snr_threshold_db + noise_power(lb) - lb.total_tx_power_dbm() - lb.tx_gain_db() +
           path_loss_db(lb, distance_m);
}

double distance_for_gain_threshold(const LinkBudget &lb, double g0_db)
{
    const double path_loss = g0_db - lb.snr_threshold_db - noise_power(lb) + lb.total_tx_power_dbm() + lb.tx_gain_db();
    return lb.wavelength_m() / (4.0 * kPi) * std::pow(10.0, path_loss / (10.0 * lb.path_loss_exponent));
}

} // namespace beamadapt
