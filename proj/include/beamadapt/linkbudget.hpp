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

namespace beamadapt
{

/// Downlink link parameters. Defaults are the reference 28 GHz scenario.
struct LinkBudget
{
    double tx_power_density_dbm_per_mhz = 3.0;
    double bandwidth_mhz = 400.0;
    double carrier_frequency_ghz = 28.0;
    int n_tx_antennas = 256;
    double noise_psd_dbm_per_hz = -174.0;
    double path_loss_exponent = 2.5;
    double snr_threshold_db = 3.0;

    void validate() const;
    double wavelength_m() const;
    double total_tx_power_dbm() const; // density integrated over the band
    double tx_gain_db() const;         // 10 log10(N_tx)

    bool operator==(const LinkBudget &) const = default;
};

// alpha * 10 log10(4 pi d / lambda), positive dB. Throws DomainError for d <= 0.
double path_loss_db(const LinkBudget &lb, double distance_m);

// P_tx,total + G_tx + g_rx - path loss, dBm.
double received_power(const LinkBudget &lb, double g_rx_db, double distance_m);

// Thermal noise over the band, dBm.
double noise_power(const LinkBudget &lb);

// Receive gain G0 at which the SNR equals the threshold at this distance.
double required_gain_threshold(const LinkBudget &lb, double distance_m);

// Inverse of required_gain_threshold: the distance at which G0 equals g0_db.
double distance_for_gain_threshold(const LinkBudget &lb, double g0_db);

} // namespace beamadapt
