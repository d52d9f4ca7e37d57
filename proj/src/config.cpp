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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "beamadapt/errors.hpp"
#include "beamadapt/experiments.hpp"

namespace beamadapt
{

std::string_view to_string(PolicySelection selection)
{
    switch (selection)
    {
    case PolicySelection::generalized: return "generalized";
    case PolicySelection::baseline: return "baseline";
    case PolicySelection::both: return "both";
    }
    return "unknown";
}

std::optional<PolicySelection> parse_policy_selection(std::string_view name)
{
    if (name == "generalized")
        return PolicySelection::generalized;
    if (name == "baseline")
        return PolicySelection::baseline;
    if (name == "both")
        return PolicySelection::both;
    return std::nullopt;
}

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    double v = 0.0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ConfigError(std::string(key), fmt::format("expected a finite number, got '{}'", text));
    return v;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text)
{
    Int v = 0;
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(std::string(key), fmt::format("expected an integer, got '{}'", text));
    return v;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(std::string(key), fmt::format("expected true or false, got '{}'", text));
}

struct Field
{
    std::string_view section;
    std::string_view key;
    std::function<void(ExperimentConfig &, std::string_view key, std::string_view value)> set;
    std::function<std::string(const ExperimentConfig &)> get;
};

template <typename Getter>
Field number(std::string_view section, std::string_view key, Getter member)
{
    return {section, key,
            [member](ExperimentConfig &c, std::string_view k, std::string_view v) { member(c) = parse_double(k, v); },
            [member](const ExperimentConfig &c) { return fmt::format("{}", member(const_cast<ExperimentConfig &>(c))); }};
}

template <typename Int, typename Getter>
Field integer(std::string_view section, std::string_view key, Getter member)
{
    return {section, key,
            [member](ExperimentConfig &c, std::string_view k, std::string_view v) {
                member(c) = parse_integer<Int>(k, v);
            },
            [member](const ExperimentConfig &c) { return fmt::format("{}", member(const_cast<ExperimentConfig &>(c))); }};
}

// Single table driving parsing, overrides and rendering; the order here is the
// order of the rendered file.
const std::vector<Field> &fields()
{
    static const std::vector<Field> table = [] {
        using C = ExperimentConfig;
        std::vector<Field> f;
        f.push_back(number("linkbudget", "tx_power_density_dbm_per_mhz",
                           [](C &c) -> double & { return c.link.tx_power_density_dbm_per_mhz; }));
        f.push_back(number("linkbudget", "bandwidth_mhz", [](C &c) -> double & { return c.link.bandwidth_mhz; }));
        f.push_back(number("linkbudget", "carrier_frequency_ghz",
                           [](C &c) -> double & { return c.link.carrier_frequency_ghz; }));
        f.push_back(integer<int>("linkbudget", "n_tx_antennas", [](C &c) -> int & { return c.link.n_tx_antennas; }));
        f.push_back(number("linkbudget", "noise_psd_dbm_per_hz",
                           [](C &c) -> double & { return c.link.noise_psd_dbm_per_hz; }));
        f.push_back(number("linkbudget", "path_loss_exponent",
                           [](C &c) -> double & { return c.link.path_loss_exponent; }));
        f.push_back(number("linkbudget", "snr_threshold_db", [](C &c) -> double & { return c.link.snr_threshold_db; }));

        f.push_back(integer<int>("array", "rows", [](C &c) -> int & { return c.rows; }));
        f.push_back(integer<int>("array", "cols", [](C &c) -> int & { return c.cols; }));
        f.push_back(number("array", "spacing_wavelengths", [](C &c) -> double & { return c.spacing_wavelengths; }));

        f.push_back(number("element", "theta_3db_deg", [](C &c) -> double & { return c.element.theta_3db_deg; }));
        f.push_back(number("element", "psi_3db_deg", [](C &c) -> double & { return c.element.psi_3db_deg; }));
        f.push_back(number("element", "sl_v_db", [](C &c) -> double & { return c.element.sl_v_db; }));
        f.push_back(number("element", "a_m_db", [](C &c) -> double & { return c.element.a_m_db; }));
        f.push_back(number("element", "g_max_dbi", [](C &c) -> double & { return c.element.g_max_dbi; }));

        f.push_back(number("uncertainty", "sigma_theta_deg", [](C &c) -> double & { return c.sigma_theta_deg; }));
        f.push_back(number("uncertainty", "sigma_psi_deg", [](C &c) -> double & { return c.sigma_psi_deg; }));
        f.push_back(number("uncertainty", "rho", [](C &c) -> double & { return c.rho; }));
        f.push_back(number("uncertainty", "confidence_level", [](C &c) -> double & { return c.confidence_level; }));

        f.push_back(number("outage", "outage_threshold", [](C &c) -> double & { return c.outage_threshold; }));
        f.push_back(number("outage", "resolution_deg", [](C &c) -> double & { return c.grid.resolution_deg; }));
        f.push_back(number("outage", "half_width_sigmas", [](C &c) -> double & { return c.grid.half_width_sigmas; }));
        f.push_back(integer<std::uint64_t>("outage", "mc_samples", [](C &c) -> std::uint64_t & { return c.mc_samples; }));

        f.push_back(number("adaptation", "steer_offset_beta_deg",
                           [](C &c) -> double & { return c.steer_offset_beta_deg; }));

        f.push_back(number("sweep", "distance_min_m", [](C &c) -> double & { return c.sweep.distance_min_m; }));
        f.push_back(number("sweep", "distance_max_m", [](C &c) -> double & { return c.sweep.distance_max_m; }));
        f.push_back(integer<int>("sweep", "distance_points", [](C &c) -> int & { return c.sweep.distance_points; }));
        f.push_back(number("sweep", "rho_min", [](C &c) -> double & { return c.sweep.rho_min; }));
        f.push_back(number("sweep", "rho_max", [](C &c) -> double & { return c.sweep.rho_max; }));
        f.push_back(number("sweep", "rho_step", [](C &c) -> double & { return c.sweep.rho_step; }));
        f.push_back(number("sweep", "correlation_distance_m",
                           [](C &c) -> double & { return c.sweep.correlation_distance_m; }));
        f.push_back(number("sweep", "phi_min_deg", [](C &c) -> double & { return c.sweep.phi_min_deg; }));
        f.push_back(number("sweep", "phi_max_deg", [](C &c) -> double & { return c.sweep.phi_max_deg; }));
        f.push_back(number("sweep", "phi_step_deg", [](C &c) -> double & { return c.sweep.phi_step_deg; }));
        f.push_back(number("sweep", "orientation_distance_m",
                           [](C &c) -> double & { return c.sweep.orientation_distance_m; }));

        f.push_back({"output", "dir",
                     [](C &c, std::string_view, std::string_view v) { c.output_dir = std::string(v); },
                     [](const C &c) { return c.output_dir; }});
        f.push_back({"output", "plots", [](C &c, std::string_view k, std::string_view v) { c.plots = parse_bool(k, v); },
                     [](const C &c) { return std::string(c.plots ? "true" : "false"); }});
        f.push_back({"output", "policy",
                     [](C &c, std::string_view k, std::string_view v) {
                         const auto p = parse_policy_selection(v);
                         if (!p)
                             throw ConfigError(std::string(k),
                                               fmt::format("expected generalized, baseline or both, got '{}'", v));
                         c.policy = *p;
                     },
                     [](const C &c) { return std::string(to_string(c.policy)); }});

        f.push_back(integer<std::uint64_t>("run", "seed", [](C &c) -> std::uint64_t & { return c.seed; }));
        f.push_back(integer<unsigned>("run", "threads", [](C &c) -> unsigned & { return c.threads; }));
        return f;
    }();
    return table;
}

const Field *find_field(std::string_view section, std::string_view key)
{
    for (const auto &f : fields())
        if (f.section == section && f.key == key)
            return &f;
    return nullptr;
}

bool known_section(std::string_view section)
{
    return std::any_of(fields().begin(), fields().end(), [&](const Field &f) { return f.section == section; });
}

template <typename Fn>
void check(std::string_view key, bool ok, Fn &&message)
{
    if (!ok)
        throw ConfigError(std::string(key), message());
}

} // namespace

void ExperimentConfig::validate() const
{
    try
    {
        link.validate();
    }
    catch (const DomainError &e)
    {
        throw ConfigError("linkbudget", e.what());
    }
    check("array.rows", rows >= 1, [] { return std::string("must be >= 1"); });
    check("array.cols", cols >= 1, [] { return std::string("must be >= 1"); });
    check("array.spacing_wavelengths", spacing_wavelengths > 0.0, [] { return std::string("must be positive"); });
    try
    {
        element.validate();
    }
    catch (const DomainError &e)
    {
        throw ConfigError("element", e.what());
    }
    check("uncertainty.sigma_theta_deg", sigma_theta_deg > 0.0, [] { return std::string("must be positive"); });
    check("uncertainty.sigma_psi_deg", sigma_psi_deg > 0.0, [] { return std::string("must be positive"); });
    check("uncertainty.rho", rho > -1.0 && rho < 1.0, [] { return std::string("must lie in (-1, 1)"); });
    check("uncertainty.confidence_level", confidence_level > 0.0 && confidence_level < 1.0,
          [] { return std::string("must lie in (0, 1)"); });
    check("outage.outage_threshold", outage_threshold > 0.0 && outage_threshold <= 1.0,
          [] { return std::string("must lie in (0, 1]"); });
    check("outage.resolution_deg", grid.resolution_deg > 0.0, [] { return std::string("must be positive"); });
    check("outage.half_width_sigmas", grid.half_width_sigmas >= 3.0, [] { return std::string("must be >= 3"); });
    check("outage.mc_samples", mc_samples >= 10000, [] { return std::string("must be >= 10000"); });
    check("adaptation.steer_offset_beta_deg", std::abs(steer_offset_beta_deg) < 90.0,
          [] { return std::string("must satisfy |beta| < 90"); });

    check("sweep.distance_min_m", sweep.distance_min_m > 0.0, [] { return std::string("must be positive"); });
    check("sweep.distance_max_m", sweep.distance_max_m > sweep.distance_min_m,
          [] { return std::string("must exceed sweep.distance_min_m"); });
    check("sweep.distance_points", sweep.distance_points >= 2, [] { return std::string("must be >= 2"); });
    check("sweep.rho_min", sweep.rho_min >= 0.0 && sweep.rho_min <= 0.95, [] { return std::string("must lie in [0, 0.95]"); });
    check("sweep.rho_max", sweep.rho_max >= sweep.rho_min && sweep.rho_max <= 0.95,
          [] { return std::string("must lie in [sweep.rho_min, 0.95]"); });
    check("sweep.rho_step", sweep.rho_step > 0.0, [] { return std::string("must be positive"); });
    check("sweep.correlation_distance_m", sweep.correlation_distance_m > 0.0, [] { return std::string("must be positive"); });
    check("sweep.phi_min_deg", sweep.phi_min_deg >= -90.0 && sweep.phi_min_deg <= 90.0,
          [] { return std::string("must lie in [-90, 90]"); });
    check("sweep.phi_max_deg", sweep.phi_max_deg >= sweep.phi_min_deg && sweep.phi_max_deg <= 90.0,
          [] { return std::string("must lie in [sweep.phi_min_deg, 90]"); });
    check("sweep.phi_step_deg", sweep.phi_step_deg > 0.0, [] { return std::string("must be positive"); });
    check("sweep.orientation_distance_m", sweep.orientation_distance_m > 0.0,
          [] { return std::string("must be positive"); });
    check("output.dir", !output_dir.empty(), [] { return std::string("must not be empty"); });
}

PlanarArrayGeometry ExperimentConfig::geometry() const
{
    return {rows, cols, spacing_wavelengths, link.carrier_frequency_ghz * 1e9};
}

AngularCovariance ExperimentConfig::covariance() const { return {sigma_theta_deg, sigma_psi_deg, rho}; }

LinkScenario ExperimentConfig::scenario() const
{
    return {geometry(), element, link, covariance(), grid, threads};
}

AdaptationPolicy ExperimentConfig::policy_for(PolicyKind kind) const
{
    return {kind, confidence_level, steer_offset_beta_deg};
}

std::vector<PolicyKind> ExperimentConfig::policies() const
{
    switch (policy)
    {
    case PolicySelection::generalized: return {PolicyKind::generalized};
    case PolicySelection::baseline: return {PolicyKind::axis_aligned_baseline};
    case PolicySelection::both: break;
    }
    return {PolicyKind::generalized, PolicyKind::axis_aligned_baseline};
}

void apply_override(ExperimentConfig &cfg, std::string_view dotted_key, std::string_view value)
{
    const auto dot = dotted_key.find('.');
    if (dot == std::string_view::npos)
        throw ConfigError(std::string(dotted_key), "expected section.key");
    const Field *f = find_field(dotted_key.substr(0, dot), dotted_key.substr(dot + 1));
    if (f == nullptr)
        throw ConfigError(std::string(dotted_key), "unknown key");
    f->set(cfg, dotted_key, trim(value));
}

ExperimentConfig parse_config(std::string_view text, const ExperimentConfig &base)
{
    ExperimentConfig cfg = base;
    std::string section;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size())
    {
        const auto eol = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == ';' || line.front() == '#')
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw ConfigError("", fmt::format("line {}: malformed section header '{}'", line_no, line));
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!known_section(section))
                throw ConfigError(section, fmt::format("line {}: unknown section", line_no));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError(std::string(key), fmt::format("line {}: key outside of any section", line_no));
        const std::string dotted = section + "." + std::string(key);
        if (section == "run" && key == "tool_version")
            continue; // manifests record the producing version; informational only
        const Field *f = find_field(section, key);
        if (f == nullptr)
            throw ConfigError(dotted, fmt::format("line {}: unknown key", line_no));
        if (!seen.insert(dotted).second)
            throw ConfigError(dotted, fmt::format("line {}: duplicate key", line_no));
        f->set(cfg, dotted, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path, const ExperimentConfig &base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string(), "cannot open configuration file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), base);
}

std::string render_config(const ExperimentConfig &cfg, bool manifest)
{
    std::string out;
    std::string_view current;
    for (const auto &f : fields())
    {
        if (f.section != current)
        {
            if (!current.empty())
                out += '\n';
            out += fmt::format("[{}]\n", f.section);
            current = f.section;
        }
        out += fmt::format("{} = {}\n", f.key, f.get(cfg));
    }
    if (manifest)
        out += fmt::format("tool_version = {}\n", kToolVersion);
    return out;
}

} // namespace beamadapt
