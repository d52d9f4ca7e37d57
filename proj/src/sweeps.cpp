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
#include <cmath>
#include <functional>

#include "beamadapt/experiments.hpp"
#include "beamadapt/parallel.hpp"

namespace beamadapt
{

namespace
{

std::vector<double> stepped(double lo, double hi, double step)
{
    // Index-based so that the end point survives rounding.
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        out.push_back(lo + static_cast<double>(i) * step);
    return out;
}

// Splits the configured thread budget between concurrent jobs and the gain
// fields inside each job.
unsigned inner_threads(const ExperimentConfig &cfg, std::size_t jobs)
{
    const unsigned total = cfg.threads == 0 ? default_thread_count() : cfg.threads;
    return std::max(1u, total / static_cast<unsigned>(std::max<std::size_t>(1, jobs)));
}

SweepRecord record_at(const FamilyEvaluation &eval, std::size_t index, double swept_value, PolicyKind kind,
                      double outage_threshold)
{
    const auto range = feasible_range_at(eval, index, outage_threshold);
    const auto best = optimal_count_at(eval, index);
    return {swept_value, kind,         eval.g0_db[index], range.feasible, range.n_min,
            range.n_max, best.count, best.outage,       best.saturated};
}

void sort_records(std::vector<SweepRecord> &records)
{
    std::sort(records.begin(), records.end(), [](const SweepRecord &a, const SweepRecord &b) {
        if (a.swept_value != b.swept_value)
            return a.swept_value < b.swept_value;
        return static_cast<int>(a.policy) < static_cast<int>(b.policy);
    });
}

// One evaluation per (swept value, policy) pair at a single distance.
std::vector<SweepRecord> point_sweep(const ExperimentConfig &cfg, const std::vector<double> &values, double distance_m,
                                     const std::function<AngularCovariance(double)> &covariance_at)
{
    const auto kinds = cfg.policies();
    const std::size_t jobs = values.size() * kinds.size();
    const double g0 = required_gain_threshold(cfg.link, distance_m);
    const unsigned inner = inner_threads(cfg, jobs);

    std::vector<SweepRecord> records(jobs);
    parallel_for(
        jobs,
        [&](std::size_t job) {
            const double value = values[job / kinds.size()];
            const PolicyKind kind = kinds[job % kinds.size()];
            LinkScenario scenario = cfg.scenario();
            scenario.cov = covariance_at(value);
            scenario.threads = inner;
            const auto eval =
                evaluate_family(scenario, cfg.policy_for(kind), std::span<const double>(&g0, 1), std::nullopt);
            records[job] = record_at(eval, 0, value, kind, cfg.outage_threshold);
        },
        cfg.threads);
    sort_records(records);
    return records;
}

const SweepRecord *find(const std::vector<SweepRecord> &records, double value, PolicyKind kind)
{
    for (const auto &r : records)
        if (r.swept_value == value && r.policy == kind)
            return &r;
    return nullptr;
}

} // namespace

std::vector<double> distance_grid(const SweepSpec &sweep)
{
    std::vector<double> out(static_cast<std::size_t>(sweep.distance_points));
    const double lo = std::log10(sweep.distance_min_m);
    const double hi = std::log10(sweep.distance_max_m);
    const double last = static_cast<double>(sweep.distance_points - 1);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / last);
    out.front() = sweep.distance_min_m;
    out.back() = sweep.distance_max_m;
    return out;
}

std::vector<double> correlation_grid(const SweepSpec &sweep)
{
    return stepped(sweep.rho_min, sweep.rho_max, sweep.rho_step);
}

std::vector<double> orientation_grid(const SweepSpec &sweep)
{
    return stepped(sweep.phi_min_deg, sweep.phi_max_deg, sweep.phi_step_deg);
}

DistanceSweepResult run_distance_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    const auto distances = distance_grid(cfg.sweep);
    std::vector<double> g0s(distances.size());
    std::transform(distances.begin(), distances.end(), g0s.begin(),
                   [&](double d) { return required_gain_threshold(cfg.link, d); });

    const auto kinds = cfg.policies();
    const unsigned inner = inner_threads(cfg, kinds.size());
    std::vector<FamilyEvaluation> evals(kinds.size());
    parallel_for(
        kinds.size(),
        [&](std::size_t k) {
            LinkScenario scenario = cfg.scenario();
            scenario.threads = inner;
            evals[k] = evaluate_family(scenario, cfg.policy_for(kinds[k]), g0s, cfg.outage_threshold);
        },
        cfg.threads);

    DistanceSweepResult out;
    for (std::size_t k = 0; k < kinds.size(); ++k)
    {
        for (std::size_t i = 0; i < distances.size(); ++i)
            out.records.push_back(record_at(evals[k], i, distances[i], kinds[k], cfg.outage_threshold));
        const double d = max_feasible_distance(evals[k], cfg.link);
        if (kinds[k] == PolicyKind::generalized)
            out.max_distance_generalized_m = d;
        else
            out.max_distance_baseline_m = d;
    }
    sort_records(out.records);

    if (out.max_distance_generalized_m && out.max_distance_baseline_m && *out.max_distance_baseline_m > 0.0)
    {
        const double ratio = *out.max_distance_generalized_m / *out.max_distance_baseline_m;
        out.coverage_distance_improvement = ratio - 1.0;
        out.coverage_area_improvement = ratio * ratio - 1.0;
    }

    if (kinds.size() == 2)
    {
        for (const double d : distances)
        {
            const auto *gen = find(out.records, d, PolicyKind::generalized);
            const auto *base = find(out.records, d, PolicyKind::axis_aligned_baseline);
            if (!gen->feasible || !base->feasible)
                continue;
            const double saving =
                1.0 - static_cast<double>(gen->n_min) / static_cast<double>(base->n_min);
            out.power_saving.push_back({d, gen->n_min, base->n_min, saving});
            if (!out.peak_power_saving || saving > *out.peak_power_saving)
            {
                out.peak_power_saving = saving;
                out.peak_power_saving_distance_m = d;
            }
        }
    }
    return out;
}

CorrelationSweepResult run_correlation_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    CorrelationSweepResult out;
    out.distance_m = cfg.sweep.correlation_distance_m;
    out.records = point_sweep(cfg, correlation_grid(cfg.sweep), out.distance_m, [&](double rho) {
        return AngularCovariance(cfg.sigma_theta_deg, cfg.sigma_psi_deg, rho);
    });
    return out;
}

OrientationSweepResult run_orientation_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    OrientationSweepResult out;
    out.distance_m = cfg.sweep.orientation_distance_m;
    const auto eig = eigendecompose(cfg.covariance().matrix());
    out.major_variance = eig.values[0];
    out.minor_variance = eig.values[1];
    out.records = point_sweep(cfg, orientation_grid(cfg.sweep), out.distance_m, [&](double phi) {
        return AngularCovariance::from_axes(out.major_variance, out.minor_variance, phi);
    });

    if (cfg.policies().size() == 2)
    {
        for (const double phi : orientation_grid(cfg.sweep))
        {
            const auto *gen = find(out.records, phi, PolicyKind::generalized);
            const auto *base = find(out.records, phi, PolicyKind::axis_aligned_baseline);
            out.gaps.push_back({phi, base->outage - gen->outage});
        }
        const auto best = std::max_element(out.gaps.begin(), out.gaps.end(),
                                           [](const OrientationGap &a, const OrientationGap &b) { return a.gap < b.gap; });
        if (best != out.gaps.end())
            out.argmax_gap_phi_deg = best->phi_deg;
    }
    return out;
}

bool infeasible_everywhere(const std::vector<SweepRecord> &records)
{
    return std::none_of(records.begin(), records.end(), [](const SweepRecord &r) { return r.feasible; });
}

} // namespace beamadapt
