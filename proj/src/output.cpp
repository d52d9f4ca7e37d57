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
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <map>

#include "beamadapt/errors.hpp"
#include "beamadapt/experiments.hpp"

namespace beamadapt
{

std::string format_float(double value)
{
    if (value == 0.0)
        return "0"; // also folds -0
    return fmt::format("{:.9g}", value);
}

namespace
{

namespace fs = std::filesystem;

fs::path prepare_dir(const ExperimentConfig &cfg)
{
    const fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw IoError(dir.string(), ec ? ec.message() : "not a directory");
    return dir;
}

fs::path write_file(const fs::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path.string(), "cannot open for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError(path.string(), "write failed");
    return path;
}

std::string policy_name(PolicyKind kind) { return std::string(to_string(kind)); }

std::string flag(bool b) { return b ? "1" : "0"; }

std::string records_csv(const std::vector<SweepRecord> &records, std::string_view swept_column)
{
    std::string out = fmt::format("{},policy,g0_db,feasible,n_min,n_max,optimal_count,outage,saturated\n", swept_column);
    for (const auto &r : records)
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", format_float(r.swept_value), policy_name(r.policy),
                           format_float(r.g0_db), flag(r.feasible), r.n_min, r.n_max, r.optimal_count,
                           format_float(r.outage), flag(r.saturated));
    return out;
}

struct Series
{
    std::string name;
    std::vector<std::pair<double, double>> points;
};

// Minimal line chart; enough to eyeball a sweep without external tooling.
std::string svg_plot(std::string_view title, std::string_view x_label, std::string_view y_label,
                     const std::vector<Series> &series, bool log_x)
{
    constexpr double width = 640, height = 420, left = 70, right = 150, top = 40, bottom = 50;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    auto tx = [&](double x) { return log_x ? std::log10(x) : x; };
    for (const auto &s : series)
        for (const auto &[x, y] : s.points)
        {
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0))
        x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 == x0)
        x1 = x0 + 1;
    if (y1 == y0)
        y1 = y0 + 1;
    auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    static constexpr std::string_view colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::string out = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        width, height);
    out += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n", left + pw / 2,
                       title);
    out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                       top, pw, ph);
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + pw / 2, height - 12,
                       x_label);
    out += fmt::format("<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
                       top + ph / 2, top + ph / 2, y_label);
    const double x_lo = log_x ? std::pow(10.0, x0) : x0;
    const double x_hi = log_x ? std::pow(10.0, x1) : x1;
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"start\">{}</text>\n", left, top + ph + 16,
                       format_float(x_lo));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", left + pw, top + ph + 16,
                       format_float(x_hi));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", left - 4, top + ph,
                       format_float(y0));
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", left - 4, top + 10,
                       format_float(y1));

    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const auto colour = colours[i % std::size(colours)];
        std::string pts;
        for (const auto &[x, y] : series[i].points)
            pts += fmt::format("{:.2f},{:.2f} ", px(x), py(y));
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", colour, pts);
        const double ly = top + 16 + 18 * static_cast<double>(i);
        out += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           left + pw + 10, ly, left + pw + 30, ly, colour);
        out += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", left + pw + 36, ly + 4, series[i].name);
    }
    out += "</svg>\n";
    return out;
}

template <typename Value>
std::vector<Series> by_policy(const std::vector<SweepRecord> &records, Value value, bool feasible_only)
{
    std::map<int, Series> grouped;
    for (const auto &r : records)
    {
        if (feasible_only && !r.feasible)
            continue;
        auto &s = grouped[static_cast<int>(r.policy)];
        s.name = policy_name(r.policy);
        s.points.emplace_back(r.swept_value, value(r));
    }
    std::vector<Series> out;
    for (auto &[_, s] : grouped)
        out.push_back(std::move(s));
    return out;
}

std::string optional_field(const std::optional<double> &v) { return v ? format_float(*v) : std::string(); }

} // namespace

std::vector<fs::path> emit_outputs(const DistanceSweepResult &result, const ExperimentConfig &cfg)
{
    const fs::path dir = prepare_dir(cfg);
    std::vector<fs::path> written;

    std::string fig4 = "distance_m,policy,n_min,n_max,feasible\n";
    for (const auto &r : result.records)
        fig4 += fmt::format("{},{},{},{},{}\n", format_float(r.swept_value), policy_name(r.policy), r.n_min, r.n_max,
                            flag(r.feasible));
    written.push_back(write_file(dir / "fig4_allowable.csv", fig4));

    std::string fig5 = "distance_m,policy,g0_db,optimal_count,outage,saturated\n";
    for (const auto &r : result.records)
        fig5 += fmt::format("{},{},{},{},{},{}\n", format_float(r.swept_value), policy_name(r.policy),
                            format_float(r.g0_db), r.optimal_count, format_float(r.outage), flag(r.saturated));
    written.push_back(write_file(dir / "fig5_optimal.csv", fig5));

    std::string saving = "distance_m,n_min_generalized,n_min_baseline,saving\n";
    for (const auto &p : result.power_saving)
        saving += fmt::format("{},{},{},{}\n", format_float(p.distance_m), p.n_min_generalized, p.n_min_baseline,
                              format_float(p.saving));
    written.push_back(write_file(dir / "power_saving.csv", saving));

    std::string summary = "metric,value\n";
    summary += fmt::format("max_distance_generalized_m,{}\n", optional_field(result.max_distance_generalized_m));
    summary += fmt::format("max_distance_baseline_m,{}\n", optional_field(result.max_distance_baseline_m));
    summary += fmt::format("coverage_distance_improvement,{}\n", optional_field(result.coverage_distance_improvement));
    summary += fmt::format("coverage_area_improvement,{}\n", optional_field(result.coverage_area_improvement));
    summary += fmt::format("peak_power_saving,{}\n", optional_field(result.peak_power_saving));
    summary += fmt::format("peak_power_saving_distance_m,{}\n", optional_field(result.peak_power_saving_distance_m));
    written.push_back(write_file(dir / "distance_summary.csv", summary));

    if (cfg.plots)
    {
        auto series = by_policy(result.records, [](const SweepRecord &r) { return double(r.n_min); }, true);
        for (auto &s : series)
            s.name += " n_min";
        auto upper = by_policy(result.records, [](const SweepRecord &r) { return double(r.n_max); }, true);
        for (auto &s : upper)
            series.push_back({s.name + " n_max", std::move(s.points)});
        written.push_back(write_file(dir / "fig4_allowable.svg",
                                     svg_plot("Allowable antennas", "distance (m)", "active elements", series, true)));
        written.push_back(write_file(
            dir / "fig5_optimal.svg",
            svg_plot("Optimal antennas", "distance (m)", "active elements",
                     by_policy(result.records, [](const SweepRecord &r) { return double(r.optimal_count); }, false),
                     true)));
    }
    return written;
}

std::vector<fs::path> emit_outputs(const CorrelationSweepResult &result, const ExperimentConfig &cfg)
{
    const fs::path dir = prepare_dir(cfg);
    std::vector<fs::path> written;
    written.push_back(write_file(dir / "fig6_correlation.csv", records_csv(result.records, "rho")));
    if (cfg.plots)
        written.push_back(write_file(
            dir / "fig6_correlation.svg",
            svg_plot(fmt::format("Outage vs correlation at {} m", format_float(result.distance_m)), "rho",
                     "outage probability",
                     by_policy(result.records, [](const SweepRecord &r) { return r.outage; }, false), false)));
    return written;
}

std::vector<fs::path> emit_outputs(const OrientationSweepResult &result, const ExperimentConfig &cfg)
{
    const fs::path dir = prepare_dir(cfg);
    std::vector<fs::path> written;
    written.push_back(write_file(dir / "fig7_orientation.csv", records_csv(result.records, "phi_deg")));
    if (!result.gaps.empty())
    {
        std::string gaps = "phi_deg,gap\n";
        for (const auto &g : result.gaps)
            gaps += fmt::format("{},{}\n", format_float(g.phi_deg), format_float(g.gap));
        written.push_back(write_file(dir / "fig7_gap.csv", gaps));
    }
    if (cfg.plots)
        written.push_back(write_file(
            dir / "fig7_orientation.svg",
            svg_plot(fmt::format("Outage vs orientation at {} m", format_float(result.distance_m)), "phi (deg)",
                     "outage probability",
                     by_policy(result.records, [](const SweepRecord &r) { return r.outage; }, false), false)));
    return written;
}

fs::path write_manifest(const ExperimentConfig &cfg, std::string_view command)
{
    const fs::path dir = prepare_dir(cfg);
    std::string text = fmt::format("# command: {}\n", command);
    text += render_config(cfg, true);
    return write_file(dir / "run_manifest.ini", text);
}

} // namespace beamadapt
