// SPDX-License-Identifier: Apache-2.0
//
// cfmimo - link-level simulator for uplink cell-free massive MIMO detection
// Copyright (C) 2026 The cfmimo authors
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

#include "cfmimo/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cfmimo {

std::string format_number(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path)
{
    out.close();
    if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.emplace_back();
    return fields;
}

double to_double(const std::string& s)
{
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::runtime_error("bad number '" + s + "' in CSV");
    return v;
}

} // namespace

void write_csv(const SweepResult& result, std::ostream& out, bool include_timing)
{
    out << kCsvHeader << '\n';
    std::map<Detector, std::int64_t> aborted;
    for (const auto& r : result.rows) {
        out << name(r.detector) << ',' << format_number(r.ratio) << ',' << format_number(r.snr_db) << ','
            << format_number(r.ber) << ',' << format_number(r.ber_ci95) << ',' << format_number(r.sum_se) << ','
            << format_number(r.avg_iterations) << ',' << r.trials << ','
            << format_number(include_timing ? r.elapsed_s : 0.0) << '\n';
        aborted[r.detector] += r.aborted;
    }
    out << "# aborted_trials";
    for (const auto& [d, n] : aborted) out << ' ' << name(d) << '=' << n;
    out << '\n';
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path, bool include_timing)
{
    auto out = open_for_write(path);
    write_csv(result, out, include_timing);
    close_checked(out, path);
}

SweepResult read_csv(std::istream& in)
{
    SweepResult result;
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("CSV header mismatch");
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        const auto f = split(line, ',');
        if (f.size() != 9) throw std::runtime_error("CSV row has " + std::to_string(f.size()) + " fields");
        SweepRow r;
        r.detector = parse_detector(f[0]);
        r.ratio = to_double(f[1]);
        r.snr_db = to_double(f[2]);
        r.ber = to_double(f[3]);
        r.ber_ci95 = to_double(f[4]);
        r.sum_se = to_double(f[5]);
        r.avg_iterations = to_double(f[6]);
        r.trials = std::stoll(f[7]);
        r.elapsed_s = to_double(f[8]);
        result.rows.push_back(r);
    }
    return result;
}

namespace {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

const char* series_color(std::size_t i)
{
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return palette[i % std::size(palette)];
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

void render_panel(std::ostringstream& svg, const std::vector<Series>& series, double x0, double y0, double width,
                  double height, bool log_y, const std::string& title)
{
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!std::isfinite(xmin)) {
        xmin = 0.0;
        xmax = 1.0;
        ymin = log_y ? -6.0 : 0.0;
        ymax = log_y ? 0.0 : 1.0;
    }
    if (log_y) {
        ymin = std::floor(ymin);
        ymax = std::max(std::ceil(ymax), ymin + 1.0);
    } else {
        ymin = std::min(0.0, ymin);
        if (ymax <= ymin) ymax = ymin + 1.0;
    }
    if (xmax <= xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    auto px = [&](double x) { return x0 + (x - xmin) / (xmax - xmin) * width; };
    auto py = [&](double y) { return y0 + height - (y - ymin) / (ymax - ymin) * height; };

    svg << "<g>\n<text x=\"" << format_number(x0 + width / 2) << "\" y=\"" << format_number(y0 - 10)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title) << "</text>\n";
    svg << "<rect x=\"" << format_number(x0) << "\" y=\"" << format_number(y0) << "\" width=\"" << format_number(width)
        << "\" height=\"" << format_number(height) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    const int y_ticks = log_y ? static_cast<int>(ymax - ymin) : 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double v = ymin + (ymax - ymin) * i / y_ticks;
        const std::string label = log_y ? "1e" + std::to_string(static_cast<int>(std::lround(v))) : format_number(
                                                                                                     std::round(v * 100) / 100);
        svg << "<text x=\"" << format_number(x0 - 6) << "\" y=\"" << format_number(py(v) + 4)
            << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = xmin + (xmax - xmin) * i / 4;
        svg << "<text x=\"" << format_number(px(v)) << "\" y=\"" << format_number(y0 + height + 14)
            << "\" text-anchor=\"middle\" font-size=\"10\">" << format_number(std::round(v * 1000) / 1000)
            << "</text>\n";
    }
    svg << "<text x=\"" << format_number(x0 + width / 2) << "\" y=\"" << format_number(y0 + height + 30)
        << "\" text-anchor=\"middle\" font-size=\"12\">pilot-to-user ratio</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        if (s.points.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << series_color(i) << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) svg << format_number(px(x)) << ',' << format_number(py(y)) << ' ';
        svg << "\"/>\n";
        svg << "<text x=\"" << format_number(x0 + width + 8) << "\" y=\"" << format_number(y0 + 14 + 14.0 * i)
            << "\" font-size=\"11\" fill=\"" << series_color(i) << "\">" << xml_escape(s.label) << "</text>\n";
    }
    svg << "</g>\n";
}

} // namespace

std::string render_plot(const SweepResult& result)
{
    std::vector<double> snrs;
    for (const auto& r : result.rows)
        if (std::find(snrs.begin(), snrs.end(), r.snr_db) == snrs.end()) snrs.push_back(r.snr_db);

    std::vector<Series> ber_series;
    std::vector<Series> se_series;
    auto find_series = [](std::vector<Series>& v, const std::string& label) -> Series& {
        for (auto& s : v)
            if (s.label == label) return s;
        v.push_back({label, {}});
        return v.back();
    };
    for (const auto& r : result.rows) {
        std::string label(name(r.detector));
        if (snrs.size() > 1) label += " @ " + format_number(r.snr_db) + " dB";
        auto& b = find_series(ber_series, label);
        // zero-error cells have no place on a log axis
        if (r.ber > 0.0) b.points.emplace_back(r.ratio, std::log10(r.ber));
        if (std::isfinite(r.sum_se)) find_series(se_series, label).points.emplace_back(r.ratio, r.sum_se);
    }
    for (auto* group : {&ber_series, &se_series})
        for (auto& s : *group) std::sort(s.points.begin(), s.points.end());

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"420\" viewBox=\"0 0 1000 420\">\n"
        << "<rect width=\"1000\" height=\"420\" fill=\"#fff\"/>\n";
    render_panel(svg, ber_series, 70, 40, 320, 320, true, "BER");
    render_panel(svg, se_series, 570, 40, 320, 320, false, "sum SE (bit/s/Hz)");
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const SweepResult& result, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    out << render_plot(result);
    close_checked(out, path);
}

void dump_scenario(const Scenario& scenario, const std::filesystem::path& directory)
{
    {
        const auto path = directory / "geometry.csv";
        auto out = open_for_write(path);
        out << "kind,index,x_m,y_m\n";
        const auto& g = scenario.geometry;
        for (std::size_t i = 0; i < g.ap_positions.size(); ++i)
            out << "ap," << i << ',' << format_number(g.ap_positions[i].x) << ','
                << format_number(g.ap_positions[i].y) << '\n';
        for (std::size_t i = 0; i < g.ue_positions.size(); ++i)
            out << "ue," << i << ',' << format_number(g.ue_positions[i].x) << ','
                << format_number(g.ue_positions[i].y) << '\n';
        close_checked(out, path);
    }
    {
        const auto path = directory / "large_scale.csv";
        auto out = open_for_write(path);
        out << "ap,ue,beta,shadow_db,beta_effective\n";
        const auto& f = scenario.fading;
        for (Eigen::Index l = 0; l < f.beta.rows(); ++l)
            for (Eigen::Index k = 0; k < f.beta.cols(); ++k)
                out << l << ',' << k << ',' << format_number(f.beta(l, k)) << ','
                    << format_number(f.shadow_db(l, k)) << ',' << format_number(scenario.beta(l, k)) << '\n';
        close_checked(out, path);
    }
}

void dump_channel(const TrialInput& trial, const std::filesystem::path& directory)
{
    const auto path = directory / "channel.csv";
    auto out = open_for_write(path);
    out << "ap,ue,pilot,h_re,h_im,hhat_re,hhat_im,alpha,C,D\n";
    const auto& ch = trial.channel;
    for (Eigen::Index l = 0; l < ch.H.rows(); ++l)
        for (Eigen::Index k = 0; k < ch.H.cols(); ++k)
            out << l << ',' << k << ',' << trial.pilots.pilot[static_cast<std::size_t>(k)] << ','
                << format_number(ch.H(l, k).real()) << ',' << format_number(ch.H(l, k).imag()) << ','
                << format_number(ch.Hhat(l, k).real()) << ',' << format_number(ch.Hhat(l, k).imag()) << ','
                << format_number(ch.alpha(l, k)) << ',' << format_number(ch.C(l, k)) << ','
                << format_number(ch.D(l)) << '\n';
    close_checked(out, path);
}

} // namespace cfmimo
