#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrr/experiment.hpp"

namespace rrr {

namespace svg {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string method_color(const std::string& method) {
    if (method == "m1") return "#1f77b4";
    if (method == "m2") return "#d62728";
    if (method == "brute") return "#2ca02c";
    if (method == "special") return "#9467bd";
    return "#7f7f7f";
}

// One framed chart with optional log axes; all figures are self-contained SVG
// with the plotted table embedded as a comment so diffs stay reviewable.
class Chart {
public:
    Chart(std::string title, std::string xlabel, std::string ylabel, double xlo, double xhi,
          double ylo, double yhi, bool xlog = false, bool ylog = false)
        : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)),
          xlo_(tr(xlo, xlog)), xhi_(tr(xhi, xlog)), ylo_(tr(ylo, ylog)), yhi_(tr(yhi, ylog)),
          xlog_(xlog), ylog_(ylog) {
        if (xhi_ - xlo_ < 1e-9) xhi_ = xlo_ + 1;
        if (yhi_ - ylo_ < 1e-9) yhi_ = ylo_ + 1;
    }

    void series(const std::string& label, const std::vector<std::pair<double, double>>& pts,
                bool line = true) {
        const std::string color = method_color(label);
        std::ostringstream s;
        if (line && pts.size() > 1) {
            s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : pts) s << num(px(x)) << ',' << num(py(y)) << ' ';
            s << "\"/>\n";
        }
        for (const auto& [x, y] : pts)
            s << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
              << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        body_ += s.str();
        legend_.push_back({label, color});
    }

    void diagonal() {
        const double lo = std::max(xlo_, ylo_), hi = std::min(xhi_, yhi_);
        if (lo >= hi) return;
        std::ostringstream s;
        s << "<line x1=\"" << num(pxr(lo)) << "\" y1=\"" << num(pyr(lo)) << "\" x2=\""
          << num(pxr(hi)) << "\" y2=\"" << num(pyr(hi))
          << "\" stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
        body_ += s.str();
    }

    std::string render(const std::string& data_comment) const {
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
            << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
        if (!data_comment.empty()) out << "<!--\n" << data_comment << "\n-->\n";
        out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
        out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\" "
               "font-family=\"sans-serif\">"
            << title_ << "</text>\n";
        out << axes();
        out << body_;
        double ly = T + 14;
        for (const auto& [label, color] : legend_) {
            out << "<rect x=\"" << L + 10 << "\" y=\"" << ly - 9 << "\" width=\"12\" height=\"4\" fill=\""
                << color << "\"/>\n";
            out << "<text x=\"" << L + 27 << "\" y=\"" << ly << "\" font-size=\"12\" "
                   "font-family=\"sans-serif\">"
                << label << "</text>\n";
            ly += 16;
        }
        out << "</svg>\n";
        return out.str();
    }

private:
    static constexpr double W = 640, H = 440, L = 70, R = 620, T = 40, B = 390;

    static double tr(double v, bool lg) { return lg ? std::log10(std::max(v, 1e-3)) : v; }
    double px(double v) const { return pxr(tr(v, xlog_)); }
    double py(double v) const { return pyr(tr(v, ylog_)); }
    double pxr(double u) const { return L + (u - xlo_) / (xhi_ - xlo_) * (R - L); }
    double pyr(double u) const { return B - (u - ylo_) / (yhi_ - ylo_) * (B - T); }

    std::string axes() const {
        std::ostringstream out;
        out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << R - L << "\" height=\""
            << B - T << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (const auto& [u, label] : ticks(xlo_, xhi_, xlog_)) {
            const double x = pxr(u);
            out << "<line x1=\"" << num(x) << "\" y1=\"" << B << "\" x2=\"" << num(x) << "\" y2=\""
                << B + 5 << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << num(x) << "\" y=\"" << B + 18
                << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">" << label
                << "</text>\n";
        }
        for (const auto& [u, label] : ticks(ylo_, yhi_, ylog_)) {
            const double y = pyr(u);
            out << "<line x1=\"" << L - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << L << "\" y2=\""
                << num(y) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << L - 8 << "\" y=\"" << num(y + 4)
                << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << label
                << "</text>\n";
        }
        out << "<text x=\"" << (L + R) / 2 << "\" y=\"" << H - 14
            << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << xlabel_
            << "</text>\n";
        out << "<text x=\"16\" y=\"" << (T + B) / 2
            << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
               "transform=\"rotate(-90 16 "
            << (T + B) / 2 << ")\">" << ylabel_ << "</text>\n";
        return out.str();
    }

    static std::vector<std::pair<double, std::string>> ticks(double lo, double hi, bool lg) {
        std::vector<std::pair<double, std::string>> out;
        if (lg) {
            for (int e = static_cast<int>(std::floor(lo)); e <= static_cast<int>(std::ceil(hi));
                 ++e) {
                if (e < lo - 1e-9 || e > hi + 1e-9) continue;
                out.push_back({static_cast<double>(e), num(std::pow(10.0, e))});
            }
            return out;
        }
        const double span = hi - lo;
        double step = std::pow(10.0, std::floor(std::log10(span / 5)));
        if (span / step > 10) step *= 5;
        else if (span / step > 5) step *= 2;
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9; v += step)
            out.push_back({v, num(v)});
        return out;
    }

    std::string title_, xlabel_, ylabel_;
    double xlo_, xhi_, ylo_, yhi_;
    bool xlog_, ylog_;
    std::string body_;
    std::vector<std::pair<std::string, std::string>> legend_;
};

}  // namespace svg

// Builds the three aggregate charts (fraction solved, truncated time on a log
// axis, iterations) plus the per-instance time scatter when two methods are
// present. Returns filename -> svg text.
inline std::map<std::string, std::string> make_plots(
    const std::vector<ExperimentRecord>& records, double time_limit_ms) {
    if (records.empty()) throw std::invalid_argument("no records to plot");
    const std::vector<SummaryRow> rows = summarize(records, time_limit_ms);

    std::set<std::string> methods;
    std::set<int> sweeps;
    for (const auto& r : rows) {
        methods.insert(r.method);
        sweeps.insert(r.sweep);
    }
    const double xlo = *sweeps.begin(), xhi = *sweeps.rbegin();

    std::ostringstream table;
    table << "data\nsweep,method,count,fraction_optimal,avg_time_ms,avg_iterations\n";
    for (const auto& r : rows) {
        table << r.sweep << ',' << r.method << ',' << r.count << ',' << svg::num(r.fraction_optimal)
              << ',' << svg::num(r.avg_time_ms_truncated) << ',';
        if (r.iterations_count > 0) table << svg::num(r.avg_iterations);
        else table << "n/a";
        table << "\n";
    }
    const std::string comment = table.str();

    std::map<std::string, std::string> out;
    {
        svg::Chart chart("Fraction solved to optimality", "sweep parameter", "fraction solved",
                         xlo, xhi, 0, 1.05);
        for (const std::string& mth : methods) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& r : rows)
                if (r.method == mth) pts.push_back({static_cast<double>(r.sweep), r.fraction_optimal});
            chart.series(mth, pts);
        }
        out["fraction_solved.svg"] = chart.render(comment);
    }
    {
        double ymax = 1;
        for (const auto& r : rows) ymax = std::max(ymax, r.avg_time_ms_truncated);
        svg::Chart chart("Average truncated solution time", "sweep parameter", "time [ms]", xlo,
                         xhi, 0.1, ymax * 1.5, false, true);
        for (const std::string& mth : methods) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& r : rows)
                if (r.method == mth)
                    pts.push_back({static_cast<double>(r.sweep),
                                   std::max(r.avg_time_ms_truncated, 0.1)});
            chart.series(mth, pts);
        }
        out["avg_time.svg"] = chart.render(comment);
    }
    {
        double ymax = 2;
        for (const auto& r : rows)
            if (r.iterations_count > 0) ymax = std::max(ymax, r.avg_iterations);
        svg::Chart chart("Average iterations to optimality", "sweep parameter", "iterations", xlo,
                         xhi, 0, ymax + 1);
        for (const std::string& mth : methods) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& r : rows)
                if (r.method == mth && r.iterations_count > 0)
                    pts.push_back({static_cast<double>(r.sweep), r.avg_iterations});
            chart.series(mth, pts);
        }
        out["avg_iterations.svg"] = chart.render(comment);
    }
    if (methods.size() >= 2) {
        auto it = methods.begin();
        const std::string ma = *it++;
        const std::string mb = *it;
        std::map<std::string, std::pair<double, double>> times;  // instance -> (ta, tb)
        std::map<std::string, int> seen;
        for (const auto& r : records) {
            if (r.method != ma && r.method != mb) continue;
            const double t = r.status == "optimal" ? std::max<double>(r.time_ms, 0.1)
                                                   : time_limit_ms;
            if (r.method == ma) times[r.instance_id].first = t;
            else times[r.instance_id].second = t;
            seen[r.instance_id] |= r.method == ma ? 1 : 2;
        }
        std::vector<std::pair<double, double>> pts;
        double tmax = 1;
        for (const auto& [id, flag] : seen) {
            if (flag != 3) continue;
            pts.push_back(times[id]);
            tmax = std::max({tmax, times[id].first, times[id].second});
        }
        svg::Chart chart("Per-instance time: " + ma + " vs " + mb, ma + " time [ms]",
                         mb + " time [ms]", 0.1, tmax * 1.5, 0.1, tmax * 1.5, true, true);
        chart.diagonal();
        chart.series(ma + "/" + mb, pts, false);
        out["time_scatter.svg"] = chart.render(comment);
    }
    return out;
}

}  // namespace rrr
