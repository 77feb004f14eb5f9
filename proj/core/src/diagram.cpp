#include "tscsim/dataset_io.hpp"
#include "tscsim/error.hpp"
#include "tscsim/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace tscsim {

namespace {

std::string fixed(double v, int digits = 2) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
    return buffer;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

void write_file(const std::filesystem::path& destination, const std::string& content) {
    if (destination.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(destination.parent_path(), ec);
    }
    std::ofstream out(destination, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + destination.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("write failed for " + destination.string());
    }
}

// Layout constants, in SVG user units.
constexpr double kWidth = 720.0;
constexpr double kMarginX = 170.0;
constexpr double kAxisY = 50.0;
constexpr double kLabelStep = 22.0;
constexpr double kBarStep = 10.0;

} // namespace

void write_boxplot_csv(std::ostream& out, const AccuracyMatrix& matrix) {
    const AccuracyMatrix complete = matrix.complete_rows();
    out << "classifier,min,q1,median,q3,max\n";
    for (std::size_t j = 0; j < complete.num_classifiers(); ++j) {
        const auto column = complete.column(j);
        out << complete.classifiers()[j];
        if (column.empty()) {
            out << ",,,,,\n";
            continue;
        }
        const auto s = five_number_summary(column);
        for (const double v : {s.min, s.q1, s.median, s.q3, s.max}) {
            out << ',' << format_value(v);
        }
        out << '\n';
    }
}

void boxplot_summary(const AccuracyMatrix& matrix, const std::filesystem::path& destination) {
    std::ostringstream text;
    write_boxplot_csv(text, matrix);
    write_file(destination, text.str());
}

std::string render_cd_svg(const RankSummary& summary, const CliqueSet& cliques) {
    const std::size_t k = summary.meanRank.size();
    if (k < 2) {
        throw InvalidSpecError("critical difference diagram needs at least two classifiers");
    }
    const double axisLeft = kMarginX;
    const double axisRight = kWidth - kMarginX;
    const auto xOf = [&](double rank) {
        return axisLeft + (rank - 1.0) / static_cast<double>(k - 1) * (axisRight - axisLeft);
    };

    std::size_t bars = 0;
    for (const auto& c : cliques.cliques) {
        bars += c.size() > 1 ? 1 : 0;
    }
    const auto order = rank_order(summary);
    const std::size_t leftCount = (k + 1) / 2;
    const double barTop = kAxisY + 14.0;
    const double labelTop = barTop + static_cast<double>(bars) * kBarStep + 16.0;
    const double height = labelTop + static_cast<double>(leftCount) * kLabelStep + 10.0;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(kWidth, 0)
        << "\" height=\"" << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(kWidth, 0) << ' '
        << fixed(height, 0) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line class=\"axis\" x1=\"" << fixed(axisLeft) << "\" y1=\"" << fixed(kAxisY)
        << "\" x2=\"" << fixed(axisRight) << "\" y2=\"" << fixed(kAxisY)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (std::size_t r = 1; r <= k; ++r) {
        const double x = xOf(static_cast<double>(r));
        svg << "<line class=\"tick\" x1=\"" << fixed(x) << "\" y1=\"" << fixed(kAxisY - 5.0)
            << "\" x2=\"" << fixed(x) << "\" y2=\"" << fixed(kAxisY) << "\" stroke=\"black\"/>\n";
        svg << "<text class=\"axis-label\" x=\"" << fixed(x) << "\" y=\"" << fixed(kAxisY - 9.0)
            << "\" text-anchor=\"middle\">" << r << "</text>\n";
    }

    // Clique bars, best clique nearest the axis.
    std::size_t bar = 0;
    for (const auto& clique : cliques.cliques) {
        if (clique.size() < 2) {
            continue;
        }
        double lo = summary.meanRank[clique.front()];
        double hi = lo;
        for (const auto idx : clique) {
            lo = std::min(lo, summary.meanRank[idx]);
            hi = std::max(hi, summary.meanRank[idx]);
        }
        const double y = barTop + static_cast<double>(bar) * kBarStep;
        svg << "<line class=\"clique\" x1=\"" << fixed(xOf(lo) - 3.0) << "\" y1=\"" << fixed(y)
            << "\" x2=\"" << fixed(xOf(hi) + 3.0) << "\" y2=\"" << fixed(y)
            << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
        ++bar;
    }

    // Best half labelled on the left, the rest on the right.
    for (std::size_t pos = 0; pos < k; ++pos) {
        const auto idx = order[pos];
        const bool left = pos < leftCount;
        const std::size_t slot = left ? pos : k - 1 - pos;
        const double y = labelTop + static_cast<double>(slot) * kLabelStep;
        const double x = xOf(summary.meanRank[idx]);
        const double end = left ? axisLeft - 10.0 : axisRight + 10.0;
        svg << "<polyline class=\"leader\" points=\"" << fixed(x) << ',' << fixed(kAxisY) << ' '
            << fixed(x) << ',' << fixed(y) << ' ' << fixed(end) << ',' << fixed(y)
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
        svg << "<text class=\"label\" x=\"" << fixed(left ? end - 4.0 : end + 4.0) << "\" y=\""
            << fixed(y + 4.0) << "\" text-anchor=\"" << (left ? "end" : "start") << "\">"
            << xml_escape(summary.classifiers[idx]) << " (" << fixed(summary.meanRank[idx])
            << ")</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void render_cd_diagram(const RankSummary& summary, const CliqueSet& cliques,
                       const std::filesystem::path& destination) {
    write_file(destination, render_cd_svg(summary, cliques));
}

} // namespace tscsim
