#pragma once

// Overlay figure: cloud points in gray, hull samples as hollow markers, and
// features above threshold as filled circles (red external, blue internal).
// Image coordinates are kept, so y grows downward as in the source image.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "error.hpp"
#include "geometry.hpp"
#include "structures.hpp"

namespace branchtopo {

namespace detail {

inline std::string fixed3(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace detail

inline std::string overlay_svg(const PointCloud& cloud, std::span<const Point2> hull_points,
                               std::span<const ClassifiedFeature> features)
{
    std::vector<Point2> all(cloud.points().begin(), cloud.points().end());
    all.insert(all.end(), hull_points.begin(), hull_points.end());
    std::vector<const ClassifiedFeature*> shown;
    for (const auto& f : features) {
        if (!f.below_threshold && f.location && f.cls != FeatureClass::Vanished) {
            shown.push_back(&f);
            all.push_back(*f.location);
        }
    }

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (!all.empty()) {
        xmin = xmax = all[0].x;
        ymin = ymax = all[0].y;
        for (const Point2 p : all) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
    }
    // longest side drawn at 800 px; a point-like extent falls back to unit scale
    const double extent = std::max(xmax - xmin, ymax - ymin);
    const double s = extent > 0 ? 800.0 / extent : 1.0;
    const double margin = 20.0, legend = 70.0;
    const double width = (xmax - xmin) * s + 2 * margin;
    const double height = (ymax - ymin) * s + 2 * margin + legend;
    const auto X = [&](double x) { return detail::fixed3((x - xmin) * s + margin); };
    const auto Y = [&](double y) { return detail::fixed3((y - ymin) * s + margin); };
    using detail::fixed3;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed3(width) << "\" height=\"" << fixed3(height)
       << "\" viewBox=\"0 0 " << fixed3(width) << ' ' << fixed3(height) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<g id=\"cloud\" fill=\"#888888\">\n";
    for (const Point2 p : cloud.points()) {
        os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"2\"/>\n";
    }
    os << "</g>\n<g id=\"hull\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\">\n";
    for (const Point2 p : hull_points) {
        os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"3\"/>\n";
    }
    os << "</g>\n<g id=\"features\">\n";
    for (const ClassifiedFeature* f : shown) {
        const char* color = f->cls == FeatureClass::External ? "#d62728" : "#1f4fd6";
        os << "<circle class=\"" << to_string(f->cls) << "\" cx=\"" << X(f->location->x) << "\" cy=\""
           << Y(f->location->y) << "\" r=\"6\" fill=\"" << color << "\"/>\n";
    }
    os << "</g>\n";

    const double ly = height - legend + 20;
    os << "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    const auto entry = [&](double x, const std::string& marker, const char* label) {
        os << marker << "<text x=\"" << fixed3(x + 10) << "\" y=\"" << fixed3(ly + 4) << "\">" << label << "</text>\n";
    };
    const auto dot = [&](double x, double r, const std::string& style) {
        return "<circle cx=\"" + fixed3(x) + "\" cy=\"" + fixed3(ly) + "\" r=\"" + fixed3(r) + "\" " + style + "/>";
    };
    entry(margin, dot(margin, 2, "fill=\"#888888\""), "cloud point");
    entry(margin + 110, dot(margin + 110, 3, "fill=\"none\" stroke=\"#444444\""), "hull point");
    entry(margin + 210, dot(margin + 210, 6, "fill=\"#d62728\""), "external");
    entry(margin + 300, dot(margin + 300, 6, "fill=\"#1f4fd6\""), "internal");
    os << "</g>\n</svg>\n";
    return os.str();
}

inline void write_overlay_svg(const PointCloud& cloud, std::span<const Point2> hull_points,
                              std::span<const ClassifiedFeature> features, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << overlay_svg(cloud, hull_points, features);
    if (!out.flush()) {
        throw IoError("write failed for '" + path + "'");
    }
}

}  // namespace branchtopo
