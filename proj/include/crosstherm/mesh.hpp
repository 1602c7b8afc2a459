// mesh.hpp
//
// 1-D graded grid generation for the structured voxel mesh. Material
// boundaries are hard breakpoints; spacing grows away from "fine zones"
// (filament spans, oxide layer) at a configurable grading rate.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "crosstherm/errors.hpp"

namespace crosstherm {

struct MeshPolicy {
    double h_fine = 2.5e-9;       // finest voxel size near the filament [m]
    double h_max = 150e-9;        // coarsest voxel size (house margins) [m]
    double grading = 1.5;         // step = h_fine + (grading-1) * distance-to-fine-zone
    std::size_t voxel_budget = 8'000'000;

    MeshPolicy quick() const {
        MeshPolicy p = *this;
        p.h_fine *= 2;
        p.h_max *= 2;
        return p;
    }

    MeshPolicy refined(double factor) const {
        MeshPolicy p = *this;
        p.h_fine /= factor;
        p.h_max /= factor;
        return p;
    }
};

namespace detail {

inline double dist_to_zones(double x, const std::vector<std::pair<double, double>>& zones) {
    double d = std::numeric_limits<double>::max();
    for (const auto& z : zones) {
        if (x >= z.first && x <= z.second) return 0.0;
        d = std::min(d, std::min(std::abs(x - z.first), std::abs(x - z.second)));
    }
    return d;
}

// Subdivides [a, b] marching from the end closer to a fine zone; the last
// step is absorbed by rescaling so the interval endpoints are exact.
inline std::vector<double> subdivide(double a, double b, const MeshPolicy& mesh,
                                     const std::vector<std::pair<double, double>>& zones) {
    const double len = b - a;
    const bool forward = dist_to_zones(a, zones) <= dist_to_zones(b, zones);
    std::vector<double> steps;
    double x = 0;
    while (x < len) {
        const double pos = forward ? a + x : b - x;
        double h = mesh.h_fine + (mesh.grading - 1.0) * dist_to_zones(pos, zones);
        h = std::clamp(h, mesh.h_fine, mesh.h_max);
        steps.push_back(h);
        x += h;
    }
    if (steps.empty()) steps.push_back(len);
    const double scale = len / x;
    for (double& s : steps) s *= scale;
    std::vector<double> pts;
    pts.reserve(steps.size() - 1);
    double acc = 0;
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
        acc += steps[i];
        pts.push_back(forward ? a + acc : b - acc);
    }
    if (!forward) std::reverse(pts.begin(), pts.end());
    return pts;
}

}  // namespace detail

/// Builds a strictly increasing coordinate array covering [breakpoints.front(),
/// breakpoints.back()] with every breakpoint on a grid line.
inline std::vector<double> build_axis(std::vector<double> breakpoints, const MeshPolicy& mesh,
                                      const std::vector<std::pair<double, double>>& fine_zones) {
    std::sort(breakpoints.begin(), breakpoints.end());
    const double span = breakpoints.back() - breakpoints.front();
    const double eps = 1e-9 * std::max(span, 1e-12);
    std::vector<double> bp;
    for (double x : breakpoints)
        if (bp.empty() || x - bp.back() > eps) bp.push_back(x);
    if (bp.size() < 2) throw ArgumentError("axis needs at least two distinct breakpoints");

    std::vector<double> coords{bp.front()};
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        for (double p : detail::subdivide(bp[i], bp[i + 1], mesh, fine_zones)) coords.push_back(p);
        coords.push_back(bp[i + 1]);
    }
    return coords;
}

}  // namespace crosstherm
