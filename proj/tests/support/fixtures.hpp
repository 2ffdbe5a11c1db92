#pragma once

#include <cmath>
#include <numbers>

#include "chromasim/nucleus_geometry.hpp"
#include "chromasim/rng.hpp"

namespace fixture {

inline chromasim::Polygon circle(chromasim::Point c, double r, int n = 96) {
    chromasim::Polygon p;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        p.push_back({c.x + r * std::cos(t), c.y + r * std::sin(t)});
    }
    p.push_back(p.front());
    return p;
}

// Cheap stand-in for generate_layout: disks on a square grid, radius drawn
// from [r_min, r_max], classes alternating.
inline chromasim::FieldLayout grid_layout(int size, int spacing, double r_min, double r_max, chromasim::SeededRng& rng) {
    chromasim::FieldLayout l;
    l.width = l.height = size;
    int id = 1;
    for (int cy = spacing / 2; cy + spacing / 2 <= size; cy += spacing)
        for (int cx = spacing / 2; cx + spacing / 2 <= size; cx += spacing) {
            chromasim::NucleusInstance n;
            n.id = id;
            n.center = {static_cast<double>(cx), static_cast<double>(cy)};
            n.equivalent_radius = rng.uniform(r_min, r_max);
            n.boundary = circle(n.center, n.equivalent_radius);
            n.tissue_class = id % 2 ? chromasim::TissueClass::Normal : chromasim::TissueClass::Dysplasia;
            l.nuclei.push_back(n);
            ++id;
        }
    l.target_count = static_cast<int>(l.nuclei.size());
    return l;
}

}  // namespace fixture
