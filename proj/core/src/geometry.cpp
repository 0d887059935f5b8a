#include "pilotshare/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace pilotshare {

void Deployment::validate() const {
    const std::size_t L = cells();
    if (L < 1) throw std::invalid_argument("deployment needs at least one BS");
    if (!(side > 0.0) || !std::isfinite(side))
        throw std::invalid_argument("side must be positive and finite");
    if (!(alpha > 2.0))
        throw std::invalid_argument("pathloss exponent must exceed 2");
    if (!(min_dist > 0.0) || !(min_dist < side / (2.0 * static_cast<double>(L))))
        throw std::invalid_argument("min_dist must lie in (0, side/(2L))");
    for (const Point& p : bs_positions) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 ||
            p.y < 0.0 || p.x >= side || p.y >= side) {
            throw std::invalid_argument("BS position outside [0, side)^2");
        }
    }
}

double torus_distance(const Point& a, const Point& b, double side) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (dx > side - dx) dx = side - dx;
    if (dy > side - dy) dy = side - dy;
    return std::sqrt(dx * dx + dy * dy);
}

double channel_variance(const Deployment& dep, std::size_t bs, const Point& z) {
    const double d = torus_distance(z, dep.bs_positions[bs], dep.side);
    const double clamped = d < dep.min_dist ? dep.min_dist : d;
    return std::pow(clamped, -dep.alpha);
}

Deployment generate_deployment(std::size_t L, double density, std::uint64_t seed,
                               double alpha) {
    if (L < 1) throw std::invalid_argument("L must be >= 1");
    if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
    Deployment dep;
    dep.side = std::sqrt(static_cast<double>(L) / density);
    dep.alpha = alpha;
    dep.min_dist = dep.side / 1000.0;
    dep.bs_positions.resize(L);
    Rng rng(seed);
    for (Point& p : dep.bs_positions) {
        p.x = uniform_unit(rng) * dep.side;
        p.y = uniform_unit(rng) * dep.side;
    }
    dep.validate();
    return dep;
}

std::size_t assign_cell(const Deployment& dep, const Point& z) {
    std::size_t best = 0;
    double best_d = torus_distance(z, dep.bs_positions[0], dep.side);
    for (std::size_t j = 1; j < dep.cells(); ++j) {
        const double d = torus_distance(z, dep.bs_positions[j], dep.side);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

Point sample_ue_in_cell(const Deployment& dep, std::size_t cell, Rng& rng) {
    constexpr int kMaxRejections = 1000000;
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
        Point z{uniform_unit(rng) * dep.side, uniform_unit(rng) * dep.side};
        if (assign_cell(dep, z) != cell) continue;
        if (torus_distance(z, dep.bs_positions[cell], dep.side) < dep.min_dist)
            continue;
        return z;
    }
    throw std::runtime_error("sample_ue_in_cell: cell " + std::to_string(cell) +
                             " looks degenerate (10^6 rejections)");
}

std::uint64_t deployment_hash(const Deployment& dep) {
    // Hash the full-precision text form so the hash matches what a
    // serialize/parse round trip preserves.
    char buf[64];
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&](double v) {
        const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
        h = detail::fnv1a_bytes(reinterpret_cast<const unsigned char*>(buf),
                                static_cast<std::size_t>(n), h);
    };
    mix(dep.side);
    mix(dep.alpha);
    mix(dep.min_dist);
    for (const Point& p : dep.bs_positions) {
        mix(p.x);
        mix(p.y);
    }
    return h;
}

} // namespace pilotshare
