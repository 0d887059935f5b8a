#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pilotshare/rng.hpp"

namespace pilotshare {

struct Point {
    double x = 0.0; ///< km
    double y = 0.0; ///< km
};

/// A random asymmetric BS layout on a square with vertical and horizontal
/// wrap-around. Cells are the Voronoi regions of the BS positions under the
/// torus metric; a UE closer than min_dist to its serving BS is pushed out to
/// min_dist by the pathloss clamp. Immutable after construction and safe to
/// share across threads.
struct Deployment {
    std::vector<Point> bs_positions;
    double side = 1.0;     ///< region side length, km
    double alpha = 3.0;    ///< pathloss exponent, > 2
    double min_dist = 0.0; ///< UE-BS exclusion radius, km

    std::size_t cells() const { return bs_positions.size(); }

    /// Throws std::invalid_argument unless L >= 1, alpha > 2,
    /// 0 < min_dist < side/(2L) and all coordinates lie in [0, side).
    void validate() const;
};

/// Euclidean distance under the minimum-image convention, per axis
/// |d| -> min(|d|, side - |d|). A metric on the torus; at most side/sqrt(2).
double torus_distance(const Point& a, const Point& b, double side);

/// Channel attenuation variance max(dist, min_dist)^(-alpha) from UE position
/// z to the given BS. Only ratios of this quantity reach any downstream
/// formula, so the pathloss constant is fixed to 1.
double channel_variance(const Deployment& dep, std::size_t bs, const Point& z);

/// L BS positions drawn i.i.d. uniform on a square sized so the BS density is
/// `density` per km^2 (side = sqrt(L/density)). min_dist defaults to side/1000.
/// Deterministic in (L, density, seed); alpha does not affect the positions.
Deployment generate_deployment(std::size_t L, double density, std::uint64_t seed,
                               double alpha = 3.0);

/// Index of the nearest BS under the torus metric, ties to the lowest index.
std::size_t assign_cell(const Deployment& dep, const Point& z);

/// Uniform sample on cell `cell` minus the min_dist exclusion disc, by
/// rejection from the square. Throws std::runtime_error after 10^6 rejections
/// (degenerate cell of near-zero measure).
Point sample_ue_in_cell(const Deployment& dep, std::size_t cell, Rng& rng);

/// Stable content hash of a deployment (used as provenance in derived files).
std::uint64_t deployment_hash(const Deployment& dep);

} // namespace pilotshare
