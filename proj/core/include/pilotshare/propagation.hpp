#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pilotshare/geometry.hpp"

namespace pilotshare {

/// First and second moments of the channel-variance ratio d_j/d_l for a UE
/// placed uniformly in cell l. These two L x L matrices are the network's
/// topology fingerprint: every spectral-efficiency expression consumes the
/// deployment only through them, so a table is estimated once per deployment
/// and reused across antenna counts and coalition structures.
///
/// Voronoi association makes the serving BS the nearest one, hence every
/// entry lies in (0, 1]; the same-sample estimate keeps the variance
/// mu2 - mu1^2 nonnegative.
struct PropagationTable {
    std::size_t cells = 0;
    std::vector<double> mu1; ///< row-major L x L, mu1[j*L + l]
    std::vector<double> mu2;
    std::size_t samples_per_cell = 0;
    std::uint64_t seed = 0;
    std::uint64_t source_hash = 0; ///< deployment_hash of the source layout

    double mu1_at(std::size_t j, std::size_t l) const { return mu1[j * cells + l]; }
    double mu2_at(std::size_t j, std::size_t l) const { return mu2[j * cells + l]; }

    /// Asserts the four table invariants: unit diagonal, entries in (0, 1],
    /// mu2 >= mu1^2 and mu2 <= mu1 entrywise. Throws std::runtime_error.
    void validate() const;
};

/// Monte-Carlo estimate of the moment table over uniform UE positions in each
/// cell. Cell streams are derived from (seed, cell), so the result does not
/// depend on evaluation order. Diagonal entries are set to 1 analytically.
/// Deterministic in (deployment, samples_per_cell, seed).
PropagationTable estimate_propagation(const Deployment& dep,
                                      std::size_t samples_per_cell,
                                      std::uint64_t seed);

} // namespace pilotshare
