#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "pilotshare/geometry.hpp"
#include "pilotshare/partition.hpp"
#include "pilotshare/propagation.hpp"

namespace pilotshare {

enum class Scheme { MRC, ZFC };

const char* to_string(Scheme s);
std::optional<Scheme> scheme_from_string(std::string_view s);

/// Uplink system parameters. Only the ratio rho/sigma^2 is stored; the
/// interference expressions consume sigma^2/rho = 1/snr and
/// sigma^2/(B rho) = 1/(B snr).
struct SystemParams {
    int antennas = 100;      ///< M, per BS
    int pilots = 0;          ///< B, total orthogonal pilots in the network
    int frame_symbols = 400; ///< S, symbols per frame (B of them spent on pilots)
    double snr = 1.0;        ///< rho/sigma^2, linear
    std::size_t cells = 0;   ///< L

    int pilots_per_cell() const { return pilots / static_cast<int>(cells); }

    /// Throws std::invalid_argument unless B is a positive multiple of L,
    /// B < S, M >= 1 and snr > 0.
    void validate() const;
};

/// UEs scheduled by a cell: K_j = (B/L) |coalition of j|.
int scheduled_ues(std::size_t j, const CoalitionStructure& c, const SystemParams& p);

/// The two parts of the denominator term I_j: pilot contamination (only the
/// cells sharing j's pilots contribute) and inter-user interference scaled by
/// the array gain (M for MRC, M - K_j for ZFC). `feasible` is false when ZFC
/// has no array gain left (M <= K_j); the value fields are unset then.
struct InterferenceTerms {
    bool feasible = false;
    double pilot_contamination = 0.0;
    double inter_user = 0.0;
    double total() const { return pilot_contamination + inter_user; }
};

InterferenceTerms interference_terms(std::size_t j, const CoalitionStructure& c,
                                     const SystemParams& p,
                                     const PropagationTable& table, Scheme scheme);

/// Interference term I_j of the average-SE lower bound; std::nullopt when ZFC
/// is infeasible for j's coalition size.
std::optional<double> interference(std::size_t j, const CoalitionStructure& c,
                                   const SystemParams& p,
                                   const PropagationTable& table, Scheme scheme);

/// Lower bound on the average ergodic sum SE of cell j, in bit/s/Hz:
/// (1 - B/S) K_j log2(1 + 1/I_j). A ZFC-infeasible coalition earns 0, so the
/// formation dynamics can price oversized coalitions without special cases.
double cell_utility(std::size_t j, const CoalitionStructure& c,
                    const SystemParams& p, const PropagationTable& table,
                    Scheme scheme);

struct OracleEstimate {
    double se = 0.0;       ///< mean over trials, bit/s/Hz for the whole cell
    double std_error = 0.0; ///< standard error of that mean
    std::size_t trials = 0;
    bool feasible = true;
};

/// Monte-Carlo estimate of cell j's exact average ergodic SE, with fading
/// already marginalized: only UE positions are random. Each trial places
/// K_l UEs in every cell l, evaluates the per-position post-estimation SINR
/// of every pilot slot k served by BS j, and accumulates
/// (1 - B/S) sum_k log2(1 + SINR_jk). By construction its mean dominates
/// cell_utility (the closed form moves the position expectation into the
/// SINR denominator). Deterministic in seed; ZFC-infeasible cases return 0.
OracleEstimate oracle_se(std::size_t j, const CoalitionStructure& c,
                         const SystemParams& p, const Deployment& dep,
                         Scheme scheme, std::size_t trials, std::uint64_t seed);

} // namespace pilotshare
