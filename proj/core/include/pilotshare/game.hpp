#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "pilotshare/partition.hpp"
#include "pilotshare/spectral.hpp"

namespace pilotshare {

/// Running state of the formation dynamics: current structure, per-BS search
/// counts eta, per-BS search budgets q, and the deviation counter t. The
/// dynamics keep t <= sum(q) because any deviation first spends a search.
struct GameState {
    CoalitionStructure structure;
    std::vector<int> eta;
    std::vector<int> budgets;
    int deviations = 0;
};

/// One accepted deviation, with enough context to replay it: the cell, its
/// coalition before the move, and the block it joined (empty vector = it
/// formed a new singleton). `t` is the deviation counter after the move.
struct DeviationEvent {
    int t = 0;
    std::size_t cell = 0;
    std::vector<std::size_t> source;
    std::vector<std::size_t> target;
};

struct FormationTrace {
    CoalitionStructure initial;
    CoalitionStructure final_structure;
    std::vector<DeviationEvent> events;
    std::vector<int> eta;
    std::vector<int> budgets;
    int deviations = 0;
    bool stable = false; ///< certified via is_individually_stable at the end
};

/// Budget-restricted utility: the cell's average SE while its searching
/// budget lasts (eta_j <= q_j, boundary inclusive), 0 once exhausted.
double restricted_utility(std::size_t j, const CoalitionStructure& c, int eta_j,
                          int budget_j, const SystemParams& p,
                          const PropagationTable& table, Scheme scheme);

/// Admissibility of cell j leaving its coalition for `target` (a block label
/// or kEmptyCoalition): j must strictly improve and every member of the
/// target block must weakly keep its utility, all under the restricted
/// utilities at the current eta vector. A cell past its budget compares
/// 0 against 0, so it never deviates but always consents.
bool is_admissible(const CoalitionStructure& c, std::size_t j, int target,
                   const GameState& state, const SystemParams& p,
                   const PropagationTable& table, Scheme scheme);

/// Runs the distributed coalition-formation dynamics from the all-singletons
/// structure. BSs are visited in seeded random order; the visited BS tries
/// its profitable targets (blocks plus the empty coalition) in seeded random
/// order, spending one search per attempt before the admissibility verdict.
/// An admissible deviation applies immediately and restarts the scan; the run
/// ends when a complete pass produces no deviation, which certifies
/// individual stability of the result. Deterministic in seed.
FormationTrace run_formation(const SystemParams& p, const PropagationTable& table,
                             const std::vector<int>& budgets, Scheme scheme,
                             std::uint64_t seed);

/// Exhaustive check of Definition 4 over every (cell, target) pair,
/// including deviations to the empty coalition.
bool is_individually_stable(const CoalitionStructure& c, const SystemParams& p,
                            const PropagationTable& table,
                            const std::vector<int>& budgets,
                            const std::vector<int>& eta, Scheme scheme);

/// Applies the recorded deviations to the trace's initial structure. The
/// result must equal trace.final_structure; used by replay tests and the CLI.
CoalitionStructure replay_trace(const FormationTrace& trace);

enum class Objective { TotalSe, PerCellMean };

const char* to_string(Objective o);
std::optional<Objective> objective_from_string(std::string_view s);

double structure_objective(const CoalitionStructure& c, const SystemParams& p,
                           const PropagationTable& table, Scheme scheme,
                           Objective objective);

/// Best coalition structure over all Bell(L) partitions (L <= 12), by
/// enumeration; ties keep the earliest partition in enumeration order.
std::pair<CoalitionStructure, double>
exhaustive_optimum(const SystemParams& p, const PropagationTable& table,
                   Scheme scheme, Objective objective = Objective::TotalSe);

} // namespace pilotshare
