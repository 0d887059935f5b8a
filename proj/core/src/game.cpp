#include "pilotshare/game.hpp"

#include <stdexcept>

namespace pilotshare {

double restricted_utility(std::size_t j, const CoalitionStructure& c, int eta_j,
                          int budget_j, const SystemParams& p,
                          const PropagationTable& table, Scheme scheme) {
    if (eta_j > budget_j) return 0.0;
    return cell_utility(j, c, p, table, scheme);
}

bool is_admissible(const CoalitionStructure& c, std::size_t j, int target,
                   const GameState& state, const SystemParams& p,
                   const PropagationTable& table, Scheme scheme) {
    const CoalitionStructure after = c.deviate(j, target);
    const auto u = [&](std::size_t cell, const CoalitionStructure& in) {
        return restricted_utility(cell, in, state.eta[cell], state.budgets[cell],
                                  p, table, scheme);
    };
    if (!(u(j, after) > u(j, c))) return false;
    if (target == kEmptyCoalition) return true; // nobody to ask
    for (std::size_t k : c.block_members(target)) {
        if (u(k, after) < u(k, c)) return false;
    }
    return true;
}

namespace {

// Candidate targets where j's restricted utility strictly improves, under
// the current eta. The empty coalition participates like any block.
std::vector<int> profitable_targets(const CoalitionStructure& c, std::size_t j,
                                    const GameState& state, const SystemParams& p,
                                    const PropagationTable& table, Scheme scheme) {
    std::vector<int> out;
    if (state.eta[j] > state.budgets[j]) return out; // utility pinned to 0
    const double base = cell_utility(j, c, p, table, scheme);
    const int own = c.label_of(j);
    for (int lab = 0; lab < static_cast<int>(c.num_blocks()); ++lab) {
        if (lab == own) continue;
        if (cell_utility(j, c.deviate(j, lab), p, table, scheme) > base)
            out.push_back(lab);
    }
    if (c.coalition_size_of(j) > 1) {
        if (cell_utility(j, c.deviate(j, kEmptyCoalition), p, table, scheme) > base)
            out.push_back(kEmptyCoalition);
    }
    return out;
}

} // namespace

FormationTrace run_formation(const SystemParams& p, const PropagationTable& table,
                             const std::vector<int>& budgets, Scheme scheme,
                             std::uint64_t seed) {
    p.validate();
    const std::size_t L = p.cells;
    if (budgets.size() != L)
        throw std::invalid_argument("budget vector must have one entry per BS");
    if (table.cells != L)
        throw std::invalid_argument("propagation table does not match cell count");

    FormationTrace trace;
    trace.initial = CoalitionStructure::singletons(L);
    trace.budgets = budgets;

    GameState state{CoalitionStructure::singletons(L), std::vector<int>(L, 0),
                    budgets, 0};
    Rng rng(seed);
    std::vector<std::size_t> order(L);
    for (std::size_t i = 0; i < L; ++i) order[i] = i;

    bool deviated = true;
    while (deviated) {
        deviated = false;
        shuffle_in_place(order, rng);
        for (std::size_t idx = 0; idx < L && !deviated; ++idx) {
            const std::size_t j = order[idx];
            std::vector<int> targets =
                profitable_targets(state.structure, j, state, p, table, scheme);
            if (targets.empty()) continue;
            shuffle_in_place(targets, rng);
            for (int target : targets) {
                // A previous attempt may have spent the last budget unit; the
                // profitability condition then fails for every target.
                if (state.eta[j] > state.budgets[j]) break;
                ++state.eta[j]; // the search happens before the verdict
                if (!is_admissible(state.structure, j, target, state, p, table,
                                   scheme))
                    continue;
                DeviationEvent ev;
                ev.cell = j;
                ev.source = state.structure.coalition_of(j);
                ev.target = target == kEmptyCoalition
                                ? std::vector<std::size_t>{}
                                : state.structure.block_members(target);
                state.structure = state.structure.deviate(j, target);
                ev.t = ++state.deviations;
                trace.events.push_back(std::move(ev));
                deviated = true; // restart the scan from a fresh pass
                break;
            }
        }
    }

    trace.final_structure = state.structure;
    trace.eta = state.eta;
    trace.deviations = state.deviations;
    trace.stable = is_individually_stable(state.structure, p, table, budgets,
                                          state.eta, scheme);
    return trace;
}

bool is_individually_stable(const CoalitionStructure& c, const SystemParams& p,
                            const PropagationTable& table,
                            const std::vector<int>& budgets,
                            const std::vector<int>& eta, Scheme scheme) {
    GameState state{c, eta, budgets, 0};
    for (std::size_t j = 0; j < c.cells(); ++j) {
        for (int lab = 0; lab < static_cast<int>(c.num_blocks()); ++lab) {
            if (lab == c.label_of(j)) continue;
            if (is_admissible(c, j, lab, state, p, table, scheme)) return false;
        }
        if (c.coalition_size_of(j) > 1 &&
            is_admissible(c, j, kEmptyCoalition, state, p, table, scheme))
            return false;
    }
    return true;
}

CoalitionStructure replay_trace(const FormationTrace& trace) {
    CoalitionStructure c = trace.initial;
    for (const DeviationEvent& ev : trace.events) {
        const int target = ev.target.empty()
                               ? kEmptyCoalition
                               : c.label_of(ev.target.front());
        c = c.deviate(ev.cell, target);
    }
    return c;
}

const char* to_string(Objective o) {
    return o == Objective::TotalSe ? "total-SE" : "per-cell-mean";
}

std::optional<Objective> objective_from_string(std::string_view s) {
    if (s == "total-SE" || s == "total-se" || s == "total")
        return Objective::TotalSe;
    if (s == "per-cell-mean" || s == "mean") return Objective::PerCellMean;
    return std::nullopt;
}

double structure_objective(const CoalitionStructure& c, const SystemParams& p,
                           const PropagationTable& table, Scheme scheme,
                           Objective objective) {
    double total = 0.0;
    for (std::size_t j = 0; j < c.cells(); ++j)
        total += cell_utility(j, c, p, table, scheme);
    if (objective == Objective::PerCellMean)
        return total / static_cast<double>(c.cells());
    return total;
}

std::pair<CoalitionStructure, double>
exhaustive_optimum(const SystemParams& p, const PropagationTable& table,
                   Scheme scheme, Objective objective) {
    p.validate();
    PartitionEnumerator en(p.cells); // enforces the L <= 12 guard
    CoalitionStructure c;
    CoalitionStructure best;
    double best_value = -1.0;
    while (en.next(c)) {
        const double value = structure_objective(c, p, table, scheme, objective);
        if (value > best_value) {
            best_value = value;
            best = c;
        }
    }
    return {best, best_value};
}

} // namespace pilotshare
