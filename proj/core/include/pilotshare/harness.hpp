#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pilotshare/game.hpp"
#include "pilotshare/spectral.hpp"

namespace pilotshare {

enum class Method { Formation, Singletons, Grand, Exhaustive };

const char* to_string(Method m);
std::optional<Method> method_from_string(std::string_view s);

/// Everything a sweep needs. Defaults reproduce the reference operating
/// point: S = 400 symbols, 5 dB SNR, pathloss exponent 3, 10 pilots per
/// cell, searching budget 100, density 25 BS/km^2.
struct ExperimentConfig {
    std::size_t cells = 7;      ///< L
    double density = 25.0;      ///< BS per km^2
    int pilots_per_cell = 10;   ///< B = L * pilots_per_cell
    int frame_symbols = 400;    ///< S
    double snr_db = 5.0;
    double alpha = 3.0;
    std::vector<int> m_sweep = {100};
    std::vector<Scheme> schemes = {Scheme::MRC};
    int budget = 100;           ///< per-BS searching budget q, broadcast
    std::size_t trials = 10;    ///< independent random deployments
    std::size_t mu_samples = 10000;
    std::uint64_t master_seed = 1;
    Objective objective = Objective::TotalSe;
    std::vector<Method> methods = {Method::Formation, Method::Singletons,
                                   Method::Grand, Method::Exhaustive};

    double snr_linear() const;
    SystemParams params_for(int antennas) const;

    /// Throws std::invalid_argument on bad field values, including the
    /// exhaustive method with L > 12.
    void validate() const;
};

/// One (trial, M, scheme, method) outcome.
struct ResultRecord {
    std::size_t trial = 0;
    int antennas = 0;
    Scheme scheme = Scheme::MRC;
    Method method = Method::Formation;
    double mean_se = 0.0;            ///< per-cell mean SE, bit/s/Hz
    double mean_coalition_size = 0.0;
    double mean_searches = 0.0;      ///< per BS; nonzero only for formation
    int deviations = 0;
    bool stable = false;
    double wall_ms = 0.0;            ///< not part of the deterministic CSV

    bool operator==(const ResultRecord&) const = default;
};

/// Runs the full cross product trials x M_sweep x schemes x methods. Every
/// trial derives its own (deployment, mu, formation) seeds from
/// (master_seed, trial, purpose tag), so trials are independent and the
/// output is identical for any worker count; records are emitted in
/// deterministic trial-major order.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config,
                                         std::size_t workers = 1);

struct SummaryRow {
    int antennas = 0;
    Scheme scheme = Scheme::MRC;
    Method method = Method::Formation;
    std::size_t trials = 0;
    double se_mean = 0.0, se_stderr = 0.0;
    double size_mean = 0.0, size_stderr = 0.0;
    double searches_mean = 0.0, searches_stderr = 0.0;
};

/// Means and standard errors over trials, keyed by (M, scheme, method) in
/// first-appearance order. Throws on an empty record set.
std::vector<SummaryRow> aggregate(const std::vector<ResultRecord>& records);

/// Header row plus one record per line, fixed column order, full float
/// precision. Timing is opt-in: the default column set is bit-stable across
/// reruns of the same config and seed.
void emit_records_csv(std::ostream& os, const std::vector<ResultRecord>& records,
                      bool include_timing = false);
std::vector<ResultRecord> parse_records_csv(std::istream& is);

void emit_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Flat key=value config format; keys mirror the ExperimentConfig fields
/// (L, density, pilots_per_cell, S, snr_db, alpha, M_sweep, schemes,
/// budgets, trials, mu_samples, master_seed, objective, methods).
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::string& path);
void write_config(std::ostream& os, const ExperimentConfig& config);

} // namespace pilotshare
