#include "pilotshare/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pilotshare {

const char* to_string(Scheme s) { return s == Scheme::MRC ? "mrc" : "zfc"; }

std::optional<Scheme> scheme_from_string(std::string_view s) {
    if (s == "mrc" || s == "MRC") return Scheme::MRC;
    if (s == "zfc" || s == "ZFC") return Scheme::ZFC;
    return std::nullopt;
}

void SystemParams::validate() const {
    if (cells < 1) throw std::invalid_argument("cell count must be >= 1");
    if (pilots < 1 || pilots % static_cast<int>(cells) != 0)
        throw std::invalid_argument("pilot budget B must be a positive multiple of L");
    if (pilots >= frame_symbols)
        throw std::invalid_argument("need B < S: pilots must fit in the frame");
    if (antennas < 1) throw std::invalid_argument("antenna count must be >= 1");
    if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
}

int scheduled_ues(std::size_t j, const CoalitionStructure& c, const SystemParams& p) {
    return p.pilots_per_cell() * static_cast<int>(c.coalition_size_of(j));
}

InterferenceTerms interference_terms(std::size_t j, const CoalitionStructure& c,
                                     const SystemParams& p,
                                     const PropagationTable& table, Scheme scheme) {
    const std::size_t L = c.cells();
    const int ppc = p.pilots_per_cell();
    const int own_label = c.label_of(j);
    const std::vector<std::size_t> sizes = c.block_sizes();
    const int k_j = ppc * static_cast<int>(sizes[own_label]);

    InterferenceTerms out;
    const double gain = scheme == Scheme::MRC
                            ? static_cast<double>(p.antennas)
                            : static_cast<double>(p.antennas - k_j);
    if (!(gain > 0.0)) return out; // ZFC with M <= K_j cannot operate
    out.feasible = true;

    const double inv_snr = 1.0 / p.snr;                            // sigma^2 / rho
    const double inv_bsnr = 1.0 / (static_cast<double>(p.pilots) * p.snr); // sigma^2 / (B rho)

    // Pilot contamination: cells sharing j's pilots, estimation-error
    // variance suppressed by the array gain.
    double pilot = 0.0;
    // Scheduled-load-weighted interference from every cell in the network,
    // plus sums over j's own coalition.
    double inter_sum = 0.0;
    double coal_sum = 0.0;
    double coal_sq_sum = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        const double m1 = table.mu1_at(j, l);
        inter_sum += m1 * static_cast<double>(ppc) * static_cast<double>(sizes[c.label_of(l)]);
        if (c.label_of(l) != own_label) continue;
        coal_sum += m1;
        coal_sq_sum += m1 * m1;
        if (l != j) {
            const double m2 = table.mu2_at(j, l);
            pilot += m2 + (m2 - m1 * m1) / gain;
        }
    }
    out.pilot_contamination = pilot;

    const double coal_eps = coal_sum + inv_bsnr;
    if (scheme == Scheme::MRC) {
        out.inter_user = (inter_sum + inv_snr) * coal_eps / gain;
    } else {
        // ZFC cancels the part of the interference its channel estimates can
        // see; the cancelled power is the estimation-gain correction term.
        const double correction = coal_sq_sum * static_cast<double>(k_j) / coal_eps;
        out.inter_user = (inter_sum - correction + inv_snr) * coal_eps / gain;
    }
    return out;
}

std::optional<double> interference(std::size_t j, const CoalitionStructure& c,
                                   const SystemParams& p,
                                   const PropagationTable& table, Scheme scheme) {
    const InterferenceTerms terms = interference_terms(j, c, p, table, scheme);
    if (!terms.feasible) return std::nullopt;
    return terms.total();
}

double cell_utility(std::size_t j, const CoalitionStructure& c,
                    const SystemParams& p, const PropagationTable& table,
                    Scheme scheme) {
    const std::optional<double> i_j = interference(j, c, p, table, scheme);
    if (!i_j) return 0.0;
    const double overhead = 1.0 - static_cast<double>(p.pilots) /
                                      static_cast<double>(p.frame_symbols);
    const double k_j = scheduled_ues(j, c, p);
    return overhead * k_j * std::log2(1.0 + 1.0 / *i_j);
}

OracleEstimate oracle_se(std::size_t j, const CoalitionStructure& c,
                         const SystemParams& p, const Deployment& dep,
                         Scheme scheme, std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("oracle needs trials >= 1");
    const std::size_t L = c.cells();
    const int ppc = p.pilots_per_cell();
    const std::vector<std::size_t> sizes = c.block_sizes();
    const int own_label = c.label_of(j);
    const int k_j = ppc * static_cast<int>(sizes[own_label]);

    OracleEstimate est;
    est.trials = trials;
    if (scheme == Scheme::ZFC && p.antennas <= k_j) {
        est.feasible = false;
        return est; // priced as 0, mirroring cell_utility
    }

    const double gain = scheme == Scheme::MRC
                            ? static_cast<double>(p.antennas)
                            : static_cast<double>(p.antennas - k_j);
    const double inv_snr = 1.0 / p.snr;
    const double inv_bsnr = 1.0 / (static_cast<double>(p.pilots) * p.snr);
    const double overhead = 1.0 - static_cast<double>(p.pilots) /
                                      static_cast<double>(p.frame_symbols);

    std::vector<int> scheduled(L);
    std::vector<std::size_t> coalition; // cells sharing j's pilots
    for (std::size_t l = 0; l < L; ++l) {
        scheduled[l] = ppc * static_cast<int>(sizes[c.label_of(l)]);
        if (c.label_of(l) == own_label) coalition.push_back(l);
    }

    Rng rng(seed);
    // ratio[l][m] = d_j(z_lm) / d_l(z_lm) for the m-th UE of cell l. Pilot
    // slot m is shared by the m-th UE of every cell in a coalition (all
    // coalition members schedule the same K).
    std::vector<std::vector<double>> ratio(L);

    double acc = 0.0, acc_sq = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (std::size_t l = 0; l < L; ++l) {
            ratio[l].resize(static_cast<std::size_t>(scheduled[l]));
            for (int m = 0; m < scheduled[l]; ++m) {
                const Point z = sample_ue_in_cell(dep, l, rng);
                ratio[l][m] = channel_variance(dep, j, z) / channel_variance(dep, l, z);
            }
        }

        // Network-wide interference load, identical for every pilot slot.
        double load = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            for (double r : ratio[l]) load += r;
        }

        // ZFC subtracts, per pilot slot m, the power its estimate of slot m
        // captured; the slot's estimation normalizer couples the m-th UEs of
        // all coalition cells.
        double cancelled = 0.0;
        if (scheme == Scheme::ZFC) {
            for (int m = 0; m < k_j; ++m) {
                double norm = inv_bsnr;
                for (std::size_t l : coalition) norm += ratio[l][m];
                for (std::size_t l : coalition) {
                    const double r = ratio[l][m];
                    cancelled += r * r / norm;
                }
            }
        }

        double se = 0.0;
        for (int k = 0; k < k_j; ++k) {
            double contamination = 0.0; // squared-ratio leakage of slot k
            double slot_norm = inv_bsnr;
            for (std::size_t l : coalition) {
                const double r = ratio[l][k];
                slot_norm += r;
                if (l != j) contamination += r * r;
            }
            double denom;
            if (scheme == Scheme::MRC) {
                denom = contamination + slot_norm * (load / gain + inv_snr / gain);
            } else {
                denom = contamination + (load - cancelled + inv_snr) * slot_norm / gain;
            }
            se += std::log2(1.0 + 1.0 / denom);
        }
        se *= overhead;
        acc += se;
        acc_sq += se * se;
    }

    const double n = static_cast<double>(trials);
    est.se = acc / n;
    if (trials > 1) {
        const double var = (acc_sq - acc * acc / n) / (n - 1.0);
        est.std_error = std::sqrt(std::max(0.0, var) / n);
    }
    return est;
}

} // namespace pilotshare
