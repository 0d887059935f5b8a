#include "pilotshare/propagation.hpp"

#include <stdexcept>
#include <string>

namespace pilotshare {

void PropagationTable::validate() const {
    const std::size_t L = cells;
    if (mu1.size() != L * L || mu2.size() != L * L)
        throw std::runtime_error("propagation table has wrong shape");
    for (std::size_t j = 0; j < L; ++j) {
        for (std::size_t l = 0; l < L; ++l) {
            const double m1 = mu1_at(j, l);
            const double m2 = mu2_at(j, l);
            const std::string at = " at (" + std::to_string(j) + "," + std::to_string(l) + ")";
            if (j == l) {
                if (m1 != 1.0 || m2 != 1.0)
                    throw std::runtime_error("propagation diagonal must be exactly 1" + at);
                continue;
            }
            if (!(m1 > 0.0 && m1 <= 1.0) || !(m2 > 0.0 && m2 <= 1.0))
                throw std::runtime_error("propagation moment outside (0,1]" + at);
            // 1e-12 slack absorbs the rounding of same-sample moment sums.
            if (m2 < m1 * m1 - 1e-12)
                throw std::runtime_error("mu2 < mu1^2 (negative variance)" + at);
            if (m2 > m1 + 1e-12)
                throw std::runtime_error("mu2 > mu1 (ratio above 1?)" + at);
        }
    }
}

PropagationTable estimate_propagation(const Deployment& dep,
                                      std::size_t samples_per_cell,
                                      std::uint64_t seed) {
    if (samples_per_cell < 1)
        throw std::invalid_argument("samples_per_cell must be >= 1");
    dep.validate();

    const std::size_t L = dep.cells();
    PropagationTable table;
    table.cells = L;
    table.samples_per_cell = samples_per_cell;
    table.seed = seed;
    table.source_hash = deployment_hash(dep);
    table.mu1.assign(L * L, 0.0);
    table.mu2.assign(L * L, 0.0);

    std::vector<double> var(L);
    for (std::size_t l = 0; l < L; ++l) {
        Rng rng(derive_seed(seed, l, "mu-cell"));
        std::vector<double> sum1(L, 0.0), sum2(L, 0.0);
        for (std::size_t s = 0; s < samples_per_cell; ++s) {
            const Point z = sample_ue_in_cell(dep, l, rng);
            for (std::size_t j = 0; j < L; ++j) var[j] = channel_variance(dep, j, z);
            const double serving = var[l];
            for (std::size_t j = 0; j < L; ++j) {
                const double r = var[j] / serving;
                sum1[j] += r;
                sum2[j] += r * r;
            }
        }
        const double inv = 1.0 / static_cast<double>(samples_per_cell);
        for (std::size_t j = 0; j < L; ++j) {
            table.mu1[j * L + l] = sum1[j] * inv;
            table.mu2[j * L + l] = sum2[j] * inv;
        }
        table.mu1[l * L + l] = 1.0;
        table.mu2[l * L + l] = 1.0;
    }

    table.validate();
    return table;
}

} // namespace pilotshare
