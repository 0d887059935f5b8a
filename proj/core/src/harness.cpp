#include "pilotshare/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pilotshare/io.hpp"

namespace pilotshare {

const char* to_string(Method m) {
    switch (m) {
        case Method::Formation: return "formation";
        case Method::Singletons: return "singletons";
        case Method::Grand: return "grand";
        case Method::Exhaustive: return "exhaustive";
    }
    return "?";
}

std::optional<Method> method_from_string(std::string_view s) {
    if (s == "formation") return Method::Formation;
    if (s == "singletons") return Method::Singletons;
    if (s == "grand") return Method::Grand;
    if (s == "exhaustive") return Method::Exhaustive;
    return std::nullopt;
}

double ExperimentConfig::snr_linear() const {
    return std::pow(10.0, snr_db / 10.0);
}

SystemParams ExperimentConfig::params_for(int antennas) const {
    SystemParams p;
    p.antennas = antennas;
    p.pilots = pilots_per_cell * static_cast<int>(cells);
    p.frame_symbols = frame_symbols;
    p.snr = snr_linear();
    p.cells = cells;
    return p;
}

void ExperimentConfig::validate() const {
    if (cells < 1) throw std::invalid_argument("L must be >= 1");
    if (!(density > 0.0)) throw std::invalid_argument("density must be positive");
    if (pilots_per_cell < 1)
        throw std::invalid_argument("pilots_per_cell must be >= 1");
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (mu_samples < 1) throw std::invalid_argument("mu_samples must be >= 1");
    if (budget < 0) throw std::invalid_argument("budgets must be >= 0");
    if (m_sweep.empty()) throw std::invalid_argument("M_sweep must be non-empty");
    if (schemes.empty()) throw std::invalid_argument("schemes must be non-empty");
    if (methods.empty()) throw std::invalid_argument("methods must be non-empty");
    for (int m : m_sweep) {
        if (m < 1) throw std::invalid_argument("every M in M_sweep must be >= 1");
        params_for(m).validate();
    }
    for (Method m : methods) {
        if (m == Method::Exhaustive && cells > 12)
            throw std::invalid_argument(
                "exhaustive search supports at most 12 cells");
    }
}

namespace {

struct MethodOutcome {
    CoalitionStructure structure;
    double mean_searches = 0.0;
    int deviations = 0;
    bool stable = false;
};

std::vector<ResultRecord> run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    const Deployment dep =
        generate_deployment(cfg.cells, cfg.density,
                            derive_seed(cfg.master_seed, trial, "deploy"),
                            cfg.alpha);
    const PropagationTable table = estimate_propagation(
        dep, cfg.mu_samples, derive_seed(cfg.master_seed, trial, "mu"));
    const std::vector<int> budgets(cfg.cells, cfg.budget);
    const std::vector<int> zero_eta(cfg.cells, 0);

    std::vector<ResultRecord> records;
    for (int antennas : cfg.m_sweep) {
        const SystemParams params = cfg.params_for(antennas);
        for (Scheme scheme : cfg.schemes) {
            for (Method method : cfg.methods) {
                const auto start = std::chrono::steady_clock::now();
                MethodOutcome out;
                switch (method) {
                    case Method::Formation: {
                        const std::string tag = std::string("form:M=") +
                                                std::to_string(antennas) + ":" +
                                                to_string(scheme);
                        FormationTrace trace = run_formation(
                            params, table, budgets, scheme,
                            derive_seed(cfg.master_seed, trial, tag));
                        out.structure = trace.final_structure;
                        out.mean_searches =
                            std::accumulate(trace.eta.begin(), trace.eta.end(), 0.0) /
                            static_cast<double>(cfg.cells);
                        out.deviations = trace.deviations;
                        out.stable = trace.stable;
                        break;
                    }
                    case Method::Singletons:
                        out.structure = CoalitionStructure::singletons(cfg.cells);
                        out.stable = is_individually_stable(
                            out.structure, params, table, budgets, zero_eta, scheme);
                        break;
                    case Method::Grand:
                        out.structure = CoalitionStructure::grand(cfg.cells);
                        out.stable = is_individually_stable(
                            out.structure, params, table, budgets, zero_eta, scheme);
                        break;
                    case Method::Exhaustive:
                        out.structure =
                            exhaustive_optimum(params, table, scheme, cfg.objective)
                                .first;
                        out.stable = is_individually_stable(
                            out.structure, params, table, budgets, zero_eta, scheme);
                        break;
                }
                ResultRecord rec;
                rec.trial = trial;
                rec.antennas = antennas;
                rec.scheme = scheme;
                rec.method = method;
                rec.mean_se = structure_objective(out.structure, params, table,
                                                  scheme, Objective::PerCellMean);
                rec.mean_coalition_size =
                    static_cast<double>(cfg.cells) /
                    static_cast<double>(out.structure.num_blocks());
                rec.mean_searches = out.mean_searches;
                rec.deviations = out.deviations;
                rec.stable = out.stable;
                rec.wall_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
                records.push_back(rec);
            }
        }
    }
    return records;
}

} // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config,
                                         std::size_t workers) {
    config.validate();
    if (workers < 1) workers = 1;

    std::vector<std::vector<ResultRecord>> per_trial(config.trials);
    if (workers == 1 || config.trials == 1) {
        for (std::size_t t = 0; t < config.trials; ++t)
            per_trial[t] = run_trial(config, t);
    } else {
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t t = cursor.fetch_add(1);
                if (t >= config.trials) return;
                try {
                    per_trial[t] = run_trial(config, t);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::size_t>(workers, config.trials);
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    std::vector<ResultRecord> records;
    for (std::vector<ResultRecord>& part : per_trial)
        records.insert(records.end(), part.begin(), part.end());
    return records;
}

std::vector<SummaryRow> aggregate(const std::vector<ResultRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("cannot aggregate an empty record set");

    struct Acc {
        SummaryRow key;
        std::vector<double> se, size, searches;
    };
    std::vector<Acc> groups;
    for (const ResultRecord& r : records) {
        Acc* acc = nullptr;
        for (Acc& g : groups) {
            if (g.key.antennas == r.antennas && g.key.scheme == r.scheme &&
                g.key.method == r.method) {
                acc = &g;
                break;
            }
        }
        if (!acc) {
            groups.emplace_back();
            acc = &groups.back();
            acc->key.antennas = r.antennas;
            acc->key.scheme = r.scheme;
            acc->key.method = r.method;
        }
        acc->se.push_back(r.mean_se);
        acc->size.push_back(r.mean_coalition_size);
        acc->searches.push_back(r.mean_searches);
    }

    auto mean_stderr = [](const std::vector<double>& v, double& mean, double& se) {
        const double n = static_cast<double>(v.size());
        mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        se = 0.0;
        if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            se = std::sqrt(ss / (n - 1.0) / n);
        }
    };

    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (Acc& g : groups) {
        SummaryRow row = g.key;
        row.trials = g.se.size();
        mean_stderr(g.se, row.se_mean, row.se_stderr);
        mean_stderr(g.size, row.size_mean, row.size_stderr);
        mean_stderr(g.searches, row.searches_mean, row.searches_stderr);
        rows.push_back(row);
    }
    return rows;
}

void emit_records_csv(std::ostream& os, const std::vector<ResultRecord>& records,
                      bool include_timing) {
    os << "trial,M,scheme,method,mean_se,mean_coalition_size,mean_searches,"
          "deviations,stable";
    if (include_timing) os << ",wall_ms";
    os << "\n";
    for (const ResultRecord& r : records) {
        os << r.trial << ',' << r.antennas << ',' << to_string(r.scheme) << ','
           << to_string(r.method) << ',' << format_double(r.mean_se) << ','
           << format_double(r.mean_coalition_size) << ','
           << format_double(r.mean_searches) << ',' << r.deviations << ','
           << (r.stable ? 1 : 0);
        if (include_timing) os << ',' << format_double(r.wall_ms);
        os << "\n";
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) out.push_back(field);
    return out;
}

} // namespace

std::vector<ResultRecord> parse_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("records CSV: missing header");
    const bool timing = line.find(",wall_ms") != std::string::npos;
    const std::size_t expected = timing ? 10 : 9;

    std::vector<ResultRecord> records;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != expected)
            throw std::runtime_error("records CSV: bad field count in: " + line);
        ResultRecord r;
        r.trial = std::stoull(f[0]);
        r.antennas = std::stoi(f[1]);
        const auto scheme = scheme_from_string(f[2]);
        const auto method = method_from_string(f[3]);
        if (!scheme || !method)
            throw std::runtime_error("records CSV: bad scheme/method in: " + line);
        r.scheme = *scheme;
        r.method = *method;
        r.mean_se = std::stod(f[4]);
        r.mean_coalition_size = std::stod(f[5]);
        r.mean_searches = std::stod(f[6]);
        r.deviations = std::stoi(f[7]);
        r.stable = f[8] == "1";
        if (timing) r.wall_ms = std::stod(f[9]);
        records.push_back(r);
    }
    return records;
}

void emit_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "M,scheme,method,trials,se_mean,se_stderr,coalition_size_mean,"
          "coalition_size_stderr,searches_mean,searches_stderr\n";
    for (const SummaryRow& r : rows) {
        os << r.antennas << ',' << to_string(r.scheme) << ',' << to_string(r.method)
           << ',' << r.trials << ',' << format_double(r.se_mean) << ','
           << format_double(r.se_stderr) << ',' << format_double(r.size_mean) << ','
           << format_double(r.size_stderr) << ',' << format_double(r.searches_mean)
           << ',' << format_double(r.searches_stderr) << "\n";
    }
}

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ls(s);
    while (std::getline(ls, tok, ',')) {
        const auto b = tok.find_first_not_of(" \t");
        const auto e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(tok.substr(b, e - b + 1));
    }
    return out;
}

} // namespace

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        auto trim = [](std::string s) {
            const auto x = s.find_first_not_of(" \t\r");
            if (x == std::string::npos) return std::string();
            const auto y = s.find_last_not_of(" \t\r");
            return s.substr(x, y - x + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "L") cfg.cells = std::stoull(val);
        else if (key == "density") cfg.density = std::stod(val);
        else if (key == "pilots_per_cell") cfg.pilots_per_cell = std::stoi(val);
        else if (key == "S") cfg.frame_symbols = std::stoi(val);
        else if (key == "snr_db") cfg.snr_db = std::stod(val);
        else if (key == "alpha") cfg.alpha = std::stod(val);
        else if (key == "M_sweep") {
            cfg.m_sweep.clear();
            for (const std::string& tok : split_list(val))
                cfg.m_sweep.push_back(std::stoi(tok));
        } else if (key == "schemes") {
            cfg.schemes.clear();
            for (const std::string& tok : split_list(val)) {
                const auto s = scheme_from_string(tok);
                if (!s) throw std::runtime_error("config: unknown scheme " + tok);
                cfg.schemes.push_back(*s);
            }
        } else if (key == "budgets") cfg.budget = std::stoi(val);
        else if (key == "trials") cfg.trials = std::stoull(val);
        else if (key == "mu_samples") cfg.mu_samples = std::stoull(val);
        else if (key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "objective") {
            const auto o = objective_from_string(val);
            if (!o) throw std::runtime_error("config: unknown objective " + val);
            cfg.objective = *o;
        } else if (key == "methods") {
            cfg.methods.clear();
            for (const std::string& tok : split_list(val)) {
                const auto m = method_from_string(tok);
                if (!m) throw std::runtime_error("config: unknown method " + tok);
                cfg.methods.push_back(*m);
            }
        } else {
            throw std::runtime_error("config: unknown key '" + key + "'");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    return parse_config(is);
}

void write_config(std::ostream& os, const ExperimentConfig& cfg) {
    os << "L = " << cfg.cells << "\n";
    os << "density = " << format_double(cfg.density) << "\n";
    os << "pilots_per_cell = " << cfg.pilots_per_cell << "\n";
    os << "S = " << cfg.frame_symbols << "\n";
    os << "snr_db = " << format_double(cfg.snr_db) << "\n";
    os << "alpha = " << format_double(cfg.alpha) << "\n";
    os << "M_sweep = ";
    for (std::size_t i = 0; i < cfg.m_sweep.size(); ++i)
        os << (i ? "," : "") << cfg.m_sweep[i];
    os << "\n";
    os << "schemes = ";
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
        os << (i ? "," : "") << to_string(cfg.schemes[i]);
    os << "\n";
    os << "budgets = " << cfg.budget << "\n";
    os << "trials = " << cfg.trials << "\n";
    os << "mu_samples = " << cfg.mu_samples << "\n";
    os << "master_seed = " << cfg.master_seed << "\n";
    os << "objective = " << to_string(cfg.objective) << "\n";
    os << "methods = ";
    for (std::size_t i = 0; i < cfg.methods.size(); ++i)
        os << (i ? "," : "") << to_string(cfg.methods[i]);
    os << "\n";
}

} // namespace pilotshare
