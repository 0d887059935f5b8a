// pilotshare command-line front end.
//
// Subcommands:
//   sweep        full experiment from a config file, records + summary CSV
//   deploy       generate a deployment file
//   mu           estimate a propagation table for a deployment file
//   form         one coalition-formation run with a trace log
//   exhaustive   enumerate the optimal structure for one deployment
//   stable-check certify a structure file (exit 0 stable, 1 unstable)

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "pilotshare/harness.hpp"
#include "pilotshare/io.hpp"

using namespace pilotshare;

namespace {

struct ParamFlags {
    int antennas = 100;
    int pilots_per_cell = 10;
    int frame_symbols = 400;
    double snr_db = 5.0;
    std::string scheme = "mrc";

    void attach(CLI::App* cmd, bool with_antennas = true) {
        if (with_antennas)
            cmd->add_option("-M,--antennas", antennas, "BS antenna count");
        cmd->add_option("--pilots-per-cell", pilots_per_cell,
                        "unique pilots owned by each cell");
        cmd->add_option("--frame-symbols", frame_symbols, "symbols per frame S");
        cmd->add_option("--snr-db", snr_db, "uplink SNR rho/sigma^2 in dB");
        cmd->add_option("--scheme", scheme, "combining scheme: mrc|zfc")
            ->check(CLI::IsMember({"mrc", "zfc"}));
    }

    SystemParams params(std::size_t cells) const {
        SystemParams p;
        p.antennas = antennas;
        p.pilots = pilots_per_cell * static_cast<int>(cells);
        p.frame_symbols = frame_symbols;
        p.snr = std::pow(10.0, snr_db / 10.0);
        p.cells = cells;
        p.validate();
        return p;
    }

    Scheme scheme_enum() const { return *scheme_from_string(scheme); }
};

// Loads the table if given, otherwise estimates one; always cross-checks the
// provenance hash against the deployment actually in use.
PropagationTable table_for(const Deployment& dep, const std::string& mu_path,
                           std::size_t mu_samples, std::uint64_t mu_seed) {
    if (mu_path.empty()) return estimate_propagation(dep, mu_samples, mu_seed);
    PropagationTable table = load_propagation(mu_path);
    if (table.cells != dep.cells())
        throw std::runtime_error("propagation table is for a different cell count");
    if (table.source_hash != deployment_hash(dep))
        throw std::runtime_error(
            "propagation table was estimated for a different deployment "
            "(hash mismatch)");
    return table;
}

std::string default_summary_path(const std::string& records_path) {
    const auto dot = records_path.rfind('.');
    if (dot == std::string::npos) return records_path + ".summary.csv";
    return records_path.substr(0, dot) + ".summary" + records_path.substr(dot);
}

int run_sweep(const std::string& config_path, std::uint64_t seed, bool has_seed,
              const std::string& out_path, std::string summary_path,
              std::size_t workers, const std::string& methods_csv,
              const std::string& scheme, std::size_t trials, bool has_trials,
              bool timing) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    if (has_seed) cfg.master_seed = seed;
    if (has_trials) cfg.trials = trials;
    if (!scheme.empty()) cfg.schemes = {*scheme_from_string(scheme)};
    if (!methods_csv.empty()) {
        cfg.methods.clear();
        std::istringstream ms(methods_csv);
        std::string tok;
        while (std::getline(ms, tok, ',')) {
            const auto m = method_from_string(tok);
            if (!m) throw std::runtime_error("unknown method: " + tok);
            cfg.methods.push_back(*m);
        }
    }
    cfg.validate();
    if (summary_path.empty()) summary_path = default_summary_path(out_path);

    const auto records = run_experiment(cfg, workers);

    std::ofstream records_os(out_path);
    if (!records_os) throw std::runtime_error("cannot write " + out_path);
    emit_records_csv(records_os, records, timing);

    std::ofstream summary_os(summary_path);
    if (!summary_os) throw std::runtime_error("cannot write " + summary_path);
    emit_summary_csv(summary_os, aggregate(records));

    double total_ms = 0.0;
    for (const ResultRecord& r : records) total_ms += r.wall_ms;
    std::cerr << "sweep: " << records.size() << " records from " << cfg.trials
              << " trials -> " << out_path << ", " << summary_path << " ("
              << static_cast<long>(total_ms) << " ms of method time)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pilot-sharing coalition simulator for asymmetric massive "
                 "MIMO networks"};
    app.require_subcommand(1);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "run a configured experiment sweep");
    std::string config_path, out_path = "results.csv", summary_path;
    std::string methods_csv, sweep_scheme;
    std::uint64_t seed = 0;
    std::size_t workers = 1, trials = 0;
    bool timing = false;
    sweep->add_option("--config", config_path, "key=value config file")
        ->check(CLI::ExistingFile);
    auto* seed_opt = sweep->add_option("--seed", seed, "master seed override");
    sweep->add_option("--out", out_path, "records CSV path");
    sweep->add_option("--summary", summary_path,
                      "summary CSV path (default: derived from --out)");
    sweep->add_option("--workers", workers, "concurrent trial workers");
    sweep->add_option("--methods", methods_csv,
                      "comma list: formation,singletons,grand,exhaustive");
    sweep->add_option("--scheme", sweep_scheme, "restrict to one scheme")
        ->check(CLI::IsMember({"mrc", "zfc"}));
    auto* trials_opt = sweep->add_option("--trials", trials, "trial count override");
    sweep->add_flag("--timing", timing, "append the wall_ms column (not byte-stable)");

    // deploy
    auto* deploy = app.add_subcommand("deploy", "generate a random deployment file");
    std::size_t dep_cells = 7;
    double density = 25.0, dep_alpha = 3.0;
    std::uint64_t dep_seed = 1;
    std::string dep_out = "deployment.txt";
    deploy->add_option("-L,--cells", dep_cells, "number of BSs");
    deploy->add_option("--density", density, "BS per km^2");
    deploy->add_option("--alpha", dep_alpha, "pathloss exponent");
    deploy->add_option("--seed", dep_seed, "generator seed");
    deploy->add_option("--out", dep_out, "output path");

    // mu
    auto* mu = app.add_subcommand("mu", "estimate a propagation moment table");
    std::string mu_dep_path, mu_out = "mu.txt";
    std::size_t mu_samples = 10000;
    std::uint64_t mu_seed = 1;
    mu->add_option("--deployment", mu_dep_path, "deployment file")
        ->required()
        ->check(CLI::ExistingFile);
    mu->add_option("--samples", mu_samples, "UE samples per cell");
    mu->add_option("--seed", mu_seed, "estimation seed");
    mu->add_option("--out", mu_out, "output path");

    // form
    auto* form = app.add_subcommand("form", "run coalition formation once");
    std::string form_dep_path, form_mu_path, form_out, form_structure_out;
    std::uint64_t form_seed = 1, form_mu_seed = 1;
    std::size_t form_mu_samples = 10000;
    int budget = 100;
    ParamFlags form_params;
    form->add_option("--deployment", form_dep_path, "deployment file")
        ->required()
        ->check(CLI::ExistingFile);
    form->add_option("--mu", form_mu_path, "propagation table file (else estimated)")
        ->check(CLI::ExistingFile);
    form->add_option("--mu-samples", form_mu_samples, "samples when estimating");
    form->add_option("--mu-seed", form_mu_seed, "seed when estimating");
    form->add_option("--budget", budget, "searching budget q per BS");
    form->add_option("--seed", form_seed, "formation run seed");
    form->add_option("--out", form_out, "trace log path");
    form->add_option("--structure-out", form_structure_out,
                     "write the final structure file here");
    form_params.attach(form);

    // exhaustive
    auto* exh = app.add_subcommand("exhaustive",
                                   "enumerate the optimal coalition structure");
    std::string exh_dep_path, exh_mu_path, exh_out, exh_objective = "total-SE";
    std::uint64_t exh_mu_seed = 1;
    std::size_t exh_mu_samples = 10000;
    ParamFlags exh_params;
    exh->add_option("--deployment", exh_dep_path, "deployment file")
        ->required()
        ->check(CLI::ExistingFile);
    exh->add_option("--mu", exh_mu_path, "propagation table file (else estimated)")
        ->check(CLI::ExistingFile);
    exh->add_option("--mu-samples", exh_mu_samples, "samples when estimating");
    exh->add_option("--mu-seed", exh_mu_seed, "seed when estimating");
    exh->add_option("--objective", exh_objective, "total-SE | per-cell-mean");
    exh->add_option("--out", exh_out, "write the optimal structure file here");
    exh_params.attach(exh);

    // stable-check
    auto* stable = app.add_subcommand("stable-check",
                                      "certify individual stability of a structure");
    std::string st_dep_path, st_mu_path, st_structure;
    std::uint64_t st_mu_seed = 1;
    std::size_t st_mu_samples = 10000;
    int st_budget = 100;
    ParamFlags st_params;
    stable->add_option("--structure", st_structure, "structure file")
        ->required()
        ->check(CLI::ExistingFile);
    stable->add_option("--deployment", st_dep_path, "deployment file")
        ->required()
        ->check(CLI::ExistingFile);
    stable->add_option("--mu", st_mu_path, "propagation table file (else estimated)")
        ->check(CLI::ExistingFile);
    stable->add_option("--mu-samples", st_mu_samples, "samples when estimating");
    stable->add_option("--mu-seed", st_mu_seed, "seed when estimating");
    stable->add_option("--budget", st_budget, "searching budget q per BS");
    st_params.attach(stable);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            return run_sweep(config_path, seed, !seed_opt->empty(), out_path,
                             summary_path, workers, methods_csv, sweep_scheme,
                             trials, !trials_opt->empty(), timing);
        }
        if (deploy->parsed()) {
            const Deployment dep =
                generate_deployment(dep_cells, density, dep_seed, dep_alpha);
            save_deployment(dep_out, dep);
            std::cerr << "deploy: " << dep_cells << " BSs, side "
                      << format_double(dep.side) << " km -> " << dep_out << "\n";
            return 0;
        }
        if (mu->parsed()) {
            const Deployment dep = load_deployment(mu_dep_path);
            const PropagationTable table =
                estimate_propagation(dep, mu_samples, mu_seed);
            save_propagation(mu_out, table);
            std::cerr << "mu: " << table.cells << "x" << table.cells
                      << " moments from " << mu_samples << " samples/cell -> "
                      << mu_out << "\n";
            return 0;
        }
        if (form->parsed()) {
            const Deployment dep = load_deployment(form_dep_path);
            const PropagationTable table =
                table_for(dep, form_mu_path, form_mu_samples, form_mu_seed);
            const SystemParams p = form_params.params(dep.cells());
            const std::vector<int> budgets(dep.cells(), budget);
            const FormationTrace trace = run_formation(
                p, table, budgets, form_params.scheme_enum(), form_seed);
            if (!form_out.empty()) save_trace(form_out, trace);
            if (!form_structure_out.empty())
                save_structure(form_structure_out, trace.final_structure);

            std::ostringstream labels;
            write_structure(labels, trace.final_structure);
            const double mean_eta =
                std::accumulate(trace.eta.begin(), trace.eta.end(), 0.0) /
                static_cast<double>(dep.cells());
            std::cout << labels.str();
            std::cout << "deviations " << trace.deviations << "\n";
            std::cout << "mean_searches " << format_double(mean_eta) << "\n";
            std::cout << "stable " << (trace.stable ? 1 : 0) << "\n";
            std::cout << "mean_se "
                      << format_double(structure_objective(
                             trace.final_structure, p, table,
                             form_params.scheme_enum(), Objective::PerCellMean))
                      << "\n";
            return 0;
        }
        if (exh->parsed()) {
            const Deployment dep = load_deployment(exh_dep_path);
            const PropagationTable table =
                table_for(dep, exh_mu_path, exh_mu_samples, exh_mu_seed);
            const SystemParams p = exh_params.params(dep.cells());
            const auto objective = objective_from_string(exh_objective);
            if (!objective) throw std::runtime_error("unknown objective");
            const auto [best, value] = exhaustive_optimum(
                p, table, exh_params.scheme_enum(), *objective);
            if (!exh_out.empty()) save_structure(exh_out, best);
            std::ostringstream labels;
            write_structure(labels, best);
            std::cout << labels.str();
            std::cout << "objective " << format_double(value) << "\n";
            return 0;
        }
        if (stable->parsed()) {
            const Deployment dep = load_deployment(st_dep_path);
            const PropagationTable table =
                table_for(dep, st_mu_path, st_mu_samples, st_mu_seed);
            const SystemParams p = st_params.params(dep.cells());
            const CoalitionStructure c = load_structure(st_structure);
            if (c.cells() != dep.cells())
                throw std::runtime_error("structure/deployment cell mismatch");
            const std::vector<int> budgets(dep.cells(), st_budget);
            const std::vector<int> eta(dep.cells(), 0);
            const bool ok = is_individually_stable(c, p, table, budgets, eta,
                                                   st_params.scheme_enum());
            std::cout << "stable " << (ok ? 1 : 0) << "\n";
            return ok ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
