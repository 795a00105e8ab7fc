#include "borninfeld/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "borninfeld/experiments.hpp"

namespace borninfeld::cli {

using eigensolver::QuantumNumbers;
using eigensolver::SolveOptions;
using potential::EffectiveChargeModel;

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value + 0.0);  // squash negative zero
    return buf;
}

std::string format_cell(const nlohmann::json& cell) {
    if (cell.is_number_float()) {
        return fmt(cell.get<double>());
    }
    if (cell.is_string()) {
        return cell.get<std::string>();
    }
    if (cell.is_boolean()) {
        return cell.get<bool>() ? "1" : "0";
    }
    return cell.dump();
}

std::string state_label(const QuantumNumbers& qn) {
    static const char* kOrbitals = "spdfgh";
    std::string label = std::to_string(qn.n);
    label += (qn.l < 6) ? kOrbitals[qn.l] : '?';
    return label;
}

SolveOptions solve_options(const RunConfig& config) {
    SolveOptions opts;
    opts.ode_rel_tol = config.ode_tol;
    opts.eig_rel_tol = config.eig_tol;
    return opts;
}

EffectiveChargeModel make_model(const RunConfig& config) {
    if (config.model == "coulomb") {
        return EffectiveChargeModel::coulomb();
    }
    if (config.model == "test-particle") {
        return EffectiveChargeModel::test_particle();
    }
    if (config.model == "pair") {
        if (config.table_tol == 1e-10) {
            return EffectiveChargeModel::born_infeld_pair();
        }
        return EffectiveChargeModel::born_infeld_pair(
            potential::build_potential_table(config.table_tol));
    }
    throw CLI::ValidationError("--model", "expected pair, test-particle or coulomb");
}

std::vector<double> delta_grid(const RunConfig& config) {
    std::vector<double> grid;
    if (config.include_zero) {
        grid.push_back(0.0);
    }
    const int n = std::max(config.delta_points, 1);
    for (int i = 0; i < n; ++i) {
        const double t = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
        grid.push_back(config.delta_min *
                       std::pow(config.delta_max / config.delta_min, t));
    }
    return grid;
}

std::string echo_common(const RunConfig& config) {
    std::ostringstream s;
    s << "alpha=" << fmt(config.alpha) << " model=" << config.model
      << " quad-tol=" << fmt(config.quad_tol) << " table-tol=" << fmt(config.table_tol)
      << " ode-tol=" << fmt(config.ode_tol) << " eig-tol=" << fmt(config.eig_tol)
      << " threads=" << config.threads;
    return s.str();
}

int write_dataset(const Dataset& dataset, const RunConfig& config) {
    if (config.output == "-") {
        if (config.format == OutputFormat::Csv) {
            emit_csv(dataset, std::cout);
        } else {
            emit_json(dataset, std::cout);
        }
        return 0;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open output file: " << config.output << "\n";
        return 1;
    }
    if (config.format == OutputFormat::Csv) {
        emit_csv(dataset, file);
    } else {
        emit_json(dataset, file);
    }
    if (!file.good()) {
        std::cerr << "error: write failed: " << config.output << "\n";
        return 1;
    }
    return 0;
}

int run_potential(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "potential";
    {
        std::ostringstream s;
        s << echo_common(config) << " u-min=" << fmt(config.u_min)
          << " u-max=" << fmt(config.u_max) << " u-points=" << config.u_points;
        ds.flags = s.str();
    }
    ds.columns = {"u", "W_quadrature", "W_series_near_or_far", "Z", "minus_phi_scaled"};
    const EffectiveChargeModel model = make_model(config);
    const double b0 = potential::series_coefficients().far[0];
    for (int i = 0; i < config.u_points; ++i) {
        const double t =
            (config.u_points == 1) ? 0.0 : static_cast<double>(i) / (config.u_points - 1);
        const double u = config.u_min + (config.u_max - config.u_min) * t;
        const double w = potential::w_quadrature(u, config.quad_tol);
        const double series = (u < potential::kSeriesBreak) ? potential::w_series_near(u)
                                                            : potential::w_series_far(u);
        ds.rows.push_back({u, w, series, potential::effective_charge(u, model), b0 - w});
    }
    return write_dataset(ds, config);
}

int run_eigen(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "eigen";
    {
        std::ostringstream s;
        s << echo_common(config) << " delta=" << fmt(config.delta) << " n=" << config.n
          << " l=" << config.l;
        ds.flags = s.str();
    }
    ds.columns = {"delta",   "n",         "l",        "e_scaled", "minus_e",
                  "nodes",   "rho_max",   "converged", "residual", "self_energy_shift"};
    if (config.physical) {
        ds.columns.push_back("epsilon_eV");
    }
    const EffectiveChargeModel model =
        (config.delta == 0.0) ? EffectiveChargeModel::coulomb() : make_model(config);
    bool ok = true;
    eigensolver::EigenResult res;
    try {
        res = eigensolver::solve_eigenvalue(config.delta, {config.n, config.l}, model,
                                            solve_options(config));
        ok = res.converged;
    } catch (const std::exception& e) {
        std::cerr << "eigen: " << e.what() << "\n";
        res.qn = {config.n, config.l};
        res.converged = false;
        ok = false;
    }
    std::vector<nlohmann::json> row{config.delta, res.qn.n,      res.qn.l,
                                    res.e_scaled, -res.e_scaled, res.nodes,
                                    res.rho_max,  res.converged, res.residual};
    // the separation-independent constant that cancels out of the reduced
    // problem; undefined in the Coulomb limit
    if (config.delta > 0.0) {
        row.push_back(potential::self_energy_shift({config.alpha, config.delta}));
    } else {
        row.push_back("");
    }
    if (config.physical) {
        row.push_back(res.e_scaled * config.alpha * config.alpha * kRestEnergyEv);
    }
    ds.rows.push_back(std::move(row));
    const int rc = write_dataset(ds, config);
    return rc != 0 ? rc : (ok ? 0 : 2);
}

int run_sweep(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "sweep";
    {
        std::ostringstream s;
        s << echo_common(config) << " delta-min=" << fmt(config.delta_min)
          << " delta-max=" << fmt(config.delta_max) << " delta-points=" << config.delta_points
          << " include-zero=" << (config.include_zero ? 1 : 0);
        ds.flags = s.str();
    }
    ds.columns = {"delta", "e0", "converged"};
    if (config.physical) {
        ds.columns.push_back("eps0_eV");
    }
    const auto points = experiments::sweep_ground_state(
        delta_grid(config), make_model(config), config.threads, solve_options(config));
    bool all_ok = true;
    for (const auto& p : points) {
        std::vector<nlohmann::json> row{p.delta, p.e0, p.converged};
        if (config.physical) {
            row.push_back(p.e0 * config.alpha * config.alpha * kRestEnergyEv);
        }
        ds.rows.push_back(std::move(row));
        all_ok = all_ok && p.converged;
    }
    const int rc = write_dataset(ds, config);
    return rc != 0 ? rc : (all_ok ? 0 : 2);
}

int run_crossings(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "crossings";
    ds.flags = echo_common(config);
    ds.columns = {"kind", "delta", "e0"};
    const auto report = experiments::find_coulomb_crossings(make_model(config));
    for (const double d : report.crossings) {
        ds.rows.push_back({"crossing", d, -0.5});
    }
    ds.rows.push_back({"extremum", report.extremum_delta, report.extremum_e0});
    ds.rows.push_back({"search_hi_sample", 3.0, report.e0_at_search_hi});
    if (!report.interior_crossing_found) {
        ds.comments.push_back("no interior crossing located in the search interval");
    }
    const int rc = write_dataset(ds, config);
    return rc != 0 ? rc : (report.interior_crossing_found ? 0 : 2);
}

int run_table(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "table";
    ds.flags = echo_common(config);
    ds.columns = {"delta", "state", "minus_e", "paper_value", "deviation", "oracle_value"};
    const auto report = experiments::reproduce_table(make_model(config), config.threads);
    bool all_ok = true;
    for (const auto& row : report.rows) {
        for (const auto& cell : row.cells) {
            ds.rows.push_back({row.delta, state_label(cell.qn), cell.minus_e,
                               cell.paper_value ? nlohmann::json(*cell.paper_value)
                                                : nlohmann::json(""),
                               cell.deviation ? nlohmann::json(*cell.deviation)
                                              : nlohmann::json(""),
                               cell.oracle_value ? nlohmann::json(*cell.oracle_value)
                                                 : nlohmann::json("")});
            all_ok = all_ok && cell.converged;
        }
    }
    for (const auto& rec : report.discrepancies) {
        std::ostringstream s;
        s << "discrepancy: delta=" << fmt(rec.delta) << " state=" << state_label(rec.qn)
          << " computed=" << fmt(rec.computed) << " paper=" << fmt(rec.paper_value)
          << " gap_to_paper=" << fmt(rec.gap_to_paper);
        if (rec.oracle_value) {
            s << " oracle=" << fmt(*rec.oracle_value)
              << " gap_to_oracle=" << fmt(*rec.gap_to_oracle);
        }
        ds.comments.push_back(s.str());
    }
    ds.comments.push_back("empirical reference: 1s=0.49973 2s=0.12493 2p=0.12493");
    const int rc = write_dataset(ds, config);
    return rc != 0 ? rc : (all_ok ? 0 : 2);
}

int run_born_beta(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "born-beta";
    ds.flags = echo_common(config);
    ds.columns = {"quantity", "value"};
    const double born = experiments::born_constant();
    ds.rows.push_back({"beta_B_over_alpha", born});
    ds.rows.push_back({"beta_B_compton", born * config.alpha});
    ds.rows.push_back({"delta_B", born * config.alpha * config.alpha});
    return write_dataset(ds, config);
}

int run_field_check(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "field-check";
    ds.flags = echo_common(config);
    ds.columns = {"quantity", "value"};
    const double integral = experiments::field_energy_check();
    const double closed = experiments::born_constant();
    ds.rows.push_back({"field_energy_integral", integral});
    ds.rows.push_back({"closed_form", closed});
    ds.rows.push_back({"difference", integral - closed});
    return write_dataset(ds, config);
}

int run_contrast(const RunConfig& config) {
    Dataset ds;
    ds.subcommand = "contrast";
    {
        std::ostringstream s;
        s << echo_common(config) << " delta-min=" << fmt(config.delta_min)
          << " delta-max=" << fmt(config.delta_max) << " delta-points=" << config.delta_points
          << " include-zero=" << (config.include_zero ? 1 : 0);
        ds.flags = s.str();
    }
    ds.columns = {"delta", "e0_pair", "converged_pair", "e0_test_particle", "converged_tp"};
    const auto result = experiments::test_particle_contrast(delta_grid(config), config.threads);
    bool all_ok = true;
    for (std::size_t i = 0; i < result.pair.size(); ++i) {
        ds.rows.push_back({result.pair[i].delta, result.pair[i].e0, result.pair[i].converged,
                           result.test_particle[i].e0, result.test_particle[i].converged});
        all_ok = all_ok && result.pair[i].converged && result.test_particle[i].converged;
    }
    const int rc = write_dataset(ds, config);
    return rc != 0 ? rc : (all_ok ? 0 : 2);
}

}  // namespace

void to_json(nlohmann::json& j, const RunConfig& config) {
    j = nlohmann::json{{"subcommand", config.subcommand},
                       {"alpha", config.alpha},
                       {"delta", config.delta},
                       {"delta_min", config.delta_min},
                       {"delta_max", config.delta_max},
                       {"delta_points", config.delta_points},
                       {"include_zero", config.include_zero},
                       {"n", config.n},
                       {"l", config.l},
                       {"model", config.model},
                       {"quad_tol", config.quad_tol},
                       {"table_tol", config.table_tol},
                       {"ode_tol", config.ode_tol},
                       {"eig_tol", config.eig_tol},
                       {"u_min", config.u_min},
                       {"u_max", config.u_max},
                       {"u_points", config.u_points},
                       {"output", config.output},
                       {"format", config.format == OutputFormat::Csv ? "csv" : "json"},
                       {"physical", config.physical},
                       {"threads", config.threads}};
}

void from_json(const nlohmann::json& j, RunConfig& config) {
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) {
            j.at(key).get_to(field);
        }
    };
    get("subcommand", config.subcommand);
    get("alpha", config.alpha);
    get("delta", config.delta);
    get("delta_min", config.delta_min);
    get("delta_max", config.delta_max);
    get("delta_points", config.delta_points);
    get("include_zero", config.include_zero);
    get("n", config.n);
    get("l", config.l);
    get("model", config.model);
    get("quad_tol", config.quad_tol);
    get("table_tol", config.table_tol);
    get("ode_tol", config.ode_tol);
    get("eig_tol", config.eig_tol);
    get("u_min", config.u_min);
    get("u_max", config.u_max);
    get("u_points", config.u_points);
    get("output", config.output);
    if (j.contains("format")) {
        config.format =
            (j.at("format").get<std::string>() == "json") ? OutputFormat::Json
                                                          : OutputFormat::Csv;
    }
    get("physical", config.physical);
    get("threads", config.threads);
}

void emit_csv(const Dataset& dataset, std::ostream& out) {
    out << "# " << kProgramName << " v" << kVersion << " " << dataset.subcommand;
    if (!dataset.flags.empty()) {
        out << " " << dataset.flags;
    }
    out << "\n";
    for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
        out << dataset.columns[c] << (c + 1 < dataset.columns.size() ? "," : "");
    }
    out << "\n";
    for (const auto& row : dataset.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << format_cell(row[c]) << (c + 1 < row.size() ? "," : "");
        }
        out << "\n";
    }
    for (const auto& comment : dataset.comments) {
        out << "# " << comment << "\n";
    }
}

void emit_json(const Dataset& dataset, std::ostream& out) {
    nlohmann::ordered_json j;
    j["program"] = kProgramName;
    j["version"] = kVersion;
    j["subcommand"] = dataset.subcommand;
    j["flags"] = dataset.flags;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& row : dataset.rows) {
        nlohmann::ordered_json rec;
        for (std::size_t c = 0; c < row.size() && c < dataset.columns.size(); ++c) {
            rec[dataset.columns[c]] = row[c];
        }
        records.push_back(std::move(rec));
    }
    j["records"] = std::move(records);
    if (!dataset.comments.empty()) {
        j["comments"] = dataset.comments;
    }
    out << j.dump(2) << "\n";
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.push_back(kProgramName);
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, const char* const* argv) {
    RunConfig config;
    bool config_file_set_format = false;

    // --config applies before flag parsing so explicit flags win.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream file(argv[i + 1]);
            if (!file) {
                std::cerr << "error: cannot read config file: " << argv[i + 1] << "\n";
                return 1;
            }
            try {
                nlohmann::json j;
                file >> j;
                from_json(j, config);
                config_file_set_format = j.contains("format");
            } catch (const std::exception& e) {
                std::cerr << "error: bad config file: " << e.what() << "\n";
                return 1;
            }
        }
    }

    CLI::App app{"Born-Infeld hydrogen spectrum toolkit"};
    app.require_subcommand(1);
    std::string config_path;

    std::string format = (config.format == OutputFormat::Json) ? "json" : "csv";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (defaults < config < flags)");
        sub->add_option("--alpha", config.alpha, "fine-structure constant");
        sub->add_option("--model", config.model, "pair | test-particle | coulomb");
        sub->add_option("--tol", config.quad_tol, "quadrature absolute tolerance");
        sub->add_option("--table-tol", config.table_tol, "potential table certification");
        sub->add_option("--ode-tol", config.ode_tol, "radial ODE relative tolerance");
        sub->add_option("--eig-tol", config.eig_tol, "eigenvalue relative tolerance");
        sub->add_option("--output,-o", config.output, "output path ('-' = stdout)");
        sub->add_option("--format", format, "csv | json");
        sub->add_flag("--physical", config.physical, "annotate energies in eV");
        sub->add_option("--threads", config.threads, "worker threads (0 = machine)");
    };
    auto add_grid = [&](CLI::App* sub) {
        sub->add_option("--delta-min", config.delta_min, "grid lower edge");
        sub->add_option("--delta-max", config.delta_max, "grid upper edge");
        sub->add_option("--delta-points", config.delta_points, "log-spaced point count");
        sub->add_flag("--include-zero,!--no-include-zero", config.include_zero,
                      "prepend the Coulomb point delta=0");
    };

    CLI::App* potential_cmd =
        app.add_subcommand("potential", "pair potential W(u), series, effective charge");
    add_common(potential_cmd);
    potential_cmd->add_option("--u-min", config.u_min);
    potential_cmd->add_option("--u-max", config.u_max);
    potential_cmd->add_option("--u-points", config.u_points);

    CLI::App* eigen_cmd = app.add_subcommand("eigen", "single bound-state eigenvalue");
    add_common(eigen_cmd);
    eigen_cmd->add_option("--delta", config.delta, "alpha * beta");
    eigen_cmd->add_option("--n", config.n, "principal quantum number");
    eigen_cmd->add_option("--l", config.l, "orbital quantum number");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "ground-state sweep over delta");
    add_common(sweep_cmd);
    add_grid(sweep_cmd);

    CLI::App* crossings_cmd =
        app.add_subcommand("crossings", "Coulomb crossings and binding extremum");
    add_common(crossings_cmd);

    CLI::App* table_cmd = app.add_subcommand("table", "reference eigenvalue table");
    add_common(table_cmd);

    CLI::App* born_cmd = app.add_subcommand("born-beta", "Born's aether constant");
    add_common(born_cmd);

    CLI::App* field_cmd = app.add_subcommand("field-check", "field-energy identity check");
    add_common(field_cmd);

    CLI::App* contrast_cmd =
        app.add_subcommand("contrast", "pair vs test-particle ground state");
    add_common(contrast_cmd);
    add_grid(contrast_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (format == "json") {
        config.format = OutputFormat::Json;
    } else if (format == "csv") {
        config.format = OutputFormat::Csv;
    } else {
        std::cerr << "error: --format must be csv or json\n";
        return 1;
    }

    try {
        if (potential_cmd->parsed()) {
            config.subcommand = "potential";
            return run_potential(config);
        }
        if (eigen_cmd->parsed()) {
            config.subcommand = "eigen";
            // JSON is the natural single-record shape unless asked otherwise.
            if (eigen_cmd->count("--format") == 0 && !config_file_set_format) {
                config.format = OutputFormat::Json;
            }
            return run_eigen(config);
        }
        if (sweep_cmd->parsed()) {
            config.subcommand = "sweep";
            return run_sweep(config);
        }
        if (crossings_cmd->parsed()) {
            config.subcommand = "crossings";
            return run_crossings(config);
        }
        if (table_cmd->parsed()) {
            config.subcommand = "table";
            return run_table(config);
        }
        if (born_cmd->parsed()) {
            config.subcommand = "born-beta";
            return run_born_beta(config);
        }
        if (field_cmd->parsed()) {
            config.subcommand = "field-check";
            return run_field_check(config);
        }
        if (contrast_cmd->parsed()) {
            config.subcommand = "contrast";
            return run_contrast(config);
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace borninfeld::cli
