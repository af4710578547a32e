#include "cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "ringsphere/model.hpp"
#include "ringsphere/units.hpp"

namespace ringsphere::cli {

namespace {

struct CommandResult {
    std::string payload;
    int code = 0;
    std::string message;  // printed to the error stream when non-empty
};

double out_units(double v, QuantityKind kind, const UnitScale& units) {
    return convert_units(v, kind, ConvertDirection::to_external, units);
}

std::string csv_join(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto emit_line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    emit_line(header);
    for (const auto& row : rows) emit_line(row);
    return out;
}

std::string format_int(long long v) {
    char buf[24];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> record_row(const StateRecord& r, const UnitScale& u) {
    std::vector<std::string> row;
    row.reserve(9);
    row.push_back(format_int(r.qn.n));
    row.push_back(format_int(r.qn.m));
    row.push_back(format_double(out_units(r.energy, QuantityKind::energy, u)));
    row.push_back(format_double(out_units(r.moment, QuantityKind::moment, u)));
    row.push_back(r.current ? format_double(out_units(*r.current, QuantityKind::current, u))
                            : std::string());
    row.push_back(format_double(out_units(r.rho_m, QuantityKind::length, u)));
    row.push_back(format_double(r.M));
    row.push_back(format_double(out_units(r.omega_m, QuantityKind::energy, u)));
    row.push_back(r.flags);
    return row;
}

const std::vector<std::string> kRecordHeader = {
    "n", "m", "energy", "moment", "current", "rho_m", "M", "omega_m", "flags"};

nlohmann::ordered_json params_to_json(const ModelParams& p) {
    nlohmann::ordered_json j;
    if (p.geometry.flat_limit)
        j["a"] = nullptr;
    else
        j["a"] = p.geometry.a;
    j["flat_limit"] = p.geometry.flat_limit;
    j["lambda1"] = p.confinement.lambda1;
    j["lambda2"] = p.confinement.lambda2;
    j["b"] = p.fields.b;
    j["flux_ratio"] = p.fields.nu;
    j["convention"] = p.convention == Convention::half ? "half" : "full";
    j["units"] = p.units.preset_name;
    return j;
}

ModelParams params_from_json(const nlohmann::json& j) {
    ModelParams p;
    p.geometry.flat_limit = j.at("flat_limit").get<bool>();
    if (p.geometry.flat_limit)
        p.geometry.a = std::numeric_limits<double>::infinity();
    else
        p.geometry.a = j.at("a").get<double>();
    p.confinement.lambda1 = j.at("lambda1").get<double>();
    p.confinement.lambda2 = j.at("lambda2").get<double>();
    p.fields.b = j.at("b").get<double>();
    p.fields.nu = j.at("flux_ratio").get<double>();
    const auto conv = j.at("convention").get<std::string>();
    if (conv == "half")
        p.convention = Convention::half;
    else if (conv == "full")
        p.convention = Convention::full;
    else
        throw std::invalid_argument("unknown convention: " + conv);
    const auto units = j.at("units").get<std::string>();
    if (units == "natural")
        p.units = UnitScale::natural();
    else if (units == "gaas")
        p.units = UnitScale::gaas();
    else
        throw std::invalid_argument("unknown units preset: " + units);
    return p;
}

nlohmann::ordered_json grid_to_json(const OracleGrid& g) {
    nlohmann::ordered_json j;
    j["points"] = g.points;
    if (!g.boundary_at_1)
        j["boundary_at_1"] = "auto";
    else
        j["boundary_at_1"] =
            *g.boundary_at_1 == BoundaryAt1::dirichlet ? "dirichlet" : "neumann";
    j["richardson_levels"] = g.richardson_levels;
    return j;
}

OracleGrid grid_from_json(const nlohmann::json& j) {
    OracleGrid g;
    g.points = j.at("points").get<int>();
    const auto bc = j.at("boundary_at_1").get<std::string>();
    if (bc == "dirichlet")
        g.boundary_at_1 = BoundaryAt1::dirichlet;
    else if (bc == "neumann")
        g.boundary_at_1 = BoundaryAt1::neumann;
    else if (bc != "auto")
        throw std::invalid_argument("unknown boundary_at_1: " + bc);
    g.richardson_levels = j.at("richardson_levels").get<int>();
    return g;
}

nlohmann::ordered_json record_to_json(const StateRecord& r, const UnitScale& u) {
    nlohmann::ordered_json j;
    j["n"] = r.qn.n;
    j["m"] = r.qn.m;
    j["energy"] = out_units(r.energy, QuantityKind::energy, u);
    j["moment"] = out_units(r.moment, QuantityKind::moment, u);
    if (r.current)
        j["current"] = out_units(*r.current, QuantityKind::current, u);
    else
        j["current"] = nullptr;
    j["rho_m"] = out_units(r.rho_m, QuantityKind::length, u);
    j["M"] = r.M;
    j["omega_m"] = out_units(r.omega_m, QuantityKind::energy, u);
    j["flags"] = r.flags;
    return j;
}

std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

// ---- command runners -----------------------------------------------------

CommandResult run_spectrum(const RunConfig& cfg) {
    const SpectrumTable table = enumerate_states(cfg.params, cfg.enumeration);
    CommandResult res;
    if (table.states.empty()) {
        res.code = 3;
        res.message = "no states: the spectrum is empty under the current window and bound policy";
    }
    if (cfg.output.format == OutputFormat::csv) {
        res.payload = emit_csv(table);
    } else {
        nlohmann::ordered_json j;
        j["params"] = params_to_json(table.params);
        auto states = nlohmann::ordered_json::array();
        for (const auto& s : table.states)
            states.push_back(record_to_json(s, table.params.units));
        j["states"] = states;
        res.payload = dump(j);
    }
    return res;
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return g;
}

CommandResult run_potential(const RunConfig& cfg) {
    const auto scales =
        derive_confinement(cfg.params.confinement, cfg.params.geometry);
    double lo, hi;
    if (cfg.coord_min) {
        lo = *cfg.coord_min;
        hi = *cfg.coord_max;
    } else if (scales.rho0 > 0.0) {
        lo = scales.rho0 / 8.0;
        hi = 3.0 * scales.rho0;
    } else if (scales.omega0 > 0.0) {
        const double l0 = 1.0 / std::sqrt(scales.omega0);
        lo = l0 / 100.0;
        hi = 4.0 * l0;
    } else {
        const double l0 = cfg.params.geometry.flat_limit ? 1.0 : cfg.params.geometry.a;
        lo = l0 / 100.0;
        hi = 4.0 * l0;
    }
    const auto grid = linspace(lo, hi, cfg.samples);
    const auto v = sample_potential(cfg.params, grid);

    const UnitScale& u = cfg.params.units;
    CommandResult res;
    if (cfg.output.format == OutputFormat::csv) {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows.push_back({format_double(out_units(grid[i], QuantityKind::length, u)),
                            format_double(out_units(v[i], QuantityKind::energy, u))});
        res.payload = csv_join({"rho", "v"}, rows);
    } else {
        nlohmann::ordered_json j;
        j["params"] = params_to_json(cfg.params);
        j["columns"] = {"rho", "v"};
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows.push_back({out_units(grid[i], QuantityKind::length, u),
                            out_units(v[i], QuantityKind::energy, u)});
        j["rows"] = rows;
        res.payload = dump(j);
    }
    return res;
}

const char* coordinate_name(Coordinate c) {
    switch (c) {
        case Coordinate::rho: return "rho";
        case Coordinate::theta: return "theta";
        default: return "x";
    }
}

CommandResult run_wavefunction(const RunConfig& cfg) {
    std::vector<double> grid;
    const double pad = 1.0 / (cfg.samples + 1);  // x and theta are open intervals
    if (cfg.coord_min) {
        grid = linspace(*cfg.coord_min, *cfg.coord_max, cfg.samples);
    } else if (cfg.wf_coordinate == Coordinate::x) {
        grid = linspace(pad, 1.0 - pad, cfg.samples);
    } else if (cfg.wf_coordinate == Coordinate::theta) {
        grid = linspace(pad * std::acos(-1.0), (1.0 - pad) * std::acos(-1.0),
                        cfg.samples);
    } else {
        const auto d = derive_state_quantities(cfg.params, cfg.wf_qn);
        const double base = d.rho_m > 0.0 ? d.rho_m : std::sqrt(2.0 / d.omega_m);
        grid = linspace(base / 50.0, 5.0 * base, cfg.samples);
    }
    const auto samples =
        density_samples(cfg.params, cfg.wf_qn, cfg.wf_coordinate, grid);

    const UnitScale& u = cfg.params.units;
    const bool is_rho = cfg.wf_coordinate == Coordinate::rho;
    // The density is per unit of the plotted coordinate, so only the rho
    // version changes under a unit preset.
    const double coord_scale = is_rho ? u.length_unit : 1.0;
    const double dens_scale = is_rho ? 1.0 / u.length_unit : 1.0;

    CommandResult res;
    if (cfg.output.format == OutputFormat::csv) {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(samples.size());
        for (const auto& [c, p] : samples)
            rows.push_back({format_double(c * coord_scale), format_double(p * dens_scale)});
        res.payload = csv_join({coordinate_name(cfg.wf_coordinate), "density"}, rows);
    } else {
        nlohmann::ordered_json j;
        j["params"] = params_to_json(cfg.params);
        j["qn"] = {{"n", cfg.wf_qn.n}, {"m", cfg.wf_qn.m}};
        j["coordinate"] = coordinate_name(cfg.wf_coordinate);
        auto rows = nlohmann::ordered_json::array();
        for (const auto& [c, p] : samples)
            rows.push_back({c * coord_scale, p * dens_scale});
        j["rows"] = rows;
        res.payload = dump(j);
    }
    return res;
}

std::string ensemble_flags(const EnsembleResult& ens, bool current_focus) {
    std::string flags;
    auto add = [&flags](const char* f) {
        if (!flags.empty()) flags += ';';
        flags += f;
    };
    if (current_focus && ens.has_undefined_current) add("M0");
    if (ens.degenerate_fill) add("degenerate");
    return flags;
}

std::vector<std::string> totals_row(const EnsembleResult& ens,
                                    const EnsembleSpec& spec, bool current_focus,
                                    const UnitScale& u) {
    std::vector<std::string> row;
    row.push_back(format_int(spec.electrons));
    row.push_back(format_double(out_units(spec.temperature, QuantityKind::energy, u)));
    if (current_focus) {
        row.push_back(ens.has_undefined_current
                          ? std::string()
                          : format_double(out_units(ens.total_current,
                                                    QuantityKind::current, u)));
    } else {
        row.push_back(
            format_double(out_units(ens.total_moment, QuantityKind::moment, u)));
    }
    row.push_back(std::isnan(ens.chemical_potential)
                      ? std::string()
                      : format_double(out_units(ens.chemical_potential,
                                                QuantityKind::energy, u)));
    row.push_back(ensemble_flags(ens, current_focus));
    return row;
}

std::vector<std::string> totals_header(bool current_focus) {
    return {"electrons", "temperature",
            current_focus ? "total_current" : "total_moment", "chemical_potential",
            "flags"};
}

nlohmann::ordered_json totals_to_json(const EnsembleResult& ens, const UnitScale& u) {
    nlohmann::ordered_json j;
    j["total_moment"] = out_units(ens.total_moment, QuantityKind::moment, u);
    if (ens.has_undefined_current)
        j["total_current"] = nullptr;
    else
        j["total_current"] = out_units(ens.total_current, QuantityKind::current, u);
    if (std::isnan(ens.chemical_potential))
        j["chemical_potential"] = nullptr;
    else
        j["chemical_potential"] =
            out_units(ens.chemical_potential, QuantityKind::energy, u);
    j["has_undefined_current"] = ens.has_undefined_current;
    j["degenerate_fill"] = ens.degenerate_fill;
    return j;
}

CommandResult run_ensemble(const RunConfig& cfg, bool current_focus) {
    const EnsembleResult ens =
        total_magnetization(cfg.params, cfg.ensemble, cfg.enumeration);
    const UnitScale& u = cfg.params.units;

    CommandResult res;
    if (cfg.output.format == OutputFormat::csv) {
        if (cfg.per_state) {
            auto header = kRecordHeader;
            header.push_back("occupation");
            std::vector<std::vector<std::string>> rows;
            rows.reserve(ens.occupation.size());
            for (const auto& occ : ens.occupation) {
                auto row = record_row(occ.state, u);
                row.push_back(format_double(occ.weight));
                rows.push_back(std::move(row));
            }
            res.payload = csv_join(header, rows);
        } else {
            res.payload = csv_join(totals_header(current_focus),
                                   {totals_row(ens, cfg.ensemble, current_focus, u)});
        }
    } else {
        nlohmann::ordered_json j;
        j["params"] = params_to_json(cfg.params);
        j["ensemble"] = {{"electrons", cfg.ensemble.electrons},
                         {"temperature", out_units(cfg.ensemble.temperature,
                                                   QuantityKind::energy, u)}};
        j["totals"] = totals_to_json(ens, u);
        if (cfg.per_state) {
            auto rows = nlohmann::ordered_json::array();
            for (const auto& occ : ens.occupation) {
                auto row = record_to_json(occ.state, u);
                row["occupation"] = occ.weight;
                rows.push_back(row);
            }
            j["per_state"] = rows;
        }
        res.payload = dump(j);
    }
    return res;
}

const char* sweep_param_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::b: return "b";
        case SweepParameter::flux: return "flux";
        default: return "a";
    }
}

CommandResult run_sweep(const RunConfig& cfg) {
    const SweepSpec& sw = *cfg.sweep;
    const auto values = linspace(sw.from, sw.to, sw.steps);
    std::vector<EnsembleResult> results(values.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            try {
                ModelParams p = cfg.params;
                switch (sw.parameter) {
                    case SweepParameter::b: p.fields.b = values[i]; break;
                    case SweepParameter::flux: p.fields.nu = values[i]; break;
                    case SweepParameter::a: p.geometry.a = values[i]; break;
                }
                results[i] = total_magnetization(p, cfg.ensemble, cfg.enumeration);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(values.size());
                return;
            }
        }
    };
    const int jobs = std::min<int>(cfg.jobs, static_cast<int>(values.size()));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    const UnitScale& u = cfg.params.units;
    const QuantityKind param_kind = sw.parameter == SweepParameter::b
                                        ? QuantityKind::field
                                        : QuantityKind::length;
    auto param_out = [&](double v) {
        return sw.parameter == SweepParameter::flux ? v
                                                    : out_units(v, param_kind, u);
    };
    const bool current_focus = cfg.sweep_inner == Command::current;

    CommandResult res;
    if (cfg.output.format == OutputFormat::csv) {
        auto header = totals_header(current_focus);
        header.insert(header.begin(), sweep_param_name(sw.parameter));
        std::vector<std::vector<std::string>> rows;
        rows.reserve(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            auto row = totals_row(results[i], cfg.ensemble, current_focus, u);
            row.insert(row.begin(), format_double(param_out(values[i])));
            rows.push_back(std::move(row));
        }
        res.payload = csv_join(header, rows);
    } else {
        nlohmann::ordered_json j;
        j["params"] = params_to_json(cfg.params);
        j["sweep"] = {{"parameter", sweep_param_name(sw.parameter)},
                      {"from", sw.from},
                      {"to", sw.to},
                      {"steps", sw.steps}};
        j["ensemble"] = {{"electrons", cfg.ensemble.electrons},
                         {"temperature", out_units(cfg.ensemble.temperature,
                                                   QuantityKind::energy, u)}};
        auto rows = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < values.size(); ++i) {
            nlohmann::ordered_json row;
            row[sweep_param_name(sw.parameter)] = param_out(values[i]);
            auto totals = totals_to_json(results[i], u);
            for (auto& [k, v] : totals.items()) row[k] = v;
            rows.push_back(row);
        }
        j["rows"] = rows;
        res.payload = dump(j);
    }
    return res;
}

CommandResult run_validate(const RunConfig& cfg) {
    const SpectrumTable table = enumerate_states(cfg.params, cfg.enumeration);
    CommandResult res;
    if (table.states.empty()) {
        res.code = 3;
        res.message = "no states to validate under the current window and bound policy";
        return res;
    }
    std::vector<QuantumNumbers> states;
    states.reserve(table.states.size());
    for (const auto& s : table.states) states.push_back(s.qn);

    const ValidationReport report =
        validate(cfg.params, states, cfg.tolerance, cfg.grid);
    res.payload = dump(report_to_json(report));

    const bool half_ok = report.summary.max_rel_err_half < report.summary.tolerance;
    const bool full_ok = report.summary.max_rel_err_full < report.summary.tolerance;
    if (!half_ok && !full_ok) {
        res.code = 4;
        res.message = "validation: neither convention is inside tolerance";
    }
    return res;
}

bool write_output(const std::string& payload, const std::string& path,
                  std::ostream& out) {
    if (path.empty() || path == "-") {
        out << payload;
        out.flush();
        return !out.fail();
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << payload;
    f.flush();
    return f.good();
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string emit_csv(const SpectrumTable& table) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(table.states.size());
    for (const auto& s : table.states)
        rows.push_back(record_row(s, table.params.units));
    return csv_join(kRecordHeader, rows);
}

nlohmann::ordered_json report_to_json(const ValidationReport& report) {
    const UnitScale& u = report.params.units;
    nlohmann::ordered_json j;
    j["params"] = params_to_json(report.params);
    j["grid"] = grid_to_json(report.grid);
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["qn"] = {{"n", r.qn.n}, {"m", r.qn.m}};
        row["E_closed_half"] = out_units(r.e_closed_half, QuantityKind::energy, u);
        row["E_closed_full"] = out_units(r.e_closed_full, QuantityKind::energy, u);
        row["E_oracle"] = out_units(r.e_oracle, QuantityKind::energy, u);
        row["rel_err_half"] = r.rel_err_half;
        row["rel_err_full"] = r.rel_err_full;
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["summary"] = {{"max_rel_err_half", report.summary.max_rel_err_half},
                    {"max_rel_err_full", report.summary.max_rel_err_full},
                    {"verdict", to_string(report.summary.verdict)},
                    {"tolerance", report.summary.tolerance}};
    return j;
}

ValidationReport report_from_json(const nlohmann::json& j) {
    ValidationReport rep;
    rep.params = params_from_json(j.at("params"));
    rep.grid = grid_from_json(j.at("grid"));
    const double inv_e = 1.0 / rep.params.units.energy_unit;
    for (const auto& row : j.at("rows")) {
        ValidationRow r;
        r.qn.n = row.at("qn").at("n").get<int>();
        r.qn.m = row.at("qn").at("m").get<int>();
        r.e_closed_half = row.at("E_closed_half").get<double>() * inv_e;
        r.e_closed_full = row.at("E_closed_full").get<double>() * inv_e;
        r.e_oracle = row.at("E_oracle").get<double>() * inv_e;
        r.rel_err_half = row.at("rel_err_half").get<double>();
        r.rel_err_full = row.at("rel_err_full").get<double>();
        rep.rows.push_back(r);
    }
    const auto& s = j.at("summary");
    rep.summary.max_rel_err_half = s.at("max_rel_err_half").get<double>();
    rep.summary.max_rel_err_full = s.at("max_rel_err_full").get<double>();
    rep.summary.tolerance = s.at("tolerance").get<double>();
    const auto verdict = s.at("verdict").get<std::string>();
    if (verdict == "half")
        rep.summary.verdict = Verdict::half;
    else if (verdict == "full")
        rep.summary.verdict = Verdict::full;
    else if (verdict == "inconclusive")
        rep.summary.verdict = Verdict::inconclusive;
    else
        throw std::invalid_argument("unknown verdict: " + verdict);
    return rep;
}

ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out,
                        std::ostream& err) {
    ParseOutcome outcome;
    RunConfig& cfg = outcome.config;

    CLI::App app{
        "Spectrum, wavefunctions, magnetization and persistent currents of a\n"
        "two-dimensional quantum ring on a sphere (ring confinement, AB flux,\n"
        "uniform field).  All inputs are in natural units (hbar = mu = e = c = 1);\n"
        "--units only rescales output columns.",
        "ringsphere"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Flat `key = value` file, `#` comments; command-line flags "
                   "override file values");

    double a = 1.0;
    app.add_option("--a", a, "Sphere radius; `inf` selects the flat limit")
        ->capture_default_str();
    app.add_option("--lambda1", cfg.params.confinement.lambda1,
                   "Quadratic confinement strength")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--lambda2", cfg.params.confinement.lambda2,
                   "Inverse-square confinement strength")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--b", cfg.params.fields.b, "Uniform magnetic field")
        ->capture_default_str();
    app.add_option("--flux-ratio", cfg.params.fields.nu,
                   "Aharonov-Bohm flux as a ratio of the flux quantum")
        ->capture_default_str();

    app.add_option("--m-min", cfg.enumeration.m_min, "Lowest angular quantum number");
    app.add_option("--m-max", cfg.enumeration.m_max, "Highest angular quantum number");
    app.add_option("--n-cap", cfg.enumeration.n_cap, "Extra per-channel cap on n")
        ->check(CLI::NonNegativeNumber);
    std::size_t max_states = 256;
    app.add_option("--max-states", max_states,
                   "Keep only this many lowest-energy states")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    app.add_option("--convention", cfg.params.convention,
                   "Field coupling convention in the energy formula")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Convention>{{"half", Convention::half},
                                              {"full", Convention::full}},
            CLI::ignore_case))
        ->default_str("half");
    app.add_option("--bound-policy", cfg.enumeration.policy,
                   "Which states count as bound")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, BoundPolicy>{{"paper", BoundPolicy::paper},
                                               {"relaxed", BoundPolicy::relaxed}},
            CLI::ignore_case))
        ->default_str("paper");
    std::string units = "natural";
    app.add_option("--units", units, "Output unit preset")
        ->check(CLI::IsMember({"natural", "gaas"}, CLI::ignore_case))
        ->capture_default_str();

    app.add_option("--electrons", cfg.ensemble.electrons, "Ensemble electron count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--temperature", cfg.ensemble.temperature,
                   "Ensemble temperature (k_B = 1)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    SweepSpec sweep;
    auto* opt_param =
        app.add_option("--param", sweep.parameter, "Swept parameter")
            ->transform(CLI::CheckedTransformer(
                std::map<std::string, SweepParameter>{{"b", SweepParameter::b},
                                                      {"flux", SweepParameter::flux},
                                                      {"a", SweepParameter::a}},
                CLI::ignore_case));
    auto* opt_from = app.add_option("--from", sweep.from, "Sweep start value");
    auto* opt_to = app.add_option("--to", sweep.to, "Sweep end value");
    auto* opt_steps = app.add_option("--steps", sweep.steps,
                                     "Number of sweep points (endpoints included)");

    app.add_option("--grid", cfg.grid.points,
                   "Oracle grid points (odd, >= 101)")
        ->capture_default_str();
    app.add_option("--richardson", cfg.grid.richardson_levels,
                   "Oracle extrapolation levels")
        ->check(CLI::Range(1, 3))
        ->capture_default_str();
    app.add_option("--tolerance", cfg.tolerance,
                   "Validation verdict tolerance (relative)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    app.add_option("--format", cfg.output.format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                {"json", OutputFormat::json}},
            CLI::ignore_case))
        ->default_str("csv");
    app.add_option("--output", cfg.output.path,
                   "Output file path (default: stdout)");
    app.add_flag("--per-state", cfg.per_state,
                 "Emit per-state occupation rows instead of ensemble totals");
    app.add_option("--jobs", cfg.jobs, "Concurrent sweep evaluations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    app.add_option("--n", cfg.wf_qn.n, "Radial quantum number (wavefunction)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--m", cfg.wf_qn.m, "Angular quantum number (wavefunction)")
        ->capture_default_str();
    app.add_option("--coordinate", cfg.wf_coordinate,
                   "Plot coordinate for wavefunction output")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Coordinate>{{"rho", Coordinate::rho},
                                              {"theta", Coordinate::theta},
                                              {"x", Coordinate::x}},
            CLI::ignore_case))
        ->default_str("x");
    app.add_option("--samples", cfg.samples, "Sample count for curve output")
        ->check(CLI::Range(2, 10000000))
        ->capture_default_str();
    app.add_option("--coord-min", cfg.coord_min, "Curve range start");
    app.add_option("--coord-max", cfg.coord_max, "Curve range end");

    struct Sub {
        Command command;
        const char* name;
        const char* blurb;
    };
    const Sub subs[] = {
        {Command::spectrum, "spectrum", "Enumerate bound states as a table"},
        {Command::potential, "potential", "Sample the confinement potential"},
        {Command::wavefunction, "wavefunction", "Sample a state's probability density"},
        {Command::magnetization, "magnetization", "Ensemble total magnetic moment"},
        {Command::current, "current", "Ensemble total persistent current"},
        {Command::sweep, "sweep", "Repeat magnetization/current over a parameter grid"},
        {Command::validate, "validate", "Closed form vs finite-difference oracle report"},
    };
    std::string sweep_inner = "magnetization";
    for (const auto& sub : subs) {
        auto* s = app.add_subcommand(sub.name, sub.blurb);
        s->fallthrough();
        if (sub.command == Command::sweep)
            s->add_option("observable", sweep_inner,
                          "What to evaluate at each point")
                ->check(CLI::IsMember({"magnetization", "current"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return outcome;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return outcome;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        outcome.exit_code = 2;
        return outcome;
    }

    auto usage = [&](const std::string& msg) {
        err << "error: " << msg << "\n";
        outcome.exit_code = 2;
        return outcome;
    };

    for (const auto& sub : subs)
        if (app.got_subcommand(sub.name)) cfg.command = sub.command;

    if (std::isinf(a) && a > 0.0) {
        cfg.params.geometry.flat_limit = true;
        cfg.params.geometry.a = a;
    } else if (std::isfinite(a) && a > 0.0) {
        cfg.params.geometry.a = a;
    } else {
        return usage("--a must be a positive radius or `inf` for the flat limit");
    }

    cfg.params.units = units == "gaas" ? UnitScale::gaas() : UnitScale::natural();
    cfg.enumeration.max_states = max_states;

    if (cfg.enumeration.m_min && cfg.enumeration.m_max &&
        *cfg.enumeration.m_min > *cfg.enumeration.m_max)
        return usage("--m-min exceeds --m-max");

    if (cfg.grid.points < 101 || cfg.grid.points % 2 == 0)
        return usage("--grid must be odd and at least 101");

    if (cfg.command == Command::sweep) {
        if (!opt_param->count() || !opt_from->count() || !opt_to->count() ||
            !opt_steps->count())
            return usage("sweep requires --param, --from, --to and --steps");
        if (sweep.steps < 2) return usage("--steps must be at least 2");
        if (!(sweep.from != sweep.to))
            return usage("--from and --to must differ");
        if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to))
            return usage("sweep endpoints must be finite");
        if (sweep.parameter == SweepParameter::a &&
            (sweep.from <= 0.0 || sweep.to <= 0.0))
            return usage("swept radius must stay positive");
        cfg.sweep = sweep;
        cfg.sweep_inner = sweep_inner == "current" ? Command::current
                                                   : Command::magnetization;
    }

    if (cfg.per_state && cfg.command != Command::magnetization &&
        cfg.command != Command::current)
        return usage("--per-state applies to the magnetization and current commands");

    if (cfg.coord_min.has_value() != cfg.coord_max.has_value())
        return usage("--coord-min and --coord-max must be given together");
    if (cfg.coord_min) {
        if (!(*cfg.coord_min < *cfg.coord_max))
            return usage("--coord-min must be below --coord-max");
        if (cfg.command == Command::wavefunction) {
            if (cfg.wf_coordinate == Coordinate::x &&
                (*cfg.coord_min <= 0.0 || *cfg.coord_max >= 1.0))
                return usage("x ranges over the open interval (0, 1)");
            if (cfg.wf_coordinate == Coordinate::theta &&
                (*cfg.coord_min <= 0.0 || *cfg.coord_max >= std::acos(-1.0)))
                return usage("theta ranges over the open interval (0, pi)");
            if (cfg.wf_coordinate == Coordinate::rho && *cfg.coord_min <= 0.0)
                return usage("rho samples must be positive");
        }
        if (cfg.command == Command::potential && *cfg.coord_min <= 0.0)
            return usage("rho samples must be positive");
    }

    outcome.should_run = true;
    return outcome;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    CommandResult res;
    try {
        switch (config.command) {
            case Command::spectrum: res = run_spectrum(config); break;
            case Command::potential: res = run_potential(config); break;
            case Command::wavefunction: res = run_wavefunction(config); break;
            case Command::magnetization: res = run_ensemble(config, false); break;
            case Command::current: res = run_ensemble(config, true); break;
            case Command::sweep: res = run_sweep(config); break;
            case Command::validate: res = run_validate(config); break;
        }
    } catch (const insufficient_states_error& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (!res.payload.empty() &&
        !write_output(res.payload, config.output.path, out)) {
        err << "error: cannot write output to " << config.output.path << "\n";
        return 1;
    }
    if (!res.message.empty()) err << res.message << "\n";
    return res.code;
}

}  // namespace ringsphere::cli
