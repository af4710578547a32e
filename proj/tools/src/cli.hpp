#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringsphere/observables.hpp"
#include "ringsphere/oracle.hpp"
#include "ringsphere/spectrum.hpp"
#include "ringsphere/wavefunction.hpp"

namespace ringsphere::cli {

enum class Command {
    spectrum,
    potential,
    wavefunction,
    magnetization,
    current,
    sweep,
    validate,
};

enum class SweepParameter { b, flux, a };
enum class OutputFormat { csv, json };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::b;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;  // >= 2, endpoints inclusive
};

struct OutputSpec {
    std::string path;  // empty = stdout
    OutputFormat format = OutputFormat::csv;
};

struct RunConfig {
    Command command = Command::spectrum;
    ModelParams params;
    EnsembleSpec ensemble;
    std::optional<SweepSpec> sweep;
    Command sweep_inner = Command::magnetization;
    OutputSpec output;
    OracleGrid grid;
    EnumerationOptions enumeration;
    bool per_state = false;
    int jobs = 1;
    double tolerance = 1e-5;

    // potential / wavefunction sampling controls
    QuantumNumbers wf_qn{0, 0};
    Coordinate wf_coordinate = Coordinate::x;
    int samples = 401;
    std::optional<double> coord_min;
    std::optional<double> coord_max;
};

struct ParseOutcome {
    int exit_code = 0;
    bool should_run = false;  // false for --help or a usage error
    RunConfig config;
};

// Parses argv (argv[0] = program name).  Usage problems print to err and
// yield exit_code 2; --help prints to out and yields 0.
ParseOutcome parse_args(int argc, const char* const* argv, std::ostream& out,
                        std::ostream& err);

// Executes the configured command, writing the artifact to the configured
// path (or `out` when no --output was given).  Returns the process exit
// code: 0 ok, 1 I/O failure, 2 invalid parameter combination, 3 empty
// spectrum / insufficient states, 4 validation verdict inconclusive with
// neither convention inside tolerance.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Shortest decimal that parses back to exactly the same double.
std::string format_double(double value);

// CSV per emit_csv contract: header n,m,energy,moment,current,rho_m,M,
// omega_m,flags; LF newlines; current empty with flag M0 when undefined.
// Values are converted to the table's unit system on the way out.
std::string emit_csv(const SpectrumTable& table);

nlohmann::ordered_json report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const nlohmann::json& j);

}  // namespace ringsphere::cli
