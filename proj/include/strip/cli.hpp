#pragma once

// Command-line front end. Subcommands:
//   modes, green, solve-linear, solve-nonlinear, oracle, verify, decay-fit.
// Settings come from `--key value` flags and an optional flat `key = value`
// file given with `--config`; flags override the file.
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "strip/modes.hpp"

namespace strip::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Initial data: a built-in function name or a two-column file of samples.
struct DataSpec {
    std::string name = "zero";
    double scale = 1.0;
    std::string file;  ///< overrides name when non-empty
};

struct SourceSpec {
    std::string kind = "zero";  ///< zero, linear, sine-gordon, exp-decaying, algebraic
    // linear: scale * profile(x) * tau(t), tau from time_law const | exp | algebraic
    std::string profile = "sin";
    double scale = 1.0;
    std::string time_law = "const";
    double rate = 1.0;
    // sine-gordon
    double bias = 0.0;
    // exp-decaying: e^{-mu t} amp_scale * amplitude(x) cos u
    std::string amplitude = "sin";
    double amp_scale = 1.0;
    double mu = 1.0;
    // algebraic: h sin(pi x / l) (k0 + t)^{-(1 + alpha)}
    double h = 1.0;
    double k0 = 1.0;
    double alpha = 0.5;
};

struct RunConfig {
    std::string command;
    Params params{1.0, 1.0, 1.0, 3.141592653589793};
    DataSpec g0, g1;
    SourceSpec source;
    double horizon = 1.0;

    // spectral linear solver and output grid
    std::size_t n_modes = 64;
    double quad_tol = 1e-9;
    double quad_max_step = 0.01;
    std::size_t nx = 21;
    std::size_t nt = 11;
    bool with_dt = false;

    // Picard
    double picard_tol = 1e-8;
    int max_iter = 50;
    std::size_t colloc_nx = 65;
    double colloc_dt = 0.01;
    int max_depth = 16;
    std::size_t out_every = 1;

    // oracle
    std::size_t oracle_nx = 63;
    double oracle_dt = 0.01;
    double theta = 0.5;
    std::size_t store_every = 1;

    // verify: a negative tolerance means twice the estimated oracle error
    double tolerance = -1.0;

    // modes
    std::size_t table_modes = 10;
    double k = kDefaultK;

    // green
    std::vector<double> times{0.5, 1.0, 2.0};
    double xi = 1.0;
    double series_tol = 1e-5;

    // decay-fit: a window end <= start selects the default window
    std::string input;
    double window_start = 0.0;
    double window_end = 0.0;
    double algebraic_alpha = 0.0;  ///< > 0 adds the t^alpha boundedness check

    std::string output = "-";

    /// Throws UsageError for unknown data names, non-positive tolerances and
    /// inconsistent grid settings.
    void validate() const;
};

/// Parses a flat `key = value` file; '#' starts a comment. Throws UsageError on malformed lines.
std::map<std::string, std::string> parse_config(std::istream& in);

/// Keys accepted by a subcommand, sorted. Throws UsageError for an unknown subcommand.
std::vector<std::string> valid_keys(const std::string& command);

/// args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace strip::cli
