#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace stz {

enum ExitCode { kExitOk = 0, kExitConfig = 1, kExitNonConvergence = 2, kExitVerifyFailed = 3 };

struct RunConfig {
    std::string command;
    std::string kase = "quasi-elliptic";
    int k = 1;
    int p = 1;
    int q = 1;
    double nu = 2.0;
    int n_max = 8;
    std::string xi = "log:0.05:20:32"; // comma list or log:lo:hi:count
    std::string u_prime;               // comma list, empty means zeros
    std::string symbol;  // empty picks the command default
    std::string symbol2;               // commute suite; defaults to random:<seed+1>
    std::string suite = "all";
    double rel_tol = 1e-10;
    int m_start = 24;
    int m_max = 192;
    int torus = 64;
    int radial = 48;
    int interior = -1; // -1 means n_max / 2
    std::uint64_t seed = 1;
    std::string out;     // empty means standard output
    std::string format;  // json | csv | bin; empty picks the command default
    bool strict_paper = false;
    bool closed_form = true;
    int threads = 0;     // not part of the numerics; also read from STZ_THREADS
    int verbosity = 0;   // STZ_VERBOSE
};

// Throws ParameterError on an invalid configuration.
void validate(RunConfig& c);
nlohmann::ordered_json config_to_json(const RunConfig& c);

int cmd_gamma(const RunConfig& c, std::ostream& out, std::ostream& diag);
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& diag);
int cmd_matrix(const RunConfig& c, std::ostream& out, std::ostream& diag);

// Full command line, args[0] being the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& diag);

std::vector<double> parse_xi_grid(const std::string& spec);

} // namespace stz
