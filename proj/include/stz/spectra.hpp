#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stz/bergman.hpp"
#include "stz/quadrature.hpp"
#include "stz/symbols.hpp"

namespace stz {

struct SpectraOptions {
    AdaptivePolicy policy;
    // Use the Beta/Gamma/Gaussian-moment closed forms when every needed
    // coefficient carries an ExpPoly tag that admits one.
    bool closed_form = true;
    // Quasi-nilpotent only: weight the r-integral by r^p instead of r^n.
    // Breaks the normalization.
    bool strict_paper = false;
    // Cap on tensor-rule size; m per axis is limited so that m^dim stays below it.
    std::size_t max_nodes = 2'000'000;
};

struct SpectralValue {
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
    bool closed_form = false;
};

// All gamma_* functions throw ConvergenceError when the adaptive rule does
// not settle; build_table records those entries instead.

SpectralValue gamma_quasi_elliptic(const SuperSymbol& F, double nu, const MultiIndex& n, Subset M,
                                   const SpectraOptions& opt = {});

// n has p-1 entries.
SpectralValue gamma_quasi_parabolic(const SuperSymbol& F, double nu, const MultiIndex& n, double xi, Subset M,
                                    const SpectraOptions& opt = {});

// u_prime has p-1 entries.
SpectralValue gamma_nilpotent(const SuperSymbol& F, double nu, const std::vector<double>& u_prime, double xi,
                              Subset M, const SpectraOptions& opt = {});

// n has k entries, u_prime has p-k-1 entries.
SpectralValue gamma_quasi_nilpotent(const SuperSymbol& F, double nu, const MultiIndex& n,
                                    const std::vector<double>& u_prime, double xi, Subset M,
                                    const SpectraOptions& opt = {});

// s has p-1 entries with |s| < 1, theta in (0, pi).
cd beta_qh(const MultiIndex& n, double nu, const std::vector<double>& s, double xi, double theta);
// |beta_qh|^2 computed without forming the complex powers.
double beta_qh_abs2(const MultiIndex& n, double nu, const std::vector<double>& s, double xi, double theta);

// p is n.size() + 1.
SpectralValue alpha_qh(const MultiIndex& n, double nu, double xi, const SpectraOptions& opt = {});

SpectralValue gamma_quasi_hyperbolic(const SuperSymbol& F, double nu, const MultiIndex& n, double xi, Subset M,
                                     const SpectraOptions& opt = {});

std::vector<double> default_xi_grid();
std::vector<double> log_grid(double lo, double hi, int count);

struct SpectralEntry {
    Subset M = 0;
    MultiIndex n;
    std::optional<double> xi;
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
    std::string error; // non-empty when the entry failed
};

struct SpectralTable {
    MASGCase kase;
    int p = 1;
    int q = 0;
    double nu = 0.0;
    int n_max = 0;
    std::vector<double> xi_grid;
    std::vector<double> u_prime;
    std::vector<SpectralEntry> entries;

    bool all_converged() const;
    const SpectralEntry* find(Subset M, const MultiIndex& n, std::optional<double> xi = std::nullopt) const;
};

struct TableRequest {
    double nu = 2.0;
    int n_max = 4;
    std::vector<double> xi_grid = default_xi_grid();
    std::vector<double> u_prime; // empty means zeros
    SpectraOptions options;
};

// Entries ordered by M (size, then lexicographic), then n (degree, then
// lexicographic), then xi.
SpectralTable build_table(const SuperSymbol& F, const TableRequest& req);

nlohmann::ordered_json table_to_json(const SpectralTable& t);
std::string table_to_csv(const SpectralTable& t);

// "{1,3}"
std::string subset_label(Subset M);

} // namespace stz
