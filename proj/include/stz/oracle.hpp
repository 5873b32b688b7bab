#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "stz/bergman.hpp"
#include "stz/symbols.hpp"

namespace stz {

struct BasisIndex {
    Subset M = 0;
    MultiIndex n;

    bool operator==(const BasisIndex& o) const { return M == o.M && n == o.n; }
};

// (|M|, M lexicographic, |n|, n lexicographic)
bool operator<(const BasisIndex& a, const BasisIndex& b);

std::vector<BasisIndex> basis(int p, int q, int n_max);

struct OracleOptions {
    int torus = 64;  // angles per circle on axes where the symbol is not rotation invariant
    int radial = 48; // Jacobi points per simplex axis
    // Use exact Dirichlet moments for BallFunctions with a rate-free radial tag.
    bool closed_form = true;
};

struct BlockRange {
    int offset = 0;
    int size = 0;
};

struct SuperToeplitzMatrix {
    WeightedSpaceSpec spec;
    int n_max = 0;
    std::vector<BasisIndex> index;
    std::map<Subset, BlockRange> blocks; // M -> rows/columns of the xi_M component
    Eigen::MatrixXcd data;

    int dim() const { return int(index.size()); }
    Eigen::MatrixXcd block(Subset I, Subset J) const;
    // positions of basis elements with |n| <= degree
    std::vector<int> interior(int degree) const;
};

// Matrix with entries <f z^n, z^m>_{nu_row} / (||z^m||_{nu_row} ||z^n||_{nu_col}),
// row m, column n, where the inner product carries the extra factor
// (1 - |z|^2)^{extra_power}.
Eigen::MatrixXcd scalar_toeplitz_block(const BallFunction& f, int p, double nu_row, double nu_col, int n_max,
                                       const OracleOptions& opt = {}, int extra_power = 0);

// Block (I, J) = sum over K containing I and J of
//   eps(K\I, I) eps(K\J, J) Gamma(nu+|I|-p)/Gamma(nu+|J|-p)
//   * T_{nu+|I|}^{nu+|J|}( F_{K\I, K\J} (1 - |z|^2)^{|K|-|I|} ).
SuperToeplitzMatrix assemble_super_toeplitz(const BallSuperSymbol& F, const WeightedSpaceSpec& spec, int n_max,
                                            const OracleOptions& opt = {});

// ||A - I|| max-entry over the interior block.
double identity_defect(const SuperToeplitzMatrix& A, int interior_degree);
double diagonality_defect(const SuperToeplitzMatrix& A, int interior_degree);
double hermitian_defect(const SuperToeplitzMatrix& A, int interior_degree);
// Spectral norm of AB - BA restricted to the interior block.
double commutator_norm(const SuperToeplitzMatrix& A, const SuperToeplitzMatrix& B, int interior_degree);

// Largest singular value; dense SVD up to dimension 512, otherwise 200 power
// iterations on X^* X from a fixed seed.
double spectral_norm(const Eigen::MatrixXcd& X);

// Diagonal entry (z^n xi_M | F z^n xi_M) / (z^n xi_M | z^n xi_M) computed by
// a direct Berezin integral of W Phi^* F Psi, W the expanded super weight.
// Needs every coefficient of F to be rotation invariant on all axes.
cd berezin_diagonal(const BallSuperSymbol& F, const WeightedSpaceSpec& spec, Subset M, const MultiIndex& n,
                    int radial = 64);

// Quasi-elliptic Bargmann transform on truncated families.
using CoeffFamily = std::map<BasisIndex, cd>;

double bargmann_weight(const WeightedSpaceSpec& spec, Subset M, const MultiIndex& n);
CoeffFamily bargmann_qe_forward(const WeightedSpaceSpec& spec, const SuperPolynomial& psi);
SuperPolynomial bargmann_qe_adjoint(const WeightedSpaceSpec& spec, const CoeffFamily& c);
double family_norm_sq(const CoeffFamily& c);

nlohmann::ordered_json matrix_to_json(const SuperToeplitzMatrix& A, bool include_data);
// Header: 8 bytes "STZMAT01", uint64 rows, uint64 cols, then row-major
// (re, im) pairs of little-endian doubles.
void write_matrix_binary(const Eigen::MatrixXcd& A, std::ostream& os);
Eigen::MatrixXcd read_matrix_binary(std::istream& is);

} // namespace stz
