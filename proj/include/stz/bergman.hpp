#pragma once

#include <map>
#include <utility>
#include <vector>

#include "stz/domains.hpp"
#include "stz/grassmann.hpp"

namespace stz {

using MultiIndex = std::vector<int>;

int degree(const MultiIndex& n);
double log_factorial(const MultiIndex& n);
// All n in Z_+^p with |n| <= n_max, ordered by |n| then lexicographically.
std::vector<MultiIndex> multi_indices(int p, int n_max);
cd monomial(const cvec& z, const MultiIndex& n);

struct WeightedSpaceSpec {
    Domain domain = Domain::Ball;
    int p = 1;
    int q = 0;
    double nu = 2.0;

    void validate() const;
    // nu + |M|; throws unless it exceeds p.
    double level(Subset M) const;
};

// ||z^n||^2 in the weighted Bergman space of the ball with parameter nu.
double monomial_norm_sq(double nu, int p, const MultiIndex& n);
double log_monomial_norm_sq(double nu, int p, const MultiIndex& n);

cd kernel_ball(double nu, const cvec& z, const cvec& w);
cd kernel_siegel(double nu, const cvec& w, const cvec& v);
GrassmannElement super_kernel(const WeightedSpaceSpec& spec, const SuperPoint& Z, const SuperPoint& W);

// sum over (M, n) of c * z^n xi_M
class SuperPolynomial {
public:
    using Key = std::pair<Subset, MultiIndex>;

    SuperPolynomial(int p, int q) : p_(p), q_(q) {}

    int p() const { return p_; }
    int q() const { return q_; }
    void add(Subset M, const MultiIndex& n, cd c);
    cd coeff(Subset M, const MultiIndex& n) const;
    const std::map<Key, cd>& terms() const { return terms_; }
    int max_degree() const;

    cd component(Subset M, const cvec& z) const;
    // Psi(z, xi) with the odd coordinates a_k xi_k; default a_k = 1.
    GrassmannElement evaluate(const SuperPoint& Z) const;
    GrassmannElement evaluate(const cvec& z) const;

private:
    int p_, q_;
    std::map<Key, cd> terms_;
};

// Conjugate-linear in phi.
cd super_inner_product(const WeightedSpaceSpec& spec, const SuperPolynomial& phi, const SuperPolynomial& psi);

// |(K_Z | Psi) - Psi(Z)| maximised over the xi_M components.
double reproduce_check(const WeightedSpaceSpec& spec, const SuperPolynomial& psi, const cvec& z);

// (U_nu Psi)(W) = Psi(cayley_inv(W)) (2 / (1 - i w_p))^nu, as an element of the
// Grassmann algebra in the Siegel odd generators.
GrassmannElement u_nu_apply(const WeightedSpaceSpec& spec, const SuperPolynomial& psi, const SiegelPoint& w);

// Principal power with the positive-real-part guard used for all kernels.
cd guarded_pow(cd base, double exponent);

} // namespace stz
