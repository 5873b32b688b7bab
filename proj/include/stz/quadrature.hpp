#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace stz {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int exactness = 0; // highest polynomial degree integrated exactly

    std::size_t size() const { return nodes.size(); }
};

// Multi-dimensional rule; nodes are stored point by point.
struct QuadratureRuleND {
    int dim = 0;
    std::vector<std::vector<double>> nodes;
    std::vector<double> weights;
    int exactness = 0;

    std::size_t size() const { return weights.size(); }
};

// Weight (1-t)^alpha t^beta on (0,1).
QuadratureRule gauss_jacobi(int m, double alpha, double beta);
// Weight v^alpha exp(-scale v) on (0,inf).
QuadratureRule gauss_laguerre_gen(int m, double alpha, double scale);
// Weight exp(-x^2) on the real line.
QuadratureRule gauss_hermite(int m);

// Weight prod_k t_k^{beta_k} (1 - sum t)^c on the standard simplex, via the
// stick-breaking map. exponents = {beta_1, ..., beta_p, c}.
QuadratureRuleND simplex_dirichlet(int m, int p, const std::vector<double>& exponents);

QuadratureRuleND tensor(const std::vector<QuadratureRule>& axes);

// Dirichlet moment  prod Gamma(b_k+1) Gamma(c+1) / Gamma(|b|+p+c+1).
double dirichlet_moment(const std::vector<double>& beta, double c);

struct MCResult {
    double value = 0.0;
    double stderr_ = 0.0;
};

using Sampler = std::function<std::vector<double>(std::mt19937_64&)>;

// Mean of f over samples drawn by `sampler`, with its standard error.
MCResult mc_integrate(const std::function<double(const std::vector<double>&)>& f,
                      const Sampler& sampler, std::int64_t n, std::uint64_t seed);

double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& x);

// Sum of w_i f(x_i) with pairwise accumulation.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);
double integrate(const QuadratureRuleND& rule,
                 const std::function<double(const std::vector<double>&)>& f);

struct AdaptiveResult {
    double value = 0.0;
    double delta = 0.0; // difference between the last two refinements
    int m = 0;
    bool converged = false;
};

struct AdaptivePolicy {
    int m_start = 24;
    int m_max = 192;
    double rel_tol = 1e-10;
};

// Doubles m until successive values agree to rel_tol relative to max(1,|value|).
AdaptiveResult adaptive(const std::function<double(int m)>& eval, const AdaptivePolicy& policy = {});

} // namespace stz
