#include "stz/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "stz/errors.hpp"

namespace stz {

namespace {

struct RecurrenceValue {
    double q = 0.0;        // e_{m-1} P_m(x), zero at the nodes
    double dq = 0.0;
    double log_sum = 0.0;  // log sum_{k<m} P_k(x)^2
};

// Orthonormal recurrence e_k P_{k+1} = (x - d_k) P_k - e_{k-1} P_{k-1}, P_0 = 1,
// rescaled on the fly so that large nodes do not overflow.
RecurrenceValue recurrence(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double x)
{
    const int m = int(d.size());
    double p0 = 0.0, p1 = 1.0, dp0 = 0.0, dp1 = 0.0, sum = 1.0, log_scale = 0.0;
    RecurrenceValue out;
    for (int k = 0; k < m; ++k) {
        const double back = k > 0 ? e(k - 1) : 0.0;
        const double q = (x - d(k)) * p1 - back * p0;
        const double dq = p1 + (x - d(k)) * dp1 - back * dp0;
        if (k == m - 1) {
            out.q = q;
            out.dq = dq;
            break;
        }
        p0 = p1;
        dp0 = dp1;
        p1 = q / e(k);
        dp1 = dq / e(k);
        sum += p1 * p1;
        if (std::abs(p1) > 1e100) {
            p0 *= 1e-100;
            p1 *= 1e-100;
            dp0 *= 1e-100;
            dp1 *= 1e-100;
            sum *= 1e-200;
            log_scale += 100.0 * std::log(10.0);
        }
    }
    out.log_sum = std::log(sum) + 2.0 * log_scale;
    return out;
}

// Newton refinement of a node followed by w = mu0 / sum P_k^2, which keeps full
// relative accuracy on the small outer weights.
void polish(const Eigen::VectorXd& d, const Eigen::VectorXd& e, double mu0, double& x, double& w)
{
    for (int it = 0; it < 3; ++it) {
        const RecurrenceValue r = recurrence(d, e, x);
        if (r.dq == 0.0 || !std::isfinite(r.q / r.dq))
            break;
        const double step = r.q / r.dq;
        if (std::abs(step) > 1e-6 * (1.0 + std::abs(x)))
            break;
        x -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x)))
            break;
    }
    const RecurrenceValue r = recurrence(d, e, x);
    if (std::isfinite(r.log_sum))
        w = mu0 * std::exp(-r.log_sum);
}

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first eigenvector components.
QuadratureRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0)
{
    const int m = int(diag.size());
    QuadratureRule rule;
    rule.exactness = 2 * m - 1;
    if (m == 1) {
        rule.nodes = {diag(0)};
        rule.weights = {mu0};
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, offdiag, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("Golub-Welsch eigen-solve failed", 0.0);
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        rule.nodes[i] = es.eigenvalues()(i);
        rule.weights[i] = mu0 * v0 * v0;
        polish(diag, offdiag, mu0, rule.nodes[i], rule.weights[i]);
    }
    return rule;
}

} // namespace

QuadratureRule gauss_jacobi(int m, double alpha, double beta)
{
    if (m < 1 || !(alpha > -1.0) || !(beta > -1.0))
        throw ParameterError("gauss_jacobi: need m >= 1 and alpha, beta > -1");
    // Recurrence on [-1,1] for (1-x)^a (1+x)^b, then t = (1+x)/2.
    const double a = alpha, b = beta;
    Eigen::VectorXd d(m), e(m > 1 ? m - 1 : 0);
    for (int n = 0; n < m; ++n) {
        if (n == 0) {
            d(n) = (b - a) / (a + b + 2.0);
        } else {
            const double s = 2.0 * n + a + b;
            d(n) = (b * b - a * a) / (s * (s + 2.0));
        }
    }
    for (int n = 1; n < m; ++n) {
        double bn;
        if (n == 1) {
            bn = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        } else {
            const double s = 2.0 * n + a + b;
            bn = 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
        }
        e(n - 1) = std::sqrt(bn);
    }
    const double mass = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    QuadratureRule r = golub_welsch(d, e, 1.0);
    for (int i = 0; i < m; ++i) {
        r.nodes[i] = 0.5 * (1.0 + r.nodes[i]);
        r.weights[i] *= mass;
    }
    return r;
}

QuadratureRule gauss_laguerre_gen(int m, double alpha, double scale)
{
    if (m < 1 || !(alpha > -1.0) || !(scale > 0.0))
        throw ParameterError("gauss_laguerre_gen: need m >= 1, alpha > -1, scale > 0");
    Eigen::VectorXd d(m), e(m > 1 ? m - 1 : 0);
    for (int n = 0; n < m; ++n)
        d(n) = 2.0 * n + alpha + 1.0;
    for (int n = 1; n < m; ++n)
        e(n - 1) = std::sqrt(n * (n + alpha));
    QuadratureRule r = golub_welsch(d, e, 1.0);
    const double mass = std::exp(std::lgamma(alpha + 1.0) - (alpha + 1.0) * std::log(scale));
    for (int i = 0; i < m; ++i) {
        r.nodes[i] /= scale;
        r.weights[i] *= mass;
    }
    return r;
}

QuadratureRule gauss_hermite(int m)
{
    if (m < 1)
        throw ParameterError("gauss_hermite: need m >= 1");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m), e(m > 1 ? m - 1 : 0);
    for (int n = 1; n < m; ++n)
        e(n - 1) = std::sqrt(0.5 * n);
    return golub_welsch(d, e, std::sqrt(M_PI));
}

QuadratureRuleND simplex_dirichlet(int m, int p, const std::vector<double>& exponents)
{
    if (p < 1)
        throw ParameterError("simplex_dirichlet: need p >= 1");
    if (int(exponents.size()) != p + 1)
        throw DimensionError("simplex_dirichlet: expected p+1 exponents");
    const double c = exponents[p];
    std::vector<QuadratureRule> axes;
    for (int j = 0; j < p; ++j) {
        double tail = c + (p - 1 - j);
        for (int k = j + 1; k < p; ++k)
            tail += exponents[k];
        axes.push_back(gauss_jacobi(m, tail, exponents[j]));
    }
    QuadratureRuleND u = tensor(axes);
    QuadratureRuleND out;
    out.dim = p;
    out.exactness = 2 * m - 1;
    out.weights = u.weights;
    out.nodes.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        std::vector<double> t(p);
        double remaining = 1.0;
        for (int k = 0; k < p; ++k) {
            t[k] = remaining * u.nodes[i][k];
            remaining *= 1.0 - u.nodes[i][k];
        }
        out.nodes[i] = std::move(t);
    }
    return out;
}

QuadratureRuleND tensor(const std::vector<QuadratureRule>& axes)
{
    QuadratureRuleND out;
    out.dim = int(axes.size());
    out.exactness = 1 << 30;
    std::size_t total = 1;
    for (const auto& a : axes) {
        total *= a.size();
        out.exactness = std::min(out.exactness, a.exactness);
    }
    out.nodes.reserve(total);
    out.weights.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t n = 0; n < total; ++n) {
        std::vector<double> x(axes.size());
        double w = 1.0;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            x[k] = axes[k].nodes[idx[k]];
            w *= axes[k].weights[idx[k]];
        }
        out.nodes.push_back(std::move(x));
        out.weights.push_back(w);
        for (std::size_t k = axes.size(); k-- > 0;) {
            if (++idx[k] < axes[k].size())
                break;
            idx[k] = 0;
        }
    }
    return out;
}

double dirichlet_moment(const std::vector<double>& beta, double c)
{
    double lg = std::lgamma(c + 1.0);
    double s = 0.0;
    for (double b : beta) {
        lg += std::lgamma(b + 1.0);
        s += b;
    }
    lg -= std::lgamma(s + double(beta.size()) + c + 1.0);
    return std::exp(lg);
}

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x)
{
    return pairwise_sum(x.data(), x.size());
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f)
{
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        terms[i] = rule.weights[i] * f(rule.nodes[i]);
    return pairwise_sum(terms);
}

double integrate(const QuadratureRuleND& rule,
                 const std::function<double(const std::vector<double>&)>& f)
{
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i)
        terms[i] = rule.weights[i] * f(rule.nodes[i]);
    return pairwise_sum(terms);
}

MCResult mc_integrate(const std::function<double(const std::vector<double>&)>& f,
                      const Sampler& sampler, std::int64_t n, std::uint64_t seed)
{
    if (n < 2)
        throw ParameterError("mc_integrate: need at least two samples");
    std::mt19937_64 rng(seed);
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (auto& v : vals)
        v = f(sampler(rng));
    const double mean = pairwise_sum(vals) / double(n);
    std::vector<double> sq(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i)
        sq[i] = (vals[i] - mean) * (vals[i] - mean);
    const double var = pairwise_sum(sq) / double(n - 1);
    return {mean, std::sqrt(var / double(n))};
}

AdaptiveResult adaptive(const std::function<double(int m)>& eval, const AdaptivePolicy& policy)
{
    AdaptiveResult r;
    r.m = policy.m_start;
    double prev = eval(r.m);
    r.value = prev;
    r.delta = INFINITY;
    while (2 * r.m <= policy.m_max) {
        r.m *= 2;
        r.value = eval(r.m);
        r.delta = std::abs(r.value - prev);
        if (r.delta <= policy.rel_tol * std::max(1.0, std::abs(r.value))) {
            r.converged = true;
            return r;
        }
        prev = r.value;
    }
    return r;
}

} // namespace stz
