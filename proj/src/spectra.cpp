#include "stz/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stz/errors.hpp"
#include "stz/parallel.hpp"

namespace stz {

namespace {

using Coords = std::vector<double>;
using CoordMap = std::function<Coords(const std::vector<double>&)>;

// One K-term of a spectral sum: ratio * E[f(coords(x))] under a normalized rule.
struct KTerm {
    double ratio = 0.0;
    const CoeffFunction* f = nullptr;
    std::function<QuadratureRuleND(int)> rule;
    CoordMap coords;
    std::optional<double> closed;
};

const CoeffFunction* find_coeff(const SuperSymbol& F, Subset S)
{
    auto it = F.coeffs.find(S);
    return it == F.coeffs.end() ? nullptr : &it->second;
}

std::vector<Subset> supersets(Subset M, int q)
{
    std::vector<Subset> out;
    for (Subset K : all_subsets(q))
        if ((K & M) == M)
            out.push_back(K);
    return out;
}

void check_common(const SuperSymbol& F, CaseTag tag, double nu, Subset M)
{
    if (F.kase.tag != tag)
        throw ParameterError("symbol belongs to the " + case_name(F.kase) + " case");
    validate_case(F.kase, F.p);
    if (F.q < 0 || F.q > kMaxGenerators)
        throw ParameterError("q out of range");
    if (!within(M, F.q))
        throw DimensionError("M uses a generator beyond q");
    for (const auto& [I, f] : F.coeffs)
        if (!within(I, F.q))
            throw DimensionError("symbol coefficient index uses a generator beyond q");
    if (!(nu + card(M) > F.p))
        throw ParameterError("nu + |M| must exceed p");
}

void check_n(const MultiIndex& n, std::size_t len)
{
    if (n.size() != len)
        throw DimensionError("multi-index has wrong length");
    for (int v : n)
        if (v < 0)
            throw DimensionError("multi-index entries must be non-negative");
}

void check_xi(double xi)
{
    if (!(xi > 0.0) || !std::isfinite(xi))
        throw ParameterError("xi must be positive");
}

QuadratureRuleND normalized(QuadratureRuleND r, double log_mass)
{
    const double s = std::exp(-log_mass);
    for (auto& w : r.weights)
        w *= s;
    return r;
}

QuadratureRule normalized(QuadratureRule r, double log_mass)
{
    const double s = std::exp(-log_mass);
    for (auto& w : r.weights)
        w *= s;
    return r;
}

double log_laguerre_mass(double alpha, double scale)
{
    return std::lgamma(alpha + 1.0) - (alpha + 1.0) * std::log(scale);
}

double log_dirichlet(const std::vector<double>& beta, double c)
{
    double lg = std::lgamma(c + 1.0);
    double s = 0.0;
    for (double b : beta) {
        lg += std::lgamma(b + 1.0);
        s += b;
    }
    return lg - std::lgamma(s + double(beta.size()) + c + 1.0);
}

QuadratureRule laguerre_prob(int m, double alpha, double scale)
{
    return normalized(gauss_laguerre_gen(m, alpha, scale), log_laguerre_mass(alpha, scale));
}

QuadratureRule hermite_prob(int m)
{
    return normalized(gauss_hermite(m), 0.5 * std::log(M_PI));
}

bool is_nonneg_int(double a)
{
    return a >= 0.0 && a == std::floor(a) && a <= 64.0;
}

// E[(x - u)^a] / (2 sqrt(xi))^a for x with density exp(-x^2)/sqrt(pi).
double gauss_shift_moment(int a, double u, double xi)
{
    double s = 0.0;
    for (int i = 0; i <= a; i += 2) {
        const double mi = std::exp(std::lgamma((i + 1) / 2.0)) / std::sqrt(M_PI);
        const double binom = std::exp(std::lgamma(a + 1.0) - std::lgamma(i + 1.0) - std::lgamma(a - i + 1.0));
        s += binom * std::pow(-u, a - i) * mi;
    }
    return s / std::pow(2.0 * std::sqrt(xi), a);
}

// E[v^a exp(-b v)] under v^c exp(-2 xi v), normalized.
std::optional<double> gamma_moment(double a, double b, double c, double xi)
{
    const double lam = 2.0 * xi + b;
    if (!(lam > 0.0) || !(c + a > -1.0))
        return std::nullopt;
    return std::exp(std::lgamma(c + a + 1.0) - std::lgamma(c + 1.0) + (c + 1.0) * std::log(2.0 * xi)
                    - (c + a + 1.0) * std::log(lam));
}

// E[rho^a] for rho = sqrt(r), r with density r^e exp(-2 xi r), normalized.
std::optional<double> sqrt_gamma_moment(double a, double e, double xi)
{
    if (!(e + a / 2.0 > -1.0))
        return std::nullopt;
    return std::exp(std::lgamma(e + a / 2.0 + 1.0) - std::lgamma(e + 1.0) - (a / 2.0) * std::log(2.0 * xi));
}

template <class TermFn>
std::optional<double> closed_sum(const CoeffFunction* f, std::size_t dim, TermFn term)
{
    if (!f->tag)
        return std::nullopt;
    double s = 0.0;
    for (const auto& t : f->tag->terms) {
        if (t.powers.size() != dim || t.rates.size() != dim)
            return std::nullopt;
        const auto v = term(t);
        if (!v)
            return std::nullopt;
        s += t.c * *v;
    }
    return s;
}

std::size_t tensor_dim(const std::vector<KTerm>& terms)
{
    for (const auto& t : terms)
        if (!t.closed && t.rule)
            return std::size_t(t.rule(1).dim);
    return 1;
}

SpectralValue combine(const std::vector<KTerm>& terms, const SpectraOptions& opt)
{
    SpectralValue out;
    double fixed = 0.0;
    bool any_quad = false;
    for (const auto& t : terms) {
        if (t.closed)
            fixed += t.ratio * *t.closed;
        else
            any_quad = true;
    }
    if (!any_quad) {
        out.value = fixed;
        out.closed_form = true;
        return out;
    }
    AdaptivePolicy pol = opt.policy;
    const std::size_t dim = std::max<std::size_t>(1, tensor_dim(terms));
    const int cap = int(std::floor(std::pow(double(opt.max_nodes), 1.0 / double(dim)) + 1e-9));
    pol.m_max = std::max(pol.m_start, std::min(pol.m_max, cap));
    auto eval = [&](int m) {
        double s = fixed;
        for (const auto& t : terms) {
            if (t.closed)
                continue;
            const QuadratureRuleND rule = t.rule(m);
            s += t.ratio * integrate(rule, [&](const std::vector<double>& x) { return (*t.f)(t.coords(x)); });
        }
        return s;
    };
    const AdaptiveResult r = adaptive(eval, pol);
    out.value = r.value;
    out.err = r.delta;
    out.converged = r.converged;
    return out;
}

SpectralValue finish(SpectralValue v, const char* what)
{
    if (!v.converged)
        throw ConvergenceError(std::string(what) + ": quadrature did not converge", v.err);
    return v;
}

double sum_int(const MultiIndex& n)
{
    return double(degree(n));
}

// ---- quasi-elliptic ----

SpectralValue qe_impl(const SuperSymbol& F, double nu, const MultiIndex& n, Subset M, const SpectraOptions& opt)
{
    check_common(F, CaseTag::QuasiElliptic, nu, M);
    check_n(n, std::size_t(F.p));
    const int p = F.p;
    const double lev = nu + card(M);
    const double logpref = std::lgamma(sum_int(n) + lev) - log_factorial(n) - std::lgamma(lev - p);
    std::vector<double> beta(n.begin(), n.end());
    std::vector<KTerm> terms;
    for (Subset K : supersets(M, F.q)) {
        const CoeffFunction* f = find_coeff(F, K & ~M);
        if (!f)
            continue;
        const double cK = nu + card(K) - p - 1.0;
        const double logmass = log_dirichlet(beta, cK);
        KTerm t;
        t.ratio = std::exp(logpref + logmass);
        t.f = f;
        std::vector<double> ex = beta;
        ex.push_back(cK);
        t.rule = [p, ex, logmass](int m) { return normalized(simplex_dirichlet(m, p, ex), logmass); };
        t.coords = [](const std::vector<double>& x) {
            Coords r(x.size());
            for (std::size_t k = 0; k < x.size(); ++k)
                r[k] = std::sqrt(x[k]);
            return r;
        };
        if (opt.closed_form)
            t.closed = closed_sum(f, std::size_t(p), [&](const ExpPolyTerm& term) -> std::optional<double> {
                std::vector<double> b2 = beta;
                for (int k = 0; k < p; ++k) {
                    if (term.rates[k] != 0.0)
                        return std::nullopt;
                    b2[k] += term.powers[k] / 2.0;
                    if (!(b2[k] > -1.0))
                        return std::nullopt;
                }
                return std::exp(log_dirichlet(b2, cK) - logmass);
            });
        terms.push_back(std::move(t));
    }
    return combine(terms, opt);
}

// ---- quasi-parabolic ----

// E[(v + sum r_k)^a exp(-b (v + sum r_k)) prod r_k^{e_k}] over the normalized
// product of r_k^{n_k} exp(-2 xi r_k) and v^c exp(-2 xi v); a a non-negative integer.
double qp_multinomial(int a, double b, const std::vector<double>& n, const std::vector<double>& e, double c, double xi)
{
    const double lam = 2.0 * xi + b;
    const std::size_t d = n.size();
    // log of the normalizing masses
    double lmass = log_laguerre_mass(c, 2.0 * xi);
    for (double nk : n)
        lmass += log_laguerre_mass(nk, 2.0 * xi);
    double total = 0.0;
    std::vector<int> j(d + 1, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
        if (k == d) {
            j[d] = left;
            double lg = std::lgamma(a + 1.0) - std::lgamma(j[d] + 1.0) + log_laguerre_mass(c + j[d], lam);
            for (std::size_t i = 0; i < d; ++i)
                lg += -std::lgamma(j[i] + 1.0) + log_laguerre_mass(n[i] + e[i] + j[i], lam);
            total += std::exp(lg - lmass);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            j[k] = v;
            rec(k + 1, left - v);
        }
    };
    rec(0, a);
    return total;
}

SpectralValue qp_impl(const SuperSymbol& F, double nu, const MultiIndex& n, double xi, Subset M,
                      const SpectraOptions& opt)
{
    check_common(F, CaseTag::QuasiParabolic, nu, M);
    check_n(n, std::size_t(F.p - 1));
    check_xi(xi);
    const int p = F.p;
    const double lev = nu + card(M);
    const double logpref = (sum_int(n) + lev - 1.0) * std::log(2.0 * xi) - log_factorial(n) - std::lgamma(lev - p);
    std::vector<KTerm> terms;
    for (Subset K : supersets(M, F.q)) {
        const CoeffFunction* f = find_coeff(F, K & ~M);
        if (!f)
            continue;
        const double cK = nu + card(K) - p - 1.0;
        double logmass = log_laguerre_mass(cK, 2.0 * xi);
        for (int k : n)
            logmass += log_laguerre_mass(k, 2.0 * xi);
        KTerm t;
        t.ratio = std::exp(logpref + logmass);
        t.f = f;
        t.rule = [n, cK, xi](int m) {
            std::vector<QuadratureRule> axes;
            for (int k : n)
                axes.push_back(laguerre_prob(m, k, 2.0 * xi));
            axes.push_back(laguerre_prob(m, cK, 2.0 * xi));
            return tensor(axes);
        };
        t.coords = [](const std::vector<double>& x) {
            const std::size_t d = x.size() - 1;
            Coords r(x.size());
            double rhat = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                r[k] = std::sqrt(x[k]);
                rhat += x[k];
            }
            r[d] = x[d] + rhat;
            return r;
        };
        if (opt.closed_form)
            t.closed = closed_sum(f, std::size_t(p), [&](const ExpPolyTerm& term) -> std::optional<double> {
                const double a = term.powers[p - 1];
                const double b = term.rates[p - 1];
                if (p == 1)
                    return gamma_moment(a, b, cK, xi);
                std::vector<double> e(p - 1), nn(n.begin(), n.end());
                for (int k = 0; k + 1 < p; ++k) {
                    if (term.rates[k] != 0.0 || !(n[k] + term.powers[k] / 2.0 > -1.0))
                        return std::nullopt;
                    e[k] = term.powers[k] / 2.0;
                }
                if (!is_nonneg_int(a) || !(2.0 * xi + b > 0.0))
                    return std::nullopt;
                return qp_multinomial(int(a), b, nn, e, cK, xi);
            });
        terms.push_back(std::move(t));
    }
    return combine(terms, opt);
}

// ---- nilpotent and quasi-nilpotent share the Gaussian/Gamma structure ----

// rho axes (Laguerre in r with exponents e_k), Gaussian axes, then v.
SpectralValue heis_impl(const SuperSymbol& F, double nu, const std::vector<double>& r_exp, const MultiIndex& n,
                        const std::vector<double>& u, double xi, Subset M, const SpectraOptions& opt)
{
    const int p = F.p;
    const int k = int(r_exp.size());
    const int g = int(u.size());
    const double lev = nu + card(M);
    const double logpref = (sum_int(n) + lev - p + k) * std::log(2.0 * xi) - 0.5 * g * std::log(M_PI)
                           - log_factorial(n) - std::lgamma(lev - p);
    std::vector<KTerm> terms;
    for (Subset K : supersets(M, F.q)) {
        const CoeffFunction* f = find_coeff(F, K & ~M);
        if (!f)
            continue;
        const double cK = nu + card(K) - p - 1.0;
        double logmass = log_laguerre_mass(cK, 2.0 * xi) + 0.5 * g * std::log(M_PI);
        for (double e : r_exp)
            logmass += log_laguerre_mass(e, 2.0 * xi);
        KTerm t;
        t.ratio = std::exp(logpref + logmass);
        t.f = f;
        t.rule = [r_exp, g, cK, xi](int m) {
            std::vector<QuadratureRule> axes;
            for (double e : r_exp)
                axes.push_back(laguerre_prob(m, e, 2.0 * xi));
            for (int i = 0; i < g; ++i)
                axes.push_back(hermite_prob(m));
            axes.push_back(laguerre_prob(m, cK, 2.0 * xi));
            return tensor(axes);
        };
        const double scale = 1.0 / (2.0 * std::sqrt(xi));
        t.coords = [k, g, u, scale](const std::vector<double>& x) {
            Coords r(x.size());
            for (int i = 0; i < k; ++i)
                r[i] = std::sqrt(x[i]);
            for (int i = 0; i < g; ++i)
                r[k + i] = (x[k + i] - u[i]) * scale;
            r[k + g] = x[k + g];
            return r;
        };
        if (opt.closed_form)
            t.closed = closed_sum(f, std::size_t(p), [&](const ExpPolyTerm& term) -> std::optional<double> {
                double v = 1.0;
                for (int i = 0; i < k; ++i) {
                    if (term.rates[i] != 0.0)
                        return std::nullopt;
                    const auto m = sqrt_gamma_moment(term.powers[i], r_exp[i], xi);
                    if (!m)
                        return std::nullopt;
                    v *= *m;
                }
                for (int i = 0; i < g; ++i) {
                    if (term.rates[k + i] != 0.0 || !is_nonneg_int(term.powers[k + i]))
                        return std::nullopt;
                    v *= gauss_shift_moment(int(term.powers[k + i]), u[i], xi);
                }
                const auto m = gamma_moment(term.powers[k + g], term.rates[k + g], cK, xi);
                if (!m)
                    return std::nullopt;
                return v * *m;
            });
        terms.push_back(std::move(t));
    }
    return combine(terms, opt);
}

SpectralValue n_impl(const SuperSymbol& F, double nu, const std::vector<double>& u, double xi, Subset M,
                     const SpectraOptions& opt)
{
    check_common(F, CaseTag::Nilpotent, nu, M);
    if (u.size() != std::size_t(F.p - 1))
        throw DimensionError("u' must have p-1 entries");
    check_xi(xi);
    return heis_impl(F, nu, {}, {}, u, xi, M, opt);
}

SpectralValue qn_impl(const SuperSymbol& F, double nu, const MultiIndex& n, const std::vector<double>& u, double xi,
                      Subset M, const SpectraOptions& opt)
{
    check_common(F, CaseTag::QuasiNilpotent, nu, M);
    const int k = F.kase.k;
    check_n(n, std::size_t(k));
    if (u.size() != std::size_t(F.p - k - 1))
        throw DimensionError("u' must have p-k-1 entries");
    check_xi(xi);
    std::vector<double> e(k);
    for (int i = 0; i < k; ++i)
        e[i] = opt.strict_paper ? double(F.p) : double(n[i]);
    return heis_impl(F, nu, e, n, u, xi, M, opt);
}

// ---- quasi-hyperbolic ----

double qh_smooth(double nabs, double nu, double S2, double xi, double theta)
{
    const double kappa = (nu + nabs) / 2.0;
    const cd B(1.0 - S2, -S2);
    const double S = S2 / (1.0 - S2);
    const double tn = std::tan(theta / 2.0);
    const cd a = cd(1.0, -S) * tn + S;
    if (!(a.real() > 0.0))
        throw BranchError("arctan argument left the right half-plane");
    const cd A = std::atan(a);
    return std::exp(-(nu + nabs) * std::log(std::abs(B)) - 2.0 * xi * std::arg(B)
                    - 4.0 * (xi * A.real() - kappa * A.imag()));
}

void check_qh_point(const std::vector<double>& s, double theta)
{
    if (!(theta > 0.0 && theta < M_PI))
        throw DomainError("theta must lie in (0, pi)");
    double s2 = 0.0;
    for (double x : s)
        s2 += x * x;
    if (!(s2 < 1.0 - kDomainMargin))
        throw DomainError("|s| must be below 1");
}

// sin(pi t) / (pi t (1-t))
double sinc_factor(double t)
{
    return std::sin(M_PI * t) / (M_PI * t * (1.0 - t));
}

// Integral of h(s, theta) s^{2n} (1-|s|^2)^{nu_e - p} (c/4) sin^{c_theta} theta * smooth * s ds dtheta
// evaluated with m points per axis.
double qh_integral(int p, const MultiIndex& n, double nu_e, double c_theta, double xi, int m,
                   const std::function<double(const Coords&)>& h)
{
    const int d = p - 1;
    const double nabs = sum_int(n);
    QuadratureRuleND srule;
    if (d == 0) {
        srule.dim = 0;
        srule.nodes = {{}};
        srule.weights = {1.0};
    } else {
        std::vector<double> ex(n.begin(), n.end());
        ex.push_back(nu_e - p);
        srule = simplex_dirichlet(m, d, ex);
    }
    const QuadratureRule trule = gauss_jacobi(m, c_theta, c_theta);
    const double tconst = std::pow(M_PI, c_theta + 1.0);
    const double pref = std::pow(0.5, d) * c_nu(nu_e, p) / 4.0;
    std::vector<double> terms;
    terms.reserve(srule.size() * trule.size());
    Coords x(p);
    for (std::size_t i = 0; i < srule.size(); ++i) {
        double S2 = 0.0;
        for (int k = 0; k < d; ++k) {
            x[k] = std::sqrt(srule.nodes[i][k]);
            S2 += srule.nodes[i][k];
        }
        for (std::size_t j = 0; j < trule.size(); ++j) {
            const double tt = trule.nodes[j];
            const double theta = M_PI * tt;
            x[d] = theta;
            const double w = srule.weights[i] * trule.weights[j] * tconst * std::pow(sinc_factor(tt), c_theta);
            terms.push_back(w * qh_smooth(nabs, nu_e, S2, xi, theta) * h(x));
        }
    }
    return pref * pairwise_sum(terms);
}

AdaptivePolicy qh_policy(const SpectraOptions& opt, int p)
{
    AdaptivePolicy pol = opt.policy;
    const int cap = int(std::floor(std::pow(double(opt.max_nodes), 1.0 / double(p)) + 1e-9));
    pol.m_max = std::max(pol.m_start, std::min(pol.m_max, cap));
    return pol;
}

SpectralValue alpha_impl(const MultiIndex& n, double nu, double xi, const SpectraOptions& opt)
{
    const int p = int(n.size()) + 1;
    check_n(n, n.size());
    if (!(nu > p))
        throw ParameterError("alpha: nu must exceed p");
    const auto one = [](const Coords&) { return 1.0; };
    const AdaptiveResult r = adaptive(
        [&](int m) { return std::log(qh_integral(p, n, nu, nu - p - 1.0, xi, m, one)); }, qh_policy(opt, p));
    SpectralValue v;
    v.value = std::exp(-0.5 * r.value);
    v.err = 0.5 * v.value * r.delta;
    v.converged = r.converged;
    return v;
}

SpectralValue qh_impl(const SuperSymbol& F, double nu, const MultiIndex& n, double xi, Subset M,
                      const SpectraOptions& opt)
{
    check_common(F, CaseTag::QuasiHyperbolic, nu, M);
    check_n(n, std::size_t(F.p - 1));
    if (!std::isfinite(xi))
        throw ParameterError("xi must be finite");
    const int p = F.p;
    const double nu_e = nu + card(M);
    std::vector<std::pair<double, const CoeffFunction*>> parts;
    for (Subset K : supersets(M, F.q))
        if (const CoeffFunction* f = find_coeff(F, K & ~M))
            parts.emplace_back(nu + card(K) - p - 1.0, f);
    SpectralValue out;
    if (parts.empty())
        return out;
    const auto one = [](const Coords&) { return 1.0; };
    const AdaptiveResult r = adaptive(
        [&](int m) {
            const double norm = qh_integral(p, n, nu_e, nu_e - p - 1.0, xi, m, one);
            double s = 0.0;
            for (const auto& [c, f] : parts)
                s += qh_integral(p, n, nu_e, c, xi, m, [f](const Coords& x) { return (*f)(x); });
            return s / norm;
        },
        qh_policy(opt, p));
    out.value = r.value;
    out.err = r.delta;
    out.converged = r.converged;
    return out;
}

} // namespace

SpectralValue gamma_quasi_elliptic(const SuperSymbol& F, double nu, const MultiIndex& n, Subset M,
                                   const SpectraOptions& opt)
{
    return finish(qe_impl(F, nu, n, M, opt), "gamma_quasi_elliptic");
}

SpectralValue gamma_quasi_parabolic(const SuperSymbol& F, double nu, const MultiIndex& n, double xi, Subset M,
                                    const SpectraOptions& opt)
{
    return finish(qp_impl(F, nu, n, xi, M, opt), "gamma_quasi_parabolic");
}

SpectralValue gamma_nilpotent(const SuperSymbol& F, double nu, const std::vector<double>& u_prime, double xi,
                              Subset M, const SpectraOptions& opt)
{
    return finish(n_impl(F, nu, u_prime, xi, M, opt), "gamma_nilpotent");
}

SpectralValue gamma_quasi_nilpotent(const SuperSymbol& F, double nu, const MultiIndex& n,
                                    const std::vector<double>& u_prime, double xi, Subset M,
                                    const SpectraOptions& opt)
{
    return finish(qn_impl(F, nu, n, u_prime, xi, M, opt), "gamma_quasi_nilpotent");
}

cd beta_qh(const MultiIndex& n, double nu, const std::vector<double>& s, double xi, double theta)
{
    check_n(n, s.size());
    check_qh_point(s, theta);
    double S2 = 0.0;
    cd sn = 1.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        S2 += s[k] * s[k];
        sn *= std::pow(s[k], n[k]);
    }
    const double kappa = (nu + degree(n)) / 2.0;
    const cd B(1.0 - S2, -S2);
    const double S = S2 / (1.0 - S2);
    const cd a = cd(1.0, -S) * std::tan(theta / 2.0) + S;
    if (!(a.real() > 0.0))
        throw BranchError("arctan argument left the right half-plane");
    return sn * std::pow(B, cd(-kappa, xi)) * std::exp(-2.0 * cd(xi, kappa) * std::atan(a));
}

double beta_qh_abs2(const MultiIndex& n, double nu, const std::vector<double>& s, double xi, double theta)
{
    check_n(n, s.size());
    check_qh_point(s, theta);
    double S2 = 0.0, sn = 1.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        S2 += s[k] * s[k];
        sn *= std::pow(s[k], 2 * n[k]);
    }
    return sn * qh_smooth(degree(n), nu, S2, xi, theta);
}

SpectralValue alpha_qh(const MultiIndex& n, double nu, double xi, const SpectraOptions& opt)
{
    return finish(alpha_impl(n, nu, xi, opt), "alpha_qh");
}

SpectralValue gamma_quasi_hyperbolic(const SuperSymbol& F, double nu, const MultiIndex& n, double xi, Subset M,
                                     const SpectraOptions& opt)
{
    return finish(qh_impl(F, nu, n, xi, M, opt), "gamma_quasi_hyperbolic");
}

std::vector<double> log_grid(double lo, double hi, int count)
{
    if (!(lo > 0.0) || !(hi >= lo) || count < 1)
        throw ParameterError("log_grid: need 0 < lo <= hi and count >= 1");
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[i] = std::exp(a + (b - a) * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

std::vector<double> default_xi_grid()
{
    return log_grid(0.05, 20.0, 32);
}

bool SpectralTable::all_converged() const
{
    return std::all_of(entries.begin(), entries.end(), [](const SpectralEntry& e) { return e.converged; });
}

const SpectralEntry* SpectralTable::find(Subset M, const MultiIndex& n, std::optional<double> xi) const
{
    for (const auto& e : entries)
        if (e.M == M && e.n == n && e.xi == xi)
            return &e;
    return nullptr;
}

SpectralTable build_table(const SuperSymbol& F, const TableRequest& req)
{
    validate_case(F.kase, F.p);
    if (req.n_max < 0)
        throw ParameterError("n_max must be non-negative");
    SpectralTable t;
    t.kase = F.kase;
    t.p = F.p;
    t.q = F.q;
    t.nu = req.nu;
    t.n_max = req.n_max;
    const CaseTag tag = F.kase.tag;
    const bool continuous = tag != CaseTag::QuasiElliptic;
    if (continuous) {
        if (req.xi_grid.empty())
            throw ParameterError("xi grid must not be empty");
        t.xi_grid = req.xi_grid;
    }
    int n_len = 0, u_len = 0;
    switch (tag) {
    case CaseTag::QuasiElliptic: n_len = F.p; break;
    case CaseTag::QuasiParabolic:
    case CaseTag::QuasiHyperbolic: n_len = F.p - 1; break;
    case CaseTag::Nilpotent: u_len = F.p - 1; break;
    case CaseTag::QuasiNilpotent:
        n_len = F.kase.k;
        u_len = F.p - F.kase.k - 1;
        break;
    }
    if (u_len > 0) {
        t.u_prime = req.u_prime.empty() ? std::vector<double>(u_len, 0.0) : req.u_prime;
        if (int(t.u_prime.size()) != u_len)
            throw DimensionError("u' has the wrong length for this case");
    }
    const std::vector<MultiIndex> ns =
        tag == CaseTag::Nilpotent ? std::vector<MultiIndex>{MultiIndex{}} : multi_indices(n_len, req.n_max);
    for (Subset M : all_subsets(F.q))
        for (const auto& n : ns) {
            if (!continuous) {
                t.entries.push_back({M, n, std::nullopt, 0.0, 0.0, true, {}});
                continue;
            }
            for (double xi : t.xi_grid)
                t.entries.push_back({M, n, xi, 0.0, 0.0, true, {}});
        }
    parallel_for(t.entries.size(), [&](std::size_t i) {
        SpectralEntry& e = t.entries[i];
        try {
            SpectralValue v;
            const SpectraOptions& o = req.options;
            switch (tag) {
            case CaseTag::QuasiElliptic: v = qe_impl(F, req.nu, e.n, e.M, o); break;
            case CaseTag::QuasiParabolic: v = qp_impl(F, req.nu, e.n, *e.xi, e.M, o); break;
            case CaseTag::QuasiHyperbolic: v = qh_impl(F, req.nu, e.n, *e.xi, e.M, o); break;
            case CaseTag::Nilpotent: v = n_impl(F, req.nu, t.u_prime, *e.xi, e.M, o); break;
            case CaseTag::QuasiNilpotent: v = qn_impl(F, req.nu, e.n, t.u_prime, *e.xi, e.M, o); break;
            }
            e.value = v.value;
            e.err = v.err;
            e.converged = v.converged;
            if (!v.converged)
                e.error = "quadrature did not converge";
        } catch (const std::exception& ex) {
            e.value = std::nan("");
            e.err = std::nan("");
            e.converged = false;
            e.error = ex.what();
        }
    });
    return t;
}

std::string subset_label(Subset M)
{
    std::string s = "{";
    bool first = true;
    for (int e : elements(M)) {
        if (!first)
            s += ",";
        s += std::to_string(e);
        first = false;
    }
    return s + "}";
}

nlohmann::ordered_json table_to_json(const SpectralTable& t)
{
    nlohmann::ordered_json j;
    j["case"] = case_name(t.kase);
    if (t.kase.tag == CaseTag::QuasiNilpotent)
        j["k"] = t.kase.k;
    j["p"] = t.p;
    j["q"] = t.q;
    j["nu"] = t.nu;
    j["n_max"] = t.n_max;
    j["xi_grid"] = t.xi_grid;
    j["u_prime"] = t.u_prime;
    auto& arr = j["entries"] = nlohmann::ordered_json::array();
    for (const auto& e : t.entries) {
        nlohmann::ordered_json r;
        r["M"] = elements(e.M);
        r["n"] = e.n;
        if (e.xi)
            r["xi"] = *e.xi;
        r["value"] = e.value;
        r["err"] = e.err;
        r["converged"] = e.converged;
        if (!e.error.empty())
            r["error"] = e.error;
        arr.push_back(std::move(r));
    }
    return j;
}

namespace {

std::string num(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class V>
std::string joined(const V& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ' ';
        s += std::to_string(v[i]);
    }
    return s;
}

} // namespace

std::string table_to_csv(const SpectralTable& t)
{
    std::ostringstream os;
    os << "M,n,xi,value,err,converged\r\n";
    for (const auto& e : t.entries) {
        os << joined(elements(e.M)) << ',' << joined(e.n) << ',' << (e.xi ? num(*e.xi) : std::string()) << ','
           << num(e.value) << ',' << num(e.err) << ',' << (e.converged ? "true" : "false") << "\r\n";
    }
    return os.str();
}

} // namespace stz
