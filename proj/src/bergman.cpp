#include "stz/bergman.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "stz/errors.hpp"

namespace stz {

int degree(const MultiIndex& n)
{
    return std::accumulate(n.begin(), n.end(), 0);
}

double log_factorial(const MultiIndex& n)
{
    double s = 0.0;
    for (int k : n)
        s += std::lgamma(k + 1.0);
    return s;
}

std::vector<MultiIndex> multi_indices(int p, int n_max)
{
    std::vector<MultiIndex> out;
    if (p == 0) {
        out.push_back({});
        return out;
    }
    for (int d = 0; d <= n_max; ++d) {
        MultiIndex n(p, 0);
        // enumerate compositions of d into p parts in lexicographic order
        std::function<void(int, int)> rec = [&](int k, int left) {
            if (k == p - 1) {
                n[k] = left;
                out.push_back(n);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                n[k] = v;
                rec(k + 1, left - v);
            }
        };
        rec(0, d);
    }
    return out;
}

cd monomial(const cvec& z, const MultiIndex& n)
{
    if (z.size() != n.size())
        throw DimensionError("monomial: exponent length mismatch");
    cd r = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k)
        for (int j = 0; j < n[k]; ++j)
            r *= z[k];
    return r;
}

void WeightedSpaceSpec::validate() const
{
    if (p < 1)
        throw ParameterError("p must be at least 1");
    if (q < 0 || q > kMaxGenerators)
        throw ParameterError("q out of range");
    if (!(nu > p - q + 1))
        throw ParameterError("nu must exceed p - q + 1");
}

double WeightedSpaceSpec::level(Subset M) const
{
    const double l = nu + card(M);
    if (!(l > p))
        throw ParameterError("level nu + |M| must exceed p");
    return l;
}

double log_monomial_norm_sq(double nu, int p, const MultiIndex& n)
{
    if (!(nu > p))
        throw ParameterError("monomial_norm_sq: nu must exceed p");
    if (int(n.size()) != p)
        throw DimensionError("monomial_norm_sq: multi-index length differs from p");
    return log_factorial(n) + std::lgamma(nu) - std::lgamma(degree(n) + nu);
}

double monomial_norm_sq(double nu, int p, const MultiIndex& n)
{
    return std::exp(log_monomial_norm_sq(nu, p, n));
}

cd guarded_pow(cd base, double exponent)
{
    if (!(base.real() > 0.0))
        throw BranchError("complex power base has non-positive real part");
    return std::pow(base, exponent);
}

cd kernel_ball(double nu, const cvec& z, const cvec& w)
{
    return guarded_pow(1.0 - dot_conj(z, w), -nu);
}

cd kernel_siegel(double nu, const cvec& w, const cvec& v)
{
    if (w.size() != v.size() || w.empty())
        throw DimensionError("kernel_siegel: dimension mismatch");
    const std::size_t p = w.size();
    cd base = (w[p - 1] - std::conj(v[p - 1])) / cd(0.0, 2.0);
    for (std::size_t k = 0; k + 1 < p; ++k)
        base -= w[k] * std::conj(v[k]);
    return guarded_pow(base, -nu);
}

GrassmannElement super_kernel(const WeightedSpaceSpec& spec, const SuperPoint& Z, const SuperPoint& W)
{
    if (int(Z.odd.size()) != spec.q || int(W.odd.size()) != spec.q)
        throw DimensionError("super_kernel: odd slots must have q entries");
    const cd base = 1.0 - dot_conj(Z.even, W.even);
    if (!(base.real() > 0.0))
        throw BranchError("super_kernel: base has non-positive real part");
    std::vector<cd> c(spec.q);
    for (int k = 0; k < spec.q; ++k)
        c[k] = Z.odd[k] * std::conj(W.odd[k]);
    return expand_weight(spec.q, -spec.nu, base, c);
}

void SuperPolynomial::add(Subset M, const MultiIndex& n, cd c)
{
    if (!within(M, q_))
        throw DimensionError("SuperPolynomial: subset uses a generator beyond q");
    if (int(n.size()) != p_ || std::any_of(n.begin(), n.end(), [](int v) { return v < 0; }))
        throw DimensionError("SuperPolynomial: bad multi-index");
    terms_[{M, n}] += c;
}

cd SuperPolynomial::coeff(Subset M, const MultiIndex& n) const
{
    auto it = terms_.find({M, n});
    return it == terms_.end() ? cd(0.0) : it->second;
}

int SuperPolynomial::max_degree() const
{
    int d = 0;
    for (const auto& [k, c] : terms_)
        d = std::max(d, degree(k.second));
    return d;
}

cd SuperPolynomial::component(Subset M, const cvec& z) const
{
    cd s = 0.0;
    for (const auto& [k, c] : terms_)
        if (k.first == M)
            s += c * monomial(z, k.second);
    return s;
}

GrassmannElement SuperPolynomial::evaluate(const SuperPoint& Z) const
{
    if (int(Z.odd.size()) != q_ || int(Z.even.size()) != p_)
        throw DimensionError("SuperPolynomial::evaluate: point has wrong dimensions");
    GrassmannElement out(q_);
    for (const auto& [k, c] : terms_) {
        cd v = c * monomial(Z.even, k.second);
        for (int e : elements(k.first))
            v *= Z.odd[e - 1];
        out.add(k.first, 0, v);
    }
    return out;
}

GrassmannElement SuperPolynomial::evaluate(const cvec& z) const
{
    return evaluate(SuperPoint{z, cvec(q_, 1.0)});
}

cd super_inner_product(const WeightedSpaceSpec& spec, const SuperPolynomial& phi, const SuperPolynomial& psi)
{
    if (phi.p() != spec.p || psi.p() != spec.p || phi.q() != spec.q || psi.q() != spec.q)
        throw DimensionError("super_inner_product: dimensions differ from the space");
    cd s = 0.0;
    for (const auto& [k, c] : phi.terms()) {
        const cd d = psi.coeff(k.first, k.second);
        if (d == cd(0.0))
            continue;
        const double lev = spec.level(k.first);
        const double lw = std::lgamma(spec.nu) - std::lgamma(lev) + log_monomial_norm_sq(lev, spec.p, k.second);
        s += std::conj(c) * d * std::exp(lw);
    }
    return s;
}

double reproduce_check(const WeightedSpaceSpec& spec, const SuperPolynomial& psi, const cvec& z)
{
    if (int(z.size()) != spec.p)
        throw DimensionError("reproduce_check: point has wrong dimension");
    if (!(norm_sq(z) < 1.0))
        throw DomainError("reproduce_check: point not interior");
    // Coefficients of xi_M conj(omega_M) in (1 - z conj(w) - xi conj(omega))^{-nu}.
    const GrassmannElement a = expand_weight(spec.q, -spec.nu, 1.0, std::vector<cd>(spec.q, 1.0));
    const int d = psi.max_degree();
    double worst = 0.0;
    for (Subset M : all_subsets(spec.q)) {
        const double lev = spec.level(M);
        SuperPolynomial kz(spec.p, spec.q);
        const cvec zc = [&] {
            cvec v(z.size());
            for (std::size_t k = 0; k < z.size(); ++k)
                v[k] = std::conj(z[k]);
            return v;
        }();
        for (const auto& n : multi_indices(spec.p, d)) {
            // (1 - w conj(z))^{-lev} = sum_n conj(z)^n w^n / ||w^n||^2_lev
            kz.add(M, n, a.coeff(M, M) * monomial(zc, n) / monomial_norm_sq(lev, spec.p, n));
        }
        const cd val = super_inner_product(spec, kz, psi);
        worst = std::max(worst, std::abs(val - psi.component(M, z)));
    }
    return worst;
}

GrassmannElement u_nu_apply(const WeightedSpaceSpec& spec, const SuperPolynomial& psi, const SiegelPoint& w)
{
    const BallPoint z = cayley_inv(w);
    const cd f = 2.0 / (1.0 - cd(0.0, 1.0) * w.w.back());
    // Odd coordinates of the preimage are -2i omega_k / (1 - i w_p) = -i f omega_k.
    SuperPoint Z{z.z, cvec(spec.q, cd(0.0, -1.0) * f)};
    return guarded_pow(f, spec.nu) * psi.evaluate(Z);
}

} // namespace stz
