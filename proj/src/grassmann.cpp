#include "stz/grassmann.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "stz/errors.hpp"

namespace stz {

Subset subset_of(std::initializer_list<int> elems)
{
    return subset_of(std::vector<int>(elems));
}

Subset subset_of(const std::vector<int>& elems)
{
    Subset s = 0;
    for (int e : elems) {
        if (e < 1 || e > kMaxGenerators)
            throw DimensionError("generator index out of range: " + std::to_string(e));
        s |= Subset(1) << (e - 1);
    }
    return s;
}

std::vector<int> elements(Subset s)
{
    std::vector<int> out;
    for (int k = 0; k < kMaxGenerators; ++k)
        if (s & (Subset(1) << k))
            out.push_back(k + 1);
    return out;
}

int card(Subset s)
{
    return std::popcount(s);
}

Subset full_set(int q)
{
    return q == 0 ? 0 : (Subset(1) << q) - 1;
}

bool within(Subset s, int q)
{
    return (s & ~full_set(q)) == 0;
}

bool subset_less(Subset a, Subset b)
{
    if (card(a) != card(b))
        return card(a) < card(b);
    auto ea = elements(a);
    auto eb = elements(b);
    return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
}

std::vector<Subset> all_subsets(int q)
{
    std::vector<Subset> out;
    for (Subset s = 0; s <= full_set(q); ++s)
        out.push_back(s);
    std::sort(out.begin(), out.end(), subset_less);
    return out;
}

int sign_eps(Subset I, Subset J)
{
    if (I & J)
        return 0;
    int inversions = 0;
    for (int j = 0; j < kMaxGenerators; ++j)
        if (J & (Subset(1) << j))
            inversions += std::popcount(I >> (j + 1));
    return (inversions & 1) ? -1 : 1;
}

GrassmannElement::GrassmannElement(int q) : q_(q)
{
    if (q < 0 || q > kMaxGenerators)
        throw DimensionError("generator count out of range");
}

GrassmannElement GrassmannElement::scalar(int q, cd c)
{
    GrassmannElement e(q);
    e.add(0, 0, c);
    return e;
}

GrassmannElement GrassmannElement::monomial(int q, Subset I, Subset J, cd c)
{
    GrassmannElement e(q);
    e.add(I, J, c);
    return e;
}

cd GrassmannElement::coeff(Subset I, Subset J) const
{
    auto it = coeffs_.find({I, J});
    return it == coeffs_.end() ? cd(0.0) : it->second;
}

void GrassmannElement::add(Subset I, Subset J, cd c)
{
    if (!within(I, q_) || !within(J, q_))
        throw DimensionError("monomial uses a generator beyond q");
    coeffs_[{I, J}] += c;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o)
{
    if (o.q_ != q_)
        throw DimensionError("mismatched generator counts");
    for (const auto& [k, c] : o.coeffs_)
        coeffs_[k] += c;
    return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o)
{
    if (o.q_ != q_)
        throw DimensionError("mismatched generator counts");
    for (const auto& [k, c] : o.coeffs_)
        coeffs_[k] -= c;
    return *this;
}

GrassmannElement& GrassmannElement::operator*=(cd c)
{
    for (auto& kv : coeffs_)
        kv.second *= c;
    return *this;
}

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b)
{
    return a += b;
}

GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b)
{
    return a -= b;
}

GrassmannElement operator*(cd c, GrassmannElement a)
{
    return a *= c;
}

GrassmannElement gr_mul(const GrassmannElement& a, const GrassmannElement& b)
{
    if (a.q() != b.q())
        throw DimensionError("gr_mul: mismatched generator counts");
    GrassmannElement out(a.q());
    for (const auto& [ka, ca] : a.terms()) {
        const auto [I, J] = ka;
        for (const auto& [kb, cb] : b.terms()) {
            const auto [K, L] = kb;
            if ((I & K) || (J & L))
                continue;
            // Move xi_K left across xi_J^*, then merge both halves.
            int sign = ((card(J) * card(K)) & 1) ? -1 : 1;
            sign *= sign_eps(I, K) * sign_eps(L, J);
            out.add(I | K, J | L, double(sign) * ca * cb);
        }
    }
    return out;
}

GrassmannElement gr_star(const GrassmannElement& a)
{
    GrassmannElement out(a.q());
    for (const auto& [k, c] : a.terms())
        out.add(k.second, k.first, std::conj(c));
    return out;
}

cd berezin_top(const GrassmannElement& a)
{
    const Subset Q = full_set(a.q());
    // xi_Q^* xi_Q = (-1)^q xi_Q xi_Q^* and the former integrates to one.
    const double sign = (a.q() & 1) ? -1.0 : 1.0;
    return sign * a.coeff(Q, Q);
}

GrassmannElement expand_weight(int q, double alpha, cd base, const std::vector<cd>& c)
{
    if (int(c.size()) != q)
        throw DimensionError("expand_weight: need one pairing coefficient per generator");
    GrassmannElement out(q);
    for (Subset K = 0; K <= full_set(q); ++K) {
        const int k = card(K);
        double falling = 1.0;
        for (int j = 0; j < k; ++j)
            falling *= (alpha - j);
        if (falling == 0.0)
            continue;
        if (base == cd(0.0) && alpha - k < 0)
            throw ParameterError("expand_weight: zero base with negative power");
        cd prod = (k & 1) ? -1.0 : 1.0;
        for (int e : elements(K))
            prod *= c[e - 1];
        if (prod == cd(0.0))
            continue;
        cd power = (alpha - k == 0.0) ? cd(1.0) : std::pow(base, alpha - k);
        out.add(K, K, falling * power * prod);
    }
    return out;
}

GrassmannElement scale_odd(const GrassmannElement& a, const std::vector<cd>& lambda)
{
    if (int(lambda.size()) != a.q())
        throw DimensionError("scale_odd: need one factor per generator");
    GrassmannElement out(a.q());
    for (const auto& [k, c] : a.terms()) {
        cd f = c;
        for (int e : elements(k.first))
            f *= lambda[e - 1];
        for (int e : elements(k.second))
            f *= std::conj(lambda[e - 1]);
        out.add(k.first, k.second, f);
    }
    return out;
}

double max_abs_diff(const GrassmannElement& a, const GrassmannElement& b)
{
    double m = 0.0;
    for (const auto& [k, c] : a.terms())
        m = std::max(m, std::abs(c - b.coeff(k.first, k.second)));
    for (const auto& [k, c] : b.terms())
        m = std::max(m, std::abs(c - a.coeff(k.first, k.second)));
    return m;
}

} // namespace stz
