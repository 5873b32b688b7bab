#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace stz {

using cd = std::complex<double>;

// Subset of {1,...,q} stored as a bitmask; bit k-1 stands for generator k.
using Subset = std::uint32_t;

constexpr int kMaxGenerators = 16;

Subset subset_of(std::initializer_list<int> elems);
Subset subset_of(const std::vector<int>& elems);
std::vector<int> elements(Subset s);
int card(Subset s);
Subset full_set(int q);
bool within(Subset s, int q);

// Ordering used everywhere a list of subsets is needed: size first, then
// lexicographic on the ascending element lists.
bool subset_less(Subset a, Subset b);
std::vector<Subset> all_subsets(int q);

int sign_eps(Subset I, Subset J);

// Finite sum of terms c * xi_I xi_J^*, where xi_J^* = conj(xi_{j_l}) ... conj(xi_{j_1}).
class GrassmannElement {
public:
    using Key = std::pair<Subset, Subset>;

    explicit GrassmannElement(int q = 0);

    static GrassmannElement scalar(int q, cd c);
    static GrassmannElement monomial(int q, Subset I, Subset J, cd c = 1.0);

    int q() const { return q_; }
    cd coeff(Subset I, Subset J) const;
    void add(Subset I, Subset J, cd c);
    const std::map<Key, cd>& terms() const { return coeffs_; }

    GrassmannElement& operator+=(const GrassmannElement& o);
    GrassmannElement& operator-=(const GrassmannElement& o);
    GrassmannElement& operator*=(cd c);

private:
    int q_;
    std::map<Key, cd> coeffs_;
};

GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b);
GrassmannElement operator*(cd c, GrassmannElement a);

GrassmannElement gr_mul(const GrassmannElement& a, const GrassmannElement& b);
GrassmannElement gr_star(const GrassmannElement& a);
cd berezin_top(const GrassmannElement& a);

// (base - sum_k c_k xi_k conj(xi_k))^alpha, expanded until nilpotency ends it.
GrassmannElement expand_weight(int q, double alpha, cd base, const std::vector<cd>& c);

// Substitutes xi_k -> lambda_k xi_k (and conj(xi_k) -> conj(lambda_k) conj(xi_k)).
GrassmannElement scale_odd(const GrassmannElement& a, const std::vector<cd>& lambda);

double max_abs_diff(const GrassmannElement& a, const GrassmannElement& b);

} // namespace stz
