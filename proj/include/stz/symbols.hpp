#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stz/domains.hpp"
#include "stz/grassmann.hpp"

namespace stz {

enum class CaseTag { QuasiElliptic, QuasiParabolic, QuasiHyperbolic, Nilpotent, QuasiNilpotent };

struct MASGCase {
    CaseTag tag = CaseTag::QuasiElliptic;
    int k = 0; // only meaningful for QuasiNilpotent
};

std::string case_name(const MASGCase& c);
MASGCase parse_case(const std::string& name, int k = 1);
Domain case_domain(const MASGCase& c);
void validate_case(const MASGCase& c, int p);

// Invariant coordinates, in the order
//   quasi-elliptic   (|z_1|, ..., |z_p|)
//   quasi-parabolic  (|z_1|, ..., |z_{p-1}|, Im z_p)
//   quasi-hyperbolic (s_1, ..., s_{p-1}, arg zeta),  zeta = z_p - i|z'|^2,
//                    s_k = |z_k| / sqrt(|z'|^2 + |zeta|)
//   nilpotent        (Im z_1, ..., Im z_{p-1}, Im z_p - |z'|^2)
//   quasi-nilpotent  (|z_1|, ..., |z_k|, Im z_{k+1}, ..., Im z_{p-1}, Im z_p - |z'|^2)
std::vector<double> invariant_coords(const MASGCase& c, const BallPoint& z);
std::vector<double> invariant_coords(const MASGCase& c, const SiegelPoint& w);

// |zeta|^{-1}, the per-generator prefactor of quasi-hyperbolic symbols.
double qh_scale(const cvec& w);

struct GroupElement {
    std::vector<cd> t;     // torus part (unit modulus)
    std::vector<cd> s;     // odd torus (unit modulus), one per generator
    double h = 0.0;        // translation of Re z_p
    double r = 1.0;        // dilation
    std::vector<double> b; // Heisenberg translation
};

struct ActionResult {
    cvec point;
    std::vector<cd> odd_scale; // xi_k -> odd_scale[k] xi_k
};

GroupElement identity_element(const MASGCase& c, int p, int q);
void validate_element(const MASGCase& c, int p, int q, const GroupElement& g);
ActionResult group_action(const MASGCase& c, const GroupElement& g, const cvec& point);
// compose(g1, g2) acts as g1 after g2.
GroupElement compose(const MASGCase& c, const GroupElement& g1, const GroupElement& g2);

// sum_j c_j prod_i x_i^{a_ji} exp(-b_ji x_i)
struct ExpPolyTerm {
    double c = 1.0;
    std::vector<double> powers;
    std::vector<double> rates;
};

struct ExpPoly {
    std::vector<ExpPolyTerm> terms;

    double operator()(const std::vector<double>& x) const;
    static ExpPoly constant(int dim, double c);
};

using RealFn = std::function<double(const std::vector<double>&)>;

struct CoeffFunction {
    RealFn f;
    std::optional<ExpPoly> tag;

    double operator()(const std::vector<double>& x) const { return f(x); }

    static CoeffFunction from(ExpPoly e);
    static CoeffFunction from(RealFn f);
};

// Diagonal invariant super symbol sum_I F_I xi_I xi_I^*.
struct SuperSymbol {
    MASGCase kase;
    int p = 1;
    int q = 0;
    std::map<Subset, CoeffFunction> coeffs;

    Domain domain() const { return case_domain(kase); }
};

GrassmannElement eval_symbol(const SuperSymbol& F, const BallPoint& z);
GrassmannElement eval_symbol(const SuperSymbol& F, const SiegelPoint& w);

// Scalar function on the ball.
struct BallFunction {
    std::function<cd(const cvec&)> f;
    // axes k for which f(z) does not change under z_k -> e^{i phi} z_k
    std::vector<bool> rotation_invariant;
    // when set, f(z) = radial(|z_1|, ..., |z_p|) exactly
    std::optional<ExpPoly> radial;
};

// General super symbol on the ball, sum_{I,J} F_{I,J}(z) xi_I xi_J^*.
struct BallSuperSymbol {
    int p = 1;
    int q = 0;
    std::map<std::pair<Subset, Subset>, BallFunction> coeffs;
};

GrassmannElement eval_symbol(const BallSuperSymbol& F, const cvec& z);

// Ball-side version of an invariant symbol: quasi-elliptic symbols are copied,
// Siegel symbols are composed with the super Cayley transform.
BallSuperSymbol pullback_to_ball(const SuperSymbol& F);

BallSuperSymbol scalar_ball_symbol(int p, int q, BallFunction f);

} // namespace stz
