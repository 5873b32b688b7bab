#include "stz/symbols.hpp"

#include <cmath>

#include "stz/errors.hpp"

namespace stz {

namespace {

const cd I(0.0, 1.0);

void check_unit(const std::vector<cd>& v, const char* what)
{
    for (const auto& x : v)
        if (std::abs(std::abs(x) - 1.0) > 1e-12)
            throw ParameterError(std::string(what) + ": torus parameter must have unit modulus");
}

void check_size(std::size_t got, std::size_t want, const char* what)
{
    if (got != want)
        throw DimensionError(std::string(what) + ": parameter has wrong length");
}

std::vector<cd> times(const std::vector<cd>& a, const std::vector<cd>& b)
{
    std::vector<cd> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] * b[i];
    return r;
}

std::vector<double> plus(const std::vector<double>& a, const std::vector<double>& b)
{
    std::vector<double> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = a[i] + b[i];
    return r;
}

// number of leading coordinates acted on by the torus, and of Heisenberg coordinates
std::pair<int, int> torus_heis_sizes(const MASGCase& c, int p)
{
    switch (c.tag) {
    case CaseTag::QuasiElliptic: return {p, 0};
    case CaseTag::QuasiParabolic: return {p - 1, 0};
    case CaseTag::QuasiHyperbolic: return {p - 1, 0};
    case CaseTag::Nilpotent: return {0, p - 1};
    case CaseTag::QuasiNilpotent: return {c.k, p - 1 - c.k};
    }
    return {0, 0};
}

} // namespace

std::string case_name(const MASGCase& c)
{
    switch (c.tag) {
    case CaseTag::QuasiElliptic: return "quasi-elliptic";
    case CaseTag::QuasiParabolic: return "quasi-parabolic";
    case CaseTag::QuasiHyperbolic: return "quasi-hyperbolic";
    case CaseTag::Nilpotent: return "nilpotent";
    case CaseTag::QuasiNilpotent: return "quasi-nilpotent";
    }
    return "?";
}

MASGCase parse_case(const std::string& name, int k)
{
    if (name == "quasi-elliptic")
        return {CaseTag::QuasiElliptic, 0};
    if (name == "quasi-parabolic")
        return {CaseTag::QuasiParabolic, 0};
    if (name == "quasi-hyperbolic")
        return {CaseTag::QuasiHyperbolic, 0};
    if (name == "nilpotent")
        return {CaseTag::Nilpotent, 0};
    if (name == "quasi-nilpotent")
        return {CaseTag::QuasiNilpotent, k};
    throw ParameterError("unknown case: " + name);
}

Domain case_domain(const MASGCase& c)
{
    return c.tag == CaseTag::QuasiElliptic ? Domain::Ball : Domain::Siegel;
}

void validate_case(const MASGCase& c, int p)
{
    if (p < 1)
        throw ParameterError("p must be at least 1");
    if (c.tag == CaseTag::QuasiNilpotent && (c.k < 1 || c.k > p - 2))
        throw ParameterError("quasi-nilpotent case needs 1 <= k <= p-2");
}

std::vector<double> invariant_coords(const MASGCase& c, const BallPoint& z)
{
    if (c.tag != CaseTag::QuasiElliptic)
        throw DomainError(case_name(c) + " coordinates live on the Siegel domain");
    if (!z.interior)
        throw DomainError("invariant_coords: point not interior");
    std::vector<double> r(z.z.size());
    for (std::size_t k = 0; k < r.size(); ++k)
        r[k] = std::abs(z.z[k]);
    return r;
}

double qh_scale(const cvec& w)
{
    const cd zeta = w.back() - I * (norm_sq(w) - std::norm(w.back()));
    return 1.0 / std::abs(zeta);
}

std::vector<double> invariant_coords(const MASGCase& c, const SiegelPoint& w)
{
    if (c.tag == CaseTag::QuasiElliptic)
        throw DomainError("quasi-elliptic coordinates live on the ball");
    if (!w.interior)
        throw DomainError("invariant_coords: point not interior");
    const int p = int(w.w.size());
    validate_case(c, p);
    const cvec& x = w.w;
    double zp2 = 0.0; // |z'|^2
    for (int k = 0; k + 1 < p; ++k)
        zp2 += std::norm(x[k]);
    const double v = x[p - 1].imag() - zp2;
    std::vector<double> out;
    switch (c.tag) {
    case CaseTag::QuasiParabolic:
        for (int k = 0; k + 1 < p; ++k)
            out.push_back(std::abs(x[k]));
        out.push_back(x[p - 1].imag());
        break;
    case CaseTag::QuasiHyperbolic: {
        const cd zeta = x[p - 1] - I * zp2;
        const double rr = zp2 + std::abs(zeta);
        for (int k = 0; k + 1 < p; ++k)
            out.push_back(std::abs(x[k]) / std::sqrt(rr));
        out.push_back(std::arg(zeta));
        break;
    }
    case CaseTag::Nilpotent:
        for (int k = 0; k + 1 < p; ++k)
            out.push_back(x[k].imag());
        out.push_back(v);
        break;
    case CaseTag::QuasiNilpotent:
        for (int k = 0; k < c.k; ++k)
            out.push_back(std::abs(x[k]));
        for (int k = c.k; k + 1 < p; ++k)
            out.push_back(x[k].imag());
        out.push_back(v);
        break;
    default:
        break;
    }
    return out;
}

GroupElement identity_element(const MASGCase& c, int p, int q)
{
    const auto [nt, nb] = torus_heis_sizes(c, p);
    GroupElement g;
    g.t.assign(nt, 1.0);
    g.s.assign(q, 1.0);
    g.b.assign(nb, 0.0);
    return g;
}

void validate_element(const MASGCase& c, int p, int q, const GroupElement& g)
{
    const auto [nt, nb] = torus_heis_sizes(c, p);
    check_size(g.t.size(), nt, "group element t");
    check_size(g.s.size(), q, "group element s");
    check_size(g.b.size(), nb, "group element b");
    check_unit(g.t, "group element t");
    check_unit(g.s, "group element s");
    if (!(g.r > 0.0))
        throw ParameterError("dilation parameter must be positive");
    if (c.tag != CaseTag::QuasiHyperbolic && g.r != 1.0)
        throw ParameterError("dilation only belongs to the quasi-hyperbolic group");
    if ((c.tag == CaseTag::QuasiElliptic || c.tag == CaseTag::QuasiHyperbolic) && g.h != 0.0)
        throw ParameterError("translation does not belong to this group");
}

ActionResult group_action(const MASGCase& c, const GroupElement& g, const cvec& point)
{
    const int p = int(point.size());
    validate_case(c, p);
    validate_element(c, p, int(g.s.size()), g);
    ActionResult res{point, g.s};
    cvec& z = res.point;
    switch (c.tag) {
    case CaseTag::QuasiElliptic:
        for (int k = 0; k < p; ++k)
            z[k] *= g.t[k];
        break;
    case CaseTag::QuasiParabolic:
        for (int k = 0; k + 1 < p; ++k)
            z[k] *= g.t[k];
        z[p - 1] += g.h;
        break;
    case CaseTag::QuasiHyperbolic: {
        const double sr = std::sqrt(g.r);
        for (int k = 0; k + 1 < p; ++k)
            z[k] *= sr * g.t[k];
        z[p - 1] *= g.r;
        for (auto& s : res.odd_scale)
            s *= sr;
        break;
    }
    case CaseTag::Nilpotent:
    case CaseTag::QuasiNilpotent: {
        const int k0 = c.tag == CaseTag::Nilpotent ? 0 : c.k;
        for (int k = 0; k < k0; ++k)
            z[k] *= g.t[k];
        cd shift = g.h;
        for (int k = k0; k + 1 < p; ++k) {
            const double b = g.b[k - k0];
            shift += 2.0 * I * point[k] * b + I * b * b;
            z[k] += b;
        }
        z[p - 1] += shift;
        break;
    }
    }
    return res;
}

GroupElement compose(const MASGCase& c, const GroupElement& g1, const GroupElement& g2)
{
    GroupElement g;
    g.t = times(g1.t, g2.t);
    g.s = times(g1.s, g2.s);
    g.r = g1.r * g2.r;
    g.h = g1.h + g2.h;
    g.b = plus(g1.b, g2.b);
    (void)c;
    return g;
}

double ExpPoly::operator()(const std::vector<double>& x) const
{
    double s = 0.0;
    for (const auto& t : terms) {
        double v = t.c;
        for (std::size_t i = 0; i < t.powers.size(); ++i)
            if (t.powers[i] != 0.0)
                v *= std::pow(x[i], t.powers[i]);
        double e = 0.0;
        for (std::size_t i = 0; i < t.rates.size(); ++i)
            e += t.rates[i] * x[i];
        if (e != 0.0)
            v *= std::exp(-e);
        s += v;
    }
    return s;
}

ExpPoly ExpPoly::constant(int dim, double c)
{
    ExpPoly e;
    e.terms.push_back({c, std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)});
    return e;
}

CoeffFunction CoeffFunction::from(ExpPoly e)
{
    CoeffFunction cf;
    cf.f = [e](const std::vector<double>& x) { return e(x); };
    cf.tag = std::move(e);
    return cf;
}

CoeffFunction CoeffFunction::from(RealFn f)
{
    CoeffFunction cf;
    cf.f = std::move(f);
    return cf;
}

namespace {

GrassmannElement assemble_diagonal(const SuperSymbol& F, const std::vector<double>& coords, double odd_scale)
{
    GrassmannElement g(F.q);
    for (const auto& [I, fn] : F.coeffs)
        g.add(I, I, fn(coords) * std::pow(odd_scale, card(I)));
    return g;
}

} // namespace

GrassmannElement eval_symbol(const SuperSymbol& F, const BallPoint& z)
{
    return assemble_diagonal(F, invariant_coords(F.kase, z), 1.0);
}

GrassmannElement eval_symbol(const SuperSymbol& F, const SiegelPoint& w)
{
    const double scale = F.kase.tag == CaseTag::QuasiHyperbolic ? qh_scale(w.w) : 1.0;
    return assemble_diagonal(F, invariant_coords(F.kase, w), scale);
}

GrassmannElement eval_symbol(const BallSuperSymbol& F, const cvec& z)
{
    GrassmannElement g(F.q);
    for (const auto& [key, fn] : F.coeffs)
        g.add(key.first, key.second, fn.f(z));
    return g;
}

BallSuperSymbol scalar_ball_symbol(int p, int q, BallFunction f)
{
    BallSuperSymbol s;
    s.p = p;
    s.q = q;
    s.coeffs[{0, 0}] = std::move(f);
    return s;
}

BallSuperSymbol pullback_to_ball(const SuperSymbol& F)
{
    validate_case(F.kase, F.p);
    BallSuperSymbol G;
    G.p = F.p;
    G.q = F.q;
    const MASGCase kase = F.kase;
    for (const auto& [I, fn] : F.coeffs) {
        BallFunction bf;
        bf.rotation_invariant.assign(F.p, false);
        if (kase.tag == CaseTag::QuasiElliptic) {
            bf.rotation_invariant.assign(F.p, true);
            bf.radial = fn.tag;
            bf.f = [fn](const cvec& z) {
                std::vector<double> r(z.size());
                for (std::size_t k = 0; k < z.size(); ++k)
                    r[k] = std::abs(z[k]);
                return cd(fn(r));
            };
        } else {
            const int ninv = kase.tag == CaseTag::Nilpotent         ? 0
                             : kase.tag == CaseTag::QuasiNilpotent ? kase.k
                                                                     : F.p - 1;
            for (int k = 0; k < ninv; ++k)
                bf.rotation_invariant[k] = true;
            const int m = card(I);
            bf.f = [fn, kase, m](const cvec& z) {
                const SiegelPoint w = cayley(ball_point(z, 0.0));
                double pref = 1.0 / std::pow(std::norm(1.0 + z.back()), m);
                if (kase.tag == CaseTag::QuasiHyperbolic)
                    pref *= std::pow(qh_scale(w.w), m);
                return cd(fn(invariant_coords(kase, w)) * pref);
            };
        }
        G.coeffs[{I, I}] = std::move(bf);
    }
    return G;
}

} // namespace stz
