#include "stz/presets.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "stz/errors.hpp"

namespace stz {

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!s.empty() && s.back() == sep)
        out.push_back("");
    return out;
}

double parse_double(const std::string& s, const std::string& preset)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty() || !std::isfinite(v))
        throw ParameterError("bad number '" + s + "' in symbol preset " + preset);
    return v;
}

int parse_int(const std::string& s, const std::string& preset)
{
    const double v = parse_double(s, preset);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw ParameterError("expected an integer, got '" + s + "' in symbol preset " + preset);
    return int(v);
}

void require_case(const MASGCase& kase, std::initializer_list<CaseTag> ok, const std::string& preset)
{
    for (CaseTag t : ok)
        if (kase.tag == t)
            return;
    throw ParameterError("symbol preset " + preset + " does not belong to the " + case_name(kase) + " case");
}

ExpPolyTerm single(int p, double c)
{
    return {c, std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
}

SuperSymbol base(const MASGCase& kase, int p, int q)
{
    validate_case(kase, p);
    if (q < 0 || q > kMaxGenerators)
        throw ParameterError("q out of range");
    SuperSymbol F;
    F.kase = kase;
    F.p = p;
    F.q = q;
    return F;
}

// index of the first Heisenberg coordinate in the invariant coordinate tuple
int heis_start(const MASGCase& kase)
{
    return kase.tag == CaseTag::QuasiNilpotent ? kase.k : 0;
}

} // namespace

bool is_ball_only_preset(const std::string& preset)
{
    return preset.rfind("nonminvariant:", 0) == 0;
}

SuperSymbol make_symbol(const std::string& preset, const MASGCase& kase, int p, int q)
{
    SuperSymbol F = base(kase, p, q);
    const auto parts = split(preset, ':');
    if (parts.empty() || parts[0].empty())
        throw ParameterError("empty symbol preset");
    const std::string& head = parts[0];
    auto nparams = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() < lo || parts.size() > hi)
            throw ParameterError("wrong number of parameters in symbol preset " + preset);
    };

    if (head == "one") {
        nparams(1, 1);
        F.coeffs[0] = CoeffFunction::from(ExpPoly::constant(p, 1.0));
        return F;
    }
    if (head == "odd") {
        nparams(2, 2);
        std::vector<int> el;
        if (parts[1].empty())
            throw ParameterError("odd preset needs at least one generator index: " + preset);
        for (const auto& s : split(parts[1], '.')) {
            const int i = parse_int(s, preset);
            if (i < 1 || i > q)
                throw ParameterError("generator index out of range in symbol preset " + preset);
            el.push_back(i);
        }
        F.coeffs[subset_of(el)] = CoeffFunction::from(ExpPoly::constant(p, 1.0));
        return F;
    }
    if (head == "radial") {
        require_case(kase, {CaseTag::QuasiElliptic}, preset);
        if (parts.size() != std::size_t(p) + 2 || parts[1] != "poly")
            throw ParameterError("radial:poly needs exactly p exponents: " + preset);
        ExpPolyTerm t = single(p, 1.0);
        for (int k = 0; k < p; ++k) {
            t.powers[k] = parse_double(parts[k + 2], preset);
            if (t.powers[k] < 0.0)
                throw ParameterError("radial exponents must be non-negative: " + preset);
        }
        F.coeffs[0] = CoeffFunction::from(ExpPoly{{t}});
        return F;
    }
    if (head == "parabolic") {
        require_case(kase, {CaseTag::QuasiParabolic}, preset);
        nparams(2, 3);
        if (parts[1] != "exp")
            throw ParameterError("unknown parabolic preset: " + preset);
        const double b = parts.size() == 3 ? parse_double(parts[2], preset) : 1.0;
        if (b < 0.0)
            throw ParameterError("rate must be non-negative: " + preset);
        ExpPolyTerm t = single(p, 1.0);
        t.rates[p - 1] = b;
        F.coeffs[0] = CoeffFunction::from(ExpPoly{{t}});
        return F;
    }
    if (head == "nilpotent") {
        require_case(kase, {CaseTag::Nilpotent, CaseTag::QuasiNilpotent}, preset);
        nparams(2, 3);
        ExpPolyTerm t = single(p, 1.0);
        if (parts[1] == "exp") {
            const double b = parts.size() == 3 ? parse_double(parts[2], preset) : 1.0;
            if (b < 0.0)
                throw ParameterError("rate must be non-negative: " + preset);
            t.rates[p - 1] = b;
        } else if (parts[1] == "linear") {
            const int j = parts.size() == 3 ? parse_int(parts[2], preset) : 1;
            const int first = heis_start(kase);
            const int count = p - 1 - first;
            if (j < 1 || j > count)
                throw ParameterError("Heisenberg coordinate index out of range: " + preset);
            t.powers[first + j - 1] = 1.0;
        } else {
            throw ParameterError("unknown nilpotent preset: " + preset);
        }
        F.coeffs[0] = CoeffFunction::from(ExpPoly{{t}});
        return F;
    }
    if (head == "hyperbolic") {
        require_case(kase, {CaseTag::QuasiHyperbolic}, preset);
        nparams(2, 2);
        if (parts[1] != "theta")
            throw ParameterError("unknown hyperbolic preset: " + preset);
        ExpPolyTerm t = single(p, 1.0 / M_PI);
        t.powers[p - 1] = 1.0;
        F.coeffs[0] = CoeffFunction::from(ExpPoly{{t}});
        return F;
    }
    if (head == "random") {
        nparams(2, 2);
        const double s = parse_double(parts[1], preset);
        if (s < 0.0 || s != std::floor(s))
            throw ParameterError("random seed must be a non-negative integer: " + preset);
        return random_invariant_symbol(kase, p, q, std::uint64_t(s));
    }
    if (is_ball_only_preset(preset))
        throw ParameterError("symbol preset " + preset + " is not invariant; it only exists as a ball symbol");
    throw ParameterError("unknown symbol preset: " + preset);
}

BallSuperSymbol make_ball_symbol(const std::string& preset, const MASGCase& kase, int p, int q)
{
    if (is_ball_only_preset(preset)) {
        if (preset != "nonminvariant:re-z1")
            throw ParameterError("unknown symbol preset: " + preset);
        if (q < 0 || q > kMaxGenerators || p < 1)
            throw ParameterError("bad dimensions");
        BallFunction f;
        f.f = [](const cvec& z) { return cd(z[0].real()); };
        f.rotation_invariant.assign(p, true);
        f.rotation_invariant[0] = false;
        return scalar_ball_symbol(p, q, f);
    }
    return pullback_to_ball(make_symbol(preset, kase, p, q));
}

SuperSymbol random_invariant_symbol(const MASGCase& kase, int p, int q, std::uint64_t seed, bool tagged)
{
    SuperSymbol F = base(kase, p, q);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0), pos(0.5, 2.0);
    std::uniform_int_distribution<int> pick(0, 2);
    for (Subset I : all_subsets(q)) {
        switch (kase.tag) {
        case CaseTag::QuasiElliptic: {
            ExpPoly e;
            e.terms.push_back(single(p, 1.0 + 0.5 * U(rng)));
            for (int j = 0; j < 3; ++j) {
                ExpPolyTerm t = single(p, U(rng));
                for (int k = 0; k < p; ++k)
                    t.powers[k] = 2.0 * pick(rng);
                e.terms.push_back(t);
            }
            F.coeffs[I] = tagged ? CoeffFunction::from(e) : CoeffFunction::from(RealFn([e](const std::vector<double>& x) { return e(x); }));
            break;
        }
        case CaseTag::QuasiParabolic: {
            ExpPoly e;
            for (int j = 0; j < 2; ++j) {
                ExpPolyTerm t = single(p, U(rng));
                for (int k = 0; k + 1 < p; ++k)
                    t.powers[k] = 2.0 * (pick(rng) % 2);
                t.powers[p - 1] = pick(rng);
                t.rates[p - 1] = pos(rng);
                e.terms.push_back(t);
            }
            F.coeffs[I] = tagged ? CoeffFunction::from(e) : CoeffFunction::from(RealFn([e](const std::vector<double>& x) { return e(x); }));
            break;
        }
        case CaseTag::QuasiHyperbolic: {
            ExpPoly e;
            for (int j = 0; j < 2; ++j) {
                ExpPolyTerm t = single(p, U(rng));
                for (int k = 0; k + 1 < p; ++k)
                    t.powers[k] = 2.0 * (pick(rng) % 2);
                t.powers[p - 1] = pick(rng) % 2;
                t.rates[p - 1] = 0.5 * pos(rng);
                e.terms.push_back(t);
            }
            F.coeffs[I] = tagged ? CoeffFunction::from(e) : CoeffFunction::from(RealFn([e](const std::vector<double>& x) { return e(x); }));
            break;
        }
        case CaseTag::Nilpotent:
        case CaseTag::QuasiNilpotent: {
            const double b = pos(rng), y0 = U(rng), c = U(rng), rho = 0.5 * U(rng);
            const int first = heis_start(kase);
            const bool has_heis = p - 1 - first > 0;
            F.coeffs[I] = CoeffFunction::from(RealFn([=](const std::vector<double>& x) {
                double v = c * std::exp(-b * x[p - 1]);
                if (has_heis)
                    v /= 1.0 + (x[first] - y0) * (x[first] - y0);
                for (int k = 0; k < first; ++k)
                    v *= 1.0 + rho * x[k] * x[k];
                return v;
            }));
            break;
        }
        }
    }
    return F;
}

cvec random_ball_point(int p, std::mt19937_64& rng, double rmax)
{
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    cvec z(p);
    double s = 0.0;
    for (auto& x : z) {
        x = cd(nd(rng), nd(rng));
        s += std::norm(x);
    }
    const double r = rmax * u(rng) / std::sqrt(s);
    for (auto& x : z)
        x *= r;
    return z;
}

SuperPolynomial random_super_polynomial(int p, int q, int degree, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SuperPolynomial psi(p, q);
    for (Subset M : all_subsets(q))
        for (const auto& n : multi_indices(p, degree))
            psi.add(M, n, cd(U(rng), U(rng)));
    return psi;
}

} // namespace stz
