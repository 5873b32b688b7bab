#include <doctest.h>

#include <cmath>

#include "stz/errors.hpp"
#include "stz/presets.hpp"

using namespace stz;

namespace {

const MASGCase QE{CaseTag::QuasiElliptic, 0};
const MASGCase QP{CaseTag::QuasiParabolic, 0};
const MASGCase QH{CaseTag::QuasiHyperbolic, 0};
const MASGCase NP{CaseTag::Nilpotent, 0};
const MASGCase QN{CaseTag::QuasiNilpotent, 1};

} // namespace

TEST_SUITE("presets") {

TEST_CASE("basic presets")
{
    const auto one = make_symbol("one", QP, 2, 1);
    REQUIRE(one.coeffs.size() == 1);
    CHECK(one.coeffs.at(0)({0.3, 4.0}) == 1.0);
    CHECK(one.coeffs.at(0).tag.has_value());

    const auto odd = make_symbol("odd:1.3", QE, 1, 3);
    REQUIRE(odd.coeffs.size() == 1);
    CHECK(odd.coeffs.count(subset_of({1, 3})) == 1);

    const auto rad = make_symbol("radial:poly:2:0", QE, 2, 0);
    CHECK(rad.coeffs.at(0)({0.5, 0.9}) == doctest::Approx(0.25));

    const auto par = make_symbol("parabolic:exp:2", QP, 2, 0);
    CHECK(par.coeffs.at(0)({0.7, 0.5}) == doctest::Approx(std::exp(-1.0)));
    CHECK(make_symbol("parabolic:exp", QP, 1, 0).coeffs.at(0)({1.0}) == doctest::Approx(std::exp(-1.0)));

    const auto nexp = make_symbol("nilpotent:exp:0.5", NP, 2, 0);
    CHECK(nexp.coeffs.at(0)({9.0, 2.0}) == doctest::Approx(std::exp(-1.0)));
    const auto lin = make_symbol("nilpotent:linear:2", NP, 3, 0);
    CHECK(lin.coeffs.at(0)({1.0, -0.25, 7.0}) == doctest::Approx(-0.25));
    // quasi-nilpotent: Heisenberg coordinates follow the k radial ones
    const auto qlin = make_symbol("nilpotent:linear", QN, 3, 0);
    CHECK(qlin.coeffs.at(0)({0.5, 0.125, 7.0}) == doctest::Approx(0.125));

    const auto th = make_symbol("hyperbolic:theta", QH, 2, 0);
    CHECK(th.coeffs.at(0)({0.3, M_PI / 2.0}) == doctest::Approx(0.5));
}

TEST_CASE("random invariant symbols")
{
    for (const auto& k : {QE, QP, QH, NP, QN}) {
        const int p = k.tag == CaseTag::QuasiNilpotent ? 3 : 2;
        const auto a = make_symbol("random:5", k, p, 2);
        const auto b = random_invariant_symbol(k, p, 2, 5);
        CHECK(a.coeffs.size() == 4);
        const std::vector<double> x(p, 0.4);
        for (const auto& [I, f] : a.coeffs)
            CHECK(f(x) == b.coeffs.at(I)(x));
        const auto c = random_invariant_symbol(k, p, 2, 6);
        CHECK(c.coeffs.at(0)(x) != a.coeffs.at(0)(x));
        const auto untagged = random_invariant_symbol(k, p, 2, 5, false);
        for (const auto& [I, f] : untagged.coeffs) {
            CHECK_FALSE(f.tag.has_value());
            CHECK(f(x) == a.coeffs.at(I)(x));
        }
    }
}

TEST_CASE("ball symbols")
{
    const auto re = make_ball_symbol("nonminvariant:re-z1", QE, 2, 1);
    CHECK(is_ball_only_preset("nonminvariant:re-z1"));
    CHECK_FALSE(is_ball_only_preset("one"));
    const auto& f = re.coeffs.at({0, 0});
    CHECK(f.f({cd(0.3, 0.2), cd(0.1)}) == cd(0.3));
    CHECK_FALSE(f.rotation_invariant[0]);
    CHECK(f.rotation_invariant[1]);
    CHECK(re.coeffs.size() == 1);

    const auto one = make_ball_symbol("one", QP, 2, 0);
    CHECK(std::abs(one.coeffs.at({0, 0}).f({cd(0.1), cd(-0.2, 0.3)}) - 1.0) < 1e-15);
    CHECK_THROWS_AS(make_symbol("nonminvariant:re-z1", QE, 1, 0), ParameterError);
    CHECK_THROWS_AS(make_ball_symbol("nonminvariant:im-z1", QE, 1, 0), ParameterError);
}

TEST_CASE("malformed presets")
{
    for (const char* bad : {"", "two", "one:1", "odd", "odd:", "odd:0", "odd:4", "odd:1.x", "radial:poly:1",
                            "radial:poly:1:2:3", "radial:poly:-1:0", "radial:exp:1:1", "random", "random:-1",
                            "random:1.5", "random:x"})
        CHECK_THROWS_AS(make_symbol(bad, QE, 2, 3), ParameterError);
    CHECK_THROWS_AS(make_symbol("parabolic:exp", QE, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("parabolic:lin", QP, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("parabolic:exp:-1", QP, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("parabolic:exp:1:2", QP, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("nilpotent:linear:2", NP, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("nilpotent:linear:0", NP, 3, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("nilpotent:linear:2", QN, 3, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("nilpotent:cubic", NP, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("hyperbolic:theta", QP, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("hyperbolic:phi", QH, 2, 0), ParameterError);
    CHECK_THROWS_AS(make_symbol("one", QP, 1, -1), ParameterError);
    CHECK_THROWS_AS(make_symbol("one", QN, 2, 0), ParameterError);
}

TEST_CASE("random points and polynomials")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const cvec z = random_ball_point(3, rng, 0.5);
        CHECK(dot_conj(z, z).real() < 0.25);
    }
    const auto psi = random_super_polynomial(2, 1, 3, rng);
    CHECK(psi.terms().size() == 2 * 10);
}

} // TEST_SUITE
