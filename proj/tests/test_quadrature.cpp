#include <doctest.h>

#include <cmath>
#include <numeric>

#include "stz/errors.hpp"
#include "stz/quadrature.hpp"

using namespace stz;

namespace {

double beta_fn(double a, double b)
{
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

} // namespace

TEST_SUITE("quadrature") {

TEST_CASE("Gauss-Jacobi")
{
    const auto r1 = gauss_jacobi(1, 0.0, 0.0);
    REQUIRE(r1.size() == 1);
    CHECK(r1.nodes[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(integrate(gauss_jacobi(2, 2.0, 1.0), [](double) { return 1.0; }) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(integrate(gauss_jacobi(3, 0.0, 0.0), [](double t) { return std::pow(t, 5); })
          == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    for (auto [a, b] : {std::pair{0.0, 0.0}, {0.5, -0.5}, {2.3, 1.7}, {-0.9, 4.0}})
        for (int m : {1, 4, 9, 24}) {
            const auto r = gauss_jacobi(m, a, b);
            CHECK(r.exactness == 2 * m - 1);
            for (double w : r.weights)
                CHECK(w > 0.0);
            for (int d = 0; d <= 2 * m - 1; ++d) {
                const double exact = beta_fn(d + b + 1.0, a + 1.0);
                const double got = integrate(r, [d](double t) { return std::pow(t, d); });
                REQUIRE(got == doctest::Approx(exact).epsilon(1e-13));
            }
        }
    CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), ParameterError);
    CHECK_THROWS_AS(gauss_jacobi(3, -1.0, 0.0), ParameterError);
}

TEST_CASE("generalized Gauss-Laguerre")
{
    CHECK(integrate(gauss_laguerre_gen(1, 0.0, 1.0), [](double) { return 1.0; }) == doctest::Approx(1.0));
    CHECK(integrate(gauss_laguerre_gen(8, 2.0, 1.0), [](double) { return 1.0; }) == doctest::Approx(2.0).epsilon(1e-14));
    for (auto [a, s] : {std::pair{0.0, 1.0}, {1.5, 0.3}, {-0.5, 7.0}, {3.0, 2.0}})
        for (int m : {2, 6, 20}) {
            const auto r = gauss_laguerre_gen(m, a, s);
            for (int d = 0; d <= 2 * m - 1; ++d) {
                const double exact = std::exp(std::lgamma(a + d + 1.0) - (a + d + 1.0) * std::log(s));
                REQUIRE(integrate(r, [d](double v) { return std::pow(v, d); })
                        == doctest::Approx(exact).epsilon(1e-13));
            }
        }
    CHECK_THROWS_AS(gauss_laguerre_gen(4, 0.0, 0.0), ParameterError);
}

TEST_CASE("Gauss-Hermite")
{
    for (int m : {1, 5, 16, 40}) {
        const auto r = gauss_hermite(m);
        for (int d = 0; d <= 2 * m - 1 && d <= 30; ++d) {
            const double exact = (d % 2) ? 0.0 : std::tgamma((d + 1) / 2.0);
            const double scale = integrate(r, [d](double x) { return std::pow(std::abs(x), d); });
            const double got = integrate(r, [d](double x) { return std::pow(x, d); });
            REQUIRE(std::abs(got - exact) <= 1e-14 * (d + 1) * scale);
        }
    }
}

TEST_CASE("simplex Dirichlet rules")
{
    const auto r1 = simplex_dirichlet(5, 1, {0.5, 1.5});
    const auto g = gauss_jacobi(5, 1.5, 0.5);
    REQUIRE(r1.size() == g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(r1.nodes[i][0] == doctest::Approx(g.nodes[i]).epsilon(1e-15));
        CHECK(r1.weights[i] == doctest::Approx(g.weights[i]).epsilon(1e-15));
    }

    const auto r2 = simplex_dirichlet(4, 2, {0.0, 0.0, 0.0});
    CHECK(integrate(r2, [](const std::vector<double>& t) { return t[0] * t[1]; })
          == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
    for (double c : {0.5, 2.0}) {
        const auto r = simplex_dirichlet(6, 3, {0.0, 0.0, 0.0, 0.0});
        const double got = integrate(r, [c](const std::vector<double>& t) {
            return std::pow(1.0 - t[0] - t[1] - t[2], c);
        });
        // int (1-|t|)^c over the 3-simplex = Gamma(c+1)/Gamma(c+4)
        const double exact = std::tgamma(c + 1.0) / std::tgamma(c + 4.0);
        CHECK(got == doctest::Approx(exact).epsilon(c == 2.0 ? 1e-13 : 1e-3));
        const auto rw = simplex_dirichlet(3, 3, {0.0, 0.0, 0.0, c});
        CHECK(integrate(rw, [](const std::vector<double>&) { return 1.0; }) == doctest::Approx(exact).epsilon(1e-13));
    }
    // moments against the closed form, mixed exponents
    const std::vector<double> beta{0.3, 1.0, 2.5};
    const auto r = simplex_dirichlet(10, 3, {beta[0], beta[1], beta[2], 1.2});
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            const double got = integrate(r, [&](const std::vector<double>& t) { return std::pow(t[0], a) * std::pow(t[2], b); });
            CHECK(got == doctest::Approx(dirichlet_moment({beta[0] + a, beta[1], beta[2] + b}, 1.2)).epsilon(1e-13));
        }
    const double w = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    CHECK(w == doctest::Approx(dirichlet_moment(beta, 1.2)).epsilon(1e-13));
}

TEST_CASE("tensor rules")
{
    const auto t = tensor({gauss_jacobi(3, 0.0, 0.0), gauss_hermite(4)});
    CHECK(t.size() == 12);
    CHECK(t.dim == 2);
    CHECK(integrate(t, [](const std::vector<double>& x) { return x[0] * x[1] * x[1]; })
          == doctest::Approx(0.5 * std::sqrt(M_PI) / 2.0).epsilon(1e-14));
}

TEST_CASE("pairwise summation")
{
    std::vector<double> x(1 << 20, 0.1);
    CHECK(std::abs(pairwise_sum(x) - 0.1 * x.size()) < 1e-9);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{1.0, 2.0, 3.0}) == 6.0);
}

TEST_CASE("adaptive refinement")
{
    int calls = 0;
    const auto r = adaptive([&](int m) {
        ++calls;
        return integrate(gauss_jacobi(m, 0.0, 0.0), [](double t) { return std::exp(t); });
    });
    CHECK(r.converged);
    CHECK(r.m == 48);
    CHECK(calls == 2);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

    // sqrt singularity at t = 0 converges slowly and must report failure
    const auto bad = adaptive([](int m) {
        return integrate(gauss_jacobi(m, 0.0, 0.0), [](double t) { return std::sqrt(t); });
    }, AdaptivePolicy{24, 96, 1e-14});
    CHECK_FALSE(bad.converged);
    CHECK(bad.m == 96);
    CHECK(bad.delta > 0.0);
}

TEST_CASE("Monte Carlo")
{
    Sampler unit = [](std::mt19937_64& g) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return std::vector<double>{u(g), u(g)};
    };
    const auto c = mc_integrate([](const std::vector<double>&) { return 2.5; }, unit, 100, 1);
    CHECK(c.value == 2.5);
    CHECK(c.stderr_ == 0.0);

    // area of the unit disc inside [-1,1]^2
    Sampler square = [](std::mt19937_64& g) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        return std::vector<double>{u(g), u(g)};
    };
    auto inside = [](const std::vector<double>& x) { return x[0] * x[0] + x[1] * x[1] < 1.0 ? 4.0 : 0.0; };
    const auto a = mc_integrate(inside, square, 1'000'000, 9);
    CHECK(std::abs(a.value - M_PI) < 4.0 * a.stderr_);
    const auto b = mc_integrate(inside, square, 1'000'000, 9);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
    CHECK_THROWS(mc_integrate(inside, square, 1, 9));
}

} // TEST_SUITE
