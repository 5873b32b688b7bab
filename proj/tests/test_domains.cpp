#include <doctest.h>

#include <cmath>
#include <random>

#include "stz/domains.hpp"
#include "stz/errors.hpp"
#include "stz/presets.hpp"
#include "stz/quadrature.hpp"

using namespace stz;

namespace {

const cd I(0.0, 1.0);

double dist(const cvec& a, const cvec& b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

SiegelPoint random_siegel(int p, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    std::exponential_distribution<double> ex(1.0);
    cvec w(p);
    double r = 0.0;
    for (int k = 0; k + 1 < p; ++k) {
        w[k] = cd(nd(rng), nd(rng));
        r += std::norm(w[k]);
    }
    w[p - 1] = cd(3.0 * nd(rng), r + 1e-3 + ex(rng));
    return siegel_point(w);
}

SuperPoint random_super(int p, int q, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    SuperPoint Z{random_ball_point(p, rng, 0.95), {}};
    for (int k = 0; k < q; ++k)
        Z.odd.push_back(cd(nd(rng), nd(rng)));
    return Z;
}

// 1 - z.conj(u) - sum a_k conj(b_k) xi_k conj(xi_k), built term by term.
GrassmannElement pairing_by_hand(int q, cd scalar, const cvec& a, const cvec& b)
{
    GrassmannElement g = GrassmannElement::scalar(q, scalar);
    for (int k = 1; k <= q; ++k)
        g.add(subset_of({k}), subset_of({k}), -a[k - 1] * std::conj(b[k - 1]));
    return g;
}

// dw/dz by central differences of the even Cayley map; rows index z, columns w.
Eigen::MatrixXcd jacobian_fd(const cvec& z)
{
    const int p = int(z.size());
    const double h = 1e-6;
    Eigen::MatrixXcd J(p, p);
    for (int r = 0; r < p; ++r) {
        cvec zp = z, zm = z;
        zp[r] += h;
        zm[r] -= h;
        const auto wp = cayley(ball_point(zp, 0.0)).w;
        const auto wm = cayley(ball_point(zm, 0.0)).w;
        for (int c = 0; c < p; ++c)
            J(r, c) = (wp[c] - wm[c]) / (2.0 * h);
    }
    return J;
}

} // namespace

TEST_SUITE("domains") {

TEST_CASE("Cayley transform hand values")
{
    const auto w0 = cayley(ball_point({0.0, 0.0, 0.0}));
    CHECK(dist(w0.w, {0.0, 0.0, I}) < 1e-15);
    CHECK(w0.interior);
    const auto w1 = cayley(ball_point({0.0, 0.5}));
    CHECK(std::abs(w1.w[1] - I / 3.0) < 1e-15);
    CHECK(siegel_height(w1.w) == doctest::Approx(1.0 / 3.0));

    const auto z0 = cayley_inv(siegel_point({0.0, I}));
    CHECK(dist(z0.z, {0.0, 0.0}) < 1e-15);
    const auto z1 = cayley_inv(siegel_point({0.0, 2.0 * I}));
    CHECK(std::abs(z1.z[1] - cd(-1.0 / 3.0)) < 1e-15);
    CHECK(std::abs(cayley(z1).w[1] - 2.0 * I) < 1e-15);
}

TEST_CASE("Cayley roundtrip and interior preservation")
{
    std::mt19937_64 rng(1);
    for (int p = 1; p <= 3; ++p) {
        for (int t = 0; t < 100; ++t) {
            const BallPoint z = ball_point(random_ball_point(p, rng, 0.99));
            const SiegelPoint w = cayley(z);
            CHECK(w.interior);
            CHECK(dist(cayley_inv(w).z, z.z) < 1e-13);
        }
        for (int t = 0; t < 1000; ++t) {
            const SiegelPoint w = random_siegel(p, rng);
            const BallPoint z = cayley_inv(w);
            REQUIRE(norm_sq(z.z) < 1.0);
            REQUIRE(dist(cayley(z).w, w.w) < 1e-12 * (1.0 + std::sqrt(norm_sq(w.w))));
        }
    }
}

TEST_CASE("rays towards the sphere go to the Siegel boundary")
{
    const cvec u{cd(0.6, 0.0), cd(0.0, 0.8)};
    double last = 1e300;
    for (double t : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
        const cvec z{t * u[0], t * u[1]};
        const double h = siegel_height(cayley(ball_point(z)).w);
        CHECK(h > 0.0);
        CHECK(h < last);
        last = h;
    }
    CHECK(last < 1e-3);
}

TEST_CASE("membership and singular points")
{
    CHECK_FALSE(ball_point({1.0}).interior);
    CHECK_FALSE(ball_point({cd(0.6), cd(0.8)}).interior);
    CHECK(ball_point({0.3, 0.4}).interior);
    CHECK_FALSE(siegel_point({1.0, cd(0.0, 1.0)}).interior);
    CHECK(siegel_point({0.5, cd(0.0, 1.0)}).interior);
    CHECK_THROWS_AS(cayley(ball_point({-1.0})), DomainError);
    CHECK_THROWS_AS(cayley(ball_point({cd(2.0)})), DomainError);
    CHECK_THROWS_AS(cayley_inv(siegel_point({cd(0.0, -1.0)})), DomainError);
    CHECK_THROWS_AS(ball_point({}), DimensionError);
}

TEST_CASE("odd part of the super Cayley transform")
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const SuperPoint Z = random_super(2, 2, rng);
        const SuperPoint W = cayley_super(Z);
        for (int k = 0; k < 2; ++k)
            CHECK(std::abs(W.odd[k] - I * Z.odd[k] / (1.0 + Z.even[1])) < 1e-14);
        const SuperPoint back = cayley_inv_super(W);
        CHECK(dist(back.even, Z.even) < 1e-13);
        CHECK(dist(back.odd, Z.odd) < 1e-12);
    }
}

TEST_CASE("kernel pairings and the two transport identities")
{
    std::mt19937_64 rng(3);
    const SuperPoint zero{{0.0, 0.0}, {0.0}};
    CHECK(max_abs_diff(kernel_pairing_ball(zero, zero), GrassmannElement::scalar(1, 1.0)) == 0.0);
    for (int p = 1; p <= 3; ++p)
        for (int q = 0; q <= 2; ++q)
            for (int t = 0; t < 100; ++t) {
                const SuperPoint Z = random_super(p, q, rng), U = random_super(p, q, rng);
                const SuperPoint W = cayley_super(Z), V = cayley_super(U);
                const auto lhs = pairing_by_hand(q, 1.0 - dot_conj(Z.even, U.even), Z.odd, U.odd);
                cd s = (W.even[p - 1] - std::conj(V.even[p - 1])) / (2.0 * I);
                for (int k = 0; k + 1 < p; ++k)
                    s -= W.even[k] * std::conj(V.even[k]);
                const auto rhs = pairing_by_hand(q, s, W.odd, V.odd);
                REQUIRE(max_abs_diff(kernel_pairing_ball(Z, U), lhs) < 1e-14);
                REQUIRE(max_abs_diff(kernel_pairing_siegel(W, V), rhs) < 1e-12);
                const cd zp = Z.even[p - 1], up = U.even[p - 1];
                const cd wp = W.even[p - 1], vp = V.even[p - 1];
                const auto first = (1.0 / ((1.0 + zp) * std::conj(1.0 + up))) * lhs;
                const auto second = (4.0 / ((1.0 - I * wp) * std::conj(1.0 - I * vp))) * rhs;
                CHECK(max_abs_diff(first, rhs) < 1e-12 * (1.0 + std::abs(s)));
                CHECK(max_abs_diff(lhs, second) < 1e-12);
                const auto [r1, r2] = pairing_identity_residuals(Z, U);
                CHECK(r1 < 1e-12 * (1.0 + std::abs(s)));
                CHECK(r2 < 1e-12);
            }
}

TEST_CASE("Berezinian of block supermatrices")
{
    BlockSupermatrix M;
    M.A = Eigen::MatrixXcd::Identity(2, 2);
    M.B = Eigen::MatrixXcd::Zero(2, 3);
    M.C = Eigen::MatrixXcd::Zero(3, 2);
    M.D = Eigen::MatrixXcd::Identity(3, 3);
    CHECK(std::abs(berezinian(M) - 1.0) < 1e-15);

    M.A = Eigen::MatrixXcd::Constant(1, 1, 2.0);
    M.B = Eigen::MatrixXcd::Zero(1, 1);
    M.C = Eigen::MatrixXcd::Zero(1, 1);
    M.D = Eigen::MatrixXcd::Constant(1, 1, 4.0);
    CHECK(std::abs(berezinian(M) - 0.5) < 1e-15);

    M.A = M.B = M.C = Eigen::MatrixXcd::Constant(1, 1, 1.0);
    M.D = Eigen::MatrixXcd::Constant(1, 1, 2.0);
    CHECK(std::abs(berezinian(M) - 0.25) < 1e-15);

    M.D = Eigen::MatrixXcd::Zero(1, 1);
    CHECK_THROWS_AS(berezinian(M), ParameterError);

    std::mt19937_64 rng(4);
    for (int t = 0; t < 10; ++t) {
        M.A = Eigen::MatrixXcd::Random(3, 3);
        M.D = Eigen::MatrixXcd::Random(2, 2) + 2.0 * Eigen::MatrixXcd::Identity(2, 2);
        M.B = Eigen::MatrixXcd::Zero(3, 2);
        M.C = Eigen::MatrixXcd::Random(2, 3);
        CHECK(std::abs(berezinian(M) - M.A.determinant() / M.D.determinant()) < 1e-12);
    }
}

TEST_CASE("Cayley Jacobian against finite differences")
{
    std::mt19937_64 rng(5);
    for (int p = 1; p <= 3; ++p)
        for (int t = 0; t < 10; ++t) {
            const BallPoint z = ball_point(random_ball_point(p, rng));
            const BlockSupermatrix J = cayley_jacobian(z, 2);
            CHECK((J.A - jacobian_fd(z.z)).cwiseAbs().maxCoeff() < 1e-7);
            CHECK(J.B.cwiseAbs().maxCoeff() == 0.0);
            const SuperPoint W = cayley_super({z.z, {1.0, 0.0}});
            CHECK(std::abs(J.D(0, 0) - W.odd[0]) < 1e-14);
            CHECK(std::abs(J.D(1, 0)) == 0.0);
        }
}

TEST_CASE("closed-form Berezinian of the Cayley map")
{
    std::mt19937_64 rng(6);
    for (auto [p, q] : {std::pair{1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 1}, {1, 3}})
        for (int t = 0; t < 50; ++t) {
            const BallPoint z = ball_point(random_ball_point(p, rng));
            const cd closed = cayley_berezinian(z, q);
            const cd direct = berezinian(cayley_jacobian(z, q));
            REQUIRE(std::abs(closed - direct) <= 1e-12 * std::abs(closed));
            // chain rule with the inverse map
            const cd inv = cayley_inv_berezinian(cayley(z), q);
            REQUIRE(std::abs(closed * inv - 1.0) < 1e-12);
            // the alternative constants are off by a factor i
            CHECK(std::abs(cayley_berezinian(z, q, true) - I * closed) <= 1e-14 * std::abs(closed));
        }
    const BallPoint zero = ball_point({0.0});
    CHECK(std::abs(cayley_berezinian(zero, 0) - cd(0.0, -2.0)) < 1e-15);
    CHECK(std::abs(cayley_berezinian(zero, 0, true) - 2.0) < 1e-15);
}

TEST_CASE("measure densities")
{
    CHECK(measure_density(Domain::Ball, 2.0, 1, {0.0}) == doctest::Approx(1.0 / M_PI).epsilon(1e-15));
    CHECK(c_nu(4.0, 2) == doctest::Approx(6.0 / (M_PI * M_PI)));
    CHECK_THROWS_AS(c_nu(1.0, 1), ParameterError);
    CHECK(measure_density(Domain::Ball, 3.0, 1, {0.999}) < 1e-2);
    CHECK(measure_density(Domain::Ball, 3.0, 1, {0.999999}) < 1e-5);
    const cvec w{cd(0.3, 0.1), cd(0.2, 1.5)};
    CHECK(measure_density(Domain::Siegel, 3.5, 2, w)
          == doctest::Approx(0.25 * c_nu(3.5, 2) * std::pow(1.5 - 0.1, 0.5)).epsilon(1e-14));
    CHECK_THROWS_AS(measure_density(Domain::Ball, 3.0, 1, {1.5}), DomainError);
}

TEST_CASE("ball measure is a probability measure")
{
    // polar coordinates t_k = |z_k|^2: dz = pi^p dt on the simplex after the angles
    for (auto [p, nu] : {std::pair{1, 2.0}, {2, 3.5}, {3, 4.25}}) {
        const double c = nu - p - 1.0;
        std::vector<double> ex(p, 0.0);
        ex.push_back(c);
        const auto rule = simplex_dirichlet(12, p, ex);
        const double total = integrate(rule, [&](const std::vector<double>& t) {
            cvec z(p);
            double s = 1.0;
            for (int k = 0; k < p; ++k) {
                z[k] = std::sqrt(t[k]);
                s -= t[k];
            }
            return std::pow(M_PI, p) * measure_density(Domain::Ball, nu, p, z) / std::pow(s, c);
        });
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
    // and independently by Monte Carlo on the unit disc
    Sampler disc = [](std::mt19937_64& g) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double x, y;
        do {
            x = u(g);
            y = u(g);
        } while (x * x + y * y >= 1.0);
        return std::vector<double>{x, y};
    };
    const auto mc = mc_integrate([](const std::vector<double>& x) {
        return M_PI * measure_density(Domain::Ball, 2.5, 1, {cd(x[0], x[1])});
    }, disc, 200000, 42);
    CHECK(std::abs(mc.value - 1.0) < 5.0 * mc.stderr_);
}

} // TEST_SUITE
