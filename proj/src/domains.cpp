#include "stz/domains.hpp"

#include <cmath>

#include "stz/errors.hpp"

namespace stz {

namespace {

const cd I(0.0, 1.0);

void require_nonempty(const cvec& v, const char* what)
{
    if (v.empty())
        throw DimensionError(std::string(what) + ": need p >= 1 coordinates");
}

cd ipow(cd base, int k)
{
    cd r = 1.0;
    if (k < 0) {
        base = 1.0 / base;
        k = -k;
    }
    while (k--)
        r *= base;
    return r;
}

} // namespace

const char* domain_name(Domain d)
{
    return d == Domain::Ball ? "ball" : "siegel";
}

double norm_sq(const cvec& z)
{
    double s = 0.0;
    for (const auto& x : z)
        s += std::norm(x);
    return s;
}

cd dot_conj(const cvec& a, const cvec& b)
{
    if (a.size() != b.size())
        throw DimensionError("dot_conj: length mismatch");
    cd s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        s += a[k] * std::conj(b[k]);
    return s;
}

double siegel_height(const cvec& w)
{
    require_nonempty(w, "siegel_height");
    double h = w.back().imag();
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        h -= std::norm(w[k]);
    return h;
}

BallPoint ball_point(cvec z, double margin)
{
    require_nonempty(z, "ball_point");
    BallPoint b;
    b.interior = norm_sq(z) < 1.0 - margin;
    b.z = std::move(z);
    return b;
}

SiegelPoint siegel_point(cvec w, double margin)
{
    require_nonempty(w, "siegel_point");
    SiegelPoint s;
    s.interior = siegel_height(w) > margin;
    s.w = std::move(w);
    return s;
}

SiegelPoint cayley(const BallPoint& z)
{
    if (!z.interior)
        throw DomainError("cayley: point is not interior to the ball");
    const cd den = 1.0 + z.z.back();
    if (std::abs(den) == 0.0)
        throw DomainError("cayley: singular point z_p = -1");
    cvec w(z.z.size());
    for (std::size_t k = 0; k + 1 < w.size(); ++k)
        w[k] = I * z.z[k] / den;
    w.back() = I * (1.0 - z.z.back()) / den;
    return siegel_point(std::move(w), 0.0);
}

BallPoint cayley_inv(const SiegelPoint& w)
{
    if (!w.interior)
        throw DomainError("cayley_inv: point is not interior to the Siegel domain");
    const cd den = 1.0 - I * w.w.back();
    if (std::abs(den) == 0.0)
        throw DomainError("cayley_inv: singular point 1 - i w_p = 0");
    cvec z(w.w.size());
    for (std::size_t k = 0; k + 1 < z.size(); ++k)
        z[k] = -2.0 * I * w.w[k] / den;
    z.back() = (1.0 + I * w.w.back()) / den;
    return ball_point(std::move(z), 0.0);
}

SuperPoint cayley_super(const SuperPoint& Z)
{
    SiegelPoint w = cayley(ball_point(Z.even, 0.0));
    SuperPoint W{w.w, cvec(Z.odd.size())};
    const cd den = 1.0 + Z.even.back();
    for (std::size_t k = 0; k < Z.odd.size(); ++k)
        W.odd[k] = I * Z.odd[k] / den;
    return W;
}

SuperPoint cayley_inv_super(const SuperPoint& W)
{
    BallPoint z = cayley_inv(siegel_point(W.even, 0.0));
    SuperPoint Z{z.z, cvec(W.odd.size())};
    const cd den = 1.0 - I * W.even.back();
    for (std::size_t k = 0; k < W.odd.size(); ++k)
        Z.odd[k] = -2.0 * I * W.odd[k] / den;
    return Z;
}

namespace {

GrassmannElement odd_pairing(int q, const cvec& a, const cvec& b, cd scalar)
{
    std::vector<cd> c(q);
    for (int k = 0; k < q; ++k)
        c[k] = a[k] * std::conj(b[k]);
    return expand_weight(q, 1.0, scalar, c);
}

} // namespace

GrassmannElement kernel_pairing_ball(const SuperPoint& Z, const SuperPoint& U)
{
    if (Z.odd.size() != U.odd.size())
        throw DimensionError("kernel_pairing_ball: odd dimension mismatch");
    return odd_pairing(int(Z.odd.size()), Z.odd, U.odd, 1.0 - dot_conj(Z.even, U.even));
}

GrassmannElement kernel_pairing_siegel(const SuperPoint& W, const SuperPoint& V)
{
    if (W.odd.size() != V.odd.size() || W.even.size() != V.even.size())
        throw DimensionError("kernel_pairing_siegel: dimension mismatch");
    require_nonempty(W.even, "kernel_pairing_siegel");
    const std::size_t p = W.even.size();
    cd s = (W.even[p - 1] - std::conj(V.even[p - 1])) / (2.0 * I);
    for (std::size_t k = 0; k + 1 < p; ++k)
        s -= W.even[k] * std::conj(V.even[k]);
    return odd_pairing(int(W.odd.size()), W.odd, V.odd, s);
}

std::pair<double, double> pairing_identity_residuals(const SuperPoint& Z, const SuperPoint& U)
{
    const SuperPoint W = cayley_super(Z);
    const SuperPoint V = cayley_super(U);
    const GrassmannElement lhs = kernel_pairing_ball(Z, U);
    const GrassmannElement rhs = kernel_pairing_siegel(W, V);
    const cd f1 = 1.0 / ((1.0 + Z.even.back()) * std::conj(1.0 + U.even.back()));
    const cd f2 = 4.0 / ((1.0 - I * W.even.back()) * std::conj(1.0 - I * V.even.back()));
    return {max_abs_diff(f1 * lhs, rhs), max_abs_diff(lhs, f2 * rhs)};
}

cd berezinian(const BlockSupermatrix& M)
{
    const auto& D = M.D;
    if (D.rows() != D.cols())
        throw DimensionError("berezinian: D must be square");
    if (D.rows() == 0)
        return M.A.determinant();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(D);
    if (!lu.isInvertible())
        throw ParameterError("berezinian: D is singular");
    Eigen::MatrixXcd S = M.A;
    if (M.B.size() > 0 && M.C.size() > 0)
        S -= M.B * lu.solve(M.C);
    const cd detA = S.rows() == 0 ? cd(1.0) : S.determinant();
    return detA / lu.determinant();
}

BlockSupermatrix cayley_jacobian(const BallPoint& z, int q)
{
    require_nonempty(z.z, "cayley_jacobian");
    const int p = int(z.z.size());
    const cd s = 1.0 + z.z.back();
    if (std::abs(s) == 0.0)
        throw DomainError("cayley_jacobian: singular point z_p = -1");
    BlockSupermatrix J;
    // Row index = differentiation variable, column index = image coordinate.
    J.A = Eigen::MatrixXcd::Zero(p, p);
    for (int k = 0; k + 1 < p; ++k) {
        J.A(k, k) = I / s;
        J.A(p - 1, k) = -I * z.z[k] / (s * s);
    }
    J.A(p - 1, p - 1) = -2.0 * I / (s * s);
    J.B = Eigen::MatrixXcd::Zero(p, q);
    J.C = Eigen::MatrixXcd::Zero(q, p);
    J.D = Eigen::MatrixXcd::Identity(q, q) * (I / s);
    return J;
}

cd cayley_berezinian(const BallPoint& z, int q, bool strict_paper)
{
    require_nonempty(z.z, "cayley_berezinian");
    const int p = int(z.z.size());
    const cd s = 1.0 + z.z.back();
    if (std::abs(s) == 0.0)
        throw DomainError("cayley_berezinian: singular point z_p = -1");
    const int iexp = strict_paper ? p - q + 1 : p - q;
    return -2.0 * ipow(I, iexp) * ipow(s, q - p - 1);
}

cd cayley_inv_berezinian(const SiegelPoint& w, int q, bool strict_paper)
{
    require_nonempty(w.w, "cayley_inv_berezinian");
    const int p = int(w.w.size());
    const cd s = 1.0 - I * w.w.back();
    if (std::abs(s) == 0.0)
        throw DomainError("cayley_inv_berezinian: singular point 1 - i w_p = 0");
    const int iexp = strict_paper ? q - p - 1 : q - p;
    return -std::pow(2.0, p - q) * ipow(I, iexp) * ipow(s, q - p - 1);
}

double c_nu(double nu, int p)
{
    if (!(nu > p))
        throw ParameterError("weight parameter must exceed p");
    return std::exp(std::lgamma(nu) - std::lgamma(nu - p) - p * std::log(M_PI));
}

double measure_density(Domain domain, double nu, int p, const cvec& point)
{
    if (int(point.size()) != p)
        throw DimensionError("measure_density: point has wrong dimension");
    const double c = c_nu(nu, p);
    if (domain == Domain::Ball) {
        const double s = 1.0 - norm_sq(point);
        if (!(s > 0.0))
            throw DomainError("measure_density: point not interior to the ball");
        return c * std::pow(s, nu - p - 1.0);
    }
    const double h = siegel_height(point);
    if (!(h > 0.0))
        throw DomainError("measure_density: point not interior to the Siegel domain");
    return 0.25 * c * std::pow(h, nu - p - 1.0);
}

} // namespace stz
