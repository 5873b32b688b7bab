#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "stz/grassmann.hpp"

namespace stz {

using cvec = std::vector<cd>;

enum class Domain { Ball, Siegel };

const char* domain_name(Domain d);

constexpr double kDomainMargin = 1e-12;

struct BallPoint {
    cvec z;
    bool interior = false;
};

struct SiegelPoint {
    cvec w; // w = (w', w_p)
    bool interior = false;
};

BallPoint ball_point(cvec z, double margin = kDomainMargin);
SiegelPoint siegel_point(cvec w, double margin = kDomainMargin);

double norm_sq(const cvec& z);
cd dot_conj(const cvec& a, const cvec& b); // sum a_k conj(b_k)

// Im(w_p) - |w'|^2
double siegel_height(const cvec& w);

SiegelPoint cayley(const BallPoint& z);
BallPoint cayley_inv(const SiegelPoint& w);

// Even coordinates plus odd coordinates written as multiples of the
// generators: the odd slot k holds a_k for the odd coordinate a_k xi_k.
struct SuperPoint {
    cvec even;
    cvec odd;
};

// Odd part transforms linearly: omega_k = i a_k / (1 + z_p).
SuperPoint cayley_super(const SuperPoint& Z);
SuperPoint cayley_inv_super(const SuperPoint& W);

// 1 - z.conj(u) - xi.conj(eta) as an element of the Grassmann algebra on q = odd.size() generators.
GrassmannElement kernel_pairing_ball(const SuperPoint& Z, const SuperPoint& U);
// (w_p - conj(v_p))/2i - w'.conj(v') - omega.conj(zeta)
GrassmannElement kernel_pairing_siegel(const SuperPoint& W, const SuperPoint& V);

// Residuals of the two pairing identities relating the ball and the Siegel
// domain through the Cayley transform.
std::pair<double, double> pairing_identity_residuals(const SuperPoint& Z, const SuperPoint& U);

struct BlockSupermatrix {
    Eigen::MatrixXcd A, B, C, D;
};

cd berezinian(const BlockSupermatrix& M);

// Jacobian of the super Cayley transform at an even point, laid out as
// [[dw/dz, domega/dz], [dw/dxi, domega/dxi]]; the odd blocks vanish there.
BlockSupermatrix cayley_jacobian(const BallPoint& z, int q);

// Closed forms for the Berezinians of the Cayley map and its inverse.
// strict_paper selects the alternative constants, which differ from the
// Jacobian by a factor i (see README).
cd cayley_berezinian(const BallPoint& z, int q, bool strict_paper = false);
cd cayley_inv_berezinian(const SiegelPoint& w, int q, bool strict_paper = false);

double c_nu(double nu, int p);
double measure_density(Domain domain, double nu, int p, const cvec& point);

} // namespace stz
