#pragma once

#include <cmath>

#include "stz/bergman.hpp"
#include "stz/quadrature.hpp"

// (U Phi | U Phi) on the Siegel side, integrated over the ball after the
// change of variables w = cayley(z), whose real Jacobian is 4 |1 + z_p|^{-2(p+1)}.
// Super measure on the Siegel domain:
//   Gamma(nu) / (4 pi^p Gamma(nu+q-p)) (Im w_p - |w'|^2 - omega conj(omega))^{nu+q-p-1}.
inline double siegel_norm_sq(const stz::WeightedSpaceSpec& spec, const stz::SuperPolynomial& phi, int radial,
                             int angles)
{
    using namespace stz;
    const int p = spec.p, q = spec.q;
    const double nu = spec.nu;
    const double c0 = nu - p - 1.0;
    const double cs = std::exp(std::lgamma(nu) - std::lgamma(nu + q - p) - p * std::log(M_PI)) / 4.0;
    std::vector<double> ex(p, 0.0);
    ex.push_back(c0);
    const QuadratureRuleND rule = simplex_dirichlet(radial, p, ex);
    const double dphi = 2.0 * M_PI / angles;
    std::vector<double> terms;
    std::vector<int> a(p, 0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        double s = 1.0;
        for (int k = 0; k < p; ++k)
            s -= rule.nodes[i][k];
        // dz = prod (1/2) dt_k dphi_k
        const double w0 = rule.weights[i] * std::pow(0.5 * dphi, p) / std::pow(s, c0);
        std::fill(a.begin(), a.end(), 0);
        for (;;) {
            cvec z(p);
            for (int k = 0; k < p; ++k)
                z[k] = std::polar(std::sqrt(rule.nodes[i][k]), a[k] * dphi);
            const SiegelPoint w = cayley(ball_point(z, 0.0));
            const GrassmannElement G = u_nu_apply(spec, phi, w);
            GrassmannElement W = expand_weight(q, nu + q - p - 1.0, siegel_height(w.w), std::vector<cd>(q, 1.0));
            W *= cs;
            const double jac = 4.0 * std::pow(std::abs(1.0 + z[p - 1]), -2.0 * (p + 1));
            terms.push_back(w0 * jac * berezin_top(gr_mul(W, gr_mul(gr_star(G), G))).real());
            int k = 0;
            while (k < p && ++a[k] == angles)
                a[k++] = 0;
            if (k == p)
                break;
        }
    }
    return pairwise_sum(terms);
}
