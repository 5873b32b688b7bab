#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "stz/bergman.hpp"
#include "stz/symbols.hpp"

namespace stz {

// Symbol presets, name(:param)*:
//   one                       F_0 = 1
//   odd:i1[.i2...]            F_I = 1 for I = {i1, i2, ...}, every other coefficient 0
//   radial:poly:a1:...:ap     quasi-elliptic, F_0 = r_1^a1 ... r_p^ap
//   parabolic:exp[:b]         quasi-parabolic, F_0 = exp(-b Im z_p), b = 1 by default
//   nilpotent:exp[:b]         nilpotent / quasi-nilpotent, F_0 = exp(-b v), v = Im z_p - |z'|^2
//   nilpotent:linear[:j]      nilpotent / quasi-nilpotent, F_0 = Im z_{j} (j-th Heisenberg coordinate)
//   hyperbolic:theta          quasi-hyperbolic, F_0 = arg(z_p - i|z'|^2) / pi
//   random:seed               random invariant symbol of the requested case
//   nonminvariant:re-z1       Re z_1 on the ball; only usable where a ball symbol is needed
SuperSymbol make_symbol(const std::string& preset, const MASGCase& kase, int p, int q);

bool is_ball_only_preset(const std::string& preset);

// Ball-side symbol for the oracle: invariant presets are pulled back,
// ball-only presets are built directly.
BallSuperSymbol make_ball_symbol(const std::string& preset, const MASGCase& kase, int p, int q);

// Random diagonal invariant symbol with every F_I set. When `tagged` is false
// the ExpPoly tags are dropped so that spectra go through quadrature.
SuperSymbol random_invariant_symbol(const MASGCase& kase, int p, int q, std::uint64_t seed, bool tagged = true);

// Uniform direction, radius uniform in [0, rmax).
cvec random_ball_point(int p, std::mt19937_64& rng, double rmax = 0.9);
// Coefficients uniform in the unit square, every (M, n) with |n| <= degree.
SuperPolynomial random_super_polynomial(int p, int q, int degree, std::mt19937_64& rng);

} // namespace stz
