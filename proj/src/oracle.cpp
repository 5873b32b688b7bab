#include "stz/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <memory>
#include <ostream>
#include <random>

#include "stz/errors.hpp"
#include "stz/parallel.hpp"
#include "stz/quadrature.hpp"

namespace stz {

bool operator<(const BasisIndex& a, const BasisIndex& b)
{
    if (a.M != b.M)
        return subset_less(a.M, b.M);
    const int da = degree(a.n), db = degree(b.n);
    if (da != db)
        return da < db;
    return a.n < b.n;
}

std::vector<BasisIndex> basis(int p, int q, int n_max)
{
    std::vector<BasisIndex> out;
    const auto ns = multi_indices(p, n_max);
    for (Subset M : all_subsets(q))
        for (const auto& n : ns)
            out.push_back({M, n});
    return out;
}

Eigen::MatrixXcd SuperToeplitzMatrix::block(Subset I, Subset J) const
{
    const auto& bi = blocks.at(I);
    const auto& bj = blocks.at(J);
    return data.block(bi.offset, bj.offset, bi.size, bj.size);
}

std::vector<int> SuperToeplitzMatrix::interior(int deg) const
{
    std::vector<int> out;
    for (int i = 0; i < dim(); ++i)
        if (degree(index[i].n) <= deg)
            out.push_back(i);
    return out;
}

namespace {

const double kTwoPi = 2.0 * M_PI;

// Angular Fourier coefficients of f at every node of a simplex rule in t = |z|^2.
// Axes where f is rotation invariant carry only mode 0.
class ModeTable {
public:
    ModeTable(const BallFunction& f, const QuadratureRuleND& rule, int p, int K, int N)
        : p_(p), K_(K)
    {
        inv_.assign(p, false);
        for (int k = 0; k < p && k < int(f.rotation_invariant.size()); ++k)
            inv_[k] = f.rotation_invariant[k];
        len_.resize(p);
        stride_.resize(p);
        std::vector<int> free_axes;
        for (int k = 0; k < p; ++k) {
            len_[k] = inv_[k] ? 1 : 2 * K + 1;
            if (!inv_[k])
                free_axes.push_back(k);
        }
        std::size_t total = 1;
        for (int k = p; k-- > 0;) {
            stride_[k] = total;
            total *= std::size_t(len_[k]);
        }
        // twiddles[l][j] = exp(-i (l-K) 2 pi j / N) / N
        std::vector<std::vector<cd>> tw(2 * K + 1, std::vector<cd>(N));
        for (int l = 0; l <= 2 * K; ++l)
            for (int j = 0; j < N; ++j)
                tw[l][j] = std::polar(1.0 / N, -kTwoPi * double(l - K) * j / N);
        const int pf = int(free_axes.size());
        std::size_t samples = 1;
        for (int i = 0; i < pf; ++i)
            samples *= std::size_t(N);
        vals_.resize(rule.size());
        parallel_for(rule.size(), [&](std::size_t node) {
            const auto& t = rule.nodes[node];
            std::vector<double> rad(p);
            for (int k = 0; k < p; ++k)
                rad[k] = std::sqrt(std::max(0.0, t[k]));
            // sample on the grid of free axes (last free axis fastest)
            std::vector<cd> a(samples);
            cvec z(p);
            std::vector<int> j(pf, 0);
            for (std::size_t s = 0; s < samples; ++s) {
                for (int k = 0; k < p; ++k)
                    z[k] = rad[k];
                for (int i = 0; i < pf; ++i)
                    z[free_axes[i]] = std::polar(rad[free_axes[i]], kTwoPi * j[i] / N);
                a[s] = f.f(z);
                for (int i = pf; i-- > 0;) {
                    if (++j[i] < N)
                        break;
                    j[i] = 0;
                }
            }
            // transform one free axis at a time; shape (outer, N, inner) -> (outer, 2K+1, inner)
            std::vector<std::size_t> shape(pf, std::size_t(N));
            for (int ax = 0; ax < pf; ++ax) {
                std::size_t outer = 1, inner = 1;
                for (int i = 0; i < ax; ++i)
                    outer *= shape[i];
                for (int i = ax + 1; i < pf; ++i)
                    inner *= shape[i];
                const std::size_t L = std::size_t(2 * K + 1);
                std::vector<cd> b(outer * L * inner);
                for (std::size_t o = 0; o < outer; ++o)
                    for (std::size_t l = 0; l < L; ++l)
                        for (std::size_t in = 0; in < inner; ++in) {
                            cd s = 0.0;
                            for (int jj = 0; jj < N; ++jj)
                                s += tw[l][jj] * a[(o * N + jj) * inner + in];
                            b[(o * L + l) * inner + in] = s;
                        }
                a.swap(b);
                shape[ax] = L;
            }
            vals_[node] = std::move(a);
        });
    }

    // coefficient of exp(i k.phi) with k = mode, at node i; zero if out of range
    cd at(std::size_t node, const MultiIndex& m, const MultiIndex& n) const
    {
        std::size_t off = 0;
        for (int k = 0; k < p_; ++k) {
            const int d = m[k] - n[k];
            if (inv_[k]) {
                if (d != 0)
                    return 0.0;
                continue;
            }
            if (std::abs(d) > K_)
                return 0.0;
            off += stride_[k] * std::size_t(d + K_);
        }
        return vals_[node][off];
    }

private:
    int p_, K_;
    std::vector<bool> inv_;
    std::vector<int> len_;
    std::vector<std::size_t> stride_;
    std::vector<std::vector<cd>> vals_;
};

struct RadialCache {
    QuadratureRuleND rule;
    // powers[node][k][j] = sqrt(t_k)^j
    std::vector<std::vector<std::vector<double>>> powers;
    std::vector<double> one_minus; // 1 - sum t

    RadialCache(int p, double c0, int m, int n_max)
    {
        rule = simplex_dirichlet(m, p, [&] {
            std::vector<double> e(p, 0.0);
            e.push_back(c0);
            return e;
        }());
        powers.resize(rule.size());
        one_minus.resize(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) {
            double s = 0.0;
            powers[i].resize(p);
            for (int k = 0; k < p; ++k) {
                const double r = std::sqrt(rule.nodes[i][k]);
                s += rule.nodes[i][k];
                auto& pw = powers[i][k];
                pw.resize(2 * n_max + 1);
                pw[0] = 1.0;
                for (int j = 1; j <= 2 * n_max; ++j)
                    pw[j] = pw[j - 1] * r;
            }
            one_minus[i] = 1.0 - s;
        }
    }
};

double log_dirichlet(const std::vector<double>& beta, double c)
{
    double lg = std::lgamma(c + 1.0);
    double s = 0.0;
    for (double b : beta) {
        lg += std::lgamma(b + 1.0);
        s += b;
    }
    return lg - std::lgamma(s + double(beta.size()) + c + 1.0);
}

bool closed_radial(const BallFunction& f, const OracleOptions& opt, int p)
{
    if (!opt.closed_form || !f.radial)
        return false;
    for (const auto& t : f.radial->terms) {
        if (int(t.powers.size()) != p || int(t.rates.size()) != p)
            return false;
        for (double b : t.rates)
            if (b != 0.0)
                return false;
    }
    return true;
}

// Fills `out` (rows m, columns n over multi_indices(p, n_max)) with
//   Gamma(nu_row)/Gamma(nu_row-p) sum_i w_i (1-|t_i|)^extra t_i^{(n+m)/2} fhat_{m-n}(t_i)
//   / (||z^m||_{nu_row} ||z^n||_{nu_col}),
// the rule carrying the weight (1 - |t|)^{c0}.
void fill_block(Eigen::MatrixXcd& out, const ModeTable& modes, const RadialCache& rc, int p, double nu_row,
                double nu_col, int n_max, int extra, cd factor)
{
    const auto ns = multi_indices(p, n_max);
    const int d = int(ns.size());
    std::vector<double> nr(d), nc(d);
    for (int i = 0; i < d; ++i) {
        nr[i] = std::sqrt(monomial_norm_sq(nu_row, p, ns[i]));
        nc[i] = std::sqrt(monomial_norm_sq(nu_col, p, ns[i]));
    }
    const double g = std::exp(std::lgamma(nu_row) - std::lgamma(nu_row - p));
    const std::size_t nodes = rc.rule.size();
    std::vector<double> w(nodes);
    for (std::size_t i = 0; i < nodes; ++i)
        w[i] = rc.rule.weights[i] * std::pow(rc.one_minus[i], extra);
    parallel_for(std::size_t(d), [&](std::size_t row) {
        const MultiIndex& m = ns[row];
        std::vector<double> re(nodes), im(nodes);
        for (int col = 0; col < d; ++col) {
            const MultiIndex& n = ns[col];
            bool any = false;
            for (std::size_t i = 0; i < nodes; ++i) {
                const cd c = modes.at(i, m, n);
                if (c == cd(0.0)) {
                    re[i] = im[i] = 0.0;
                    continue;
                }
                any = true;
                double pw = w[i];
                for (int k = 0; k < p; ++k)
                    pw *= rc.powers[i][k][m[k] + n[k]];
                re[i] = pw * c.real();
                im[i] = pw * c.imag();
            }
            if (!any)
                continue;
            const cd v(pairwise_sum(re), pairwise_sum(im));
            out(row, col) += factor * g * v / (nr[row] * nc[col]);
        }
    });
}

void fill_block_closed(Eigen::MatrixXcd& out, const ExpPoly& radial, int p, double nu_row, double nu_col,
                       int n_max, double c, cd factor)
{
    const auto ns = multi_indices(p, n_max);
    const double g = std::exp(std::lgamma(nu_row) - std::lgamma(nu_row - p));
    for (int i = 0; i < int(ns.size()); ++i) {
        double s = 0.0;
        for (const auto& t : radial.terms) {
            std::vector<double> b(p);
            for (int k = 0; k < p; ++k)
                b[k] = ns[i][k] + t.powers[k] / 2.0;
            s += t.c * std::exp(log_dirichlet(b, c));
        }
        const double nn = std::sqrt(monomial_norm_sq(nu_row, p, ns[i]) * monomial_norm_sq(nu_col, p, ns[i]));
        out(i, i) += factor * g * s / nn;
    }
}

void check_levels(int p, double nu_row, double nu_col, int extra)
{
    if (!(nu_row > p) || !(nu_col > p))
        throw ParameterError("both levels must exceed p");
    if (!(nu_row - p - 1.0 + extra > -1.0))
        throw ParameterError("weight exponent must exceed -1");
}

} // namespace

Eigen::MatrixXcd scalar_toeplitz_block(const BallFunction& f, int p, double nu_row, double nu_col, int n_max,
                                       const OracleOptions& opt, int extra_power)
{
    if (p < 1 || n_max < 0)
        throw ParameterError("scalar_toeplitz_block: need p >= 1 and n_max >= 0");
    check_levels(p, nu_row, nu_col, extra_power);
    const int d = int(multi_indices(p, n_max).size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
    const double c0 = nu_row - p - 1.0 + extra_power;
    if (closed_radial(f, opt, p)) {
        fill_block_closed(out, *f.radial, p, nu_row, nu_col, n_max, c0, 1.0);
        return out;
    }
    const RadialCache rc(p, c0, opt.radial, n_max);
    const ModeTable modes(f, rc.rule, p, n_max, opt.torus);
    fill_block(out, modes, rc, p, nu_row, nu_col, n_max, 0, 1.0);
    return out;
}

SuperToeplitzMatrix assemble_super_toeplitz(const BallSuperSymbol& F, const WeightedSpaceSpec& spec, int n_max,
                                            const OracleOptions& opt)
{
    spec.validate();
    if (F.p != spec.p || F.q != spec.q)
        throw DimensionError("symbol dimensions differ from the space");
    if (!(spec.nu > spec.p))
        throw ParameterError("the truncated oracle needs nu > p");
    if (n_max < 0)
        throw ParameterError("n_max must be non-negative");
    for (const auto& [key, f] : F.coeffs)
        if (!within(key.first, F.q) || !within(key.second, F.q))
            throw DimensionError("symbol coefficient index uses a generator beyond q");
    const int p = spec.p, q = spec.q;
    const double nu = spec.nu;
    SuperToeplitzMatrix A;
    A.spec = spec;
    A.n_max = n_max;
    A.index = basis(p, q, n_max);
    const int per = int(multi_indices(p, n_max).size());
    int off = 0;
    for (Subset M : all_subsets(q)) {
        A.blocks[M] = {off, per};
        off += per;
    }
    A.data = Eigen::MatrixXcd::Zero(A.dim(), A.dim());

    const double c0 = nu - p - 1.0;
    std::unique_ptr<RadialCache> rc;
    std::map<std::pair<Subset, Subset>, std::unique_ptr<ModeTable>> modes;
    auto table_for = [&](const std::pair<Subset, Subset>& key, const BallFunction& f) -> const ModeTable& {
        auto& slot = modes[key];
        if (!slot) {
            if (!rc)
                rc = std::make_unique<RadialCache>(p, c0, opt.radial, n_max);
            slot = std::make_unique<ModeTable>(f, rc->rule, p, n_max, opt.torus);
        }
        return *slot;
    };

    for (Subset I : all_subsets(q))
        for (Subset J : all_subsets(q)) {
            Eigen::MatrixXcd blk = Eigen::MatrixXcd::Zero(per, per);
            const double nu_row = nu + card(I), nu_col = nu + card(J);
            const double gratio = std::exp(std::lgamma(nu_row - p) - std::lgamma(nu_col - p));
            bool touched = false;
            for (Subset K : all_subsets(q)) {
                if ((K & (I | J)) != (I | J))
                    continue;
                const std::pair<Subset, Subset> key{K & ~I, K & ~J};
                auto it = F.coeffs.find(key);
                if (it == F.coeffs.end())
                    continue;
                const int sgn = sign_eps(K & ~I, I) * sign_eps(K & ~J, J);
                const cd factor = double(sgn) * gratio;
                const int extra = card(K);
                touched = true;
                if (closed_radial(it->second, opt, p))
                    fill_block_closed(blk, *it->second.radial, p, nu_row, nu_col, n_max, c0 + extra, factor);
                else {
                    const ModeTable& mt = table_for(key, it->second);
                    fill_block(blk, mt, *rc, p, nu_row, nu_col, n_max, extra, factor);
                }
            }
            if (touched)
                A.data.block(A.blocks[I].offset, A.blocks[J].offset, per, per) = blk;
        }
    return A;
}

namespace {

Eigen::MatrixXcd restrict(const Eigen::MatrixXcd& X, const std::vector<int>& idx)
{
    Eigen::MatrixXcd R(idx.size(), idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            R(i, j) = X(idx[i], idx[j]);
    return R;
}

void check_interior(const SuperToeplitzMatrix& A, int deg)
{
    if (deg < 0 || deg > A.n_max)
        throw ParameterError("interior degree must lie in [0, n_max]");
}

} // namespace

double identity_defect(const SuperToeplitzMatrix& A, int interior_degree)
{
    check_interior(A, interior_degree);
    const auto R = restrict(A.data, A.interior(interior_degree));
    return (R - Eigen::MatrixXcd::Identity(R.rows(), R.cols())).cwiseAbs().maxCoeff();
}

double diagonality_defect(const SuperToeplitzMatrix& A, int interior_degree)
{
    check_interior(A, interior_degree);
    auto R = restrict(A.data, A.interior(interior_degree));
    R.diagonal().setZero();
    return R.size() ? R.cwiseAbs().maxCoeff() : 0.0;
}

double hermitian_defect(const SuperToeplitzMatrix& A, int interior_degree)
{
    check_interior(A, interior_degree);
    const auto R = restrict(A.data, A.interior(interior_degree));
    return (R - R.adjoint()).cwiseAbs().maxCoeff();
}

double spectral_norm(const Eigen::MatrixXcd& X)
{
    if (X.size() == 0)
        return 0.0;
    if (std::max(X.rows(), X.cols()) <= 512) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X);
        return svd.singularValues()(0);
    }
    std::mt19937_64 rng(0x5EED);
    std::normal_distribution<double> nd;
    Eigen::VectorXcd v(X.cols());
    for (int i = 0; i < v.size(); ++i)
        v(i) = cd(nd(rng), nd(rng));
    v.normalize();
    double est = 0.0;
    for (int it = 0; it < 200; ++it) {
        Eigen::VectorXcd w = X.adjoint() * (X * v);
        const double nrm = w.norm();
        if (nrm == 0.0)
            return 0.0;
        const double next = std::sqrt(nrm);
        v = w / nrm;
        if (std::abs(next - est) <= 1e-10 * next) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

double commutator_norm(const SuperToeplitzMatrix& A, const SuperToeplitzMatrix& B, int interior_degree)
{
    if (A.dim() != B.dim() || A.n_max != B.n_max || A.spec.p != B.spec.p || A.spec.q != B.spec.q)
        throw DimensionError("commutator_norm: matrices belong to different truncations");
    check_interior(A, interior_degree);
    const Eigen::MatrixXcd C = A.data * B.data - B.data * A.data;
    return spectral_norm(restrict(C, A.interior(interior_degree)));
}

cd berezin_diagonal(const BallSuperSymbol& F, const WeightedSpaceSpec& spec, Subset M, const MultiIndex& n,
                    int radial)
{
    spec.validate();
    if (!(spec.nu > spec.p))
        throw ParameterError("berezin_diagonal needs nu > p");
    if (int(n.size()) != spec.p)
        throw DimensionError("berezin_diagonal: multi-index length differs from p");
    for (const auto& [key, f] : F.coeffs) {
        if (int(f.rotation_invariant.size()) != spec.p
            || !std::all_of(f.rotation_invariant.begin(), f.rotation_invariant.end(), [](bool b) { return b; }))
            throw ParameterError("berezin_diagonal needs rotation-invariant coefficients");
    }
    const int p = spec.p, q = spec.q;
    const double c0 = spec.nu - p - 1.0;
    std::vector<double> ex(n.begin(), n.end());
    ex.push_back(c0);
    const QuadratureRuleND rule = simplex_dirichlet(radial, p, ex);
    const GrassmannElement phi_star = GrassmannElement::monomial(q, 0, M);
    const GrassmannElement psi = GrassmannElement::monomial(q, M, 0);
    std::vector<double> fr, fi, one;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        cvec z(p);
        double s = 1.0;
        for (int k = 0; k < p; ++k) {
            z[k] = std::sqrt(rule.nodes[i][k]);
            s -= rule.nodes[i][k];
        }
        GrassmannElement W = expand_weight(q, spec.nu + q - p - 1.0, s, std::vector<cd>(q, 1.0));
        W *= std::pow(s, -c0);
        const GrassmannElement left = gr_mul(W, phi_star);
        const cd a = berezin_top(gr_mul(gr_mul(left, eval_symbol(F, z)), psi));
        const cd b = berezin_top(gr_mul(left, psi));
        fr.push_back(rule.weights[i] * a.real());
        fi.push_back(rule.weights[i] * a.imag());
        one.push_back(rule.weights[i] * b.real());
    }
    const double norm = pairwise_sum(one);
    if (norm == 0.0)
        throw ParameterError("berezin_diagonal: basis element has zero Berezin norm");
    return cd(pairwise_sum(fr), pairwise_sum(fi)) / norm;
}

double bargmann_weight(const WeightedSpaceSpec& spec, Subset M, const MultiIndex& n)
{
    const double lev = spec.level(M);
    return std::exp(0.5 * (std::lgamma(spec.nu) - std::lgamma(lev) + log_monomial_norm_sq(lev, spec.p, n)));
}

CoeffFamily bargmann_qe_forward(const WeightedSpaceSpec& spec, const SuperPolynomial& psi)
{
    spec.validate();
    if (psi.p() != spec.p || psi.q() != spec.q)
        throw DimensionError("bargmann_qe_forward: polynomial dimensions differ from the space");
    CoeffFamily out;
    for (const auto& [key, c] : psi.terms())
        out[{key.first, key.second}] += c * bargmann_weight(spec, key.first, key.second);
    return out;
}

SuperPolynomial bargmann_qe_adjoint(const WeightedSpaceSpec& spec, const CoeffFamily& c)
{
    spec.validate();
    SuperPolynomial out(spec.p, spec.q);
    for (const auto& [idx, v] : c)
        out.add(idx.M, idx.n, v / bargmann_weight(spec, idx.M, idx.n));
    return out;
}

double family_norm_sq(const CoeffFamily& c)
{
    std::vector<double> t;
    t.reserve(c.size());
    for (const auto& [idx, v] : c)
        t.push_back(std::norm(v));
    return pairwise_sum(t);
}

nlohmann::ordered_json matrix_to_json(const SuperToeplitzMatrix& A, bool include_data)
{
    nlohmann::ordered_json j;
    j["domain"] = domain_name(A.spec.domain);
    j["p"] = A.spec.p;
    j["q"] = A.spec.q;
    j["nu"] = A.spec.nu;
    j["n_max"] = A.n_max;
    j["dim"] = A.dim();
    auto& b = j["basis"] = nlohmann::ordered_json::array();
    for (const auto& e : A.index)
        b.push_back({{"M", elements(e.M)}, {"n", e.n}});
    auto& bl = j["blocks"] = nlohmann::ordered_json::array();
    for (Subset M : all_subsets(A.spec.q)) {
        const auto& r = A.blocks.at(M);
        bl.push_back({{"M", elements(M)}, {"offset", r.offset}, {"size", r.size}});
    }
    if (include_data) {
        auto& d = j["data"] = nlohmann::ordered_json::array();
        for (int r = 0; r < A.dim(); ++r) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int c = 0; c < A.dim(); ++c)
                row.push_back({A.data(r, c).real(), A.data(r, c).imag()});
            d.push_back(std::move(row));
        }
    }
    return j;
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary matrix format assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is)
{
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof v))
        throw Error("matrix file truncated");
    return v;
}

const char kMagic[8] = {'S', 'T', 'Z', 'M', 'A', 'T', '0', '1'};

} // namespace

void write_matrix_binary(const Eigen::MatrixXcd& A, std::ostream& os)
{
    os.write(kMagic, 8);
    put<std::uint64_t>(os, std::uint64_t(A.rows()));
    put<std::uint64_t>(os, std::uint64_t(A.cols()));
    for (int r = 0; r < A.rows(); ++r)
        for (int c = 0; c < A.cols(); ++c) {
            put<double>(os, A(r, c).real());
            put<double>(os, A(r, c).imag());
        }
}

Eigen::MatrixXcd read_matrix_binary(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw Error("not a matrix file");
    const auto rows = get<std::uint64_t>(is);
    const auto cols = get<std::uint64_t>(is);
    Eigen::MatrixXcd A(rows, cols);
    for (std::uint64_t r = 0; r < rows; ++r)
        for (std::uint64_t c = 0; c < cols; ++c) {
            const double re = get<double>(is);
            const double im = get<double>(is);
            A(r, c) = cd(re, im);
        }
    return A;
}

} // namespace stz
