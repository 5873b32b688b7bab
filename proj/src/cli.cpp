#include "stz/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "stz/bergman.hpp"
#include "stz/errors.hpp"
#include "stz/oracle.hpp"
#include "stz/parallel.hpp"
#include "stz/presets.hpp"
#include "stz/spectra.hpp"

#ifndef STZ_VERSION
#define STZ_VERSION "unknown"
#endif

namespace stz {

namespace {

const std::vector<std::string> kSuites = {"identity", "kernel", "cayley", "commute", "diagonal", "bargmann", "all"};

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

double to_double(const std::string& s, const char* what)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size() || !std::isfinite(v))
        throw ParameterError(std::string("bad number '") + s + "' in " + what);
    return v;
}

std::vector<double> parse_list(const std::string& s, const char* what)
{
    std::vector<double> out;
    if (s.empty())
        return out;
    for (const auto& part : split(s, ','))
        out.push_back(to_double(part, what));
    return out;
}

bool is_siegel_with_xi(const MASGCase& k)
{
    return k.tag != CaseTag::QuasiElliptic;
}

std::size_t u_prime_size(const MASGCase& k, int p)
{
    if (k.tag == CaseTag::Nilpotent)
        return std::size_t(p - 1);
    if (k.tag == CaseTag::QuasiNilpotent)
        return std::size_t(p - k.k - 1);
    return 0;
}

int interior_degree(const RunConfig& c)
{
    return c.interior < 0 ? c.n_max / 2 : c.interior;
}

WeightedSpaceSpec ball_spec(const RunConfig& c)
{
    WeightedSpaceSpec s;
    s.domain = Domain::Ball;
    s.p = c.p;
    s.q = c.q;
    s.nu = c.nu;
    return s;
}

OracleOptions oracle_options(const RunConfig& c)
{
    OracleOptions o;
    o.torus = c.torus;
    o.radial = c.radial;
    o.closed_form = c.closed_form;
    return o;
}

TableRequest table_request(const RunConfig& c)
{
    TableRequest r;
    r.nu = c.nu;
    r.n_max = c.n_max;
    r.xi_grid = parse_xi_grid(c.xi);
    r.u_prime = parse_list(c.u_prime, "--u-prime");
    r.options.policy.rel_tol = c.rel_tol;
    r.options.policy.m_start = c.m_start;
    r.options.policy.m_max = c.m_max;
    r.options.closed_form = c.closed_form;
    r.options.strict_paper = c.strict_paper;
    return r;
}

std::string default_symbol(const RunConfig& c)
{
    if (c.command == "verify")
        return "random:" + std::to_string(c.seed);
    return "one";
}

bool suite_runs(const RunConfig& c, const std::string& s)
{
    return c.suite == s || c.suite == "all";
}

// Opens the output destination; the sidecar gets the metadata for formats
// that cannot carry it themselves.
class Output {
public:
    Output(const RunConfig& c, std::ostream& fallback) : path_(c.out)
    {
        if (path_.empty()) {
            os_ = &fallback;
            return;
        }
        file_.open(path_, std::ios::binary | std::ios::trunc);
        if (!file_)
            throw ParameterError("cannot open output file " + path_);
        os_ = &file_;
    }

    std::ostream& stream() { return *os_; }

    void sidecar(const nlohmann::ordered_json& meta, std::ostream& diag)
    {
        if (path_.empty())
            return;
        std::ofstream m(path_ + ".meta.json", std::ios::binary | std::ios::trunc);
        if (!m)
            diag << "stz: cannot write " << path_ << ".meta.json\n";
        m << meta.dump(2) << "\n";
    }

private:
    std::string path_;
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

nlohmann::ordered_json header(const RunConfig& c)
{
    nlohmann::ordered_json j;
    j["stz_version"] = STZ_VERSION;
    j["config"] = config_to_json(c);
    return j;
}

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass() const { return std::isfinite(value) && value <= tolerance; }
};

void note(const RunConfig& c, std::ostream& diag, const std::string& msg)
{
    if (c.verbosity > 0)
        diag << "stz: " << msg << "\n";
}

SuperPoint random_super_point(int p, int q, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    SuperPoint Z;
    Z.even = random_ball_point(p, rng);
    for (int k = 0; k < q; ++k)
        Z.odd.push_back(cd(nd(rng), nd(rng)));
    return Z;
}

double max_diff(const cvec& a, const cvec& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void suite_identity(const RunConfig& c, std::vector<Check>& out)
{
    BallFunction one;
    one.f = [](const cvec&) { return cd(1.0); };
    one.rotation_invariant.assign(c.p, false);
    const auto A = assemble_super_toeplitz(scalar_ball_symbol(c.p, c.q, one), ball_spec(c), c.n_max, oracle_options(c));
    out.push_back({"identity_defect", identity_defect(A, interior_degree(c)), 1e-10});
}

void suite_kernel(const RunConfig& c, std::vector<Check>& out)
{
    const auto spec = ball_spec(c);
    std::mt19937_64 rng(c.seed);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const auto psi = random_super_polynomial(c.p, c.q, 4, rng);
        worst = std::max(worst, reproduce_check(spec, psi, random_ball_point(c.p, rng)));
    }
    out.push_back({"reproducing_residual", worst, 1e-10});
}

void suite_cayley(const RunConfig& c, std::vector<Check>& out)
{
    std::mt19937_64 rng(c.seed);
    double round = 0.0, pair1 = 0.0, pair2 = 0.0, ber = 0.0;
    for (int t = 0; t < 100; ++t) {
        const SuperPoint Z = random_super_point(c.p, c.q, rng);
        const SuperPoint U = random_super_point(c.p, c.q, rng);
        const BallPoint z = ball_point(Z.even);
        round = std::max(round, max_diff(cayley_inv(cayley(z)).z, z.z));
        const SuperPoint back = cayley_inv_super(cayley_super(Z));
        round = std::max(round, std::max(max_diff(back.even, Z.even), max_diff(back.odd, Z.odd)));
        const auto [r1, r2] = pairing_identity_residuals(Z, U);
        pair1 = std::max(pair1, r1);
        pair2 = std::max(pair2, r2);
        const cd closed = cayley_berezinian(z, c.q);
        ber = std::max(ber, std::abs(closed - berezinian(cayley_jacobian(z, c.q))) / std::abs(closed));
    }
    out.push_back({"cayley_roundtrip", round, 1e-12});
    out.push_back({"pairing_identity_1", pair1, 1e-12});
    out.push_back({"pairing_identity_2", pair2, 1e-12});
    out.push_back({"berezinian_relative", ber, 1e-12});
}

void suite_commute(const RunConfig& c, std::vector<Check>& out, std::ostream& diag)
{
    const MASGCase kase = parse_case(c.kase, c.k);
    const auto spec = ball_spec(c);
    const auto opt = oracle_options(c);
    note(c, diag, "assembling " + c.symbol);
    const auto A = assemble_super_toeplitz(make_ball_symbol(c.symbol, kase, c.p, c.q), spec, c.n_max, opt);
    note(c, diag, "assembling " + c.symbol2);
    const auto B = assemble_super_toeplitz(make_ball_symbol(c.symbol2, kase, c.p, c.q), spec, c.n_max, opt);
    out.push_back({"commutator_norm", commutator_norm(A, B, interior_degree(c)), 1e-7});
}

void suite_diagonal(const RunConfig& c, std::vector<Check>& out, std::ostream& diag)
{
    const MASGCase kase = parse_case(c.kase, c.k);
    const SuperSymbol F = make_symbol(c.symbol, kase, c.p, c.q);
    BallSuperSymbol G = pullback_to_ball(F);
    for (auto& [key, f] : G.coeffs) {
        f.radial.reset();
        f.rotation_invariant.assign(c.p, false);
    }
    note(c, diag, "assembling " + c.symbol + " without symmetry hints");
    const auto A = assemble_super_toeplitz(G, ball_spec(c), c.n_max, oracle_options(c));
    const int deg = interior_degree(c);
    out.push_back({"diagonality_defect", diagonality_defect(A, deg), 1e-8});

    note(c, diag, "building the spectral table");
    const SpectralTable t = build_table(F, table_request(c));
    double worst = 0.0;
    for (int i : A.interior(deg)) {
        const auto& b = A.index[std::size_t(i)];
        const SpectralEntry* e = t.find(b.M, b.n);
        const double d = e ? std::abs(A.data(i, i) - e->value) : NAN;
        worst = std::isfinite(d) ? std::max(worst, d) : NAN;
        if (!std::isfinite(worst))
            break;
    }
    out.push_back({"diagonal_vs_table", worst, 1e-8});
}

void suite_bargmann(const RunConfig& c, std::vector<Check>& out)
{
    const auto spec = ball_spec(c);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const int deg = std::min(c.n_max, 4);
    const auto idx = basis(c.p, c.q, deg);
    double rr = 0.0, norm = 0.0;
    for (int t = 0; t < 100; ++t) {
        CoeffFamily fam;
        for (const auto& b : idx)
            fam[b] = cd(U(rng), U(rng));
        const CoeffFamily back = bargmann_qe_forward(spec, bargmann_qe_adjoint(spec, fam));
        for (const auto& [b, v] : fam) {
            const auto it = back.find(b);
            rr = std::max(rr, std::abs((it == back.end() ? cd(0.0) : it->second) - v));
        }
        const auto psi = random_super_polynomial(c.p, c.q, deg, rng);
        const double lhs = super_inner_product(spec, psi, psi).real();
        const double rhs = family_norm_sq(bargmann_qe_forward(spec, psi));
        norm = std::max(norm, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    out.push_back({"bargmann_r_rstar", rr, 1e-12});
    out.push_back({"bargmann_norm", norm, 1e-12});
}

} // namespace

std::vector<double> parse_xi_grid(const std::string& spec)
{
    if (spec.rfind("log:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 4)
            throw ParameterError("xi grid must be log:lo:hi:count, got " + spec);
        const double lo = to_double(parts[1], "--xi"), hi = to_double(parts[2], "--xi");
        const double n = to_double(parts[3], "--xi");
        if (!(lo > 0.0) || !(hi >= lo) || n < 1 || n != std::floor(n) || n > 1e6)
            throw ParameterError("bad log grid " + spec);
        return log_grid(lo, hi, int(n));
    }
    auto xs = parse_list(spec, "--xi");
    if (xs.empty())
        throw ParameterError("empty xi grid");
    for (double x : xs)
        if (!(x > 0.0))
            throw ParameterError("xi values must be positive");
    return xs;
}

void validate(RunConfig& c)
{
    if (c.command != "gamma" && c.command != "verify" && c.command != "matrix")
        throw ParameterError("unknown command '" + c.command + "'");
    const MASGCase kase = parse_case(c.kase, c.k);
    validate_case(kase, c.p);
    if (c.q < 0 || c.q > kMaxGenerators)
        throw ParameterError("q must lie in [0, " + std::to_string(kMaxGenerators) + "]");
    if (c.n_max < 0 || c.n_max > 512)
        throw ParameterError("nmax must lie in [0, 512]");
    if (!(c.rel_tol > 0.0) || c.m_start < 2 || c.m_max < c.m_start)
        throw ParameterError("need rel-tol > 0 and 2 <= m-start <= m-max");
    if (c.torus < 1 || c.radial < 1)
        throw ParameterError("torus and radial point counts must be positive");
    if (c.interior > c.n_max)
        throw ParameterError("interior degree exceeds nmax");
    if (c.threads < 0)
        throw ParameterError("thread count must be non-negative");

    if (c.symbol.empty())
        c.symbol = default_symbol(c);
    if (c.command == "verify" && c.symbol2.empty())
        c.symbol2 = "random:" + std::to_string(c.seed + 1);

    if (c.command == "gamma") {
        if (c.format.empty())
            c.format = "json";
        if (c.format != "json" && c.format != "csv")
            throw ParameterError("gamma writes json or csv");
        WeightedSpaceSpec s;
        s.domain = case_domain(kase);
        s.p = c.p;
        s.q = c.q;
        s.nu = c.nu;
        s.validate();
        if (is_siegel_with_xi(kase))
            parse_xi_grid(c.xi);
        const auto u = parse_list(c.u_prime, "--u-prime");
        if (!u.empty() && u.size() != u_prime_size(kase, c.p))
            throw ParameterError("--u-prime needs " + std::to_string(u_prime_size(kase, c.p)) + " entries");
        make_symbol(c.symbol, kase, c.p, c.q);
    } else if (c.command == "matrix") {
        if (c.format.empty())
            c.format = "bin";
        if (c.format != "json" && c.format != "bin")
            throw ParameterError("matrix writes bin or json");
        ball_spec(c).validate();
        ball_spec(c).level(0);
        make_ball_symbol(c.symbol, kase, c.p, c.q);
    } else {
        if (c.format.empty())
            c.format = "json";
        if (c.format != "json")
            throw ParameterError("verify writes json");
        bool known = false;
        for (const auto& s : kSuites)
            known = known || s == c.suite;
        if (!known)
            throw ParameterError("unknown suite '" + c.suite + "'");
        ball_spec(c).validate();
        ball_spec(c).level(0);
        if (c.suite == "diagonal" && kase.tag != CaseTag::QuasiElliptic)
            throw ParameterError("the diagonal suite needs the quasi-elliptic case");
        if (suite_runs(c, "commute")) {
            make_ball_symbol(c.symbol, kase, c.p, c.q);
            make_ball_symbol(c.symbol2, kase, c.p, c.q);
        }
        if (c.suite == "diagonal" || (c.suite == "all" && kase.tag == CaseTag::QuasiElliptic))
            make_symbol(c.symbol, kase, c.p, c.q);
    }
}

nlohmann::ordered_json config_to_json(const RunConfig& c)
{
    nlohmann::ordered_json j;
    j["command"] = c.command;
    j["case"] = c.kase;
    j["k"] = c.k;
    j["p"] = c.p;
    j["q"] = c.q;
    j["nu"] = c.nu;
    j["n_max"] = c.n_max;
    j["xi"] = c.xi;
    j["u_prime"] = c.u_prime;
    j["symbol"] = c.symbol;
    if (c.command == "verify") {
        j["symbol2"] = c.symbol2;
        j["suite"] = c.suite;
    }
    j["rel_tol"] = c.rel_tol;
    j["m_start"] = c.m_start;
    j["m_max"] = c.m_max;
    j["torus"] = c.torus;
    j["radial"] = c.radial;
    j["interior"] = interior_degree(c);
    j["seed"] = c.seed;
    j["format"] = c.format;
    j["strict_paper"] = c.strict_paper;
    j["closed_form"] = c.closed_form;
    return j;
}

int cmd_gamma(const RunConfig& c, std::ostream& out, std::ostream& diag)
{
    const MASGCase kase = parse_case(c.kase, c.k);
    const SuperSymbol F = make_symbol(c.symbol, kase, c.p, c.q);
    const TableRequest req = table_request(c);
    note(c, diag, "building " + case_name(kase) + " table for " + c.symbol);
    const SpectralTable t = build_table(F, req);

    Output o(c, out);
    if (c.format == "csv") {
        o.stream() << table_to_csv(t);
        o.sidecar(header(c), diag);
    } else {
        auto j = header(c);
        const auto body = table_to_json(t);
        for (const auto& [key, v] : body.items())
            j[key] = v;
        o.stream() << j.dump(2) << "\n";
    }
    o.stream().flush();
    if (!t.all_converged()) {
        diag << "stz: some spectral entries did not converge; see the error fields\n";
        return kExitNonConvergence;
    }
    return kExitOk;
}

int cmd_matrix(const RunConfig& c, std::ostream& out, std::ostream& diag)
{
    const MASGCase kase = parse_case(c.kase, c.k);
    note(c, diag, "assembling " + c.symbol);
    const auto A = assemble_super_toeplitz(make_ball_symbol(c.symbol, kase, c.p, c.q), ball_spec(c), c.n_max,
                                           oracle_options(c));
    Output o(c, out);
    if (c.format == "bin") {
        write_matrix_binary(A.data, o.stream());
        auto meta = header(c);
        meta["matrix"] = matrix_to_json(A, false);
        o.sidecar(meta, diag);
    } else {
        auto j = header(c);
        j["matrix"] = matrix_to_json(A, true);
        o.stream() << j.dump(2) << "\n";
    }
    o.stream().flush();
    return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& diag)
{
    std::vector<Check> checks;
    const bool qe = parse_case(c.kase, c.k).tag == CaseTag::QuasiElliptic;
    if (suite_runs(c, "identity")) {
        note(c, diag, "suite identity");
        suite_identity(c, checks);
    }
    if (suite_runs(c, "kernel")) {
        note(c, diag, "suite kernel");
        suite_kernel(c, checks);
    }
    if (suite_runs(c, "cayley")) {
        note(c, diag, "suite cayley");
        suite_cayley(c, checks);
    }
    if (suite_runs(c, "bargmann")) {
        note(c, diag, "suite bargmann");
        suite_bargmann(c, checks);
    }
    if (c.suite == "diagonal" || (c.suite == "all" && qe)) {
        note(c, diag, "suite diagonal");
        suite_diagonal(c, checks, diag);
    }
    if (suite_runs(c, "commute")) {
        note(c, diag, "suite commute");
        suite_commute(c, checks, diag);
    }

    bool all = true;
    auto j = header(c);
    j["suite"] = c.suite;
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& ch : checks) {
        all = all && ch.pass();
        nlohmann::ordered_json e;
        e["name"] = ch.name;
        if (std::isfinite(ch.value))
            e["value"] = ch.value;
        else
            e["value"] = nullptr;
        e["tolerance"] = ch.tolerance;
        e["pass"] = ch.pass();
        arr.push_back(e);
        if (!ch.pass())
            diag << "stz: check " << ch.name << " failed: " << ch.value << " > " << ch.tolerance << "\n";
    }
    j["pass"] = all;

    Output o(c, out);
    o.stream() << j.dump(2) << "\n";
    o.stream().flush();
    return all ? kExitOk : kExitVerifyFailed;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& diag)
{
    RunConfig c;
    CLI::App app{"Super Toeplitz operators: spectral tables, truncated matrices and verification suites", "stz"};
    app.set_version_flag("--version", std::string(STZ_VERSION));
    app.require_subcommand(1);

    auto common = [&c](CLI::App* s) {
        s->add_option("--case", c.kase, "quasi-elliptic | quasi-parabolic | quasi-hyperbolic | nilpotent | quasi-nilpotent")
            ->capture_default_str();
        s->add_option("--k", c.k, "number of rotation coordinates in the quasi-nilpotent case")->capture_default_str();
        s->add_option("--p", c.p, "even dimension")->capture_default_str();
        s->add_option("--q", c.q, "odd dimension")->capture_default_str();
        s->add_option("--nu", c.nu, "weight parameter")->capture_default_str();
        s->add_option("--nmax", c.n_max, "largest |n|")->capture_default_str();
        s->add_option("--symbol", c.symbol, "symbol preset, name(:param)*");
        s->add_option("--torus", c.torus, "angles per circle in matrix assembly")->capture_default_str();
        s->add_option("--radial", c.radial, "radial Jacobi points in matrix assembly")->capture_default_str();
        s->add_option("--seed", c.seed, "seed for random symbols and test points")->capture_default_str();
        s->add_option("--out", c.out, "output file, standard output when omitted");
        s->add_option("--format", c.format, "json | csv | bin");
        s->add_flag("--strict-paper", c.strict_paper, "alternative constants kept for comparison");
        s->add_flag("!--no-closed-form", c.closed_form, "always integrate numerically");
        s->add_option("--threads", c.threads, "worker threads, 0 for all cores");
        s->add_flag("-v,--verbose", c.verbosity, "progress messages on the diagnostic stream");
    };
    auto spectral = [&c](CLI::App* s) {
        s->add_option("--xi", c.xi, "xi grid: comma list or log:lo:hi:count")->capture_default_str();
        s->add_option("--u-prime", c.u_prime, "comma list for the nilpotent cases, zeros by default");
        s->add_option("--rel-tol", c.rel_tol, "adaptive quadrature tolerance")->capture_default_str();
        s->add_option("--m-start", c.m_start, "initial points per axis")->capture_default_str();
        s->add_option("--m-max", c.m_max, "largest points per axis")->capture_default_str();
    };

    auto* gamma = app.add_subcommand("gamma", "spectral table of an invariant symbol");
    common(gamma);
    spectral(gamma);
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    common(verify);
    spectral(verify);
    verify->add_option("--suite", c.suite, "identity | kernel | cayley | commute | diagonal | bargmann | all")
        ->capture_default_str();
    verify->add_option("--symbol2", c.symbol2, "second symbol of the commute suite");
    verify->add_option("--interior", c.interior, "interior degree, nmax/2 by default");
    auto* matrix = app.add_subcommand("matrix", "truncated super Toeplitz matrix");
    common(matrix);
    matrix->add_option("--interior", c.interior, "interior degree, nmax/2 by default");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, diag);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, diag);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, diag);
        return kExitConfig;
    }
    for (auto* s : {gamma, verify, matrix})
        if (s->parsed())
            c.command = s->get_name();

    bool threads_given = false;
    for (auto* s : {gamma, verify, matrix})
        if (s->parsed() && s->count("--threads") > 0)
            threads_given = true;
    if (!threads_given)
        if (const char* env = std::getenv("STZ_THREADS"))
            c.threads = std::atoi(env);
    if (c.verbosity == 0)
        if (const char* env = std::getenv("STZ_VERBOSE"))
            c.verbosity = std::atoi(env);

    try {
        validate(c);
    } catch (const Error& e) {
        diag << "stz: " << e.what() << "\n";
        return kExitConfig;
    }
    set_thread_count(c.threads);

    try {
        if (c.command == "gamma")
            return cmd_gamma(c, out, diag);
        if (c.command == "matrix")
            return cmd_matrix(c, out, diag);
        return cmd_verify(c, out, diag);
    } catch (const ConvergenceError& e) {
        diag << "stz: " << e.what() << " (last change " << e.last_delta << ")\n";
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        diag << "stz: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace stz
