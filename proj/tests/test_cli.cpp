#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "stz/cli.hpp"
#include "stz/errors.hpp"

using namespace stz;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string diag;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "stz");
    std::ostringstream o, d;
    Run r;
    r.code = run_cli(args, o, d);
    r.out = o.str();
    r.diag = d.str();
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch_dir()
{
    const fs::path d = fs::temp_directory_path() / ("stz_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("xi grid specs")
{
    const auto g = parse_xi_grid("log:0.05:20:32");
    REQUIRE(g.size() == 32);
    CHECK(g.front() == 0.05);
    CHECK(g.back() == 20.0);
    CHECK(parse_xi_grid("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
    for (const char* bad : {"", "log:1:0.5:3", "log:0:1:3", "log:1:2", "0,1", "-1", "a,b", "1,,2"})
        CHECK_THROWS_AS(parse_xi_grid(bad), ParameterError);
}

TEST_CASE("gamma: all-ones table")
{
    const auto r = run({"gamma", "--case", "quasi-elliptic", "--p", "1", "--q", "1", "--nu", "2", "--symbol", "one",
                        "--nmax", "8"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["stz_version"] == STZ_VERSION);
    CHECK(j["config"]["symbol"] == "one");
    CHECK(j["config"]["n_max"] == 8);
    CHECK(j["entries"].size() == 18);
    for (const auto& e : j["entries"])
        CHECK(e["value"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gamma: quasi-parabolic closed form, json and csv")
{
    const std::vector<std::string> base{"gamma", "--case", "quasi-parabolic", "--p", "1", "--q", "0", "--nu", "3",
                                        "--symbol", "parabolic:exp", "--xi", "0.5,1,2"};
    const auto r = run(base);
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["entries"].size() == 3);
    for (const auto& e : j["entries"]) {
        const double xi = e["xi"];
        CHECK(std::abs(e["value"].get<double>() - std::pow(2.0 * xi / (2.0 * xi + 1.0), 2.0)) < 1e-12);
    }
    auto csv_args = base;
    csv_args.insert(csv_args.end(), {"--format", "csv"});
    const auto c = run(csv_args);
    REQUIRE(c.code == kExitOk);
    CHECK(c.out.rfind("M,n,xi,value,err,converged\r\n", 0) == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 4);
    CHECK(c.out.find(",0.25,") != std::string::npos);
}

TEST_CASE("gamma: non-convergence still writes the table")
{
    const auto dir = scratch_dir();
    const auto path = dir / "nc.json";
    const auto r = run({"gamma", "--case", "quasi-parabolic", "--p", "2", "--q", "0", "--symbol",
                        "random:3", "--no-closed-form", "--xi", "0.05", "--nu", "3.5", "--nmax", "1", "--m-start", "4", "--m-max",
                        "4", "--out", path.string()});
    CHECK(r.code == kExitNonConvergence);
    REQUIRE(fs::exists(path));
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["entries"].size() == 2);
    CHECK(j["entries"][0]["converged"] == false);
    fs::remove_all(dir);
}

TEST_CASE("configuration errors")
{
    const auto dir = scratch_dir();
    const auto path = dir / "never.json";
    const auto r = run({"gamma", "--symbol", "radial:poly", "--out", path.string()});
    CHECK(r.code == kExitConfig);
    CHECK_FALSE(fs::exists(path));
    CHECK(r.diag.find("radial:poly") != std::string::npos);

    CHECK(run({"gamma", "--p", "1", "--q", "0", "--nu", "1.5"}).code == kExitConfig);
    CHECK(run({"gamma", "--case", "elliptic"}).code == kExitConfig);
    CHECK(run({"gamma", "--case", "quasi-parabolic", "--xi", "0,1"}).code == kExitConfig);
    CHECK(run({"gamma", "--case", "nilpotent", "--p", "3", "--nu", "4", "--u-prime", "1"}).code == kExitConfig);
    CHECK(run({"gamma", "--format", "bin"}).code == kExitConfig);
    CHECK(run({"gamma", "--bogus"}).code == kExitConfig);
    CHECK(run({"verify", "--suite", "everything"}).code == kExitConfig);
    CHECK(run({"verify", "--suite", "diagonal", "--case", "quasi-parabolic"}).code == kExitConfig);
    CHECK(run({"matrix", "--symbol", "nonminvariant:re-z2"}).code == kExitConfig);
    CHECK(run({"matrix", "--interior", "9", "--nmax", "4"}).code == kExitConfig);
    CHECK(run({}).code == kExitConfig);
    fs::remove_all(dir);
}

TEST_CASE("help and version")
{
    const auto h = run({"--help"});
    CHECK(h.code == kExitOk);
    CHECK(h.out.find("gamma") != std::string::npos);
    const auto v = run({"--version"});
    CHECK(v.code == kExitOk);
    CHECK(v.out.find(STZ_VERSION) != std::string::npos);
}

TEST_CASE("verify suites")
{
    const auto id = run({"verify", "--suite", "identity", "--p", "1", "--q", "1", "--nu", "2", "--nmax", "16"});
    REQUIRE(id.code == kExitOk);
    const auto j = nlohmann::json::parse(id.out);
    CHECK(j["pass"] == true);
    CHECK(j["suite"] == "identity");
    REQUIRE(j["checks"].size() >= 1);
    CHECK(j["checks"][0]["value"].get<double>() <= 1e-10);
    CHECK(j["checks"][0]["tolerance"].get<double>() == 1e-10);

    const auto com = run({"verify", "--suite", "commute", "--case", "quasi-elliptic", "--p", "2", "--q", "1", "--nu",
                          "4", "--nmax", "10"});
    CHECK(com.code == kExitOk);

    const auto neg = run({"verify", "--suite", "commute", "--symbol", "nonminvariant:re-z1", "--symbol2",
                          "radial:poly:2", "--p", "1", "--q", "1", "--nu", "2", "--nmax", "10"});
    CHECK(neg.code == kExitVerifyFailed);
    const auto n = nlohmann::json::parse(neg.out);
    CHECK(n["pass"] == false);
    CHECK(n["checks"][0]["value"].get<double>() > 1e-3);

    for (const char* s : {"kernel", "cayley", "bargmann", "diagonal"})
        CHECK(run({"verify", "--suite", s, "--p", "1", "--q", "1", "--nu", "2.5", "--nmax", "8"}).code == kExitOk);
}

TEST_CASE("matrix output")
{
    const auto r = run({"matrix", "--symbol", "one", "--p", "1", "--q", "1", "--nu", "2", "--nmax", "5", "--format",
                        "json"});
    REQUIRE(r.code == kExitOk);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["config"]["format"] == "json");
    const auto& m = j["matrix"];
    REQUIRE(m["dim"] == 12);
    for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b) {
            const double re = m["data"][a][b][0], im = m["data"][a][b][1];
            CHECK(std::abs(re - (a == b ? 1.0 : 0.0)) < 1e-12);
            CHECK(std::abs(im) < 1e-12);
        }
}

TEST_CASE("deterministic outputs")
{
    const auto dir = scratch_dir();
    const std::vector<std::string> mat{"matrix", "--symbol", "random:4", "--case", "quasi-parabolic", "--p", "2",
                                       "--q", "1", "--nu", "3.5", "--nmax", "4", "--torus", "16", "--radial", "12"};
    auto a = mat, b = mat;
    a.insert(a.end(), {"--out", (dir / "a.bin").string(), "--threads", "1"});
    b.insert(b.end(), {"--out", (dir / "b.bin").string(), "--threads", "3"});
    REQUIRE(run(a).code == kExitOk);
    REQUIRE(run(b).code == kExitOk);
    CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));
    CHECK(slurp(dir / "a.bin.meta.json") == slurp(dir / "b.bin.meta.json"));
    CHECK(slurp(dir / "a.bin").rfind("STZMAT01", 0) == 0);
    const auto meta = nlohmann::json::parse(slurp(dir / "a.bin.meta.json"));
    CHECK(meta["config"]["symbol"] == "random:4");
    CHECK_FALSE(meta["config"].contains("threads"));
    CHECK_FALSE(meta["config"].contains("out"));

    const std::vector<std::string> gam{"gamma", "--case", "quasi-hyperbolic", "--p", "2", "--q", "1", "--nu", "2.5",
                                       "--symbol", "random:2", "--nmax", "2", "--xi", "log:0.1:5:4"};
    auto c = gam, d = gam;
    c.insert(c.end(), {"--out", (dir / "c.csv").string(), "--format", "csv"});
    d.insert(d.end(), {"--out", (dir / "d.csv").string(), "--format", "csv", "--threads", "2"});
    REQUIRE(run(c).code == kExitOk);
    REQUIRE(run(d).code == kExitOk);
    CHECK(slurp(dir / "c.csv") == slurp(dir / "d.csv"));
    CHECK(slurp(dir / "c.csv.meta.json") == slurp(dir / "d.csv.meta.json"));
    fs::remove_all(dir);
}

TEST_CASE("the installed binary follows the exit-code contract")
{
    const std::string bin = STZ_CLI_PATH;
    const auto code = [&](const std::string& args) {
        const int s = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(code("gamma --symbol one --nmax 2") == 0);
    CHECK(code("gamma --symbol nonsense") == 1);
    CHECK(code("verify --suite commute --symbol nonminvariant:re-z1 --symbol2 radial:poly:2 --nmax 8") == 3);
}

} // TEST_SUITE
