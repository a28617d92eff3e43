#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "strip/cli.hpp"

namespace fs = std::filesystem;
using strip::cli::run;

namespace {

const std::string kRoot = STRIP_SOURCE_DIR;
const std::string kCli = STRIP_CLI_PATH;

std::string cfg(const std::string& name) { return kRoot + "/configs/" + name; }

struct Result {
    int code = -1;
    std::string out, err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Result r;
    r.code = run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Runs the installed binary through the shell; stderr is discarded.
Result shell(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " '" + kCli + "' " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    Result r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string meta_value(const std::string& csv, const std::string& key)
{
    const std::string first = lines(csv).at(0);
    const auto pos = first.find(" " + key + "=");
    if (pos == std::string::npos) return {};
    const auto start = pos + key.size() + 2;
    return first.substr(start, first.find(' ', start) - start);
}

fs::path temp_file(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "strip_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("cli")
{
    TEST_CASE("modes table")
    {
        const Result r = shell("modes --epsilon 1 --a 1 --c 1 --l 3.141592653589793 --n 4");
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 6);
        CHECK(ls[0].rfind("# meta: command=modes", 0) == 0);
        CHECK(ls[1] == "n,gamma,b,h,omega,regime,slow_rate,fast_rate");
        CHECK(ls[2].find(",Critical,") != std::string::npos);
        CHECK(ls[3].find(",Overdamped,") != std::string::npos);
        CHECK(shell("modes --config '" + cfg("modes.cfg") + "'").out == r.out);
    }

    TEST_CASE("solve-linear reproduces t e^{-t} sin x")
    {
        const Result r = shell("solve-linear --config '" + cfg("solve_linear.cfg") + "'");
        REQUIRE(r.code == 0);
        bool found = false;
        for (const auto& l : lines(r.out)) {
            if (l.rfind("1.5707963267948966,1,", 0) == 0) {
                CHECK(std::stod(l.substr(21)) == doctest::Approx(0.367879441171).epsilon(1e-10));
                found = true;
            }
        }
        CHECK(found);
        CHECK(meta_value(r.out, "modes") == "16");
    }

    TEST_CASE("green")
    {
        const Result r = shell("green --config '" + cfg("green.cfg") + "'");
        REQUIRE(r.code == 0);
        const auto ls = lines(r.out);
        CHECK(ls[1] == "x,xi,t,G,G_t,flux");
        CHECK(ls.size() == 2 + 11 * 3);
    }

    TEST_CASE("solve-nonlinear and oracle")
    {
        const Result n = shell("solve-nonlinear --config '" + cfg("solve_nonlinear.cfg") + "'");
        REQUIRE(n.code == 0);
        CHECK(meta_value(n.out, "converged") == "true");
        CHECK(std::stod(meta_value(n.out, "a_priori_bound")) > 0.0);
        CHECK(lines(n.out)[1] == "x,t,u,u_t");
        CHECK(lines(n.out).size() == 2 + 65 * 21);

        const Result o = shell("oracle --config '" + cfg("oracle.cfg") + "'");
        REQUIRE(o.code == 0);
        CHECK(lines(o.out).size() == 2 + 65 * 11);
    }

    TEST_CASE("verify on the shipped linear corpus")
    {
        for (const auto& e : fs::directory_iterator(kRoot + "/configs/corpus")) {
            CAPTURE(e.path().string());
            const Result r = shell("verify --config '" + e.path().string() + "'");
            CHECK(r.code == 0);
            CHECK(meta_value(r.out, "result") == "PASS");
            CHECK(std::stod(meta_value(r.out, "max_disagreement")) <= std::stod(meta_value(r.out, "tolerance")));
        }
        const Result sg = shell("verify --config '" + cfg("verify_sine_gordon.cfg") + "'");
        CHECK(sg.code == 0);
        CHECK(meta_value(sg.out, "spectral") == "picard");
        CHECK(meta_value(sg.out, "result") == "PASS");
    }

    TEST_CASE("verify failure exits with 2")
    {
        const Result r = shell("verify --config '" + cfg("corpus/mode1_velocity.cfg") + "' --tolerance 1e-9");
        CHECK(r.code == 2);
        CHECK(meta_value(r.out, "result") == "FAIL");
    }

    TEST_CASE("decay-fit on a solved problem")
    {
        const fs::path csv = temp_file("decay_source.csv");
        REQUIRE(shell("solve-linear --config '" + cfg("decay_source.cfg") + "' --output '" + csv.string() + "'").code == 0);
        const Result r = shell("decay-fit --config '" + cfg("decay_fit.cfg") + "' --input '" + csv.string() + "'");
        REQUIRE(r.code == 0);
        const auto row = lines(r.out).at(2);
        CHECK(std::stod(row.substr(0, row.find(','))) == doctest::Approx(0.25).epsilon(0.05));
    }

    TEST_CASE("byte-identical output")
    {
        const std::string args = "solve-nonlinear --config '" + cfg("solve_nonlinear.cfg") + "' --horizon 4";
        const Result a = shell(args);
        const Result b = shell(args, "STRIP_SOLVER_THREADS=1");
        const Result c = shell(args, "STRIP_SOLVER_THREADS=3");
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
        const auto in_process = call({"solve-nonlinear", "--config", cfg("solve_nonlinear.cfg"), "--horizon", "4"});
        CHECK(in_process.out == a.out);
    }

    TEST_CASE("flags override the config file")
    {
        const Result r = call({"modes", "--config", cfg("modes.cfg"), "--n", "2", "--epsilon", "2"});
        REQUIRE(r.code == 0);
        CHECK(lines(r.out).size() == 4);
        CHECK(meta_value(r.out, "epsilon") == "2");
        const Result last = call({"modes", "--n", "2", "--n", "3"});
        CHECK(lines(last.out).size() == 5);
    }

    TEST_CASE("usage errors")
    {
        const fs::path bad = temp_file("bad.cfg");
        std::ofstream(bad) << "epsilon = 1\nnot-a-key = 3\n";
        const Result r = call({"modes", "--config", bad.string()});
        CHECK(r.code == 1);
        CHECK(r.err.find("not-a-key") != std::string::npos);
        CHECK(r.err.find("valid keys: a, c, epsilon, k, l, n, output") != std::string::npos);

        CHECK(call({}).code == 1);
        CHECK(call({"frobnicate"}).code == 1);
        CHECK(call({"modes", "--n", "abc"}).code == 1);
        CHECK(call({"modes", "--epsilon", "1,5"}).code == 1);
        CHECK(call({"modes", "--epsilon", "-1"}).code == 1);
        CHECK(call({"solve-linear", "--g0", "nonsense"}).code == 1);
        CHECK(call({"solve-linear", "--source", "sine-gordon"}).code == 1);
        CHECK(call({"decay-fit"}).code == 1);
        CHECK(call({"modes", "--config", "/nonexistent.cfg"}).code == 1);
        CHECK(call({"modes", "--help"}).code == 0);
    }

    TEST_CASE("numerical failures exit with 2")
    {
        CHECK(call({"green", "--times", "1", "--series-tol", "1e-12"}).code == 2);
        CHECK(call({"solve-nonlinear", "--source", "sine-gordon", "--bias", "0.5", "--g0", "sin", "--horizon", "1",
                    "--tol", "1e-15", "--max-iter", "2", "--max-depth", "0"})
                  .code == 2);
    }

    TEST_CASE("tabulated data")
    {
        const fs::path data = temp_file("g1.csv");
        {
            std::ofstream f(data);
            f.precision(17);
            f << "x,value\n";
            for (int i = 0; i <= 256; ++i) {
                const double x = 3.141592653589793 * i / 256.0;
                f << x << "," << std::sin(x) << "\n";
            }
        }
        const Result tab = call({"solve-linear", "--g1-file", data.string(), "--modes", "8", "--nx", "5", "--nt", "3"});
        REQUIRE(tab.code == 0);
        const Result named = call({"solve-linear", "--g1", "sin", "--modes", "8", "--nx", "5", "--nt", "3"});
        const auto a = lines(tab.out), b = lines(named.out);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 2; k < a.size(); ++k) {
            const double ua = std::stod(a[k].substr(a[k].rfind(',') + 1));
            const double ub = std::stod(b[k].substr(b[k].rfind(',') + 1));
            CHECK(std::abs(ua - ub) < 1e-5);
        }
    }

    TEST_CASE("config parser")
    {
        std::istringstream in("# comment\n  a = 1  \n\nb=two # trailing\n");
        const auto m = strip::cli::parse_config(in);
        CHECK(m.size() == 2);
        CHECK(m.at("a") == "1");
        CHECK(m.at("b") == "two");
        std::istringstream bad("novalue\n");
        CHECK_THROWS_AS(strip::cli::parse_config(bad), strip::cli::UsageError);
        CHECK_THROWS_AS(strip::cli::valid_keys("nope"), strip::cli::UsageError);
    }
}
