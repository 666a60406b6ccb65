#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ddopt/trace_io.hpp"

using namespace ddopt;

namespace {

const std::string cli = DDOPT_CLI_PATH;

int run_cmd(const std::string& args) {
    // leave caller-provided redirections alone
    std::string suffix = args.find('>') == std::string::npos ? " > /dev/null 2>&1" : "";
    int rc = std::system((cli + " " + args + suffix).c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("scalar run emits the exact geometric trace") {
    std::string out = "/tmp/ddopt_cli_onedim.csv";
    REQUIRE(run_cmd("run --experiment one-dim --set theta=0.5 --set x0=1 --iters 20 --output " +
                    out) == 0);
    auto trace = trace_from_csv(slurp(out));
    REQUIRE(trace.records.size() >= 21);
    for (std::size_t t = 0; t <= 20; ++t)
        CHECK(std::abs(trace.records[t].x[0] - std::pow(0.5, static_cast<double>(t))) <= 1e-12);
    std::remove(out.c_str());
}

TEST_CASE("unknown experiment or key exits with the usage code") {
    CHECK(run_cmd("run --experiment nonsense") == 2);
    CHECK(run_cmd("run --experiment one-dim --set nope=1") == 2);
    CHECK(run_cmd("run --experiment one-dim --set theta=abc") == 2);
    CHECK(run_cmd("frobnicate") == 2);
}

TEST_CASE("same seed and config give byte-identical traces") {
    std::string a = "/tmp/ddopt_cli_det_a.csv";
    std::string b = "/tmp/ddopt_cli_det_b.csv";
    std::string args =
        "run --experiment market --set eps=0.3 --set eps_g=0.3 --algorithm rda --eta 0.1 "
        "--iters 200 --seed 42 --output ";
    REQUIRE(run_cmd(args + a) == 0);
    REQUIRE(run_cmd(args + b) == 0);
    CHECK(slurp(a) == slurp(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("trace csv round trip through the io helpers") {
    std::string out = "/tmp/ddopt_cli_rt.csv";
    REQUIRE(run_cmd("run --experiment market --set eps=0.2 --iters 50 --output " + out) == 0);
    auto original = slurp(out);
    CHECK(trace_to_csv(trace_from_csv(original)) == original);
    std::remove(out.c_str());
}

TEST_CASE("json format parses and mirrors the csv run") {
    std::string out = "/tmp/ddopt_cli_run.json";
    REQUIRE(run_cmd("run --experiment one-dim --set theta=0.5 --iters 5 --format json --output " +
                    out) == 0);
    auto text = slurp(out);
    CHECK(text.find("\"status\"") != std::string::npos);
    CHECK(text.find("\"x_0\"") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("analyze prints a constants report") {
    std::string out = "/tmp/ddopt_cli_an.json";
    REQUIRE(run_cmd("analyze --experiment one-dim --set theta=0.5 > " + out + " 2>/dev/null") ==
            0);
    auto text = slurp(out);
    for (const char* key : {"\"gamma\"", "\"gamma_d\"", "\"rcm_condition\"", "\"s1\""})
        CHECK(text.find(key) != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("analyze with the bound flag reports applicability") {
    std::string out = "/tmp/ddopt_cli_bound.json";
    REQUIRE(run_cmd("analyze --experiment market --set eps=0.2 --set eps_g=0.2 --bound "
                    "--grid 41 > " +
                    out + " 2>/dev/null") == 0);
    auto text = slurp(out);
    CHECK(text.find("\"bound_applicable\"") != std::string::npos);
    CHECK(text.find("\"bound_value\"") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("auto step size refuses when the window is undefined") {
    // at these sensitivities the dual premises fail, so 'auto' must exit
    // with a diagnostic instead of inventing a step
    CHECK(run_cmd("run --experiment market --set eps=0.7 --set eps_g=0.7 --algorithm rda "
                  "--eta auto") == 1);
}

TEST_CASE("sweep writes one cell per grid point plus an index") {
    std::string dir = "/tmp/ddopt_cli_sweep";
    std::system(("rm -rf " + dir).c_str());
    REQUIRE(run_cmd("sweep --experiment market --sweep eps=0,0.2,0.5 --sweep eps_g=0,0.2,0.5 "
                    "--iters 60 --output " +
                    dir) == 0);
    int cells = 0;
    for (int i = 0; i < 9; ++i) {
        std::ifstream f(dir + "/cell_" + std::to_string(i) + ".csv");
        if (f.good()) ++cells;
    }
    CHECK(cells == 9);
    auto index = slurp(dir + "/index.json");
    CHECK(index.find("\"eps\"") != std::string::npos);
    CHECK(index.find("cell_8") != std::string::npos);

    // a single-cell sweep reproduces the plain run byte for byte
    std::string single = "/tmp/ddopt_cli_single";
    std::system(("rm -rf " + single).c_str());
    REQUIRE(run_cmd("sweep --experiment market --sweep eps=0.2 --iters 60 --seed 9 --output " +
                    single) == 0);
    std::string plain = "/tmp/ddopt_cli_plain.csv";
    REQUIRE(run_cmd("run --experiment market --set eps=0.2 --iters 60 --seed 9 --output " +
                    plain) == 0);
    CHECK(slurp(single + "/cell_0.csv") == slurp(plain));
    std::remove(plain.c_str());
    std::system(("rm -rf " + dir + " " + single).c_str());
}
