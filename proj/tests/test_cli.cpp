#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracbern/config.hpp"
#include "fracbern/csv.hpp"
#include "fracbern/errors.hpp"

#include <bit>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

using namespace fracbern;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> minimal_solve_keys() {
    return {
        {"kernel", "conformable"}, {"alpha", "0.5"}, {"p", "1"}, {"q", "1"}, {"n", "2"},
        {"a", "0.5"}, {"b", "2"}, {"y0", "-1"}, {"N", "200"},
    };
}

fs::path scratch_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("fracbern_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FRACBERN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string run_cli_capture(const std::string& args, const fs::path& dir) {
    const fs::path log = dir / "stdout.txt";
    const std::string cmd =
        std::string(FRACBERN_CLI_PATH) + " " + args + " >" + log.string() + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0)
        return read_file(log) + "\n[nonzero exit]";
    return read_file(log);
}

} // namespace

TEST_CASE("shortest round-trip formatting survives reparsing bitwise") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -0.138379560668148, 3.141592653589793, -0.0, 2.0,
                     0.0115195756295232}) {
        const std::string text = format_double(v);
        const double back = parse_double(text);
        CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
    }
    CHECK(format_double(-1.0) == "-1");
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("12x"), ConfigError);
    CHECK_THROWS_AS(parse_double(""), ConfigError);

    // Randomized bit patterns, including subnormals and extreme exponents.
    std::mt19937_64 rng(0xc5fULL);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t bits = rng();
        const double v = std::bit_cast<double>(bits);
        if (std::isnan(v) || std::isinf(v)) continue;
        const double back = parse_double(format_double(v));
        CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(v));
    }
}

TEST_CASE("load_config: minimal solve profile and required keys") {
    const RunConfig cfg = load_config(minimal_solve_keys(), ConfigProfile::Solve);
    CHECK(cfg.kernel_spec == "conformable");
    CHECK(cfg.alphas.size() == 1);
    CHECK(cfg.n == 2.0);
    REQUIRE(cfg.n_rational.has_value());
    CHECK(cfg.n_rational->num == 2);
    CHECK(cfg.n_divisions == 200);
    CHECK(cfg.y0 == -1.0);

    auto missing_n = minimal_solve_keys();
    missing_n.erase("n");
    try {
        load_config(missing_n, ConfigProfile::Solve);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "n");
    }
}

TEST_CASE("load_config: alpha sweeps, fractions and validation") {
    auto keys = minimal_solve_keys();
    keys["alpha"] = "0.1,0.3,0.5,0.7,0.9,1.0";
    CHECK(load_config(keys, ConfigProfile::Solve).alphas.size() == 6);

    keys["alpha"] = "0.5,1.5";
    CHECK_THROWS_AS(load_config(keys, ConfigProfile::Solve), ConfigError);
    keys["alpha"] = "0.5";

    keys["n"] = "4/3";
    const RunConfig frac = load_config(keys, ConfigProfile::Solve);
    REQUIRE(frac.n_rational.has_value());
    CHECK(frac.n_rational->num == 4);
    CHECK(frac.n_rational->den == 3);

    keys["n"] = "1";
    CHECK_THROWS_AS(load_config(keys, ConfigProfile::Solve), ConfigError);
    keys["n"] = "2";

    keys["N"] = "3";
    CHECK_THROWS_AS(load_config(keys, ConfigProfile::Solve), ConfigError);
    keys["N"] = "200";

    keys["C"] = "1";  // both y0 and C
    CHECK_THROWS_AS(load_config(keys, ConfigProfile::Solve), ConfigError);
    keys.erase("C");

    keys["method"] = "magic";
    CHECK_THROWS_AS(load_config(keys, ConfigProfile::Solve), ConfigError);
    keys["method"] = "both";
    CHECK(load_config(keys, ConfigProfile::Solve).method == "both");

    keys["p"] = "2*";
    CHECK_THROWS_AS(load_config(keys, ConfigProfile::Solve), ConfigError);
}

TEST_CASE("load_config: profile-specific requirements") {
    // Stability does not need b or N.
    std::map<std::string, std::string> stab{{"kernel", "conformable"}, {"alpha", "0.5"},
                                            {"p", "1"}, {"q", "1"}, {"n", "2"}, {"a", "0.5"}};
    const RunConfig sc = load_config(stab, ConfigProfile::Stability);
    CHECK(sc.b > sc.a);

    // Gronwall needs the four expressions.
    std::map<std::string, std::string> gron{{"kernel", "custom:1"}, {"alpha", "1"},
                                            {"a", "0"}, {"b", "2"}, {"r", "exp(t)"},
                                            {"c", "1"}, {"d", "1"}, {"k", "1"}};
    CHECK_NOTHROW(load_config(gron, ConfigProfile::Gronwall));
    gron.erase("k");
    CHECK_THROWS_AS(load_config(gron, ConfigProfile::Gronwall), ConfigError);

    // Converge needs a non-empty Ns list.
    auto conv = minimal_solve_keys();
    CHECK_THROWS_AS(load_config(conv, ConfigProfile::Converge), ConfigError);
    conv["Ns"] = "";
    CHECK_THROWS_AS(load_config(conv, ConfigProfile::Converge), ConfigError);
    conv["Ns"] = "100,200,400";
    CHECK(load_config(conv, ConfigProfile::Converge).ns_list.size() == 3);
}

TEST_CASE("config files parse key = value lines with comments") {
    const fs::path dir = scratch_dir("cfg");
    write_file(dir / "a.conf", "# comment\nkernel = conformable\n\nn = 2 # trailing\n");
    const auto keys = read_config_file((dir / "a.conf").string());
    CHECK(keys.at("kernel") == "conformable");
    CHECK(keys.at("n") == "2");
    write_file(dir / "bad.conf", "just words\n");
    CHECK_THROWS_AS(read_config_file((dir / "bad.conf").string()), ConfigError);
    CHECK_THROWS_AS(read_config_file((dir / "missing.conf").string()), ConfigError);
}

TEST_CASE("cli: solve writes the expected first row and is deterministic") {
    const fs::path dir = scratch_dir("solve");
    write_file(dir / "eq1.conf",
               "kernel = conformable\np = 1\nq = 1\nn = 2\na = 0.5\nb = 2\ny0 = -1\n"
               "alpha = 0.5\nN = 200\nmethod = both\n");
    const std::string base = "--config " + (dir / "eq1.conf").string();
    REQUIRE(run_cli(base + " --out " + (dir / "out1").string() + " solve") == 0);
    REQUIRE(run_cli(base + " --out " + (dir / "out2").string() + " solve") == 0);

    const std::string csv1 = read_file(dir / "out1" / "solve_alpha_0.5.csv");
    const std::string csv2 = read_file(dir / "out2" / "solve_alpha_0.5.csv");
    CHECK(csv1 == csv2);  // byte-identical across runs
    CHECK(csv1.rfind("t,y_exact,y_fdm,abs_error\n0.5,-1,-1,0\n", 0) == 0);
}

TEST_CASE("cli: flag overrides beat file keys") {
    const fs::path dir = scratch_dir("override");
    write_file(dir / "eq1.conf",
               "kernel = conformable\np = 1\nq = 1\nn = 2\na = 0.5\nb = 2\ny0 = -1\n"
               "alpha = 0.5\nN = 200\nmethod = both\n");
    const std::string out = (dir / "out").string();
    REQUIRE(run_cli("--config " + (dir / "eq1.conf").string() + " --out " + out +
                    " --method exact --alpha 0.3,0.7 solve") == 0);
    CHECK(fs::exists(dir / "out" / "solve_alpha_0.3.csv"));
    CHECK(fs::exists(dir / "out" / "solve_alpha_0.7.csv"));
    const std::string csv = read_file(dir / "out" / "solve_alpha_0.3.csv");
    CHECK(csv.rfind("t,y\n", 0) == 0);
}

TEST_CASE("cli: config errors exit nonzero with the key on stderr") {
    const fs::path dir = scratch_dir("badcfg");
    write_file(dir / "bad.conf",
               "kernel = conformable\np = 1\nq = 1\na = 0.5\nb = 2\ny0 = -1\n"
               "alpha = 0.5\nN = 200\n");  // n missing
    CHECK(run_cli("--config " + (dir / "bad.conf").string() + " solve") != 0);
    CHECK(run_cli("solve") != 0);  // no config at all
}

TEST_CASE("cli: example 2 emits one csv per alpha, each through (0.5, -0.5)") {
    const fs::path dir = scratch_dir("ex2");
    const std::string out = (dir / "out").string();
    REQUIRE(run_cli("--out " + out + " --n-divisions 100 example 2") == 0);
    int count = 0;
    for (const char* alpha : {"0.1", "0.3", "0.5", "0.7", "0.9", "1"}) {
        const fs::path csv = dir / "out" / (std::string("example2_alpha_") + alpha + ".csv");
        REQUIRE(fs::exists(csv));
        const std::string text = read_file(csv);
        CHECK(text.rfind("t,y\n0.5,-0.5\n", 0) == 0);
        ++count;
    }
    CHECK(count == 6);
}

TEST_CASE("cli: example 1 summary reports the reference endpoint") {
    const fs::path dir = scratch_dir("ex1");
    const std::string out = (dir / "out").string();
    const std::string text =
        run_cli_capture("--out " + out + " --n-divisions 400 --alpha 0.5 example 1", dir);
    CHECK(text.find("-0.13837956066814") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "example1_table.csv"));
}

TEST_CASE("cli: custom kernels restricted to the problem interval work end to end") {
    const fs::path dir = scratch_dir("customk");
    write_file(dir / "c.conf",
               "kernel = custom:t^(1-alpha)\np = 1\nq = 1\nn = 2\na = 0.5\nb = 2\ny0 = -1\n"
               "alpha = 0.5\nN = 100\nmethod = exact\n");
    write_file(dir / "ref.conf",
               "kernel = conformable\np = 1\nq = 1\nn = 2\na = 0.5\nb = 2\ny0 = -1\n"
               "alpha = 0.5\nN = 100\nmethod = exact\n");
    REQUIRE(run_cli("--config " + (dir / "c.conf").string() + " --out " +
                    (dir / "out1").string() + " solve") == 0);
    REQUIRE(run_cli("--config " + (dir / "ref.conf").string() + " --out " +
                    (dir / "out2").string() + " solve") == 0);
    CHECK(read_file(dir / "out1" / "solve_alpha_0.5.csv") ==
          read_file(dir / "out2" / "solve_alpha_0.5.csv"));
}

TEST_CASE("cli: example 3 writes the comparison table and a summary") {
    const fs::path dir = scratch_dir("ex3");
    const std::string out = (dir / "out").string();
    const std::string text =
        run_cli_capture("--out " + out + " --n-divisions 400 --alpha 0.5 example 3", dir);
    CHECK(text.find("summary:") != std::string::npos);
    CHECK(text.find("max |y_fdm - y_exact|") != std::string::npos);
    const std::string table = read_file(dir / "out" / "example3_table.csv");
    CHECK(table.rfind("t,y_exact,y_fdm,abs_error\n-3,1,1,0\n", 0) == 0);
}

TEST_CASE("cli: stability prints classification and evidence") {
    const fs::path dir = scratch_dir("stab");
    write_file(dir / "s.conf",
               "kernel = conformable\np = 1\nq = 1\nn = 2\na = 0.5\nalpha = 0.5\n"
               "horizon = 1e7\nsamples = 64\n");
    const std::string text = run_cli_capture("--config " + (dir / "s.conf").string() +
                                             " stability", dir);
    CHECK(text.find("classification: AsymptoticallyStable") != std::string::npos);
    CHECK(text.find("J(p) final") != std::string::npos);

    write_file(dir / "u.conf",
               "kernel = custom:1\np = 0\nq = 0\nn = 2\na = 0\nalpha = 1\nk = exp(-t)\n"
               "epsilon = 1\n");
    const std::string ub = run_cli_capture("--config " + (dir / "u.conf").string() +
                                           " stability", dir);
    CHECK(ub.find("uniform bound: N = ") != std::string::npos);
    CHECK(ub.find("uniformly stable") != std::string::npos);
}

TEST_CASE("cli: gronwall verdict and csv columns") {
    const fs::path dir = scratch_dir("gron");
    write_file(dir / "g.conf",
               "kernel = custom:1\nalpha = 1\na = 0\nb = 2\nr = exp(t)-0.001\n"
               "c = 1\nd = 1\nk = 1\nN = 100\n");
    const std::string out = (dir / "out").string();
    const std::string text = run_cli_capture(
        "--config " + (dir / "g.conf").string() + " --out " + out + " gronwall", dir);
    CHECK(text.find("verdict: ok") != std::string::npos);
    const std::string csv = read_file(dir / "out" / "gronwall.csv");
    CHECK(csv.rfind("t,r,bound,violated\n", 0) == 0);

    // A trajectory above the bound flips the verdict; the exit code stays 0
    // (only solver/config errors are nonzero).
    write_file(dir / "viol.conf",
               "kernel = custom:1\nalpha = 1\na = 0\nb = 2\nr = exp(t)+1\n"
               "c = 1\nd = 1\nk = 1\nN = 100\n");
    const std::string viol = run_cli_capture(
        "--config " + (dir / "viol.conf").string() + " --out " + out + " gronwall", dir);
    CHECK(viol.find("verdict: violated") != std::string::npos);
}

TEST_CASE("cli: FRACBERN_TOL loosens the default quadrature tolerance") {
    const fs::path dir = scratch_dir("tol");
    // Integrable singularity at the base point: the default 1e-10 request is
    // unreachable at depth 50, but 1e-6 succeeds.
    const std::string args = "operators --op jintegral --f 1 --kernel conformable "
                             "--op-alpha 0.5 --a 0 --t 1";
    CHECK(run_cli(args) != 0);
    const std::string cmd = "FRACBERN_TOL=1e-6 " + std::string(FRACBERN_CLI_PATH) + " " + args +
                            " >" + (dir / "v.txt").string() + " 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const double v = parse_double(read_file(dir / "v.txt").substr(0, read_file(dir / "v.txt").find('\n')));
    CHECK(std::abs(v - 2.0) <= 1e-5);
}

TEST_CASE("cli: converge command emits orders") {
    const fs::path dir = scratch_dir("conv");
    write_file(dir / "c.conf",
               "kernel = conformable\np = 1\nq = 1\nn = 2\na = 0.5\nb = 2\ny0 = -1\n"
               "alpha = 0.5\nN = 400\nNs = 50,100,200\nbootstrap = forward-euler\n"
               "mid = stay-at-bootstrap\nmain = stay-at-mid\nstartup_substeps = 1\n");
    const std::string out = (dir / "out").string();
    const std::string text = run_cli_capture(
        "--config " + (dir / "c.conf").string() + " --out " + out + " converge", dir);
    CHECK(text.find("order = 1.0") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "converge.csv"));
}
