// Runs the momentflow executable; its path comes from MOMENTFLOW_CLI_PATH.

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(MOMENTFLOW_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) r.out += buf;
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("momentflow_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

void put(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("brackets listing") {
    const auto r = run("brackets --nmax 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("{G^{0,2},G^{2,2}} = 4G^{1,2}") != std::string::npos);
}

TEST_CASE("simulate writes CSV and metadata") {
    const auto d = scratch("sim");
    const auto r = run("simulate --model harmonic --nmax 2 --out " + d.string());
    REQUIRE(r.code == 0);
    const std::string csv = slurp(d / "run.csv");
    CHECK(csv.rfind("# momentflow ", 0) == 0);
    CHECK(csv.find("\nt,q,p,G_0_2,G_1_2,G_2_2\n") != std::string::npos);
    CHECK(fs::exists(d / "run.json"));
    const auto again = scratch("sim2");
    REQUIRE(run("simulate --model harmonic --nmax 2 --out " + again.string()).code == 0);
    // identical apart from the output directory recorded in the config line
    std::string a = csv, b = slurp(again / "run.csv");
    a = a.substr(a.find("\nt,"));
    b = b.substr(b.find("\nt,"));
    CHECK(a == b);
}

TEST_CASE("configuration errors exit with 3") {
    CHECK(run("simulate --model duffing").code == 3);
    CHECK(run("simulate --bogus-flag").code == 3);
    const auto d = scratch("cfg");
    put(d / "c.json", R"({"model": "harmonic", "paramz": {}})");
    const auto r = run("simulate --config " + (d / "c.json").string() + " --out " + d.string());
    CHECK(r.code == 3);
    CHECK(r.out.find("paramz") != std::string::npos);
    put(d / "bad.json", "{not json");
    CHECK(run("simulate --config " + (d / "bad.json").string()).code == 3);
    CHECK(run("compare --model cosmology --out " + d.string()).code == 3);
}

TEST_CASE("cosmology collapse stops with 2 and keeps the partial trajectory") {
    const auto d = scratch("cosmo");
    put(d / "c.json", R"({"model": "cosmology", "n_max": 2, "params": {"hbar": 0.01, "g0": 1.0, "g3": 1.0},
        "initial": {"type": "cosmology", "q": -1.0, "p": 1.0, "constraint": false},
        "time": {"t0": 0.0, "t1": 10.0, "samples": 101}})");
    const auto r = run("simulate --config " + (d / "c.json").string() + " --out " + d.string());
    CHECK(r.code == 2);
    const std::string csv = slurp(d / "run.csv");
    CHECK(csv.find("\nt,c,p,") != std::string::npos);
    int lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines > 4);
    CHECK(lines < 101 + 3);
}

TEST_CASE("uncertainty reports on a state file") {
    const auto d = scratch("unc");
    put(d / "s.json", R"({"hbar": 1.0, "q": 0.0, "p": 0.0, "moments": {"G_0_2": 0.5, "G_1_2": 0.0, "G_2_2": 0.5}})");
    const auto r = run("uncertainty " + (d / "s.json").string());
    CHECK(r.code == 0);
    CHECK(r.out.find("saturated") != std::string::npos);
    put(d / "v.json", R"({"hbar": 1.0, "q": 0.0, "p": 0.0, "moments": {"G_0_2": 0.1, "G_1_2": 0.0, "G_2_2": 0.5}})");
    CHECK(run("uncertainty " + (d / "v.json").string()).out.find("violated") != std::string::npos);
}

TEST_CASE("order check and adiabatic subcommands") {
    const auto d = scratch("ord");
    const auto r = run("order-check --model harmonic --out " + d.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("exact") != std::string::npos);
    CHECK(fs::exists(d / "run_order_check.json"));
    CHECK(run("adiabatic --model quartic --hbar 0.1 --out " + d.string()).code == 0);
    CHECK(fs::exists(d / "run_adiabatic.csv"));
}
