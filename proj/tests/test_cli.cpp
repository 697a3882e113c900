#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "boxlab/bell.hpp"
#include "boxlab/box.hpp"
#include "boxlab/constructors.hpp"
#include "boxlab/wiring.hpp"

namespace fs = std::filesystem;
using namespace boxlab;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("boxlab_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args, const std::string& env = "") {
    const fs::path out = work_dir() / "stdout.txt";
    const std::string cmd = env + (env.empty() ? "" : " ") + BOXLAB_CLI_PATH + " " +
                            args + " > " + out.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out);
    std::ostringstream os;
    os << in.rdbuf();
    r.out = os.str();
    return r;
}

std::string path_of(const std::string& name) { return (work_dir() / name).string(); }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double value_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST_CASE("make writes the expected boxes") {
    auto r = run("make ghz -o " + path_of("g.box"));
    REQUIRE(r.exit_code == 0);
    const Box3 g = deserialize_box3(slurp(path_of("g.box")));
    CHECK(max_abs_diff(g, ghz_box()) < 1e-12);

    r = run("make peps-alpha --eps 0.9 --alpha 0.5 -o " + path_of("p.box"));
    REQUIRE(r.exit_code == 0);
    CHECK(max_abs_diff(deserialize_box3(slurp(path_of("p.box"))),
                       p_eps_alpha(EpsParams(0.9), 0.5)) < 1e-15);

    r = run("make noise -o " + path_of("n.box"));
    REQUIRE(r.exit_code == 0);
    CHECK(max_abs_diff(deserialize_box3(slurp(path_of("n.box"))), noise_box()) == 0.0);

    r = run("make pr --a 0 --b 0 --g 0 -o " + path_of("pr.box"));
    REQUIRE(r.exit_code == 0);
    CHECK(max_abs_diff(deserialize_box2(slurp(path_of("pr.box"))), pr_box(0, 0, 0)) ==
          0.0);

    r = run("make det --f1 0 --f2 0 --f3 0 -o " + path_of("d.box"));
    REQUIRE(r.exit_code == 0);

    CHECK(run("make bogus -o " + path_of("x.box")).exit_code == 2);
    CHECK(run("make peps-alpha --eps 1.5 --alpha 0.5 -o " + path_of("x.box"))
              .exit_code == 2);
}

TEST_CASE("classify exit codes and single-class queries") {
    REQUIRE(run("make noise -o " + path_of("n.box")).exit_code == 0);
    REQUIRE(run("make peps-alpha --eps 0.9 --alpha 0.5 -o " + path_of("p.box"))
                .exit_code == 0);

    auto r = run("classify " + path_of("n.box") + " --class FL");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"verdict\": \"In\"") != std::string::npos);

    r = run("classify " + path_of("p.box") + " --class ATOBL_UNION");
    CHECK(r.exit_code == 3);

    r = run("classify " + path_of("p.box") + " --class ATOBL_HULL");
    CHECK(r.exit_code == 0);

    CHECK(run("classify " + path_of("missing.box")).exit_code == 2);
    CHECK(run("classify " + path_of("p.box") + " --class BOGUS").exit_code == 2);

    // wrong arity: a bipartite box cannot be classified
    REQUIRE(run("make pr --a 0 --b 0 --g 0 -o " + path_of("pr.box")).exit_code == 0);
    CHECK(run("classify " + path_of("pr.box")).exit_code == 2);

    const fs::path junk = work_dir() / "junk.box";
    std::ofstream(junk) << "{ nope";
    CHECK(run("classify " + junk.string()).exit_code == 2);
}

TEST_CASE("full classification of the GHZ box") {
    REQUIRE(run("make ghz -o " + path_of("g.box")).exit_code == 0);
    const auto r = run("classify " + path_of("g.box"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"finest_class\": \"ATOBL_LEFT\"") != std::string::npos);
}

TEST_CASE("wire and chsh pipeline") {
    REQUIRE(run("make ghz -o " + path_of("g.box")).exit_code == 0);
    REQUIRE(run("wire " + path_of("g.box") + " --protocol 2to3 -o " + path_of("q.box"))
                .exit_code == 0);
    auto r = run("chsh " + path_of("q.box"));
    CHECK(r.exit_code == 0);
    CHECK(value_after(r.out, "canonical ") ==
          doctest::Approx(2.1213203436).epsilon(1e-9));

    REQUIRE(run("make noise -o " + path_of("n.box")).exit_code == 0);
    REQUIRE(run("wire " + path_of("n.box") + " --protocol 3to2 -o " + path_of("u.box"))
                .exit_code == 0);
    r = run("chsh " + path_of("u.box"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("canonical 0\n") != std::string::npos);

    r = run("chsh " + path_of("pr.box"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("max 4") != std::string::npos);

    r = run("chsh " + path_of("q.box") + " --variant 1,1,-1,1");
    CHECK(value_after(r.out, "variant ") ==
          doctest::Approx(2.1213203436).epsilon(1e-9));

    // wrong arities
    CHECK(run("wire " + path_of("pr.box") + " --protocol 2to3 -o " + path_of("x.box"))
              .exit_code == 2);
    CHECK(run("chsh " + path_of("g.box")).exit_code == 2);
    CHECK(run("wire " + path_of("g.box") + " --protocol sideways -o " + path_of("x.box"))
              .exit_code == 2);
}

TEST_CASE("scan produces a deterministic CSV") {
    const std::string args = "scan --eps-step 0.5 --alpha-step 0.5 -o ";
    REQUIRE(run(args + path_of("a.csv")).exit_code == 0);
    REQUIRE(run(args + path_of("b.csv")).exit_code == 0);
    const std::string a = slurp(path_of("a.csv"));
    CHECK(a == slurp(path_of("b.csv")));
    CHECK(a.find("eps,alpha,chsh_2to3,chsh_3to2") == 0);
    // header + 3 x 3 grid rows
    CHECK(std::count(a.begin(), a.end(), '\n') == 10);

    CHECK(run("scan --eps-step -0.5 -o " + path_of("x.csv")).exit_code == 2);
    CHECK(run("scan --eps-max 1.5 -o " + path_of("x.csv")).exit_code == 2);
}

TEST_CASE("witness prints the separating functional") {
    REQUIRE(run("make ghz -o " + path_of("g.box")).exit_code == 0);
    auto r = run("witness " + path_of("g.box") + " --class ATOBL_RIGHT");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("ATOBL_RIGHT Out") != std::string::npos);
    CHECK(r.out.find("margin") != std::string::npos);

    REQUIRE(run("make noise -o " + path_of("n.box")).exit_code == 0);
    r = run("witness " + path_of("n.box") + " --class FL");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("In FL") != std::string::npos);

    REQUIRE(run("make peps-alpha --eps 0.9 --alpha 0.5 -o " + path_of("p.box"))
                .exit_code == 0);
    r = run("witness " + path_of("p.box") + " --class ATOBL_UNION");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("ATOBL_LEFT Out") != std::string::npos);
    CHECK(r.out.find("ATOBL_RIGHT Out") != std::string::npos);
}

TEST_CASE("tolerance override via the environment") {
    REQUIRE(run("make noise -o " + path_of("n.box")).exit_code == 0);
    CHECK(run("classify " + path_of("n.box") + " --class FL", "BOXLAB_TOL=1e-6")
              .exit_code == 0);
    CHECK(run("classify " + path_of("n.box"), "BOXLAB_TOL=abc").exit_code == 2);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run("").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
    CHECK(run("classify").exit_code == 2);
    CHECK(run("--help").exit_code == 0);
}
