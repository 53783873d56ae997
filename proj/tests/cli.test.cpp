#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"

namespace {

struct RunResult {
    int rc = -1;
    std::string out;  // stdout and stderr interleaved
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(FTDECAY_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int status = pclose(p);
    r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

// First "value=<re><sign><im>i" occurrence -> (re, im).
bool parse_value(const std::string& out, double& re, double& im) {
    size_t pos = out.find("value=");
    if (pos == std::string::npos) return false;
    const char* s = out.c_str() + pos + 6;
    char* end = nullptr;
    re = std::strtod(s, &end);
    if (end == s) return false;
    im = std::strtod(end, &end);
    return true;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Data rows only (everything not starting with '#').
std::vector<std::string> data_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#') rows.push_back(line);
    return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("ft prints the closed-form volume at zero frequency") {
    RunResult r = run("ft --body ball:d=2,r=1 --xi 0,0");
    CHECK(r.rc == 0);
    CHECK(r.out.find("value=3.1415926535897931+0i") != std::string::npos);
    CHECK(r.out.find("method=closed-form") != std::string::npos);
    CHECK(r.out.find("err=0") != std::string::npos);
}

TEST_CASE("box transform vanishes at a full-precision sinc zero") {
    RunResult r = run("ft --body box:d=2,h=0.5,0.5 --xi 6.283185307179586,0");
    CHECK(r.rc == 0);
    double re = 1.0, im = 1.0;
    REQUIRE(parse_value(r.out, re, im));
    CHECK(std::fabs(re) <= 1e-12);
    CHECK(std::fabs(im) <= 1e-12);

    // the same zero quoted to four decimals is only as good as its rounding
    RunResult r4 = run("ft --body box:d=2,h=0.5,0.5 --xi 6.2832,0");
    REQUIRE(parse_value(r4.out, re, im));
    CHECK(std::fabs(re) <= 1e-5);
}

TEST_CASE("ft evaluates polytope files") {
    std::string path = "cli_test_square.txt";
    {
        std::ofstream f(path);
        f << "# unit square as half-planes\n"
          << "1 0 0.5\n-1 0 0.5\n0 1 0.5\n0 -1 0.5\n";
    }
    RunResult r = run("ft --body poly:file=" + path + " --xi 1.3,0.4");
    CHECK(r.rc == 0);
    CHECK(r.out.find("method=exact-recursion") != std::string::npos);
    double re = 0.0, im = 1.0;
    REQUIRE(parse_value(r.out, re, im));
    CHECK(std::fabs(re - 0.9248613710295951) < 1e-12);
    CHECK(std::fabs(im) < 1e-15);
    std::remove(path.c_str());
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run("ft --body ball:d=1,r=1 --xi 0,0").rc == 2);
    CHECK(run("ft --body ball:d=2,r=1 --xi 0,0,0").rc == 2);  // arity mismatch
    CHECK(run("ft --body ball:d=2,r=1").rc == 2);             // missing --xi
    CHECK(run("--bogus").rc == 2);
    CHECK(run("").rc == 2);  // a subcommand is required
    CHECK(run("avg-decay --body ball:d=2,r=1 --fit wild").rc == 2);
    CHECK(run("avg-decay --body ball:d=2,r=1 --rmin 64 --rmax 32").rc == 2);
    CHECK(run("pointwise --body ball:d=2,r=1 --omega 0,0").rc == 2);
    CHECK(run("lattice --body ball:d=2,r=1 --ensemble axis-angle").rc == 2);
    RunResult help = run("--help");
    CHECK(help.rc == 0);
    CHECK(help.out.find("avg-decay") != std::string::npos);
}

TEST_CASE("evaluator failures exit with code 3") {
    // the pinned node budget cannot cover |xi| = 1e8
    RunResult r = run("ft --body pball:d=2,p=4,r=1 --xi 1e8,0");
    CHECK(r.rc == 3);
    CHECK(r.out.find("budget") != std::string::npos);
}

TEST_CASE("scan CSV output is structured and reproducible") {
    std::string path = "cli_test_scan.csv";
    std::string cmd = "avg-decay --body ball:d=2,r=1 --rmin 8 --rmax 32 --ppo 4 "
                      "--fit direct --out " + path;
    RunResult r = run(cmd);
    CHECK(r.rc == 0);
    // bare summary on stdout when writing to a file
    CHECK(r.out.find("exponent=") != std::string::npos);
    CHECK(r.out.find("# ") == std::string::npos);

    std::string csv = slurp(path);
    CHECK(csv.find("# ftdecay avg-decay body=ball:d=2,r=1") != std::string::npos);
    CHECK(csv.find("# columns: R,value,se,ok") != std::string::npos);
    CHECK(csv.find("# summary:") != std::string::npos);
    CHECK(csv.find("target=-1.5") != std::string::npos);
    CHECK(data_rows(csv).size() == 9);  // 2 octaves at 4 ppo, inclusive grid

    RunResult again = run(cmd);
    CHECK(again.rc == 0);
    CHECK(slurp(path) == csv);  // byte-identical rerun

    std::string path2 = "cli_test_scan_jobs.csv";
    RunResult jobs = run("avg-decay --body ball:d=2,r=1 --rmin 8 --rmax 32 --ppo 4 "
                         "--fit direct --jobs 2 --out " + path2);
    CHECK(jobs.rc == 0);
    CHECK(data_rows(slurp(path2)) == data_rows(csv));  // same numbers, any job count

    std::remove(path.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("fit failure exits 4 but still writes the series") {
    std::string path = "cli_test_narrow.csv";
    RunResult r = run("avg-decay --body ball:d=2,r=1 --rmin 8 --rmax 16 --ppo 2 "
                      "--fit direct --out " + path);
    CHECK(r.rc == 4);
    std::string csv = slurp(path);
    CHECK(data_rows(csv).size() == 3);
    CHECK(csv.find("fit-failed") != std::string::npos);
    CHECK(csv.find("status=fail") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("lattice CSV carries samples and the rms series") {
    RunResult r = run("lattice --body ball:d=2,r=1 --tmin 4 --tmax 32 --ppo 3 --nrot 4");
    CHECK(r.rc == 0);
    CHECK(r.out.find("# columns: t,rot_index,count,discrepancy") != std::string::npos);
    CHECK(r.out.find("# columns: t,rms,se,ok") != std::string::npos);
    CHECK(r.out.find("# summary:") != std::string::npos);
    CHECK(r.out.find("target=0.66666666666666663") != std::string::npos);
}

TEST_CASE("pointwise scan accepts a direction and reports its target") {
    RunResult r = run("pointwise --body box:d=2,h=0.5,0.5 --omega 0.70710678,0.70710678 "
                      "--rmin 8 --rmax 64 --ppo 4 --fit direct");
    // the diagonal of a square decays fast; only the structure is asserted here
    CHECK((r.rc == 0 || r.rc == 4));
    CHECK(r.out.find("target=-1") != std::string::npos);
    CHECK(r.out.find("omega=") != std::string::npos);
}

TEST_CASE("quick check suite passes end to end") {
    RunResult r = run("check --quick");
    CHECK(r.rc == 0);
    CHECK(r.out.find("[PASS]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("check:") != std::string::npos);
}

}  // TEST_SUITE
