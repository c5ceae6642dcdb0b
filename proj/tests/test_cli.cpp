#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(EXEC_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream out;
    out << f.rdbuf();
    return out.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

const std::string kBasicConfig = std::string(CONFIG_DIR) + "/basic.json";

}  // namespace

TEST_CASE("solve writes the coefficient table and a manifest") {
    TempDir dir("optexec_cli_solve");
    CHECK(run("solve " + kBasicConfig + " -o " + dir.str()) == 0);
    const std::string csv = slurp(dir.path / "coeffs.csv");
    CHECK(csv.rfind("t,L\n", 0) == 0);
    const std::string manifest = slurp(dir.path / "manifest.json");
    CHECK(manifest.find("\"command\": \"solve\"") != std::string::npos);
    CHECK(manifest.find("coeffs.csv") != std::string::npos);
}

TEST_CASE("malformed configuration exits 1 and writes nothing") {
    TempDir dir("optexec_cli_bad");
    const fs::path bad = dir.path.string() + "_config.json";
    std::ofstream(bad) << "{\"model\": \"basic\", \"sigma\": }";
    CHECK(run("solve " + bad.string() + " -o " + dir.str()) == 1);
    CHECK(!fs::exists(dir.path / "coeffs.csv"));
    // unknown model tag is also a configuration error
    std::ofstream(bad) << "{\"model\": \"exotic\", \"T\": 5}";
    CHECK(run("solve " + bad.string() + " -o " + dir.str()) == 1);
    fs::remove(bad);
}

TEST_CASE("unusable cutoff exits 2") {
    TempDir dir("optexec_cli_cutoff");
    CHECK(run("solve " + kBasicConfig + " --cutoff 1e-9 -o " + dir.str()) == 2);
}

TEST_CASE("simulate is deterministic for a fixed seed") {
    TempDir a("optexec_cli_sim_a");
    TempDir b("optexec_cli_sim_b");
    const std::string common = " --paths 8 --seed 42 --steps 200 --emit-paths 2 -o ";
    CHECK(run("simulate " + kBasicConfig + common + a.str()) == 0);
    CHECK(run("simulate " + kBasicConfig + common + b.str()) == 0);
    CHECK(slurp(a.path / "summary.json") == slurp(b.path / "summary.json"));
    CHECK(slurp(a.path / "path_0.csv") == slurp(b.path / "path_0.csv"));
    CHECK(slurp(a.path / "path_1.csv") == slurp(b.path / "path_1.csv"));
    CHECK(slurp(a.path / "path_0.csv") != slurp(a.path / "path_1.csv"));
    CHECK(slurp(a.path / "path_0.csv").rfind("t,S,extra,X,v,Y\n", 0) == 0);
}

TEST_CASE("signal config with theta 0 produces no cross terms") {
    TempDir dir("optexec_cli_theta0");
    CHECK(run("solve " + std::string(CONFIG_DIR) + "/signal_theta0.json -o " + dir.str()) == 0);
    std::ifstream csv(dir.path / "coeffs.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "t,D,E,F,H,I,L,M,N,Q");
    while (std::getline(csv, line)) {
        // columns F (3), M (7), N (8) must be exactly zero
        std::istringstream row(line);
        std::string cell;
        for (int col = 0; std::getline(row, cell, ','); ++col) {
            if (col == 3 || col == 7 || col == 8) CHECK(cell == "0");
        }
    }
}

TEST_CASE("figures command emits its data files and passes its checks") {
    TempDir dir("optexec_cli_figures");
    CHECK(run("figures -o " + dir.str()) == 0);
    CHECK(fs::exists(dir.path / "manifest.json"));
    bool any_csv = false;
    for (const auto& entry : fs::directory_iterator(dir.path))
        if (entry.path().extension() == ".csv") any_csv = true;
    CHECK(any_csv);
}

TEST_CASE("bad command line is rejected") {
    CHECK(run("frobnicate") != 0);
    CHECK(run("solve") != 0);                 // missing config
    CHECK(run("validate --level bogus") != 0);
}
