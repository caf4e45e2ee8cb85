#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + MKDV_CLI + "\" " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string config(const std::string& name) { return std::string(MKDV_CONFIG_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mkdv_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path p = fs::temp_directory_path() / ("mkdv_cli_cfg_" + name + ".json");
    std::ofstream(p) << body;
    return p;
}

}  // namespace

TEST_CASE("scatter on the kink reports a single eigenvalue at i") {
    const fs::path out = scratch("kink");
    REQUIRE(run("scatter --config " + config("scatter_kink.json") + " --out " + out.string()) == 0);
    std::istringstream spec(slurp(out / "spectrum.txt"));
    std::string header;
    std::getline(spec, header);
    double re, im;
    spec >> re >> im;
    CHECK(std::abs(re) < 1e-6);
    CHECK(std::abs(im - 1.0) < 1e-6);
    CHECK(fs::exists(out / "manifest.json"));
    CHECK(fs::exists(out / "r_table.txt"));
}

TEST_CASE("scatter on the background reports an empty spectrum") {
    const fs::path out = scratch("background");
    REQUIRE(run("scatter --config " + config("scatter_background.json") + " --out " + out.string()) == 0);
    std::istringstream spec(slurp(out / "spectrum.txt"));
    std::string line;
    int lines = 0;
    while (std::getline(spec, line)) ++lines;
    CHECK(lines == 1);
}

TEST_CASE("identical runs produce identical tables") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(run("scatter --config " + config("scatter_noisy.json") + " --seed 11 --out " + a.string()) == 0);
    REQUIRE(run("scatter --config " + config("scatter_noisy.json") + " --seed 11 --threads 3 --out " + b.string()) == 0);
    for (const char* f : {"r_table.txt", "spectrum.txt", "symmetry.txt"}) CHECK(slurp(a / f) == slurp(b / f));
    const fs::path c = scratch("det_c");
    REQUIRE(run("scatter --config " + config("scatter_noisy.json") + " --seed 12 --out " + c.string()) == 0);
    CHECK(slurp(a / "r_table.txt") != slurp(c / "r_table.txt"));
}

TEST_CASE("exit codes") {
    const fs::path out = scratch("codes");
    CHECK(run("scatter --out " + out.string()) == 2);
    CHECK(run("scatter --config /nonexistent.json --out " + out.string()) == 2);
    CHECK(run("predict --config " + write_config("neg_t", R"({"solitons":[{"arg_deg":60,"c_abs":1}],"times":[0],"x":{"min":-10,"max":0,"points":11}})").string() +
              " --out " + out.string()) == 2);
    CHECK(run("scatter --config " + write_config("unknown", R"({"potential":{"type":"kink"},"bogus":1})").string() +
              " --out " + out.string()) == 2);
    CHECK(run("simulate --config " +
              write_config("unstable", R"({"potential":{"type":"kink","perturbation":{"amplitude":0.1,"center":0,"width":1}},
                 "simulation":{"L":30,"N":301,"scheme":"rk4","dt":0.01,"stability_factor":1e6,"t_end":1.0,"snapshots":[1.0]}})").string() +
              " --out " + out.string()) == 3);
    CHECK(run("compare --config " +
              write_config("strict", R"({"reference":{"kind":"exact","solitons":[{"arg_deg":57.29577951308232,"c_abs":1},{"arg_deg":59.01465289847479,"c_abs":1}]},
                 "candidate":{"kind":"predicted","solitons":[{"arg_deg":57.29577951308232,"c_abs":1},{"arg_deg":59.01465289847479,"c_abs":1}]},"times":[10,20],
                 "window":{"xi_min":-5.9,"xi_max":-2.1},"dx":0.05,"criteria":{"max_error":1e-12}})").string() +
              " --out " + out.string()) == 4);
}

TEST_CASE("predict writes fields and phase shifts") {
    const fs::path out = scratch("predict");
    REQUIRE(run("predict --config " + config("predict_two.json") + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "xj.txt"));
}
