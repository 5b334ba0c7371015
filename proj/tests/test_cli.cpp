#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "shadow/io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

fs::path workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("shadowctl_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string read(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    const auto out = workdir() / "stdout.txt";
    const auto err = workdir() / "stderr.txt";
    const std::string cmd = std::string(SHADOWCTL_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(out), read(err)};
}

std::string file(const std::string& name) { return (workdir() / name).string(); }

void write(const std::string& name, const std::string& text) {
    std::ofstream f(file(name), std::ios::binary);
    f << text;
}

} // namespace

TEST_CASE("interior3 writes a loadable instance") {
    const auto r = run("interior3 --r 1 --h 0.9 --out " + file("t1.json"));
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(shadow::load_instance(read(file("t1.json"))).balls.size() == 3);
}

TEST_CASE("construction errors exit 2 with the error name") {
    auto r = run("interior3 --r 1 --h 0.7");
    CHECK(r.code == 2);
    CHECK(r.err.find("ThresholdViolated") != std::string::npos);
    r = run("ellipsoid3 --a 1 --bprime 2.8");
    CHECK(r.code == 2);
    CHECK(r.err.find("RatioTooSmall") != std::string::npos);
    r = run("simplex --dim 4 --epsilon 0.01");
    CHECK(r.code == 2);
    CHECK(r.err.find("ShadowLost") != std::string::npos);
    CHECK(run("interior3 --r 1").code == 2);
    CHECK(run("frobnicate").code == 2);
}

TEST_CASE("verify exit codes") {
    REQUIRE(run("interior3 --r 1 --h 0.9 --out " + file("t1.json")).code == 0);
    auto r = run("verify --input " + file("t1.json") + " --method exact");
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["verdict"] == "shadow");

    write("one.json", R"({"schema_version": 1, "point": [0, 0, 0],
        "balls": [{"center": [2, 0, 0], "radius": 1, "closed": false}]})");
    r = run("verify --input " + file("one.json") + " --method exact");
    CHECK(r.code == 1);
    CHECK(nlohmann::json::parse(r.out)["witness"].is_array());

    write("bad.json", R"({"schema_version": 1, "point": [0, 0, 0],
        "balls": [{"center": [2, 0], "radius": 1, "closed": false}]})");
    r = run("verify --input " + file("bad.json"));
    CHECK(r.code == 2);
    CHECK(r.err.find("SchemaError") != std::string::npos);

    write("inside.json", R"({"schema_version": 1, "point": [0, 0, 0],
        "balls": [{"center": [0.5, 0, 0], "radius": 1, "closed": false}]})");
    CHECK(run("verify --input " + file("inside.json")).code == 2);
}

TEST_CASE("sampling verification in five dimensions is undetermined") {
    write("orthant5.json", shadow::save_instance(shadow::test::orthant_instance(5, 1.3)));
    const auto r = run("verify --input " + file("orthant5.json") + " --method mc --samples 200000 --seed 3");
    CHECK(r.code == 3);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["uncovered_count"] == 0);
    CHECK(doc["samples_used"] == 200000);
    CHECK(run("verify --input " + file("orthant5.json") + " --method exact").code == 2);
}

TEST_CASE("verification output is deterministic") {
    write("orthant4.json", shadow::save_instance(shadow::test::orthant_instance(4, 1.2)));
    const std::string args = "verify --input " + file("orthant4.json") + " --method auto --samples 20000 --starts 4 --seed 9";
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 3);
    CHECK(a.out == b.out);
}

TEST_CASE("simplex, equalize and diskpair") {
    CHECK(run("simplex --dim 3 --epsilon 0.01 --out " + file("p3.json")).code == 0);
    CHECK(run("equalize --input " + file("p3.json") + " --out " + file("e3.json")).code == 0);
    CHECK(run("verify --input " + file("e3.json") + " --method exact").code == 0);
    CHECK(run("simplex --dim 3 --epsilon 0 --closed").code == 0);
    CHECK(run("diskpair --r 1 --out " + file("d.json")).code == 0);
    CHECK(run("verify --input " + file("d.json")).code == 0);
}

TEST_CASE("sweep") {
    auto r = run("sweep --construction interior3 --r 1 --param h --from 0.78 --to 0.99 --steps 10");
    CHECK(r.code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "h,success,error,worst_margin,seam_overlap");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.find(",1,,") != std::string::npos);
    }
    CHECK(rows == 10);

    r = run("sweep --construction interior3 --r 1 --param h --from 0.70 --to 0.77 --steps 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("ThresholdViolated") != std::string::npos);
    CHECK(r.out.find(",1,") == std::string::npos);

    r = run("sweep --construction interior3 --r 1 --param h --from 0.78 --to 0.99 --steps 0");
    CHECK(r.code == 2);
}

TEST_CASE("plot") {
    REQUIRE(run("interior3 --r 1 --h 0.9 --out " + file("t1.json")).code == 0);
    CHECK(run("plot --input " + file("t1.json") + " --out " + file("a.svg")).code == 0);
    CHECK(run("plot --input " + file("t1.json") + " --out " + file("b.svg")).code == 0);
    CHECK(read(file("a.svg")) == read(file("b.svg")));
    CHECK(read(file("a.svg")).find("<svg") != std::string::npos);
    const auto r = run("plot --input " + file("t1.json") + " --u 1,0,0 --v 1,1,0");
    CHECK(r.code == 2);
    CHECK(r.err.find("DegeneratePlane") != std::string::npos);
}
