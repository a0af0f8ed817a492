#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cli.hpp"

using frontlab::cli::run;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = FRONTLAB_FIXTURES;

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("frontlab_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_scene(const fs::path& dir, const std::string& body) {
    const auto path = dir / "scene.json";
    std::ofstream(path) << body;
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Result bad_scene(const std::string& name, const std::string& body) {
    const auto dir = scratch(name);
    return invoke({"analyze", "--config", write_scene(dir, body).string(), "--out", dir.string()});
}

}  // namespace

TEST_CASE("configuration errors exit with 2") {
    const std::string tail = R"(, "domain": {"u": [-1, 1], "v": [-1, 1]}, "grid": 10})";
    auto r = bad_scene("parse", R"({"kind": "weingarten", "G": "z + * 2", "h": "z", "epsilon": 0)" + tail);
    CHECK(r.code == 2);
    CHECK(r.err.find("offset 4") != std::string::npos);

    r = bad_scene("horo", R"({"kind": "weingarten", "G": "z", "h": "z", "a": 1, "b": -0.5)" + tail);
    CHECK(r.code == 2);
    CHECK(r.err.find("horo-flat unsupported") != std::string::npos);

    r = bad_scene("unknown", R"({"kind": "weingarten", "G": "z", "h": "z", "epsilon": 0, "colour": 1)" + tail);
    CHECK(r.code == 2);
    CHECK(r.err.find("colour") != std::string::npos);

    r = bad_scene("missing", R"({"kind": "weingarten", "h": "z", "epsilon": 0)" + tail);
    CHECK(r.code == 2);

    r = bad_scene("domain", R"({"kind": "weingarten", "G": "z", "h": "z", "epsilon": 0, "domain": {"u": [1, 1], "v": [0, 1]}})");
    CHECK(r.code == 2);

    r = bad_scene("json", "{ not json");
    CHECK(r.code == 2);

    CHECK(invoke({"analyze", "--config", "/nonexistent/scene.json"}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"analyze"}).code == 2);
    CHECK(invoke({"analyze", "--config", (kFixtures / "fx1.json").string(), "--grid", "1"}).code == 2);
    CHECK(invoke({"analyze", "--config", (kFixtures / "fx1.json").string(), "--delta", "0.1,x"}).code == 2);
}

TEST_CASE("analyze on FX1 passes and writes its table") {
    const auto dir = scratch("fx1");
    const auto r = invoke({"analyze", "--config", (kFixtures / "fx1.json").string(), "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("all checks passed") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(dir / "fx1_analyze.csv"));
}

TEST_CASE("overrides take effect") {
    const auto dir = scratch("override");
    const auto r = invoke({"analyze", "--config", (kFixtures / "fx3.json").string(), "--out", dir.string(),
                             "--grid", "20", "--delta", "0.25"});
    CHECK(r.code == 0);
    std::ifstream in(dir / "fx3_analyze.csv");
    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows >= 2 + 20 * 20);
}

TEST_CASE("render of FX3 has one singular curve object") {
    const auto dir = scratch("render");
    const auto r = invoke({"render", "--config", (kFixtures / "fx3.json").string(), "--out", dir.string()});
    CHECK(r.code == 0);
    const std::string obj = slurp(dir / "fx3_front.obj");
    std::istringstream in(obj);
    std::string line;
    int objects = 0, curve_lines = 0;
    while (std::getline(in, line)) {
        if (line.rfind("o ", 0) == 0) ++objects;
        if (line.rfind("l ", 0) == 0) ++curve_lines;
    }
    CHECK(objects == 2);  // the surface and one curve
    CHECK(curve_lines == 1);
    CHECK(fs::exists(dir / "fx3_front_vertices.csv"));
}

TEST_CASE("outputs are byte-identical across runs") {
    for (const char* sub : {"render", "gaussmaps", "parallel"}) {
        const auto a = scratch(std::string("det_a_") + sub);
        const auto b = scratch(std::string("det_b_") + sub);
        const auto cfg = (kFixtures / "fx2.json").string();
        REQUIRE(invoke({sub, "--config", cfg, "--out", a.string(), "--grid", "40"}).code == 0);
        REQUIRE(invoke({sub, "--config", cfg, "--out", b.string(), "--grid", "40"}).code == 0);
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            ++files;
            CHECK_MESSAGE(slurp(entry.path()) == slurp(b / entry.path().filename()), entry.path().filename());
        }
        CHECK(files > 0);
    }
}

TEST_CASE("maxface subcommands") {
    const auto dir = scratch("maxface");
    CHECK(invoke({"maxface", "--config", (kFixtures / "mobius.json").string(), "--out", dir.string()}).code == 0);
    CHECK(invoke({"render", "--config", (kFixtures / "catenoid.json").string(), "--out", dir.string()}).code == 0);
    CHECK(fs::exists(dir / "mobius_maxface.csv"));
    CHECK(fs::exists(dir / "catenoid_maxface.obj"));
    // Face-only subcommands reject other kinds.
    CHECK(invoke({"face", "--config", (kFixtures / "catenoid.json").string(), "--out", dir.string()}).code == 2);
}

TEST_CASE("help and version") {
    CHECK(invoke({"--help"}).code == 0);
    const auto r = invoke({"--version"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}
