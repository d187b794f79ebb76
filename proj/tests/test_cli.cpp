#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

// End-to-end checks of the command-line runner: exit codes, artifact naming,
// and byte-identical reruns.

namespace {

namespace fs = std::filesystem;

int run(const std::string& args) {
    const std::string cmd = std::string(WBARY_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("wbary_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& name,
                      const nlohmann::json& j) {
    fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ostringstream os;
    os << std::ifstream(p).rdbuf();
    return os.str();
}

std::vector<fs::path> artifacts(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ext) out.push_back(e.path());
    return out;
}

}  // namespace

TEST_CASE("strata command reproduces the two-point example") {
    const fs::path dir = fresh_dir("strata");
    const fs::path cfg = write_config(dir, "cfg.json",
                                      {{"alphas", {-0.7, -0.3}}, {"rho", "3*pi"}});
    CHECK(run("strata --config " + cfg.string() + " --out " + dir.string()) == 0);

    auto json_files = artifacts(dir, ".json");
    // config + one artifact
    REQUIRE(json_files.size() == 2);
    fs::path artifact;
    for (const auto& p : json_files)
        if (p.filename().string().rfind("strata-", 0) == 0) artifact = p;
    REQUIRE(!artifact.empty());
    CHECK(artifacts(dir, ".csv").size() == 1);

    const nlohmann::json j = nlohmann::json::parse(slurp(artifact));
    CHECK(j["rows"].size() == 2);                    // exactly the two pinned points
    CHECK(j.contains("params"));                     // resolved config embedded
    CHECK(j["params"].contains("alphas"));
}

TEST_CASE("reruns are byte-identical") {
    const fs::path dir = fresh_dir("rerun");
    const fs::path cfg = write_config(dir, "cfg.json",
                                      {{"alphas", {-0.7, -0.3}}, {"rho", "3*pi"}});
    const std::string args = "strata --config " + cfg.string() + " --out " + dir.string();
    REQUIRE(run(args) == 0);
    auto first = artifacts(dir, ".json");
    fs::path artifact;
    for (const auto& p : first)
        if (p.filename().string().rfind("strata-", 0) == 0) artifact = p;
    REQUIRE(!artifact.empty());
    const std::string before = slurp(artifact);
    REQUIRE(run(args) == 0);
    CHECK(slurp(artifact) == before);
}

TEST_CASE("graph command classifies the star tree") {
    const fs::path dir = fresh_dir("graph");
    const fs::path cfg = write_config(
        dir, "cfg.json", {{"alphas", {-0.9, -0.4, -0.4, -0.4}}, {"rho", "3*pi"}});
    CHECK(run("graph --config " + cfg.string() + " --out " + dir.string()) == 0);
    fs::path artifact;
    for (const auto& p : artifacts(dir, ".json"))
        if (p.filename().string().rfind("graph-", 0) == 0) artifact = p;
    REQUIRE(!artifact.empty());
    const nlohmann::json j = nlohmann::json::parse(slurp(artifact));
    CHECK(j["params"]["verdict"] == "contractible");
}

TEST_CASE("distance command") {
    const fs::path dir = fresh_dir("distance");
    nlohmann::json cfg = {{"alphas", nlohmann::json::array()},
                          {"rho", "5*pi"},
                          {"sigma", {{{"t", 1.0}, {"x", {0.3, 0.4}}}}},
                          {"sigma2", {{{"t", 1.0}, {"x", {0.4, 0.4}}}}}};
    const fs::path p = write_config(dir, "cfg.json", cfg);
    CHECK(run("distance --config " + p.string() + " --out " + dir.string()) == 0);
    fs::path artifact;
    for (const auto& f : artifacts(dir, ".json"))
        if (f.filename().string().rfind("distance-", 0) == 0) artifact = f;
    REQUIRE(!artifact.empty());
    const nlohmann::json j = nlohmann::json::parse(slurp(artifact));
    CHECK(std::abs(j["scalars"]["bl_distance"].get<double>() - 0.1) < 1e-8);
}

TEST_CASE("exit codes") {
    const fs::path dir = fresh_dir("exitcodes");
    SUBCASE("unknown command is a usage error") {
        CHECK(run("frobnicate") == 64);
    }
    SUBCASE("malformed config is a data error") {
        fs::path bad = dir / "bad.json";
        std::ofstream(bad) << "{ not json";
        CHECK(run("strata --config " + bad.string()) == 65);
        const fs::path typed = write_config(dir, "typed.json",
                                            {{"alphas", {-0.5}}, {"rho", "oops"}});
        CHECK(run("strata --config " + typed.string()) == 65);
    }
    SUBCASE("non-coercive solve is refused") {
        // Threshold is 0.9 * 4 pi (1+alpha) = 1.8 pi; 2.5 pi must be refused.
        const fs::path cfg = write_config(
            dir, "solve.json",
            {{"alphas", {-0.5}}, {"rho", "2.5*pi"}, {"grid_n", 64}});
        CHECK(run("solve --config " + cfg.string() + " --out " + dir.string()) == 2);
    }
    SUBCASE("singular rho is refused") {
        const fs::path cfg =
            write_config(dir, "singular.json", {{"alphas", {-0.5}}, {"rho", "2*pi"}});
        CHECK(run("strata --config " + cfg.string() + " --out " + dir.string()) == 2);
    }
}
