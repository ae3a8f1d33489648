#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "camuv/discovery.hpp"
#include "doctest.h"

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CAMUV_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("camuv_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("generate writes a deterministic graph/data/provenance triple") {
    const fs::path dir1 = fresh_dir("gen1");
    const fs::path dir2 = fresh_dir("gen2");
    const std::string args = "generate --gen fixture --fixture fig1a --n 120 --seeds 1 --seed 3 --out ";
    REQUIRE(run_cli(args + dir1.string()) == 0);
    REQUIRE(run_cli(args + dir2.string()) == 0);

    for (const auto& name : {"graph_3.json", "data_3.csv", "provenance_3.json"}) {
        CAPTURE(name);
        REQUIRE(fs::exists(dir1 / name));
        CHECK(read_file(dir1 / name) == read_file(dir2 / name));
    }
}

TEST_CASE("oracle discovery through the command line reproduces the exact result") {
    const fs::path dir = fresh_dir("disc");
    REQUIRE(run_cli("generate --gen fixture --fixture fig1d --n 100 --seeds 1 --seed 0 --out " + dir.string()) == 0);
    const fs::path result = dir / "result.json";
    REQUIRE(run_cli("discover --engine oracle --graph " + (dir / "graph_0.json").string() +
                    " --alpha 0.5 --max-parents 4 --out " + result.string()) == 0);

    const auto r = camuv::DiscoveryResult::from_json_string(read_file(result));
    CHECK(r.adjacency.get(1, 2) == camuv::Tri::Edge);  // the bow resolved on fig1d
    CHECK(r.adjacency.get(0, 3) == camuv::Tri::Edge);

    // evaluate both tasks against the shipped truth
    const fs::path metrics = dir / "eval.csv";
    REQUIRE(run_cli("evaluate --result " + result.string() + " --truth " + (dir / "graph_0.json").string() +
                    " --task both --out " + metrics.string()) == 0);
    const std::string csv = read_file(metrics);
    CHECK(csv.find("adjacency") != std::string::npos);
    CHECK(csv.find("ancestor") != std::string::npos);
}

TEST_CASE("forbidden-parent mask file is honored") {
    const fs::path dir = fresh_dir("mask");
    REQUIRE(run_cli("generate --gen fixture --fixture fig1a --n 100 --seeds 1 --seed 0 --out " + dir.string()) == 0);

    // forbid every parent of column 1
    std::ofstream mask(dir / "mask.json");
    mask << R"({"forbid": [[false,false,false],[true,true,true],[false,false,false]]})";
    mask.close();

    const fs::path result = dir / "masked.json";
    REQUIRE(run_cli("discover --engine oracle --graph " + (dir / "graph_0.json").string() + " --forbid " +
                    (dir / "mask.json").string() + " --alpha 0.5 --max-parents 3 --out " + result.string()) == 0);
    const auto r = camuv::DiscoveryResult::from_json_string(read_file(result));
    for (int j = 0; j < 3; ++j) CHECK(r.adjacency.get(1, j) != camuv::Tri::Edge);
}

TEST_CASE("experiment with zero graphs emits only the header") {
    const fs::path dir = fresh_dir("exp0");
    REQUIRE(run_cli("experiment --preset ba-desk --graphs 0 --out " + dir.string()) == 0);
    const std::string csv = read_file(dir / "metrics.csv");
    CHECK(csv ==
          "method,graph_seed,alpha,task,tp,fp,tn,fn,precision,recall,f1,degenerate,status,note,config_hash,version\n");
}

TEST_CASE("sample-engine discovery runs end to end on a small dataset") {
    const fs::path dir = fresh_dir("sample");
    REQUIRE(run_cli("generate --gen fixture --fixture figC1 --n 200 --seeds 1 --seed 1 --out " + dir.string()) == 0);
    const fs::path result = dir / "r.json";
    REQUIRE(run_cli("discover --data " + (dir / "data_1.csv").string() + " --alpha 0.1 --seed 7 --out " +
                    result.string()) == 0);
    const auto r = camuv::DiscoveryResult::from_json_string(read_file(result));
    CHECK(r.adjacency.size() == 3);
    CHECK(r.method == "cam_uvx");
}
