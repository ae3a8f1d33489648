#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "camuv/evaluation.hpp"
#include "camuv/experiment.hpp"
#include "camuv/fixtures.hpp"
#include "camuv/rng.hpp"
#include "camuv/sample_engine.hpp"
#include "camuv/synth.hpp"
#include "json.hpp"

namespace {

using namespace camuv;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

std::vector<std::vector<bool>> load_forbid_mask(const std::string& path) {
    const auto j = nlohmann::json::parse(read_file(path));
    std::vector<std::vector<bool>> mask;
    for (const auto& row : j.at("forbid")) {
        std::vector<bool> r;
        for (const auto& cell : row) r.push_back(cell.get<bool>());
        mask.push_back(std::move(r));
    }
    return mask;
}

int cmd_generate(const std::string& gen, const std::string& fixture, int ba_nodes, int ba_attach,
                 int ba_observed, int er_observed, double er_prob, int er_confounders, int er_mediators,
                 int n_samples, int n_seeds, uint64_t seed0, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (int s = 0; s < n_seeds; ++s) {
        const uint64_t seed = seed0 + static_cast<uint64_t>(s);
        CausalGraph graph = gen == "ba" ? sample_ba_graph(ba_nodes, ba_attach, ba_observed, seed)
                            : gen == "er"
                                ? sample_er_graph_with_hidden(er_observed, er_prob, er_confounders, er_mediators, seed)
                                : fixture_graph(fixture);
        const ScmSpec spec = ScmSpec::random_coefficients(graph, hash_mix(seed, 0xabcULL));
        Dataset data = sample_dataset(spec, n_samples);
        data.provenance.generator = gen == "fixture" ? "fixture:" + fixture : gen;
        data.provenance.seed = seed;
        if (gen == "ba") {
            data.provenance.params = "nodes=" + std::to_string(ba_nodes) + ";attach=" + std::to_string(ba_attach) +
                                     ";observed=" + std::to_string(ba_observed);
        } else if (gen == "er") {
            data.provenance.params = "observed=" + std::to_string(er_observed) + ";edge_prob=" + std::to_string(er_prob) +
                                     ";confounders=" + std::to_string(er_confounders) +
                                     ";mediators=" + std::to_string(er_mediators);
        }

        const std::filesystem::path dir(out_dir);
        graph.save_json_file((dir / ("graph_" + std::to_string(seed) + ".json")).string());
        data.save_csv_file((dir / ("data_" + std::to_string(seed) + ".csv")).string());
        write_text((dir / ("provenance_" + std::to_string(seed) + ".json")).string(),
                   data.provenance.to_json_string() + "\n");
    }
    std::cout << "wrote " << 3 * n_seeds << " files under " << out_dir << "\n";
    return 0;
}

int cmd_discover(const std::string& data_path, const std::string& graph_path, const std::string& engine_name,
                 const std::string& method, double alpha, int max_parents, const std::string& ci_test,
                 uint64_t seed, const std::string& forbid_path, const std::string& out_path) {
    SearchConfig cfg;
    cfg.alpha = alpha;
    cfg.max_parents = max_parents;
    cfg.ci_test = ci_test;
    cfg.seed = seed;
    if (!forbid_path.empty()) cfg.forbidden_parents = load_forbid_mask(forbid_path);

    DiscoveryResult result = [&]() {
        if (engine_name == "oracle") {
            if (graph_path.empty()) throw std::runtime_error("--engine oracle requires --graph");
            OracleEngine engine(CausalGraph::load_json_file(graph_path));
            return run_method(method, engine, cfg);
        }
        if (data_path.empty()) throw std::runtime_error("--engine sample requires --data");
        SampleEngine engine(Dataset::load_csv_file(data_path), seed);
        return run_method(method, engine, cfg);
    }();

    const std::string text = result.to_json_string() + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text(out_path, text);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_evaluate(const std::string& result_path, const std::string& truth_path, const std::string& task,
                 bool strict_ancestors, const std::string& out_path) {
    const DiscoveryResult result = DiscoveryResult::from_json_string(read_file(result_path));
    const CausalGraph truth = CausalGraph::load_json_file(truth_path);

    std::ostringstream out;
    out << "task,tp,fp,tn,fn,precision,recall,f1,degenerate,strict,version\n";
    auto emit = [&](const MetricReport& r, bool strict) {
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%d,%d,%s\n", r.task.c_str(), r.tp,
                      r.fp, r.tn, r.fn, r.precision, r.recall, r.f1, r.degenerate ? 1 : 0, strict ? 1 : 0, kVersion);
        out << buf;
    };
    if (task == "adjacency" || task == "both") emit(score_adjacency(result.adjacency, truth), false);
    if (task == "ancestors" || task == "both")
        emit(score_ancestors(result, truth, strict_ancestors), strict_ancestors);

    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        write_text(out_path, out.str());
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal discovery for additive models with unobserved variables"};
    app.require_subcommand(1);

    // generate
    auto* gen_cmd = app.add_subcommand("generate", "sample graphs and datasets");
    std::string gen = "ba", fixture = "fig1a", gen_out;
    int ba_nodes = 40, ba_attach = 5, ba_observed = 10;
    int er_observed = 10, er_confounders = 20, er_mediators = 20;
    double er_prob = 0.2;
    int n_samples = 500, n_seeds = 1;
    uint64_t seed0 = 0;
    gen_cmd->add_option("--gen", gen, "generator: ba, er or fixture")->check(CLI::IsMember({"ba", "er", "fixture"}));
    gen_cmd->add_option("--fixture", fixture, "fixture name for --gen fixture");
    gen_cmd->add_option("--ba-nodes", ba_nodes);
    gen_cmd->add_option("--ba-attach", ba_attach);
    gen_cmd->add_option("--ba-observed", ba_observed);
    gen_cmd->add_option("--er-observed", er_observed);
    gen_cmd->add_option("--er-prob", er_prob);
    gen_cmd->add_option("--er-confounders", er_confounders);
    gen_cmd->add_option("--er-mediators", er_mediators);
    gen_cmd->add_option("--n", n_samples, "samples per dataset");
    gen_cmd->add_option("--seeds", n_seeds, "number of seeded draws");
    gen_cmd->add_option("--seed", seed0, "first seed");
    gen_cmd->add_option("--out", gen_out, "output directory")->required();

    // discover
    auto* disc_cmd = app.add_subcommand("discover", "run a search on a dataset or a graph oracle");
    std::string data_path, graph_path, engine_name = "sample", method = "cam_uvx", ci_test = "knn";
    std::string forbid_path, disc_out;
    double alpha = 0.1;
    int max_parents = 3;
    uint64_t disc_seed = 0;
    disc_cmd->add_option("--data", data_path, "dataset csv");
    disc_cmd->add_option("--graph", graph_path, "ground-truth graph json (oracle engine)");
    disc_cmd->add_option("--engine", engine_name)->check(CLI::IsMember({"sample", "oracle"}));
    disc_cmd->add_option("--method", method)->check(CLI::IsMember({"cam_uv", "cam_uvx", "cam_uvx_coldstart"}));
    disc_cmd->add_option("--alpha", alpha, "significance level");
    disc_cmd->add_option("--max-parents", max_parents, "regression-set size cap");
    disc_cmd->add_option("--ci-test", ci_test)->check(CLI::IsMember({"knn"}));
    disc_cmd->add_option("--seed", disc_seed);
    disc_cmd->add_option("--forbid", forbid_path, "forbidden-parent mask json");
    disc_cmd->add_option("--out", disc_out, "result json path (stdout when omitted)");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "score a discovery result against ground truth");
    std::string result_path, truth_path, task = "both", eval_out;
    bool strict_ancestors = false;
    eval_cmd->add_option("--result", result_path)->required();
    eval_cmd->add_option("--truth", truth_path)->required();
    eval_cmd->add_option("--task", task)->check(CLI::IsMember({"adjacency", "ancestors", "both"}));
    eval_cmd->add_flag("--strict-ancestors", strict_ancestors, "no half credit for undetermined ancestor pairs");
    eval_cmd->add_option("--out", eval_out, "csv path (stdout when omitted)");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "run an experiment preset");
    std::string preset = "ba-desk", exp_engine = "sample", exp_out;
    int exp_graphs = -1, exp_samples = -1, exp_jobs = 0, exp_max_parents = 3;
    uint64_t exp_seed = 0;
    std::vector<double> exp_alphas;
    std::vector<std::string> exp_methods;
    exp_cmd->add_option("--preset", preset)->check(CLI::IsMember({"fig2", "ba-desk", "er-desk"}));
    exp_cmd->add_option("--graphs", exp_graphs, "override graph/seed count");
    exp_cmd->add_option("--n", exp_samples, "override samples per dataset");
    exp_cmd->add_option("--alpha", exp_alphas, "override significance levels");
    exp_cmd->add_option("--methods", exp_methods, "override method list");
    exp_cmd->add_option("--engine", exp_engine)->check(CLI::IsMember({"sample", "oracle"}));
    exp_cmd->add_option("--seed", exp_seed, "first graph seed");
    exp_cmd->add_option("--jobs", exp_jobs, "worker threads (0 = hardware)");
    exp_cmd->add_option("--max-parents", exp_max_parents);
    exp_cmd->add_option("--out", exp_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_cmd->parsed())
            return cmd_generate(gen, fixture, ba_nodes, ba_attach, ba_observed, er_observed, er_prob,
                                er_confounders, er_mediators, n_samples, n_seeds, seed0, gen_out);
        if (disc_cmd->parsed())
            return cmd_discover(data_path, graph_path, engine_name, method, alpha, max_parents, ci_test, disc_seed,
                                forbid_path, disc_out);
        if (eval_cmd->parsed()) return cmd_evaluate(result_path, truth_path, task, strict_ancestors, eval_out);
        if (exp_cmd->parsed()) {
            ExperimentConfig cfg = ExperimentConfig::from_preset(preset);
            if (exp_graphs >= 0) cfg.n_graphs = exp_graphs;
            if (exp_samples > 0) cfg.n_samples = exp_samples;
            if (!exp_alphas.empty()) cfg.alphas = exp_alphas;
            if (!exp_methods.empty()) cfg.methods = exp_methods;
            cfg.engine = exp_engine;
            cfg.seed0 = exp_seed;
            cfg.jobs = exp_jobs;
            cfg.max_parents = exp_max_parents;
            cfg.out_dir = exp_out;
            run_experiment(cfg, std::cout);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
