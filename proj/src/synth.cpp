#include "camuv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "camuv/rng.hpp"
#include "json.hpp"

namespace camuv {

namespace {

uint64_t fnv1a(uint64_t h, uint64_t v) {
    for (int b = 0; b < 8; ++b) {
        h ^= (v >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ULL;
    }
    return h;
}

uint64_t fnv1a_double(uint64_t h, double d) {
    uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    return fnv1a(h, bits);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

ScmSpec ScmSpec::random_coefficients(CausalGraph graph, uint64_t seed) {
    ScmSpec spec{std::move(graph), {}, {}, seed};
    Rng rng(hash_mix(seed, 0x5c31u));
    for (const auto& e : spec.graph.edges()) {
        EdgeTerm t;
        t.shift = rng.uniform(-1.0, 1.0);
        t.offset = rng.uniform(-1.0, 1.0);
        t.exponent = rng.below(2) == 0 ? 2 : 3;
        spec.edge_terms[e] = t;
    }
    spec.noise_scale.resize(static_cast<size_t>(spec.graph.vertex_count()));
    for (auto& s : spec.noise_scale) s = rng.uniform(0.5, 1.0);
    return spec;
}

uint64_t ScmSpec::hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, seed);
    h = fnv1a(h, static_cast<uint64_t>(graph.vertex_count()));
    for (const auto& [e, t] : edge_terms) {
        h = fnv1a(h, static_cast<uint64_t>(e.first));
        h = fnv1a(h, static_cast<uint64_t>(e.second));
        h = fnv1a_double(h, t.shift);
        h = fnv1a_double(h, t.offset);
        h = fnv1a(h, static_cast<uint64_t>(t.exponent));
    }
    for (double s : noise_scale) h = fnv1a_double(h, s);
    return h;
}

std::string Provenance::to_json_string() const {
    nlohmann::json j;
    j["generator"] = generator;
    j["seed"] = seed;
    j["spec_hash"] = spec_hash;
    j["n_samples"] = n_samples;
    j["observed_ids"] = observed_ids;
    j["params"] = params;
    return j.dump(2);
}

std::string Dataset::to_csv() const {
    std::ostringstream out;
    for (int j = 0; j < p; ++j) {
        if (j) out << ",";
        out << labels.at(static_cast<size_t>(j));
    }
    out << "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            if (j) out << ",";
            out << format_double(columns[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        }
        out << "\n";
    }
    return out.str();
}

Dataset Dataset::from_csv(const std::string& text) {
    Dataset d;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("csv parse error at line 1: empty input");
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) d.labels.push_back(cell);
    }
    d.p = static_cast<int>(d.labels.size());
    if (d.p < 1) throw std::runtime_error("csv parse error at line 1: no columns");
    d.columns.assign(static_cast<size_t>(d.p), {});
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        int j = 0;
        while (std::getline(ls, cell, ',')) {
            if (j >= d.p)
                throw std::runtime_error("csv parse error at line " + std::to_string(line_no) + ": too many cells");
            size_t pos = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw std::runtime_error("csv parse error at line " + std::to_string(line_no) + ", column " +
                                         std::to_string(j + 1) + ": not a number");
            }
            d.columns[static_cast<size_t>(j)].push_back(v);
            ++j;
        }
        if (j != d.p)
            throw std::runtime_error("csv parse error at line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(d.p) + " cells, got " + std::to_string(j));
    }
    d.n = static_cast<int>(d.columns[0].size());
    if (d.n < 1) throw std::runtime_error("csv parse error: no data rows");
    return d;
}

Dataset Dataset::load_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str());
}

void Dataset::save_csv_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write dataset file: " + path);
    out << to_csv();
}

CausalGraph sample_ba_graph(int n_nodes, int attachments_per_node, int n_observed, uint64_t seed) {
    if (n_nodes < 2) throw std::invalid_argument("need at least two nodes");
    if (attachments_per_node < 1) throw std::invalid_argument("attachments_per_node must be positive");
    if (n_observed < 2 || n_observed > n_nodes) throw std::invalid_argument("n_observed must be in [2, n_nodes]");

    Rng rng(hash_mix(seed, 0xba1u));
    // endpoint pool: every vertex enters once at creation, then once per
    // incident edge, which makes the draw degree-plus-one weighted
    std::vector<int> pool{0};
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n_nodes; ++v) {
        const int m = std::min(v, attachments_per_node);
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < m) {
            const int u = pool[static_cast<size_t>(rng.below(pool.size()))];
            if (std::find(targets.begin(), targets.end(), u) == targets.end()) targets.push_back(u);
        }
        std::sort(targets.begin(), targets.end());
        for (int u : targets) {
            edges.emplace_back(u, v);  // earlier-attached -> later-attached
            pool.push_back(u);
            pool.push_back(v);
        }
        pool.push_back(v);
    }

    const std::vector<int> observed = rng.sample_without_replacement(n_nodes, n_observed);
    std::vector<Vertex> vertices(static_cast<size_t>(n_nodes));
    int col = 0;
    int hid = 0;
    for (int v = 0; v < n_nodes; ++v) {
        const bool obs = std::binary_search(observed.begin(), observed.end(), v);
        vertices[static_cast<size_t>(v)] = {v, obs ? "x" + std::to_string(++col) : "u" + std::to_string(++hid), obs};
    }
    return CausalGraph(std::move(vertices), std::move(edges));
}

CausalGraph sample_er_graph_with_hidden(int n_observed, double edge_prob, int n_confounder_pairs,
                                        int n_mediator_pairs, uint64_t seed) {
    if (n_observed < 2) throw std::invalid_argument("need at least two observed vertices");
    if (edge_prob < 0.0 || edge_prob > 1.0) throw std::invalid_argument("edge_prob must be in [0,1]");
    const int max_pairs = n_observed * (n_observed - 1) / 2;
    if (n_confounder_pairs < 0 || n_confounder_pairs > max_pairs)
        throw std::invalid_argument("confounder pair count exceeds the number of observed pairs");
    if (n_mediator_pairs < 0 || n_mediator_pairs > max_pairs)
        throw std::invalid_argument("mediator pair count exceeds the number of observed pairs");

    Rng rng(hash_mix(seed, 0xe12u));
    std::vector<int> order(static_cast<size_t>(n_observed));
    for (int i = 0; i < n_observed; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    std::vector<int> rank(static_cast<size_t>(n_observed));
    for (int i = 0; i < n_observed; ++i) rank[static_cast<size_t>(order[static_cast<size_t>(i)])] = i;

    std::set<std::pair<int, int>> edge_set;
    for (int i = 0; i < n_observed; ++i) {
        for (int j = i + 1; j < n_observed; ++j) {
            if (rng.uniform() < edge_prob) {
                const bool i_first = rank[static_cast<size_t>(i)] < rank[static_cast<size_t>(j)];
                edge_set.insert(i_first ? std::make_pair(i, j) : std::make_pair(j, i));
            }
        }
    }

    std::vector<std::pair<int, int>> all_pairs;
    for (int i = 0; i < n_observed; ++i)
        for (int j = i + 1; j < n_observed; ++j) all_pairs.emplace_back(i, j);

    auto draw_pairs = [&](int count) {
        std::vector<std::pair<int, int>> pairs = all_pairs;
        rng.shuffle(pairs);
        pairs.resize(static_cast<size_t>(count));
        std::sort(pairs.begin(), pairs.end());
        return pairs;
    };
    const auto confounder_pairs = draw_pairs(n_confounder_pairs);
    const auto mediator_pairs = draw_pairs(n_mediator_pairs);

    std::vector<Vertex> vertices;
    for (int v = 0; v < n_observed; ++v) vertices.push_back({v, "x" + std::to_string(v + 1), true});
    int next_id = n_observed;
    int hid = 0;
    std::vector<std::pair<int, int>> hidden_edges;
    for (const auto& [a, b] : confounder_pairs) {
        const int h = next_id++;
        vertices.push_back({h, "u" + std::to_string(++hid), false});
        hidden_edges.emplace_back(h, a);
        hidden_edges.emplace_back(h, b);
    }
    for (const auto& [a, b] : mediator_pairs) {
        const bool a_first = rank[static_cast<size_t>(a)] < rank[static_cast<size_t>(b)];
        const int src = a_first ? a : b;
        const int dst = a_first ? b : a;
        edge_set.erase({src, dst});  // reroute any direct edge through the mediator
        const int h = next_id++;
        vertices.push_back({h, "u" + std::to_string(++hid), false});
        hidden_edges.emplace_back(src, h);
        hidden_edges.emplace_back(h, dst);
    }

    std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
    edges.insert(edges.end(), hidden_edges.begin(), hidden_edges.end());
    return CausalGraph(std::move(vertices), std::move(edges));
}

Dataset sample_dataset(const ScmSpec& spec, int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be positive");
    const int retry_cap = 10;
    for (int attempt = 0;; ++attempt) {
        const ScmSpec use =
            attempt == 0 ? spec
                         : ScmSpec::random_coefficients(spec.graph,
                                                        hash_mix(spec.seed, 0x7ed7a3ULL + static_cast<uint64_t>(attempt)));

        const int nv = use.graph.vertex_count();
        Rng rng(hash_mix(hash_mix(use.seed, static_cast<uint64_t>(n_samples)), static_cast<uint64_t>(attempt)));
        std::vector<std::vector<double>> values(static_cast<size_t>(nv),
                                                std::vector<double>(static_cast<size_t>(n_samples)));
        bool finite = true;
        for (int v : use.graph.topological_order()) {
            auto& col = values[static_cast<size_t>(v)];
            const double sigma = use.noise_scale.at(static_cast<size_t>(v));
            for (int i = 0; i < n_samples; ++i) col[static_cast<size_t>(i)] = sigma * rng.normal();
            for (int par : use.graph.parents(v)) {
                const EdgeTerm t = use.edge_terms.at({par, v});
                const auto& pv = values[static_cast<size_t>(par)];
                for (int i = 0; i < n_samples; ++i) {
                    const double base = pv[static_cast<size_t>(i)] + t.shift;
                    double term = base * base;
                    if (t.exponent == 3) term *= base;
                    col[static_cast<size_t>(i)] += term + t.offset;
                }
            }
            // standardize in place before any child consumes the column
            double mean = 0.0;
            for (double x : col) mean += x;
            mean /= n_samples;
            double var = 0.0;
            for (double x : col) var += (x - mean) * (x - mean);
            var /= std::max(1, n_samples - 1);
            const double sd = std::sqrt(var);
            if (!(sd > 0.0) || !std::isfinite(sd) || !std::isfinite(mean)) {
                finite = false;
                break;
            }
            for (double& x : col) x = (x - mean) / sd;
        }
        if (!finite) {
            if (attempt >= retry_cap) throw std::runtime_error("dataset generation produced non-finite values");
            continue;
        }

        Dataset d;
        d.n = n_samples;
        d.p = use.graph.observed_count();
        for (int v : use.graph.observed_vertices()) {
            d.columns.push_back(values[static_cast<size_t>(v)]);
            d.labels.push_back(use.graph.label(v));
        }
        d.provenance.generator = "scm";
        d.provenance.seed = use.seed;
        d.provenance.spec_hash = use.hash();
        d.provenance.n_samples = n_samples;
        d.provenance.observed_ids = use.graph.observed_vertices();
        return d;
    }
}

}  // namespace camuv
