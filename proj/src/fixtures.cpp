#include "camuv/fixtures.hpp"

#include <stdexcept>

namespace camuv {

namespace {

CausalGraph build(const std::vector<std::pair<std::string, bool>>& verts,
                  const std::vector<std::pair<int, int>>& edges) {
    std::vector<Vertex> vs;
    int id = 0;
    for (const auto& [label, observed] : verts) vs.push_back({id++, label, observed});
    return CausalGraph(vs, edges);
}

}  // namespace

CausalGraph fixture_graph(const std::string& name) {
    // observed vertices first so that vertex id == dataset column
    if (name == "fig1a") {
        // x1 -> x2 <- x3 with confounders U1 on (x1,x3) and U2 on (x2,x3)
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"U1", false}, {"U2", false}},
                     {{0, 1}, {2, 1}, {3, 0}, {3, 2}, {4, 1}, {4, 2}});
    }
    if (name == "fig1b") {
        // x3 -> x1, x4 -> x2; hidden mediator x1 -> U2 -> x4 and confounders
        // U1 on (x1,x3), U3 on (x2,x4), U4 on (x2,x3)
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"x4", true},
                      {"U1", false}, {"U2", false}, {"U3", false}, {"U4", false}},
                     {{2, 0}, {3, 1}, {4, 0}, {4, 2}, {0, 5}, {5, 3}, {6, 1}, {6, 3}, {7, 1}, {7, 2}});
    }
    if (name == "fig1c") {
        // diamond x1 -> {x2,x3} -> x4 followed by hidden mediator x4 -> U3 -> x5
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"x4", true}, {"x5", true}, {"U3", false}},
                     {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 5}, {5, 4}});
    }
    if (name == "fig1d") {
        // x4 -> x1 -> U1 -> x3 -> x2 with bow confounder U2 on (x2,x3)
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"x4", true}, {"U1", false}, {"U2", false}},
                     {{3, 0}, {0, 4}, {4, 2}, {2, 1}, {5, 1}, {5, 2}});
    }
    if (name == "figA1a") {
        // x4 -> x3 -> x1 -> x2; U1 confounds x1, x3 and x4; U2 confounds x2 and x4
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"x4", true}, {"U1", false}, {"U2", false}},
                     {{2, 0}, {0, 1}, {3, 2}, {4, 0}, {4, 2}, {4, 3}, {5, 1}, {5, 3}});
    }
    if (name == "figA1b") {
        // bows on (x1,x3), (x2,x3), (x1,x4); U4 confounds (x2,x4)
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"x4", true},
                      {"U1", false}, {"U2", false}, {"U3", false}, {"U4", false}},
                     {{0, 2}, {0, 3}, {3, 2}, {2, 1}, {4, 0}, {4, 2}, {5, 1}, {5, 2}, {6, 0}, {6, 3}, {7, 1}, {7, 3}});
    }
    if (name == "figC1") {
        // chain x1 -> x2 -> U1 -> x3
        return build({{"x1", true}, {"x2", true}, {"x3", true}, {"U1", false}},
                     {{0, 1}, {1, 3}, {3, 2}});
    }
    throw std::invalid_argument("unknown fixture: " + name);
}

const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {"fig1a", "fig1b", "fig1c", "fig1d",
                                                   "figA1a", "figA1b", "figC1"};
    return names;
}

}  // namespace camuv
