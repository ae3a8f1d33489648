#pragma once

#include <string>
#include <vector>

#include "camuv/graph.hpp"

namespace camuv {

// Built-in benchmark graphs. The same graphs ship as JSON files under
// fixtures/; a test pins file and built-in versions to each other.
CausalGraph fixture_graph(const std::string& name);

const std::vector<std::string>& fixture_names();

}  // namespace camuv
