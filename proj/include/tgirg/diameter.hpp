#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tgirg/graph.hpp"

namespace tgirg {

struct ComponentDiameter {
    std::size_t size = 0;
    Distance diameter = 0;
};

/// Diameters per connected component (in component-label order) and overall.
struct DiameterResult {
    std::vector<ComponentDiameter> components;
    Distance overall = 0;
    std::size_t bfs_runs = 0;
    std::size_t largest = 0;  ///< index of the largest component (lowest index on ties)

    Distance largest_diameter() const { return components.empty() ? 0 : components[largest].diameter; }
};

/// BFS from every vertex.
DiameterResult exact_diameter(const Graph& g);

/// Fringe-driven upper/lower bounds from a double-sweep midpoint; exact.
DiameterResult ifub_diameter(const Graph& g);

/// BFS from vertex 0, then from the lowest-id farthest vertex; returns the second eccentricity.
Distance double_sweep_lower(const Graph& g);

/// `{"overall":..,"components":[{"size":..,"diameter":..}],"bfs_runs":..}`
std::string diameter_json(const DiameterResult& r);

}  // namespace tgirg
