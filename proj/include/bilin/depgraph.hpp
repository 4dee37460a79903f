#pragma once

#include <bilin/growth.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bilin {

/// k -> i: output k draws on input coordinate i. 0-based.
struct DependencyEdge {
    std::size_t from;
    std::size_t to;
    bool left = false;  // some c_{i,j}^{(k)} is nonzero
    bool right = false; // some c_{j,i}^{(k)} is nonzero
};

struct DependencyGraph {
    std::size_t dim = 0;
    std::vector<DependencyEdge> edges; // sorted by (from, to)
    /// Strongly connected components in topological order (a component
    /// precedes everything below it); ties by smallest vertex.
    std::vector<std::vector<std::size_t>> components;
    std::vector<std::size_t> component_of;
    /// (a, b) with component a greater than component b; transitively closed.
    std::vector<std::pair<std::size_t, std::size_t>> order;
    /// Built on nonzero support of a general-sign system; the theory behind
    /// the ordering does not apply.
    bool advisory_only = false;

    bool has_edge(std::size_t from, std::size_t to) const;
    bool greater(std::size_t a, std::size_t b) const;
    /// Components not below any other component.
    std::vector<std::size_t> maximal_components() const;
};

DependencyGraph build_graph(const System& sys);

struct Subsystem {
    System system;
    /// original_index[new] = old (0-based).
    std::vector<std::size_t> original_index;
};

/// System on the coordinates of every component <= `component`.
Subsystem extract_subsystem(const System& sys, const DependencyGraph& graph, std::size_t component);

struct TopComponentReport {
    bool applicable = false;
    std::string reason;
    std::size_t component = 0;
    /// For each vertex of the top component: min over n of g_i(n) / g(n).
    std::vector<std::pair<std::size_t, double>> min_ratio;
    /// Same minimum restricted to the second half of the table.
    std::vector<std::pair<std::size_t, double>> tail_min_ratio;
    bool bounded_away_from_zero = false;
};

TopComponentReport top_component_check(const System& sys, const GrowthTable& table);

struct EdgeInequalityReport {
    bool holds = true;
    std::size_t checks = 0;
    std::string first_violation;
};

/// For every positive coefficient c_{i,j}^{(k)}:
///   g_k(n+1) >= c s_j g_i(n)   (left witness of k -> i)
///   g_k(n+1) >= c s_i g_j(n)   (right witness of k -> j)
/// over all tabulated n.
EdgeInequalityReport edge_inequality_check(const System& sys, const GrowthTable& table);

/// DOT digraph with one cluster per component, 1-based vertex names, and
/// edge labels "L", "R" or "LR".
std::string to_dot(const DependencyGraph& g);

/// {"components": [[...], ...], "order": [[a, b], ...]}, all 1-based.
std::string components_json(const DependencyGraph& g);

} // namespace bilin
