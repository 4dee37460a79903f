#include <bilin/depgraph.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace bilin {

bool DependencyGraph::has_edge(std::size_t from, std::size_t to) const
{
    return std::any_of(edges.begin(), edges.end(),
                       [&](const DependencyEdge& e) { return e.from == from && e.to == to; });
}

bool DependencyGraph::greater(std::size_t a, std::size_t b) const
{
    return std::find(order.begin(), order.end(), std::make_pair(a, b)) != order.end();
}

std::vector<std::size_t> DependencyGraph::maximal_components() const
{
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < components.size(); ++c)
        if (std::none_of(order.begin(), order.end(), [&](const auto& p) { return p.second == c; }))
            out.push_back(c);
    return out;
}

DependencyGraph build_graph(const System& sys)
{
    DependencyGraph g;
    g.dim = sys.dim();
    g.advisory_only = !sys.is_nonneg();

    std::vector<std::vector<DependencyEdge>> grid(g.dim, std::vector<DependencyEdge>(g.dim));
    std::vector<std::vector<bool>> present(g.dim, std::vector<bool>(g.dim, false));
    for (const auto& c : sys.coefficients()) {
        // Zero coefficients are never stored, so nonzero == present.
        grid[c.k][c.i].left = true;
        present[c.k][c.i] = true;
        grid[c.k][c.j].right = true;
        present[c.k][c.j] = true;
    }
    std::vector<std::vector<std::size_t>> adjacency(g.dim);
    for (std::size_t k = 0; k < g.dim; ++k)
        for (std::size_t i = 0; i < g.dim; ++i)
            if (present[k][i]) {
                DependencyEdge e = grid[k][i];
                e.from = k;
                e.to = i;
                g.edges.push_back(e);
                adjacency[k].push_back(i);
            }

    // Tarjan gives sinks first; renumber so that sources come first, with
    // ties broken by smallest vertex (Kahn over the condensation).
    const auto raw = strongly_connected_components(adjacency);
    std::vector<std::size_t> raw_of(g.dim);
    for (std::size_t c = 0; c < raw.size(); ++c)
        for (std::size_t v : raw[c])
            raw_of[v] = c;
    std::vector<std::set<std::size_t>> succ(raw.size());
    std::vector<std::size_t> indegree(raw.size(), 0);
    for (const auto& e : g.edges) {
        const std::size_t a = raw_of[e.from], b = raw_of[e.to];
        if (a != b && succ[a].insert(b).second)
            ++indegree[b];
    }
    using Item = std::pair<std::size_t, std::size_t>; // (smallest vertex, raw id)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
    for (std::size_t c = 0; c < raw.size(); ++c)
        if (indegree[c] == 0)
            ready.push({raw[c].front(), c});
    std::vector<std::size_t> final_of_raw(raw.size());
    while (!ready.empty()) {
        const std::size_t c = ready.top().second;
        ready.pop();
        final_of_raw[c] = g.components.size();
        g.components.push_back(raw[c]);
        for (std::size_t b : succ[c])
            if (--indegree[b] == 0)
                ready.push({raw[b].front(), b});
    }
    g.component_of.resize(g.dim);
    for (std::size_t v = 0; v < g.dim; ++v)
        g.component_of[v] = final_of_raw[raw_of[v]];

    // Transitive closure by DFS from every component.
    const std::size_t nc = g.components.size();
    std::vector<std::vector<std::size_t>> csucc(nc);
    for (std::size_t c = 0; c < raw.size(); ++c)
        for (std::size_t b : succ[c])
            csucc[final_of_raw[c]].push_back(final_of_raw[b]);
    for (std::size_t a = 0; a < nc; ++a) {
        std::vector<bool> seen(nc, false);
        std::vector<std::size_t> stack(csucc[a].begin(), csucc[a].end());
        while (!stack.empty()) {
            const std::size_t b = stack.back();
            stack.pop_back();
            if (seen[b])
                continue;
            seen[b] = true;
            for (std::size_t c : csucc[b])
                stack.push_back(c);
        }
        for (std::size_t b = 0; b < nc; ++b)
            if (seen[b])
                g.order.emplace_back(a, b);
    }
    return g;
}

Subsystem extract_subsystem(const System& sys, const DependencyGraph& graph, std::size_t component)
{
    if (component >= graph.components.size())
        throw DomainError("extract_subsystem: unknown component " + std::to_string(component + 1));
    std::vector<bool> keep(sys.dim(), false);
    for (std::size_t v = 0; v < sys.dim(); ++v) {
        const std::size_t c = graph.component_of[v];
        keep[v] = c == component || graph.greater(component, c);
    }
    Subsystem out{System(1, {}, Vector{Scalar::one(sys.mode())}), {}};
    std::vector<std::size_t> new_index(sys.dim(), 0);
    for (std::size_t v = 0; v < sys.dim(); ++v)
        if (keep[v]) {
            new_index[v] = out.original_index.size();
            out.original_index.push_back(v);
        }
    std::vector<Coefficient> coeffs;
    for (const auto& c : sys.coefficients())
        if (keep[c.k])
            coeffs.push_back({new_index[c.k], new_index[c.i], new_index[c.j], c.c});
    Vector start;
    for (std::size_t v : out.original_index)
        start.push_back(sys.start()[v]);
    out.system = System(out.original_index.size(), std::move(coeffs), std::move(start));
    return out;
}

TopComponentReport top_component_check(const System& sys, const GrowthTable& table)
{
    TopComponentReport rep;
    const DependencyGraph g = build_graph(sys);
    const auto maximal = g.maximal_components();
    if (maximal.size() != 1) {
        rep.reason = "skipped: " + std::to_string(maximal.size()) + " maximal components";
        return rep;
    }
    rep.applicable = true;
    rep.component = maximal.front();
    rep.bounded_away_from_zero = true;
    const std::size_t half = std::max<std::size_t>(1, table.max_n() / 2);
    for (std::size_t i : g.components[rep.component]) {
        double lo = std::numeric_limits<double>::infinity();
        double tail = std::numeric_limits<double>::infinity();
        for (std::size_t n = 1; n <= table.max_n(); ++n) {
            if (table.g(n).is_zero())
                continue;
            const double r = table.g_i(n, i).is_zero()
                                 ? 0.0
                                 : std::exp(table.g_i(n, i).log_abs() - table.g(n).log_abs());
            lo = std::min(lo, r);
            if (n >= half)
                tail = std::min(tail, r);
        }
        rep.min_ratio.emplace_back(i, lo);
        rep.tail_min_ratio.emplace_back(i, tail);
        if (!(lo > 0.0))
            rep.bounded_away_from_zero = false;
    }
    return rep;
}

EdgeInequalityReport edge_inequality_check(const System& sys, const GrowthTable& table)
{
    if (!sys.is_nonneg())
        throw DomainError("edge_inequality_check requires the nonneg-positive-start class");
    EdgeInequalityReport rep;
    const Vector& s = sys.start();
    for (const auto& c : sys.coefficients())
        for (std::size_t n = 1; n < table.max_n(); ++n) {
            const Scalar& gk = table.g_i(n + 1, c.k);
            rep.checks += 2;
            const bool left_ok = gk >= c.c * s[c.j] * table.g_i(n, c.i);
            const bool right_ok = gk >= c.c * s[c.i] * table.g_i(n, c.j);
            if ((!left_ok || !right_ok) && rep.holds) {
                rep.holds = false;
                std::ostringstream msg;
                msg << "coefficient (k=" << c.k + 1 << ", i=" << c.i + 1 << ", j=" << c.j + 1 << ") at n=" << n
                    << (left_ok ? " (right witness)" : " (left witness)");
                rep.first_violation = msg.str();
            }
        }
    return rep;
}

std::string to_dot(const DependencyGraph& g)
{
    std::ostringstream out;
    out << "digraph dependency {\n";
    for (std::size_t c = 0; c < g.components.size(); ++c) {
        out << "  subgraph cluster_" << c + 1 << " {\n    label=\"C" << c + 1 << "\";\n";
        for (std::size_t v : g.components[c])
            out << "    " << v + 1 << ";\n";
        out << "  }\n";
    }
    for (const auto& e : g.edges) {
        const char* label = e.left && e.right ? "LR" : (e.left ? "L" : "R");
        out << "  " << e.from + 1 << " -> " << e.to + 1 << " [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string components_json(const DependencyGraph& g)
{
    nlohmann::ordered_json j;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : g.components) {
        nlohmann::json vs = nlohmann::json::array();
        for (std::size_t v : c)
            vs.push_back(v + 1);
        comps.push_back(vs);
    }
    j["components"] = comps;
    nlohmann::json order = nlohmann::json::array();
    for (const auto& [a, b] : g.order)
        order.push_back({a + 1, b + 1});
    j["order"] = order;
    if (g.advisory_only)
        j["advisory_only"] = true;
    return j.dump();
}

} // namespace bilin
