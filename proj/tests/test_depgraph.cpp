#include <doctest.h>

#include "oracles.hpp"

#include <bilin/depgraph.hpp>
#include <bilin/registry.hpp>

#include <nlohmann/json.hpp>

#include <random>

using namespace bilin;

namespace {

System builtin(const char* name) { return find_entry(name)->system(); }

std::string edge_text(const DependencyGraph& g)
{
    std::string out;
    for (const auto& e : g.edges)
        out += std::to_string(e.from + 1) + ">" + std::to_string(e.to + 1) + (e.left ? "L" : "") +
               (e.right ? "R" : "") + " ";
    return out;
}

} // namespace

TEST_CASE("constant system graph")
{
    const DependencyGraph g = build_graph(builtin("constant-n1"));
    CHECK(edge_text(g) == "1>1LR 1>2LR 2>2LR ");
    REQUIRE(g.components.size() == 2);
    CHECK(g.components[0] == std::vector<std::size_t>{0});
    CHECK(g.components[1] == std::vector<std::size_t>{1});
    CHECK(g.greater(0, 1));
    CHECK(!g.greater(1, 0));
    CHECK(!g.greater(0, 0));
    CHECK(g.maximal_components() == std::vector<std::size_t>{0});
    CHECK(!g.advisory_only);
    CHECK(components_json(g) == R"({"components":[[1],[2]],"order":[[1,2]]})");
    CHECK(to_dot(g) == "digraph dependency {\n"
                       "  subgraph cluster_1 {\n"
                       "    label=\"C1\";\n"
                       "    1;\n"
                       "  }\n"
                       "  subgraph cluster_2 {\n"
                       "    label=\"C2\";\n"
                       "    2;\n"
                       "  }\n"
                       "  1 -> 1 [label=\"LR\"];\n"
                       "  1 -> 2 [label=\"LR\"];\n"
                       "  2 -> 2 [label=\"LR\"];\n"
                       "}\n");
}

TEST_CASE("doubling and Fibonacci graphs")
{
    const DependencyGraph d = build_graph(builtin("doubling"));
    CHECK(edge_text(d) == "1>1LR 1>2LR 2>2LR ");
    CHECK(d.components.size() == 2);

    const DependencyGraph f = build_graph(builtin("fibonacci"));
    CHECK(edge_text(f) == "1>1LR 1>2LR 2>1L 2>2R ");
    REQUIRE(f.components.size() == 1);
    CHECK(f.components[0] == std::vector<std::size_t>{0, 1});
    CHECK(f.order.empty());
}

TEST_CASE("one-dimensional and empty systems")
{
    const DependencyGraph loop = build_graph(System::from_terms({1}, {{1, 1, 1, 1}}));
    CHECK(edge_text(loop) == "1>1LR ");
    CHECK(components_json(loop) == R"({"components":[[1]],"order":[]})");

    const DependencyGraph empty = build_graph(parse_system(R"({"dim": 3, "s": ["1", "1", "1"], "coeffs": []})"));
    CHECK(empty.edges.empty());
    CHECK(empty.components.size() == 3);
    CHECK(empty.order.empty());
    CHECK(empty.maximal_components().size() == 3);
    CHECK(to_dot(empty).find("->") == std::string::npos);
}

TEST_CASE("general systems give an advisory graph")
{
    const DependencyGraph g = build_graph(builtin("period3"));
    CHECK(g.advisory_only);
    CHECK(nlohmann::json::parse(components_json(g))["advisory_only"] == true);
    CHECK_THROWS_AS(edge_inequality_check(builtin("period3"), brute_force(builtin("period3"), 6)), DomainError);
}

TEST_CASE("condensation is acyclic and consistent")
{
    std::mt19937_64 rng(131);
    for (int t = 0; t < 200; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 5, 2);
        const DependencyGraph g = build_graph(sys);
        std::size_t covered = 0;
        for (std::size_t c = 0; c < g.components.size(); ++c) {
            covered += g.components[c].size();
            for (std::size_t v : g.components[c])
                CHECK(g.component_of[v] == c);
        }
        CHECK(covered == sys.dim());
        for (const auto& e : g.edges) {
            const std::size_t a = g.component_of[e.from], b = g.component_of[e.to];
            if (a != b) {
                CHECK(a < b);
                CHECK(g.greater(a, b));
            }
        }
        for (const auto& [a, b] : g.order) {
            CHECK(a < b);
            CHECK(!g.greater(b, a));
            for (const auto& [c, d] : g.order)
                if (c == b)
                    CHECK(g.greater(a, d));
        }
    }
}

TEST_CASE("extract_subsystem examples")
{
    const System c = builtin("constant-n1");
    const DependencyGraph g = build_graph(c);
    const Subsystem low = extract_subsystem(c, g, 1);
    CHECK(low.system.dim() == 1);
    CHECK(low.original_index == std::vector<std::size_t>{1});
    CHECK(emit_system(low.system) == emit_system(System::from_terms({1}, {{1, 1, 1, 1}})));
    const Subsystem all = extract_subsystem(c, g, 0);
    CHECK(emit_system(all.system) == emit_system(c));
    CHECK(all.original_index == std::vector<std::size_t>{0, 1});
    CHECK_THROWS_AS(extract_subsystem(c, g, 2), DomainError);
}

TEST_CASE("subsystems evaluate as restrictions")
{
    std::mt19937_64 rng(137);
    int trees = 0;
    for (int t = 0; t < 100; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 4, 2);
        const DependencyGraph g = build_graph(sys);
        const std::size_t comp = rng() % g.components.size();
        const Subsystem sub = extract_subsystem(sys, g, comp);
        for (int r = 0; r < 2; ++r, ++trees) {
            const BinaryTree tree = BinaryTree::parse(oracle::random_tree_text(rng, 1 + rng() % 12));
            const Vector full = eval(sys, tree);
            const Vector part = eval(sub.system, tree);
            for (std::size_t i = 0; i < sub.original_index.size(); ++i)
                CHECK(part[i] == full[sub.original_index[i]]);
        }
    }
    CHECK(trees == 200);
}

TEST_CASE("top component check")
{
    const System fib = builtin("fibonacci");
    const TopComponentReport r = top_component_check(fib, growth_table(fib, 20));
    CHECK(r.applicable);
    CHECK(r.bounded_away_from_zero);
    for (const auto& [i, ratio] : r.min_ratio)
        CHECK(ratio >= 0.5);

    const TopComponentReport empty =
        top_component_check(parse_system(R"({"dim": 2, "s": ["1", "1"], "coeffs": []})"),
                            growth_table(parse_system(R"({"dim": 2, "s": ["1", "1"], "coeffs": []})"), 4));
    CHECK(!empty.applicable);
    CHECK(empty.reason == "skipped: 2 maximal components");

    const System c = builtin("constant-n1");
    const TopComponentReport cr = top_component_check(c, growth_table(c, 12));
    CHECK(cr.applicable);
    CHECK(cr.component == 0);
    CHECK(cr.min_ratio.front().second == doctest::Approx(1.0));
}

TEST_CASE("edge inequalities hold on built-ins and random systems")
{
    for (const char* name : {"fibonacci", "doubling", "constant-n1", "open-problem"}) {
        const System sys = builtin(name);
        const auto r = edge_inequality_check(sys, growth_table(sys, 14));
        CHECK(r.holds);
        CHECK(r.checks == 2 * sys.coefficients().size() * 13);
    }
    std::mt19937_64 rng(139);
    for (int t = 0; t < 40; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 2);
        const auto r = edge_inequality_check(sys, growth_table(sys, 10));
        CHECK_MESSAGE(r.holds, r.first_violation);
    }
}
