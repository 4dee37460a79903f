#include <doctest.h>

#include "oracles.hpp"

#include <bilin/growth.hpp>
#include <bilin/registry.hpp>
#include <bilin/trees.hpp>

#include <random>
#include <set>

using namespace bilin;

namespace {

System builtin(const char* name) { return find_entry(name)->system(); }

Vector vec(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

} // namespace

TEST_CASE("parse and print trees")
{
    for (const char* t : {"s", "(ss)", "((ss)s)", "(s(ss))", "((ss)(ss))", "(((ss)s)(s(ss)))"})
        CHECK(BinaryTree::parse(t).to_string() == t);
    CHECK(BinaryTree::parse("((ss)s)").leaves() == 3);
    CHECK(BinaryTree::parse("((ss)s)").depth() == 2);
    CHECK(BinaryTree::parse("((ss)s)") == left_comb(3));
    CHECK(BinaryTree::parse("(s(ss))") == right_comb(3));
    CHECK(perfect_tree(2).to_string() == "((ss)(ss))");
    CHECK(perfect_tree(0).is_leaf());
    CHECK_THROWS_AS(BinaryTree::parse(""), ParseError);
    CHECK_THROWS_AS(BinaryTree::parse("(s)"), ParseError);
    CHECK_THROWS_AS(BinaryTree::parse("(sss)"), ParseError);
    CHECK_THROWS_AS(BinaryTree::parse("(ss"), ParseError);
    CHECK_THROWS_AS(BinaryTree::parse("(ss))"), ParseError);
    CHECK_THROWS_AS(BinaryTree::parse("x"), ParseError);
}

TEST_CASE("leaf paths")
{
    CHECK(LeafPath::parse("LRL").to_string() == "LRL");
    CHECK(LeafPath::parse("").empty());
    CHECK_THROWS_AS(LeafPath::parse("LX"), ParseError);
    const BinaryTree t = BinaryTree::parse("((ss)s)");
    CHECK(addresses_leaf(t, LeafPath::parse("LL")));
    CHECK(addresses_leaf(t, LeafPath::parse("R")));
    CHECK(!addresses_leaf(t, LeafPath::parse("L")));
    CHECK(!addresses_leaf(t, LeafPath::parse("RL")));
    std::vector<std::string> paths;
    for (const auto& p : leaf_paths(t))
        paths.push_back(p.to_string());
    CHECK(paths == std::vector<std::string>{"LL", "LR", "R"});
    CHECK_THROWS_AS(subtree_at(t, LeafPath::parse("RL")), PathError);
    CHECK(subtree_at(t, LeafPath::parse("L")).to_string() == "(ss)");
    CHECK(replace_at(t, LeafPath::parse("R"), BinaryTree::parse("(ss)")).to_string() == "((ss)(ss))");
}

TEST_CASE("eval examples")
{
    CHECK(eval(builtin("fibonacci"), BinaryTree::parse("((ss)s)")) == vec({3, 2}));
    CHECK(eval(builtin("doubling"), perfect_tree(2)) == vec({5, 1}));
    CHECK(eval(builtin("fibonacci"), BinaryTree::leaf()) == vec({1, 1}));
}

TEST_CASE("every tree of the constant system evaluates to (n, 1)")
{
    const System sys = builtin("constant-n1");
    for (std::size_t n = 1; n <= 8; ++n) {
        std::size_t count = 0;
        TreeEnumerator it(n);
        while (auto t = it.next()) {
            ++count;
            CHECK(eval(sys, *t) == vec({static_cast<long>(n), 1}));
        }
        CHECK(mpz_class(count) == catalan(n - 1));
    }
}

TEST_CASE("eval agrees with an independent fold of apply")
{
    std::mt19937_64 rng(61);
    for (int t = 0; t < 100; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 3);
        const std::string text = oracle::random_tree_text(rng, 1 + t % 15);
        CHECK(oracle::to_qvec(eval(sys, BinaryTree::parse(text))) == oracle::eval_text(oracle::densify(sys), text));
    }
}

TEST_CASE("eval_marked substitutes the marked leaf")
{
    std::mt19937_64 rng(67);
    for (int t = 0; t < 100; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 3);
        const std::string text = oracle::random_tree_text(rng, 2 + t % 10);
        const BinaryTree tree = BinaryTree::parse(text);
        const auto paths = leaf_paths(tree);
        const std::size_t which = t % paths.size();
        const auto u = oracle::random_qvec(rng, sys.dim());
        CHECK(oracle::to_qvec(eval_marked(sys, tree, paths[which], oracle::to_vector(u))) ==
              oracle::eval_text(oracle::densify(sys), text, static_cast<long>(which), &u));
    }
}

TEST_CASE("enumeration counts")
{
    CHECK(enumerate_trees(1).size() == 1);
    CHECK(enumerate_trees(4).size() == 5);
    CHECK(enumerate_trees(8).size() == 429);
    CHECK_THROWS_AS(enumerate_trees(0), DomainError);
    CHECK_THROWS_AS(TreeEnumerator(0), DomainError);
    CHECK(catalan(0) == 1);
    CHECK(catalan(7) == 429);
    CHECK(catalan(30) == mpz_class("3814986502092304"));
}

TEST_CASE("enumeration yields each tree once")
{
    for (std::size_t n = 1; n <= 12; ++n) {
        std::set<std::string> seen;
        std::size_t count = 0;
        TreeEnumerator it(n);
        while (auto t = it.next()) {
            ++count;
            CHECK(t->leaves() == n);
            seen.insert(t->to_string());
        }
        CHECK(seen.size() == count);
        CHECK(mpz_class(count) == catalan(n - 1));
        if (n <= 9) {
            const auto ref = oracle::all_trees(n);
            CHECK(seen == std::set<std::string>(ref.begin(), ref.end()));
        }
    }
}

TEST_CASE("iterate_pattern")
{
    const BinaryTree pair = BinaryTree::parse("(ss)");
    CHECK(iterate_pattern(pair, LeafPath::parse("L"), 3) == left_comb(4));
    CHECK(iterate_pattern(pair, LeafPath::parse("R"), 3) == right_comb(4));
    const BinaryTree four = BinaryTree::parse("((ss)(ss))");
    CHECK(iterate_pattern(four, LeafPath::parse("RL"), 5).leaves() == 16);
    CHECK(iterate_pattern(four, LeafPath::parse("RL"), 1) == four);
    CHECK(iterate_pattern(four, LeafPath::parse("RL"), 2).to_string() == "((ss)(((ss)(ss))s))");
    CHECK_THROWS_AS(iterate_pattern(four, LeafPath::parse("R"), 2), PathError);
    CHECK_THROWS_AS(iterate_pattern(four, LeafPath::parse("RL"), 0), DomainError);
    CHECK(iterated_mark(LeafPath::parse("RL"), 3).to_string() == "RLRLRL");

    std::mt19937_64 rng(71);
    for (int t = 0; t < 50; ++t) {
        const BinaryTree tree = BinaryTree::parse(oracle::random_tree_text(rng, 2 + t % 6));
        const auto paths = leaf_paths(tree);
        const auto& mark = paths[t % paths.size()];
        const std::size_t steps = 1 + t % 7;
        const BinaryTree it = iterate_pattern(tree, mark, steps);
        CHECK(it.leaves() == steps * (tree.leaves() - 1) + 1);
        CHECK(addresses_leaf(it, iterated_mark(mark, steps)));
    }
}

TEST_CASE("iterate_pattern with many steps is cheap")
{
    const BinaryTree it = iterate_pattern(BinaryTree::parse("(s(ss))"), LeafPath::parse("RR"), 100000);
    CHECK(it.leaves() == 200001);
}

TEST_CASE("balanced subtree examples")
{
    CHECK(balanced_subtree(perfect_tree(3)).leaves == 4);
    CHECK(balanced_subtree(perfect_tree(3)).position.to_string() == "L");
    const auto comb = balanced_subtree(left_comb(9));
    CHECK(comb.leaves == 6);
    CHECK(comb.position.to_string() == "LLL");
    CHECK(balanced_subtree(BinaryTree::parse("(ss)")).leaves == 1);
    CHECK_THROWS_AS(balanced_subtree(BinaryTree::leaf()), DomainError);
}

TEST_CASE("balanced subtree bounds on random trees up to 200 leaves")
{
    std::mt19937_64 rng(73);
    for (std::size_t n = 2; n <= 200; ++n) {
        const BinaryTree t = BinaryTree::parse(oracle::random_tree_text(rng, n));
        const auto b = balanced_subtree(t);
        CHECK(3 * b.leaves >= n);
        CHECK(3 * b.leaves <= 2 * n);
        CHECK(subtree_at(t, b.position).leaves() == b.leaves);
    }
}

TEST_CASE("tree values never exceed the growth table")
{
    for (const char* name : {"fibonacci", "doubling", "constant-n1", "open-problem"}) {
        const System sys = builtin(name);
        const GrowthTable table = growth_table(sys, 10);
        for (std::size_t n = 1; n <= 10; ++n)
            for (const auto& t : enumerate_trees(n)) {
                const Vector v = eval(sys, t);
                for (std::size_t i = 0; i < sys.dim(); ++i)
                    CHECK(v[i] <= table.g_i(n, i));
            }
    }
}
