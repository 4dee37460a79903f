#pragma once

#include <bilin/system.hpp>

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bilin {

enum class Side : char { left = 'L', right = 'R' };

/// Sequence of L/R steps from the root. Addresses a leaf when used as a
/// pattern mark, or an arbitrary node when used as a subtree position.
class LeafPath {
public:
    LeafPath() = default;
    explicit LeafPath(std::vector<Side> steps) : steps_(std::move(steps)) {}

    /// Parses a string over {L, R}; the empty string is the root.
    static LeafPath parse(std::string_view text);

    const std::vector<Side>& steps() const noexcept { return steps_; }
    std::size_t size() const noexcept { return steps_.size(); }
    bool empty() const noexcept { return steps_.empty(); }

    LeafPath& push_back(Side s)
    {
        steps_.push_back(s);
        return *this;
    }
    void pop_back() { steps_.pop_back(); }
    friend LeafPath operator+(LeafPath a, const LeafPath& b)
    {
        a.steps_.insert(a.steps_.end(), b.steps_.begin(), b.steps_.end());
        return a;
    }

    std::string to_string() const;

    friend bool operator==(const LeafPath&, const LeafPath&) = default;
    friend auto operator<=>(const LeafPath&, const LeafPath&) = default;

private:
    std::vector<Side> steps_;
};

/// Immutable plane binary tree with structural sharing.
class BinaryTree {
public:
    /// The single leaf.
    BinaryTree() = default;

    static BinaryTree leaf() { return {}; }
    static BinaryTree node(const BinaryTree& left, const BinaryTree& right);

    /// Parses the parenthesis language: leaf = "s", node = "(" left right ")".
    static BinaryTree parse(std::string_view text);

    bool is_leaf() const noexcept { return !node_; }
    const BinaryTree& left() const;
    const BinaryTree& right() const;
    std::size_t leaves() const noexcept;
    std::size_t depth() const;

    std::string to_string() const;

    friend bool operator==(const BinaryTree& a, const BinaryTree& b);

private:
    struct Node;
    explicit BinaryTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct BinaryTree::Node {
    BinaryTree left;
    BinaryTree right;
    std::size_t leaves;
};

inline std::size_t BinaryTree::leaves() const noexcept { return node_ ? node_->leaves : 1; }

/// Vector associated with the tree when every leaf carries s.
Vector eval(const System& sys, const BinaryTree& t);

/// Same, except the leaf at `mark` carries `u`.
Vector eval_marked(const System& sys, const BinaryTree& t, const LeafPath& mark, const Vector& u);

/// Subtree rooted at `position`. Throws PathError if the path leaves the tree.
BinaryTree subtree_at(const BinaryTree& t, const LeafPath& position);

/// Copy of `t` with the subtree at `position` replaced; only the spine is rebuilt.
BinaryTree replace_at(const BinaryTree& t, const LeafPath& position, const BinaryTree& replacement);

/// True when `path` ends exactly on a leaf of `t`.
bool addresses_leaf(const BinaryTree& t, const LeafPath& path);

/// Paths to all leaves, left to right.
std::vector<LeafPath> leaf_paths(const BinaryTree& t);

/// Lazily yields every plane binary tree with n leaves exactly once, in
/// order of increasing left-subtree size.
class TreeEnumerator {
public:
    explicit TreeEnumerator(std::size_t n);

    std::optional<BinaryTree> next();

private:
    std::size_t n_;
    std::vector<std::vector<BinaryTree>> by_size_; // by_size_[m] = all trees with m leaves, m < n
    std::size_t split_ = 1;
    std::size_t li_ = 0;
    std::size_t ri_ = 0;
    bool done_ = false;
};

std::vector<BinaryTree> enumerate_trees(std::size_t n);

/// Catalan(n) computed by the product recurrence.
mpz_class catalan(std::size_t n);

/// T^steps: T^1 = T, T^t = T with the marked leaf replaced by T^(t-1).
BinaryTree iterate_pattern(const BinaryTree& t, const LeafPath& mark, std::size_t steps);

/// Mark of the deepest copy of T inside T^steps.
LeafPath iterated_mark(const LeafPath& mark, std::size_t steps);

struct BalancedSubtree {
    LeafPath position;
    std::size_t leaves;
};

/// Node whose subtree has m leaves with n/3 <= m <= 2n/3, found by walking
/// from the root into the heavier child (ties go left) until at most 2n/3
/// leaves remain.
BalancedSubtree balanced_subtree(const BinaryTree& t);

BinaryTree left_comb(std::size_t n);
BinaryTree right_comb(std::size_t n);
BinaryTree perfect_tree(std::size_t levels);

} // namespace bilin
