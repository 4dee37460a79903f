#include <bilin/trees.hpp>

#include <utility>

namespace bilin {

LeafPath LeafPath::parse(std::string_view text)
{
    std::vector<Side> steps;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == 'L')
            steps.push_back(Side::left);
        else if (text[i] == 'R')
            steps.push_back(Side::right);
        else
            throw ParseError("leaf path must consist of 'L' and 'R'", "offset " + std::to_string(i));
    }
    return LeafPath(std::move(steps));
}

std::string LeafPath::to_string() const
{
    std::string out;
    for (Side s : steps_)
        out.push_back(static_cast<char>(s));
    return out;
}

BinaryTree BinaryTree::node(const BinaryTree& left, const BinaryTree& right)
{
    return BinaryTree(std::make_shared<const Node>(Node{left, right, left.leaves() + right.leaves()}));
}

const BinaryTree& BinaryTree::left() const
{
    if (!node_)
        throw PathError("a leaf has no left child");
    return node_->left;
}

const BinaryTree& BinaryTree::right() const
{
    if (!node_)
        throw PathError("a leaf has no right child");
    return node_->right;
}

std::size_t BinaryTree::depth() const
{
    if (!node_)
        return 0;
    return 1 + std::max(node_->left.depth(), node_->right.depth());
}

namespace {

void serialize(const BinaryTree& t, std::string& out)
{
    if (t.is_leaf()) {
        out.push_back('s');
        return;
    }
    out.push_back('(');
    serialize(t.left(), out);
    serialize(t.right(), out);
    out.push_back(')');
}

} // namespace

std::string BinaryTree::to_string() const
{
    std::string out;
    out.reserve(3 * leaves());
    serialize(*this, out);
    return out;
}

BinaryTree BinaryTree::parse(std::string_view text)
{
    // Each open node collects up to two finished children.
    std::vector<std::vector<BinaryTree>> open;
    std::optional<BinaryTree> result;
    for (std::size_t pos = 0; pos < text.size(); ++pos) {
        const char ch = text[pos];
        if (result)
            throw ParseError("trailing characters after tree", "offset " + std::to_string(pos));
        if (ch == '(') {
            open.emplace_back();
            continue;
        }
        BinaryTree finished;
        if (ch == 's') {
            finished = BinaryTree::leaf();
        } else if (ch == ')') {
            if (open.empty() || open.back().size() != 2)
                throw ParseError("')' must close a node with exactly two children", "offset " + std::to_string(pos));
            finished = BinaryTree::node(open.back()[0], open.back()[1]);
            open.pop_back();
        } else {
            throw ParseError(std::string("unexpected character '") + ch + "' in tree", "offset " + std::to_string(pos));
        }
        if (open.empty()) {
            result = finished;
        } else {
            if (open.back().size() == 2)
                throw ParseError("node has more than two children", "offset " + std::to_string(pos));
            open.back().push_back(finished);
        }
    }
    if (!result)
        throw ParseError("incomplete tree", "offset " + std::to_string(text.size()));
    return *result;
}

bool operator==(const BinaryTree& a, const BinaryTree& b)
{
    if (a.node_ == b.node_)
        return true;
    if (a.is_leaf() || b.is_leaf() || a.leaves() != b.leaves())
        return false;
    return a.left() == b.left() && a.right() == b.right();
}

Vector eval(const System& sys, const BinaryTree& t)
{
    if (t.is_leaf())
        return sys.start();
    return apply(sys, eval(sys, t.left()), eval(sys, t.right()));
}

namespace {

Vector eval_marked_from(const System& sys, const BinaryTree& t, const std::vector<Side>& mark, std::size_t at,
                        const Vector& u)
{
    if (at == mark.size()) {
        if (!t.is_leaf())
            throw PathError("mark does not end on a leaf");
        return u;
    }
    if (t.is_leaf())
        throw PathError("mark runs past a leaf");
    if (mark[at] == Side::left)
        return apply(sys, eval_marked_from(sys, t.left(), mark, at + 1, u), eval(sys, t.right()));
    return apply(sys, eval(sys, t.left()), eval_marked_from(sys, t.right(), mark, at + 1, u));
}

BinaryTree replace_from(const BinaryTree& t, const std::vector<Side>& path, std::size_t at,
                        const BinaryTree& replacement)
{
    if (at == path.size())
        return replacement;
    if (t.is_leaf())
        throw PathError("path runs past a leaf");
    if (path[at] == Side::left)
        return BinaryTree::node(replace_from(t.left(), path, at + 1, replacement), t.right());
    return BinaryTree::node(t.left(), replace_from(t.right(), path, at + 1, replacement));
}

void collect_leaf_paths(const BinaryTree& t, LeafPath& prefix, std::vector<LeafPath>& out)
{
    if (t.is_leaf()) {
        out.push_back(prefix);
        return;
    }
    LeafPath left = prefix;
    left.push_back(Side::left);
    collect_leaf_paths(t.left(), left, out);
    LeafPath right = prefix;
    right.push_back(Side::right);
    collect_leaf_paths(t.right(), right, out);
}

} // namespace

Vector eval_marked(const System& sys, const BinaryTree& t, const LeafPath& mark, const Vector& u)
{
    if (u.size() != sys.dim())
        throw ShapeError("marked-leaf vector has wrong length");
    return eval_marked_from(sys, t, mark.steps(), 0, u);
}

BinaryTree subtree_at(const BinaryTree& t, const LeafPath& position)
{
    const BinaryTree* cur = &t;
    for (Side s : position.steps()) {
        if (cur->is_leaf())
            throw PathError("path '" + position.to_string() + "' runs past a leaf");
        cur = s == Side::left ? &cur->left() : &cur->right();
    }
    return *cur;
}

BinaryTree replace_at(const BinaryTree& t, const LeafPath& position, const BinaryTree& replacement)
{
    return replace_from(t, position.steps(), 0, replacement);
}

bool addresses_leaf(const BinaryTree& t, const LeafPath& path)
{
    const BinaryTree* cur = &t;
    for (Side s : path.steps()) {
        if (cur->is_leaf())
            return false;
        cur = s == Side::left ? &cur->left() : &cur->right();
    }
    return cur->is_leaf();
}

std::vector<LeafPath> leaf_paths(const BinaryTree& t)
{
    std::vector<LeafPath> out;
    LeafPath prefix;
    collect_leaf_paths(t, prefix, out);
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration

TreeEnumerator::TreeEnumerator(std::size_t n) : n_(n)
{
    if (n == 0)
        throw DomainError("enumerate_trees: n must be at least 1");
    by_size_.resize(n);
    if (n > 1)
        by_size_[1].push_back(BinaryTree::leaf());
    for (std::size_t m = 2; m < n; ++m)
        for (std::size_t a = 1; a < m; ++a)
            for (const auto& l : by_size_[a])
                for (const auto& r : by_size_[m - a])
                    by_size_[m].push_back(BinaryTree::node(l, r));
}

std::optional<BinaryTree> TreeEnumerator::next()
{
    if (done_)
        return std::nullopt;
    if (n_ == 1) {
        done_ = true;
        return BinaryTree::leaf();
    }
    const BinaryTree out = BinaryTree::node(by_size_[split_][li_], by_size_[n_ - split_][ri_]);
    if (++ri_ == by_size_[n_ - split_].size()) {
        ri_ = 0;
        if (++li_ == by_size_[split_].size()) {
            li_ = 0;
            if (++split_ == n_)
                done_ = true;
        }
    }
    return out;
}

std::vector<BinaryTree> enumerate_trees(std::size_t n)
{
    TreeEnumerator e(n);
    std::vector<BinaryTree> out;
    while (auto t = e.next())
        out.push_back(std::move(*t));
    return out;
}

mpz_class catalan(std::size_t n)
{
    // C_{k+1} = C_k * 2(2k+1) / (k+2)
    mpz_class c = 1;
    for (std::size_t k = 0; k < n; ++k) {
        c *= 2 * (2 * k + 1);
        c /= k + 2;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Patterns of trees

BinaryTree iterate_pattern(const BinaryTree& t, const LeafPath& mark, std::size_t steps)
{
    if (steps == 0)
        throw DomainError("iterate_pattern: steps must be at least 1");
    if (!addresses_leaf(t, mark))
        throw PathError("mark '" + mark.to_string() + "' does not address a leaf");
    BinaryTree cur = t;
    for (std::size_t s = 1; s < steps; ++s)
        cur = replace_at(t, mark, cur);
    return cur;
}

LeafPath iterated_mark(const LeafPath& mark, std::size_t steps)
{
    LeafPath out;
    for (std::size_t s = 0; s < steps; ++s)
        out = out + mark;
    return out;
}

BalancedSubtree balanced_subtree(const BinaryTree& t)
{
    const std::size_t n = t.leaves();
    if (n < 2)
        throw DomainError("balanced_subtree: tree must have more than one leaf");
    LeafPath position;
    const BinaryTree* cur = &t;
    while (3 * cur->leaves() > 2 * n) {
        const bool go_left = cur->left().leaves() >= cur->right().leaves();
        position.push_back(go_left ? Side::left : Side::right);
        cur = go_left ? &cur->left() : &cur->right();
    }
    return {position, cur->leaves()};
}

BinaryTree left_comb(std::size_t n)
{
    if (n == 0)
        throw DomainError("left_comb: n must be at least 1");
    BinaryTree t;
    for (std::size_t i = 1; i < n; ++i)
        t = BinaryTree::node(t, BinaryTree::leaf());
    return t;
}

BinaryTree right_comb(std::size_t n)
{
    if (n == 0)
        throw DomainError("right_comb: n must be at least 1");
    BinaryTree t;
    for (std::size_t i = 1; i < n; ++i)
        t = BinaryTree::node(BinaryTree::leaf(), t);
    return t;
}

BinaryTree perfect_tree(std::size_t levels)
{
    BinaryTree t;
    for (std::size_t i = 0; i < levels; ++i)
        t = BinaryTree::node(t, t);
    return t;
}

} // namespace bilin
