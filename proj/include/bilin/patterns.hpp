#pragma once

#include <bilin/trees.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bilin {

/// A tree with at least two leaves and one marked leaf.
struct LinearPattern {
    BinaryTree tree;
    LeafPath mark;

    /// Validates |T| >= 2 and that `mark` addresses a leaf.
    static LinearPattern make(BinaryTree tree, LeafPath mark);

    std::size_t leaves() const noexcept { return tree.leaves(); }
};

/// M such that evaluating the tree with u at the marked leaf gives M u.
/// Composes left/right slices of the sibling subtrees along the mark.
Matrix build_matrix(const System& sys, const LinearPattern& p);

/// Closed interval of reals.
struct RateInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// How the characteristic polynomial certifies the rho enclosure.
enum class Bracket { sign_change, exact_root, near_zero, none };

std::string_view to_string(Bracket b);

struct PatternReport {
    LinearPattern pattern;
    Matrix matrix;
    SpectralInterval rho;
    /// (|T|-1)-th roots of the rho endpoints, rounded outward.
    RateInterval rate;
    std::optional<IntPolynomial> char_poly;
    Bracket bracket = Bracket::none;
};

PatternReport pattern_rate(const System& sys, const LinearPattern& p, double tol = 1e-9);

/// Tree of p1 with its marked leaf replaced by the tree of p2; the mark is p2's.
LinearPattern compose(const LinearPattern& p1, const LinearPattern& p2);

struct ClosedPattern {
    LinearPattern pattern;
    /// Product of the witnessing c * s factors; M'_{j,j} >= alpha * M_{i,j}.
    Scalar alpha;
};

/// Wraps p once per edge of `path` (0-based vertices, path.front() == j,
/// path.back() == i), each level adding a single-leaf sibling on the side
/// given by the edge orientation. Throws DomainError on a non-edge.
ClosedPattern close_via_path(const System& sys, const LinearPattern& p, std::size_t i, std::size_t j,
                             const std::vector<std::size_t>& path);

struct SearchOptions {
    enum class Strategy { exhaustive, beam };
    Strategy strategy = Strategy::exhaustive;
    std::size_t beam_width = 64;
    double tol = 1e-9;
    /// Maximum number of (tree, marked leaf) pairs examined.
    std::size_t max_patterns = 5'000'000;
    unsigned threads = 1;
};

struct SearchResult {
    /// Best first: larger rate.lo, then fewer leaves, then tree text, then mark.
    std::vector<PatternReport> ranked;
    std::size_t patterns_examined = 0;
    bool complete = true;

    const PatternReport& best() const { return ranked.at(0); }
};

class SearchBudgetExceeded : public ResourceError {
public:
    SearchBudgetExceeded(const std::string& what, SearchResult partial)
        : ResourceError(what), partial_(std::move(partial)) {}
    const SearchResult& partial() const noexcept { return partial_; }

private:
    SearchResult partial_;
};

/// Scores patterns with 2..max_leaves leaves, deduplicated by exact matrix
/// within each leaf count. Requires the nonnegative class.
SearchResult search_patterns(const System& sys, std::size_t max_leaves, const SearchOptions& options = {});

struct SequenceRates {
    /// h(t)^(1/t) for t = 1..t_max, h(t) = max entry of M^t s.
    std::vector<double> roots;
    /// Set when the exact iterate grew too large and the tail was computed
    /// in the log domain.
    bool switched_to_log = false;
};

SequenceRates pattern_sequence_rates(const System& sys, const LinearPattern& p, std::size_t t_max);

/// {"tree","mark","rho","rate","leaves","char_poly","matrix"}.
std::string to_json(const PatternReport& r);

} // namespace bilin
