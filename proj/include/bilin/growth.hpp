#pragma once

#include <bilin/trees.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bilin {

struct FrontierEntry {
    Vector value;
    BinaryTree witness;
    /// Serialized witness; the canonical witness is the smallest such string.
    std::string witness_text;
};

/// Componentwise-maximal elements of A_n, each with one witness tree.
/// Entries are sorted by value in decreasing lexicographic order.
struct ParetoFrontier {
    std::size_t n = 0;
    std::vector<FrontierEntry> entries;
    /// Set when top-K truncation dropped nondominated vectors.
    bool approximate = false;
};

/// Directory of cached frontiers, one JSON file per (system hash, n).
class FrontierCache {
public:
    explicit FrontierCache(std::filesystem::path directory);

    /// Cache rooted at $BILIN_CACHE_DIR, if that variable is set and non-empty.
    static std::optional<FrontierCache> from_environment();

    std::filesystem::path file_for(const System& sys, std::size_t n) const;
    std::optional<ParetoFrontier> load(const System& sys, std::size_t n) const;
    void store(const System& sys, const ParetoFrontier& frontier) const;

private:
    std::filesystem::path dir_;
};

struct FrontierOptions {
    /// Hard limit on the pruned frontier size for any n.
    std::size_t cap = 10000;
    /// When set, an oversized frontier keeps the top K vectors by each
    /// coordinate instead of failing; results become lower bounds.
    std::optional<std::size_t> approx_top_k;
    /// Worker threads used to combine splits; the result does not depend on it.
    unsigned threads = 1;
    const FrontierCache* cache = nullptr;
};

/// Frontiers for n = 1..max_n (index n-1). Requires the nonnegative class.
std::vector<ParetoFrontier> frontier_dp(const System& sys, std::size_t max_n, const FrontierOptions& options = {});

/// How g_i(n) is taken over A_n. Only the maximum norm is provided; on the
/// nonnegative class it coincides with the per-entry maximum.
enum class Norm { max_abs };

struct GrowthRow {
    std::size_t n = 0;
    Vector g_i;
    Scalar g;
    std::vector<BinaryTree> witnesses;
};

struct GrowthTable {
    std::size_t dim = 0;
    ScalarMode mode = ScalarMode::exact;
    std::vector<GrowthRow> rows; // rows[n-1]
    /// Exact arithmetic over the complete A_n (or its full frontier).
    bool certified = true;
    /// Values are only lower bounds on g_i(n) (approximate frontier).
    bool lower_bounds_only = false;
    std::string method; // "frontier" or "brute-force"

    std::size_t max_n() const noexcept { return rows.size(); }
    const GrowthRow& row(std::size_t n) const { return rows.at(n - 1); }
    const Scalar& g(std::size_t n) const { return row(n).g; }
    const Scalar& g_i(std::size_t n, std::size_t i) const { return row(n).g_i.at(i); }

    /// Columns n, g_1..g_d, g, witness_1..witness_d.
    std::string to_tsv() const;
};

GrowthTable table_from_frontiers(const System& sys, const std::vector<ParetoFrontier>& frontiers);

/// Exact g_i(n) for n <= max_n: frontier DP for the nonnegative class,
/// brute force otherwise.
GrowthTable growth_table(const System& sys, std::size_t max_n, const FrontierOptions& options = {});

/// A_n deduplicated by value, each value mapped to its smallest witness text.
using CombinationSet = std::map<Vector, std::string>;

struct BruteForceOptions {
    std::size_t cap = 200000;
};

/// A_1..A_max_n by exhaustive combination with value deduplication. Throws
/// ResourceError naming n when |A_n| exceeds the cap.
std::vector<CombinationSet> combination_sets(const System& sys, std::size_t max_n,
                                             const BruteForceOptions& options = {});

/// Table of max |x_i| over A_n; valid for every sign class.
GrowthTable brute_force(const System& sys, std::size_t max_n, Norm norm = Norm::max_abs,
                        const BruteForceOptions& options = {});

/// G_k(n) = max_m sum c_{i,j}^{(k)} G_i(m) G_j(n-m), G(1) = s. Pointwise
/// upper envelope of g_i(n) in the nonnegative class. Index n-1.
std::vector<Vector> relaxed_envelope(const System& sys, std::size_t max_n);

struct RatioReport {
    /// g(2) / min_k s_k.
    Scalar bound;
    double max_ratio = 0.0;
    std::size_t worst_n = 0;
    std::size_t worst_i = 0;
    /// g_i(n+1) <= bound * g_i(n) for every tabulated n and i.
    bool holds = true;
};

RatioReport ratio_check(const GrowthTable& table, const System& sys);

/// g(n) <= C * max_{1<=m<n} g(m) g(n-m) with C = coeff_row_sum_bound.
bool root_split_bound_holds(const GrowthTable& table, const System& sys);

/// Entries i with g_i(p+q) >= g_i(p) g_i(q) for all p+q <= max_n.
std::vector<bool> supermultiplicative_entries(const GrowthTable& table);

/// Empirical g(p+q) / (g(p) g(q)) for p <= q, p+q <= max_n (zero rows skipped).
struct SplitRatio {
    std::size_t p, q;
    double ratio;
};
std::vector<SplitRatio> split_ratio_table(const GrowthTable& table);

/// Empirical sequence g(n)^(1/n), n = 1..max_n (0 where g(n) = 0).
std::vector<double> empirical_rates(const GrowthTable& table);

} // namespace bilin
