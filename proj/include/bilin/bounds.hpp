#pragma once

#include <bilin/growth.hpp>
#include <bilin/patterns.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bilin {

/// Positive w with sum_{i,j} c_{i,j}^{(k)} w_i w_j <= mu w_k for every k.
struct LyapunovCertificate {
    Vector w;
    Scalar mu;
};

/// Smallest admissible mu for w: max_k sum c w_i w_j / w_k, exactly.
Scalar lyapunov_mu(const System& sys, const Vector& w);

/// Exact re-check of the certificate: w > 0, s <= w, and every row
/// inequality. Requires exact mode.
bool replay_certificate(const System& sys, const LyapunovCertificate& cert);

struct UpperBound {
    LyapunovCertificate certificate;
    /// mu * max_i s_i / w_i, exact.
    Scalar exact;
    /// `exact` rounded up to a double.
    double value = 0.0;
};

/// Without w, searches for one by coordinate descent on log w, starting from
/// s and (when a table is given) the normalized last-row maxima, then
/// rounds to rationals and scales so that s <= w. A supplied w must be
/// positive; it is scaled up only if s <= w fails.
UpperBound upper_bound(const System& sys, const std::optional<Vector>& w = std::nullopt,
                       const GrowthTable* table = nullptr);

struct LowerBound {
    enum class Source { none, pattern, supermultiplicative };
    Source source = Source::none;
    double value = 0.0;
    std::optional<PatternReport> pattern;
    /// Entry (0-based) and n for the supermultiplicative source.
    std::size_t entry = 0;
    std::size_t n = 0;
    std::string justification;
};

/// Larger of the best pattern rate (lower endpoint) and max_n g_i(n)^(1/n)
/// over entries i whose supermultiplicativity holds on every tabulated split.
LowerBound lower_bound(const System& sys, std::size_t max_leaves, const GrowthTable& table,
                       const SearchOptions& search = {});

struct RateBounds {
    LowerBound lower;
    std::optional<UpperBound> upper;
    /// (n, g(n)^(1/n)); observed, not certified.
    std::vector<std::pair<std::size_t, double>> empirical;
};

struct BoundsOptions {
    SearchOptions search;
    FrontierOptions frontier;
};

/// Throws Error if the two sides contradict each other.
RateBounds bounds_report(const System& sys, std::size_t max_n, std::size_t max_leaves,
                         const BoundsOptions& options = {});

/// {"lower": {"value", "certificate"}, "upper": {...}, "empirical": [[n, v], ...]}.
std::string to_json(const RateBounds& b);

} // namespace bilin
