#include <bilin/patterns.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace bilin {

LinearPattern LinearPattern::make(BinaryTree tree, LeafPath mark)
{
    if (tree.leaves() < 2)
        throw DomainError("a linear pattern needs a tree with at least two leaves");
    if (!addresses_leaf(tree, mark))
        throw PathError("mark '" + mark.to_string() + "' does not address a leaf of " + tree.to_string());
    return {std::move(tree), std::move(mark)};
}

Matrix build_matrix(const System& sys, const LinearPattern& p)
{
    Matrix m = Matrix::identity(sys.dim(), sys.mode());
    const BinaryTree* cur = &p.tree;
    for (Side s : p.mark.steps()) {
        if (cur->is_leaf())
            throw PathError("mark runs past a leaf");
        if (s == Side::left) {
            m = m * left_slice(sys, eval(sys, cur->right()));
            cur = &cur->left();
        } else {
            m = m * right_slice(sys, eval(sys, cur->left()));
            cur = &cur->right();
        }
    }
    if (!cur->is_leaf())
        throw PathError("mark does not end on a leaf");
    return m;
}

std::string_view to_string(Bracket b)
{
    switch (b) {
    case Bracket::sign_change:
        return "sign-change";
    case Bracket::exact_root:
        return "exact-root";
    case Bracket::near_zero:
        return "near-zero";
    case Bracket::none:
        break;
    }
    return "none";
}

namespace {

RateInterval root_interval(const SpectralInterval& rho, std::size_t leaves)
{
    const double e = 1.0 / static_cast<double>(leaves - 1);
    auto root = [&](double x) { return x <= 0.0 ? 0.0 : std::pow(x, e); };
    RateInterval r;
    r.lo = rho.lo <= 0.0 ? 0.0 : std::nextafter(root(rho.lo), 0.0);
    r.hi = std::nextafter(root(rho.hi), std::numeric_limits<double>::infinity());
    return r;
}

Bracket bracket_of(const IntPolynomial& p, const SpectralInterval& rho)
{
    const mpq_class lo(rho.lo), hi(rho.hi);
    const mpq_class plo = p.evaluate(lo), phi = p.evaluate(hi);
    if (plo == 0 || phi == 0)
        return Bracket::exact_root;
    if (sgn(plo) != sgn(phi))
        return Bracket::sign_change;
    // Relative to the size of the terms at the evaluation point.
    mpq_class scale = 0;
    mpq_class power = 1;
    const mpq_class x = std::max(mpq_class(1), hi);
    for (const auto& c : p.coefficients()) {
        scale += abs(mpq_class(c)) * power;
        power *= x;
    }
    const mpq_class eps = scale * mpq_class(1, 1000000);
    if (abs(plo) <= eps && abs(phi) <= eps)
        return Bracket::near_zero;
    return Bracket::none;
}

PatternReport score(const System&, const LinearPattern& p, Matrix m, double tol)
{
    PatternReport r{p, std::move(m), {}, {}, std::nullopt, Bracket::none};
    r.rho = spectral_radius(r.matrix, tol);
    r.rate = root_interval(r.rho, p.leaves());
    if (r.matrix.mode() == ScalarMode::exact && r.matrix.all_integer()) {
        r.char_poly = char_poly(r.matrix);
        r.bracket = bracket_of(*r.char_poly, r.rho);
    }
    return r;
}

} // namespace

PatternReport pattern_rate(const System& sys, const LinearPattern& p, double tol)
{
    return score(sys, p, build_matrix(sys, p), tol);
}

LinearPattern compose(const LinearPattern& p1, const LinearPattern& p2)
{
    return {replace_at(p1.tree, p1.mark, p2.tree), p1.mark + p2.mark};
}

ClosedPattern close_via_path(const System& sys, const LinearPattern& p, std::size_t i, std::size_t j,
                             const std::vector<std::size_t>& path)
{
    if (path.empty() || path.front() != j || path.back() != i)
        throw DomainError("close_via_path: path must run from j to i");
    for (std::size_t v : path)
        if (v >= sys.dim())
            throw DomainError("close_via_path: vertex out of range");

    BinaryTree tree = p.tree;
    LeafPath mark = p.mark;
    Scalar alpha = Scalar::one(sys.mode());
    // Build from the innermost level (edge k_{d-1} -> k_d) outwards.
    for (std::size_t t = path.size() - 1; t-- > 0;) {
        const std::size_t from = path[t];
        const std::size_t to = path[t + 1];
        std::optional<Scalar> best_left, best_right;
        for (const auto& c : sys.coefficients()) {
            if (c.k != from || c.c.sign() <= 0)
                continue;
            if (c.i == to && sys.start()[c.j].sign() > 0) {
                const Scalar w = c.c * sys.start()[c.j];
                if (!best_left || w > *best_left)
                    best_left = w;
            }
            if (c.j == to && sys.start()[c.i].sign() > 0) {
                const Scalar w = c.c * sys.start()[c.i];
                if (!best_right || w > *best_right)
                    best_right = w;
            }
        }
        if (!best_left && !best_right)
            throw DomainError("close_via_path: no edge " + std::to_string(from + 1) + " -> " + std::to_string(to + 1));
        const bool use_left = best_left && (!best_right || *best_left >= *best_right);
        LeafPath outer;
        if (use_left) {
            tree = BinaryTree::node(tree, BinaryTree::leaf());
            outer.push_back(Side::left);
            alpha *= *best_left;
        } else {
            tree = BinaryTree::node(BinaryTree::leaf(), tree);
            outer.push_back(Side::right);
            alpha *= *best_right;
        }
        mark = outer + mark;
    }
    return {LinearPattern{std::move(tree), std::move(mark)}, alpha};
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct Key {
    std::string tree;
    std::string mark;
    friend auto operator<=>(const Key&, const Key&) = default;
};

struct Found {
    LinearPattern pattern;
    Key key;
};

bool ranks_before(const PatternReport& a, const PatternReport& b)
{
    if (a.rate.lo != b.rate.lo)
        return a.rate.lo > b.rate.lo;
    if (a.pattern.leaves() != b.pattern.leaves())
        return a.pattern.leaves() < b.pattern.leaves();
    const std::string ta = a.pattern.tree.to_string(), tb = b.pattern.tree.to_string();
    if (ta != tb)
        return ta < tb;
    return a.pattern.mark.to_string() < b.pattern.mark.to_string();
}

// Unique matrices of one leaf count, each with its smallest (tree, mark).
using MatrixTable = std::map<Matrix, Found>;

void offer(MatrixTable& table, Matrix m, LinearPattern p)
{
    Key key{p.tree.to_string(), p.mark.to_string()};
    auto it = table.find(m);
    if (it == table.end())
        table.emplace(std::move(m), Found{std::move(p), std::move(key)});
    else if (key < it->second.key)
        it->second = Found{std::move(p), std::move(key)};
}

struct Annotated {
    Vector value;
    std::unique_ptr<Annotated> left, right;
};

Annotated annotate(const System& sys, const BinaryTree& t)
{
    if (t.is_leaf())
        return {sys.start(), nullptr, nullptr};
    auto l = std::make_unique<Annotated>(annotate(sys, t.left()));
    auto r = std::make_unique<Annotated>(annotate(sys, t.right()));
    Vector v = apply(sys, l->value, r->value);
    return {std::move(v), std::move(l), std::move(r)};
}

// Calls emit(path, M) for every leaf, M the pattern matrix for marking it.
template <class Emit>
void propagate(const System& sys, const Annotated& a, const Matrix& prefix, LeafPath& path, Emit&& emit)
{
    if (!a.left) {
        emit(path, prefix);
        return;
    }
    path.push_back(Side::left);
    propagate(sys, *a.left, prefix * left_slice(sys, a.right->value), path, emit);
    path.pop_back();
    path.push_back(Side::right);
    propagate(sys, *a.right, prefix * right_slice(sys, a.left->value), path, emit);
    path.pop_back();
}

std::vector<PatternReport> score_all(const System& sys, std::vector<std::pair<Matrix, LinearPattern>> items,
                                     double tol, unsigned threads)
{
    std::vector<std::optional<PatternReport>> out(items.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](unsigned w) {
        try {
            for (std::size_t t = w; t < items.size(); t += workers)
                out[t] = score(sys, items[t].second, items[t].first, tol);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work, w);
        for (auto& t : pool)
            t.join();
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    std::vector<PatternReport> reports;
    for (auto& r : out)
        if (r)
            reports.push_back(std::move(*r));
    return reports;
}

std::vector<PatternReport> score_table(const System& sys, MatrixTable table, const SearchOptions& options)
{
    std::vector<std::pair<Matrix, LinearPattern>> items;
    for (auto& [m, f] : table)
        items.emplace_back(m, std::move(f.pattern));
    return score_all(sys, std::move(items), options.tol, options.threads);
}

void sort_ranked(std::vector<PatternReport>& v) { std::sort(v.begin(), v.end(), ranks_before); }

// All patterns with exactly `leaves` leaves; returns false if the budget ran out.
bool enumerate_level(const System& sys, std::size_t leaves, MatrixTable& table, std::size_t& examined,
                     std::size_t budget)
{
    TreeEnumerator trees(leaves);
    const Matrix id = Matrix::identity(sys.dim(), sys.mode());
    while (auto t = trees.next()) {
        if (examined + leaves > budget)
            return false;
        const Annotated a = annotate(sys, *t);
        LeafPath path;
        propagate(sys, a, id, path, [&](const LeafPath& mark, const Matrix& m) {
            offer(table, m, LinearPattern{*t, mark});
        });
        examined += leaves;
    }
    return true;
}

SearchResult exhaustive(const System& sys, std::size_t max_leaves, const SearchOptions& options)
{
    SearchResult result;
    for (std::size_t leaves = 2; leaves <= max_leaves; ++leaves) {
        MatrixTable table;
        const bool finished = enumerate_level(sys, leaves, table, result.patterns_examined, options.max_patterns);
        auto scored = score_table(sys, std::move(table), options);
        result.ranked.insert(result.ranked.end(), std::make_move_iterator(scored.begin()),
                             std::make_move_iterator(scored.end()));
        if (!finished) {
            result.complete = false;
            sort_ranked(result.ranked);
            throw SearchBudgetExceeded("pattern search budget of " + std::to_string(options.max_patterns) +
                                           " patterns exhausted at " + std::to_string(leaves) + " leaves",
                                       std::move(result));
        }
    }
    sort_ranked(result.ranked);
    return result;
}

SearchResult beam(const System& sys, std::size_t max_leaves, const SearchOptions& options)
{
    SearchResult result;
    result.complete = false;
    std::map<std::size_t, std::vector<PatternReport>> level;

    auto keep_top = [&](std::vector<PatternReport> v) {
        sort_ranked(v);
        if (v.size() > options.beam_width)
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(options.beam_width), v.end());
        return v;
    };

    const std::size_t seeded = std::min<std::size_t>(3, max_leaves);
    for (std::size_t leaves = 2; leaves <= seeded; ++leaves) {
        MatrixTable table;
        enumerate_level(sys, leaves, table, result.patterns_examined, std::numeric_limits<std::size_t>::max());
        level[leaves] = keep_top(score_table(sys, std::move(table), options));
    }

    const BinaryTree pair = BinaryTree::node(BinaryTree::leaf(), BinaryTree::leaf());
    const std::vector<BinaryTree> siblings{BinaryTree::leaf(), pair};
    for (std::size_t leaves = 4; leaves <= max_leaves; ++leaves) {
        MatrixTable table;
        auto budget_left = [&] { return result.patterns_examined < options.max_patterns; };
        for (std::size_t a = 2; a < leaves; ++a) {
            const std::size_t b = leaves + 1 - a;
            if (b < 2 || !level.count(a) || !level.count(b))
                continue;
            for (const auto& p1 : level[a])
                for (const auto& p2 : level[b]) {
                    if (!budget_left())
                        break;
                    offer(table, p1.matrix * p2.matrix, compose(p1.pattern, p2.pattern));
                    ++result.patterns_examined;
                }
        }
        for (const auto& sib : siblings) {
            const std::size_t inner = leaves - sib.leaves();
            if (!level.count(inner))
                continue;
            const Vector sv = eval(sys, sib);
            for (const auto& p : level[inner]) {
                if (!budget_left())
                    break;
                LeafPath l;
                l.push_back(Side::left);
                LeafPath r;
                r.push_back(Side::right);
                offer(table, left_slice(sys, sv) * p.matrix,
                      LinearPattern{BinaryTree::node(p.pattern.tree, sib), l + p.pattern.mark});
                offer(table, right_slice(sys, sv) * p.matrix,
                      LinearPattern{BinaryTree::node(sib, p.pattern.tree), r + p.pattern.mark});
                result.patterns_examined += 2;
            }
        }
        level[leaves] = keep_top(score_table(sys, std::move(table), options));
        if (!budget_left()) {
            for (auto& [_, v] : level)
                result.ranked.insert(result.ranked.end(), v.begin(), v.end());
            sort_ranked(result.ranked);
            throw SearchBudgetExceeded("beam search budget of " + std::to_string(options.max_patterns) +
                                           " patterns exhausted at " + std::to_string(leaves) + " leaves",
                                       std::move(result));
        }
    }
    for (auto& [_, v] : level)
        result.ranked.insert(result.ranked.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
    sort_ranked(result.ranked);
    return result;
}

} // namespace

SearchResult search_patterns(const System& sys, std::size_t max_leaves, const SearchOptions& options)
{
    if (!sys.is_nonneg())
        throw DomainError("pattern search requires the nonneg-positive-start class");
    if (max_leaves < 2)
        throw DomainError("pattern search needs max_leaves >= 2");
    if (options.strategy == SearchOptions::Strategy::beam)
        return beam(sys, max_leaves, options);
    return exhaustive(sys, max_leaves, options);
}

SequenceRates pattern_sequence_rates(const System& sys, const LinearPattern& p, std::size_t t_max)
{
    if (!sys.is_nonneg())
        throw DomainError("pattern_sequence_rates requires the nonneg-positive-start class");
    constexpr std::size_t exact_bit_limit = 4096;
    SequenceRates out;
    Matrix m = build_matrix(sys, p);
    Vector v = sys.start();
    for (std::size_t t = 1; t <= t_max; ++t) {
        v = mat_vec(m, v);
        const Scalar h = *std::max_element(v.begin(), v.end());
        out.roots.push_back(h.is_zero() ? 0.0 : std::exp(h.log_abs() / static_cast<double>(t)));
        if (!out.switched_to_log && h.is_exact() &&
            mpz_sizeinbase(h.rational().get_num_mpz_t(), 2) > exact_bit_limit) {
            out.switched_to_log = true;
            for (auto& x : v)
                x = x.to_log_float();
            std::vector<std::vector<Scalar>> rows(m.rows());
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    rows[r].push_back(m(r, c).to_log_float());
            m = Matrix::from_rows(rows);
        }
    }
    return out;
}

std::string to_json(const PatternReport& r)
{
    nlohmann::ordered_json j;
    j["tree"] = r.pattern.tree.to_string();
    j["mark"] = r.pattern.mark.to_string();
    j["rho"] = {r.rho.lo, r.rho.hi};
    j["rate"] = {r.rate.lo, r.rate.hi};
    j["leaves"] = r.pattern.leaves();
    if (r.char_poly)
        j["char_poly"] = nlohmann::json::parse(r.char_poly->to_json());
    else
        j["char_poly"] = nullptr;
    j["bracket"] = std::string(to_string(r.bracket));
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t a = 0; a < r.matrix.rows(); ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t b = 0; b < r.matrix.cols(); ++b)
            row.push_back(r.matrix(a, b).to_string());
        rows.push_back(row);
    }
    j["matrix"] = rows;
    j["certified"] = r.rho.certified;
    return j.dump();
}

} // namespace bilin
