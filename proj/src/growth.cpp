#include <bilin/growth.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace bilin {

// ---------------------------------------------------------------------------
// Frontier cache

FrontierCache::FrontierCache(std::filesystem::path directory) : dir_(std::move(directory)) {}

std::optional<FrontierCache> FrontierCache::from_environment()
{
    const char* dir = std::getenv("BILIN_CACHE_DIR");
    if (!dir || !*dir)
        return std::nullopt;
    return FrontierCache(dir);
}

std::filesystem::path FrontierCache::file_for(const System& sys, std::size_t n) const
{
    return dir_ / (content_hash(sys) + "_n" + std::to_string(n) + ".json");
}

std::optional<ParetoFrontier> FrontierCache::load(const System& sys, std::size_t n) const
{
    std::ifstream in(file_for(sys, n));
    if (!in)
        return std::nullopt;
    try {
        const auto doc = nlohmann::json::parse(in);
        ParetoFrontier f;
        f.n = n;
        for (const auto& item : doc) {
            FrontierEntry e;
            for (const auto& v : item.at("v"))
                e.value.push_back(Scalar::parse(v.get<std::string>()));
            e.witness_text = item.at("w").get<std::string>();
            e.witness = BinaryTree::parse(e.witness_text);
            if (e.value.size() != sys.dim() || e.witness.leaves() != n)
                return std::nullopt;
            f.entries.push_back(std::move(e));
        }
        return f;
    } catch (const std::exception&) {
        // Unreadable cache entries are recomputed.
        return std::nullopt;
    }
}

void FrontierCache::store(const System& sys, const ParetoFrontier& frontier) const
{
    std::filesystem::create_directories(dir_);
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& e : frontier.entries) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto& x : e.value)
            v.push_back(x.to_string());
        doc.push_back({{"v", v}, {"w", e.witness_text}});
    }
    const auto path = file_for(sys, frontier.n);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << doc.dump() << "\n";
    }
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Frontier DP

namespace {

struct Candidate {
    const FrontierEntry* left;
    const FrontierEntry* right;
};

std::string candidate_text(const Candidate& c)
{
    return "(" + c.left->witness_text + c.right->witness_text + ")";
}

using CandidateMap = std::map<Vector, Candidate>;

void offer(CandidateMap& into, Vector v, const Candidate& c)
{
    auto [it, inserted] = into.try_emplace(std::move(v), c);
    if (!inserted && candidate_text(c) < candidate_text(it->second))
        it->second = c;
}

void combine_split(const System& sys, const ParetoFrontier& a, const ParetoFrontier& b, CandidateMap& out)
{
    for (const auto& x : a.entries)
        for (const auto& y : b.entries)
            offer(out, apply(sys, x.value, y.value), {&x, &y});
}

bool dominated_by(const Vector& v, const Vector& w)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] > w[i])
            return false;
    return true;
}

// Keeps the union of the top-k vectors by each coordinate.
std::vector<FrontierEntry> truncate_top_k(std::vector<FrontierEntry> entries, std::size_t k, std::size_t dim)
{
    std::vector<bool> keep(entries.size(), false);
    std::vector<std::size_t> order(entries.size());
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t t = 0; t < order.size(); ++t)
            order[t] = t;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return entries[a].value[i] > entries[b].value[i];
        });
        for (std::size_t t = 0; t < std::min(k, order.size()); ++t)
            keep[order[t]] = true;
    }
    std::vector<FrontierEntry> out;
    for (std::size_t t = 0; t < entries.size(); ++t)
        if (keep[t])
            out.push_back(std::move(entries[t]));
    return out;
}

} // namespace

std::vector<ParetoFrontier> frontier_dp(const System& sys, std::size_t max_n, const FrontierOptions& options)
{
    if (!sys.is_nonneg())
        throw DomainError("frontier_dp requires nonnegative coefficients and a positive start vector; "
                          "use brute_force for general systems");
    if (max_n == 0)
        throw DomainError("frontier_dp: max_n must be at least 1");

    const bool use_cache = options.cache && sys.mode() == ScalarMode::exact && !options.approx_top_k;
    std::vector<ParetoFrontier> frontiers;
    frontiers.reserve(max_n);
    frontiers.push_back({1, {{sys.start(), BinaryTree::leaf(), "s"}}, false});

    for (std::size_t n = 2; n <= max_n; ++n) {
        if (use_cache) {
            if (auto cached = options.cache->load(sys, n)) {
                frontiers.push_back(std::move(*cached));
                continue;
            }
        }

        // Splits m = 1..n-1 are distributed round-robin over the workers;
        // merging per-worker maps in worker order is schedule independent
        // because offer() keeps the smallest witness text per value.
        const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n - 1)));
        std::vector<CandidateMap> partial(workers);
        auto work = [&](unsigned w) {
            for (std::size_t m = 1 + w; m < n; m += workers)
                combine_split(sys, frontiers[m - 1], frontiers[n - m - 1], partial[w]);
        };
        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back(work, w);
            for (auto& t : pool)
                t.join();
        }
        CandidateMap merged = std::move(partial[0]);
        for (unsigned w = 1; w < workers; ++w)
            for (auto& [v, c] : partial[w])
                offer(merged, v, c);

        ParetoFrontier f;
        f.n = n;
        for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
            bool dominated = false;
            for (const auto& kept : f.entries)
                if (dominated_by(it->first, kept.value)) {
                    dominated = true;
                    break;
                }
            if (dominated)
                continue;
            const Candidate& c = it->second;
            f.entries.push_back({it->first, BinaryTree::node(c.left->witness, c.right->witness), candidate_text(c)});
        }
        f.approximate = frontiers.back().approximate;

        if (f.entries.size() > options.cap) {
            if (!options.approx_top_k)
                throw ResourceError("frontier for n=" + std::to_string(n) + " has " +
                                    std::to_string(f.entries.size()) + " vectors, exceeding the cap of " +
                                    std::to_string(options.cap));
            f.entries = truncate_top_k(std::move(f.entries), *options.approx_top_k, sys.dim());
            f.approximate = true;
        }
        if (use_cache)
            options.cache->store(sys, f);
        frontiers.push_back(std::move(f));
    }
    return frontiers;
}

// ---------------------------------------------------------------------------
// Tables

namespace {

GrowthTable empty_table(const System& sys)
{
    GrowthTable t;
    t.dim = sys.dim();
    t.mode = sys.mode();
    t.certified = sys.mode() == ScalarMode::exact;
    return t;
}

// Fills row n from (value, witness text) pairs taking |x_i| maxima.
template <class Range>
GrowthRow make_row(std::size_t n, std::size_t dim, ScalarMode mode, const Range& values)
{
    GrowthRow row;
    row.n = n;
    row.g_i.assign(dim, Scalar::zero(mode));
    std::vector<const std::string*> best(dim, nullptr);
    for (const auto& [value, text] : values)
        for (std::size_t i = 0; i < dim; ++i) {
            const Scalar a = value[i].abs();
            if (!best[i] || a > row.g_i[i] || (a == row.g_i[i] && *text < *best[i])) {
                row.g_i[i] = a;
                best[i] = text;
            }
        }
    row.g = *std::max_element(row.g_i.begin(), row.g_i.end());
    for (std::size_t i = 0; i < dim; ++i)
        row.witnesses.push_back(BinaryTree::parse(*best[i]));
    return row;
}

} // namespace

GrowthTable table_from_frontiers(const System& sys, const std::vector<ParetoFrontier>& frontiers)
{
    GrowthTable t = empty_table(sys);
    t.method = "frontier";
    for (const auto& f : frontiers) {
        std::vector<std::pair<const Vector&, const std::string*>> values;
        for (const auto& e : f.entries)
            values.emplace_back(e.value, &e.witness_text);
        t.rows.push_back(make_row(f.n, sys.dim(), sys.mode(), values));
        if (f.approximate) {
            t.lower_bounds_only = true;
            t.certified = false;
        }
    }
    return t;
}

GrowthTable growth_table(const System& sys, std::size_t max_n, const FrontierOptions& options)
{
    if (!sys.is_nonneg())
        return brute_force(sys, max_n);
    return table_from_frontiers(sys, frontier_dp(sys, max_n, options));
}

std::vector<CombinationSet> combination_sets(const System& sys, std::size_t max_n, const BruteForceOptions& options)
{
    if (max_n == 0)
        throw DomainError("brute_force: max_n must be at least 1");
    std::vector<CombinationSet> sets;
    sets.push_back({{sys.start(), "s"}});
    for (std::size_t n = 2; n <= max_n; ++n) {
        CombinationSet next;
        for (std::size_t m = 1; m < n; ++m)
            for (const auto& [x, tx] : sets[m - 1])
                for (const auto& [y, ty] : sets[n - m - 1]) {
                    std::string text = "(" + tx + ty + ")";
                    auto [it, inserted] = next.try_emplace(apply(sys, x, y), text);
                    if (!inserted && text < it->second)
                        it->second = std::move(text);
                    if (next.size() > options.cap)
                        throw ResourceError("brute force: |A_" + std::to_string(n) + "| exceeds the cap of " +
                                            std::to_string(options.cap) + " distinct vectors");
                }
        sets.push_back(std::move(next));
    }
    return sets;
}

GrowthTable brute_force(const System& sys, std::size_t max_n, Norm, const BruteForceOptions& options)
{
    const auto sets = combination_sets(sys, max_n, options);
    GrowthTable t = empty_table(sys);
    t.method = "brute-force";
    for (std::size_t n = 1; n <= max_n; ++n) {
        std::vector<std::pair<const Vector&, const std::string*>> values;
        for (const auto& [v, text] : sets[n - 1])
            values.emplace_back(v, &text);
        t.rows.push_back(make_row(n, sys.dim(), sys.mode(), values));
    }
    return t;
}

std::string GrowthTable::to_tsv() const
{
    std::ostringstream out;
    out << "n";
    for (std::size_t i = 1; i <= dim; ++i)
        out << "\tg_" << i;
    out << "\tg";
    for (std::size_t i = 1; i <= dim; ++i)
        out << "\twitness_" << i;
    out << "\n";
    for (const auto& r : rows) {
        out << r.n;
        for (const auto& v : r.g_i)
            out << "\t" << v.to_string();
        out << "\t" << r.g.to_string();
        for (const auto& w : r.witnesses)
            out << "\t" << w.to_string();
        out << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Envelope and finite checks

std::vector<Vector> relaxed_envelope(const System& sys, std::size_t max_n)
{
    if (!sys.is_nonneg())
        throw DomainError("relaxed_envelope requires the nonneg-positive-start class");
    std::vector<Vector> env{sys.start()};
    for (std::size_t n = 2; n <= max_n; ++n) {
        Vector best(sys.dim(), Scalar::zero(sys.mode()));
        for (std::size_t m = 1; m < n; ++m) {
            const Vector v = apply(sys, env[m - 1], env[n - m - 1]);
            for (std::size_t k = 0; k < sys.dim(); ++k)
                if (v[k] > best[k])
                    best[k] = v[k];
        }
        env.push_back(std::move(best));
    }
    return env;
}

RatioReport ratio_check(const GrowthTable& table, const System& sys)
{
    if (table.max_n() < 2)
        throw DomainError("ratio_check needs g(2); tabulate at least n = 2");
    RatioReport rep;
    const Scalar min_s = *std::min_element(sys.start().begin(), sys.start().end());
    rep.bound = table.g(2) / min_s;
    for (std::size_t n = 1; n < table.max_n(); ++n)
        for (std::size_t i = 0; i < table.dim; ++i) {
            const Scalar& now = table.g_i(n, i);
            const Scalar& next = table.g_i(n + 1, i);
            if (next > rep.bound * now)
                rep.holds = false;
            if (!now.is_zero()) {
                const double r = std::exp(next.log_abs() - now.log_abs());
                if (r > rep.max_ratio) {
                    rep.max_ratio = r;
                    rep.worst_n = n;
                    rep.worst_i = i;
                }
            }
        }
    return rep;
}

bool root_split_bound_holds(const GrowthTable& table, const System& sys)
{
    const Scalar c = coeff_row_sum_bound(sys);
    for (std::size_t n = 2; n <= table.max_n(); ++n) {
        Scalar best = Scalar::zero(table.mode);
        for (std::size_t m = 1; m < n; ++m) {
            const Scalar prod = table.g(m) * table.g(n - m);
            if (prod > best)
                best = prod;
        }
        if (table.g(n) > c * best)
            return false;
    }
    return true;
}

std::vector<bool> supermultiplicative_entries(const GrowthTable& table)
{
    std::vector<bool> ok(table.dim, true);
    for (std::size_t i = 0; i < table.dim; ++i)
        for (std::size_t p = 1; p < table.max_n() && ok[i]; ++p)
            for (std::size_t q = p; p + q <= table.max_n(); ++q)
                if (table.g_i(p + q, i) < table.g_i(p, i) * table.g_i(q, i)) {
                    ok[i] = false;
                    break;
                }
    return ok;
}

std::vector<SplitRatio> split_ratio_table(const GrowthTable& table)
{
    std::vector<SplitRatio> out;
    for (std::size_t p = 1; p < table.max_n(); ++p)
        for (std::size_t q = p; p + q <= table.max_n(); ++q) {
            if (table.g(p).is_zero() || table.g(q).is_zero())
                continue;
            const double lr = table.g(p + q).log_abs() - table.g(p).log_abs() - table.g(q).log_abs();
            out.push_back({p, q, std::exp(lr)});
        }
    return out;
}

std::vector<double> empirical_rates(const GrowthTable& table)
{
    std::vector<double> out;
    for (const auto& r : table.rows)
        out.push_back(r.g.is_zero() ? 0.0 : std::exp(r.g.log_abs() / static_cast<double>(r.n)));
    return out;
}

} // namespace bilin
