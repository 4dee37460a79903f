#include <bilin/registry.hpp>

#include <bilin/bounds.hpp>
#include <bilin/depgraph.hpp>
#include <bilin/growth.hpp>
#include <bilin/patterns.hpp>

#include <cmath>
#include <sstream>

namespace bilin {

mpz_class fibonacci_number(unsigned n)
{
    mpz_class f;
    mpz_fib_ui(f.get_mpz_t(), n);
    return f;
}

namespace {

CheckResult ok(std::string detail = {}) { return {true, std::move(detail)}; }

CheckResult fail(std::string detail) { return {false, std::move(detail)}; }

std::string mismatch(const char* what, std::size_t n, const Scalar& got, const std::string& want)
{
    std::ostringstream out;
    out << what << "(" << n << ") = " << got.to_string() << ", expected " << want;
    return out.str();
}

CheckResult fibonacci_table(const System& sys)
{
    const GrowthTable t = growth_table(sys, 30);
    for (std::size_t n = 1; n <= 30; ++n) {
        const mpz_class f1 = fibonacci_number(static_cast<unsigned>(n + 1));
        const mpz_class f2 = fibonacci_number(static_cast<unsigned>(n));
        if (t.g_i(n, 0).rational() != f1)
            return fail(mismatch("g_1", n, t.g_i(n, 0), f1.get_str()));
        if (t.g_i(n, 1).rational() != f2)
            return fail(mismatch("g_2", n, t.g_i(n, 1), f2.get_str()));
    }
    return ok("n <= 30");
}

CheckResult fibonacci_lemma(const System&)
{
    for (unsigned p = 1; p <= 50; ++p)
        for (unsigned q = 1; q <= 50; ++q) {
            const mpz_class rhs = fibonacci_number(p + q - 1);
            const mpz_class a = fibonacci_number(p) * fibonacci_number(q - 1) +
                                fibonacci_number(p - 1) * fibonacci_number(q);
            if (a > rhs || fibonacci_number(p) * fibonacci_number(q) > rhs)
                return fail("violated at p=" + std::to_string(p) + ", q=" + std::to_string(q));
        }
    return ok("2500 pairs");
}

CheckResult fibonacci_pattern(const System& sys)
{
    const auto p = LinearPattern::make(BinaryTree::parse("(ss)"), LeafPath::parse("L"));
    const auto r = pattern_rate(sys, p);
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    if (!(r.rate.lo <= phi && phi <= r.rate.hi))
        return fail("rate interval misses the golden ratio");
    return ok("rate in [" + std::to_string(r.rate.lo) + ", " + std::to_string(r.rate.hi) + "]");
}

CheckResult fibonacci_certificate(const System& sys)
{
    const auto ub = upper_bound(sys, Vector{Scalar(2), Scalar(1)});
    if (ub.certificate.mu != Scalar(2) || ub.exact != Scalar(2))
        return fail("mu = " + ub.certificate.mu.to_string() + ", bound = " + ub.exact.to_string());
    return ok("mu = 2");
}

CheckResult doubling_powers(const System& sys)
{
    static const long a[] = {1, 2, 5, 26, 677, 458330};
    const GrowthTable t = growth_table(sys, 32);
    for (unsigned k = 0; k <= 5; ++k) {
        const std::size_t n = std::size_t{1} << k;
        if (t.g(n) != Scalar(a[k]))
            return fail(mismatch("g", n, t.g(n), std::to_string(a[k])));
        if (!(t.row(n).witnesses.at(0) == perfect_tree(k)))
            return fail("witness for n=" + std::to_string(n) + " is " + t.row(n).witnesses.at(0).to_string());
    }
    return ok("k <= 5");
}

CheckResult sequence_matches(const GrowthTable& t, const std::vector<long>& want)
{
    for (std::size_t n = 1; n <= want.size(); ++n)
        if (t.g(n) != Scalar(want[n - 1]))
            return fail(mismatch("g", n, t.g(n), std::to_string(want[n - 1])));
    return ok("n <= " + std::to_string(want.size()));
}

CheckResult doubling_prefix(const System& sys)
{
    return sequence_matches(growth_table(sys, 14), {1, 2, 3, 5, 7, 11, 16, 26, 36, 56, 81, 131, 183, 287});
}

CheckResult doubling_patterns(const System& sys)
{
    const auto result = search_patterns(sys, 9);
    const double target = std::pow(26.0, 1.0 / 8.0);
    const auto& best = result.best();
    if (!(best.rate.hi < 1.5029))
        return fail("best pattern rate reaches " + std::to_string(best.rate.hi));
    if (std::abs(best.rate.lo - target) > 1e-9)
        return fail("best pattern rate " + std::to_string(best.rate.lo) + " differs from 26^(1/8)");
    return ok("best " + best.pattern.tree.to_string() + " mark " + best.pattern.mark.to_string());
}

CheckResult constant_values(const System& sys)
{
    const auto frontiers = frontier_dp(sys, 16);
    for (const auto& f : frontiers) {
        if (f.entries.size() != 1)
            return fail("frontier at n=" + std::to_string(f.n) + " has " + std::to_string(f.entries.size()) +
                        " vectors");
        const Vector want{Scalar(static_cast<long>(f.n)), Scalar(1)};
        if (f.entries.front().value != want)
            return fail("A_" + std::to_string(f.n) + " = {" + to_string(f.entries.front().value) + "}");
    }
    return ok("n <= 16");
}

CheckResult constant_graph(const System& sys)
{
    const auto g = build_graph(sys);
    if (g.components.size() != 2 || g.components[0] != std::vector<std::size_t>{0} ||
        g.components[1] != std::vector<std::size_t>{1} || !g.greater(0, 1))
        return fail(components_json(g));
    return ok(components_json(g));
}

CheckResult period3_values(const System& sys)
{
    std::vector<long> want;
    for (std::size_t n = 1; n <= 12; ++n)
        want.push_back(n % 3 == 0 ? 0 : 1);
    return sequence_matches(brute_force(sys, 12), want);
}

CheckResult signed_values(const System& sys)
{
    std::vector<long> want;
    long odd = 1;
    for (std::size_t n = 1; n <= 11; ++n) {
        want.push_back(n % 2 == 0 ? 1 : odd);
        if (n % 2 == 1)
            odd *= 6;
    }
    return sequence_matches(brute_force(sys, 11), want);
}

CheckResult open_values(const System& sys)
{
    return sequence_matches(growth_table(sys, 10), {1, 2, 3, 5, 9, 14, 24, 41, 66, 110});
}

CheckResult open_pattern(const System& sys)
{
    const auto result = search_patterns(sys, 3);
    const double target = std::sqrt(1.0 + std::sqrt(3.0));
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const auto& best = result.best();
    if (std::abs(best.rate.lo - target) > 1e-6)
        return fail("best rate " + std::to_string(best.rate.lo));
    if (!(best.rate.lo > phi))
        return fail("best rate does not exceed the golden ratio");
    return ok("lambda >= " + std::to_string(best.rate.lo));
}

RegistryEntry make(std::string name, std::string summary, std::vector<long> s, std::vector<System::Term> terms,
                   std::vector<Expectation> expectations)
{
    return {std::move(name), std::move(summary), emit_system(System::from_terms(std::move(s), std::move(terms))),
            std::move(expectations)};
}

std::vector<RegistryEntry> build_registry()
{
    std::vector<RegistryEntry> r;
    r.push_back(make("fibonacci", "x*y = (x1y2 + x2y1, x1y2), s = (1, 1); growth rate is the golden ratio",
                     {1, 1}, {{1, 1, 2, 1}, {1, 2, 1, 1}, {2, 1, 2, 1}},
                     {{"g_1(n) = F(n+1) and g_2(n) = F(n) for n <= 30", fibonacci_table},
                      {"F(p)F(q-1) + F(p-1)F(q) <= F(p+q-1) and F(p)F(q) <= F(p+q-1) for p, q <= 50",
                       fibonacci_lemma},
                      {"2-leaf pattern with the left leaf marked has rate phi", fibonacci_pattern},
                      {"weights w = (2, 1) certify mu = 2", fibonacci_certificate}}));
    r.push_back(make("doubling", "x*y = (x1y1 + x2y2, x2y2), s = (1, 1); no pattern attains the growth rate",
                     {1, 1}, {{1, 1, 1, 1}, {1, 2, 2, 1}, {2, 2, 2, 1}},
                     {{"g(2^k) = 1, 2, 5, 26, 677, 458330 for k <= 5, witnessed by perfect trees", doubling_powers},
                      {"g(1..14) = 1, 2, 3, 5, 7, 11, 16, 26, 36, 56, 81, 131, 183, 287", doubling_prefix},
                      {"best pattern rate over <= 9 leaves is 26^(1/8) < 1.5029", doubling_patterns}}));
    r.push_back(make("constant-n1", "x*y = (x1y2 + x2y1, x2y2), s = (1, 1); every tree gives (n, 1)", {1, 1},
                     {{1, 1, 2, 1}, {1, 2, 1, 1}, {2, 2, 2, 1}},
                     {{"A_n = {(n, 1)} for n <= 16", constant_values},
                      {"components {1} > {2}", constant_graph}}));
    r.push_back(make("period3", "x*y = (x2y2, x1y1), s = (1, 0); g(n) = 0 exactly when 3 divides n", {1, 0},
                     {{1, 2, 2, 1}, {2, 1, 1, 1}},
                     {{"g = 1, 1, 0 repeating for n <= 12", period3_values}}));
    r.push_back(make("signed-s", "x*y = (x1y1, x2y2, 3x1y3 + 3x2y3), s = (1, -1, 1)", {1, -1, 1},
                     {{1, 1, 1, 1}, {2, 2, 2, 1}, {3, 1, 3, 3}, {3, 2, 3, 3}},
                     {{"g(n) = 1 for even n and 6^((n-1)/2) for odd n, n <= 11", signed_values}}));
    r.push_back(make("signed-coeff", "x*y = (x1y1, -x2y2, 3x1y3 - 3x2y3), s = (1, 1, 1)", {1, 1, 1},
                     {{1, 1, 1, 1}, {2, 2, 2, -1}, {3, 1, 3, 3}, {3, 2, 3, -3}},
                     {{"g(n) = 1 for even n and 6^((n-1)/2) for odd n, n <= 11", signed_values}}));
    r.push_back(make("open-problem", "x*y = (x1y1 + x2y2, x1y1), s = (1, 1); a 3-leaf pattern beats phi", {1, 1},
                     {{1, 1, 1, 1}, {1, 2, 2, 1}, {2, 1, 1, 1}},
                     {{"g(1..10) = 1, 2, 3, 5, 9, 14, 24, 41, 66, 110", open_values},
                      {"3-leaf pattern search certifies lambda >= (1 + sqrt 3)^(1/2) > phi", open_pattern}}));
    return r;
}

} // namespace

const std::vector<RegistryEntry>& registry()
{
    static const std::vector<RegistryEntry> entries = build_registry();
    return entries;
}

const RegistryEntry* find_entry(std::string_view name)
{
    for (const auto& e : registry())
        if (e.name == name)
            return &e;
    return nullptr;
}

} // namespace bilin
