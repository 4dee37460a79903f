#include <bilin/bounds.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilin {

namespace {

void require_nonneg(const System& sys, const char* what)
{
    if (!sys.is_nonneg())
        throw DomainError(std::string(what) + " requires the nonneg-positive-start class");
    if (sys.mode() != ScalarMode::exact)
        throw ModeError(std::string(what) + " requires exact arithmetic");
}

double round_up(const mpq_class& q)
{
    double d = q.get_d();
    if (mpq_class(d) < q)
        d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

// Lower bounds pass through exp/log; two ulps cover both roundings.
double round_down_loose(double x)
{
    const double down = -std::numeric_limits<double>::infinity();
    return std::nextafter(std::nextafter(x, down), down);
}

struct FloatSystem {
    std::size_t dim;
    struct Term {
        std::size_t k, i, j;
        double c;
    };
    std::vector<Term> terms;
    std::vector<double> s;

    explicit FloatSystem(const System& sys) : dim(sys.dim())
    {
        for (const auto& c : sys.coefficients())
            terms.push_back({c.k, c.i, c.j, c.c.to_double()});
        for (const auto& v : sys.start())
            s.push_back(v.to_double());
    }

    // mu(w) * max s_i / w_i with w = exp(x).
    double objective(const std::vector<double>& x) const
    {
        std::vector<double> w(dim), row(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            w[i] = std::exp(x[i]);
        for (const auto& t : terms)
            row[t.k] += t.c * w[t.i] * w[t.j];
        double mu = 0.0, alpha = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            mu = std::max(mu, row[k] / w[k]);
            alpha = std::max(alpha, s[k] / w[k]);
        }
        return mu * alpha;
    }
};

std::vector<double> descend(const FloatSystem& fs, std::vector<double> x)
{
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double best = fs.objective(x);
    for (int sweep = 0; sweep < 200; ++sweep) {
        const double before = best;
        for (std::size_t i = 0; i < fs.dim; ++i) {
            double a = x[i] - 4.0, b = x[i] + 4.0;
            auto at = [&](double v) {
                auto y = x;
                y[i] = v;
                return fs.objective(y);
            };
            double c = b - phi * (b - a), d = a + phi * (b - a);
            double fc = at(c), fd = at(d);
            for (int it = 0; it < 80; ++it) {
                if (fc <= fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    fc = at(c);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    fd = at(d);
                }
            }
            const double v = 0.5 * (a + b);
            const double fv = at(v);
            if (fv < best) {
                best = fv;
                x[i] = v;
            }
        }
        if (before - best <= 1e-13 * std::max(1.0, best))
            break;
    }
    return x;
}

Vector to_rational_weights(const std::vector<double>& x)
{
    const double top = *std::max_element(x.begin(), x.end());
    Vector w;
    for (double xi : x) {
        const double scaled = std::exp(xi - top) * 1e6;
        const long num = std::max(1L, std::lround(scaled));
        w.emplace_back(mpq_class(num, 1000000));
    }
    return w;
}

mpq_class max_start_ratio(const System& sys, const Vector& w)
{
    mpq_class alpha = 0;
    for (std::size_t i = 0; i < sys.dim(); ++i)
        alpha = std::max(alpha, mpq_class(sys.start()[i].rational() / w[i].rational()));
    return alpha;
}

} // namespace

Scalar lyapunov_mu(const System& sys, const Vector& w)
{
    if (w.size() != sys.dim())
        throw ShapeError("weight vector has " + std::to_string(w.size()) + " entries, expected " +
                         std::to_string(sys.dim()));
    std::vector<mpq_class> row(sys.dim(), 0);
    for (const auto& c : sys.coefficients())
        row[c.k] += c.c.rational() * w[c.i].rational() * w[c.j].rational();
    mpq_class mu = 0;
    for (std::size_t k = 0; k < sys.dim(); ++k)
        mu = std::max(mu, mpq_class(row[k] / w[k].rational()));
    return Scalar(mu);
}

bool replay_certificate(const System& sys, const LyapunovCertificate& cert)
{
    if (cert.w.size() != sys.dim())
        return false;
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        if (cert.w[i].rational() <= 0)
            return false;
        if (sys.start()[i].rational() > cert.w[i].rational())
            return false;
    }
    std::vector<mpq_class> row(sys.dim(), 0);
    for (const auto& c : sys.coefficients())
        row[c.k] += c.c.rational() * cert.w[c.i].rational() * cert.w[c.j].rational();
    for (std::size_t k = 0; k < sys.dim(); ++k)
        if (row[k] > cert.mu.rational() * cert.w[k].rational())
            return false;
    return true;
}

UpperBound upper_bound(const System& sys, const std::optional<Vector>& w, const GrowthTable* table)
{
    require_nonneg(sys, "upper_bound");
    Vector weights;
    if (w) {
        if (w->size() != sys.dim())
            throw ShapeError("weight vector has " + std::to_string(w->size()) + " entries, expected " +
                             std::to_string(sys.dim()));
        for (const auto& wi : *w)
            if (wi.sign() <= 0)
                throw DomainError("weight vector must be entrywise positive");
        weights = *w;
        const mpq_class alpha = max_start_ratio(sys, weights);
        if (alpha > 1)
            for (auto& wi : weights)
                wi = wi * Scalar(alpha);
    } else {
        const FloatSystem fs(sys);
        std::vector<std::vector<double>> starts;
        const double smax = *std::max_element(fs.s.begin(), fs.s.end());
        std::vector<double> from_s(sys.dim());
        for (std::size_t i = 0; i < sys.dim(); ++i)
            from_s[i] = std::log(fs.s[i] / smax);
        starts.push_back(from_s);
        if (table && table->max_n() > 0 && !table->g(table->max_n()).is_zero()) {
            const std::size_t n = table->max_n();
            std::vector<double> x(sys.dim());
            for (std::size_t i = 0; i < sys.dim(); ++i) {
                const double gi = table->g_i(n, i).is_zero()
                                      ? 0.0
                                      : std::exp(table->g_i(n, i).log_abs() - table->g(n).log_abs());
                x[i] = std::log(std::max(fs.s[i] / smax, gi));
            }
            starts.push_back(x);
        }
        std::optional<Vector> best;
        mpq_class best_bound;
        for (const auto& x0 : starts) {
            Vector cand = to_rational_weights(descend(fs, x0));
            const mpq_class alpha = max_start_ratio(sys, cand);
            for (auto& wi : cand)
                wi = wi * Scalar(alpha);
            const mpq_class bound = lyapunov_mu(sys, cand).rational();
            if (!best || bound < best_bound) {
                best = cand;
                best_bound = bound;
            }
        }
        weights = *best;
    }

    UpperBound out;
    out.certificate.w = weights;
    out.certificate.mu = lyapunov_mu(sys, weights);
    if (!replay_certificate(sys, out.certificate))
        throw Error("Lyapunov certificate failed exact replay");
    out.exact = Scalar(mpq_class(out.certificate.mu.rational() * max_start_ratio(sys, weights)));
    out.value = round_up(out.exact.rational());
    return out;
}

LowerBound lower_bound(const System& sys, std::size_t max_leaves, const GrowthTable& table,
                       const SearchOptions& search)
{
    require_nonneg(sys, "lower_bound");
    LowerBound out;
    if (max_leaves >= 2) {
        SearchResult result;
        try {
            result = search_patterns(sys, max_leaves, search);
        } catch (const SearchBudgetExceeded& e) {
            result = e.partial();
        }
        if (!result.ranked.empty() && result.best().rate.lo > out.value) {
            out.source = LowerBound::Source::pattern;
            out.value = result.best().rate.lo;
            out.pattern = result.best();
            out.justification = "spectral radius of a linear pattern";
        }
    }

    if (!table.lower_bounds_only && table.certified) {
        const auto super = supermultiplicative_entries(table);
        for (std::size_t i = 0; i < super.size(); ++i) {
            if (!super[i])
                continue;
            for (std::size_t n = 1; n <= table.max_n(); ++n) {
                const Scalar& v = table.g_i(n, i);
                if (v.sign() <= 0)
                    continue;
                const double r = round_down_loose(std::exp(v.log_abs() / static_cast<double>(n)));
                if (r > out.value) {
                    out.source = LowerBound::Source::supermultiplicative;
                    out.value = r;
                    out.pattern.reset();
                    out.entry = i;
                    out.n = n;
                    out.justification = "g_" + std::to_string(i + 1) + "(p+q) >= g_" + std::to_string(i + 1) +
                                        "(p) g_" + std::to_string(i + 1) + "(q) for all p+q <= " +
                                        std::to_string(table.max_n());
                }
            }
        }
    }
    return out;
}

RateBounds bounds_report(const System& sys, std::size_t max_n, std::size_t max_leaves, const BoundsOptions& options)
{
    require_nonneg(sys, "bounds_report");
    const GrowthTable table = growth_table(sys, max_n, options.frontier);
    RateBounds out;
    out.lower = lower_bound(sys, max_leaves, table, options.search);
    out.upper = upper_bound(sys, std::nullopt, &table);
    const auto rates = empirical_rates(table);
    for (std::size_t n = 1; n <= rates.size(); ++n)
        out.empirical.emplace_back(n, rates[n - 1]);
    if (out.upper && out.lower.value > out.upper->value)
        throw Error("lower bound " + std::to_string(out.lower.value) + " exceeds upper bound " +
                    std::to_string(out.upper->value));
    return out;
}

std::string to_json(const RateBounds& b)
{
    using nlohmann::ordered_json;
    ordered_json j;
    ordered_json lower;
    lower["value"] = b.lower.value;
    switch (b.lower.source) {
    case LowerBound::Source::none:
        lower["certificate"] = nullptr;
        break;
    case LowerBound::Source::pattern: {
        ordered_json cert;
        cert["kind"] = "pattern";
        cert["pattern"] = ordered_json::parse(to_json(*b.lower.pattern));
        lower["certificate"] = cert;
        break;
    }
    case LowerBound::Source::supermultiplicative: {
        ordered_json cert;
        cert["kind"] = "supermultiplicative";
        cert["entry"] = b.lower.entry + 1;
        cert["n"] = b.lower.n;
        cert["justification"] = b.lower.justification;
        lower["certificate"] = cert;
        break;
    }
    }
    j["lower"] = lower;
    if (b.upper) {
        ordered_json upper;
        upper["value"] = b.upper->value;
        upper["exact"] = b.upper->exact.to_string();
        ordered_json cert;
        cert["kind"] = "lyapunov";
        ordered_json w = ordered_json::array();
        for (const auto& wi : b.upper->certificate.w)
            w.push_back(wi.to_string());
        cert["w"] = w;
        cert["mu"] = b.upper->certificate.mu.to_string();
        upper["certificate"] = cert;
        j["upper"] = upper;
    } else {
        j["upper"] = nullptr;
    }
    ordered_json emp = ordered_json::array();
    for (const auto& [n, v] : b.empirical)
        emp.push_back({n, v});
    j["empirical"] = emp;
    j["empirical_certified"] = false;
    return j.dump();
}

} // namespace bilin
