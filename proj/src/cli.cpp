#include <bilin/cli.hpp>

#include <bilin/bounds.hpp>
#include <bilin/depgraph.hpp>
#include <bilin/growth.hpp>
#include <bilin/patterns.hpp>
#include <bilin/registry.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace bilin {

namespace {

using nlohmann::ordered_json;

/// Bad invocation or unreadable input; maps to exit_usage.
class UsageError : public Error {
public:
    using Error::Error;
};

struct Common {
    std::string system;
    bool json = false;
    bool timestamp = false;
    unsigned threads = 1;
};

System load_system(const std::string& source)
{
    constexpr std::string_view prefix = "builtin:";
    if (source.rfind(prefix, 0) == 0) {
        const std::string name = source.substr(prefix.size());
        const RegistryEntry* e = find_entry(name);
        if (!e)
            throw UsageError("unknown built-in system '" + name + "'");
        return e->system();
    }
    std::ifstream in(source, std::ios::binary);
    if (!in)
        throw UsageError("cannot open system file '" + source + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_system(text.str());
}

std::string now_utc()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

ScalarMode parse_mode(const std::string& m)
{
    if (m == "exact")
        return ScalarMode::exact;
    if (m == "float")
        return ScalarMode::log_float;
    throw UsageError("--mode must be exact or float");
}

ordered_json table_json(const GrowthTable& t)
{
    ordered_json j;
    j["method"] = t.method;
    j["mode"] = std::string(to_string(t.mode));
    j["certified"] = t.certified;
    j["lower_bounds_only"] = t.lower_bounds_only;
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows) {
        ordered_json row;
        row["n"] = r.n;
        ordered_json gi = ordered_json::array();
        for (const auto& v : r.g_i)
            gi.push_back(v.to_string());
        row["g_i"] = gi;
        row["g"] = r.g.to_string();
        ordered_json w = ordered_json::array();
        for (const auto& t2 : r.witnesses)
            w.push_back(t2.to_string());
        row["witnesses"] = w;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

void print_plot_data(std::ostream& out, const GrowthTable& t)
{
    const auto rates = empirical_rates(t);
    out << std::setprecision(17);
    for (std::size_t n = 1; n <= rates.size(); ++n)
        out << n << "\t" << rates[n - 1] << "\n";
}

FrontierOptions frontier_options(unsigned threads, const std::optional<FrontierCache>& cache,
                                 std::optional<std::size_t> approx)
{
    FrontierOptions o;
    o.threads = threads;
    o.cache = cache ? &*cache : nullptr;
    o.approx_top_k = approx;
    return o;
}

SearchOptions search_options(const std::string& strategy, double tol, unsigned threads)
{
    SearchOptions o;
    o.tol = tol;
    o.threads = threads;
    if (strategy == "exhaustive") {
        o.strategy = SearchOptions::Strategy::exhaustive;
    } else if (strategy == "beam") {
        o.strategy = SearchOptions::Strategy::beam;
    } else if (strategy.rfind("beam:", 0) == 0) {
        o.strategy = SearchOptions::Strategy::beam;
        const std::string w = strategy.substr(5);
        std::size_t used = 0;
        unsigned long width = 0;
        try {
            width = std::stoul(w, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != w.size() || width == 0)
            throw UsageError("beam width must be a positive integer, got '" + w + "'");
        o.beam_width = width;
    } else {
        throw UsageError("--strategy must be exhaustive or beam:W");
    }
    return o;
}

int cmd_analyze(const Common& c, std::size_t n_max, const std::string& mode_text, bool plot,
                std::optional<std::size_t> approx, std::ostream& out)
{
    const ScalarMode mode = parse_mode(mode_text);
    System sys = load_system(c.system);
    const std::string hash = content_hash(sys);
    if (mode == ScalarMode::log_float)
        sys = sys.to_log_float();
    const auto cache = mode == ScalarMode::exact ? FrontierCache::from_environment() : std::nullopt;
    const GrowthTable t = growth_table(sys, n_max, frontier_options(c.threads, cache, approx));
    if (plot) {
        print_plot_data(out, t);
        return exit_ok;
    }
    std::optional<RatioReport> ratio;
    if (sys.is_nonneg() && t.max_n() >= 2)
        ratio = ratio_check(t, sys);

    if (c.json) {
        ordered_json j;
        j["system"] = hash;
        j["sign_class"] = std::string(to_string(sys.sign_class()));
        if (mode == ScalarMode::log_float)
            j["note"] = "uncertified arithmetic";
        j["table"] = table_json(t);
        if (ratio) {
            ordered_json r;
            r["bound"] = ratio->bound.to_string();
            r["max_ratio"] = ratio->max_ratio;
            r["worst_n"] = ratio->worst_n;
            r["worst_i"] = ratio->worst_i + 1;
            r["holds"] = ratio->holds;
            j["ratio"] = r;
        }
        if (c.timestamp)
            j["generated"] = now_utc();
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    out << "# system " << hash << "  class " << to_string(sys.sign_class()) << "  method " << t.method
        << "  mode " << to_string(t.mode) << "\n";
    if (mode == ScalarMode::log_float)
        out << "# uncertified arithmetic\n";
    if (t.lower_bounds_only)
        out << "# approximate frontier: values are lower bounds\n";
    if (c.timestamp)
        out << "# generated " << now_utc() << "\n";
    out << t.to_tsv();
    if (ratio) {
        out << "# ratio bound g(2)/min s = " << ratio->bound.to_string() << ": " << (ratio->holds ? "holds" : "fails")
            << "; max g_i(n+1)/g_i(n) = " << std::setprecision(10) << ratio->max_ratio << " at n=" << ratio->worst_n
            << ", i=" << ratio->worst_i + 1 << "\n";
    }
    return exit_ok;
}

int cmd_patterns(const Common& c, std::size_t max_leaves, const std::string& strategy, double tol, std::size_t top,
                 std::ostream& out)
{
    const System sys = load_system(c.system);
    const SearchOptions opts = search_options(strategy, tol, c.threads);
    SearchResult result;
    try {
        result = search_patterns(sys, max_leaves, opts);
    } catch (const SearchBudgetExceeded& e) {
        result = e.partial();
    }
    ordered_json j;
    j["system"] = content_hash(sys);
    j["max_leaves"] = max_leaves;
    j["strategy"] = strategy;
    j["patterns_examined"] = result.patterns_examined;
    j["complete"] = result.complete;
    ordered_json ranked = ordered_json::array();
    for (std::size_t r = 0; r < result.ranked.size() && r < top; ++r)
        ranked.push_back(ordered_json::parse(to_json(result.ranked[r])));
    j["ranked"] = ranked;
    if (c.timestamp)
        j["generated"] = now_utc();
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_bounds(const Common& c, std::size_t n_max, std::size_t max_leaves, bool plot, std::ostream& out)
{
    const System sys = load_system(c.system);
    const auto cache = FrontierCache::from_environment();
    BoundsOptions opts;
    opts.frontier = frontier_options(c.threads, cache, std::nullopt);
    opts.search.threads = c.threads;
    const RateBounds b = bounds_report(sys, n_max, max_leaves, opts);
    if (plot) {
        out << std::setprecision(17);
        for (const auto& [n, v] : b.empirical)
            out << n << "\t" << v << "\n";
        return exit_ok;
    }
    ordered_json j = ordered_json::parse(to_json(b));
    if (c.timestamp)
        j["generated"] = now_utc();
    out << j.dump(2) << "\n";
    return exit_ok;
}

int cmd_graph(const Common& c, const std::string& dot_path, std::ostream& out)
{
    const System sys = load_system(c.system);
    const DependencyGraph g = build_graph(sys);
    if (dot_path == "-") {
        out << to_dot(g);
        return exit_ok;
    }
    if (!dot_path.empty()) {
        std::ofstream f(dot_path, std::ios::binary);
        if (!f)
            throw UsageError("cannot write '" + dot_path + "'");
        f << to_dot(g);
    }
    out << components_json(g) << "\n";
    return exit_ok;
}

int cmd_oracle(const Common& c, std::size_t n_max, const std::string& mode_text, std::size_t cap, bool plot,
               std::ostream& out)
{
    const ScalarMode mode = parse_mode(mode_text);
    System sys = load_system(c.system);
    const std::string hash = content_hash(sys);
    if (mode == ScalarMode::log_float)
        sys = sys.to_log_float();
    BruteForceOptions opts;
    opts.cap = cap;
    const GrowthTable t = brute_force(sys, n_max, Norm::max_abs, opts);
    if (plot) {
        print_plot_data(out, t);
        return exit_ok;
    }
    if (c.json) {
        ordered_json j;
        j["system"] = hash;
        j["sign_class"] = std::string(to_string(sys.sign_class()));
        if (mode == ScalarMode::log_float)
            j["note"] = "uncertified arithmetic";
        j["table"] = table_json(t);
        if (c.timestamp)
            j["generated"] = now_utc();
        out << j.dump(2) << "\n";
        return exit_ok;
    }
    out << "# system " << hash << "  class " << to_string(sys.sign_class()) << "  method " << t.method
        << "  mode " << to_string(t.mode) << "\n";
    if (mode == ScalarMode::log_float)
        out << "# uncertified arithmetic\n";
    if (c.timestamp)
        out << "# generated " << now_utc() << "\n";
    out << t.to_tsv();
    return exit_ok;
}

int cmd_verify(const Common& c, const std::vector<std::string>& names, std::ostream& out)
{
    std::vector<const RegistryEntry*> entries;
    if (names.empty()) {
        for (const auto& e : registry())
            entries.push_back(&e);
    } else {
        for (const auto& n : names) {
            const RegistryEntry* e = find_entry(n);
            if (!e)
                throw UsageError("unknown built-in system '" + n + "'");
            entries.push_back(e);
        }
    }
    bool all = true;
    ordered_json results = ordered_json::array();
    for (const RegistryEntry* e : entries) {
        const System sys = e->system();
        for (const auto& x : e->expectations) {
            CheckResult r;
            try {
                r = x.check(sys);
            } catch (const std::exception& ex) {
                r = {false, std::string("error: ") + ex.what()};
            }
            all = all && r.pass;
            if (c.json) {
                ordered_json item;
                item["system"] = e->name;
                item["expectation"] = x.description;
                item["pass"] = r.pass;
                item["detail"] = r.detail;
                results.push_back(item);
            } else {
                out << (r.pass ? "PASS " : "FAIL ") << e->name << ": " << x.description;
                if (!r.detail.empty())
                    out << " (" << r.detail << ")";
                out << "\n";
            }
        }
    }
    if (c.json) {
        ordered_json j;
        j["pass"] = all;
        j["results"] = results;
        out << j.dump(2) << "\n";
    }
    return all ? exit_ok : exit_failure;
}

int cmd_list(std::ostream& out)
{
    for (const auto& e : registry())
        out << e.name << "\t" << e.summary << "\n";
    return exit_ok;
}

void report_error(std::ostream& err, bool json, const char* kind, const std::exception& e, const std::string& location)
{
    if (json) {
        ordered_json j;
        j["error"] = kind;
        j["message"] = e.what();
        if (!location.empty())
            j["location"] = location;
        err << j.dump() << "\n";
    } else {
        err << "bilin: " << kind << " error: " << e.what();
        if (!location.empty())
            err << " at " << location;
        err << "\n";
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Growth analysis of bilinear-map systems", "bilin"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub, bool with_system) {
        if (with_system)
            sub->add_option("system", common.system, "System file, or builtin:NAME")->required();
        sub->add_flag("--json", common.json, "Emit JSON");
        sub->add_flag("--timestamp", common.timestamp, "Stamp the report with the current time");
        sub->add_option("--threads", common.threads, "Worker threads")->check(CLI::PositiveNumber);
    };

    std::size_t n_max = 16, max_leaves = 6, top = 10, cap = BruteForceOptions{}.cap;
    std::string mode = "exact", strategy = "exhaustive", dot_path;
    double tol = 1e-9;
    bool plot = false;
    std::optional<std::size_t> approx;
    std::vector<std::string> names;

    auto* analyze = app.add_subcommand("analyze", "Exact growth table g_i(n) and ratio report");
    add_common(analyze, true);
    analyze->add_option("--n-max", n_max, "Largest n")->check(CLI::PositiveNumber);
    analyze->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    analyze->add_flag("--plot-data", plot, "Print n and g(n)^(1/n) only");
    analyze->add_option("--approx", approx, "Keep the top K frontier vectors per coordinate (lower bounds only)")
        ->check(CLI::PositiveNumber);

    auto* patterns = app.add_subcommand("patterns", "Ranked linear patterns with certified rates");
    add_common(patterns, true);
    patterns->add_option("--max-leaves", max_leaves, "Largest pattern size")->check(CLI::Range(2, 64));
    patterns->add_option("--strategy", strategy, "exhaustive or beam:W");
    patterns->add_option("--tol", tol, "Spectral enclosure width")->check(CLI::PositiveNumber);
    patterns->add_option("--top", top, "Number of patterns reported")->check(CLI::PositiveNumber);

    auto* bounds = app.add_subcommand("bounds", "Certified lower and upper bounds on the growth rate");
    add_common(bounds, true);
    bounds->add_option("--n-max", n_max, "Largest tabulated n")->check(CLI::PositiveNumber);
    bounds->add_option("--max-leaves", max_leaves, "Largest pattern size")->check(CLI::Range(0, 64));
    bounds->add_flag("--plot-data", plot, "Print n and g(n)^(1/n) only");

    auto* graph = app.add_subcommand("graph", "Dependency graph components");
    add_common(graph, true);
    graph->add_option("--dot", dot_path, "Write DOT to this file ('-' for standard output)");

    auto* oracle = app.add_subcommand("oracle", "Brute-force table over all combinations");
    add_common(oracle, true);
    oracle->add_option("--n-max", n_max, "Largest n")->check(CLI::PositiveNumber);
    oracle->add_option("--mode", mode, "exact or float")->check(CLI::IsMember({"exact", "float"}));
    oracle->add_option("--cap", cap, "Largest |A_n| explored")->check(CLI::PositiveNumber);
    oracle->add_flag("--plot-data", plot, "Print n and g(n)^(1/n) only");

    auto* verify = app.add_subcommand("verify", "Check the expectations of built-in systems");
    add_common(verify, false);
    verify->add_option("names", names, "Built-in systems (default: all)");

    auto* list = app.add_subcommand("list", "List built-in systems");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            for (auto* sub : app.get_subcommands())
                if (sub->count_all() > 0)
                    out << sub->help();
            return exit_ok;
        }
        err << "bilin: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(common, n_max, mode, plot, approx, out);
        if (patterns->parsed())
            return cmd_patterns(common, max_leaves, strategy, tol, top, out);
        if (bounds->parsed())
            return cmd_bounds(common, n_max, max_leaves, plot, out);
        if (graph->parsed())
            return cmd_graph(common, dot_path, out);
        if (oracle->parsed())
            return cmd_oracle(common, n_max, mode, cap, plot, out);
        if (verify->parsed())
            return cmd_verify(common, names, out);
        if (list->parsed())
            return cmd_list(out);
    } catch (const UsageError& e) {
        report_error(err, common.json, "usage", e, "");
        return exit_usage;
    } catch (const ParseError& e) {
        report_error(err, common.json, "parse", e, e.location());
        return exit_usage;
    } catch (const ResourceError& e) {
        report_error(err, common.json, "resource", e, "");
        return exit_failure;
    } catch (const DomainError& e) {
        report_error(err, common.json, "domain", e, "");
        return exit_failure;
    } catch (const Error& e) {
        report_error(err, common.json, "runtime", e, "");
        return exit_failure;
    }
    return exit_usage;
}

} // namespace bilin
