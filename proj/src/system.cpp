#include <bilin/system.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <tuple>

namespace bilin {

std::string_view to_string(SignClass sc)
{
    return sc == SignClass::nonneg_positive_start ? "nonneg-positive-start" : "general";
}

System::System(std::size_t dim, std::vector<Coefficient> coefficients, Vector start)
    : dim_(dim), start_(std::move(start))
{
    if (dim_ == 0)
        throw DomainError("system dimension must be at least 1");
    if (start_.size() != dim_)
        throw ShapeError("start vector has " + std::to_string(start_.size()) + " entries, expected " +
                         std::to_string(dim_));
    mode_ = start_.front().mode();
    for (const Scalar& v : start_)
        if (v.mode() != mode_)
            throw ModeError("start vector mixes scalar modes");

    for (auto& c : coefficients) {
        if (c.k >= dim_ || c.i >= dim_ || c.j >= dim_)
            throw DomainError("coefficient index out of range");
        if (c.c.mode() != mode_)
            throw ModeError("coefficient and start vector use different scalar modes");
        if (!c.c.is_zero())
            coeffs_.push_back(std::move(c));
    }
    std::sort(coeffs_.begin(), coeffs_.end(), [](const Coefficient& a, const Coefficient& b) {
        return std::tie(a.k, a.i, a.j) < std::tie(b.k, b.i, b.j);
    });
    for (std::size_t t = 1; t < coeffs_.size(); ++t)
        if (coeffs_[t].k == coeffs_[t - 1].k && coeffs_[t].i == coeffs_[t - 1].i &&
            coeffs_[t].j == coeffs_[t - 1].j)
            throw DomainError("duplicate coefficient (k=" + std::to_string(coeffs_[t].k + 1) +
                              ", i=" + std::to_string(coeffs_[t].i + 1) +
                              ", j=" + std::to_string(coeffs_[t].j + 1) + ")");

    const bool nonneg = std::all_of(coeffs_.begin(), coeffs_.end(),
                                    [](const Coefficient& c) { return c.c.sign() >= 0; });
    const bool positive_start =
        std::all_of(start_.begin(), start_.end(), [](const Scalar& s) { return s.sign() > 0; });
    sign_class_ = nonneg && positive_start ? SignClass::nonneg_positive_start : SignClass::general;
}

System System::from_terms(std::vector<long> start, std::vector<Term> terms)
{
    Vector s;
    for (long v : start)
        s.emplace_back(v);
    std::vector<Coefficient> coeffs;
    for (const Term& t : terms) {
        if (t.k == 0 || t.i == 0 || t.j == 0)
            throw DomainError("from_terms expects 1-based indices");
        coeffs.push_back({t.k - 1, t.i - 1, t.j - 1, Scalar(t.c)});
    }
    return System(start.size(), std::move(coeffs), std::move(s));
}

Scalar System::coefficient(std::size_t k, std::size_t i, std::size_t j) const
{
    for (const auto& c : coeffs_)
        if (c.k == k && c.i == i && c.j == j)
            return c.c;
    return Scalar::zero(mode_);
}

System System::to_log_float() const
{
    if (mode_ == ScalarMode::log_float)
        return *this;
    std::vector<Coefficient> coeffs;
    for (const auto& c : coeffs_)
        coeffs.push_back({c.k, c.i, c.j, c.c.to_log_float()});
    Vector s;
    for (const auto& v : start_)
        s.push_back(v.to_log_float());
    return System(dim_, std::move(coeffs), std::move(s));
}

namespace {

void require_length(const System& sys, const Vector& v, const char* what)
{
    if (v.size() != sys.dim())
        throw ShapeError(std::string(what) + " has " + std::to_string(v.size()) + " entries, system dimension is " +
                         std::to_string(sys.dim()));
}

} // namespace

Vector apply(const System& sys, const Vector& x, const Vector& y)
{
    require_length(sys, x, "left operand");
    require_length(sys, y, "right operand");
    Vector out(sys.dim(), Scalar::zero(sys.mode()));
    for (const auto& c : sys.coefficients())
        if (!x[c.i].is_zero() && !y[c.j].is_zero())
            out[c.k] += c.c * x[c.i] * y[c.j];
    return out;
}

Matrix left_slice(const System& sys, const Vector& y)
{
    require_length(sys, y, "right operand");
    Matrix m(sys.dim(), sys.dim(), sys.mode());
    for (const auto& c : sys.coefficients())
        if (!y[c.j].is_zero())
            m(c.k, c.i) += c.c * y[c.j];
    return m;
}

Matrix right_slice(const System& sys, const Vector& x)
{
    require_length(sys, x, "left operand");
    Matrix m(sys.dim(), sys.dim(), sys.mode());
    for (const auto& c : sys.coefficients())
        if (!x[c.i].is_zero())
            m(c.k, c.j) += c.c * x[c.i];
    return m;
}

Scalar coeff_row_sum_bound(const System& sys)
{
    if (!sys.is_nonneg())
        throw DomainError("coeff_row_sum_bound requires the nonneg-positive-start class");
    Vector mass(sys.dim(), Scalar::zero(sys.mode()));
    for (const auto& c : sys.coefficients())
        mass[c.k] += c.c;
    return *std::max_element(mass.begin(), mass.end());
}

// ---------------------------------------------------------------------------
// JSON format

namespace {

using nlohmann::json;

std::size_t read_index(const json& obj, const char* key, std::size_t dim, const std::string& where)
{
    if (!obj.contains(key))
        throw ParseError(std::string("missing field '") + key + "'", where);
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ParseError(std::string("field '") + key + "' must be an integer", where + "/" + key);
    const auto idx = v.get<long long>();
    if (idx < 1 || static_cast<unsigned long long>(idx) > dim)
        throw ParseError(std::string("index '") + key + "' = " + std::to_string(idx) + " outside [1, " +
                             std::to_string(dim) + "]",
                         where + "/" + key);
    return static_cast<std::size_t>(idx - 1);
}

Scalar read_literal(const json& v, const std::string& where)
{
    if (v.is_string()) {
        try {
            return Scalar::parse(v.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(std::string("non-numeric literal: ") + e.what(), where);
        }
    }
    if (v.is_number_integer())
        return Scalar::parse(std::to_string(v.get<long long>()));
    throw ParseError("numeric literal must be a decimal integer or \"p/q\" string", where);
}

} // namespace

System parse_system(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), "byte " + std::to_string(e.byte));
    }
    if (!doc.is_object())
        throw ParseError("system file must be a JSON object", "/");
    if (!doc.contains("dim"))
        throw ParseError("missing field 'dim'", "/");
    if (!doc["dim"].is_number_integer())
        throw ParseError("'dim' must be an integer", "/dim");
    const long long dim_raw = doc["dim"].get<long long>();
    if (dim_raw < 1)
        throw ParseError("'dim' must be at least 1", "/dim");
    const auto dim = static_cast<std::size_t>(dim_raw);

    if (!doc.contains("s") || !doc["s"].is_array())
        throw ParseError("missing array field 's'", "/s");
    const json& s_json = doc["s"];
    if (s_json.size() != dim)
        throw ParseError("'s' has " + std::to_string(s_json.size()) + " entries, expected " + std::to_string(dim),
                         "/s");
    Vector start;
    for (std::size_t i = 0; i < dim; ++i)
        start.push_back(read_literal(s_json[i], "/s/" + std::to_string(i)));

    std::vector<Coefficient> coeffs;
    if (doc.contains("coeffs")) {
        const json& cs = doc["coeffs"];
        if (!cs.is_array())
            throw ParseError("'coeffs' must be an array", "/coeffs");
        for (std::size_t t = 0; t < cs.size(); ++t) {
            const std::string where = "/coeffs/" + std::to_string(t);
            if (!cs[t].is_object())
                throw ParseError("coefficient entry must be an object", where);
            const std::size_t k = read_index(cs[t], "k", dim, where);
            const std::size_t i = read_index(cs[t], "i", dim, where);
            const std::size_t j = read_index(cs[t], "j", dim, where);
            if (!cs[t].contains("c"))
                throw ParseError("missing field 'c'", where);
            coeffs.push_back({k, i, j, read_literal(cs[t]["c"], where + "/c")});
        }
    }
    try {
        return System(dim, std::move(coeffs), std::move(start));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), "/coeffs");
    }
}

std::string emit_system(const System& sys)
{
    if (sys.mode() != ScalarMode::exact)
        throw ModeError("only exact systems have a file representation");
    std::string out = "{\"dim\": " + std::to_string(sys.dim()) + ", \"s\": [";
    for (std::size_t i = 0; i < sys.dim(); ++i) {
        if (i)
            out += ", ";
        out += "\"" + sys.start()[i].to_string() + "\"";
    }
    out += "], \"coeffs\": [";
    bool first = true;
    for (const auto& c : sys.coefficients()) {
        if (!first)
            out += ", ";
        first = false;
        out += "{\"k\":" + std::to_string(c.k + 1) + ",\"i\":" + std::to_string(c.i + 1) +
               ",\"j\":" + std::to_string(c.j + 1) + ",\"c\":\"" + c.c.to_string() + "\"}";
    }
    out += "]}";
    return out;
}

std::string content_hash(const System& sys)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : emit_system(sys)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace bilin
