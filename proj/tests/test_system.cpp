#include <doctest.h>

#include "oracles.hpp"

#include <bilin/registry.hpp>
#include <bilin/system.hpp>

#include <random>

using namespace bilin;

namespace {

const char* fibonacci_file =
    R"({"dim": 2, "s": ["1", "1"], "coeffs": [{"k":1,"i":1,"j":2,"c":"1"}, {"k":1,"i":2,"j":1,"c":"1"}, {"k":2,"i":1,"j":2,"c":"1"}]})";

System fibonacci() { return System::from_terms({1, 1}, {{1, 1, 2, 1}, {1, 2, 1, 1}, {2, 1, 2, 1}}); }

System doubling() { return System::from_terms({1, 1}, {{1, 1, 1, 1}, {1, 2, 2, 1}, {2, 2, 2, 1}}); }

Vector vec(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

} // namespace

TEST_CASE("apply examples")
{
    const System f = fibonacci();
    CHECK(apply(f, f.start(), f.start()) == vec({2, 1}));
    CHECK(apply(doubling(), vec({2, 1}), vec({2, 1})) == vec({5, 1}));
    CHECK_THROWS_AS(apply(f, vec({1}), vec({1, 1})), ShapeError);
}

TEST_CASE("slices")
{
    const System f = fibonacci();
    // u -> u * (1, 1) = (u1 + u2, u1)
    CHECK(left_slice(f, f.start()) == Matrix::from_rows({{1, 1}, {1, 0}}));
    // u -> (1, 1) * u = (u1 + u2, u2)
    CHECK(right_slice(f, f.start()) == Matrix::from_rows({{1, 1}, {0, 1}}));
    CHECK(left_slice(doubling(), vec({2, 1})) == Matrix::from_rows({{2, 1}, {0, 1}}));
    CHECK_THROWS_AS(left_slice(f, vec({1, 2, 3})), ShapeError);
}

TEST_CASE("slices agree with apply on random systems")
{
    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 4, 5);
        const auto x = oracle::to_vector(oracle::random_qvec(rng, sys.dim()));
        const auto y = oracle::to_vector(oracle::random_qvec(rng, sys.dim()));
        const Vector v = apply(sys, x, y);
        CHECK(mat_vec(left_slice(sys, y), x) == v);
        CHECK(mat_vec(right_slice(sys, x), y) == v);
        CHECK(oracle::to_qvec(v) == oracle::star(oracle::densify(sys), oracle::to_qvec(x), oracle::to_qvec(y)));
    }
}

TEST_CASE("bilinearity")
{
    std::mt19937_64 rng(43);
    for (int t = 0; t < 100; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 4);
        const std::size_t d = sys.dim();
        const auto x = oracle::to_vector(oracle::random_qvec(rng, d));
        const auto x2 = oracle::to_vector(oracle::random_qvec(rng, d));
        const auto y = oracle::to_vector(oracle::random_qvec(rng, d));
        const auto y2 = oracle::to_vector(oracle::random_qvec(rng, d));
        const Scalar alpha(mpq_class(-7, 3));
        Vector xs(d), ax(d), ys(d), ay(d);
        for (std::size_t i = 0; i < d; ++i) {
            xs[i] = x[i] + x2[i];
            ax[i] = alpha * x[i];
            ys[i] = y[i] + y2[i];
            ay[i] = alpha * y[i];
        }
        const Vector v = apply(sys, x, y);
        const Vector v2 = apply(sys, x2, y);
        const Vector w2 = apply(sys, x, y2);
        const Vector sum_left = apply(sys, xs, y);
        const Vector sum_right = apply(sys, x, ys);
        const Vector scaled_left = apply(sys, ax, y);
        const Vector scaled_right = apply(sys, x, ay);
        for (std::size_t k = 0; k < d; ++k) {
            CHECK(sum_left[k] == v[k] + v2[k]);
            CHECK(sum_right[k] == v[k] + w2[k]);
            CHECK(scaled_left[k] == alpha * v[k]);
            CHECK(scaled_right[k] == alpha * v[k]);
        }
    }
}

TEST_CASE("monotonicity of apply in the nonnegative class")
{
    std::mt19937_64 rng(47);
    std::uniform_int_distribution<long> bump(0, 3);
    for (int t = 0; t < 200; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 3);
        const std::size_t d = sys.dim();
        const auto x = oracle::random_qvec(rng, d, true);
        const auto y = oracle::random_qvec(rng, d, true);
        auto x2 = x, y2 = y;
        for (std::size_t i = 0; i < d; ++i) {
            x2[i] += bump(rng);
            y2[i] += bump(rng);
        }
        const Vector lo = apply(sys, oracle::to_vector(x), oracle::to_vector(y));
        const Vector hi = apply(sys, oracle::to_vector(x2), oracle::to_vector(y2));
        for (std::size_t k = 0; k < d; ++k)
            CHECK(lo[k] <= hi[k]);
    }
}

TEST_CASE("entry bound C max x max y")
{
    std::mt19937_64 rng(53);
    for (int t = 0; t < 200; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 4);
        const std::size_t d = sys.dim();
        const auto x = oracle::random_qvec(rng, d, true);
        const auto y = oracle::random_qvec(rng, d, true);
        const mpq_class mx = *std::max_element(x.begin(), x.end());
        const mpq_class my = *std::max_element(y.begin(), y.end());
        const Scalar c = coeff_row_sum_bound(sys);
        for (const auto& v : apply(sys, oracle::to_vector(x), oracle::to_vector(y)))
            CHECK(v.rational() <= c.rational() * mx * my);
    }
}

TEST_CASE("coeff_row_sum_bound")
{
    CHECK(coeff_row_sum_bound(fibonacci()) == Scalar(2));
    CHECK(coeff_row_sum_bound(doubling()) == Scalar(2));
    CHECK(coeff_row_sum_bound(System::from_terms({1}, {{1, 1, 1, 3}})) == Scalar(3));
    CHECK_THROWS_AS(coeff_row_sum_bound(System::from_terms({1, 0}, {{1, 2, 2, 1}})), DomainError);
}

TEST_CASE("parse the reference system file")
{
    const System s = parse_system(fibonacci_file);
    CHECK(s.dim() == 2);
    CHECK(s.coefficients().size() == 3);
    CHECK(s.sign_class() == SignClass::nonneg_positive_start);
    CHECK(s.coefficient(0, 0, 1) == Scalar(1));
    CHECK(s.coefficient(1, 1, 1).is_zero());
    CHECK(emit_system(s) == fibonacci_file);
}

TEST_CASE("sign classes")
{
    const System zero_start = parse_system(R"({"dim": 2, "s": ["1", "0"], "coeffs": [{"k":1,"i":2,"j":2,"c":"1"}]})");
    CHECK(zero_start.sign_class() == SignClass::general);
    const System negative = parse_system(R"({"dim": 1, "s": ["1"], "coeffs": [{"k":1,"i":1,"j":1,"c":"-1/2"}]})");
    CHECK(negative.sign_class() == SignClass::general);
    CHECK(negative.coefficient(0, 0, 0) == Scalar(mpq_class(-1, 2)));
}

TEST_CASE("empty coefficient list gives the zero product")
{
    CHECK(parse_system(R"({"dim": 1, "s": ["1"]})").coefficients().empty());
    const System s = parse_system(R"({"dim": 3, "s": ["1", "2", "3"], "coeffs": []})");
    CHECK(s.coefficients().empty());
    CHECK(apply(s, s.start(), s.start()) == vec({0, 0, 0}));
}

TEST_CASE("parse errors carry locations")
{
    auto location_of = [](const char* text) {
        try {
            (void)parse_system(text);
        } catch (const ParseError& e) {
            return e.location();
        }
        return std::string("no error");
    };
    CHECK(location_of(R"({"dim": 2, "s": [)").rfind("byte", 0) == 0);
    CHECK(location_of(R"({"dim": 0, "s": [], "coeffs": []})") == "/dim");
    CHECK(location_of(R"({"dim": 2, "s": ["1", "1"], "coeffs": [{"k":3,"i":1,"j":1,"c":"1"}]})") == "/coeffs/0/k");
    CHECK(location_of(R"({"dim": 1, "s": ["x"], "coeffs": []})") == "/s/0");
    CHECK(location_of(R"({"dim": 1, "s": ["1"], "coeffs": [{"k":1,"i":1,"j":1,"c":"1.5"}]})") == "/coeffs/0/c");
    CHECK(location_of(R"({"dim": 2, "s": ["1"], "coeffs": []})") == "/s");
    CHECK(location_of(R"({"dim": 1, "s": ["1"], "coeffs": {}})") == "/coeffs");
    CHECK(location_of(R"([1, 2])") == "/");
}

TEST_CASE("constructor validation")
{
    CHECK_THROWS_AS(System(0, {}, {}), DomainError);
    CHECK_THROWS_AS(System(1, {{0, 0, 1, Scalar(1)}}, vec({1})), DomainError);
    CHECK_THROWS_AS(System(1, {{0, 0, 0, Scalar(1)}, {0, 0, 0, Scalar(2)}}, vec({1})), DomainError);
    CHECK_THROWS_AS(System(2, {}, vec({1})), ShapeError);
}

TEST_CASE("emit is canonical and round-trips")
{
    std::mt19937_64 rng(59);
    for (int t = 0; t < 50; ++t) {
        const System sys = oracle::random_nonneg_system(rng, 3, 5);
        const std::string text = emit_system(sys);
        const System back = parse_system(text);
        CHECK(emit_system(back) == text);
        CHECK(content_hash(back) == content_hash(sys));
    }
    // Coefficient order and zero terms do not affect the canonical form.
    const System a = parse_system(
        R"({"dim": 2, "s": ["2/2", "1"], "coeffs": [{"k":2,"i":1,"j":2,"c":"1"}, {"k":1,"i":1,"j":2,"c":"0"}, {"k":1,"i":2,"j":1,"c":"1"}]})");
    const System b = parse_system(
        R"({"dim": 2, "s": ["1", "1"], "coeffs": [{"k":1,"i":2,"j":1,"c":"1"}, {"k":2,"i":1,"j":2,"c":"1"}]})");
    CHECK(emit_system(a) == emit_system(b));
    CHECK(content_hash(a).size() == 16);
    CHECK(content_hash(a) != content_hash(fibonacci()));
}

TEST_CASE("every registry entry parses and is canonical")
{
    CHECK(registry().size() == 7);
    for (const auto& e : registry()) {
        CAPTURE(e.name);
        const System s = parse_system(e.text);
        CHECK(emit_system(s) == e.text);
        CHECK(!e.expectations.empty());
    }
    CHECK(find_entry("fibonacci")->text == fibonacci_file);
    CHECK(find_entry("period3")->system().sign_class() == SignClass::general);
    CHECK(find_entry("signed-coeff")->system().sign_class() == SignClass::general);
    CHECK(find_entry("nope") == nullptr);
}

TEST_CASE("log-domain copy of a system")
{
    const System f = fibonacci().to_log_float();
    CHECK(f.mode() == ScalarMode::log_float);
    const Vector v = apply(f, f.start(), f.start());
    CHECK(v[0].to_double() == doctest::Approx(2.0));
    CHECK(v[1].to_double() == doctest::Approx(1.0));
}
