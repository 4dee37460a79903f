#include <doctest.h>

#include "oracles.hpp"

#include <bilin/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

using namespace bilin;

namespace {

const double phi = (1.0 + std::sqrt(5.0)) / 2.0;

} // namespace

TEST_CASE("scalar parsing and canonical form")
{
    CHECK(Scalar::parse("6/4").to_string() == "3/2");
    CHECK(Scalar::parse("-2/4").to_string() == "-1/2");
    CHECK_THROWS_AS(Scalar::parse("-2/-4"), ParseError);
    CHECK(Scalar::parse("17").to_string() == "17");
    CHECK(Scalar::parse("0/5").is_zero());
    CHECK(Scalar::parse("3/6").rational().get_den() == 2);
    CHECK_THROWS_AS(Scalar::parse(""), ParseError);
    CHECK_THROWS_AS(Scalar::parse("1/0"), ParseError);
    CHECK_THROWS_AS(Scalar::parse("1.5"), ParseError);
    CHECK_THROWS_AS(Scalar::parse("abc"), ParseError);
}

TEST_CASE("exact and log-domain scalars never mix")
{
    const Scalar a(3);
    const Scalar b = Scalar(3).to_log_float();
    CHECK_THROWS_AS(a + b, ModeError);
    CHECK_THROWS_AS(a * b, ModeError);
    CHECK_THROWS_AS((void)(a < b), ModeError);
    CHECK_THROWS_AS(b.rational(), ModeError);
}

TEST_CASE("log-domain arithmetic")
{
    const Scalar z = Scalar::zero(ScalarMode::log_float);
    const Scalar x = Scalar(LogFloat::from_double(2.5));
    const Scalar y = Scalar(LogFloat::from_double(-4.0));
    CHECK(z.is_zero());
    CHECK((x + y).to_double() == doctest::Approx(-1.5));
    CHECK((x * y).to_double() == doctest::Approx(-10.0));
    CHECK((x - x).is_zero());
    CHECK((z * x).is_zero());
    CHECK((x / y).to_double() == doctest::Approx(-0.625));
    CHECK(y < x);
    CHECK(z < x);
    CHECK(y < z);

    // Values far beyond double range stay finite in the log domain.
    Scalar big = Scalar(LogFloat::from_double(1e300));
    for (int i = 0; i < 10; ++i)
        big = big * big;
    CHECK(std::isfinite(big.log_abs()));
    CHECK(!std::isnan((big - big).log_abs()));
    CHECK(big > x);
}

TEST_CASE("log-domain random agreement with doubles")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-50.0, 50.0);
    for (int t = 0; t < 500; ++t) {
        const double a = val(rng), b = val(rng);
        const Scalar la(LogFloat::from_double(a)), lb(LogFloat::from_double(b));
        CHECK((la + lb).to_double() == doctest::Approx(a + b).epsilon(1e-9).scale(100));
        CHECK((la * lb).to_double() == doctest::Approx(a * b).epsilon(1e-12));
        CHECK(((la < lb) == (a < b)));
    }
}

TEST_CASE("mat_mul examples")
{
    const Matrix f = Matrix::from_rows({{1, 1}, {1, 0}});
    CHECK(f * f == Matrix::from_rows({{2, 1}, {1, 1}}));
    const Matrix a = Matrix::from_rows({{2, 1}, {0, 1}});
    const Matrix b = Matrix::from_rows({{3, 1}, {0, 1}});
    CHECK(a * b == Matrix::from_rows({{6, 3}, {0, 1}}));

    std::mt19937_64 rng(3);
    const Matrix m = oracle::to_matrix(oracle::random_matrix(rng, 3, 9));
    CHECK(Matrix::identity(3) * m == m);
    CHECK(m * Matrix::identity(3) == m);

    CHECK_THROWS_AS(Matrix(2, 3) * Matrix(2, 3), ShapeError);
    CHECK_THROWS_AS(Matrix(0, 3), ShapeError);
}

TEST_CASE("mat_mul is associative on exact scalars")
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto a = oracle::to_matrix(oracle::random_matrix(rng, 4, 7));
        const auto b = oracle::to_matrix(oracle::random_matrix(rng, 4, 7));
        const auto c = oracle::to_matrix(oracle::random_matrix(rng, 4, 7));
        CHECK((a * b) * c == a * (b * c));
        CHECK(oracle::to_qmat(a * b) == oracle::mat_mul(oracle::to_qmat(a), oracle::to_qmat(b)));
    }
}

TEST_CASE("mat_pow matches repeated multiplication")
{
    const Matrix f = Matrix::from_rows({{1, 1}, {1, 0}});
    const Matrix p = mat_pow(f, 30);
    CHECK(p(0, 1).rational() == oracle::fib(30));
    CHECK(p(0, 0).rational() == oracle::fib(31));
    CHECK(mat_pow(f, 0) == Matrix::identity(2));
}

TEST_CASE("spectral radius examples")
{
    const auto f = spectral_radius(Matrix::from_rows({{1, 1}, {1, 0}}), 1e-9);
    CHECK(f.contains(phi));
    CHECK(f.width() <= 1e-9);
    CHECK(f.certified);

    const auto t = spectral_radius(Matrix::from_rows({{2, 1}, {0, 1}}), 1e-9);
    CHECK(t.contains(2.0));
    CHECK(t.lo == 2.0);
    CHECK(t.hi == 2.0);

    const auto o = spectral_radius(Matrix::from_rows({{2, 1}, {2, 0}}), 1e-9);
    CHECK(o.contains(1.0 + std::sqrt(3.0)));
}

TEST_CASE("spectral radius edge cases")
{
    CHECK(spectral_radius(Matrix(3, 3), 1e-9).hi == 0.0);
    CHECK(spectral_radius(Matrix::from_rows({{0, 1}, {1, 0}}), 1e-9).contains(1.0));
    // Nilpotent: strictly upper triangular.
    CHECK(spectral_radius(Matrix::from_rows({{0, 5, 1}, {0, 0, 7}, {0, 0, 0}}), 1e-9).hi == 0.0);
    // Period-3 cycle.
    CHECK(spectral_radius(Matrix::from_rows({{0, 8, 0}, {0, 0, 1}, {1, 0, 0}}), 1e-9).contains(2.0));
    CHECK_THROWS_AS(spectral_radius(Matrix::from_rows({{1, -1}, {0, 1}}), 1e-9), DomainError);
    CHECK_THROWS_AS(spectral_radius(Matrix(2, 3), 1e-9), ShapeError);
}

TEST_CASE("spectral radius reports the best interval on non-convergence")
{
    const Matrix m = Matrix::from_rows({{1, 1}, {1, 0}});
    try {
        (void)spectral_radius(m, 1e-15, 3);
        FAIL("expected a convergence error");
    } catch (const ConvergenceError& e) {
        CHECK(e.best().lo <= phi);
        CHECK(e.best().hi >= phi);
    }
}

TEST_CASE("char_poly examples")
{
    CHECK(char_poly(Matrix::from_rows({{1, 1}, {1, 0}})).to_string() == "x^2 - x - 1");
    CHECK(char_poly(Matrix::from_rows({{2, 1}, {0, 1}})).to_string() == "x^2 - 3x + 2");
    CHECK(char_poly(Matrix::from_rows({{2, 1}, {2, 0}})).to_string() == "x^2 - 2x - 2");
    CHECK(char_poly(Matrix::from_rows({{2, 1}, {2, 0}})).to_json() == R"(["-2","-2","1"])");
    CHECK(char_poly(Matrix::from_rows({{5}})).to_string() == "x - 5");
    CHECK_THROWS_AS(char_poly(Matrix::from_rows({{Scalar::parse("1/2")}})), DomainError);
}

TEST_CASE("char_poly agrees with an independent Faddeev-LeVerrier computation")
{
    std::mt19937_64 rng(17);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 6;
        const auto q = oracle::random_matrix(rng, n, 9, 0.7);
        const auto p = char_poly(oracle::to_matrix(q));
        const auto ref = oracle::faddeev(q);
        REQUIRE(p.degree() == static_cast<int>(n));
        for (std::size_t i = 0; i <= n; ++i)
            CHECK(mpq_class(p.coefficients()[i]) == ref[i]);
    }
}

TEST_CASE("spectral interval contains the largest real root of the char poly")
{
    std::mt19937_64 rng(23);
    const double tol = 1e-9;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 6;
        const auto q = oracle::random_matrix(rng, n, 9);
        const auto rho = spectral_radius(oracle::to_matrix(q), tol);
        const auto [lo, hi] = oracle::max_real_root(oracle::faddeev(q), mpq_class("1/1000000000000"));
        CHECK(rho.width() <= tol);
        CHECK(rho.lo <= hi.get_d() + tol);
        CHECK(rho.hi >= lo.get_d() - tol);
    }
}

TEST_CASE("row sums bracket the spectral radius of irreducible matrices")
{
    std::mt19937_64 rng(29);
    int tested = 0;
    for (int t = 0; t < 200 && tested < 50; ++t) {
        const auto q = oracle::random_matrix(rng, 2 + t % 4, 5, 0.8);
        const Matrix m = oracle::to_matrix(q);
        std::vector<std::vector<std::size_t>> adj(q.size());
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = 0; j < q.size(); ++j)
                if (q[i][j] != 0)
                    adj[i].push_back(j);
        if (strongly_connected_components(adj).size() != 1)
            continue;
        ++tested;
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (const auto& row : q) {
            mpq_class sum = 0;
            for (const auto& e : row)
                sum += e;
            lo = std::min(lo, sum.get_d());
            hi = std::max(hi, sum.get_d());
        }
        const auto rho = spectral_radius(m, 1e-9);
        CHECK(lo <= rho.lo + 1e-9);
        CHECK(rho.hi <= hi + 1e-9);
    }
    CHECK(tested == 50);
}

TEST_CASE("Gelfand proxy: entry growth of M^64 tracks the spectral radius")
{
    std::mt19937_64 rng(31);
    int tested = 0;
    for (int t = 0; t < 100 && tested < 20; ++t) {
        const auto q = oracle::random_matrix(rng, 4, 6, 0.7);
        const Matrix m = oracle::to_matrix(q);
        const auto rho = spectral_radius(m, 1e-9);
        if (rho.hi == 0.0)
            continue;
        ++tested;
        const double root = std::exp(mat_pow(m, 64).max_entry().log_abs() / 64.0);
        CHECK(std::abs(root - rho.mid()) <= 0.05 * rho.mid());
    }
    CHECK(tested == 20);
}

TEST_CASE("strongly connected components come sinks first")
{
    // 0 -> 1 -> 2 -> 1, 3 isolated
    auto comps = strongly_connected_components({{1}, {2}, {1}, {}});
    for (auto& c : comps)
        std::sort(c.begin(), c.end());
    REQUIRE(comps.size() == 3);
    std::size_t pos01 = 0, pos0 = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (comps[c] == std::vector<std::size_t>{1, 2})
            pos01 = c;
        if (comps[c] == std::vector<std::size_t>{0})
            pos0 = c;
    }
    CHECK(pos01 < pos0);
}
