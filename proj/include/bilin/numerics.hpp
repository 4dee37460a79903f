#pragma once

#include <bilin/errors.hpp>

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bilin {

enum class ScalarMode { exact, log_float };

std::string_view to_string(ScalarMode mode);

/// Sign plus natural logarithm of the magnitude. Zero has sign 0 and its
/// log field is ignored. No operation produces NaN.
class LogFloat {
public:
    LogFloat() = default;
    LogFloat(int sign, double log_magnitude);

    static LogFloat from_double(double value);
    static LogFloat from_rational(const mpq_class& value);

    int sign() const noexcept { return sign_; }
    bool is_zero() const noexcept { return sign_ == 0; }
    double log_magnitude() const noexcept { return log_mag_; }
    double to_double() const;

    friend LogFloat operator+(const LogFloat& a, const LogFloat& b);
    friend LogFloat operator-(const LogFloat& a, const LogFloat& b);
    friend LogFloat operator*(const LogFloat& a, const LogFloat& b);
    friend LogFloat operator/(const LogFloat& a, const LogFloat& b);
    friend LogFloat operator-(const LogFloat& a);
    friend bool operator==(const LogFloat& a, const LogFloat& b);
    friend std::strong_ordering operator<=>(const LogFloat& a, const LogFloat& b);

private:
    int sign_ = 0;
    double log_mag_ = 0.0;
};

/// A scalar in one of the two arithmetic modes. Binary operations on
/// scalars of different modes throw ModeError.
class Scalar {
public:
    /// Exact zero.
    Scalar() : value_(mpq_class(0)) {}
    Scalar(const mpq_class& q) : value_(q) { std::get<mpq_class>(value_).canonicalize(); }
    Scalar(const LogFloat& f) : value_(f) {}
    Scalar(long v) : value_(mpq_class(v)) {}
    Scalar(int v) : value_(mpq_class(v)) {}

    static Scalar zero(ScalarMode mode);
    static Scalar one(ScalarMode mode);

    /// Parses a decimal integer or "p/q" literal (optional leading '-').
    /// Throws ParseError with an offset into `text`.
    static Scalar parse(std::string_view text);

    ScalarMode mode() const noexcept
    {
        return value_.index() == 0 ? ScalarMode::exact : ScalarMode::log_float;
    }
    bool is_exact() const noexcept { return value_.index() == 0; }

    const mpq_class& rational() const;
    const LogFloat& log_float() const;

    int sign() const;
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const;
    Scalar abs() const;

    double to_double() const;
    /// Natural log of |x|; -infinity for zero.
    double log_abs() const;

    /// Same value in log-domain representation.
    Scalar to_log_float() const;

    /// Exact: "p" or "p/q" in lowest terms. Log-domain: decimal scientific
    /// notation with 12 significant digits.
    std::string to_string() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
    friend Scalar operator-(const Scalar& a);

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b);

private:
    std::variant<mpq_class, LogFloat> value_;
};

using Vector = std::vector<Scalar>;

std::string to_string(const Vector& v);

/// Natural log of a positive rational; -infinity for zero.
double log_of(const mpq_class& q);

class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, ScalarMode mode = ScalarMode::exact);

    static Matrix identity(std::size_t n, ScalarMode mode = ScalarMode::exact);
    static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows);
    static Matrix from_rows(const std::vector<std::vector<Scalar>>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    ScalarMode mode() const noexcept { return mode_; }

    Scalar& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Scalar>& entries() const noexcept { return entries_; }

    bool all_integer() const;
    bool all_nonnegative() const;
    Scalar max_entry() const;

    std::string to_string() const;

    friend bool operator==(const Matrix& a, const Matrix& b);
    /// Lexicographic on (rows, cols, entries); usable as a map key.
    friend bool operator<(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_;
    std::size_t cols_;
    ScalarMode mode_;
    std::vector<Scalar> entries_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
inline Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }
Vector mat_vec(const Matrix& a, const Vector& x);
Matrix mat_pow(const Matrix& m, unsigned exponent);

/// Enclosure of the spectral radius of a nonnegative matrix.
struct SpectralInterval {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t iterations = 0;
    /// True when the bounds were checked in exact arithmetic and rounded
    /// outward; false for log-domain input.
    bool certified = true;

    double mid() const noexcept { return 0.5 * (lo + hi); }
    double width() const noexcept { return hi - lo; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, SpectralInterval best)
        : Error(what), best_(best) {}
    const SpectralInterval& best() const noexcept { return best_; }

private:
    SpectralInterval best_;
};

inline constexpr std::size_t default_power_iteration_cap = 100000;

/// Collatz-Wielandt enclosure of rho(m) with hi - lo <= tol.
///
/// The support digraph is split into strongly connected components and
/// rho(m) is the largest block radius. A 1x1 block contributes its entry
/// exactly. Each larger block is irreducible; power iteration on
/// (block + I) from the all-ones vector yields a positive x, and
/// min/max of (Bx)_i / x_i are then evaluated exactly from the exact
/// entries and the (dyadic) iterate, so the bounds hold regardless of
/// floating-point error in the iteration itself.
SpectralInterval spectral_radius(const Matrix& m, double tol,
                                 std::size_t max_iterations = default_power_iteration_cap);

/// Polynomial with arbitrary-precision integer coefficients, constant term first.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<mpz_class> coefficients);

    const std::vector<mpz_class>& coefficients() const noexcept { return coeffs_; }
    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    const mpz_class& leading() const { return coeffs_.back(); }

    mpq_class evaluate(const mpq_class& x) const;
    int sign_at(const mpq_class& x) const { return sgn(evaluate(x)); }

    /// e.g. "x^2 - x - 1".
    std::string to_string() const;
    /// JSON array of decimal coefficient strings, constant term first.
    std::string to_json() const;

    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

private:
    std::vector<mpz_class> coeffs_;
};

/// det(xI - m) by fraction-free (Bareiss) elimination over Z[x].
IntPolynomial char_poly(const Matrix& m);

/// Strongly connected components of a digraph given by adjacency lists,
/// in reverse topological order of the condensation (sinks first).
std::vector<std::vector<std::size_t>>
strongly_connected_components(const std::vector<std::vector<std::size_t>>& adjacency);

} // namespace bilin
