#pragma once

#include <bilin/numerics.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace bilin {

enum class SignClass {
    /// All coefficients >= 0 and every start entry > 0.
    nonneg_positive_start,
    general,
};

std::string_view to_string(SignClass sc);

/// One term c * u_i * w_j contributing to output entry k. Indices are 0-based.
struct Coefficient {
    std::size_t k;
    std::size_t i;
    std::size_t j;
    Scalar c;
};

/// A bilinear map * on d-dimensional vectors together with a start vector s.
///
/// Coefficients are stored sparsely, sorted by (k, i, j), with zero terms
/// dropped. Files and reports use 1-based indices; everything in memory is
/// 0-based.
class System {
public:
    System(std::size_t dim, std::vector<Coefficient> coefficients, Vector start);

    /// Convenience builder taking 1-based (k, i, j, c) integer terms.
    struct Term {
        std::size_t k, i, j;
        long c;
    };
    static System from_terms(std::vector<long> start, std::vector<Term> terms);

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Coefficient>& coefficients() const noexcept { return coeffs_; }
    const Vector& start() const noexcept { return start_; }
    /// Reserved for multilinear maps; only 2 is implemented.
    std::size_t arity() const noexcept { return 2; }
    SignClass sign_class() const noexcept { return sign_class_; }
    bool is_nonneg() const noexcept { return sign_class_ == SignClass::nonneg_positive_start; }
    ScalarMode mode() const noexcept { return mode_; }

    /// Coefficient c_{i,j}^{(k)} (0-based), zero when absent.
    Scalar coefficient(std::size_t k, std::size_t i, std::size_t j) const;

    /// Same system with every scalar converted to the log domain.
    System to_log_float() const;

private:
    std::size_t dim_;
    std::vector<Coefficient> coeffs_;
    Vector start_;
    SignClass sign_class_;
    ScalarMode mode_;
};

/// x * y, entry k = sum over terms of c * x_i * y_j.
Vector apply(const System& sys, const Vector& x, const Vector& y);

/// Matrix of x -> x * y (entry (k, i) = sum_j c_{i,j}^{(k)} y_j).
Matrix left_slice(const System& sys, const Vector& y);

/// Matrix of y -> x * y (entry (k, j) = sum_i c_{i,j}^{(k)} x_i).
Matrix right_slice(const System& sys, const Vector& x);

/// max_k of the total coefficient mass of output entry k. Requires the
/// nonnegative class.
Scalar coeff_row_sum_bound(const System& sys);

/// Parses the JSON system format. Throws ParseError carrying a byte offset
/// (syntax errors) or a JSON pointer (semantic errors).
System parse_system(std::string_view text);

/// Canonical serialization; parse_system(emit_system(s)) reproduces s and
/// emit_system is a fixed point on its own output.
std::string emit_system(const System& sys);

/// 16 hex digits of FNV-1a over the canonical serialization.
std::string content_hash(const System& sys);

} // namespace bilin
