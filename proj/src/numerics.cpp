#include <bilin/numerics.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace bilin {

std::string_view to_string(ScalarMode mode)
{
    return mode == ScalarMode::exact ? "exact" : "float";
}

// ---------------------------------------------------------------------------
// LogFloat

LogFloat::LogFloat(int sign, double log_magnitude)
    : sign_(sign > 0 ? 1 : (sign < 0 ? -1 : 0)), log_mag_(sign == 0 ? 0.0 : log_magnitude)
{
    if (std::isnan(log_magnitude))
        throw DomainError("LogFloat: NaN log magnitude");
    if (sign_ != 0 && log_mag_ == -std::numeric_limits<double>::infinity()) {
        sign_ = 0;
        log_mag_ = 0.0;
    }
}

LogFloat LogFloat::from_double(double value)
{
    if (std::isnan(value))
        throw DomainError("LogFloat: NaN");
    if (value == 0.0)
        return {};
    return {value > 0 ? 1 : -1, std::log(std::fabs(value))};
}

LogFloat LogFloat::from_rational(const mpq_class& value)
{
    if (sgn(value) == 0)
        return {};
    return {sgn(value), log_of(abs(value))};
}

double LogFloat::to_double() const
{
    if (sign_ == 0)
        return 0.0;
    return sign_ * std::exp(log_mag_);
}

namespace {

// log(e^a + e^b) with a >= b.
double log_add(double a, double b) { return a + std::log1p(std::exp(b - a)); }

} // namespace

LogFloat operator+(const LogFloat& a, const LogFloat& b)
{
    if (a.is_zero())
        return b;
    if (b.is_zero())
        return a;
    const bool a_big = a.log_mag_ >= b.log_mag_;
    const LogFloat& big = a_big ? a : b;
    const LogFloat& small = a_big ? b : a;
    if (big.sign_ == small.sign_)
        return {big.sign_, log_add(big.log_mag_, small.log_mag_)};
    // Opposite signs: |big| - |small|.
    if (big.log_mag_ == small.log_mag_)
        return {};
    const double ratio = std::exp(small.log_mag_ - big.log_mag_);
    if (ratio >= 1.0)
        return {};
    return {big.sign_, big.log_mag_ + std::log1p(-ratio)};
}

LogFloat operator-(const LogFloat& a) { return {-a.sign_, a.log_mag_}; }

LogFloat operator-(const LogFloat& a, const LogFloat& b) { return a + (-b); }

LogFloat operator*(const LogFloat& a, const LogFloat& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    return {a.sign_ * b.sign_, a.log_mag_ + b.log_mag_};
}

LogFloat operator/(const LogFloat& a, const LogFloat& b)
{
    if (b.is_zero())
        throw DomainError("division by zero");
    if (a.is_zero())
        return {};
    return {a.sign_ * b.sign_, a.log_mag_ - b.log_mag_};
}

bool operator==(const LogFloat& a, const LogFloat& b)
{
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_mag_ == b.log_mag_);
}

std::strong_ordering operator<=>(const LogFloat& a, const LogFloat& b)
{
    if (a.sign_ != b.sign_)
        return a.sign_ <=> b.sign_;
    if (a.sign_ == 0 || a.log_mag_ == b.log_mag_)
        return std::strong_ordering::equal;
    const bool a_larger_mag = a.log_mag_ > b.log_mag_;
    if (a.sign_ > 0)
        return a_larger_mag ? std::strong_ordering::greater : std::strong_ordering::less;
    return a_larger_mag ? std::strong_ordering::less : std::strong_ordering::greater;
}

// ---------------------------------------------------------------------------
// Scalar

double log_of(const mpq_class& q)
{
    if (sgn(q) == 0)
        return -std::numeric_limits<double>::infinity();
    long num_exp = 0;
    long den_exp = 0;
    const double num = mpz_get_d_2exp(&num_exp, q.get_num_mpz_t());
    const double den = mpz_get_d_2exp(&den_exp, q.get_den_mpz_t());
    return std::log(std::fabs(num) / den) + static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

Scalar Scalar::zero(ScalarMode mode)
{
    return mode == ScalarMode::exact ? Scalar(mpq_class(0)) : Scalar(LogFloat{});
}

Scalar Scalar::one(ScalarMode mode)
{
    return mode == ScalarMode::exact ? Scalar(mpq_class(1)) : Scalar(LogFloat(1, 0.0));
}

Scalar Scalar::parse(std::string_view text)
{
    if (text.empty())
        throw ParseError("empty numeric literal", "offset 0");
    std::size_t pos = 0;
    if (text[0] == '-')
        ++pos;
    auto digits = [&](const char* what) {
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9')
            ++pos;
        if (pos == start)
            throw ParseError(std::string("expected digits in ") + what + " of '" + std::string(text) + "'",
                             "offset " + std::to_string(pos));
    };
    digits("numerator");
    const std::size_t num_end = pos;
    std::size_t den_start = 0;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        den_start = pos;
        digits("denominator");
    }
    if (pos != text.size())
        throw ParseError("unexpected character in numeric literal '" + std::string(text) + "'",
                         "offset " + std::to_string(pos));
    mpz_class num(std::string(text.substr(0, num_end)), 10);
    mpz_class den = 1;
    if (den_start != 0) {
        den = mpz_class(std::string(text.substr(den_start)), 10);
        if (den == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'",
                             "offset " + std::to_string(den_start));
    }
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q);
}

const mpq_class& Scalar::rational() const
{
    if (!is_exact())
        throw ModeError("exact value requested from a log-domain scalar");
    return std::get<mpq_class>(value_);
}

const LogFloat& Scalar::log_float() const
{
    if (is_exact())
        throw ModeError("log-domain value requested from an exact scalar");
    return std::get<LogFloat>(value_);
}

int Scalar::sign() const
{
    if (is_exact())
        return sgn(std::get<mpq_class>(value_));
    return std::get<LogFloat>(value_).sign();
}

bool Scalar::is_integer() const
{
    return is_exact() && std::get<mpq_class>(value_).get_den() == 1;
}

Scalar Scalar::abs() const
{
    if (is_exact())
        return Scalar(mpq_class(::abs(std::get<mpq_class>(value_))));
    const auto& f = std::get<LogFloat>(value_);
    return Scalar(LogFloat(f.is_zero() ? 0 : 1, f.log_magnitude()));
}

double Scalar::to_double() const
{
    if (is_exact())
        return std::get<mpq_class>(value_).get_d();
    return std::get<LogFloat>(value_).to_double();
}

double Scalar::log_abs() const
{
    if (is_exact())
        return log_of(::abs(std::get<mpq_class>(value_)));
    const auto& f = std::get<LogFloat>(value_);
    return f.is_zero() ? -std::numeric_limits<double>::infinity() : f.log_magnitude();
}

Scalar Scalar::to_log_float() const
{
    if (!is_exact())
        return *this;
    return Scalar(LogFloat::from_rational(std::get<mpq_class>(value_)));
}

std::string Scalar::to_string() const
{
    if (is_exact())
        return std::get<mpq_class>(value_).get_str();
    const auto& f = std::get<LogFloat>(value_);
    if (f.is_zero())
        return "0";
    const double log10v = f.log_magnitude() / std::log(10.0);
    double exponent = std::floor(log10v);
    double mantissa = std::pow(10.0, log10v - exponent);
    if (mantissa >= 10.0) {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%.11fe%+.0f", f.sign() < 0 ? "-" : "", mantissa, exponent);
    return buf;
}

namespace {

void require_same_mode(const Scalar& a, const Scalar& b)
{
    if (a.mode() != b.mode())
        throw ModeError("cannot combine exact and log-domain scalars");
}

} // namespace

Scalar& Scalar::operator+=(const Scalar& o)
{
    require_same_mode(*this, o);
    if (is_exact())
        std::get<mpq_class>(value_) += std::get<mpq_class>(o.value_);
    else
        std::get<LogFloat>(value_) = std::get<LogFloat>(value_) + std::get<LogFloat>(o.value_);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    require_same_mode(*this, o);
    if (is_exact())
        std::get<mpq_class>(value_) -= std::get<mpq_class>(o.value_);
    else
        std::get<LogFloat>(value_) = std::get<LogFloat>(value_) - std::get<LogFloat>(o.value_);
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    require_same_mode(*this, o);
    if (is_exact())
        std::get<mpq_class>(value_) *= std::get<mpq_class>(o.value_);
    else
        std::get<LogFloat>(value_) = std::get<LogFloat>(value_) * std::get<LogFloat>(o.value_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    require_same_mode(*this, o);
    if (o.is_zero())
        throw DomainError("division by zero");
    if (is_exact())
        std::get<mpq_class>(value_) /= std::get<mpq_class>(o.value_);
    else
        std::get<LogFloat>(value_) = std::get<LogFloat>(value_) / std::get<LogFloat>(o.value_);
    return *this;
}

Scalar operator-(const Scalar& a)
{
    if (a.is_exact())
        return Scalar(mpq_class(-std::get<mpq_class>(a.value_)));
    return Scalar(-std::get<LogFloat>(a.value_));
}

bool operator==(const Scalar& a, const Scalar& b)
{
    require_same_mode(a, b);
    if (a.is_exact())
        return std::get<mpq_class>(a.value_) == std::get<mpq_class>(b.value_);
    return std::get<LogFloat>(a.value_) == std::get<LogFloat>(b.value_);
}

std::strong_ordering operator<=>(const Scalar& a, const Scalar& b)
{
    require_same_mode(a, b);
    if (a.is_exact()) {
        const int c = cmp(std::get<mpq_class>(a.value_), std::get<mpq_class>(b.value_));
        return c <=> 0;
    }
    return std::get<LogFloat>(a.value_) <=> std::get<LogFloat>(b.value_);
}

std::string to_string(const Vector& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ", ";
        out += v[i].to_string();
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, ScalarMode mode)
    : rows_(rows), cols_(cols), mode_(mode), entries_(rows * cols, Scalar::zero(mode))
{
    if (rows == 0 || cols == 0)
        throw ShapeError("matrix dimensions must be positive");
}

Matrix Matrix::identity(std::size_t n, ScalarMode mode)
{
    Matrix m(n, n, mode);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = Scalar::one(mode);
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<long>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c)
            throw ShapeError("ragged matrix rows");
        std::size_t j = 0;
        for (long v : row)
            m(i, j++) = Scalar(v);
        ++i;
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Scalar>>& rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    const ScalarMode mode = (r && c) ? rows.front().front().mode() : ScalarMode::exact;
    Matrix m(r, c, mode);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c)
            throw ShapeError("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) {
            if (rows[i][j].mode() != mode)
                throw ModeError("matrix entries in mixed scalar modes");
            m(i, j) = rows[i][j];
        }
    }
    return m;
}

bool Matrix::all_integer() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.is_integer(); });
}

bool Matrix::all_nonnegative() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const Scalar& s) { return s.sign() >= 0; });
}

Scalar Matrix::max_entry() const { return *std::max_element(entries_.begin(), entries_.end()); }

std::string Matrix::to_string() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j)
                out += ", ";
            out += (*this)(i, j).to_string();
        }
        out += "]";
    }
    return out + "]";
}

bool operator==(const Matrix& a, const Matrix& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.mode_ == b.mode_ && a.entries_ == b.entries_;
}

bool operator<(const Matrix& a, const Matrix& b)
{
    if (a.rows_ != b.rows_)
        return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_)
        return a.cols_ < b.cols_;
    return std::lexicographical_compare(a.entries_.begin(), a.entries_.end(), b.entries_.begin(),
                                        b.entries_.end());
}

Matrix mat_mul(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw ShapeError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    if (a.mode() != b.mode())
        throw ModeError("mat_mul: operands in different scalar modes");
    Matrix out(a.rows(), b.cols(), a.mode());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Scalar& aik = a(i, k);
            if (aik.is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                if (!b(k, j).is_zero())
                    out(i, j) += aik * b(k, j);
        }
    return out;
}

Vector mat_vec(const Matrix& a, const Vector& x)
{
    if (a.cols() != x.size())
        throw ShapeError("mat_vec: matrix has " + std::to_string(a.cols()) + " columns, vector has " +
                         std::to_string(x.size()) + " entries");
    Vector out(a.rows(), Scalar::zero(a.mode()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a(i, j).is_zero())
                out[i] += a(i, j) * x[j];
    return out;
}

Matrix mat_pow(const Matrix& m, unsigned exponent)
{
    if (!m.is_square())
        throw ShapeError("mat_pow: matrix is not square");
    Matrix result = Matrix::identity(m.rows(), m.mode());
    Matrix base = m;
    while (exponent) {
        if (exponent & 1u)
            result = result * base;
        exponent >>= 1u;
        if (exponent)
            base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan)

std::vector<std::vector<std::size_t>>
strongly_connected_components(const std::vector<std::vector<std::size_t>>& adjacency)
{
    const std::size_t n = adjacency.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    std::size_t counter = 0;

    struct Frame {
        std::size_t v;
        std::size_t next_edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next_edge < adjacency[f.v].size()) {
                const std::size_t w = adjacency[f.v][f.next_edge++];
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty())
                low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                components.push_back(std::move(comp));
            }
        }
    }
    return components;
}

// ---------------------------------------------------------------------------
// Spectral radius

namespace {

double round_down(const mpq_class& q)
{
    double d = q.get_d(); // truncates toward zero
    if (sgn(q) < 0 && mpq_class(d) != q)
        d = std::nextafter(d, -std::numeric_limits<double>::infinity());
    return d;
}

double round_up(const mpq_class& q)
{
    double d = q.get_d();
    if (mpq_class(d) < q)
        d = std::nextafter(d, std::numeric_limits<double>::infinity());
    return d;
}

// q * 2^-shift as a double without intermediate overflow.
double scaled_double(const mpq_class& q, long shift)
{
    if (sgn(q) == 0)
        return 0.0;
    long ne = 0, de = 0;
    const double n = mpz_get_d_2exp(&ne, q.get_num_mpz_t());
    const double d = mpz_get_d_2exp(&de, q.get_den_mpz_t());
    return std::ldexp(n / d, static_cast<int>(ne - de - shift));
}

long log2_magnitude(const mpq_class& q)
{
    long ne = 0, de = 0;
    mpz_get_d_2exp(&ne, q.get_num_mpz_t());
    mpz_get_d_2exp(&de, q.get_den_mpz_t());
    return ne - de;
}

struct BlockResult {
    SpectralInterval interval;
    bool converged = false;
};

// Power iteration on (B + I) for an irreducible block given by `idx`.
BlockResult irreducible_block_radius(const Matrix& m, const std::vector<std::size_t>& idx, double tol,
                                     std::size_t max_iterations)
{
    const std::size_t k = idx.size();
    const bool exact = m.mode() == ScalarMode::exact;

    // Scaled double copy of the block; `scale` maps back to true magnitude.
    std::vector<double> bd(k * k, 0.0);
    double scale = 1.0;
    if (exact) {
        long shift = std::numeric_limits<long>::min();
        for (std::size_t r : idx)
            for (std::size_t c : idx)
                if (!m(r, c).is_zero())
                    shift = std::max(shift, log2_magnitude(m(r, c).rational()));
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                bd[a * k + b] = scaled_double(m(idx[a], idx[b]).rational(), shift);
        scale = std::ldexp(1.0, static_cast<int>(std::clamp(shift, -1000L, 1000L)));
    } else {
        double max_log = -std::numeric_limits<double>::infinity();
        for (std::size_t r : idx)
            for (std::size_t c : idx)
                if (!m(r, c).is_zero())
                    max_log = std::max(max_log, m(r, c).log_abs());
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                const Scalar& e = m(idx[a], idx[b]);
                bd[a * k + b] = e.is_zero() ? 0.0 : std::exp(e.log_abs() - max_log);
            }
        scale = std::exp(max_log);
    }

    std::vector<double> x(k, 1.0), y(k, 0.0), bx(k, 0.0);
    BlockResult best;
    best.interval.lo = 0.0;
    best.interval.hi = std::numeric_limits<double>::infinity();
    best.interval.certified = exact;

    auto exact_bounds = [&](std::size_t iteration) -> bool {
        std::vector<mpq_class> xq(k);
        for (std::size_t a = 0; a < k; ++a) {
            if (!(x[a] > 0.0))
                return false;
            xq[a] = mpq_class(x[a]);
        }
        mpq_class lo, hi;
        for (std::size_t a = 0; a < k; ++a) {
            mpq_class acc = 0;
            for (std::size_t b = 0; b < k; ++b) {
                const Scalar& e = m(idx[a], idx[b]);
                if (!e.is_zero())
                    acc += e.rational() * xq[b];
            }
            acc /= xq[a];
            if (a == 0 || acc < lo)
                lo = acc;
            if (a == 0 || acc > hi)
                hi = acc;
        }
        SpectralInterval iv{round_down(lo), round_up(hi), iteration, true};
        if (iv.width() < best.interval.width())
            best.interval = iv;
        return iv.width() <= tol;
    };

    for (std::size_t it = 1; it <= max_iterations; ++it) {
        for (std::size_t a = 0; a < k; ++a) {
            double acc = 0.0;
            for (std::size_t b = 0; b < k; ++b)
                acc += bd[a * k + b] * x[b];
            bx[a] = acc;
        }
        double dlo = std::numeric_limits<double>::infinity();
        double dhi = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < k; ++a) {
            const double r = bx[a] / x[a];
            dlo = std::min(dlo, r);
            dhi = std::max(dhi, r);
        }
        const double dwidth = (dhi - dlo) * scale;
        if (exact) {
            if ((dwidth <= 0.5 * tol || it % 1024 == 0) && exact_bounds(it)) {
                best.converged = true;
                return best;
            }
        } else {
            SpectralInterval iv{std::max(0.0, dlo * scale), dhi * scale, it, false};
            if (iv.width() < best.interval.width())
                best.interval = iv;
            if (dwidth <= tol) {
                best.converged = true;
                return best;
            }
        }
        double norm = 0.0;
        for (std::size_t a = 0; a < k; ++a) {
            y[a] = bx[a] + x[a];
            norm = std::max(norm, y[a]);
        }
        for (std::size_t a = 0; a < k; ++a)
            x[a] = y[a] / norm;
    }
    best.interval.iterations = max_iterations;
    return best;
}

} // namespace

SpectralInterval spectral_radius(const Matrix& m, double tol, std::size_t max_iterations)
{
    if (!m.is_square())
        throw ShapeError("spectral_radius: matrix is not square");
    if (!(tol > 0.0))
        throw DomainError("spectral_radius: tolerance must be positive");
    if (!m.all_nonnegative())
        throw DomainError("spectral_radius: matrix has a negative entry");

    const std::size_t n = m.rows();
    const bool exact = m.mode() == ScalarMode::exact;
    std::vector<std::vector<std::size_t>> adjacency(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (!m(r, c).is_zero())
                adjacency[r].push_back(c);

    SpectralInterval result{0.0, 0.0, 0, exact};
    for (const auto& comp : strongly_connected_components(adjacency)) {
        SpectralInterval block;
        if (comp.size() == 1) {
            const Scalar& e = m(comp[0], comp[0]);
            if (exact)
                block = {round_down(e.rational()), round_up(e.rational()), 0, true};
            else
                block = {e.to_double(), e.to_double(), 0, false};
        } else {
            BlockResult br = irreducible_block_radius(m, comp, tol, max_iterations);
            if (!br.converged) {
                SpectralInterval partial = br.interval;
                partial.lo = std::max(partial.lo, result.lo);
                partial.hi = std::max(partial.hi, result.hi);
                throw ConvergenceError("spectral_radius: no convergence within " +
                                           std::to_string(max_iterations) + " iterations",
                                       partial);
            }
            block = br.interval;
        }
        result.lo = std::max(result.lo, block.lo);
        result.hi = std::max(result.hi, block.hi);
        result.iterations = std::max(result.iterations, block.iterations);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial

namespace {

using Poly = std::vector<mpz_class>;

void trim(Poly& p)
{
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b)
{
    if (a.empty() || b.empty())
        return {};
    Poly out(a.size() + b.size() - 1, mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

Poly poly_sub(const Poly& a, const Poly& b)
{
    Poly out(std::max(a.size(), b.size()), mpz_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] -= b[i];
    trim(out);
    return out;
}

// Exact quotient a / b for monic b; the remainder must vanish.
Poly poly_divexact_monic(Poly a, const Poly& b)
{
    if (b.empty() || b.back() != 1)
        throw std::logic_error("char_poly: Bareiss pivot is not monic");
    if (a.size() < b.size()) {
        trim(a);
        if (!a.empty())
            throw std::logic_error("char_poly: inexact Bareiss division");
        return {};
    }
    Poly q(a.size() - b.size() + 1, mpz_class(0));
    for (std::size_t i = q.size(); i-- > 0;) {
        const mpz_class c = a[i + b.size() - 1];
        q[i] = c;
        if (c != 0)
            for (std::size_t j = 0; j < b.size(); ++j)
                a[i + j] -= c * b[j];
    }
    trim(a);
    if (!a.empty())
        throw std::logic_error("char_poly: inexact Bareiss division");
    trim(q);
    return q;
}

} // namespace

IntPolynomial::IntPolynomial(std::vector<mpz_class> coefficients) : coeffs_(std::move(coefficients))
{
    trim(coeffs_);
}

mpq_class IntPolynomial::evaluate(const mpq_class& x) const
{
    mpq_class acc = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;)
        acc = acc * x + mpq_class(coeffs_[i]);
    return acc;
}

std::string IntPolynomial::to_string() const
{
    if (coeffs_.empty())
        return "0";
    std::string out;
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        const mpz_class& c = coeffs_[i];
        if (c == 0)
            continue;
        const mpz_class mag = ::abs(c);
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (mag != 1 || i == 0)
            out += mag.get_str();
        if (i >= 1)
            out += "x";
        if (i >= 2)
            out += "^" + std::to_string(i);
    }
    return out;
}

std::string IntPolynomial::to_json() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i)
            out += ",";
        out += "\"" + coeffs_[i].get_str() + "\"";
    }
    return out + "]";
}

IntPolynomial char_poly(const Matrix& m)
{
    if (!m.is_square())
        throw ShapeError("char_poly: matrix is not square");
    if (!m.all_integer())
        throw DomainError("char_poly: matrix entries must be integers");
    const std::size_t n = m.rows();

    // Working matrix xI - m over Z[x].
    std::vector<Poly> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Poly p{mpz_class(-m(i, j).rational().get_num())};
            if (i == j)
                p.push_back(1);
            trim(p);
            a[i * n + j] = std::move(p);
        }

    // The k-th pivot is the leading principal minor of xI - m, which is monic.
    Poly previous{mpz_class(1)};
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Poly& pivot = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Poly t = poly_sub(poly_mul(pivot, a[i * n + j]), poly_mul(a[i * n + k], a[k * n + j]));
                a[i * n + j] = poly_divexact_monic(std::move(t), previous);
            }
        previous = pivot;
    }
    return IntPolynomial(a[n * n - 1]);
}

} // namespace bilin
