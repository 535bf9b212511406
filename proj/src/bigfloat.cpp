#include "qfreud/bigfloat.hpp"

#include <cmath>
#include <stdexcept>

namespace qfreud {

namespace {
thread_local int g_precision = 256;
constexpr mpfr_rnd_t RND = MPFR_RNDN;
}  // namespace

int working_precision() { return g_precision; }

PrecisionScope::PrecisionScope(int bits) : saved_(g_precision) {
    if (bits < MPFR_PREC_MIN || bits > (1 << 24))
        throw std::invalid_argument("precision out of range");
    g_precision = bits;
}

PrecisionScope::~PrecisionScope() { g_precision = saved_; }

int decimal_digits(int bits) { return static_cast<int>(std::ceil(bits * 0.30102999566398120)) + 1; }

BigScalar::BigScalar() {
    mpfr_init2(v_, g_precision);
    mpfr_set_zero(v_, 1);
}

BigScalar::BigScalar(int v) {
    mpfr_init2(v_, g_precision);
    mpfr_set_si(v_, v, RND);
}

BigScalar::BigScalar(long v) {
    mpfr_init2(v_, g_precision);
    mpfr_set_si(v_, v, RND);
}

BigScalar::BigScalar(double v) {
    mpfr_init2(v_, g_precision);
    mpfr_set_d(v_, v, RND);
}

BigScalar::BigScalar(const std::string& decimal) {
    mpfr_init2(v_, g_precision);
    if (decimal.empty() || mpfr_set_str(v_, decimal.c_str(), 10, RND) != 0) {
        mpfr_clear(v_);
        throw std::invalid_argument("not a decimal number: '" + decimal + "'");
    }
}

BigScalar::BigScalar(const BigScalar& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, RND);
}

BigScalar::BigScalar(BigScalar&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

BigScalar::~BigScalar() { mpfr_clear(v_); }

BigScalar& BigScalar::operator=(const BigScalar& o) {
    if (this != &o) {
        if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, RND);
    }
    return *this;
}

BigScalar& BigScalar::operator=(BigScalar&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigScalar& BigScalar::operator+=(const BigScalar& o) {
    mpfr_add(v_, v_, o.v_, RND);
    return *this;
}

BigScalar& BigScalar::operator-=(const BigScalar& o) {
    mpfr_sub(v_, v_, o.v_, RND);
    return *this;
}

BigScalar& BigScalar::operator*=(const BigScalar& o) {
    mpfr_mul(v_, v_, o.v_, RND);
    return *this;
}

BigScalar& BigScalar::operator/=(const BigScalar& o) {
    mpfr_div(v_, v_, o.v_, RND);
    return *this;
}

BigScalar BigScalar::operator-() const {
    BigScalar r;
    mpfr_neg(r.v_, v_, RND);
    return r;
}

double BigScalar::log_abs() const {
    if (mpfr_zero_p(v_)) return -INFINITY;
    if (!mpfr_number_p(v_)) return INFINITY;
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, RND);
    return std::log(std::fabs(m)) + static_cast<double>(e) * 0.69314718055994530942;
}

std::string BigScalar::str(int digits) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    if (digits <= 0) digits = decimal_digits(precision());
    mpfr_exp_t e = 0;
    char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, RND);
    std::string m(s);
    mpfr_free_str(s);
    std::string out;
    size_t i = 0;
    if (m[0] == '-') {
        out += '-';
        i = 1;
    }
    out += m[i];
    std::string frac = m.substr(i + 1);
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (!frac.empty()) out += "." + frac;
    out += "e" + std::to_string(static_cast<long>(e) - 1);
    return out;
}

#define QF_BINOP(op, fn)                                     \
    BigScalar operator op(const BigScalar& a, const BigScalar& b) { \
        BigScalar r;                                         \
        fn(r.raw(), a.raw(), b.raw(), RND);                  \
        return r;                                            \
    }
QF_BINOP(+, mpfr_add)
QF_BINOP(-, mpfr_sub)
QF_BINOP(*, mpfr_mul)
QF_BINOP(/, mpfr_div)
#undef QF_BINOP

bool operator==(const BigScalar& a, const BigScalar& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
bool operator!=(const BigScalar& a, const BigScalar& b) { return !(a == b); }
bool operator<(const BigScalar& a, const BigScalar& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
bool operator<=(const BigScalar& a, const BigScalar& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
bool operator>(const BigScalar& a, const BigScalar& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
bool operator>=(const BigScalar& a, const BigScalar& b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }

#define QF_UNARY(name, fn)                 \
    BigScalar name(const BigScalar& x) {   \
        BigScalar r;                       \
        fn(r.raw(), x.raw(), RND);         \
        return r;                          \
    }
QF_UNARY(abs, mpfr_abs)
QF_UNARY(sqrt, mpfr_sqrt)
QF_UNARY(exp, mpfr_exp)
QF_UNARY(log, mpfr_log)
QF_UNARY(sin, mpfr_sin)
QF_UNARY(cos, mpfr_cos)
#undef QF_UNARY

BigScalar atan2(const BigScalar& y, const BigScalar& x) {
    BigScalar r;
    mpfr_atan2(r.raw(), y.raw(), x.raw(), RND);
    return r;
}

BigScalar pow(const BigScalar& x, long n) {
    BigScalar r;
    mpfr_pow_si(r.raw(), x.raw(), n, RND);
    return r;
}

BigScalar pow(const BigScalar& x, const BigScalar& y) {
    BigScalar r;
    mpfr_pow(r.raw(), x.raw(), y.raw(), RND);
    return r;
}

BigScalar hypot(const BigScalar& x, const BigScalar& y) {
    BigScalar r;
    mpfr_hypot(r.raw(), x.raw(), y.raw(), RND);
    return r;
}

BigScalar ldexp(const BigScalar& x, long e) {
    BigScalar r;
    mpfr_mul_2si(r.raw(), x.raw(), e, RND);
    return r;
}

BigScalar pi() {
    BigScalar r;
    mpfr_const_pi(r.raw(), RND);
    return r;
}

BigScalar max(const BigScalar& a, const BigScalar& b) { return a < b ? b : a; }
BigScalar min(const BigScalar& a, const BigScalar& b) { return b < a ? b : a; }

// ---- complex ----

BigPoint& BigPoint::operator+=(const BigPoint& o) {
    re += o.re;
    im += o.im;
    return *this;
}

BigPoint& BigPoint::operator-=(const BigPoint& o) {
    re -= o.re;
    im -= o.im;
    return *this;
}

BigPoint& BigPoint::operator*=(const BigPoint& o) {
    *this = *this * o;
    return *this;
}

BigPoint& BigPoint::operator/=(const BigPoint& o) {
    *this = *this / o;
    return *this;
}

double BigPoint::log_abs() const {
    double a = re.log_abs(), b = im.log_abs();
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    double m = std::max(a, b), d = std::min(a, b) - m;
    return m + 0.5 * std::log1p(std::exp(2 * d));
}

std::string BigPoint::str(int digits) const {
    std::string i = im.str(digits);
    if (i[0] != '-') i = "+" + i;
    return re.str(digits) + i + "i";
}

BigPoint operator+(const BigPoint& a, const BigPoint& b) { return {a.re + b.re, a.im + b.im}; }
BigPoint operator-(const BigPoint& a, const BigPoint& b) { return {a.re - b.re, a.im - b.im}; }

BigPoint operator*(const BigPoint& a, const BigPoint& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

BigPoint operator/(const BigPoint& a, const BigPoint& b) {
    // Smith's scheme keeps the intermediate magnitudes near |a|/|b|.
    if (abs(b.re) >= abs(b.im)) {
        BigScalar r = b.im / b.re;
        BigScalar d = b.re + b.im * r;
        return {(a.re + a.im * r) / d, (a.im - a.re * r) / d};
    }
    BigScalar r = b.re / b.im;
    BigScalar d = b.re * r + b.im;
    return {(a.re * r + a.im) / d, (a.im * r - a.re) / d};
}

BigPoint operator*(const BigPoint& a, const BigScalar& s) { return {a.re * s, a.im * s}; }
BigPoint operator*(const BigScalar& s, const BigPoint& a) { return {a.re * s, a.im * s}; }
BigPoint operator/(const BigPoint& a, const BigScalar& s) { return {a.re / s, a.im / s}; }

BigScalar abs(const BigPoint& z) { return hypot(z.re, z.im); }
BigScalar norm(const BigPoint& z) { return z.re * z.re + z.im * z.im; }
BigScalar arg(const BigPoint& z) { return atan2(z.im, z.re); }
BigPoint conj(const BigPoint& z) { return {z.re, -z.im}; }
BigPoint polar(const BigScalar& r, const BigScalar& theta) { return {r * cos(theta), r * sin(theta)}; }

BigPoint exp(const BigPoint& z) { return polar(exp(z.re), z.im); }

BigPoint pow(const BigPoint& z, long n) {
    if (n < 0) return BigPoint(BigScalar(1)) / pow(z, -n);
    BigPoint result(BigScalar(1)), base = z;
    while (n > 0) {
        if (n & 1) result *= base;
        n >>= 1;
        if (n) base *= base;
    }
    return result;
}

BigPoint sqrt(const BigPoint& z) {
    BigScalar r = abs(z);
    if (r.is_zero()) return {};
    BigScalar a = sqrt((r + abs(z.re)) / 2);
    if (z.re.sign() >= 0) return {a, z.im / (a * 2)};
    BigScalar b = z.im.sign() >= 0 ? a : -a;
    return {abs(z.im) / (a * 2), b};
}

}  // namespace qfreud
