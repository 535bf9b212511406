#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace qfreud {

// Working precision in bits for newly created values on this thread.
int working_precision();

class PrecisionScope {
public:
    explicit PrecisionScope(int bits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    int saved_;
};

class BigScalar {
public:
    BigScalar();
    BigScalar(int v);
    BigScalar(long v);
    BigScalar(double v);
    explicit BigScalar(const std::string& decimal);
    BigScalar(const BigScalar& o);
    BigScalar(BigScalar&& o) noexcept;
    ~BigScalar();

    BigScalar& operator=(const BigScalar& o);
    BigScalar& operator=(BigScalar&& o) noexcept;

    BigScalar& operator+=(const BigScalar& o);
    BigScalar& operator-=(const BigScalar& o);
    BigScalar& operator*=(const BigScalar& o);
    BigScalar& operator/=(const BigScalar& o);
    BigScalar operator-() const;

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }
    int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Natural log of |x| as a double; safe for magnitudes far outside double range.
    double log_abs() const;
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Scientific decimal string; digits = 0 means enough digits to round-trip.
    std::string str(int digits = 0) const;

private:
    mpfr_t v_;
};

BigScalar operator+(const BigScalar& a, const BigScalar& b);
BigScalar operator-(const BigScalar& a, const BigScalar& b);
BigScalar operator*(const BigScalar& a, const BigScalar& b);
BigScalar operator/(const BigScalar& a, const BigScalar& b);

bool operator==(const BigScalar& a, const BigScalar& b);
bool operator!=(const BigScalar& a, const BigScalar& b);
bool operator<(const BigScalar& a, const BigScalar& b);
bool operator<=(const BigScalar& a, const BigScalar& b);
bool operator>(const BigScalar& a, const BigScalar& b);
bool operator>=(const BigScalar& a, const BigScalar& b);

BigScalar abs(const BigScalar& x);
BigScalar sqrt(const BigScalar& x);
BigScalar exp(const BigScalar& x);
BigScalar log(const BigScalar& x);
BigScalar sin(const BigScalar& x);
BigScalar cos(const BigScalar& x);
BigScalar atan2(const BigScalar& y, const BigScalar& x);
BigScalar pow(const BigScalar& x, long n);
BigScalar pow(const BigScalar& x, const BigScalar& y);
BigScalar hypot(const BigScalar& x, const BigScalar& y);
BigScalar ldexp(const BigScalar& x, long e);
BigScalar pi();
BigScalar max(const BigScalar& a, const BigScalar& b);
BigScalar min(const BigScalar& a, const BigScalar& b);

struct BigPoint {
    BigScalar re;
    BigScalar im;

    BigPoint() = default;
    BigPoint(const BigScalar& r) : re(r) {}
    BigPoint(BigScalar r, BigScalar i) : re(std::move(r)), im(std::move(i)) {}

    BigPoint& operator+=(const BigPoint& o);
    BigPoint& operator-=(const BigPoint& o);
    BigPoint& operator*=(const BigPoint& o);
    BigPoint& operator/=(const BigPoint& o);
    BigPoint operator-() const { return {-re, -im}; }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_finite() const { return re.is_finite() && im.is_finite(); }
    double log_abs() const;
    std::string str(int digits = 0) const;
};

BigPoint operator+(const BigPoint& a, const BigPoint& b);
BigPoint operator-(const BigPoint& a, const BigPoint& b);
BigPoint operator*(const BigPoint& a, const BigPoint& b);
BigPoint operator/(const BigPoint& a, const BigPoint& b);
BigPoint operator*(const BigPoint& a, const BigScalar& s);
BigPoint operator*(const BigScalar& s, const BigPoint& a);
BigPoint operator/(const BigPoint& a, const BigScalar& s);

BigScalar abs(const BigPoint& z);
BigScalar norm(const BigPoint& z);
BigScalar arg(const BigPoint& z);
BigPoint conj(const BigPoint& z);
BigPoint polar(const BigScalar& r, const BigScalar& theta);
BigPoint exp(const BigPoint& z);
BigPoint pow(const BigPoint& z, long n);
BigPoint sqrt(const BigPoint& z);

// Digits needed to round-trip a value of the given precision.
int decimal_digits(int bits);

}  // namespace qfreud
