#pragma once

#include "qfreud/bigfloat.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfreud {

inline constexpr const char* kVersion = "0.3.1";

enum class Flag : std::uint32_t {
    Divergence = 1u << 0,
    TailBound = 1u << 1,
    PoleProximity = 1u << 2,
    NonConvergence = 1u << 3,
    IllConditioned = 1u << 4,
    LossOfPositivity = 1u << 5,
    Blowup = 1u << 6,
    VanishingDenominator = 1u << 7,
    OutsideDomain = 1u << 8,
    TailRatio = 1u << 9,
};

const char* flag_name(Flag f);

class Flags {
public:
    void set(Flag f) { bits_ |= static_cast<std::uint32_t>(f); }
    bool has(Flag f) const { return (bits_ & static_cast<std::uint32_t>(f)) != 0; }
    bool clean() const { return bits_ == 0; }
    Flags& operator|=(const Flags& o) {
        bits_ |= o.bits_;
        return *this;
    }
    std::uint32_t bits() const { return bits_; }
    std::string describe() const;

private:
    std::uint32_t bits_ = 0;
};

class NumericError : public std::runtime_error {
public:
    NumericError(Flag f, const std::string& what) : std::runtime_error(what), flag_(f) {}
    Flag flag() const { return flag_; }

private:
    Flag flag_;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class QContext {
public:
    // q and trunc_tol are decimal strings so that refined contexts re-read them exactly.
    // precision_bits = 0 selects the default for n_max.
    static QContext make(const std::string& q, int precision_bits = 0, const std::string& trunc_tol = "1e-40",
                         int n_max = 30);

    static int default_precision_bits(double q, int n_max);

    const BigScalar& q() const { return q_; }
    const std::string& q_text() const { return q_text_; }
    int precision_bits() const { return bits_; }
    const BigScalar& trunc_tol() const { return tol_; }
    const std::string& trunc_tol_text() const { return tol_text_; }
    double log_trunc_tol() const { return log_tol_; }
    int cutoff_pos() const { return kpos_; }
    int cutoff_neg() const { return kneg_; }
    int n_max() const { return n_max_; }

    PrecisionScope scope() const { return PrecisionScope(bits_); }

    // Same q and tolerance, doubled precision and lattice cutoffs.
    QContext refined() const;
    QContext with_precision(int bits) const;
    QContext with_cutoffs(int kpos, int kneg) const;

private:
    QContext() = default;
    void load();

    std::string q_text_;
    std::string tol_text_;
    int bits_ = 0;
    int n_max_ = 0;
    int kpos_ = 0;
    int kneg_ = 0;
    double log_tol_ = 0;
    BigScalar q_;
    BigScalar tol_;
};

// Π_{j≥0} (1 − x·qpow^j), truncated once the tail perturbation drops below trunc_tol.
BigScalar pochhammer_inf(const BigScalar& x, const BigScalar& qpow, const QContext& ctx);
BigPoint pochhammer_inf(const BigPoint& x, const BigScalar& qpow, const QContext& ctx);
BigPoint pochhammer_inf(const std::vector<BigPoint>& xs, const BigScalar& qpow, const QContext& ctx);

BigScalar q_integer(long n, const BigScalar& qval);

// (f(base·x) − f(x)) / (x(base − 1)); base = q or q^{-1}.
template <class F, class T>
auto q_derivative(F&& f, const T& x, const BigScalar& base) {
    if (x.is_zero()) throw NumericError(Flag::OutsideDomain, "q-derivative at x = 0");
    return (f(x * base) - f(x)) / (x * (base - BigScalar(1)));
}

template <class T>
struct JacksonSum {
    T value;
    BigScalar tail_estimate;
    Flags flags;
};

// Σ_{k=−K⁻}^{K⁺} [f(cq^k) + f(−cq^k)]·q^k, summed in ascending k.
template <class F>
auto jackson_bilateral(F&& f, const BigScalar& c, const QContext& ctx) {
    auto guard = ctx.scope();
    using T = std::decay_t<decltype(f(c))>;
    const BigScalar& q = ctx.q();
    const int kneg = ctx.cutoff_neg(), kpos = ctx.cutoff_pos();
    BigScalar qk = pow(q, static_cast<long>(-kneg));
    T sum{};
    BigScalar first, last;
    for (int k = -kneg; k <= kpos; ++k) {
        BigScalar x = c * qk;
        T term = (f(x) + f(-x)) * qk;
        if (k == -kneg) first = abs(term);
        if (k == kpos) last = abs(term);
        sum += term;
        qk *= q;
    }
    JacksonSum<T> out{sum, first + last * q / (BigScalar(1) - q), {}};
    if (out.tail_estimate > ctx.trunc_tol() * abs(sum)) out.flags.set(Flag::TailBound);
    return out;
}

}  // namespace qfreud
