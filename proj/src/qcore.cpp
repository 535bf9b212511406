#include "qfreud/qcore.hpp"

#include <algorithm>
#include <cmath>

namespace qfreud {

const char* flag_name(Flag f) {
    switch (f) {
        case Flag::Divergence: return "divergence";
        case Flag::TailBound: return "tail-bound";
        case Flag::PoleProximity: return "pole-proximity";
        case Flag::NonConvergence: return "non-convergence";
        case Flag::IllConditioned: return "ill-conditioned";
        case Flag::LossOfPositivity: return "loss-of-positivity";
        case Flag::Blowup: return "blowup";
        case Flag::VanishingDenominator: return "vanishing-denominator";
        case Flag::OutsideDomain: return "outside-domain";
        case Flag::TailRatio: return "tail-ratio";
    }
    return "unknown";
}

std::string Flags::describe() const {
    std::string out;
    for (std::uint32_t b = 1; b != 0 && b <= bits_; b <<= 1) {
        if (bits_ & b) {
            if (!out.empty()) out += ",";
            out += flag_name(static_cast<Flag>(b));
        }
    }
    return out.empty() ? "clean" : out;
}

int QContext::default_precision_bits(double q, int n_max) {
    int scaled = static_cast<int>(std::ceil(double(n_max) * n_max * std::log2(1.0 / q)));
    return std::max(scaled, 1024);
}

QContext QContext::make(const std::string& q, int precision_bits, const std::string& trunc_tol, int n_max) {
    QContext c;
    c.q_text_ = q;
    c.tol_text_ = trunc_tol;
    c.n_max_ = n_max;
    if (n_max < 0) throw ConfigError("n_max must be non-negative");
    double qd = 0;
    try {
        qd = std::stod(q);
    } catch (const std::exception&) {
        throw ConfigError("q is not a number: " + q);
    }
    if (!(qd > 0 && qd < 1)) throw ConfigError("q must lie in (0,1)");
    c.bits_ = precision_bits > 0 ? precision_bits : default_precision_bits(qd, n_max);
    if (c.bits_ < 64) throw ConfigError("precision_bits must be at least 64");
    c.load();

    const double lq = std::log(qd);
    const double L = c.log_tol_ / lq;  // number of q-powers spanning the tolerance
    c.kpos_ = static_cast<int>(std::ceil((c.log_tol_ + std::log1p(-qd)) / lq)) + 8;
    // Moments up to degree 4n_max+4 peak near m* = (4n_max+7)/4 shells out; w(q^{-m}) ≤ q^{2m(m-1)}.
    c.kneg_ = static_cast<int>(std::ceil((4.0 * n_max + 7) / 4 + std::sqrt(L / 2))) + 4;
    return c;
}

void QContext::load() {
    PrecisionScope guard(bits_);
    try {
        q_ = BigScalar(q_text_);
        tol_ = BigScalar(tol_text_);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(q_ > BigScalar(0) && q_ < BigScalar(1))) throw ConfigError("q must lie in (0,1)");
    if (!(tol_ > BigScalar(0) && tol_ < BigScalar(1))) throw ConfigError("trunc_tol must lie in (0,1)");
    log_tol_ = tol_.log_abs();
}

QContext QContext::refined() const {
    QContext c = *this;
    c.bits_ = bits_ * 2;
    c.kpos_ = kpos_ * 2;
    c.kneg_ = kneg_ * 2;
    c.load();
    return c;
}

QContext QContext::with_precision(int bits) const {
    QContext c = *this;
    c.bits_ = bits;
    c.load();
    return c;
}

QContext QContext::with_cutoffs(int kpos, int kneg) const {
    QContext c = *this;
    c.kpos_ = kpos;
    c.kneg_ = kneg;
    return c;
}

namespace {

void check_base(const BigScalar& qpow) {
    if (!(qpow > BigScalar(0) && qpow < BigScalar(1)))
        throw NumericError(Flag::Divergence, "Pochhammer base must lie in (0,1)");
}

// Number of factors after which |x qpow^j|/(1-qpow) < trunc_tol.
long factor_count(double log_x, const BigScalar& qpow, const QContext& ctx) {
    double lq = qpow.log_abs();
    double target = ctx.log_trunc_tol() + std::log1p(-std::exp(lq));
    if (log_x < target) return 1;
    return static_cast<long>(std::ceil((target - log_x) / lq)) + 1;
}

}  // namespace

BigScalar pochhammer_inf(const BigScalar& x, const BigScalar& qpow, const QContext& ctx) {
    check_base(qpow);
    auto guard = ctx.scope();
    BigScalar prod(1);
    if (x.is_zero()) return prod;
    long count = factor_count(x.log_abs(), qpow, ctx);
    BigScalar t = x;
    for (long j = 0; j < count; ++j) {
        prod *= BigScalar(1) - t;
        t *= qpow;
    }
    return prod;
}

BigPoint pochhammer_inf(const BigPoint& x, const BigScalar& qpow, const QContext& ctx) {
    check_base(qpow);
    auto guard = ctx.scope();
    BigPoint prod(BigScalar(1));
    if (x.is_zero()) return prod;
    long count = factor_count(x.log_abs(), qpow, ctx);
    BigPoint t = x;
    for (long j = 0; j < count; ++j) {
        prod *= BigPoint(BigScalar(1)) - t;
        t = t * qpow;
    }
    return prod;
}

BigPoint pochhammer_inf(const std::vector<BigPoint>& xs, const BigScalar& qpow, const QContext& ctx) {
    auto guard = ctx.scope();
    BigPoint prod(BigScalar(1));
    for (const auto& x : xs) prod *= pochhammer_inf(x, qpow, ctx);
    return prod;
}

BigScalar q_integer(long n, const BigScalar& qval) {
    BigScalar one(1);
    if (qval == one) throw std::invalid_argument("q_integer needs q != 1");
    return (pow(qval, n) - one) / (qval - one);
}

}  // namespace qfreud
