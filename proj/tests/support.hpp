#pragma once

#include "qfreud/qcore.hpp"

#include <doctest.h>

#include <cstdint>
#include <random>
#include <string>

namespace qtest {

using qfreud::BigPoint;
using qfreud::BigScalar;
using qfreud::QContext;

// Acceptance threshold; internal truncation runs 15 orders tighter.
inline const char* kTol = "1e-25";

inline QContext desk(const std::string& q, int bits = 1024, int n_max = 30) {
    return QContext::make(q, bits, "1e-40", n_max);
}

inline BigScalar tol() { return BigScalar(std::string(kTol)); }

inline BigScalar rel(const BigScalar& a, const BigScalar& b) {
    BigScalar d = abs(a - b);
    return b.is_zero() ? d : d / abs(b);
}

inline BigScalar rel(const BigPoint& a, const BigPoint& b) {
    BigScalar d = abs(a - b);
    BigScalar s = abs(b);
    return s.is_zero() ? d : d / s;
}

// Uniform doubles from the raw engine output so results do not depend on the library's distributions.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * double(eng_() >> 11) * 0x1.0p-53; }
    BigPoint annulus(double rlo, double rhi) {
        BigScalar r(uniform(rlo, rhi));
        BigScalar th(uniform(0.05, 6.2));
        return qfreud::polar(r, th);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace qtest

namespace doctest {
template <>
struct StringMaker<qfreud::BigScalar> {
    static String convert(const qfreud::BigScalar& v) { return v.str(12).c_str(); }
};
template <>
struct StringMaker<qfreud::BigPoint> {
    static String convert(const qfreud::BigPoint& v) { return v.str(12).c_str(); }
};
}  // namespace doctest
