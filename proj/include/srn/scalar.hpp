#pragma once
// Numeric backends: exact rationals (GMP), runtime-precision floats (MPFR),
// and plain binary64.  All heavy machinery is templated on the scalar type so
// the same code path serves every backend.
#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>

#include "srn/errors.hpp"

namespace srn {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using HighFloat =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                  boost::multiprecision::et_off>;

enum class Precision { Binary64, High, Exact };

struct Backend {
    Precision mode = Precision::Binary64;
    unsigned mantissa_bits = 256;   // requested, High mode only
    unsigned effective_bits = 53;   // what the float type actually carries
    double zero_tol = 1e-12;        // relative sign-decision tolerance (floats)
};

// Set the MPFR working precision to at least `bits` mantissa bits.
// Returns the effective precision (the library rounds digits10 up).
inline unsigned set_high_precision(unsigned bits) {
    if (bits < 64) bits = 64;
    unsigned d10 = static_cast<unsigned>(bits * 0.30103) + 1;
    for (;; ++d10) {
        HighFloat::default_precision(d10);
        HighFloat probe(1);
        unsigned eff = static_cast<unsigned>(mpfr_get_prec(probe.backend().data()));
        if (eff >= bits) return eff;
    }
}

inline Backend make_backend(Precision mode, unsigned bits = 256, double zero_tol = 1e-12) {
    Backend b;
    b.mode = mode;
    b.mantissa_bits = bits;
    b.zero_tol = zero_tol;
    if (mode == Precision::High)
        b.effective_bits = set_high_precision(bits);
    else if (mode == Precision::Exact)
        b.effective_bits = 0;  // exact
    else
        b.effective_bits = 53;
    return b;
}

// ---- parsing ---------------------------------------------------------------

// Exact rational value of a decimal literal like "-12.375e-2" or "3/4".
inline Rational rational_from_decimal(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        try {
            return Rational(s);
        } catch (const std::exception&) {
            throw ParseError("bad rational literal '" + s + "'");
        }
    }
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    long frac_digits = 0;
    bool any = false, dot = false;
    for (; i < s.size(); ++i) {
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits += s[i];
            if (dot) ++frac_digits;
            any = true;
        } else if (s[i] == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    long expo = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i >= s.size()) throw ParseError("bad exponent in '" + s + "'");
        for (; i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])); ++i)
            expo = expo * 10 + (s[i] - '0');
        if (eneg) expo = -expo;
    }
    if (!any || i != s.size())
        throw ParseError("bad number literal '" + s + "'");
    // strip leading zeros: GMP reads a leading '0' as an octal prefix
    size_t nz = digits.find_first_not_of('0');
    digits = (nz == std::string::npos) ? "0" : digits.substr(nz);
    Integer num(digits);
    Rational r(num);
    long net = expo - frac_digits;
    Integer ten(10);
    if (net > 0)
        r *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(net)));
    else if (net < 0)
        r /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-net)));
    return neg ? Rational(-r) : r;
}

// ---- per-scalar helpers ----------------------------------------------------

template <class T>
inline double to_double(const T& v) {
    return v.template convert_to<double>();
}
template <>
inline double to_double<double>(const double& v) {
    return v;
}
// materialize unevaluated multiprecision expressions before converting
template <class Tag, class A1, class A2, class A3, class A4>
inline double to_double(const boost::multiprecision::detail::expression<Tag, A1, A2, A3, A4>& e) {
    using R = typename boost::multiprecision::detail::expression<Tag, A1, A2, A3, A4>::result_type;
    return to_double(R(e));
}

template <class T>
inline T from_rational(const Rational& q);
template <>
inline Rational from_rational<Rational>(const Rational& q) {
    return q;
}
template <>
inline double from_rational<double>(const Rational& q) {
    return q.convert_to<double>();
}
template <>
inline HighFloat from_rational<HighFloat>(const Rational& q) {
    // go through mpq directly so precision follows the current default
    HighFloat x;
    mpfr_set_q(x.backend().data(), q.backend().data(), MPFR_RNDN);
    return x;
}

template <class T>
struct scalar_traits {
    static constexpr bool is_exact = false;
    static const char* name() { return "high-precision"; }
    static double eps() {
        HighFloat probe(1);
        long p = mpfr_get_prec(probe.backend().data());
        return std::ldexp(1.0, static_cast<int>(1 - p));
    }
};
template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static const char* name() { return "binary64"; }
    static double eps() { return std::numeric_limits<double>::epsilon(); }
};
template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static const char* name() { return "exact-rational"; }
    static double eps() { return 0.0; }
};

using boost::multiprecision::abs;
using std::abs;

// floor of a scalar, exact for rationals
inline double scalar_floor(double v) { return std::floor(v); }
inline HighFloat scalar_floor(const HighFloat& v) { return boost::multiprecision::floor(v); }
inline Rational scalar_floor(const Rational& q) {
    Integer num = numerator(q), den = denominator(q);
    Integer quot = num / den;             // truncates toward zero
    if (quot * den != num && num < 0) --quot;
    return Rational(quot);
}

inline double scalar_ceil(double v) { return std::ceil(v); }
inline HighFloat scalar_ceil(const HighFloat& v) { return boost::multiprecision::ceil(v); }
inline Rational scalar_ceil(const Rational& q) { return -scalar_floor(Rational(-q)); }

// integer power, exact for rationals; negative exponents invert
inline double scalar_ipow(double b, long e) { return std::pow(b, static_cast<double>(e)); }
inline HighFloat scalar_ipow(const HighFloat& b, long e) {
    return boost::multiprecision::pow(b, static_cast<int>(e));
}
inline Rational scalar_ipow(const Rational& b, long e) {
    if (e == 0) return Rational(1);
    bool inv = e < 0;
    unsigned long ue = static_cast<unsigned long>(inv ? -e : e);
    Integer n = boost::multiprecision::pow(numerator(b), static_cast<unsigned>(ue));
    Integer d = boost::multiprecision::pow(denominator(b), static_cast<unsigned>(ue));
    if (inv) {
        if (n == 0) throw NumericalError("0 raised to a negative power");
        return Rational(d, n);
    }
    return Rational(n, d);
}

// general power (float backends only; rational callers must have integer exponents)
inline double scalar_pow(double b, double e) { return std::pow(b, e); }
inline HighFloat scalar_pow(const HighFloat& b, const HighFloat& e) {
    return boost::multiprecision::pow(b, e);
}
inline Rational scalar_pow(const Rational& b, const Rational& e) {
    if (denominator(e) != 1)
        throw NumericalError("non-integer exponent in exact-rational mode");
    if (numerator(e) > std::numeric_limits<long>::max() ||
        numerator(e) < std::numeric_limits<long>::min())
        throw NumericalError("exponent too large in exact-rational mode");
    return scalar_ipow(b, numerator(e).convert_to<long>());
}

// rendering: exact values as p/q, floats with full round-trip digits
inline std::string scalar_to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}
inline std::string scalar_to_string(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}
inline std::string scalar_to_string(const HighFloat& v) {
    return v.str(0, std::ios_base::scientific);
}

}  // namespace srn
