#pragma once

#include <gmpxx.h>
#include <string>
#include <stdexcept>

namespace lieq {

// Exact rational scalar. mpq_class keeps values canonicalized (reduced, positive
// denominator), so operator== is structural equality.
using Rational = mpq_class;

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

// mpq_class(p, q) does not canonicalize and GMP arithmetic assumes canonical
// operands, so all ratio construction goes through here.
inline Rational frac(long num, long den) {
    if (den == 0) throw std::invalid_argument("frac: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rational& r) { return r.get_str(); }

// Accepts "p", "-p", "p/q". Throws on malformed input or zero denominator.
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    mpq_class r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

// (-1)^e as a Rational-friendly int.
inline int neg_one_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace lieq
