#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>
#include <stdexcept>

#include "lieq/rational.hpp"

namespace lieq {

// Parameters (free coefficients introduced by solvers) are interned globally;
// a Var is stable for the lifetime of the process.
using Var = std::uint32_t;

Var intern_param(const std::string& name);
const std::string& param_name(Var v);
// Fresh parameter with a reserved prefix, never returned by intern_param for user names.
Var fresh_param(const std::string& hint = "t");

// Power product, factors sorted by variable, exponents > 0. Empty = 1.
struct Monomial {
    std::vector<std::pair<Var, unsigned>> factors;

    unsigned total_degree() const {
        unsigned d = 0;
        for (auto& [v, e] : factors) d += e;
        return d;
    }
    unsigned degree_in(Var v) const {
        for (auto& [w, e] : factors)
            if (w == v) return e;
        return 0;
    }
    bool operator==(const Monomial& o) const { return factors == o.factors; }
    bool operator<(const Monomial& o) const { return factors < o.factors; }

    static Monomial one() { return {}; }
    static Monomial var(Var v) { return {{{v, 1}}}; }
    Monomial times(const Monomial& o) const;
    // Divides exactly or throws.
    Monomial divide(const Monomial& o) const;
    // Componentwise min of exponents.
    static Monomial gcd(const Monomial& a, const Monomial& b);
};

class Poly {
public:
    Poly() = default;
    explicit Poly(Rational c) {
        if (!is_zero(c)) terms_[Monomial::one()] = std::move(c);
    }
    explicit Poly(long c) : Poly(Rational(c)) {}
    static Poly variable(Var v) {
        Poly p;
        p.terms_[Monomial::var(v)] = 1;
        return p;
    }

    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero_poly() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
    }
    Rational constant_value() const {
        if (terms_.empty()) return 0;
        if (!is_constant()) throw std::logic_error("constant_value of nonconstant poly");
        return terms_.begin()->second;
    }
    unsigned total_degree() const {
        unsigned d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    void add_term(const Monomial& m, const Rational& c);
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }
    Poly& operator*=(const Rational& c);
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }
    bool operator<(const Poly& o) const { return terms_ < o.terms_; }

    std::set<Var> vars() const;
    Poly subst(Var v, const Poly& value) const;

    // Affine means total degree <= 1. Then p = constant_part + sum coeff_v * v.
    bool is_affine() const { return total_degree() <= 1; }
    Rational affine_coeff(Var v) const;
    Rational affine_const() const;

    // Largest monomial dividing every term (1 if p = 0), and the rational content.
    Monomial monomial_content() const;
    Poly divide_monomial(const Monomial& m) const;

    std::string to_string() const;

private:
    std::map<Monomial, Rational> terms_;
};

// Rational function with light normalization only (no multivariate gcd):
// cancels shared monomial content and scales the denominator's leading
// coefficient to 1. Exact equality uses cross multiplication.
class Frac {
public:
    Frac() : num_(), den_(Rational(1)) {}
    Frac(Poly n, Poly d);
    explicit Frac(Rational c) : num_(std::move(c)), den_(Rational(1)) {}
    explicit Frac(const Poly& p) : num_(p), den_(Rational(1)) {}

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero_frac() const { return num_.is_zero_poly(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    Frac operator+(const Frac& o) const;
    Frac operator-(const Frac& o) const;
    Frac operator*(const Frac& o) const;
    Frac operator/(const Frac& o) const;
    Frac& operator+=(const Frac& o) { *this = *this + o; return *this; }
    Frac& operator-=(const Frac& o) { *this = *this - o; return *this; }
    Frac& operator*=(const Frac& o) { *this = *this * o; return *this; }
    bool operator==(const Frac& o) const;
    bool operator!=(const Frac& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    void normalize();
    Poly num_, den_;
};

}  // namespace lieq
