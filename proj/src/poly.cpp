#include "lieq/poly.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace lieq {

namespace {
struct ParamRegistry {
    std::vector<std::string> names;
    std::unordered_map<std::string, Var> ids;
    unsigned fresh_counter = 0;
};
ParamRegistry& registry() {
    static ParamRegistry r;
    return r;
}
}  // namespace

Var intern_param(const std::string& name) {
    auto& r = registry();
    auto it = r.ids.find(name);
    if (it != r.ids.end()) return it->second;
    Var v = static_cast<Var>(r.names.size());
    r.names.push_back(name);
    r.ids.emplace(name, v);
    return v;
}

const std::string& param_name(Var v) {
    return registry().names.at(v);
}

Var fresh_param(const std::string& hint) {
    auto& r = registry();
    for (;;) {
        std::string name = "$" + hint + std::to_string(++r.fresh_counter);
        if (!r.ids.count(name)) return intern_param(name);
    }
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r;
    auto a = factors.begin(), b = o.factors.begin();
    while (a != factors.end() || b != o.factors.end()) {
        if (b == o.factors.end() || (a != factors.end() && a->first < b->first))
            r.factors.push_back(*a++);
        else if (a == factors.end() || b->first < a->first)
            r.factors.push_back(*b++);
        else {
            r.factors.emplace_back(a->first, a->second + b->second);
            ++a, ++b;
        }
    }
    return r;
}

Monomial Monomial::divide(const Monomial& o) const {
    Monomial r;
    auto a = factors.begin();
    for (auto& [v, e] : o.factors) {
        while (a != factors.end() && a->first < v) r.factors.push_back(*a++);
        if (a == factors.end() || a->first != v || a->second < e)
            throw std::logic_error("monomial division not exact");
        if (a->second > e) r.factors.emplace_back(v, a->second - e);
        ++a;
    }
    while (a != factors.end()) r.factors.push_back(*a++);
    return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    auto i = a.factors.begin();
    auto j = b.factors.begin();
    while (i != a.factors.end() && j != b.factors.end()) {
        if (i->first < j->first) ++i;
        else if (j->first < i->first) ++j;
        else {
            r.factors.emplace_back(i->first, std::min(i->second, j->second));
            ++i, ++j;
        }
    }
    return r;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (is_zero(c)) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (is_zero(it->second)) terms_.erase(it);
    }
}

Poly& Poly::operator+=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    for (auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ma, ca] : a.terms_)
        for (auto& [mb, cb] : b.terms_) r.add_term(ma.times(mb), ca * cb);
    return r;
}

Poly& Poly::operator*=(const Rational& c) {
    if (is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

std::set<Var> Poly::vars() const {
    std::set<Var> out;
    for (auto& [m, c] : terms_)
        for (auto& [v, e] : m.factors) out.insert(v);
    return out;
}

Poly Poly::subst(Var v, const Poly& value) const {
    Poly r;
    for (auto& [m, c] : terms_) {
        unsigned e = m.degree_in(v);
        if (e == 0) {
            r.add_term(m, c);
            continue;
        }
        Monomial rest;
        for (auto& [w, k] : m.factors)
            if (w != v) rest.factors.emplace_back(w, k);
        Poly pw(Rational(1));
        for (unsigned t = 0; t < e; ++t) pw *= value;
        Poly restp;
        restp.add_term(rest, c);
        r += restp * pw;
    }
    return r;
}

Rational Poly::affine_coeff(Var v) const {
    for (auto& [m, c] : terms_)
        if (m.factors.size() == 1 && m.factors[0].first == v && m.factors[0].second == 1) return c;
    return 0;
}

Rational Poly::affine_const() const {
    auto it = terms_.find(Monomial::one());
    return it == terms_.end() ? Rational(0) : it->second;
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return Monomial::one();
    Monomial g = terms_.begin()->first;
    for (auto& [m, c] : terms_) {
        g = Monomial::gcd(g, m);
        if (g.factors.empty()) break;
    }
    return g;
}

Poly Poly::divide_monomial(const Monomial& m) const {
    Poly r;
    for (auto& [mm, c] : terms_) r.add_term(mm.divide(m), c);
    return r;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c;
        if (first) {
            if (sgn(a) < 0) { os << "-"; a = -a; }
        } else {
            os << (sgn(a) < 0 ? " - " : " + ");
            if (sgn(a) < 0) a = -a;
        }
        first = false;
        bool printed = false;
        if (m.factors.empty() || a != 1) {
            os << a.get_str();
            printed = true;
        }
        for (auto& [v, e] : m.factors) {
            if (printed) os << "*";
            os << param_name(v);
            if (e > 1) os << "^" << e;
            printed = true;
        }
    }
    return os.str();
}

Frac::Frac(Poly n, Poly d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_.is_zero_poly()) throw std::invalid_argument("Frac: zero denominator");
    normalize();
}

void Frac::normalize() {
    if (num_.is_zero_poly()) {
        den_ = Poly(Rational(1));
        return;
    }
    Monomial g = Monomial::gcd(num_.monomial_content(), den_.monomial_content());
    if (!g.factors.empty()) {
        num_ = num_.divide_monomial(g);
        den_ = den_.divide_monomial(g);
    }
    if (num_ == den_) {
        num_ = Poly(Rational(1));
        den_ = Poly(Rational(1));
        return;
    }
    // Scale so the leading (largest) monomial of the denominator has coefficient 1.
    Rational lead = den_.terms().rbegin()->second;
    Rational inv = 1 / lead;
    num_ *= inv;
    den_ *= inv;
    if (den_.is_constant()) den_ = Poly(Rational(1));
}

Frac Frac::operator+(const Frac& o) const {
    if (den_ == o.den_) return Frac(num_ + o.num_, den_);
    return Frac(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}
Frac Frac::operator-(const Frac& o) const {
    if (den_ == o.den_) return Frac(num_ - o.num_, den_);
    return Frac(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}
Frac Frac::operator*(const Frac& o) const {
    // Cross-cancel first to limit growth.
    Frac a(num_, o.den_), b(o.num_, den_);
    return Frac(a.num_ * b.num_, a.den_ * b.den_);
}
Frac Frac::operator/(const Frac& o) const {
    if (o.is_zero_frac()) throw std::domain_error("Frac: division by zero");
    return *this * Frac(o.den_, o.num_);
}

bool Frac::operator==(const Frac& o) const {
    return num_ * o.den_ == o.num_ * den_;
}

std::string Frac::to_string() const {
    if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string();
    return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace lieq
