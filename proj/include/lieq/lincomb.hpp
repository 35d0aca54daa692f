#pragma once

#include <map>
#include <functional>
#include <vector>

#include "lieq/rational.hpp"

namespace lieq {

// Formal linear combination of keys K over coefficient ring C. Zero coefficients
// are never stored, so empty map <=> zero element and operator== is well defined.
template <typename K, typename C = Rational>
class LinComb {
public:
    using map_type = std::map<K, C>;

    LinComb() = default;
    explicit LinComb(const K& k, C c = C(1)) {
        if (!(c == C(0))) terms_[k] = std::move(c);
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const map_type& terms() const { return terms_; }

    C coeff(const K& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add(const K& k, const C& c) {
        if (c == C(0)) return;
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    LinComb& operator+=(const LinComb& o) {
        for (auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        for (auto& [k, c] : o.terms_) add(k, C(-1) * c);
        return *this;
    }
    LinComb& operator*=(const C& c) {
        if (c == C(0)) { terms_.clear(); return *this; }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    friend LinComb operator+(LinComb a, const LinComb& b) { a += b; return a; }
    friend LinComb operator-(LinComb a, const LinComb& b) { a -= b; return a; }
    friend LinComb operator*(const C& c, LinComb a) { a *= c; return a; }

    friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LinComb& a, const LinComb& b) { return !(a == b); }
    friend bool operator<(const LinComb& a, const LinComb& b) { return a.terms_ < b.terms_; }

    // Applies f to every key and resums. f returns a LinComb (keys may change type).
    template <typename F>
    auto map_keys(F&& f) const {
        using R = decltype(f(std::declval<const K&>()));
        R out;
        for (auto& [k, c] : terms_) {
            R fk = f(k);
            fk *= c;
            out += fk;
        }
        return out;
    }

private:
    map_type terms_;
};

}  // namespace lieq
