#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

#include "propcalc/errors.hpp"

namespace propcalc {

// Exact rational scalar. Invariants: always in lowest terms, denominator
// positive. Backed by GMP so numerators and denominators are arbitrary size.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(int n) : v_(n) {}

    Rational(long num, long den) {
        if (den == 0) throw math_error("rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    // accepts "p" or "p/q", optional leading '-'
    static Rational parse(const std::string& s) {
        if (s.empty()) throw input_error("rational: empty string");
        for (size_t i = 0; i < s.size(); ++i) {
            char c = s[i];
            bool ok = (c >= '0' && c <= '9') || c == '/' || (c == '-' && i == 0);
            if (!ok) throw input_error("rational: bad character in '" + s + "'");
        }
        auto slash = s.find('/');
        if (slash == 0 || slash == s.size() - 1)
            throw input_error("rational: malformed '" + s + "'");
        Rational r;
        try {
            r.v_ = mpq_class(s);
        } catch (const std::invalid_argument&) {
            throw input_error("rational: malformed '" + s + "'");
        }
        if (r.v_.get_den() == 0) throw math_error("rational: zero denominator");
        r.v_.canonicalize();
        return r;
    }

    bool is_zero() const { return v_ == 0; }
    int sgn() const { return ::sgn(v_); }

    std::string num_string() const { return v_.get_num().get_str(); }
    std::string den_string() const { return v_.get_den().get_str(); }

    std::string str() const {
        if (v_.get_den() == 1) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    Rational operator-() const { return Rational(-v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw math_error("rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

  private:
    explicit Rational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

// parity helper used all over the sign bookkeeping
inline int koszul_sign(int parity) { return (parity % 2 == 0) ? 1 : -1; }

} // namespace propcalc
