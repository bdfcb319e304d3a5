#pragma once
#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "hopfcalc/errors.hpp"

namespace hopfcalc {

// Exact rational scalar.  Thin wrapper over GMP's mpq_class that keeps every
// value canonical (gcd(num, den) = 1, den > 0) from construction onward, so
// equality is plain value equality and printing is deterministic.
class Rational {
  public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long num, long den) : v_(static_cast<signed long>(num), static_cast<signed long>(den)) {
        if (den == 0) throw input_error("rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Accepts "p", "-p", "p/q"; anything else is a parse error.
    static Rational parse(const std::string& s);

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw input_error("rational division by zero");
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

    // "p/q", or just "p" when q = 1.
    std::string str() const;

    friend std::ostream& operator<<(std::ostream& os, const Rational& q);

  private:
    mpq_class v_;
};

} // namespace hopfcalc
