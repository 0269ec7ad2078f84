#pragma once

// Exact rational numbers backed by GMP. Every quantity the mechanism touches
// (shares, money, bids, prices, probabilities) is a Rational; nothing in the
// library rounds.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace mbm {

class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long numerator, long denominator);
    explicit Rational(mpq_class value);

    /// Parses "p/q", an integer, or a plain decimal such as "0.125" or "-3.5".
    /// Decimals are converted through exact powers of ten. Throws
    /// std::invalid_argument on malformed text or a zero denominator.
    static Rational parse(std::string_view text);

    const mpq_class& value() const noexcept { return value_; }

    std::string numerator_string() const;
    std::string denominator_string() const;
    bool is_integer() const;
    int sign() const noexcept { return sgn(value_); }

    /// Canonical "p/q" form, always with an explicit denominator.
    std::string str() const;
    /// Approximate decimal with the given number of significant digits.
    std::string decimal(int significant_digits = 20) const;
    double to_double() const { return value_.get_d(); }

    Rational& operator+=(const Rational& rhs) { value_ += rhs.value_; return *this; }
    Rational& operator-=(const Rational& rhs) { value_ -= rhs.value_; return *this; }
    Rational& operator*=(const Rational& rhs) { value_ *= rhs.value_; return *this; }
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational& x) { return Rational(mpq_class(-x.value_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x);

private:
    mpq_class value_;
};

Rational sum(std::span<const Rational> values);
Rational abs(const Rational& x);

}  // namespace mbm
