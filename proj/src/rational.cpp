#include "mbm/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace mbm {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    mpz_class z(std::string(s), 10);
    return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational::Rational(long numerator, long denominator) : value_(numerator, denominator) {
    if (denominator == 0) throw std::invalid_argument("zero denominator");
    value_.canonicalize();
}

Rational::Rational(mpq_class value) : value_(std::move(value)) {
    if (value_.get_den() == 0) throw std::invalid_argument("zero denominator");
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty number");

    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const mpz_class num = parse_integer(trim(s.substr(0, slash)), s);
        const std::string_view den_text = trim(s.substr(slash + 1));
        if (!all_digits(den_text))
            throw std::invalid_argument("malformed denominator: '" + std::string(s) + "'");
        const mpz_class den(std::string(den_text), 10);
        if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(s) + "'");
        return Rational(mpq_class(num, den));
    }

    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = s.substr(0, dot);
        const std::string_view frac_part = s.substr(dot + 1);
        bool negative = false;
        if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) {
            negative = int_part.front() == '-';
            int_part.remove_prefix(1);
        }
        if ((int_part.empty() && frac_part.empty()) ||
            (!int_part.empty() && !all_digits(int_part)) ||
            (!frac_part.empty() && !all_digits(frac_part)))
            throw std::invalid_argument("malformed decimal: '" + std::string(s) + "'");
        const std::string digits = std::string(int_part) + std::string(frac_part);
        mpz_class num(digits.empty() ? std::string("0") : digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
        if (negative) num = -num;
        return Rational(mpq_class(num, den));
    }

    return Rational(mpq_class(parse_integer(s, s)));
}

std::string Rational::numerator_string() const { return value_.get_num().get_str(); }
std::string Rational::denominator_string() const { return value_.get_den().get_str(); }
bool Rational::is_integer() const { return value_.get_den() == 1; }

std::string Rational::str() const { return numerator_string() + "/" + denominator_string(); }

std::string Rational::decimal(int significant_digits) const {
    mpf_class f(value_, 256);
    std::vector<char> buf(static_cast<std::size_t>(significant_digits) + 64);
    gmp_snprintf(buf.data(), buf.size(), "%.*Fg", significant_digits, f.get_mpf_t());
    return buf.data();
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.value_ == 0) throw std::domain_error("division by zero");
    value_ /= rhs.value_;
    return *this;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

Rational sum(std::span<const Rational> values) {
    mpq_class acc;
    for (const auto& v : values) acc += v.value();
    return Rational(std::move(acc));
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

}  // namespace mbm
