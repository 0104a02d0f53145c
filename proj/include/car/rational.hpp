#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace car {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt big_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }
inline BigInt big_lcm(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }

/// Exact fraction num/den in lowest terms, den > 0, canonical zero 0/1.
/// Both components are arbitrary-precision integers.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long long n) : v_(static_cast<std::int64_t>(n)) {}
    Rat(const BigInt& n) : v_(n) {}

    Rat(const BigInt& num, const BigInt& den) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        if (den < 0)
            v_.assign(boost::multiprecision::cpp_rational(-num, -den));
        else
            v_.assign(boost::multiprecision::cpp_rational(num, den));
    }
    Rat(long long num, long long den) : Rat(BigInt(num), BigInt(den)) {}

    BigInt num() const { return boost::multiprecision::numerator(v_); }
    BigInt den() const { return boost::multiprecision::denominator(v_); }

    bool is_zero() const { return v_ == 0; }
    int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.v_ == 0) throw std::invalid_argument("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
    friend Rat operator-(const Rat& a) { Rat r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    Rat abs() const { return *this < Rat(0) ? -*this : *this; }

    double to_double() const { return v_.convert_to<double>(); }

    /// "p/q", or just "p" when the denominator is 1.
    std::string str() const {
        std::string s = num().str();
        if (den() != 1) s += "/" + den().str();
        return s;
    }

    /// Parses "p", "-p" or "p/q". Throws std::invalid_argument on anything else.
    static Rat parse(std::string_view text);

    /// Like parse() but additionally accepts decimal notation such as "0.31831".
    /// Decimals convert exactly (digits over a power of ten).
    static Rat parse_decimal(std::string_view text);

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    boost::multiprecision::cpp_rational v_;
};

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

} // namespace detail

inline Rat Rat::parse(std::string_view text) {
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    auto slash = s.find('/');
    BigInt num, den = 1;
    if (slash == std::string_view::npos) {
        if (!detail::all_digits(s)) throw std::invalid_argument("Rat: bad literal '" + std::string(text) + "'");
        num = BigInt(std::string(s));
    } else {
        auto ns = s.substr(0, slash), ds = s.substr(slash + 1);
        if (!detail::all_digits(ns) || !detail::all_digits(ds))
            throw std::invalid_argument("Rat: bad literal '" + std::string(text) + "'");
        num = BigInt(std::string(ns));
        den = BigInt(std::string(ds));
        if (den == 0) throw std::invalid_argument("Rat: zero denominator in '" + std::string(text) + "'");
    }
    if (neg) num = -num;
    return Rat(num, den);
}

inline Rat Rat::parse_decimal(std::string_view text) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return parse(text);
    std::string_view s = text;
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
        dot -= 1;
    }
    auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !detail::all_digits(ip)) ||
        (!fp.empty() && !detail::all_digits(fp)))
        throw std::invalid_argument("Rat: bad decimal literal '" + std::string(text) + "'");
    BigInt num = ip.empty() ? BigInt(0) : BigInt(std::string(ip));
    BigInt den = 1;
    for (char c : fp) {
        num = num * 10 + (c - '0');
        den *= 10;
    }
    if (neg) num = -num;
    return Rat(num, den);
}

} // namespace car
