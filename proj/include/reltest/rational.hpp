#pragma once

// Exact rational arithmetic on int64 numerator/denominator with __int128
// intermediates. Distances, lemma bounds and probabilities are compared in
// this type only; floating point never enters a correctness check.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace reltest {

class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long num, long long den) { assign(num, den); }
  static Rational integer(long long v) { return Rational(v, 1); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  Rational operator+(const Rational& o) const {
    __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    return from_i128(n, d);
  }
  Rational operator-(const Rational& o) const {
    __int128 n = (__int128)num_ * o.den_ - (__int128)o.num_ * den_;
    __int128 d = (__int128)den_ * o.den_;
    return from_i128(n, d);
  }
  Rational operator*(const Rational& o) const {
    return from_i128((__int128)num_ * o.num_, (__int128)den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
    return from_i128((__int128)num_ * o.den_, (__int128)den_ * o.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ <= (__int128)b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "p/q", an integer, or a plain decimal like "0.25" (parsed exactly).
  static Rational parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      long long p = std::stoll(s.substr(0, slash));
      long long q = std::stoll(s.substr(slash + 1));
      return Rational(p, q);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(s), 1);
    bool neg = s[0] == '-';
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    if (neg) digits = digits.substr(1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || frac_len > 18) throw std::invalid_argument("Rational: bad decimal");
    long long p = digits.empty() ? 0 : std::stoll(digits);
    long long q = 1;
    for (size_t i = 0; i < frac_len; ++i) q *= 10;
    return Rational(neg ? -p : p, q);
  }

 private:
  long long num_;
  long long den_;

  void assign(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    num_ = num;
    den_ = den;
  }

  static Rational from_i128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lo = -(__int128)0x7fffffffffffffffLL;
    constexpr __int128 hi = (__int128)0x7fffffffffffffffLL;
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("Rational: value out of 64-bit range after reduction");
    Rational r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }
};

}  // namespace reltest
