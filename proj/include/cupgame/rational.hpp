#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cupgame {

// Exact fraction in lowest terms with a positive denominator.
//
// Values whose numerator and denominator fit in int64 are stored inline.
// Anything larger spills into a shared, immutable GMP rational and is
// demoted again as soon as a result fits.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);
  explicit Rational(const mpq_class& q);

  static Rational parse(std::string_view text);
  // Nearest fraction with the given denominator.
  static Rational approximate(double x, std::int64_t denominator);

  bool is_small() const { return !big_; }
  bool is_integer() const;
  bool is_zero() const { return !big_ && num_ == 0; }
  int sign() const;

  // Only valid when is_small(); otherwise throws std::overflow_error.
  std::int64_t num() const;
  std::int64_t den() const;

  mpq_class to_mpq() const;
  double to_double() const;
  std::string str() const;

  Rational floor() const;
  Rational ceil() const;
  Rational abs() const;
  // Floor as int64; throws std::overflow_error if it does not fit.
  std::int64_t floor_int() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return equal_slow(a, b);
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.den_ == b.den_) return a.num_ <=> b.num_;
      __int128 l = __int128(a.num_) * b.den_;
      __int128 r = __int128(b.num_) * a.den_;
      return l < r ? std::strong_ordering::less
                   : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    return compare_slow(a, b);
  }

  std::size_t hash() const;

 private:
  static bool equal_slow(const Rational& a, const Rational& b);
  static std::strong_ordering compare_slow(const Rational& a, const Rational& b);
  void assign(const mpq_class& q);
  void assign_wide(__int128 n, __int128 d);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& os, const Rational& r);

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return r.hash(); }
};

}  // namespace cupgame
