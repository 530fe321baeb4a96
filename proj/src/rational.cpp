#include "cupgame/rational.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cupgame {
namespace {

using i128 = __int128;

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

bool fits(i128 v) { return v > kMin && v <= kMax; }

std::uint64_t uabs(std::int64_t v) {
  return v < 0 ? std::uint64_t(0) - std::uint64_t(v) : std::uint64_t(v);
}

unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? (unsigned __int128)0 - (unsigned __int128)v : (unsigned __int128)v;
  mpz_class hi = static_cast<unsigned long>(std::uint64_t(u >> 64));
  mpz_class lo = static_cast<unsigned long>(std::uint64_t(u));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  assign_wide(n, d);
}

Rational::Rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  assign(c);
}

void Rational::assign(const mpq_class& q) {
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
      q.get_num() != mpz_class(kMin)) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const mpq_class>(q);
  }
}

void Rational::assign_wide(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  unsigned __int128 un = n < 0 ? (unsigned __int128)0 - (unsigned __int128)n : (unsigned __int128)n;
  unsigned __int128 g = gcd128(un, (unsigned __int128)d);
  if (g > 1) {
    n /= (i128)g;
    d /= (i128)g;
  }
  if (fits(n) && fits(d)) {
    num_ = std::int64_t(n);
    den_ = std::int64_t(d);
    big_.reset();
    return;
  }
  mpq_class q(to_mpz(n), to_mpz(d));
  assign(q);
}

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      if (s.find('.') != std::string::npos) {
        // decimal literal, exact
        auto dot = s.find('.');
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        mpz_class n(digits);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, s.size() - dot - 1);
        return Rational(mpq_class(n, d));
      }
      return Rational(mpq_class(mpz_class(s), 1));
    }
    mpz_class n(s.substr(0, slash));
    mpz_class d(s.substr(slash + 1));
    if (d == 0) throw std::domain_error("rational with zero denominator");
    return Rational(mpq_class(n, d));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational: '" + s + "'");
  }
}

Rational Rational::approximate(double x, std::int64_t denominator) {
  if (!std::isfinite(x)) throw std::domain_error("cannot approximate a non-finite value");
  double scaled = std::round(x * double(denominator));
  mpz_class n;
  mpz_set_d(n.get_mpz_t(), scaled);
  return Rational(mpq_class(n, denominator));
}

bool Rational::is_integer() const {
  return big_ ? big_->get_den() == 1 : den_ == 1;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

std::int64_t Rational::num() const {
  if (big_) throw std::overflow_error("rational numerator exceeds int64");
  return num_;
}

std::int64_t Rational::den() const {
  if (big_) throw std::overflow_error("rational denominator exceeds int64");
  return den_;
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q;
  mpz_set_si(q.get_num_mpz_t(), num_);
  mpz_set_si(q.get_den_mpz_t(), den_);
  return q;
}

double Rational::to_double() const {
  if (big_) return big_->get_d();
  return double(num_) / double(den_);
}

std::string Rational::str() const {
  if (big_) return big_->get_num().get_str() + "/" + big_->get_den().get_str();
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::floor() const {
  if (big_) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return Rational(mpq_class(f));
  }
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return Rational(q);
}

Rational Rational::ceil() const { return -(-*this).floor(); }

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

std::int64_t Rational::floor_int() const {
  Rational f = floor();
  return f.num();
}

Rational Rational::operator-() const {
  if (big_ || num_ == kMin) return Rational(mpq_class(-to_mpq()));
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (!big_ && !o.big_) {
    if (den_ == o.den_) {
      i128 n = i128(num_) + o.num_;
      if (den_ == 1) {
        if (fits(n)) {
          num_ = std::int64_t(n);
          return *this;
        }
      } else if (std::has_single_bit(std::uint64_t(den_)) && fits(n)) {
        std::int64_t v = std::int64_t(n);
        if (v == 0) {
          num_ = 0;
          den_ = 1;
          return *this;
        }
        int shift = std::min(std::countr_zero(uabs(v)), std::countr_zero(std::uint64_t(den_)));
        num_ = v >> shift;
        den_ >>= shift;
        return *this;
      }
      assign_wide(n, den_);
      return *this;
    }
    // an integer offset keeps the sum in lowest terms
    if (o.den_ == 1 || den_ == 1) {
      i128 d = den_ == 1 ? o.den_ : den_;
      i128 n = i128(num_) * (d / den_) + i128(o.num_) * (d / o.den_);
      if (fits(n)) {
        num_ = std::int64_t(n);
        den_ = std::int64_t(d);
        return *this;
      }
    }
    assign_wide(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    return *this;
  }
  assign(to_mpq() + o.to_mpq());
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (!o.big_ && o.num_ != kMin) {
    Rational neg;
    neg.num_ = -o.num_;
    neg.den_ = o.den_;
    return *this += neg;
  }
  return *this += -o;
}

Rational& Rational::operator*=(const Rational& o) {
  if (!big_ && !o.big_) {
    assign_wide(i128(num_) * o.num_, i128(den_) * o.den_);
    return *this;
  }
  assign(to_mpq() * o.to_mpq());
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (!big_ && !o.big_) {
    assign_wide(i128(num_) * o.den_, i128(den_) * o.num_);
    return *this;
  }
  assign(to_mpq() / o.to_mpq());
  return *this;
}

bool Rational::equal_slow(const Rational& a, const Rational& b) {
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical forms differ in storage class
}

std::strong_ordering Rational::compare_slow(const Rational& a, const Rational& b) {
  int c = cmp(a.to_mpq(), b.to_mpq());
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::size_t Rational::hash() const {
  if (big_) return std::hash<std::string>{}(str());
  std::uint64_t h = std::uint64_t(num_) * 0x9E3779B97F4A7C15ULL;
  h ^= std::uint64_t(den_) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
  return std::size_t(h);
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  if (r.is_integer()) {
    if (r.is_small()) return os << r.num();
    return os << r.to_mpq().get_num().get_str();
  }
  return os << r.str();
}

}  // namespace cupgame
