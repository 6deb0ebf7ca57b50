#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace tollbooth {

// Exact rational number. All arithmetic in this library is exact; there is
// deliberately no floating-point mode anywhere.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long num) : v_(num) {}  // NOLINT(google-explicit-constructor)
  Rat(long num, long den) : v_(num, den) {
    if (den == 0) throw std::invalid_argument("Rat: zero denominator");
    v_.canonicalize();
  }
  explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rat(const mpz_class& z) : v_(z) {}

  // Parses "num", "num/den" or a plain integer string.
  static Rat parse(const std::string& s) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rat: bad literal '" + s + "'");
    q.canonicalize();
    if (q.get_den() == 0) throw std::invalid_argument("Rat: zero denominator in '" + s + "'");
    return Rat(q);
  }

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  int sign() const { return sgn(v_); }
  bool is_integer() const { return v_.get_den() == 1; }

  Rat abs() const { return Rat(mpq_class(::abs(v_))); }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }
  // Decimal approximation for human-facing tables only; never used in logic.
  double approx() const { return v_.get_d(); }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ + b.v_)); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ - b.v_)); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(mpq_class(a.v_ * b.v_)); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (sgn(b.v_) == 0) throw std::domain_error("Rat: division by zero");
    return Rat(mpq_class(a.v_ / b.v_));
  }
  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

  // floor(a/b) over the embedded integers, for bucket arithmetic.
  mpz_class floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return q;
  }
  mpz_class ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    return q;
  }

 private:
  mpq_class v_;
};

inline Rat min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// Smallest integer t >= 1 with t^k >= x (exact integer k-th root with ceiling).
inline mpz_class ceil_root(const mpz_class& x, unsigned k) {
  if (x <= 1) return 1;
  mpz_class r;
  int exact = mpz_root(r.get_mpz_t(), x.get_mpz_t(), k);
  if (!exact) r += 1;
  return r;
}

// ceil(log2(x)) for x >= 1.
inline long ceil_log2(const mpz_class& x) {
  if (x <= 1) return 0;
  mpz_class t = x - 1;
  return static_cast<long>(mpz_sizeinbase(t.get_mpz_t(), 2));
}

// Edge price: a nonnegative rational or Blocked (infinite). Blocked compares
// above every finite price and absorbs addition, so a path containing a
// blocked edge is never affordable.
class ExtPrice {
 public:
  ExtPrice() : fin_(Rat(0)) {}
  ExtPrice(Rat r) : fin_(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  static ExtPrice blocked() {
    ExtPrice p;
    p.fin_.reset();
    return p;
  }

  bool is_blocked() const { return !fin_.has_value(); }
  bool is_finite() const { return fin_.has_value(); }
  const Rat& finite() const {
    if (!fin_) throw std::logic_error("ExtPrice: blocked has no finite value");
    return *fin_;
  }

  friend ExtPrice operator+(const ExtPrice& a, const ExtPrice& b) {
    if (a.is_blocked() || b.is_blocked()) return blocked();
    return ExtPrice(*a.fin_ + *b.fin_);
  }
  ExtPrice& operator+=(const ExtPrice& o) { *this = *this + o; return *this; }

  friend bool operator==(const ExtPrice& a, const ExtPrice& b) {
    if (a.is_blocked() != b.is_blocked()) return false;
    return a.is_blocked() || *a.fin_ == *b.fin_;
  }
  friend bool operator!=(const ExtPrice& a, const ExtPrice& b) { return !(a == b); }
  friend bool operator<(const ExtPrice& a, const ExtPrice& b) {
    if (a.is_blocked()) return false;
    if (b.is_blocked()) return true;
    return *a.fin_ < *b.fin_;
  }
  friend bool operator<=(const ExtPrice& a, const ExtPrice& b) { return a == b || a < b; }
  friend bool operator>(const ExtPrice& a, const ExtPrice& b) { return b < a; }
  friend bool operator>=(const ExtPrice& a, const ExtPrice& b) { return b <= a; }

  std::string str() const { return is_blocked() ? "inf" : fin_->str(); }
  friend std::ostream& operator<<(std::ostream& os, const ExtPrice& p) { return os << p.str(); }

 private:
  std::optional<Rat> fin_;
};

}  // namespace tollbooth
