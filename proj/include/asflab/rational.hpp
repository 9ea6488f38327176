#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace asflab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct computation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline Int to_int(const Rational& r) {
  if (!is_integer(r)) throw computation_error("expected integer, got " + r.str());
  return num(r);
}

inline Rational rat_pow(const Rational& base, long e) {
  Rational out = 1;
  Rational b = e >= 0 ? base : Rational(1) / base;
  for (long k = 0; k < (e >= 0 ? e : -e); ++k) out *= b;
  return out;
}

// Exact square root of a perfect-square integer, nullopt otherwise.
inline std::optional<Int> int_sqrt_exact(const Int& n) {
  if (n < 0) return std::nullopt;
  Int r = boost::multiprecision::sqrt(n);
  if (r * r != n) return std::nullopt;
  return r;
}

inline std::optional<Rational> rat_sqrt_exact(const Rational& r) {
  auto n = int_sqrt_exact(num(r));
  auto d = int_sqrt_exact(den(r));
  if (!n || !d) return std::nullopt;
  return Rational(*n, *d);
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    return Rational(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw computation_error("bad rational literal: " + s);
  }
}

inline std::string rat_str(const Rational& r) { return r.str(); }

// Value r*sqrt(s) with r rational and s a positive rational kept square-free
// in numerator and denominator. Used only for reporting Euclidean volumes;
// all identity checking happens on plain Rational coordinates.
struct QSqrt {
  Rational r;
  Rational s;  // radicand, normalized

  QSqrt() : r(0), s(1) {}
  QSqrt(Rational r_, Rational s_) : r(std::move(r_)), s(std::move(s_)) { normalize(); }

  void normalize() {
    if (r == 0) {
      s = 1;
      return;
    }
    if (s <= 0) throw computation_error("QSqrt radicand must be positive");
    Int n = num(s), d = den(s);
    Int sq = 1;
    auto strip = [](Int& v, Int& outsq) {
      for (Int p = 2; p * p <= v; ++p) {
        while (v % (p * p) == 0) {
          v /= p * p;
          outsq *= p;
        }
      }
    };
    strip(n, sq);
    Int dsq = 1;
    strip(d, dsq);
    r *= Rational(sq, dsq);
    s = Rational(n, d * d) * Rational(dsq * dsq, 1);  // s = n/d after extraction: n/(d^2) * d... keep n/d
    s = Rational(n, d);
  }

  QSqrt operator*(const QSqrt& o) const { return QSqrt(r * o.r, s * o.s); }

  bool rational() const { return s == 1 || r == 0; }
  std::string str() const {
    if (rational()) return r.str();
    return r.str() + "*sqrt(" + s.str() + ")";
  }
};

}  // namespace asflab
