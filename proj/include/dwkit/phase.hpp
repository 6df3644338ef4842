#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dwkit {

using Rational = boost::rational<int64_t>;

int64_t mod_floor(int64_t a, int64_t m);
int64_t gcd64(int64_t a, int64_t b);
int64_t lcm64(int64_t a, int64_t b);
// Checked arithmetic; throws ArithmeticOverflow.
int64_t add_ck(int64_t a, int64_t b);
int64_t mul_ck(int64_t a, int64_t b);

/// numerator/modulus in (1/M)Z/Z, written additively.
class PhaseValue {
 public:
  PhaseValue() = default;
  PhaseValue(int64_t numerator, int64_t modulus);

  int64_t numerator() const { return num_; }
  int64_t modulus() const { return mod_; }
  bool is_zero() const { return num_ == 0; }

  /// Same value with the smallest modulus.
  PhaseValue reduced() const;
  /// Same value written over `m`; `m` must be a multiple of the reduced denominator.
  PhaseValue rescaled(int64_t m) const;
  int64_t denominator() const { return reduced().mod_; }

  PhaseValue operator+(const PhaseValue& o) const;
  PhaseValue operator-(const PhaseValue& o) const;
  PhaseValue operator-() const;
  PhaseValue operator*(int64_t k) const;
  PhaseValue& operator+=(const PhaseValue& o) { return *this = *this + o; }
  PhaseValue& operator-=(const PhaseValue& o) { return *this = *this - o; }
  bool operator==(const PhaseValue& o) const;
  bool operator!=(const PhaseValue& o) const { return !(*this == o); }

  /// "p/q" in lowest terms ("0" for zero).
  std::string str() const;
  static PhaseValue parse(const std::string& s);

 private:
  int64_t num_ = 0;
  int64_t mod_ = 1;
};

/// Exact element of Q(zeta_M), stored as rational coefficients on the powers
/// zeta^0..zeta^{M-1}.  Equality and rationality are decided after reduction
/// modulo the cyclotomic polynomial, never numerically.
class Cyclotomic {
 public:
  Cyclotomic() = default;
  static Cyclotomic rational(Rational r);
  static Cyclotomic phase(const PhaseValue& p, Rational weight = Rational(1));

  int64_t modulus() const { return mod_; }
  const std::vector<Rational>& coefficients() const { return coef_; }

  Cyclotomic operator+(const Cyclotomic& o) const;
  Cyclotomic operator*(const Rational& r) const;
  Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
  bool operator==(const Cyclotomic& o) const;
  bool operator!=(const Cyclotomic& o) const { return !(*this == o); }

  bool is_rational() const;
  Rational to_rational() const;  // throws if not rational
  /// Coefficients reduced modulo Phi_M (length deg Phi_M).
  std::vector<Rational> canonical() const;
  std::string str() const;

 private:
  Cyclotomic lifted(int64_t m) const;

  int64_t mod_ = 1;
  std::vector<Rational> coef_{Rational(0)};
};

/// Integer coefficients of the M-th cyclotomic polynomial, constant term first.
const std::vector<int64_t>& cyclotomic_polynomial(int64_t m);

}  // namespace dwkit
