#include "dwkit/phase.hpp"

#include <mutex>
#include <numeric>
#include <sstream>

#include "dwkit/errors.hpp"

namespace dwkit {

int64_t mod_floor(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

int64_t gcd64(int64_t a, int64_t b) { return std::gcd(a, b); }

int64_t lcm64(int64_t a, int64_t b) {
  if (a == 0 || b == 0) return 0;
  return mul_ck(a / gcd64(a, b), b);
}

int64_t add_ck(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}

int64_t mul_ck(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow();
  return r;
}

PhaseValue::PhaseValue(int64_t numerator, int64_t modulus) : mod_(modulus) {
  if (modulus <= 0) throw Error("phase modulus must be positive");
  num_ = mod_floor(numerator, modulus);
}

PhaseValue PhaseValue::reduced() const {
  int64_t g = gcd64(num_, mod_);
  if (num_ == 0) return PhaseValue(0, 1);
  return PhaseValue(num_ / g, mod_ / g);
}

PhaseValue PhaseValue::rescaled(int64_t m) const {
  PhaseValue r = reduced();
  if (m % r.mod_) throw Error("cannot rescale " + str() + " to modulus " + std::to_string(m));
  return PhaseValue(mul_ck(r.num_, m / r.mod_), m);
}

PhaseValue PhaseValue::operator+(const PhaseValue& o) const {
  int64_t m = lcm64(mod_, o.mod_);
  return PhaseValue(add_ck(mul_ck(num_, m / mod_), mul_ck(o.num_, m / o.mod_)) % m, m);
}

PhaseValue PhaseValue::operator-() const { return PhaseValue(mod_ - num_, mod_); }

PhaseValue PhaseValue::operator-(const PhaseValue& o) const { return *this + (-o); }

PhaseValue PhaseValue::operator*(int64_t k) const {
  __int128 v = static_cast<__int128>(num_) * k;
  v %= mod_;
  return PhaseValue(static_cast<int64_t>(v), mod_);
}

bool PhaseValue::operator==(const PhaseValue& o) const {
  PhaseValue a = reduced(), b = o.reduced();
  return a.num_ == b.num_ && a.mod_ == b.mod_;
}

std::string PhaseValue::str() const {
  PhaseValue r = reduced();
  if (r.num_ == 0) return "0";
  return std::to_string(r.num_) + "/" + std::to_string(r.mod_);
}

PhaseValue PhaseValue::parse(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
      size_t pos = 0;
      int64_t v = std::stoll(s, &pos);
      if (pos != s.size()) throw ParseError("bad phase '" + s + "'");
      return PhaseValue(v, 1);
    }
    size_t p1 = 0, p2 = 0;
    int64_t p = std::stoll(s.substr(0, slash), &p1);
    int64_t q = std::stoll(s.substr(slash + 1), &p2);
    if (p1 != slash || p2 != s.size() - slash - 1 || q <= 0) throw ParseError("bad phase '" + s + "'");
    return PhaseValue(p, q);
  } catch (const std::logic_error&) {
    throw ParseError("bad phase '" + s + "'");
  }
}

namespace {

// Caller holds the cache lock.  Divisors are built before m, so no recursion.
const std::vector<int64_t>& cyclotomic_locked(std::map<int64_t, std::vector<int64_t>>& cache, int64_t m) {
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  std::vector<int64_t> p(m + 1, 0);
  p[0] = -1;
  p[m] = 1;
  for (int64_t d = 1; d < m; ++d) {
    if (m % d) continue;
    // Copy: emplacing further entries never invalidates map nodes, but the
    // divisor's polynomial must exist before dividing by it.
    std::vector<int64_t> q = cyclotomic_locked(cache, d);
    std::vector<int64_t> quot(p.size() - q.size() + 1, 0);
    for (size_t i = quot.size(); i-- > 0;) {
      int64_t c = p[i + q.size() - 1];
      quot[i] = c;
      for (size_t j = 0; j < q.size(); ++j) p[i + j] -= c * q[j];
    }
    p = quot;
  }
  return cache.emplace(m, p).first->second;
}

}  // namespace

const std::vector<int64_t>& cyclotomic_polynomial(int64_t m) {
  static std::mutex mu;
  static std::map<int64_t, std::vector<int64_t>> cache;
  std::lock_guard<std::mutex> lock(mu);
  return cyclotomic_locked(cache, m);
}

Cyclotomic Cyclotomic::rational(Rational r) {
  Cyclotomic c;
  c.coef_[0] = r;
  return c;
}

Cyclotomic Cyclotomic::phase(const PhaseValue& p, Rational weight) {
  PhaseValue r = p.reduced();
  Cyclotomic c;
  c.mod_ = r.modulus();
  c.coef_.assign(c.mod_, Rational(0));
  c.coef_[r.numerator()] = weight;
  return c;
}

Cyclotomic Cyclotomic::lifted(int64_t m) const {
  if (m == mod_) return *this;
  Cyclotomic c;
  c.mod_ = m;
  c.coef_.assign(m, Rational(0));
  int64_t f = m / mod_;
  for (int64_t i = 0; i < mod_; ++i) c.coef_[i * f] = coef_[i];
  return c;
}

Cyclotomic Cyclotomic::operator+(const Cyclotomic& o) const {
  int64_t m = lcm64(mod_, o.mod_);
  Cyclotomic a = lifted(m), b = o.lifted(m);
  for (int64_t i = 0; i < m; ++i) a.coef_[i] += b.coef_[i];
  return a;
}

Cyclotomic Cyclotomic::operator*(const Rational& r) const {
  Cyclotomic a = *this;
  for (auto& x : a.coef_) x *= r;
  return a;
}

std::vector<Rational> Cyclotomic::canonical() const {
  const auto& phi = cyclotomic_polynomial(mod_);
  size_t deg = phi.size() - 1;
  std::vector<Rational> r = coef_;
  for (size_t i = r.size(); i-- > deg;) {
    Rational c = r[i];
    if (c.numerator() == 0) continue;
    for (size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  r.resize(deg);
  return r;
}

bool Cyclotomic::operator==(const Cyclotomic& o) const {
  int64_t m = lcm64(mod_, o.mod_);
  return lifted(m).canonical() == o.lifted(m).canonical();
}

bool Cyclotomic::is_rational() const {
  auto c = canonical();
  for (size_t i = 1; i < c.size(); ++i)
    if (c[i].numerator() != 0) return false;
  return true;
}

Rational Cyclotomic::to_rational() const {
  if (!is_rational()) throw Error("cyclotomic value " + str() + " is not rational");
  auto c = canonical();
  return c.empty() ? Rational(0) : c[0];
}

std::string Cyclotomic::str() const {
  if (is_rational()) {
    Rational r = to_rational();
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << "/" << r.denominator();
    return os.str();
  }
  std::ostringstream os;
  bool first = true;
  auto c = canonical();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].numerator() == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c[i].numerator();
    if (c[i].denominator() != 1) os << "/" << c[i].denominator();
    os << ")z^" << i;
  }
  os << " [z=exp(2pi i/" << mod_ << ")]";
  return os.str();
}

}  // namespace dwkit
