#include "qtilt/field.hpp"

#include <cctype>

namespace qtilt {

namespace {

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = (r * base) % m;
    base = (base * base) % m;
    exp >>= 1;
  }
  return r;
}

const std::uint64_t& as_mod(const Scalar& a) {
  if (!std::holds_alternative<std::uint64_t>(a))
    throw FieldError("scalar has rational representation in a prime field");
  return std::get<std::uint64_t>(a);
}

const BigRat& as_rat(const Scalar& a) {
  if (!std::holds_alternative<BigRat>(a))
    throw FieldError("scalar has modular representation over the rationals");
  return std::get<BigRat>(a);
}

}  // namespace

Scalar Field::zero() const {
  if (rational()) return BigRat(0);
  return std::uint64_t{0};
}

Scalar Field::one() const {
  if (rational()) return BigRat(1);
  return std::uint64_t{1 % p};
}

Scalar Field::from_int(long long n) const {
  if (rational()) return BigRat(n);
  long long r = n % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<std::uint64_t>(r);
}

bool Field::is_zero(const Scalar& a) const {
  if (rational()) return as_rat(a).is_zero();
  return as_mod(a) == 0;
}

bool Field::is_one(const Scalar& a) const { return eq(a, one()); }

bool Field::eq(const Scalar& a, const Scalar& b) const {
  if (rational()) return as_rat(a) == as_rat(b);
  return as_mod(a) == as_mod(b);
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  if (rational()) return BigRat(as_rat(a) + as_rat(b));
  std::uint64_t s = as_mod(a) + as_mod(b);
  if (s >= p) s -= p;
  return s;
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  if (rational()) return BigRat(as_rat(a) - as_rat(b));
  std::uint64_t x = as_mod(a), y = as_mod(b);
  return x >= y ? x - y : x + p - y;
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  if (rational()) return BigRat(as_rat(a) * as_rat(b));
  return (as_mod(a) * as_mod(b)) % p;
}

Scalar Field::neg(const Scalar& a) const {
  if (rational()) return BigRat(-as_rat(a));
  std::uint64_t x = as_mod(a);
  return x == 0 ? x : p - x;
}

Scalar Field::inv(const Scalar& a) const {
  if (is_zero(a)) throw FieldError("division by zero");
  if (rational()) return BigRat(1 / as_rat(a));
  return mod_pow(as_mod(a), p - 2, p);
}

Scalar Field::parse(const std::string& text) const {
  auto fail = [&] { throw FieldError("bad scalar literal: '" + text + "'"); };
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  auto read_digits = [&]() -> std::string {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) fail();
    return text.substr(start, i - start);
  };
  std::string num = read_digits();
  std::string den;
  if (i < text.size() && text[i] == '/') {
    ++i;
    den = read_digits();
  }
  if (i != text.size()) fail();

  if (rational()) {
    BigInt n(num);
    if (negative) n = -n;
    if (den.empty()) return BigRat(n);
    BigInt d(den);
    if (d.is_zero()) fail();
    return BigRat(n, d);
  }

  auto reduce = [&](const std::string& digits) -> std::uint64_t {
    std::uint64_t r = 0;
    for (char c : digits) r = (r * 10 + static_cast<std::uint64_t>(c - '0')) % p;
    return r;
  };
  Scalar n{reduce(num)};
  if (negative) n = neg(n);
  if (den.empty()) return n;
  Scalar d{reduce(den)};
  if (is_zero(d)) throw FieldError("denominator vanishes mod " + std::to_string(p) +
                                   " in '" + text + "'");
  return mul(n, inv(d));
}

std::string Field::to_string(const Scalar& a) const {
  if (rational()) {
    const BigRat& r = as_rat(a);
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
  }
  return std::to_string(as_mod(a));
}

bool is_prime_u32(std::uint32_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

Field make_field(long long characteristic) {
  if (characteristic == 0) return Field{0};
  if (characteristic < 2 || characteristic >= (1LL << 31) ||
      !is_prime_u32(static_cast<std::uint32_t>(characteristic)))
    throw FieldError("characteristic must be 0 or a prime below 2^31, got " +
                     std::to_string(characteristic));
  return Field{static_cast<std::uint32_t>(characteristic)};
}

}  // namespace qtilt
