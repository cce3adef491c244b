#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <variant>

#include "qtilt/error.hpp"

namespace qtilt {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// A field element. For GF(p) the value is the canonical representative in
// [0, p); for the rationals it is an exact fraction.
using Scalar = std::variant<std::uint64_t, BigRat>;

struct FieldError : InputError {
  using InputError::InputError;
};

// Ground field: characteristic 0 means the rationals, otherwise a prime
// modulus below 2^31 so that products fit in 64 bits.
struct Field {
  std::uint32_t p = 0;

  bool rational() const { return p == 0; }
  bool operator==(const Field&) const = default;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long n) const;

  bool is_zero(const Scalar& a) const;
  bool is_one(const Scalar& a) const;
  bool eq(const Scalar& a, const Scalar& b) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;  // throws FieldError on zero

  // Accepts "n" or "n/d" with optional leading minus. Over GF(p) a fraction
  // is resolved as n * d^{-1}.
  Scalar parse(const std::string& text) const;
  std::string to_string(const Scalar& a) const;
};

// Trial-division primality check, sufficient for moduli below 2^31.
bool is_prime_u32(std::uint32_t n);

// Validates the characteristic (0 or a prime < 2^31) and returns the field.
Field make_field(long long characteristic);

}  // namespace qtilt
