#ifndef LIFTSYS_FIELD_HPP
#define LIFTSYS_FIELD_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "liftsys/errors.hpp"

namespace liftsys {

inline constexpr std::uint32_t kDefaultCharacteristic = 32003;

bool is_prime(std::uint64_t n);

// Characteristic of the coefficient field; 0 selects exact rationals.
struct FieldConfig {
  std::uint32_t characteristic = kDefaultCharacteristic;

  void validate() const {
    if (characteristic != 0 && (!is_prime(characteristic) || characteristic >= (1u << 31))) {
      throw InputError("characteristic must be 0 or a prime below 2^31, got " +
                       std::to_string(characteristic));
    }
  }
};

// Z/p with p < 2^31. Elements are canonical representatives in [0, p).
class PrimeField {
 public:
  using Element = std::uint32_t;

  explicit PrimeField(std::uint32_t p = kDefaultCharacteristic) : p_(p) {
    FieldConfig{p}.validate();
    if (p == 0) throw InputError("PrimeField needs a nonzero characteristic");
  }

  std::uint32_t characteristic() const noexcept { return p_; }

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  bool is_zero(Element a) const noexcept { return a == 0; }
  bool is_one(Element a) const noexcept { return a == 1; }
  bool equal(Element a, Element b) const noexcept { return a == b; }

  Element add(Element a, Element b) const noexcept {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const noexcept {
    return static_cast<Element>((static_cast<std::uint64_t>(a) * b) % p_);
  }
  // a - c*b, the inner operation of every elimination loop.
  Element sub_mul(Element a, Element c, Element b) const noexcept { return sub(a, mul(c, b)); }

  Element inv(Element a) const {
    if (a == 0) throw std::domain_error("division by zero in prime field");
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Element>(t);
  }
  Element div(Element a, Element b) const { return mul(a, inv(b)); }

  Element from_int(std::int64_t v) const noexcept {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Element>(r);
  }
  // Decimal digit string, reduced on the fly (no overflow for any length).
  Element from_decimal(std::string_view digits) const {
    std::uint64_t acc = 0;
    for (char ch : digits) acc = (acc * 10 + static_cast<std::uint64_t>(ch - '0')) % p_;
    return static_cast<Element>(acc);
  }

  // Symmetric representative in (-p/2, p/2], so -1 prints as -1.
  std::string to_string(Element a) const {
    if (a > p_ / 2) return "-" + std::to_string(p_ - a);
    return std::to_string(a);
  }
  bool is_negative_repr(Element a) const noexcept { return a > p_ / 2; }

 private:
  std::uint32_t p_;
};

// Exact rationals; the slow verification mode.
class RationalField {
 public:
  using Element = mpq_class;

  std::uint32_t characteristic() const noexcept { return 0; }

  Element zero() const { return Element(0); }
  Element one() const { return Element(1); }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool is_one(const Element& a) const { return a == 1; }
  bool equal(const Element& a, const Element& b) const { return a == b; }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element sub_mul(const Element& a, const Element& c, const Element& b) const { return a - c * b; }
  Element inv(const Element& a) const {
    if (sgn(a) == 0) throw std::domain_error("division by zero in rational field");
    return 1 / a;
  }
  Element div(const Element& a, const Element& b) const { return a / b; }

  Element from_int(std::int64_t v) const { return Element(static_cast<long>(v)); }
  Element from_decimal(std::string_view digits) const {
    return Element(mpz_class(std::string(digits), 10));
  }

  std::string to_string(const Element& a) const { return a.get_str(); }
  bool is_negative_repr(const Element& a) const { return sgn(a) < 0; }
};

}  // namespace liftsys

#endif  // LIFTSYS_FIELD_HPP
