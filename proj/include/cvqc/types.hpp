#pragma once

#include <cstdint>

#include "cvqc/bitstring.hpp"

namespace cvqc {

/// Element of Z_8; a phase of e^{i v π/4}.
class Z8 {
 public:
  constexpr Z8() = default;
  constexpr Z8(int v) : v_(static_cast<std::uint8_t>(((v % 8) + 8) % 8)) {}  // NOLINT: implicit by design of the group

  constexpr int value() const { return v_; }

  friend constexpr Z8 operator+(Z8 a, Z8 b) { return Z8(a.v_ + b.v_); }
  friend constexpr Z8 operator-(Z8 a, Z8 b) { return Z8(a.v_ - b.v_); }
  friend constexpr Z8 operator-(Z8 a) { return Z8(-a.v_); }
  Z8& operator+=(Z8 b) { return *this = *this + b; }
  friend constexpr bool operator==(Z8, Z8) = default;

 private:
  std::uint8_t v_ = 0;
};

/// A claw (x0, x1) held by the client. x0 != x1.
struct KeyPair {
  BitString x0;
  BitString x1;

  const BitString& operator[](int b) const { return b ? x1 : x0; }
  bool contains(const BitString& x) const { return x == x0 || x == x1; }
  bool operator==(const KeyPair&) const = default;
};

struct PhasePair {
  Z8 t0;
  Z8 t1;

  Z8 operator[](int b) const { return b ? t1 : t0; }
  Z8 relative() const { return t1 - t0; }
  bool operator==(const PhasePair&) const = default;
};

}  // namespace cvqc
