#pragma once

#include <cstdint>
#include <string>
#include <type_traits>

#include <gmpxx.h>

namespace quasirand {

using Rational = mpq_class;

// Conversions used by code templated on the scalar type (double or Rational).
template <class S>
S scalar_from_int(std::int64_t v) {
  if constexpr (std::is_same_v<S, Rational>) {
    return Rational(mpz_class(std::to_string(v)));
  } else {
    return static_cast<S>(v);
  }
}

template <class S>
S scalar_abs(const S& v) {
  if constexpr (std::is_same_v<S, Rational>) {
    return Rational(abs(v));
  } else {
    return v < 0 ? -v : v;
  }
}

template <class S>
double to_double(const S& v) {
  if constexpr (std::is_same_v<S, Rational>) {
    return v.get_d();
  } else {
    return static_cast<double>(v);
  }
}

inline Rational make_rational(std::int64_t num, std::int64_t den) {
  Rational r(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace quasirand
