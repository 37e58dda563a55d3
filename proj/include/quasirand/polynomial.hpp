#pragma once

#include <string>
#include <vector>

#include "quasirand/rational.hpp"

namespace quasirand {

// Univariate polynomial in p with exact rational coefficients,
// coeffs[d] multiplying p^d.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(const Rational& c);
  // (a + b p)^e
  static Polynomial binomial_power(const Rational& a, const Rational& b, int e);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  template <class S>
  S evaluate(const S& p) const {
    S acc = S(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      if constexpr (std::is_same_v<S, Rational>) {
        acc = acc * p + *it;
      } else {
        acc = acc * p + static_cast<S>(it->get_d());
      }
    }
    return acc;
  }

  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

}  // namespace quasirand
