#include "quasirand/polynomial.hpp"

#include <sstream>

namespace quasirand {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }

Polynomial Polynomial::binomial_power(const Rational& a, const Rational& b, int e) {
  Polynomial out = constant(1);
  const Polynomial base({a, b});
  for (int i = 0; i < e; ++i) out = out * base;
  return out;
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (coeffs_.size() < other.coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t d = 0; d < coeffs_.size(); ++d) {
    if (coeffs_[d] == 0) continue;
    if (!first) out << (coeffs_[d] > 0 ? " + " : " - ");
    else if (coeffs_[d] < 0) out << "-";
    Rational mag = abs(coeffs_[d]);
    if (d == 0 || mag != 1) out << mag.get_str();
    if (d >= 1) out << (d == 0 || mag != 1 ? "*p" : "p");
    if (d >= 2) out << "^" << d;
    first = false;
  }
  return out.str();
}

}  // namespace quasirand
