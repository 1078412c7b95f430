#pragma once

#include <cstddef>
#include <vector>

#include "toric/common.hpp"

namespace toric {

/// Dense bivariate polynomial sum c_ij x1^i x2^j with i + j <= degree.
class Polynomial {
 public:
  Polynomial() : Polynomial(0) {}
  explicit Polynomial(int degree);

  static Polynomial constant(double c);
  static Polynomial monomial(int i, int j, double c = 1.0);
  static Polynomial affine(const AffineFunction& f);

  int degree() const { return degree_; }
  double coeff(int i, int j) const;
  void set_coeff(int i, int j, double c);
  void add_coeff(int i, int j, double c);

  double operator()(const Point2& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  /// p(X1(s,t), X2(s,t)) for affine X1, X2, as a polynomial in (s, t).
  Polynomial compose(const AffineFunction& x1_of_st, const AffineFunction& x2_of_st) const;

 private:
  static std::size_t index(int i, int j) {
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
  }

  int degree_;
  std::vector<double> c_;
};

}  // namespace toric
