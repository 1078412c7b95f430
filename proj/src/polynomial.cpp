#include "toric/polynomial.hpp"

#include <algorithm>

namespace toric {

Polynomial::Polynomial(int degree)
    : degree_(degree), c_(static_cast<std::size_t>((degree + 1) * (degree + 2) / 2), 0.0) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "negative polynomial degree");
}

Polynomial Polynomial::constant(double c) {
  Polynomial p(0);
  p.c_[0] = c;
  return p;
}

Polynomial Polynomial::monomial(int i, int j, double c) {
  Polynomial p(i + j);
  p.set_coeff(i, j, c);
  return p;
}

Polynomial Polynomial::affine(const AffineFunction& f) {
  Polynomial p(1);
  p.set_coeff(0, 0, f.b);
  p.set_coeff(1, 0, f.a1);
  p.set_coeff(0, 1, f.a2);
  return p;
}

double Polynomial::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > degree_) return 0.0;
  return c_[index(i, j)];
}

void Polynomial::set_coeff(int i, int j, double c) {
  if (i < 0 || j < 0 || i + j > degree_)
    throw Error(ErrorKind::InvalidArgument, "monomial exceeds polynomial degree");
  c_[index(i, j)] = c;
}

void Polynomial::add_coeff(int i, int j, double c) { set_coeff(i, j, coeff(i, j) + c); }

double Polynomial::operator()(const Point2& x) const {
  // Horner in x2 for each power of x1, then Horner in x1.
  double result = 0.0;
  for (int i = degree_; i >= 0; --i) {
    double inner = 0.0;
    for (int j = degree_ - i; j >= 0; --j) inner = inner * x.x2 + c_[index(i, j)];
    result = result * x.x1 + inner;
  }
  return result;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(std::max(degree_, o.degree_));
  for (int d = 0; d <= r.degree_; ++d)
    for (int j = 0; j <= d; ++j) r.c_[index(d - j, j)] = coeff(d - j, j) + o.coeff(d - j, j);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(double s) const {
  Polynomial r = *this;
  for (double& v : r.c_) v *= s;
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(degree_ + o.degree_);
  for (int d1 = 0; d1 <= degree_; ++d1)
    for (int j1 = 0; j1 <= d1; ++j1) {
      const double a = c_[index(d1 - j1, j1)];
      if (a == 0.0) continue;
      for (int d2 = 0; d2 <= o.degree_; ++d2)
        for (int j2 = 0; j2 <= d2; ++j2) {
          const double b = o.c_[index(d2 - j2, j2)];
          if (b == 0.0) continue;
          r.c_[index(d1 - j1 + d2 - j2, j1 + j2)] += a * b;
        }
    }
  return r;
}

Polynomial Polynomial::compose(const AffineFunction& x1_of_st,
                               const AffineFunction& x2_of_st) const {
  const Polynomial X1 = affine(x1_of_st);
  const Polynomial X2 = affine(x2_of_st);
  std::vector<Polynomial> pow1{constant(1.0)}, pow2{constant(1.0)};
  for (int k = 1; k <= degree_; ++k) {
    pow1.push_back(pow1.back() * X1);
    pow2.push_back(pow2.back() * X2);
  }
  Polynomial r(degree_);
  for (int d = 0; d <= degree_; ++d)
    for (int j = 0; j <= d; ++j) {
      const double c = c_[index(d - j, j)];
      if (c == 0.0) continue;
      r = r + pow1[d - j] * pow2[j] * c;
    }
  return r;
}

}  // namespace toric
