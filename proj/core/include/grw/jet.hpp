#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace grw {

// Shared index bookkeeping for truncated multivariate Taylor expansions:
// enumeration of all multi-indices of total degree <= order over n_vars
// variables (graded lexicographic), lookup tables for sums of multi-indices,
// and the factorial alpha! of each entry. Layouts are interned; Jet instances
// hold a pointer to one.
class JetLayout {
 public:
  static constexpr int kMaxVars = 8;
  static constexpr int kMaxOrder = 3;

  static const JetLayout& get(int n_vars, int order);

  int n_vars() const { return n_vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(exps_.size()); }

  // Exponent vector of entry i (only the first n_vars slots are meaningful).
  const std::array<std::uint8_t, kMaxVars>& exponents(int i) const { return exps_[i]; }
  int degree(int i) const { return degree_[i]; }
  double factorial(int i) const { return factorial_[i]; }

  // Entry index for the sum of the multi-indices of entries i and j, or -1
  // when the sum exceeds the truncation order.
  int product_index(int i, int j) const { return prod_[static_cast<std::size_t>(i) * exps_.size() + j]; }

  // Entry index of a given exponent vector, or -1 if out of range.
  int index_of(std::span<const int> alpha) const;

 private:
  JetLayout(int n_vars, int order);

  int n_vars_;
  int order_;
  std::vector<std::array<std::uint8_t, kMaxVars>> exps_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<int> packed_to_index_;  // keyed by base-4 packing of exponents
  std::vector<int> prod_;
};

// Value plus all partial derivatives through `order`, stored as
// Taylor-normalized coefficients c_alpha = d^alpha f / alpha!. Multiplication
// is then plain truncated polynomial convolution. Immutable in spirit:
// arithmetic returns new jets.
class Jet {
 public:
  Jet() : layout_(nullptr) {}
  explicit Jet(const JetLayout& layout) : layout_(&layout), c_(layout.size(), 0.0) {}

  static Jet constant(const JetLayout& layout, double v);
  // Seed jet for coordinate `var`: value v, first derivative 1 in slot var.
  static Jet variable(const JetLayout& layout, int var, double v);

  const JetLayout& layout() const { return *layout_; }
  int order() const { return layout_->order(); }
  int n_vars() const { return layout_->n_vars(); }

  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }
  const std::vector<double>& coeffs() const { return c_; }

  // Partial derivative d^alpha f (coefficient times alpha!).
  double derivative(std::span<const int> alpha) const;
  // First partial in variable v; requires order >= 1.
  double d1(int v) const;
  // Second partial d_v d_w; requires order >= 2.
  double d2(int v, int w) const;
  // Third partial d_u d_v d_w; requires order >= 3.
  double d3(int u, int v, int w) const;

  // Same expansion truncated to a lower order (coefficients of degree <= k).
  Jet truncated(int order) const;
  // Derivative in variable v as a jet of order-1 lower.
  Jet partial(int v) const;

  bool all_finite() const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }
  friend Jet operator/(double s, const Jet& b);

  // Composition with a univariate analytic function given its Taylor
  // coefficients a_k = g^(k)(value())/k!, k = 0..order.
  Jet compose(std::span<const double> taylor) const;

 private:
  const JetLayout* layout_;
  std::vector<double> c_;
};

Jet reciprocal(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);    // requires value() > 0
Jet sqrt(const Jet& u);   // requires value() > 0
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet sinh(const Jet& u);
Jet cosh(const Jet& u);
Jet pow(const Jet& u, long long e);
Jet pow(const Jet& u, double e);  // non-integer exponent requires value() > 0

}  // namespace grw
