#include "grw/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "grw/errors.hpp"

namespace grw {

namespace {

int pack_exponents(const std::array<std::uint8_t, JetLayout::kMaxVars>& e, int n_vars) {
  int key = 0;
  for (int v = n_vars - 1; v >= 0; --v) key = key * 4 + e[v];
  return key;
}

}  // namespace

JetLayout::JetLayout(int n_vars, int order) : n_vars_(n_vars), order_(order) {
  if (n_vars < 1 || n_vars > kMaxVars)
    throw ValidationError("jet layout: variable count out of range");
  if (order < 0 || order > kMaxOrder)
    throw ValidationError("jet layout: order out of range");

  // Graded enumeration: all exponent vectors of each total degree in turn.
  std::array<std::uint8_t, kMaxVars> e{};
  for (int deg = 0; deg <= order; ++deg) {
    // Iterate exponent vectors with sum == deg, lexicographic in e.
    e.fill(0);
    e[0] = static_cast<std::uint8_t>(deg);
    while (true) {
      exps_.push_back(e);
      degree_.push_back(deg);
      double fact = 1.0;
      for (int v = 0; v < n_vars; ++v)
        for (int k = 2; k <= e[v]; ++k) fact *= k;
      factorial_.push_back(fact);
      // Next composition of deg into n_vars parts.
      int i = 0;
      while (i < n_vars - 1 && e[i] == 0) ++i;
      if (i == n_vars - 1) break;
      int head = e[i];
      e[i] = 0;
      e[i + 1] += 1;
      e[0] = static_cast<std::uint8_t>(head - 1);
    }
    if (deg == 0 && order == 0) break;
  }

  int packed_size = 1;
  for (int v = 0; v < n_vars; ++v) packed_size *= 4;
  packed_to_index_.assign(packed_size, -1);
  for (int i = 0; i < size(); ++i) packed_to_index_[pack_exponents(exps_[i], n_vars)] = i;

  prod_.assign(static_cast<std::size_t>(size()) * size(), -1);
  for (int i = 0; i < size(); ++i) {
    for (int j = 0; j < size(); ++j) {
      if (degree_[i] + degree_[j] > order) continue;
      std::array<std::uint8_t, kMaxVars> s{};
      for (int v = 0; v < n_vars; ++v) s[v] = static_cast<std::uint8_t>(exps_[i][v] + exps_[j][v]);
      prod_[static_cast<std::size_t>(i) * size() + j] = packed_to_index_[pack_exponents(s, n_vars)];
    }
  }
}

const JetLayout& JetLayout::get(int n_vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, const JetLayout*> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n_vars, order);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, new JetLayout(n_vars, order)).first;
  return *it->second;
}

int JetLayout::index_of(std::span<const int> alpha) const {
  std::array<std::uint8_t, kMaxVars> e{};
  int deg = 0;
  for (std::size_t v = 0; v < alpha.size(); ++v) {
    if (alpha[v] < 0) return -1;
    deg += alpha[v];
    if (static_cast<int>(v) >= n_vars_ && alpha[v] != 0) return -1;
    if (static_cast<int>(v) < n_vars_) e[v] = static_cast<std::uint8_t>(alpha[v]);
  }
  if (deg > order_) return -1;
  return packed_to_index_[pack_exponents(e, n_vars_)];
}

Jet Jet::constant(const JetLayout& layout, double v) {
  Jet j(layout);
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(const JetLayout& layout, int var, double v) {
  if (var < 0 || var >= layout.n_vars())
    throw ValidationError("jet variable index out of range");
  Jet j(layout);
  j.c_[0] = v;
  if (layout.order() >= 1) {
    std::array<int, JetLayout::kMaxVars> alpha{};
    alpha[var] = 1;
    j.c_[layout.index_of(std::span<const int>(alpha.data(), layout.n_vars()))] = 1.0;
  }
  return j;
}

double Jet::derivative(std::span<const int> alpha) const {
  int i = layout_->index_of(alpha);
  if (i < 0) throw ValidationError("jet derivative: multi-index outside layout");
  return c_[i] * layout_->factorial(i);
}

double Jet::d1(int v) const {
  std::array<int, JetLayout::kMaxVars> a{};
  a[v] = 1;
  return derivative(std::span<const int>(a.data(), layout_->n_vars()));
}

double Jet::d2(int v, int w) const {
  std::array<int, JetLayout::kMaxVars> a{};
  a[v] += 1;
  a[w] += 1;
  return derivative(std::span<const int>(a.data(), layout_->n_vars()));
}

double Jet::d3(int u, int v, int w) const {
  std::array<int, JetLayout::kMaxVars> a{};
  a[u] += 1;
  a[v] += 1;
  a[w] += 1;
  return derivative(std::span<const int>(a.data(), layout_->n_vars()));
}

Jet Jet::truncated(int order) const {
  const JetLayout& lo = JetLayout::get(layout_->n_vars(), order);
  Jet out(lo);
  for (int i = 0; i < lo.size(); ++i) out.c_[i] = c_[i];  // same graded prefix
  return out;
}

Jet Jet::partial(int v) const {
  if (layout_->order() < 1) throw ValidationError("jet partial: order already 0");
  const JetLayout& lo = JetLayout::get(layout_->n_vars(), layout_->order() - 1);
  Jet out(lo);
  for (int i = 0; i < lo.size(); ++i) {
    std::array<int, JetLayout::kMaxVars> a{};
    const auto& e = lo.exponents(i);
    for (int k = 0; k < lo.n_vars(); ++k) a[k] = e[k];
    a[v] += 1;
    int src = layout_->index_of(std::span<const int>(a.data(), lo.n_vars()));
    out.c_[i] = c_[src] * (e[v] + 1);
  }
  return out;
}

bool Jet::all_finite() const {
  for (double x : c_)
    if (!std::isfinite(x)) return false;
  return true;
}

Jet Jet::operator-() const {
  Jet out(*layout_);
  for (int i = 0; i < layout_->size(); ++i) out.c_[i] = -c_[i];
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  for (int i = 0; i < layout_->size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  for (int i = 0; i < layout_->size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout& L = a.layout();
  Jet out(L);
  const int sz = L.size();
  for (int i = 0; i < sz; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    for (int j = 0; j < sz; ++j) {
      int k = L.product_index(i, j);
      if (k >= 0) out.c_[k] += ai * b.c_[j];
    }
  }
  return out;
}

Jet Jet::compose(std::span<const double> taylor) const {
  // Horner evaluation in the nilpotent part w = *this - value().
  const JetLayout& L = *layout_;
  Jet w = *this;
  w.c_[0] = 0.0;
  int ord = L.order();
  Jet out = Jet::constant(L, taylor[ord]);
  for (int k = ord - 1; k >= 0; --k) {
    out = out * w;
    out.c_[0] += taylor[k];
  }
  return out;
}

Jet reciprocal(const Jet& u) {
  double u0 = u.value();
  if (u0 == 0.0) throw EvalError("division by zero");
  std::array<double, JetLayout::kMaxOrder + 1> t{};
  double p = 1.0 / u0;
  for (int k = 0; k <= u.order(); ++k) {
    t[k] = (k % 2 == 0) ? p : -p;
    p /= u0;
  }
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double s, const Jet& b) { return reciprocal(b) *= s; }

Jet exp(const Jet& u) {
  double e0 = std::exp(u.value());
  std::array<double, 4> t{e0, e0, e0 / 2.0, e0 / 6.0};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet log(const Jet& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw EvalError("log of non-positive value");
  std::array<double, 4> t{std::log(u0), 1.0 / u0, -1.0 / (2.0 * u0 * u0),
                          1.0 / (3.0 * u0 * u0 * u0)};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet sqrt(const Jet& u) {
  double u0 = u.value();
  if (u0 <= 0.0) throw EvalError("sqrt of non-positive value");
  double r = std::sqrt(u0);
  std::array<double, 4> t{r, 0.5 / r, -1.0 / (8.0 * u0 * r), 1.0 / (16.0 * u0 * u0 * r)};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet sin(const Jet& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  std::array<double, 4> t{s, c, -s / 2.0, -c / 6.0};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet cos(const Jet& u) {
  double s = std::sin(u.value()), c = std::cos(u.value());
  std::array<double, 4> t{c, -s, -c / 2.0, s / 6.0};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet sinh(const Jet& u) {
  double s = std::sinh(u.value()), c = std::cosh(u.value());
  std::array<double, 4> t{s, c, s / 2.0, c / 6.0};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet cosh(const Jet& u) {
  double s = std::sinh(u.value()), c = std::cosh(u.value());
  std::array<double, 4> t{c, s, c / 2.0, s / 6.0};
  return u.compose(std::span<const double>(t.data(), u.order() + 1));
}

Jet pow(const Jet& u, long long e) {
  if (e == 0) return Jet::constant(u.layout(), 1.0);
  if (e < 0) return reciprocal(pow(u, -e));
  Jet acc = Jet::constant(u.layout(), 1.0);
  Jet base = u;
  long long k = e;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return acc;
}

Jet pow(const Jet& u, double e) {
  double ip;
  if (std::modf(e, &ip) == 0.0 && std::fabs(e) <= 1e9)
    return pow(u, static_cast<long long>(ip));
  if (u.value() <= 0.0)
    throw EvalError("non-integer power of non-positive base");
  return exp(log(u) *= e);
}

}  // namespace grw
