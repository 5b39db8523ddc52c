#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace grw {

// Dense rank-R tensor with every axis of the same extent n. Spacetime
// dimension never exceeds ~6, so a flat vector is plenty.
template <int Rank>
class Tensor {
  static_assert(Rank >= 1 && Rank <= 5);

 public:
  Tensor() = default;
  explicit Tensor(int n) : n_(n), v_(total(n), 0.0) {}

  int extent() const { return n_; }
  bool empty() const { return v_.empty(); }

  template <typename... Ix>
  double& operator()(Ix... ix) {
    static_assert(sizeof...(Ix) == Rank);
    return v_[flat(ix...)];
  }
  template <typename... Ix>
  double operator()(Ix... ix) const {
    static_assert(sizeof...(Ix) == Rank);
    return v_[flat(ix...)];
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::fabs(x));
    return m;
  }

  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

 private:
  static std::size_t total(int n) {
    std::size_t t = 1;
    for (int r = 0; r < Rank; ++r) t *= static_cast<std::size_t>(n);
    return t;
  }
  template <typename... Ix>
  std::size_t flat(Ix... ix) const {
    std::array<int, Rank> idx{static_cast<int>(ix)...};
    std::size_t f = 0;
    for (int r = 0; r < Rank; ++r) f = f * n_ + static_cast<std::size_t>(idx[r]);
    return f;
  }

  int n_ = 0;
  std::vector<double> v_;
};

using Vec = Tensor<1>;
using Mat = Tensor<2>;
using Tensor3 = Tensor<3>;
using Tensor4 = Tensor<4>;
using Tensor5 = Tensor<5>;

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace grw
