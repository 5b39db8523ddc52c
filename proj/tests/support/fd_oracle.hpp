#pragma once

// Central-finite-difference curvature pipeline used as the independent oracle
// for the jet engine. Derivatives come from differencing metric values only
// (metric_at at order 0); the curvature assembly below is written out on its
// own so nothing here shares the jet derivative path under test.

#include <cmath>
#include <functional>
#include <vector>

#include "grw/spacetime.hpp"
#include "grw/tensor.hpp"

namespace grw::testing {

struct FdCurvature {
  int n = 0;
  Mat g, g_inv;
  Tensor3 dg;    // d_i g_jk
  Tensor4 d2g;   // d_i d_j g_kl
  Tensor3 gamma; // Gamma^k_ij
  Tensor4 dgamma; // d_m Gamma^k_ij
  Tensor4 riem_up;
  Tensor4 riem_down;
  Mat ricci;
  double scalar = 0.0;
  Tensor4 weyl;
};

inline Mat invert_sym(const Mat& g) {
  // Gauss-Jordan with partial pivoting; dimensions are tiny.
  const int n = g.extent();
  std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = g(i, j);
    a[i][n + i] = 1.0;
  }
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    double d = a[col][col];
    for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col];
      for (int j = 0; j < 2 * n; ++j) a[r][j] -= f * a[col][j];
    }
  }
  Mat inv(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = a[i][n + j];
  return inv;
}

inline FdCurvature fd_curvature(const SpacetimeSpec& spec, const Vec& point,
                                double h = 1e-4) {
  const int n = spec.n;
  auto metric = [&](const std::vector<double>& x) { return metric_at(spec, x, 0).g; };

  std::vector<double> base(n);
  for (int i = 0; i < n; ++i) base[i] = point(i);

  FdCurvature fd;
  fd.n = n;
  fd.g = metric(base);
  fd.g_inv = invert_sym(fd.g);
  fd.dg = Tensor3(n);
  fd.d2g = Tensor4(n);

  std::vector<Mat> plus(n), minus(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> xp = base, xm = base;
    xp[i] += h;
    xm[i] -= h;
    plus[i] = metric(xp);
    minus[i] = metric(xm);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        fd.dg(i, j, k) = 0.0;  // filled below
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        fd.dg(i, j, k) = (plus[i](j, k) - minus[i](j, k)) / (2.0 * h);

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Mat second(n);
      if (i == j) {
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            second(a, b) = (plus[i](a, b) - 2.0 * fd.g(a, b) + minus[i](a, b)) / (h * h);
      } else {
        std::vector<double> xpp = base, xpm = base, xmp = base, xmm = base;
        xpp[i] += h; xpp[j] += h;
        xpm[i] += h; xpm[j] -= h;
        xmp[i] -= h; xmp[j] += h;
        xmm[i] -= h; xmm[j] -= h;
        Mat gpp = metric(xpp), gpm = metric(xpm), gmp = metric(xmp), gmm = metric(xmm);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            second(a, b) = (gpp(a, b) - gpm(a, b) - gmp(a, b) + gmm(a, b)) / (4.0 * h * h);
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          fd.d2g(i, j, a, b) = second(a, b);
          fd.d2g(j, i, a, b) = second(a, b);
        }
    }

  // Christoffels and their partials assembled from the differenced metric.
  fd.gamma = Tensor3(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l)
          acc += fd.g_inv(k, l) * (fd.dg(i, j, l) + fd.dg(j, i, l) - fd.dg(l, i, j));
        fd.gamma(k, i, j) = 0.5 * acc;
      }

  // d_m g^kl = -g^ka (d_m g_ab) g^bl
  Tensor3 dginv(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) acc += fd.g_inv(k, a) * fd.dg(m, a, b) * fd.g_inv(b, l);
        dginv(m, k, l) = -acc;
      }

  fd.dgamma = Tensor4(n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l) {
            acc += dginv(m, k, l) * (fd.dg(i, j, l) + fd.dg(j, i, l) - fd.dg(l, i, j));
            acc += fd.g_inv(k, l) *
                   (fd.d2g(m, i, j, l) + fd.d2g(m, j, i, l) - fd.d2g(m, l, i, j));
          }
          fd.dgamma(m, k, i, j) = 0.5 * acc;
        }

  fd.riem_up = Tensor4(n);
  fd.riem_down = Tensor4(n);
  fd.ricci = Mat(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = fd.dgamma(j, l, i, k) - fd.dgamma(k, l, i, j);
          for (int m = 0; m < n; ++m)
            acc += fd.gamma(l, j, m) * fd.gamma(m, i, k) - fd.gamma(l, k, m) * fd.gamma(m, i, j);
          fd.riem_up(l, i, j, k) = acc;
        }
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double acc = 0.0;
          for (int m = 0; m < n; ++m) acc += fd.g(l, m) * fd.riem_up(m, i, j, k);
          fd.riem_down(l, i, j, k) = acc;
        }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += fd.riem_up(j, i, j, k);
      fd.ricci(i, k) = acc;
    }
  fd.scalar = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) fd.scalar += fd.g_inv(i, k) * fd.ricci(i, k);

  fd.weyl = Tensor4(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = fd.riem_down(l, i, j, k);
          v -= (fd.g(l, j) * fd.ricci(k, i) - fd.g(l, k) * fd.ricci(j, i) -
                fd.g(i, j) * fd.ricci(k, l) + fd.g(i, k) * fd.ricci(j, l)) /
               (n - 2);
          v += fd.scalar * (fd.g(l, j) * fd.g(k, i) - fd.g(l, k) * fd.g(j, i)) /
               ((n - 1.0) * (n - 2.0));
          fd.weyl(l, i, j, k) = v;
        }
  return fd;
}

// Central differences of a scalar callable; used by the jet unit tests.
inline double fd_d1(const std::function<double(std::vector<double>)>& f,
                    std::vector<double> x, int i, double h) {
  std::vector<double> xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (f(xp) - f(xm)) / (2.0 * h);
}

inline double fd_d2(const std::function<double(std::vector<double>)>& f,
                    std::vector<double> x, int i, int j, double h) {
  if (i == j) {
    std::vector<double> xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    return (f(xp) - 2.0 * f(x) + f(xm)) / (h * h);
  }
  std::vector<double> xpp = x, xpm = x, xmp = x, xmm = x;
  xpp[i] += h; xpp[j] += h;
  xpm[i] += h; xpm[j] -= h;
  xmp[i] -= h; xmp[j] += h;
  xmm[i] -= h; xmm[j] -= h;
  return (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
}

inline double fd_d3(const std::function<double(std::vector<double>)>& f,
                    std::vector<double> x, int i, int j, int k, double h) {
  auto d2 = [&](std::vector<double> y) { return fd_d2(f, std::move(y), j, k, h); };
  std::vector<double> xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  return (d2(xp) - d2(xm)) / (2.0 * h);
}

}  // namespace grw::testing
