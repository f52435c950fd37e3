#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "polyreach/linalg.hpp"

/* Shared helpers for the unit tests: seeded random draws and dense compares.
 * Raw engine output is mapped to doubles directly so draws do not depend on
 * the standard library's distribution implementations. */
namespace test_util {

inline double unit_draw(std::mt19937_64& eng) {  // uniform in (0, 1)
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double sym_draw(std::mt19937_64& eng) {  // uniform in (-1, 1)
  return 2.0 * unit_draw(eng) - 1.0;
}

inline polyreach::Vec rand_vec(std::mt19937_64& eng, int n) {
  polyreach::Vec v(static_cast<std::size_t>(n));
  for (double& x : v) x = sym_draw(eng);
  return v;
}

inline polyreach::Matrix rand_matrix(std::mt19937_64& eng, int rows, int cols) {
  polyreach::Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = sym_draw(eng);
  return m;
}

/* Largest absolute row sum: the induced infinity norm. */
inline double mat_inf_norm(const polyreach::Matrix& m) {
  double worst = 0;
  for (int r = 0; r < m.rows(); ++r) {
    double s = 0;
    for (int c = 0; c < m.cols(); ++c) s += std::abs(m(r, c));
    worst = std::max(worst, s);
  }
  return worst;
}

/* Random square matrix rescaled so its infinity norm does not exceed cap. */
inline polyreach::Matrix bounded_matrix(std::mt19937_64& eng, int n, double cap) {
  polyreach::Matrix m = rand_matrix(eng, n, n);
  const double norm = mat_inf_norm(m);
  if (norm > cap) m = m * (cap / norm);
  return m;
}

inline double max_abs_diff(const polyreach::Matrix& a, const polyreach::Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
  return worst;
}

inline double max_abs_diff(const polyreach::Vec& a, const polyreach::Vec& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/* Least-squares line fit of y over x; returns (slope, r_squared). */
struct LineFit {
  double slope = 0;
  double r_squared = 0;
};
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pred = my + f.slope * (x[i] - mx);
    ss_res += (y[i] - pred) * (y[i] - pred);
  }
  f.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

}  // namespace test_util
