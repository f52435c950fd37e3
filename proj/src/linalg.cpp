#include "polyreach/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

void check_finite(const std::vector<double>& data, const char* what) {
  for (double x : data)
    if (!std::isfinite(x)) throw InvalidInput(std::string(what) + ": entries must be finite");
}

}  // namespace

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const Vec& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double two_norm(const Vec& v) { return std::sqrt(dot(v, v)); }

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec add_scaled(const Vec& a, double s, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
  return r;
}

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require(rows >= 0 && cols >= 0, "matrix dimensions must be non-negative");
  data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, std::vector<double> data) : rows_(rows), cols_(cols) {
  require(rows >= 0 && cols >= 0, "matrix dimensions must be non-negative");
  require(data.size() == static_cast<std::size_t>(rows) * cols,
          "matrix data size does not match dimensions");
  check_finite(data, "matrix");
  data_ = std::move(data);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows, int cols) {
  Matrix m(static_cast<int>(rows.size()), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == static_cast<std::size_t>(cols), "row length mismatch");
    for (int c = 0; c < cols; ++c) m(static_cast<int>(r), c) = rows[r][c];
  }
  check_finite(m.data_, "matrix");
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix Matrix::row_slice(int first, int last) const {
  require(0 <= first && first <= last && last <= rows_, "row slice out of range");
  Matrix s(last - first, cols_);
  for (int r = first; r < last; ++r)
    for (int c = 0; c < cols_; ++c) s(r - first, c) = (*this)(r, c);
  return s;
}

double Matrix::max_abs() const {
  double m = 0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matrix product dimension mismatch");
  Matrix r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum dimension mismatch");
  Matrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix difference dimension mismatch");
  Matrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

Matrix operator*(const Matrix& a, double s) {
  Matrix r = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) *= s;
  return r;
}

Vec operator*(const Matrix& a, const Vec& x) {
  require(x.size() == static_cast<std::size_t>(a.cols()), "matrix-vector dimension mismatch");
  Vec y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    double s = 0;
    for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

namespace {

double matrix_inf_norm(const Matrix& m) {
  double best = 0;
  for (int i = 0; i < m.rows(); ++i) {
    double row = 0;
    for (int j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
    best = std::max(best, row);
  }
  return best;
}

}  // namespace

Matrix state_transition(const Matrix& m, double dt) {
  require(m.rows() == m.cols(), "state transition needs a square matrix");
  require(std::isfinite(dt), "dt must be finite");
  const int n = m.rows();
  Matrix x = m * dt;

  int squarings = 0;
  double norm = matrix_inf_norm(x);
  while (norm > 0.5 && squarings < 64) {
    norm /= 2.0;
    ++squarings;
  }
  x = x * std::ldexp(1.0, -squarings);

  Matrix result = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (int k = 1; k <= 32; ++k) {
    term = term * x * (1.0 / k);
    result = result + term;
    if (matrix_inf_norm(term) <= 1e-18 * matrix_inf_norm(result)) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

std::pair<Matrix, Matrix> zoh_pair(const Matrix& m, double dt) {
  require(m.rows() == m.cols(), "zoh pair needs a square matrix");
  const int n = m.rows();
  Matrix aug(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1.0;
  }
  Matrix e = state_transition(aug, dt);
  Matrix ad(n, n), bd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ad(i, j) = e(i, j);
      bd(i, j) = e(i, n + j);
    }
  return {ad, bd};
}

Svd svd(const Matrix& a) {
  const int m = a.rows(), n = a.cols();
  Matrix w = a;
  Matrix v = Matrix::identity(n);

  // One-sided Jacobi: rotate column pairs until all are mutually orthogonal.
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (int p = 0; p + 1 < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0, gamma = 0;
        for (int r = 0; r < m; ++r) {
          alpha += w(r, p) * w(r, p);
          beta += w(r, q) * w(r, q);
          gamma += w(r, p) * w(r, q);
        }
        if (std::abs(gamma) <= 1e-300) continue;
        if (std::abs(gamma) <= 1e-16 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int r = 0; r < m; ++r) {
          const double wp = w(r, p), wq = w(r, q);
          w(r, p) = c * wp - s * wq;
          w(r, q) = s * wp + c * wq;
        }
        for (int r = 0; r < n; ++r) {
          const double vp = v(r, p), vq = v(r, q);
          v(r, p) = c * vp - s * vq;
          v(r, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vec sigma(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int r = 0; r < m; ++r) s += w(r, j) * w(r, j);
    sigma[j] = std::sqrt(s);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return sigma[i] > sigma[j]; });

  Svd out;
  out.sigma.resize(n);
  out.u = Matrix(m, n);
  out.v = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    out.sigma[j] = sigma[src];
    for (int r = 0; r < n; ++r) out.v(r, j) = v(r, src);
    if (sigma[src] > 0) {
      for (int r = 0; r < m; ++r) out.u(r, j) = w(r, src) / sigma[src];
    }
  }
  return out;
}

Matrix kernel_projector(const Matrix& rows, double rank_tol) {
  const int n = rows.cols();
  Matrix p = Matrix::identity(n);
  if (rows.rows() == 0) return p;
  const Svd d = svd(rows);
  const double cut = rank_tol * (d.sigma.empty() ? 0.0 : d.sigma[0]);
  for (std::size_t k = 0; k < d.sigma.size(); ++k) {
    if (d.sigma[k] <= cut) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) -= d.v(i, k) * d.v(j, k);
  }
  return p;
}

namespace {

// pinv(rows) * b via the SVD, dropping directions below the rank cut.
Vec pinv_apply(const Matrix& rows, const Vec& b, double rank_tol) {
  const int n = rows.cols();
  Vec x(n, 0.0);
  if (rows.rows() == 0) return x;
  const Svd d = svd(rows);
  const double cut = rank_tol * (d.sigma.empty() ? 0.0 : d.sigma[0]);
  for (std::size_t k = 0; k < d.sigma.size(); ++k) {
    if (d.sigma[k] <= cut) continue;
    double ub = 0;
    for (int r = 0; r < rows.rows(); ++r) ub += d.u(r, static_cast<int>(k)) * b[r];
    const double coef = ub / d.sigma[k];
    for (int i = 0; i < n; ++i) x[i] += coef * d.v(i, static_cast<int>(k));
  }
  return x;
}

}  // namespace

Vec min_norm_solution(const Matrix& rows, const Vec& b, double rank_tol, double consistency_tol) {
  require(b.size() == static_cast<std::size_t>(rows.rows()), "right-hand side size mismatch");
  Vec x = pinv_apply(rows, b, rank_tol);
  const Vec residual = sub(rows * x, b);
  const double scale = std::max(1.0, inf_norm(b));
  if (inf_norm(residual) > consistency_tol * scale)
    throw InvalidInput("inconsistent linear system: residual " + std::to_string(inf_norm(residual)));
  return x;
}

Vec project_affine(const Matrix& rows, const Vec& b, const Vec& x, double rank_tol) {
  require(x.size() == static_cast<std::size_t>(rows.cols()), "projection point size mismatch");
  if (rows.rows() == 0) return x;
  const Vec residual = sub(rows * x, b);
  const Vec correction = pinv_apply(rows, residual, rank_tol);
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - correction[i];
  return y;
}

Vec solve_dense(const Matrix& a, const Vec& b) {
  require(a.rows() == a.cols(), "dense solve needs a square matrix");
  require(b.size() == static_cast<std::size_t>(a.rows()), "dense solve size mismatch");
  const int n = a.rows();
  Matrix lu = a;
  Vec x = b;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const double tiny = 1e-12 * std::max(1.0, a.max_abs());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (std::abs(lu(piv, k)) < tiny) throw InvalidInput("singular matrix in dense solve");
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      std::swap(x[k], x[piv]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      lu(i, k) = 0;
      if (f == 0.0) continue;
      for (int j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      x[i] -= f * x[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

Matrix inverse(const Matrix& a) {
  const int n = a.rows();
  Matrix inv(n, n);
  for (int c = 0; c < n; ++c) {
    Vec e(n, 0.0);
    e[c] = 1.0;
    const Vec col = solve_dense(a, e);
    for (int r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

namespace {

/* Two-phase tableau simplex.  Free variables are split as x = u - v, each
 * constraint row gets a slack, and rows with negative right-hand sides get an
 * artificial variable for phase one.  Bland's rule (lowest eligible index in,
 * lowest basis label out) rules out cycling. */
struct SimplexTableau {
  int m = 0;
  int total = 0;
  int artificial_start = 0;
  std::vector<Vec> a;
  Vec rhs;
  std::vector<int> basis;

  static constexpr double eps = 1e-9;

  void pivot(int row, int col) {
    const double p = a[row][col];
    for (int j = 0; j < total; ++j) a[row][j] /= p;
    rhs[row] /= p;
    a[row][col] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      const double f = a[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < total; ++j) a[i][j] -= f * a[row][j];
      rhs[i] -= f * rhs[row];
      a[i][col] = 0.0;
    }
    basis[row] = col;
  }

  // Minimize <cost, vars>; returns the optimum.  allow_artificial toggles
  // whether artificial columns may enter (phase one only).
  double minimize(const Vec& cost, bool allow_artificial) {
    Vec reduced = cost;
    double value = 0;
    for (int i = 0; i < m; ++i) {
      const double cb = cost[basis[i]];
      if (cb == 0.0) continue;
      for (int j = 0; j < total; ++j) reduced[j] -= cb * a[i][j];
      value -= cb * rhs[i];
    }
    const int limit = allow_artificial ? total : artificial_start;
    for (;;) {
      int enter = -1;
      for (int j = 0; j < limit; ++j)
        if (reduced[j] < -eps) {
          enter = j;
          break;
        }
      if (enter < 0) return -value;
      int leave = -1;
      double best_ratio = 0;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] <= eps) continue;
        const double ratio = rhs[i] / a[i][enter];
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw InvalidInput("linear program is unbounded");
      const double f = reduced[enter];
      pivot(leave, enter);
      for (int j = 0; j < total; ++j) reduced[j] -= f * a[leave][j];
      value -= f * rhs[leave];
      reduced[enter] = 0.0;
    }
  }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
  const int n = static_cast<int>(p.objective.size());
  const int m = static_cast<int>(p.normals.size());
  require(n >= 1, "lp needs at least one variable");
  require(p.offsets.size() == static_cast<std::size_t>(m), "lp offsets size mismatch");
  for (const Vec& row : p.normals)
    require(row.size() == static_cast<std::size_t>(n), "lp constraint dimension mismatch");

  Vec c = p.objective;
  if (p.sense == LpProblem::Sense::minimize)
    for (double& x : c) x = -x;

  SimplexTableau t;
  t.m = m;
  const int split = 2 * n;
  int artificials = 0;
  for (int r = 0; r < m; ++r)
    if (p.offsets[r] < 0) ++artificials;
  t.artificial_start = split + m;
  t.total = split + m + artificials;
  t.a.assign(m, Vec(t.total, 0.0));
  t.rhs.assign(m, 0.0);
  t.basis.assign(m, -1);

  int next_artificial = t.artificial_start;
  for (int r = 0; r < m; ++r) {
    const double sign = p.offsets[r] < 0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      t.a[r][j] = sign * p.normals[r][j];
      t.a[r][n + j] = -sign * p.normals[r][j];
    }
    t.a[r][split + r] = sign;
    t.rhs[r] = sign * p.offsets[r];
    if (sign > 0) {
      t.basis[r] = split + r;
    } else {
      t.a[r][next_artificial] = 1.0;
      t.basis[r] = next_artificial;
      ++next_artificial;
    }
  }

  if (artificials > 0) {
    Vec phase1(t.total, 0.0);
    for (int j = t.artificial_start; j < t.total; ++j) phase1[j] = 1.0;
    const double infeasibility = t.minimize(phase1, true);
    if (infeasibility > 1e-7) throw InvalidInput("linear program is infeasible");
  }

  Vec phase2(t.total, 0.0);
  for (int j = 0; j < n; ++j) {
    phase2[j] = -c[j];
    phase2[n + j] = c[j];
  }
  t.minimize(phase2, false);

  Vec split_values(t.total, 0.0);
  for (int r = 0; r < m; ++r) split_values[t.basis[r]] = t.rhs[r];
  LpSolution out;
  out.point.resize(n);
  for (int j = 0; j < n; ++j) out.point[j] = split_values[j] - split_values[n + j];
  out.value = dot(p.objective, out.point);
  return out;
}

}  // namespace polyreach
