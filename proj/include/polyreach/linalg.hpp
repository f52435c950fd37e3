#pragma once

#include <utility>
#include <vector>

namespace polyreach {

using Vec = std::vector<double>;

/* Vector helpers.  Sizes must match; checked with cheap asserts only where the
 * mismatch would be silent. */
double dot(const Vec& a, const Vec& b);
double inf_norm(const Vec& v);
double two_norm(const Vec& v);
Vec sub(const Vec& a, const Vec& b);
Vec add_scaled(const Vec& a, double s, const Vec& b);  // a + s*b

/* Dense row-major matrix at desk scale (dimensions in the tens).  Entries are
 * validated to be finite when constructed from caller data.  Zero-row
 * matrices are allowed so an agent can hold an empty equation block. */
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-filled
  Matrix(int rows, int cols, std::vector<double> data);
  static Matrix identity(int n);
  static Matrix from_rows(const std::vector<Vec>& rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }

  Matrix transpose() const;
  Matrix row_slice(int first, int last) const;  // rows [first, last)
  double max_abs() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(const Matrix& a, double s);
Vec operator*(const Matrix& a, const Vec& x);

/* Discrete state-transition matrix exp(m*dt) by scaling and squaring with a
 * truncated series core; the argument is scaled until its norm is at most
 * one half, so the series converges at machine precision. */
Matrix state_transition(const Matrix& m, double dt);

/* Zero-order-hold pair (Ad, Bd) for x' = m x + u with u held constant over a
 * step: Ad = exp(m dt), Bd = integral of exp(m s) ds over [0, dt].  Computed
 * from one exponential of the augmented matrix [[m, I], [0, 0]]. */
std::pair<Matrix, Matrix> zoh_pair(const Matrix& m, double dt);

/* Thin SVD a = u * diag(sigma) * v^T by one-sided Jacobi rotations; sigma is
 * sorted descending, ties keep column order, so results are deterministic. */
struct Svd {
  Matrix u;   // a.rows() x a.cols(), orthonormal columns where sigma > 0
  Vec sigma;  // a.cols() values, descending
  Matrix v;   // a.cols() x a.cols(), orthogonal
};
Svd svd(const Matrix& a);

/* Orthogonal projector onto the null space of `rows` (I - pinv(rows)*rows).
 * Singular values below rank_tol * sigma_max are treated as zero.  A matrix
 * with no rows projects onto everything: the identity. */
Matrix kernel_projector(const Matrix& rows, double rank_tol = 1e-10);

/* Minimum-norm x with rows * x = b.  Throws InvalidInput when the system is
 * inconsistent (residual above consistency_tol, absolute at unit scale). */
Vec min_norm_solution(const Matrix& rows, const Vec& b, double rank_tol = 1e-10,
                      double consistency_tol = 1e-10);

/* Orthogonal projection of x onto the affine solution set {y : rows*y = b}.
 * Used to re-seed iterations from a nearby previous solution. */
Vec project_affine(const Matrix& rows, const Vec& b, const Vec& x, double rank_tol = 1e-10);

/* Dense square solve / inverse by LU with partial pivoting. */
Vec solve_dense(const Matrix& a, const Vec& b);
Matrix inverse(const Matrix& a);

/* Linear program over an H-polytope: optimize <objective, x> subject to
 * <normals[r], x> <= offsets[r], x free.  Solved by two-phase dense simplex
 * with Bland's rule (free variables split into positive parts).  Throws
 * InvalidInput for empty feasible sets and unbounded objectives. */
struct LpProblem {
  enum class Sense { maximize, minimize };
  Vec objective;
  std::vector<Vec> normals;
  Vec offsets;
  Sense sense = Sense::maximize;
};
struct LpSolution {
  double value;
  Vec point;
};
LpSolution solve_lp(const LpProblem& p);

}  // namespace polyreach
