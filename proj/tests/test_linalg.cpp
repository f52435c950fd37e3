#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "polyreach/errors.hpp"
#include "polyreach/linalg.hpp"
#include "test_util.hpp"

using namespace polyreach;
using test_util::bounded_matrix;
using test_util::max_abs_diff;
using test_util::rand_matrix;
using test_util::rand_vec;

TEST_CASE("vector helpers") {
  const Vec a{1, 2, 3};
  const Vec b{-1, 0, 2};
  CHECK(dot(a, b) == 5.0);
  CHECK(inf_norm(b) == 2.0);
  CHECK(two_norm(Vec{3, 4}) == doctest::Approx(5.0));
  CHECK(sub(a, b) == Vec{2, 2, 1});
  CHECK(add_scaled(a, 2.0, b) == Vec{-1, 2, 7});
}

TEST_CASE("matrix construction and accessors") {
  Matrix m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m(1, 2) == 0.0);

  const Matrix id = Matrix::identity(3);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);

  const Matrix f = Matrix::from_rows({{1, 2}, {3, 4}, {5, 6}}, 2);
  CHECK(f.rows() == 3);
  CHECK(f(2, 1) == 6.0);
  CHECK(f.transpose()(1, 2) == 6.0);

  const Matrix s = f.row_slice(1, 3);
  CHECK(s.rows() == 2);
  CHECK(s(0, 0) == 3.0);

  CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3, std::nan("")}), InvalidInput);
  CHECK_THROWS_AS(Matrix(2, 2, {1, 2, 3}), InvalidInput);
}

TEST_CASE("matrix products") {
  const Matrix a = Matrix::from_rows({{1, 2}, {3, 4}}, 2);
  const Matrix b = Matrix::from_rows({{0, 1}, {1, 0}}, 2);
  const Matrix ab = a * b;
  CHECK(ab(0, 0) == 2.0);
  CHECK(ab(0, 1) == 1.0);
  CHECK(ab(1, 0) == 4.0);
  CHECK(ab(1, 1) == 3.0);
  CHECK((a * Vec{1, 1}) == Vec{3, 7});
  CHECK((a + b)(0, 1) == 3.0);
  CHECK((a - b)(1, 0) == 2.0);
  CHECK((a * 2.0)(1, 1) == 8.0);
}

TEST_CASE("state_transition matches analytic exponentials") {
  SUBCASE("zero matrix gives the identity") {
    const Matrix e = state_transition(Matrix(3, 3), 1.0);
    CHECK(max_abs_diff(e, Matrix::identity(3)) == 0.0);
  }
  SUBCASE("diagonal matrix exponentiates entrywise") {
    Matrix m(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 2.0;
    const Matrix e = state_transition(m, 1.0);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-14));
    CHECK(std::abs(e(0, 1)) < 1e-15);
  }
  SUBCASE("nilpotent block integrates exactly") {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    const Matrix e = state_transition(m, 1.0);
    CHECK(e(0, 0) == doctest::Approx(1.0));
    CHECK(e(0, 1) == doctest::Approx(1.0));
    CHECK(e(1, 0) == doctest::Approx(0.0));
    CHECK(e(1, 1) == doctest::Approx(1.0));
  }
  SUBCASE("rotation generator gives sine and cosine") {
    Matrix m(2, 2);
    m(0, 1) = -1.0;
    m(1, 0) = 1.0;
    const double th = 0.7;
    const Matrix e = state_transition(m, th);
    CHECK(e(0, 0) == doctest::Approx(std::cos(th)).epsilon(1e-13));
    CHECK(e(1, 0) == doctest::Approx(std::sin(th)).epsilon(1e-13));
  }
  SUBCASE("non-square input is rejected") {
    CHECK_THROWS_AS(state_transition(Matrix(2, 3), 1.0), InvalidInput);
  }
}

TEST_CASE("state_transition semigroup, inverse, and adjoint identities") {
  std::mt19937_64 eng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(eng() % 6);
    const Matrix m = bounded_matrix(eng, n, 5.0);
    const double s = test_util::unit_draw(eng);
    const double t = test_util::unit_draw(eng);

    const Matrix whole = state_transition(m, s + t);
    const Matrix split = state_transition(m, s) * state_transition(m, t);
    CHECK(max_abs_diff(whole, split) < 1e-8);

    const Matrix fwd = state_transition(m, t);
    const Matrix bwd = state_transition(m * -1.0, t);
    CHECK(max_abs_diff(fwd * bwd, Matrix::identity(n)) < 1e-8);

    const Vec lambda = rand_vec(eng, n);
    const Vec x = rand_vec(eng, n);
    const Vec lam_t = state_transition(m.transpose() * -1.0, t) * lambda;
    const Vec x_t = fwd * x;
    CHECK(std::abs(dot(lam_t, x_t) - dot(lambda, x)) < 1e-8);
  }
}

TEST_CASE("zoh_pair matches analytic integrals") {
  SUBCASE("zero dynamics integrate to dt times identity") {
    const auto [ad, bd] = zoh_pair(Matrix(2, 2), 0.25);
    CHECK(max_abs_diff(ad, Matrix::identity(2)) < 1e-15);
    CHECK(bd(0, 0) == doctest::Approx(0.25));
    CHECK(bd(1, 1) == doctest::Approx(0.25));
    CHECK(std::abs(bd(0, 1)) < 1e-15);
  }
  SUBCASE("scalar dynamics") {
    Matrix m(1, 1);
    m(0, 0) = -2.0;
    const auto [ad, bd] = zoh_pair(m, 1.0);
    CHECK(ad(0, 0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
    CHECK(bd(0, 0) == doctest::Approx((std::exp(-2.0) - 1.0) / -2.0).epsilon(1e-13));
  }
  SUBCASE("nilpotent block") {
    Matrix m(2, 2);
    m(0, 1) = 1.0;
    const auto [ad, bd] = zoh_pair(m, 1.0);
    CHECK(ad(0, 1) == doctest::Approx(1.0));
    CHECK(bd(0, 0) == doctest::Approx(1.0));
    CHECK(bd(0, 1) == doctest::Approx(0.5));
    CHECK(bd(1, 0) == doctest::Approx(0.0));
    CHECK(bd(1, 1) == doctest::Approx(1.0));
  }
  SUBCASE("consistency with state_transition and the closed form") {
    std::mt19937_64 eng(7);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(eng() % 3);
      Matrix m = bounded_matrix(eng, n, 2.0);
      for (int i = 0; i < n; ++i) m(i, i) += 2.0;  // keep it invertible
      const double dt = 0.1 + 0.4 * test_util::unit_draw(eng);
      const auto [ad, bd] = zoh_pair(m, dt);
      CHECK(max_abs_diff(ad, state_transition(m, dt)) < 1e-11);
      const Matrix closed = inverse(m) * (ad - Matrix::identity(n));
      CHECK(max_abs_diff(bd, closed) < 1e-9);
    }
  }
}

TEST_CASE("svd reconstructs with ordered singular values") {
  std::mt19937_64 eng(11);
  const std::pair<int, int> shapes[] = {{3, 3}, {5, 3}, {3, 5}, {6, 2}, {1, 4}, {4, 1}};
  for (const auto& [r, c] : shapes) {
    const Matrix a = rand_matrix(eng, r, c);
    const Svd f = svd(a);
    REQUIRE(static_cast<int>(f.sigma.size()) == c);

    Matrix usv(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        double s = 0;
        for (int k = 0; k < c; ++k) s += f.u(i, k) * f.sigma[k] * f.v(j, k);
        usv(i, j) = s;
      }
    CHECK(max_abs_diff(usv, a) < 1e-10);

    for (std::size_t k = 1; k < f.sigma.size(); ++k) CHECK(f.sigma[k - 1] >= f.sigma[k]);
    for (double s : f.sigma) CHECK(s >= 0.0);

    CHECK(max_abs_diff(f.v.transpose() * f.v, Matrix::identity(c)) < 1e-10);
    for (int k = 0; k < c; ++k) {
      if (f.sigma[k] < 1e-9) continue;
      for (int l = 0; l < c; ++l) {
        if (f.sigma[l] < 1e-9) continue;
        double g = 0;
        for (int i = 0; i < r; ++i) g += f.u(i, k) * f.u(i, l);
        CHECK(std::abs(g - (k == l ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }

  SUBCASE("rank-deficient input produces a zero singular value") {
    const Matrix a = Matrix::from_rows({{1, 2}, {2, 4}, {3, 6}}, 2);
    const Svd f = svd(a);
    CHECK(f.sigma[1] < 1e-12);
    CHECK(f.sigma[0] > 1.0);
  }
}

TEST_CASE("kernel_projector known values and properties") {
  SUBCASE("single row pins its direction") {
    const Matrix p = kernel_projector(Matrix::from_rows({{1, 0}}, 2));
    CHECK(max_abs_diff(p, Matrix::from_rows({{0, 0}, {0, 1}}, 2)) < 1e-12);
  }
  SUBCASE("invertible rows project to zero") {
    const Matrix p = kernel_projector(Matrix::from_rows({{2, 1}, {1, 1}}, 2));
    CHECK(max_abs_diff(p, Matrix(2, 2)) < 1e-12);
  }
  SUBCASE("zero row keeps everything") {
    const Matrix p = kernel_projector(Matrix::from_rows({{0, 0}}, 2));
    CHECK(max_abs_diff(p, Matrix::identity(2)) < 1e-12);
  }
  SUBCASE("empty block keeps everything") {
    const Matrix p = kernel_projector(Matrix(0, 3));
    CHECK(max_abs_diff(p, Matrix::identity(3)) < 1e-12);
  }
  SUBCASE("random rows: idempotent, symmetric, annihilated") {
    std::mt19937_64 eng(23);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(eng() % 5);
      const int m = 1 + static_cast<int>(eng() % n);
      const Matrix rows = rand_matrix(eng, m, n);
      const Matrix p = kernel_projector(rows);
      CHECK(max_abs_diff(p * p, p) < 1e-10);
      CHECK(max_abs_diff(p.transpose(), p) < 1e-10);
      CHECK(max_abs_diff(rows * p, Matrix(m, n)) < 1e-10);
    }
  }
}

TEST_CASE("min_norm_solution solves consistent systems at minimal norm") {
  SUBCASE("known values") {
    CHECK(max_abs_diff(min_norm_solution(Matrix::from_rows({{1, 0}}, 2), {2}), Vec{2, 0}) <
          1e-12);
    const Vec b{3, -1, 4};
    CHECK(max_abs_diff(min_norm_solution(Matrix::identity(3), b), b) < 1e-12);
    CHECK(max_abs_diff(min_norm_solution(Matrix::from_rows({{1, 1}}, 2), {2}), Vec{1, 1}) <
          1e-12);
  }
  SUBCASE("random consistent systems") {
    std::mt19937_64 eng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 2 + static_cast<int>(eng() % 5);
      const int m = 1 + static_cast<int>(eng() % n);
      const Matrix rows = rand_matrix(eng, m, n);
      const Vec planted = rand_vec(eng, n);
      const Vec b = rows * planted;
      const Vec x = min_norm_solution(rows, b);
      CHECK(inf_norm(sub(rows * x, b)) < 1e-10);
      CHECK(two_norm(x) <= two_norm(planted) + 1e-10);
      // Minimal norm means no kernel component.
      const Vec k = kernel_projector(rows) * x;
      CHECK(inf_norm(k) < 1e-9);
    }
  }
  SUBCASE("inconsistent rows are rejected") {
    const Matrix rows = Matrix::from_rows({{1, 0}, {1, 0}}, 2);
    CHECK_THROWS_AS(min_norm_solution(rows, {0, 1}), InvalidInput);
  }
}

TEST_CASE("project_affine lands on the solution set nearest the guess") {
  std::mt19937_64 eng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(eng() % 4);
    const int m = 1 + static_cast<int>(eng() % (n - 1));
    const Matrix rows = rand_matrix(eng, m, n);
    const Vec b = rows * rand_vec(eng, n);
    const Vec guess = rand_vec(eng, n);
    const Vec y = project_affine(rows, b, guess);
    CHECK(inf_norm(sub(rows * y, b)) < 1e-9);
    // The correction is orthogonal to the solution set's directions.
    const Vec moved = sub(y, guess);
    CHECK(inf_norm(kernel_projector(rows) * moved) < 1e-9);
  }
  SUBCASE("a solution projects to itself") {
    const Matrix rows = Matrix::from_rows({{1, 1}}, 2);
    const Vec y = project_affine(rows, {2}, {1.5, 0.5});
    CHECK(max_abs_diff(y, Vec{1.5, 0.5}) < 1e-12);
  }
}

TEST_CASE("solve_dense and inverse") {
  std::mt19937_64 eng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(eng() % 6);
    Matrix a = rand_matrix(eng, n, n);
    for (int i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);  // well conditioned
    const Vec b = rand_vec(eng, n);
    const Vec x = solve_dense(a, b);
    CHECK(inf_norm(sub(a * x, b)) < 1e-10);
    CHECK(max_abs_diff(inverse(a) * a, Matrix::identity(n)) < 1e-10);
  }
  SUBCASE("singular matrix is rejected") {
    const Matrix a = Matrix::from_rows({{1, 2}, {2, 4}}, 2);
    CHECK_THROWS_AS(solve_dense(a, {1, 1}), InvalidInput);
    CHECK_THROWS_AS(inverse(a), InvalidInput);
  }
}

namespace {

/* Unit box [0,1]^dim as LP constraints. */
LpProblem box_lp(int dim) {
  LpProblem p;
  p.offsets.reserve(2 * static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    Vec lo(dim, 0.0), hi(dim, 0.0);
    lo[i] = -1.0;
    hi[i] = 1.0;
    p.normals.push_back(lo);
    p.offsets.push_back(0.0);
    p.normals.push_back(hi);
    p.offsets.push_back(1.0);
  }
  return p;
}

}  // namespace

TEST_CASE("solve_lp finds vertex optima") {
  SUBCASE("maximize a coordinate over the unit square") {
    LpProblem p = box_lp(2);
    p.objective = {1, 0};
    const LpSolution s = solve_lp(p);
    CHECK(s.value == doctest::Approx(1.0));
    CHECK(s.point[0] == doctest::Approx(1.0));
  }
  SUBCASE("minimize over the nonnegative quadrant") {
    LpProblem p;
    p.objective = {1, 1};
    p.normals = {{-1, 0}, {0, -1}};
    p.offsets = {0, 0};
    p.sense = LpProblem::Sense::minimize;
    const LpSolution s = solve_lp(p);
    CHECK(s.value == doctest::Approx(0.0));
    CHECK(max_abs_diff(s.point, Vec{0, 0}) < 1e-10);
  }
  SUBCASE("weighted objective picks the right simplex vertex") {
    LpProblem p;
    p.objective = {1, 2};
    p.normals = {{1, 1}, {-1, 0}, {0, -1}};
    p.offsets = {1, 0, 0};
    const LpSolution s = solve_lp(p);
    CHECK(s.value == doctest::Approx(2.0));
    CHECK(max_abs_diff(s.point, Vec{0, 1}) < 1e-10);
  }
  SUBCASE("infeasible program is rejected") {
    LpProblem p;
    p.objective = {1};
    p.normals = {{1}, {-1}};
    p.offsets = {-1, -1};  // x <= -1 and x >= 1
    CHECK_THROWS_AS(solve_lp(p), InvalidInput);
  }
  SUBCASE("unbounded program is rejected") {
    LpProblem p;
    p.objective = {1};
    p.normals = {{-1}};
    p.offsets = {0};  // x >= 0, maximize x
    CHECK_THROWS_AS(solve_lp(p), InvalidInput);
  }
}

TEST_CASE("solve_lp agrees with vertex enumeration") {
  std::mt19937_64 eng(53);
  SUBCASE("random objectives over boxes") {
    for (int dim = 2; dim <= 3; ++dim) {
      // Corner k has coordinate i equal to hi[i] when bit (dim-1-i) of k is set.
      std::vector<Vec> corners;
      const Vec lo = rand_vec(eng, dim);
      Vec hi = lo;
      for (int i = 0; i < dim; ++i) hi[i] += 0.5 + test_util::unit_draw(eng);
      for (int k = 0; k < (1 << dim); ++k) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = (k >> (dim - 1 - i)) & 1 ? hi[i] : lo[i];
        corners.push_back(v);
      }
      LpProblem p;
      for (int i = 0; i < dim; ++i) {
        Vec nlo(dim, 0.0), nhi(dim, 0.0);
        nlo[i] = -1.0;
        nhi[i] = 1.0;
        p.normals.push_back(nlo);
        p.offsets.push_back(-lo[i]);
        p.normals.push_back(nhi);
        p.offsets.push_back(hi[i]);
      }
      for (int trial = 0; trial < 50; ++trial) {
        p.objective = rand_vec(eng, dim);
        const LpSolution s = solve_lp(p);
        double best = -std::numeric_limits<double>::infinity();
        for (const Vec& v : corners) best = std::max(best, dot(p.objective, v));
        CHECK(s.value == doctest::Approx(best).epsilon(1e-10));
      }
    }
  }
  SUBCASE("random objectives over the standard simplex") {
    LpProblem p;
    p.normals = {{1, 1, 1}, {-1, 0, 0}, {0, -1, 0}, {0, 0, -1}};
    p.offsets = {1, 0, 0, 0};
    const std::vector<Vec> verts = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int trial = 0; trial < 50; ++trial) {
      p.objective = rand_vec(eng, 3);
      const LpSolution s = solve_lp(p);
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec& v : verts) best = std::max(best, dot(p.objective, v));
      CHECK(s.value == doctest::Approx(best).epsilon(1e-10));
    }
  }
}
