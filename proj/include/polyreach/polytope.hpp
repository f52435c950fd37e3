#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "polyreach/linalg.hpp"

namespace polyreach {

/* One closed halfspace <normal, x> <= offset.  The normal must be non-zero. */
struct Halfspace {
  Halfspace(Vec n, double off);
  Vec normal;
  double offset;
};

/* Intersection of halfspaces. */
struct HPolytope {
  HPolytope(std::vector<Halfspace> faces_in, int dim_in);
  std::vector<Halfspace> faces;
  int dim;
};

/* Convex hull of a finite vertex list.  Vertices are kept in construction
 * order; duplicates (within 1e-12, max-norm) are rejected. */
struct VPolytope {
  VPolytope(std::vector<Vec> vertices_in, int dim_in);
  std::vector<Vec> vertices;
  int dim;
};

/* A set carried in both representations at once. */
struct PolytopePair {
  HPolytope faces;
  VPolytope vertices;
};

bool contains(const HPolytope& p, const Vec& x, double tol = 1e-9);

/* Vertex maximizing <direction, v>; exact-value ties resolve to the lowest
 * vertex index so every caller sees the same deterministic pick. */
struct SupportHit {
  Vec vertex;
  double value;
  int index;
};
SupportHit support_vertex(const VPolytope& p, const Vec& direction);

/* Axis-aligned box [lo, hi].  Faces come coordinate-major as (-e_i, +e_i)
 * pairs; vertices enumerate corners with the last coordinate fastest, which
 * matches the ordering of `product` applied to the coordinate intervals.
 * Degenerate coordinates (lo == hi) collapse duplicate corners. */
PolytopePair box(const Vec& lo, const Vec& hi);

/* Polytopic stand-in for a norm ball of radius rho: an interval in dimension
 * one, a regular `resolution`-gon in dimension two, and a cross-polytope in
 * higher dimensions. */
VPolytope ball_vertices(double rho, int dim, int resolution = 16);
HPolytope ball_faces(double rho, int dim, int resolution = 16);
PolytopePair ball(double rho, int dim, int resolution = 16);

/* Cartesian product of vertex sets.  The joint vertex id enumerates factor
 * indices with the last factor spinning fastest; the count is capped to keep
 * accidental blowups out of test runs. */
VPolytope product(const std::vector<VPolytope>& parts, std::size_t vertex_cap = 4096);

/* Cartesian product of H-polytopes: each factor's faces lifted into the
 * stacked space by zero padding, factor-major order. */
HPolytope product_faces(const std::vector<HPolytope>& parts);

/* Zero-pad a face normal from one block into stacked coordinates. */
Halfspace lift_face(const Halfspace& face, int block_index, const std::vector<int>& block_dims);

/* First-occurrence deduplication (1e-12, max-norm); used when a contact-point
 * cloud collapses onto repeated vertices. */
VPolytope dedup_vertices(const std::vector<Vec>& points, int dim);

}  // namespace polyreach
