#include "polyreach/polytope.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "polyreach/errors.hpp"

namespace polyreach {

namespace {

constexpr double dedup_tol = 1e-12;

void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidInput(msg);
}

bool same_point(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > dedup_tol) return false;
  return true;
}

}  // namespace

Halfspace::Halfspace(Vec n, double off) : normal(std::move(n)), offset(off) {
  require(!normal.empty(), "halfspace normal must be non-empty");
  require(inf_norm(normal) > 0, "halfspace normal must be non-zero");
  require(std::isfinite(offset), "halfspace offset must be finite");
  for (double x : normal) require(std::isfinite(x), "halfspace normal must be finite");
}

HPolytope::HPolytope(std::vector<Halfspace> faces_in, int dim_in)
    : faces(std::move(faces_in)), dim(dim_in) {
  require(dim >= 1, "polytope dimension must be positive");
  require(!faces.empty(), "h-polytope needs at least one face");
  for (const Halfspace& f : faces)
    require(f.normal.size() == static_cast<std::size_t>(dim), "face dimension mismatch");
}

VPolytope::VPolytope(std::vector<Vec> vertices_in, int dim_in)
    : vertices(std::move(vertices_in)), dim(dim_in) {
  require(dim >= 1, "polytope dimension must be positive");
  require(!vertices.empty(), "v-polytope needs at least one vertex");
  for (const Vec& v : vertices) {
    require(v.size() == static_cast<std::size_t>(dim), "vertex dimension mismatch");
    for (double x : v) require(std::isfinite(x), "vertex coordinates must be finite");
  }
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      require(!same_point(vertices[i], vertices[j]), "duplicate vertex");
}

bool contains(const HPolytope& p, const Vec& x, double tol) {
  require(x.size() == static_cast<std::size_t>(p.dim), "point dimension mismatch");
  for (const Halfspace& f : p.faces)
    if (dot(f.normal, x) > f.offset + tol) return false;
  return true;
}

SupportHit support_vertex(const VPolytope& p, const Vec& direction) {
  require(direction.size() == static_cast<std::size_t>(p.dim), "direction dimension mismatch");
  int best = 0;
  double best_value = dot(direction, p.vertices[0]);
  for (std::size_t i = 1; i < p.vertices.size(); ++i) {
    const double value = dot(direction, p.vertices[i]);
    if (value > best_value) {
      best_value = value;
      best = static_cast<int>(i);
    }
  }
  return SupportHit{p.vertices[best], best_value, best};
}

PolytopePair box(const Vec& lo, const Vec& hi) {
  const int dim = static_cast<int>(lo.size());
  require(dim >= 1, "box dimension must be positive");
  require(hi.size() == lo.size(), "box bounds size mismatch");
  for (int i = 0; i < dim; ++i)
    require(lo[i] <= hi[i], "box needs lo <= hi in every coordinate");
  require(dim < 31, "box dimension too large for corner enumeration");

  std::vector<Halfspace> faces;
  faces.reserve(2 * dim);
  for (int i = 0; i < dim; ++i) {
    Vec minus(dim, 0.0), plus(dim, 0.0);
    minus[i] = -1.0;
    plus[i] = 1.0;
    faces.emplace_back(minus, -lo[i]);
    faces.emplace_back(plus, hi[i]);
  }

  std::vector<Vec> corners;
  const int count = 1 << dim;
  for (int c = 0; c < count; ++c) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) {
      const bool high = (c >> (dim - 1 - i)) & 1;
      v[i] = high ? hi[i] : lo[i];
    }
    bool duplicate = false;
    for (const Vec& seen : corners)
      if (same_point(seen, v)) {
        duplicate = true;
        break;
      }
    if (!duplicate) corners.push_back(std::move(v));
  }
  return PolytopePair{HPolytope(std::move(faces), dim), VPolytope(std::move(corners), dim)};
}

VPolytope ball_vertices(double rho, int dim, int resolution) {
  require(rho > 0, "ball radius must be positive");
  require(dim >= 1, "ball dimension must be positive");
  std::vector<Vec> verts;
  if (dim == 1) {
    verts = {{-rho}, {rho}};
  } else if (dim == 2) {
    require(resolution >= 3, "two-dimensional ball needs resolution >= 3");
    for (int k = 0; k < resolution; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / resolution;
      verts.push_back({rho * std::cos(angle), rho * std::sin(angle)});
    }
  } else {
    for (int i = 0; i < dim; ++i) {
      Vec minus(dim, 0.0), plus(dim, 0.0);
      minus[i] = -rho;
      plus[i] = rho;
      verts.push_back(std::move(minus));
      verts.push_back(std::move(plus));
    }
  }
  return VPolytope(std::move(verts), dim);
}

HPolytope ball_faces(double rho, int dim, int resolution) {
  require(rho > 0, "ball radius must be positive");
  require(dim >= 1, "ball dimension must be positive");
  std::vector<Halfspace> faces;
  if (dim == 1) {
    faces.emplace_back(Vec{-1.0}, rho);
    faces.emplace_back(Vec{1.0}, rho);
  } else if (dim == 2) {
    require(resolution >= 3, "two-dimensional ball needs resolution >= 3");
    // Edge between consecutive polygon vertices; the outward normal bisects.
    const double offset = rho * std::cos(std::numbers::pi / resolution);
    for (int k = 0; k < resolution; ++k) {
      const double angle = 2.0 * std::numbers::pi * (k + 0.5) / resolution;
      faces.emplace_back(Vec{std::cos(angle), std::sin(angle)}, offset);
    }
  } else {
    require(dim < 21, "cross-polytope face enumeration too large");
    const int count = 1 << dim;
    for (int mask = 0; mask < count; ++mask) {
      Vec n(dim);
      for (int i = 0; i < dim; ++i) n[i] = ((mask >> (dim - 1 - i)) & 1) ? 1.0 : -1.0;
      faces.emplace_back(std::move(n), rho);
    }
  }
  return HPolytope(std::move(faces), dim);
}

PolytopePair ball(double rho, int dim, int resolution) {
  return PolytopePair{ball_faces(rho, dim, resolution), ball_vertices(rho, dim, resolution)};
}

VPolytope product(const std::vector<VPolytope>& parts, std::size_t vertex_cap) {
  require(!parts.empty(), "product needs at least one factor");
  std::size_t count = 1;
  int dim = 0;
  for (const VPolytope& p : parts) {
    require(count <= vertex_cap / p.vertices.size(), "product vertex count exceeds cap");
    count *= p.vertices.size();
    dim += p.dim;
  }

  std::vector<Vec> verts;
  verts.reserve(count);
  std::vector<std::size_t> idx(parts.size(), 0);
  for (std::size_t n = 0; n < count; ++n) {
    Vec v;
    v.reserve(dim);
    for (std::size_t f = 0; f < parts.size(); ++f) {
      const Vec& part = parts[f].vertices[idx[f]];
      v.insert(v.end(), part.begin(), part.end());
    }
    verts.push_back(std::move(v));
    // Odometer with the last factor fastest.
    for (std::size_t f = parts.size(); f-- > 0;) {
      if (++idx[f] < parts[f].vertices.size()) break;
      idx[f] = 0;
    }
  }
  return VPolytope(std::move(verts), dim);
}

HPolytope product_faces(const std::vector<HPolytope>& parts) {
  require(!parts.empty(), "product needs at least one factor");
  std::vector<int> dims;
  dims.reserve(parts.size());
  int dim = 0;
  for (const HPolytope& p : parts) {
    dims.push_back(p.dim);
    dim += p.dim;
  }
  std::vector<Halfspace> faces;
  for (std::size_t f = 0; f < parts.size(); ++f)
    for (const Halfspace& face : parts[f].faces)
      faces.push_back(lift_face(face, static_cast<int>(f), dims));
  return HPolytope(std::move(faces), dim);
}

Halfspace lift_face(const Halfspace& face, int block_index, const std::vector<int>& block_dims) {
  require(0 <= block_index && block_index < static_cast<int>(block_dims.size()),
          "block index out of range");
  int offset = 0, total = 0;
  for (int i = 0; i < static_cast<int>(block_dims.size()); ++i) {
    require(block_dims[i] >= 1, "block dimensions must be positive");
    if (i < block_index) offset += block_dims[i];
    total += block_dims[i];
  }
  require(face.normal.size() == static_cast<std::size_t>(block_dims[block_index]),
          "face dimension does not match its block");
  Vec normal(total, 0.0);
  for (std::size_t i = 0; i < face.normal.size(); ++i) normal[offset + i] = face.normal[i];
  return Halfspace(std::move(normal), face.offset);
}

VPolytope dedup_vertices(const std::vector<Vec>& points, int dim) {
  std::vector<Vec> kept;
  for (const Vec& p : points) {
    bool duplicate = false;
    for (const Vec& seen : kept)
      if (same_point(seen, p)) {
        duplicate = true;
        break;
      }
    if (!duplicate) kept.push_back(p);
  }
  return VPolytope(std::move(kept), dim);
}

}  // namespace polyreach
