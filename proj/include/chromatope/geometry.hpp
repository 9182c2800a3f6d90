#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace chromatope {

using Point = std::vector<double>;

/// Closed halfspace { x : normal . x <= offset } with outward normal.
struct Halfspace {
  std::vector<double> normal;
  double offset = 0.0;
};

namespace geom {

inline constexpr double kTolerance = 1e-9;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// offset - normal . x; nonnegative inside.
inline double slack(const Halfspace& h, std::span<const double> x) {
  return h.offset - dot(h.normal, x);
}

inline Halfspace normalized(Halfspace h) {
  const double len = norm(h.normal);
  for (auto& c : h.normal) c /= len;
  h.offset /= len;
  return h;
}

// Gaussian elimination with partial pivoting; `a` is row-major n x n.
inline std::optional<Point> solve(std::vector<double> a, std::vector<double> b,
                                  std::size_t n, double pivot_tol = 1e-12) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
    if (std::abs(a[piv * n + col]) < pivot_tol) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  Point x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// Intersection point of the n hyperplanes `hs[idx[k]]` (equality), if unique.
inline std::optional<Point> intersect(std::span<const Halfspace> hs,
                                      std::span<const int> idx, std::size_t n) {
  std::vector<double> a(n * n), b(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& h = hs[static_cast<std::size_t>(idx[r])];
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = h.normal[c];
    b[r] = h.offset;
  }
  return solve(std::move(a), std::move(b), n);
}

struct HVertex {
  Point x;
  std::vector<int> tight;  // indices of halfspaces through x
};

/// All vertices of the H-polytope { x : hs_i(x) }, by enumeration of
/// n-subsets of bounding hyperplanes. Intended for small systems.
inline std::vector<HVertex> enumerate_vertices(std::span<const Halfspace> hs,
                                               std::size_t n,
                                               double tol = kTolerance) {
  std::vector<HVertex> out;
  const std::size_t h = hs.size();
  if (h < n) return out;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (auto p = intersect(hs, idx, n)) {
      bool feasible = true;
      for (const auto& half : hs)
        if (slack(half, *p) < -tol) {
          feasible = false;
          break;
        }
      if (feasible) {
        bool dup = false;
        for (const auto& v : out)
          if (distance(v.x, *p) < 10 * tol) {
            dup = true;
            break;
          }
        if (!dup) out.push_back({std::move(*p), {}});
      }
    }
    // next combination
    std::size_t i = n;
    while (i > 0 && static_cast<std::size_t>(idx[i - 1]) == h - n + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  for (auto& v : out)
    for (std::size_t k = 0; k < h; ++k)
      if (std::abs(slack(hs[k], v.x)) <= tol * 10) v.tight.push_back(static_cast<int>(k));
  return out;
}

/// Dimension of the affine hull of `pts`, with a relative tolerance.
inline int affine_rank(std::span<const Point> pts, double tol = 1e-9) {
  if (pts.empty()) return -1;
  const std::size_t n = pts[0].size();
  std::vector<std::vector<double>> rows;
  double scale = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    std::vector<double> r(n);
    for (std::size_t c = 0; c < n; ++c) r[c] = pts[i][c] - pts[0][c];
    scale = std::max(scale, norm(r));
    rows.push_back(std::move(r));
  }
  if (scale == 0.0) return 0;
  int rank = 0;
  std::vector<bool> used(rows.size(), false);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = rows.size();
    double bestv = tol * scale;
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (!used[r] && std::abs(rows[r][c]) > bestv) {
        bestv = std::abs(rows[r][c]);
        best = r;
      }
    if (best == rows.size()) continue;
    used[best] = true;
    ++rank;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == best) continue;
      const double f = rows[r][c] / rows[best][c];
      for (std::size_t k = 0; k < n; ++k) rows[r][k] -= f * rows[best][k];
    }
  }
  return rank;
}

/// Orders the points of a planar convex polygon counter-clockwise.
inline std::vector<Point> order_polygon(std::vector<Point> pts) {
  if (pts.size() < 3) return pts;
  double cx = 0, cy = 0;
  for (const auto& p : pts) {
    cx += p[0];
    cy += p[1];
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
    return std::atan2(a[1] - cy, a[0] - cx) < std::atan2(b[1] - cy, b[0] - cx);
  });
  return pts;
}

inline double polygon_area(const std::vector<Point>& ordered) {
  double a = 0.0;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto& p = ordered[i];
    const auto& q = ordered[(i + 1) % ordered.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return std::abs(a) / 2.0;
}

/// (n-1)-dimensional measure of a convex set spanned by `pts` lying in a
/// hyperplane with unit normal `normal` (n = 2: length, n = 3: area).
/// For n > 3 returns 1 when the points span n-1 dimensions, else 0.
inline double wall_measure(const std::vector<Point>& pts, std::span<const double> normal) {
  if (pts.size() < 2) return 0.0;
  const std::size_t n = pts[0].size();
  if (n == 1) return 1.0;
  if (n == 2) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        best = std::max(best, distance(pts[i], pts[j]));
    return best;
  }
  if (n == 3) {
    if (pts.size() < 3) return 0.0;
    // orthonormal basis of the plane
    std::vector<double> u(3), w(3);
    const std::vector<double> axis =
        std::abs(normal[0]) < 0.9 ? std::vector<double>{1, 0, 0} : std::vector<double>{0, 1, 0};
    u = {normal[1] * axis[2] - normal[2] * axis[1], normal[2] * axis[0] - normal[0] * axis[2],
         normal[0] * axis[1] - normal[1] * axis[0]};
    const double ul = norm(u);
    for (auto& c : u) c /= ul;
    w = {normal[1] * u[2] - normal[2] * u[1], normal[2] * u[0] - normal[0] * u[2],
         normal[0] * u[1] - normal[1] * u[0]};
    std::vector<Point> flat;
    flat.reserve(pts.size());
    for (const auto& p : pts) flat.push_back({dot(p, u), dot(p, w)});
    return polygon_area(order_polygon(std::move(flat)));
  }
  return affine_rank(pts) >= static_cast<int>(n) - 1 ? 1.0 : 0.0;
}

}  // namespace geom
}  // namespace chromatope
