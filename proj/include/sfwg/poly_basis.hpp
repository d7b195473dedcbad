#ifndef SFWG_POLY_BASIS_HPP
#define SFWG_POLY_BASIS_HPP

#include <span>
#include <utility>
#include <vector>

#include "sfwg/mesh.hpp"

namespace sfwg {

inline constexpr int kMaxDegree = 24;

constexpr int dim_pk(int k) { return (k + 1) * (k + 2) / 2; }

/// Exponent pairs (a, b) of the degree-k monomials, graded: (0,0), (1,0), (0,1), (2,0), ...
std::vector<std::pair<int, int>> monomial_exponents(int k);

/// Scaled monomials ((x - xc)/h)^a ((y - yc)/h)^b, a + b <= k, centered at the
/// element centroid and scaled by the element diameter.
class ElementBasis {
public:
  ElementBasis(Point2 center, double scale, int degree);
  ElementBasis(const ElementGeom& geom, int degree) : ElementBasis(geom.centroid, geom.diameter, degree) {}

  int degree() const { return degree_; }
  int size() const { return dim_pk(degree_); }
  Point2 center() const { return center_; }
  double scale() const { return scale_; }

  void eval(Point2 p, std::span<double> values) const;
  void eval(Point2 p, std::span<double> values, std::span<double> dx, std::span<double> dy) const;
  void eval(Point2 p, std::span<long double> values, std::span<long double> dx,
            std::span<long double> dy) const;

private:
  template <typename T>
  void eval_impl(Point2 p, std::span<T> values, std::span<T> dx, std::span<T> dy) const;

  Point2 center_;
  double scale_;
  int degree_;
  std::vector<std::pair<int, int>> exponents_;
};

/// Monomials s^a, a <= k, in the arc-length parameter s in [-1/2, 1/2]
/// measured from the edge midpoint towards `to`, divided by the edge length.
class EdgeBasis {
public:
  EdgeBasis(Point2 from, Point2 to, int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }
  double length() const { return length_; }

  double parameter(Point2 p) const { return dot(p - midpoint_, tangent_) / length_; }
  void eval_parameter(double s, std::span<double> values) const;
  void eval_parameter(long double s, std::span<long double> values) const;
  void eval(Point2 p, std::span<double> values) const { eval_parameter(parameter(p), values); }

private:
  Point2 midpoint_;
  Point2 tangent_;
  double length_;
  int degree_;
};

struct QuadRule {
  std::vector<Point2> points;
  std::vector<double> weights;
  int degree = 0;
};

struct QuadRule1D {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

/// Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1] (Golub-Welsch).
QuadRule1D gauss_jacobi(int npoints, double alpha, double beta);

/// Collapsed-tensor rule on the reference triangle (0,0), (1,0), (0,1), exact to total degree d.
QuadRule triangle_quadrature(int degree);

/// Reference triangle rule mapped onto the triangle (a, b, c).
QuadRule map_triangle_rule(const QuadRule& ref, Point2 a, Point2 b, Point2 c);

/// Rule on a convex element: the reference triangle rule on each triangle of
/// the centroid fan (a triangle is mapped directly).
QuadRule polygon_quadrature(const Mesh& mesh, int element, int degree);

/// Gauss-Legendre on the reference edge [0, 1].
QuadRule1D edge_quadrature(int degree);

}  // namespace sfwg

#endif
