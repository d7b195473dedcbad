#ifndef SFWG_MESH_HPP
#define SFWG_MESH_HPP

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sfwg {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

/// Raised for malformed mesh input or topology that violates the mesh invariants.
/// `line()` is the 1-based input line for parse errors, 0 otherwise.
class MeshError : public std::runtime_error {
public:
  explicit MeshError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

/// Global edge. Vertex order is (lower index, higher index); that order fixes
/// the edge parameterization shared by both incident elements.
struct Edge {
  std::array<int, 2> vertices{};
  int left = -1;   ///< first incident element
  int right = -1;  ///< second incident element, -1 on the boundary
  bool boundary() const { return right < 0; }
};

/// Cached geometry of one element. Local edge l runs from local vertex l to l+1.
struct ElementGeom {
  Point2 centroid;
  double area = 0.0;
  double diameter = 0.0;
  std::vector<double> edge_length;
  std::vector<Point2> normal;   ///< unit outward normal per local edge
  std::vector<Point2> tangent;  ///< unit tangent along the counter-clockwise traversal
};

struct ShapeReport {
  int m_max = 0;
  double alpha = 1.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::vector<bool> parallel_edges;
};

/// 2D mesh of strictly convex, counter-clockwise polygons. Immutable after
/// construction; topology and geometry are built and validated eagerly.
class Mesh {
public:
  Mesh(std::vector<Point2> vertices, std::vector<std::vector<int>> elements);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary_edges() const { return num_boundary_edges_; }
  int num_interior_edges() const { return num_edges() - num_boundary_edges_; }

  std::span<const Point2> vertices() const { return vertices_; }
  const Point2& vertex(int i) const { return vertices_[i]; }
  std::span<const int> element(int t) const { return elements_[t]; }
  int num_element_edges(int t) const { return static_cast<int>(elements_[t].size()); }
  const std::vector<std::vector<int>>& elements() const { return elements_; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }

  /// Global edge index of each local edge of element t.
  std::span<const int> element_edges(int t) const { return element_edges_[t]; }
  /// True when local edge l of element t is traversed in the global edge direction.
  bool edge_aligned(int t, int l) const { return edge_aligned_[t][l] != 0; }

  const ElementGeom& geometry(int t) const { return geometry_[t]; }

  double max_diameter() const;
  double total_area() const;

private:
  std::vector<Point2> vertices_;
  std::vector<std::vector<int>> elements_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> element_edges_;
  std::vector<std::vector<char>> edge_aligned_;
  std::vector<ElementGeom> geometry_;
  int num_boundary_edges_ = 0;
};

/// n x n squares on the unit square, each split by its lower-left to upper-right diagonal.
Mesh build_uniform_triangle_mesh(int n);

/// n x n axis-aligned squares on the unit square.
Mesh build_uniform_quad_mesh(int n);

/// Brick-pattern mesh of the unit square whose interior cells are convex
/// hexagons with pairwise parallel sides; boundary cells are pentagons and
/// trapezoids. Rows alternate between n and n+1 cells; n rows in total.
Mesh build_hexagon_mesh(int n);

Mesh read_mesh(std::string_view text);
std::string write_mesh(const Mesh& mesh);

/// Splits every triangle into four congruent children through edge midpoints.
Mesh refine_uniform(const Mesh& mesh);

ShapeReport shape_report(const Mesh& mesh);

}  // namespace sfwg

#endif
