#include "sfwg/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace sfwg {

namespace {

constexpr double kConvexityTol = 1e-14;
constexpr double kDuplicateTol = 1e-12;
constexpr double kParallelTol = 1e-12;

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

void check_duplicates(const std::vector<Point2>& vertices) {
  std::vector<int> order(vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vertices[a].x < vertices[b].x; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Point2& p = vertices[order[i]];
      const Point2& q = vertices[order[j]];
      if (q.x - p.x > kDuplicateTol) break;
      if (std::abs(q.y - p.y) <= kDuplicateTol) {
        throw MeshError("duplicate vertices " + std::to_string(order[i]) + " and " +
                        std::to_string(order[j]));
      }
    }
  }
}

ElementGeom compute_geometry(const std::vector<Point2>& vertices, const std::vector<int>& cycle,
                             int t) {
  const int m = static_cast<int>(cycle.size());
  ElementGeom g;
  g.edge_length.resize(m);
  g.normal.resize(m);
  g.tangent.resize(m);

  // Shift to the first vertex before the shoelace sums to limit cancellation.
  const Point2 origin = vertices[cycle[0]];
  double area2 = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double turning = 0.0;
  for (int l = 0; l < m; ++l) {
    const Point2 a = vertices[cycle[l]] - origin;
    const Point2 b = vertices[cycle[(l + 1) % m]] - origin;
    const Point2 c = vertices[cycle[(l + 2) % m]] - origin;
    const double w = cross(a, b);
    area2 += w;
    cx += (a.x + b.x) * w;
    cy += (a.y + b.y) * w;

    const Point2 e1 = b - a;
    const Point2 e2 = c - b;
    const double turn = cross(e1, e2);
    if (!(turn > kConvexityTol)) {
      throw MeshError("element " + std::to_string(t) +
                      " is not strictly convex and counter-clockwise at vertex " +
                      std::to_string(cycle[(l + 1) % m]));
    }
    turning += std::atan2(turn, dot(e1, e2));

    const double len = norm(e1);
    g.edge_length[l] = len;
    g.tangent[l] = (1.0 / len) * e1;
    g.normal[l] = {g.tangent[l].y, -g.tangent[l].x};
  }
  if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-8) {
    throw MeshError("element " + std::to_string(t) + " winds more than once");
  }
  g.area = 0.5 * area2;
  g.centroid = origin + Point2{cx / (3.0 * area2), cy / (3.0 * area2)};
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      g.diameter = std::max(g.diameter, norm(vertices[cycle[a]] - vertices[cycle[b]]));
    }
  }
  return g;
}

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<std::vector<int>> elements)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  const int nv = num_vertices();
  for (const Point2& p : vertices_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw MeshError("non-finite vertex coordinate");
  }
  check_duplicates(vertices_);

  std::unordered_map<std::uint64_t, int> edge_index;
  edge_index.reserve(2 * elements_.size() + 4);
  element_edges_.resize(elements_.size());
  edge_aligned_.resize(elements_.size());
  geometry_.reserve(elements_.size());

  for (int t = 0; t < num_elements(); ++t) {
    const auto& cycle = elements_[t];
    const int m = static_cast<int>(cycle.size());
    if (m < 3) throw MeshError("element " + std::to_string(t) + " has fewer than 3 vertices");
    for (int v : cycle) {
      if (v < 0 || v >= nv) {
        throw MeshError("element " + std::to_string(t) + " references vertex " +
                        std::to_string(v) + " out of range");
      }
    }
    geometry_.push_back(compute_geometry(vertices_, cycle, t));

    element_edges_[t].resize(m);
    edge_aligned_[t].resize(m);
    for (int l = 0; l < m; ++l) {
      const int a = cycle[l];
      const int b = cycle[(l + 1) % m];
      const auto [it, inserted] = edge_index.try_emplace(edge_key(a, b), num_edges());
      if (inserted) {
        Edge e;
        e.vertices = {std::min(a, b), std::max(a, b)};
        e.left = t;
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.right >= 0) {
          throw MeshError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") bounds more than two elements");
        }
        const int l0 = static_cast<int>(
            std::find(element_edges_[e.left].begin(), element_edges_[e.left].end(), it->second) -
            element_edges_[e.left].begin());
        if (elements_[e.left][l0] == a) {
          throw MeshError("elements " + std::to_string(e.left) + " and " + std::to_string(t) +
                          " have inconsistent orientation");
        }
        e.right = t;
      }
      element_edges_[t][l] = it->second;
      edge_aligned_[t][l] = a < b ? 1 : 0;
    }
  }
  num_boundary_edges_ = static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.boundary(); }));
}

double Mesh::max_diameter() const {
  double h = 0.0;
  for (const auto& g : geometry_) h = std::max(h, g.diameter);
  return h;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (const auto& g : geometry_) a += g.area;
  return a;
}

Mesh build_uniform_triangle_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_triangle_mesh: n must be positive");
  std::vector<Point2> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> elements;
  elements.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ll = id(i, j), lr = id(i + 1, j), ur = id(i + 1, j + 1), ul = id(i, j + 1);
      elements.push_back({ll, lr, ur});
      elements.push_back({ll, ur, ul});
    }
  }
  return Mesh(std::move(vertices), std::move(elements));
}

Mesh build_uniform_quad_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_uniform_quad_mesh: n must be positive");
  std::vector<Point2> vertices;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      vertices.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> elements;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(vertices), std::move(elements));
}

Mesh build_hexagon_mesh(int n) {
  if (n < 1) throw std::invalid_argument("build_hexagon_mesh: n must be positive");
  // Horizontal lines r = 0..n carry candidate vertices at x = i / (2n), i = 0..2n.
  // Row q has cell walls ("cuts") at even i for even q, odd i for odd q, plus
  // both domain sides. On interior lines the cuts of the upper row are lifted
  // and those of the lower row lowered, giving a zigzag that makes every cell
  // strictly convex.
  const int nh = 2 * n;
  const double row_height = 1.0 / n;
  const double shift = 0.25 * row_height;
  const auto is_cut = [nh](int q, int i) { return i == 0 || i == nh || (i % 2) == (q % 2); };
  const auto exists = [&](int r, int i) {
    return (r < n && is_cut(r, i)) || (r > 0 && is_cut(r - 1, i));
  };

  std::vector<Point2> vertices;
  std::vector<int> index((n + 1) * (nh + 1), -1);
  for (int r = 0; r <= n; ++r) {
    for (int i = 0; i <= nh; ++i) {
      if (!exists(r, i)) continue;
      double y = static_cast<double>(r) / n;
      if (r > 0 && r < n && i > 0 && i < nh) y += is_cut(r, i) ? shift : -shift;
      index[r * (nh + 1) + i] = static_cast<int>(vertices.size());
      vertices.push_back({static_cast<double>(i) / nh, y});
    }
  }

  std::vector<std::vector<int>> elements;
  for (int q = 0; q < n; ++q) {
    std::vector<int> cuts;
    for (int i = 0; i <= nh; ++i) {
      if (is_cut(q, i)) cuts.push_back(i);
    }
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const int a = cuts[c], b = cuts[c + 1];
      std::vector<int> cycle;
      for (int i = a; i <= b; ++i) {
        if (index[q * (nh + 1) + i] >= 0) cycle.push_back(index[q * (nh + 1) + i]);
      }
      for (int i = b; i >= a; --i) {
        if (index[(q + 1) * (nh + 1) + i] >= 0) cycle.push_back(index[(q + 1) * (nh + 1) + i]);
      }
      elements.push_back(std::move(cycle));
    }
  }
  return Mesh(std::move(vertices), std::move(elements));
}

namespace {

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  int line_no = 0;

  // Next non-empty line with comments stripped, split on whitespace.
  bool next(std::vector<std::string_view>& tokens) {
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      tokens.clear();
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }
};

template <typename T>
T parse_number(std::string_view token, int line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw MeshError("cannot parse '" + std::string(token) + "' as a number", line);
  }
  return value;
}

}  // namespace

Mesh read_mesh(std::string_view text) {
  LineReader reader{text};
  std::vector<std::string_view> tok;

  const auto expect_header = [&](std::string_view keyword) -> long {
    if (!reader.next(tok)) throw MeshError("unexpected end of input, expected '" + std::string(keyword) + "'", reader.line_no);
    if (tok.size() != 2 || tok[0] != keyword) {
      throw MeshError("expected '" + std::string(keyword) + " <count>'", reader.line_no);
    }
    return parse_number<long>(tok[1], reader.line_no);
  };

  if (expect_header("polymesh") != 1) throw MeshError("unsupported polymesh version", reader.line_no);

  const long nv = expect_header("vertices");
  if (nv < 0) throw MeshError("negative vertex count", reader.line_no);
  std::vector<Point2> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    if (!reader.next(tok)) throw MeshError("unexpected end of input in vertex block", reader.line_no);
    if (tok.size() != 2) throw MeshError("vertex line needs exactly 2 coordinates", reader.line_no);
    vertices.push_back({parse_number<double>(tok[0], reader.line_no),
                        parse_number<double>(tok[1], reader.line_no)});
  }

  const long ne = expect_header("elements");
  if (ne < 0) throw MeshError("negative element count", reader.line_no);
  std::vector<std::vector<int>> elements;
  elements.reserve(ne);
  for (long t = 0; t < ne; ++t) {
    if (!reader.next(tok)) throw MeshError("unexpected end of input in element block", reader.line_no);
    const int c = parse_number<int>(tok[0], reader.line_no);
    if (c < 3 || static_cast<std::size_t>(c) + 1 != tok.size()) {
      throw MeshError("element line must be 'c i0 ... i(c-1)' with c >= 3", reader.line_no);
    }
    std::vector<int> cycle(c);
    for (int l = 0; l < c; ++l) {
      cycle[l] = parse_number<int>(tok[l + 1], reader.line_no);
      if (cycle[l] < 0 || cycle[l] >= nv) {
        throw MeshError("dangling vertex index " + std::to_string(cycle[l]), reader.line_no);
      }
    }
    elements.push_back(std::move(cycle));
  }
  if (reader.next(tok)) throw MeshError("trailing content after element block", reader.line_no);

  return Mesh(std::move(vertices), std::move(elements));
}

std::string write_mesh(const Mesh& mesh) {
  std::string out = "polymesh 1\nvertices " + std::to_string(mesh.num_vertices()) + "\n";
  char buf[64];
  for (const Point2& p : mesh.vertices()) {
    auto r = std::to_chars(buf, buf + sizeof(buf), p.x);
    out.append(buf, r.ptr);
    out.push_back(' ');
    r = std::to_chars(buf, buf + sizeof(buf), p.y);
    out.append(buf, r.ptr);
    out.push_back('\n');
  }
  out += "elements " + std::to_string(mesh.num_elements()) + "\n";
  for (int t = 0; t < mesh.num_elements(); ++t) {
    out += std::to_string(mesh.num_element_edges(t));
    for (int v : mesh.element(t)) out += " " + std::to_string(v);
    out.push_back('\n');
  }
  return out;
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<Point2> vertices(mesh.vertices().begin(), mesh.vertices().end());
  const int nv = mesh.num_vertices();
  for (const Edge& e : mesh.edges()) {
    vertices.push_back(0.5 * (mesh.vertex(e.vertices[0]) + mesh.vertex(e.vertices[1])));
  }
  std::vector<std::vector<int>> elements;
  elements.reserve(4 * static_cast<std::size_t>(mesh.num_elements()));
  for (int t = 0; t < mesh.num_elements(); ++t) {
    if (mesh.num_element_edges(t) != 3) {
      throw MeshError("refine_uniform: element " + std::to_string(t) + " is not a triangle");
    }
    const auto v = mesh.element(t);
    const auto e = mesh.element_edges(t);
    // m[l] is the midpoint of local edge l (v[l] -> v[l+1]).
    const int m0 = nv + e[0], m1 = nv + e[1], m2 = nv + e[2];
    elements.push_back({v[0], m0, m2});
    elements.push_back({m0, v[1], m1});
    elements.push_back({m2, m1, v[2]});
    elements.push_back({m0, m1, m2});
  }
  return Mesh(std::move(vertices), std::move(elements));
}

ShapeReport shape_report(const Mesh& mesh) {
  ShapeReport report;
  report.theta_min = std::numbers::pi;
  report.theta_max = 0.0;
  report.parallel_edges.resize(mesh.num_elements());
  for (int t = 0; t < mesh.num_elements(); ++t) {
    const ElementGeom& g = mesh.geometry(t);
    const int m = mesh.num_element_edges(t);
    report.m_max = std::max(report.m_max, m);

    const auto [lmin, lmax] = std::minmax_element(g.edge_length.begin(), g.edge_length.end());
    report.alpha = std::max(report.alpha, *lmax / *lmin);

    for (int l = 0; l < m; ++l) {
      // interior angle at the vertex shared by local edges l and l+1
      const Point2 back = -1.0 * g.tangent[l];
      const Point2 fwd = g.tangent[(l + 1) % m];
      const double theta = std::atan2(std::abs(cross(back, fwd)), dot(back, fwd));
      report.theta_min = std::min(report.theta_min, theta);
      report.theta_max = std::max(report.theta_max, theta);
    }

    bool all_parallel = true;
    for (int l = 0; l < m && all_parallel; ++l) {
      bool found = false;
      for (int s = 0; s < m && !found; ++s) {
        found = s != l && std::abs(cross(g.tangent[l], g.tangent[s])) < kParallelTol;
      }
      all_parallel = found;
    }
    report.parallel_edges[t] = all_parallel;
  }
  return report;
}

}  // namespace sfwg
