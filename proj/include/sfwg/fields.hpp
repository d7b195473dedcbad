#ifndef SFWG_FIELDS_HPP
#define SFWG_FIELDS_HPP

#include <functional>
#include <string>
#include <string_view>

#include "sfwg/mesh.hpp"

namespace sfwg {

using ScalarFunction = std::function<double(Point2)>;

/// Manufactured solution u with zero trace on the unit square and its
/// forcing f = -Laplacian(u).
struct NamedField {
  std::string name;
  ScalarFunction value;
  std::function<Point2(Point2)> gradient;
  ScalarFunction source;
};

/// "sinsin": u = sin(pi x) sin(pi y); "bubble": u = x(1-x) y(1-y); "zero": u = 0.
/// Throws ConfigError for any other name.
NamedField make_field(std::string_view name);

}  // namespace sfwg

#endif
