#include "sfwg/fields.hpp"

#include <cmath>
#include <numbers>

#include "sfwg/error.hpp"

namespace sfwg {

NamedField make_field(std::string_view name) {
  constexpr double pi = std::numbers::pi;
  if (name == "sinsin") {
    return {"sinsin",
            [](Point2 p) { return std::sin(pi * p.x) * std::sin(pi * p.y); },
            [](Point2 p) {
              return Point2{pi * std::cos(pi * p.x) * std::sin(pi * p.y),
                            pi * std::sin(pi * p.x) * std::cos(pi * p.y)};
            },
            [](Point2 p) { return 2.0 * pi * pi * std::sin(pi * p.x) * std::sin(pi * p.y); }};
  }
  if (name == "bubble") {
    return {"bubble",
            [](Point2 p) { return p.x * (1.0 - p.x) * p.y * (1.0 - p.y); },
            [](Point2 p) {
              return Point2{(1.0 - 2.0 * p.x) * p.y * (1.0 - p.y), p.x * (1.0 - p.x) * (1.0 - 2.0 * p.y)};
            },
            [](Point2 p) { return 2.0 * (p.y * (1.0 - p.y) + p.x * (1.0 - p.x)); }};
  }
  if (name == "zero") {
    return {"zero", [](Point2) { return 0.0; }, [](Point2) { return Point2{}; },
            [](Point2) { return 0.0; }};
  }
  throw ConfigError("unknown field '" + std::string(name) + "' (expected sinsin or bubble)");
}

}  // namespace sfwg
