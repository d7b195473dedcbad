#ifndef SFWG_ERROR_HPP
#define SFWG_ERROR_HPP

#include <stdexcept>

namespace sfwg {

/// Invalid study configuration or argument combination.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed: non-convergence, breakdown, size limits, or
/// a local matrix that should have been nonsingular.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace sfwg

#endif
