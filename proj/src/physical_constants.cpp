#include "doppler/physical_constants.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace doppler {

void PhysicalConstants::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || !(v > 0.0)) throw std::invalid_argument(fmt::format("constant {} must be positive", name));
  };
  check(c, "c");
  check(hbar, "hbar");
  check(epsilon, "epsilon");
  check(area, "area");
}

}  // namespace doppler
