#pragma once

namespace doppler {

/// Units are left to the caller; every default is 1.
struct PhysicalConstants {
  double c = 1.0;
  double hbar = 1.0;
  double epsilon = 1.0;
  /// Transverse area occupied by the field in the y-z plane.
  double area = 1.0;

  /// Throws std::invalid_argument unless every constant is finite and positive.
  void validate() const;
};

}  // namespace doppler
