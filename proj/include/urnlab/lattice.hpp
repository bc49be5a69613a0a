#pragma once

#include <span>

#include <Eigen/Core>

#include "urnlab/colors.hpp"

namespace urnlab {

/// Affine lattice offset + Z-span(rows of basis), in embedded coordinates.
///
/// When the lattice was detected from a model, the same lattice is also kept in
/// coefficient coordinates (`coeff_offset`, `coeff_basis` in Hermite normal
/// form) so that membership of a ColorPoint can be decided exactly.
struct LatticeSpec {
  int dim = 0;
  Eigen::VectorXd offset;
  Eigen::MatrixXd basis;
  double det_abs = 0.0;

  ColorPoint coeff_offset;
  IntMatrix coeff_basis;

  bool has_coeff_form() const { return coeff_basis.size() > 0; }
  /// Exact membership test in coefficient coordinates.
  bool contains(const ColorPoint& c) const;
  /// Same lattice translated by a coefficient vector.
  LatticeSpec shifted(const ColorPoint& by, const Embedding& embedding) const;
};

/// Row-style Hermite normal form of the Z-span of the rows of `generators`.
/// Returns the nonzero rows: upper triangular with positive pivots and
/// entries above each pivot reduced into [0, pivot).
IntMatrix hermite_normal_form(IntMatrix generators);

/// Span h and offset a in [0, h) of a real lattice variable supported on
/// `support` (0 adjoined when include_zero). Non-integers go through rational
/// reconstruction with denominators up to 10^6.
LatticeSpec detect_span_1d(std::span<const double> support, bool include_zero);

/// Minimal lattice of the increment (d >= 2), or of the thinned increment I*X
/// when include_zero.
LatticeSpec detect_minimal_lattice(const IncrementModel& model, bool include_zero);

/// Either of the above by dimension, always carrying the coefficient form.
LatticeSpec detect_lattice(const IncrementModel& model, bool include_zero);

}  // namespace urnlab
