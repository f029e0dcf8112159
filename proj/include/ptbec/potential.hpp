#pragma once

#include <optional>
#include <string_view>

#include "ptbec/field.hpp"
#include "ptbec/grid.hpp"

namespace ptbec {

/// V(x) = x^2/4 + v0 e^{-sigma x^2} + i gamma x e^{-rho x^2}.
struct PotentialParams {
  double v0 = 4.0;
  double sigma = 0.5;
  double rho = 0.12;
  double gamma = 0.0;

  void validate() const;
  bool operator==(const PotentialParams&) const = default;
};

enum class Nonlinearity { Standard, NormIndependent };

std::string_view to_string(Nonlinearity kind);
std::optional<Nonlinearity> parse_nonlinearity(std::string_view text);

struct SystemParams {
  PotentialParams potential;
  /// Interaction strength N_0 a; the 1D coupling is g = 4 N_0 a.
  double n0a = 0.0;
  Nonlinearity nonlinearity = Nonlinearity::Standard;

  double coupling() const noexcept { return 4.0 * n0a; }
  bool operator==(const SystemParams&) const = default;
};

ComplexField potential_1d(const GridSpec& grid, const PotentialParams& p);

}  // namespace ptbec
