#include "ptbec/potential.hpp"

#include <cmath>

#include "ptbec/errors.hpp"

namespace ptbec {

void PotentialParams::validate() const {
  if (!(v0 > 0.0)) throw UsageError("potential.v0 must be positive");
  if (!(sigma > 0.0)) throw UsageError("potential.sigma must be positive");
  if (!(rho > 0.0)) throw UsageError("potential.rho must be positive");
  if (!(gamma >= 0.0)) throw UsageError("potential.gamma must be non-negative");
}

std::string_view to_string(Nonlinearity kind) {
  return kind == Nonlinearity::Standard ? "standard" : "norm_independent";
}

std::optional<Nonlinearity> parse_nonlinearity(std::string_view text) {
  if (text == "standard") return Nonlinearity::Standard;
  if (text == "norm_independent") return Nonlinearity::NormIndependent;
  return std::nullopt;
}

ComplexField potential_1d(const GridSpec& grid, const PotentialParams& p) {
  p.validate();
  ComplexField v(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    const double x2 = x * x;
    v[i] = complex(0.25 * x2 + p.v0 * std::exp(-p.sigma * x2),
                   p.gamma * x * std::exp(-p.rho * x2));
  }
  return v;
}

}  // namespace ptbec
