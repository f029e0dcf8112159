#include <cmath>
#include <numbers>

#include <doctest.h>

#include "ptbec/errors.hpp"
#include "ptbec/fft.hpp"
#include "ptbec/field.hpp"
#include "ptbec/kinetic.hpp"
#include "ptbec/potential.hpp"
#include "ptbec/stationary.hpp"

using namespace ptbec;

namespace {

ComplexField sample(const GridSpec& g, auto f) {
  ComplexField out(g);
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = f(g.x(i));
  return out;
}

}  // namespace

TEST_CASE("grid rejects asymmetric or odd layouts") {
  CHECK_THROWS_AS(GridSpec(-1.0, 2.0, 16), UsageError);
  CHECK_THROWS_AS(GridSpec(-1.0, 1.0, 15), UsageError);
  CHECK_THROWS_AS(GridSpec(1.0, -1.0, 16), UsageError);
  const GridSpec g = GridSpec::symmetric(12.0, 256);
  CHECK(g.dx() == doctest::Approx(24.0 / 255.0));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.x(g.mirror(i)) == -g.x(i));
  CHECK(g.x(0) == -12.0);
  CHECK(g.x(255) == 12.0);
}

TEST_CASE("potential values") {
  const GridSpec g = GridSpec::symmetric();
  PotentialParams p;
  p.gamma = 0.02;
  // The origin is not a grid point; evaluate on a grid that contains x = 1/sqrt(2 rho).
  const ComplexField v = potential_1d(g, p);
  CHECK(std::abs(origin_value(v) - complex(4.0, 0.0)) < 1e-2);

  const double xe = 1.0 / std::sqrt(2.0 * 0.12);
  const GridSpec ge(-xe, xe, 4);
  PotentialParams pe;
  pe.gamma = 0.04;
  const ComplexField ve = potential_1d(ge, pe);
  CHECK(ve[3].imag() == doctest::Approx(0.04 * 2.0412 * std::exp(-0.5)).epsilon(1e-4));
  CHECK(ve[3].imag() == doctest::Approx(0.04952).epsilon(1e-3));

  SUBCASE("exact PT symmetry on the grid") {
    for (double gamma : {0.0, 0.013, 0.5}) {
      p.gamma = gamma;
      const ComplexField w = potential_1d(g, p);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(w[g.mirror(i)] == std::conj(w[i]));
    }
  }
  SUBCASE("invalid parameters") {
    PotentialParams bad;
    bad.gamma = -0.1;
    CHECK_THROWS_AS(potential_1d(g, bad), UsageError);
    bad = {};
    bad.sigma = 0.0;
    CHECK_THROWS_AS(potential_1d(g, bad), UsageError);
  }
}

TEST_CASE("inner products") {
  const GridSpec g = GridSpec::symmetric(10.0, 200);
  const ComplexField one = sample(g, [](double) { return complex(1.0); });
  CHECK(inner_product(one, one).real() == doctest::Approx(20.0));

  const ComplexField even = sample(g, [](double x) { return complex(std::exp(-x * x), 0.3); });
  const ComplexField odd = sample(g, [](double x) { return complex(x * std::exp(-x * x), x); });
  CHECK(std::abs(inner_product(even, odd)) < 1e-12);

  const ComplexField f = sample(g, [](double x) { return std::polar(std::exp(-0.1 * x * x), x); });
  const ComplexField h = sample(g, [](double x) { return complex(std::cos(x), 0.2 * x) * std::exp(-x * x / 8); });
  const complex a = inner_product(f, h);
  const complex b = inner_product(h, f);
  CHECK(std::abs(a - std::conj(b)) <= 1e-14 * std::abs(a));
  CHECK(inner_product(f, f).imag() == 0.0);
  CHECK(norm(f) == doctest::Approx(std::sqrt(inner_product(f, f).real())));

  CHECK_THROWS_AS(inner_product(f, ComplexField(GridSpec::symmetric(10.0, 202))), UsageError);

  SUBCASE("linear eigenstates are orthogonal") {
    const auto lin = linear_spectrum(GridSpec::symmetric(), PotentialParams{}, 2);
    CHECK(std::abs(inner_product(lin[0].field, lin[1].field)) < 1e-8);
  }
}

TEST_CASE("particle number") {
  const GridSpec g = GridSpec::symmetric();
  const ComplexField psi = normalized(sample(g, [](double x) { return complex(std::exp(-x * x), x); }));
  CHECK(particle_number(1000.0, psi) == doctest::Approx(1000.0));
  CHECK(particle_number(1000.0, complex(2.0) * psi) == doctest::Approx(4000.0));
  CHECK(particle_number(1000.0, pt_transform(psi)) == particle_number(1000.0, psi));
  CHECK_THROWS_AS(particle_number(0.0, psi), UsageError);
}

TEST_CASE("PT transform and defect") {
  const GridSpec g = GridSpec::symmetric();
  const ComplexField real_even = sample(g, [](double x) { return complex(std::exp(-x * x)); });
  CHECK(pt_defect(real_even) == 0.0);

  const ComplexField f = sample(g, [](double x) { return complex(std::exp(-(x - 1) * (x - 1)), std::sin(x)); });
  const ComplexField ff = pt_transform(pt_transform(f));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(ff[i] == f[i]);

  // A phase does not change the defect of a PT-symmetric field.
  const ComplexField sym = sample(g, [](double x) { return complex(std::exp(-x * x), x * std::exp(-x * x)); });
  CHECK(pt_defect(std::polar(1.0, 0.7) * sym) < 1e-14);

  const ComplexField right = sample(g, [](double x) { return complex(std::exp(-(x - 2) * (x - 2))); });
  CHECK(pt_defect(right) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

  SUBCASE("pt_gauge fixes the field under PT") {
    const ComplexField gauged = pt_gauge(std::polar(1.0, -2.1) * sym);
    CHECK(norm(gauged - pt_transform(gauged)) < 1e-14);
    CHECK(origin_value(gauged).real() > 0.0);
  }
}

TEST_CASE("kinetic operator") {
  const GridSpec g = GridSpec::symmetric(12.0, 128);
  const ComplexField gauss = sample(g, [](double x) { return complex(std::exp(-x * x / 2)); });
  // -d^2/dx^2 exp(-x^2/2) = (1 - x^2) exp(-x^2/2)
  const ComplexField exact = sample(g, [](double x) { return complex((1 - x * x) * std::exp(-x * x / 2)); });
  const Eigen::MatrixXd t = kinetic_matrix(g);
  const Eigen::VectorXcd applied = t.cast<complex>() * gauss.values();
  CHECK((applied - exact.values()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((t - t.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // The FFT route with the same symbol agrees with the dense matrix.
  Fft fft(g.size());
  auto buf = fft.buffer();
  const ComplexField f = sample(g, [](double x) { return complex(std::exp(-x * x / 3), x * std::exp(-x * x / 5)); });
  for (std::size_t i = 0; i < g.size(); ++i) buf[i] = f[i];
  fft.forward();
  const Eigen::VectorXd k2 = kinetic_symbol(g);
  for (std::size_t m = 0; m < g.size(); ++m) buf[m] *= k2[static_cast<Eigen::Index>(m)] / static_cast<double>(g.size());
  fft.backward();
  const Eigen::VectorXcd dense = t.cast<complex>() * f.values();
  double diff = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    diff = std::max(diff, std::abs(buf[i] - dense[static_cast<Eigen::Index>(i)]));
  CHECK(diff < 1e-10);
}
