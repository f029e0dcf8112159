// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured quantities; the process exits nonzero if any selected check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptbec/bloch.hpp"
#include "ptbec/continuation.hpp"
#include "ptbec/dynamics.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/seeding.hpp"
#include "ptbec/stability.hpp"

using namespace ptbec;

namespace {

const GridSpec kGrid = GridSpec::symmetric();
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SystemParams params(double gamma, double n0a, Nonlinearity kind = Nonlinearity::Standard) {
  SystemParams p;
  p.potential.gamma = gamma;
  p.n0a = n0a;
  p.nonlinearity = kind;
  return p;
}

std::vector<complex> nontrivial(const BdGSpectrum& s) {
  std::vector<complex> out;
  for (const auto& m : s.modes)
    if (!m.is_trivial) out.push_back(m.omega);
  return out;
}

// Largest distance from a value of `a` to its nearest value in `b`.
double mismatch(const std::vector<complex>& a, const std::vector<complex>& b) {
  double worst = 0.0;
  for (complex z : a) {
    double best = std::numeric_limits<double>::infinity();
    for (complex w : b) best = std::min(best, std::abs(z - w));
    worst = std::max(worst, best);
  }
  return worst;
}

ComplexField conj_field(const ComplexField& f) {
  ComplexField out = f;
  out.values() = f.values().conjugate();
  return out;
}

// ---------------------------------------------------------------------------

Outcome linear_oracle() {
  double worst = 0.0;
  for (double gamma : {0.0, 0.02, 0.04}) {
    PotentialParams p;
    p.gamma = gamma;
    for (const auto& pair : linear_spectrum(kGrid, p, 4)) {
      // Start Newton away from the answer so that it has something to do.
      ComplexField guess = pair.field;
      for (std::size_t i = 0; i < guess.size(); ++i) guess[i] *= 1.0 + 0.05 * std::exp(-kGrid.x(i) * kGrid.x(i));
      const StationaryState s = solve_stationary(guess, pair.mu + 0.01, params(gamma, 0.0));
      worst = std::max(worst, std::abs(s.mu - pair.mu));
    }
  }
  return {worst < 1e-7, fmt("max |dmu| = %.3g over 4 states x gamma in {0, 0.02, 0.04} (need < 1e-7)", worst)};
}

Outcome linear_threshold() {
  auto broken = [](double gamma) {
    PotentialParams p;
    p.gamma = gamma;
    const auto lin = linear_spectrum(kGrid, p, 2);
    return std::abs(lin[0].mu.imag()) > 1e-9;
  };
  double lo = 0.0, hi = 1.0;
  if (broken(lo) || !broken(hi)) return {false, "no coalescence in gamma in [0, 1]"};
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    (broken(mid) ? hi : lo) = mid;
  }
  const double g = 0.5 * (lo + hi);
  return {g >= 0.39 && g <= 0.43,
          fmt("lowest pair coalesces at gamma = %.4f +- %.1g (need [0.39, 0.43])", g, 0.5 * (hi - lo))};
}

Outcome self_trapping() {
  const StationaryState seed = broken_state(kGrid, params(0.0, -0.08), SymmetryClass::PTBrokenPlus);
  const Branch b = sweep_branch(seed, SweepParameter::N0a, 0.0, 0.005);
  if (!b.truncated) return {false, "broken branch reaches Na = 0 without terminating"};
  const Branch branches[] = {b};
  const auto bifs = detect_bifurcations(branches);
  if (bifs.empty()) return {false, "no bifurcation detected"};
  const double na = bifs.front().location;
  return {std::abs(std::abs(na) - 0.0075) <= 0.2 * 0.0075,
          fmt("broken branch terminates at Na = %.5f (need |Na| = 0.0075 +- 20%%)", na)};
}

Outcome tangent() {
  const SystemParams sp = params(0.04, 0.0);
  const std::vector<Branch> branches{
      sweep_branch(symmetric_state(kGrid, sp, SymmetryClass::PTSymmetricGround), SweepParameter::N0a, -0.1, 0.005),
      sweep_branch(symmetric_state(kGrid, sp, SymmetryClass::PTSymmetricExcited), SweepParameter::N0a, -0.1, 0.005)};
  for (const auto& b : detect_bifurcations(branches)) {
    if (b.kind != BifurcationKind::Tangent) continue;
    return {std::abs(b.location + 0.065) <= 0.01,
            fmt("tangent at N0a = %.5f in [%.5f, %.5f] (need -0.065 +- 0.01)", b.location, b.lower, b.upper)};
  }
  return {false, "no tangent bifurcation found"};
}

Outcome bdg_symmetry() {
  struct Case {
    const char* name;
    StationaryState state;
  };
  std::vector<Case> cases;
  for (auto [g, n] : {std::pair{0.02, -0.01}, std::pair{0.03, -0.03}}) {
    cases.push_back({"ground", symmetric_state(kGrid, params(g, n), SymmetryClass::PTSymmetricGround)});
    cases.push_back({"excited", symmetric_state(kGrid, params(g, n), SymmetryClass::PTSymmetricExcited)});
  }
  cases.push_back({"ground (unstable)", symmetric_state(kGrid, params(0.03, -0.05), SymmetryClass::PTSymmetricGround)});
  const StationaryState plus = broken_state(kGrid, params(0.03, -0.05), SymmetryClass::PTBrokenPlus);
  const StationaryState minus = broken_state(kGrid, params(0.03, -0.05), SymmetryClass::PTBrokenMinus);
  cases.push_back({"broken+", plus});
  cases.push_back({"broken-", minus});

  double quad = 0.0, conj_pair = 0.0, residual = 0.0;
  bool classes[4] = {};
  for (Nonlinearity kind : {Nonlinearity::Standard, Nonlinearity::NormIndependent}) {
    std::vector<std::vector<complex>> spectra;
    for (const auto& c : cases) {
      classes[static_cast<int>(c.state.symmetry)] = true;
      const BdGSpectrum spec = solve_bdg(c.state, kind);
      const auto w = nontrivial(spec);
      spectra.push_back(w);
      for (const auto& m : spec.modes) {
        if (m.is_trivial || std::abs(m.omega) > 10.0) continue;
        residual = std::max(residual, bdg_residual(c.state, kind, m.omega, m.u, m.v));
        residual = std::max(residual, bdg_residual(c.state, kind, -std::conj(m.omega), conj_field(m.v), conj_field(m.u)));
      }
      if (is_pt_symmetric(c.state.symmetry)) {
        std::vector<complex> cw, nw;
        for (complex z : w) {
          cw.push_back(std::conj(z));
          nw.push_back(-z);
        }
        quad = std::max({quad, mismatch(w, cw), mismatch(w, nw)});
      }
    }
    std::vector<complex> conj_minus;
    for (complex z : spectra.back()) conj_minus.push_back(std::conj(z));
    const auto& wp = spectra[spectra.size() - 2];
    conj_pair = std::max({conj_pair, mismatch(wp, conj_minus), mismatch(conj_minus, wp)});
  }
  const bool all_classes = std::all_of(std::begin(classes), std::end(classes), [](bool b) { return b; });
  const bool pass = all_classes && cases.size() >= 6 && quad < 1e-7 && conj_pair < 1e-7 && residual < 1e-7;
  return {pass, fmt("%zu states, all four classes: %s; quadruple mismatch %.2g, broken-pair conjugacy %.2g, "
                    "max mode residual %.2g (need < 1e-7), both nonlinearities",
                    cases.size(), all_classes ? "yes" : "no", quad, conj_pair, residual)};
}

Outcome onset_discrepancy() {
  constexpr double window = 1e-4;
  const StationaryState g = symmetric_state(kGrid, params(0.03, -0.03), SymmetryClass::PTSymmetricGround);
  const Branch ground = sweep_branch(g, SweepParameter::N0a, -0.05, 0.0025);
  const StationaryState plus = broken_state(kGrid, params(0.03, -0.05), SymmetryClass::PTBrokenPlus);
  const Branch broken = sweep_branch(plus, SweepParameter::N0a, 0.0, 0.0025);
  const std::vector<Branch> branches{ground, broken};
  double pitchfork = std::nan("");
  for (const auto& b : detect_bifurcations(branches))
    if (b.kind == BifurcationKind::Pitchfork) pitchfork = b.location;
  if (std::isnan(pitchfork)) return {false, "no pitchfork found at gamma = 0.03"};

  OnsetOptions oo;
  oo.window = window;
  const Onset s = instability_onset(ground, Nonlinearity::Standard, oo);
  const Onset n = instability_onset(ground, Nonlinearity::NormIndependent, oo);
  const double gap_s = s.location - pitchfork;
  const double gap_n = n.location - pitchfork;
  const bool pass = gap_s > window && std::abs(gap_n) < 2.0 * window;
  return {pass, fmt("pitchfork %.5f; standard onset %.5f (gap %+.2g, need > %.0e); norm-independent onset %.5f "
                    "(gap %+.2g, need |gap| < %.0e)",
                    pitchfork, s.location, gap_s, window, n.location, gap_n, 2 * window)};
}

Outcome dynamics_crossval() {
  // Stable oscillation: softest odd mode of the ground state at gamma = 0.03.
  const StationaryState g = symmetric_state(kGrid, params(0.03, -0.03), SymmetryClass::PTSymmetricGround);
  const BdGSpectrum spec = solve_bdg(g, Nonlinearity::Standard);
  const BdGMode* mode = nullptr;
  for (const auto& m : spec.modes)
    if (!m.is_trivial && m.omega.real() > 1e-6 && (!mode || m.omega.real() < mode->omega.real())) mode = &m;
  if (!mode) return {false, "no stable mode"};
  const double omega = mode->omega.real();
  const double periods = 5.0;
  PropagateOptions po;
  po.snapshot_every = 0;
  const Trajectory t = propagate(perturb_along_mode(g, *mode, 1e-3), g.params, periods * 2 * kPi / omega, 2e-3, 10, po);
  std::vector<double> zeros;
  for (std::size_t i = 1; i < t.times.size(); ++i) {
    const double a = t.observables[i - 1].x_mean;
    const double b = t.observables[i].x_mean;
    if ((a < 0.0) != (b < 0.0)) zeros.push_back(t.times[i - 1] + (t.times[i] - t.times[i - 1]) * a / (a - b));
  }
  if (zeros.size() < 4) return {false, "<x> does not oscillate"};
  const double measured = kPi * static_cast<double>(zeros.size() - 1) / (zeros.back() - zeros.front());
  const double freq_err = std::abs(measured / omega - 1.0);

  // Unstable growth: ground state past the onset.
  const StationaryState u = symmetric_state(kGrid, params(0.03, -0.05), SymmetryClass::PTSymmetricGround);
  const StabilityVerdict v = classify_stability(solve_bdg(u, Nonlinearity::Standard).modes);
  if (v.stable) return {false, "ground state at N0a = -0.05 is stable"};
  const double rate = v.max_growth_rate;
  constexpr double eps = 1e-4;
  po.snapshot_every = 1;
  const Trajectory tu = propagate(perturb_along_mode(u, *v.leading_mode, eps), u.params, 400.0, 2e-3, 250, po);
  // Fit log of the deviation from the stationary evolution until it reaches 1e-2.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < tu.fields.size(); ++i) {
    const double time = tu.snapshot_times[i];
    const ComplexField ref = std::exp(complex(0.0, -1.0) * u.mu * time) * u.psi;
    const double d = norm(tu.fields[i] - ref);
    if (d > 1e-2) break;
    sx += time;
    sy += std::log(d);
    sxx += time * time;
    sxy += time * std::log(d);
    ++count;
  }
  if (count < 5) return {false, "too few samples in the linear regime"};
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double rate_err = std::abs(slope / rate - 1.0);
  return {freq_err < 0.02 && rate_err < 0.05,
          fmt("oscillation %.6f vs Re omega %.6f (rel %.2g, need < 0.02); growth %.6f vs Im omega %.6f "
              "(rel %.2g, need < 0.05; %d samples)",
              measured, omega, freq_err, slope, rate, rate_err, count)};
}

Outcome norm_law() {
  const StationaryState s = broken_state(kGrid, params(0.03, -0.05, Nonlinearity::NormIndependent), SymmetryClass::PTBrokenPlus);
  const Trajectory t = propagate(s.psi, s.params, 5.0, 1e-3, 50);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    const double expected = std::exp(2.0 * s.mu.imag() * t.times[i]);
    worst = std::max(worst, std::abs(t.observables[i].n_particles / expected - 1.0));
  }
  const double grown = t.observables.back().n_particles;
  return {worst < 1e-3, fmt("||psi||^2 vs exp(2 Im mu t), Im mu = %.5f: max rel deviation %.2g over t in [0, 5] "
                            "(||psi(5)||^2 = %.4f; need < 1e-3)",
                            s.mu.imag(), worst, grown)};
}

Outcome bloch_suite() {
  const double gammas[] = {0.0, 0.0025, 0.01, 0.02, 0.03, 0.04};
  constexpr double n0a = -0.05;
  constexpr std::size_t starts = 16;
  constexpr double t_final = 200.0;
  constexpr double dt = 1e-3;
  constexpr double r_display = 2.0;

  double r_dev = 0.0;        // gamma = 0: max |R - 1|
  double err_max = 0.0;      // max err before the first exit from R <= r_display
  double mirror = 0.0;       // max Bloch-vector mismatch between t and -t under phi -> -phi
  int diverging = 0;
  for (double gamma : gammas) {
    const BlochBasis basis = build_basis(kGrid, params(gamma, n0a));
    for (std::size_t j = 0; j < starts; ++j) {
      const double a = 2.0 * kPi * static_cast<double>(j) / starts;
      const double theta = a <= kPi ? a : 2.0 * kPi - a;
      const double phi = a <= kPi ? 0.0 : kPi;
      const double th[] = {theta};
      const ComplexField psi0 = great_circle_states(basis, th, phi).front();
      const auto fwd = trajectory_to_bloch(propagate(psi0, basis.base_params, t_final, dt, 100), basis);
      // psi0 has real coefficients, so it is its own PT image.
      const auto bwd = trajectory_to_bloch(propagate(psi0, basis.base_params, -t_final, dt, 100), basis);
      diverging += fwd.back().t < t_final - 1e-9 || bwd.front().t > -t_final + 1e-9;
      // Samples are shown only until the trajectory first leaves the R <= 2 ball; after that the
      // field grows outside the two-mode span and may re-enter with a meaningless projection.
      const std::size_t common = std::min(fwd.size(), bwd.size());
      for (std::size_t k = 0; k < common; ++k) {
        const auto& f = fwd[k].point;
        const auto& b = bwd[bwd.size() - 1 - k].point;
        if (gamma == 0.0) r_dev = std::max({r_dev, std::abs(f.R - 1.0), std::abs(b.R - 1.0)});
        if (f.R > r_display || b.R > r_display) break;
        err_max = std::max({err_max, f.err, b.err});
        // Mirror (theta, phi) -> (theta, -phi) compared on the Cartesian Bloch vector.
        const double df[] = {f.R * std::sin(f.theta) * std::cos(f.phi), f.R * std::sin(f.theta) * std::sin(f.phi),
                             f.R * std::cos(f.theta)};
        const double db[] = {b.R * std::sin(b.theta) * std::cos(b.phi), -b.R * std::sin(b.theta) * std::sin(b.phi),
                             b.R * std::cos(b.theta)};
        mirror = std::max(mirror, std::hypot(df[0] - db[0], df[1] - db[1], df[2] - db[2]));
      }
    }
  }
  const bool r_ok = r_dev <= 1e-6;
  const bool err_ok = err_max < 0.004;
  const bool mirror_ok = mirror < 1e-6;
  return {r_ok && err_ok && mirror_ok,
          fmt("96 trajectories (%d diverging); gamma=0 max |R-1| = %.2g (need <= 1e-6) %s; max err = %.4g for "
              "R <= 2 (need < 0.004) %s; mirror mismatch %.2g (need < 1e-6) %s",
              diverging, r_dev, r_ok ? "ok" : "FAILS", err_max, err_ok ? "ok" : "FAILS", mirror,
              mirror_ok ? "ok" : "FAILS")};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"linear_oracle", 10, linear_oracle},
      {"linear_threshold", 60, linear_threshold},
      {"self_trapping", 60, self_trapping},
      {"tangent", 120, tangent},
      {"bdg_symmetry", 600, bdg_symmetry},
      {"onset_discrepancy", 600, onset_discrepancy},
      {"dynamics_crossval", 300, dynamics_crossval},
      {"norm_law", 600, norm_law},
      {"bloch_suite", 1800, bloch_suite},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  std::vector<std::string> selected;
  bool list = false;
  app.add_option("--criterion", selected, "criterion to run (repeatable; default all)");
  app.add_flag("--list", list, "print criterion names");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& c : criteria()) std::printf("%s\n", c.name.c_str());
    return 0;
  }
  int failures = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.name) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    std::printf("%s %s: %s; %.1f s (budget %.0f s%s)\n", pass ? "PASS" : "FAIL", c.name.c_str(), o.detail.c_str(),
                secs, c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
    failures += !pass;
  }
  return failures == 0 ? 0 : 1;
}
