#include "ptbec/io/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "ptbec/bloch.hpp"
#include "ptbec/continuation.hpp"
#include "ptbec/dynamics.hpp"
#include "ptbec/errors.hpp"
#include "ptbec/io/csv.hpp"
#include "ptbec/seeding.hpp"
#include "ptbec/stability.hpp"

namespace ptbec::io {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Runs fn(0..count-1) on a fixed pool. Each index must only touch its own
// result slot, which keeps the output independent of scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (workers <= 1) {
    loop();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
}

std::string task_id(std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return buf;
}

// Two sweeps out of one seed, one toward each end of the range.
struct Family {
  SymmetryClass label;
  Branch down;
  Branch up;

  std::vector<const StationaryState*> ordered() const {
    std::vector<const StationaryState*> out;
    for (auto it = down.states.rbegin(); it != down.states.rend(); ++it) out.push_back(&*it);
    for (std::size_t i = 1; i < up.states.size(); ++i) out.push_back(&up.states[i]);
    return out;
  }
};

StationaryState pt_image(const StationaryState& s) {
  ComplexField psi = pt_transform(s.psi);
  const complex mu = std::conj(s.mu);
  return {psi, mu, s.params, classify_symmetry(psi, mu), s.residual, s.iterations};
}

Branch pt_image(const Branch& b) {
  Branch out = b;
  for (auto& s : out.states) s = pt_image(s);
  out.label = out.states.front().symmetry;
  return out;
}

struct Families {
  std::vector<Family> families;
  std::vector<std::string> notes;
};

// First PT-broken state reached by displacing symmetric states along their
// softest BdG mode, walking the symmetric branch outward from its seed.
std::optional<StationaryState> seed_from_modes(const Family& sym, bool attractive) {
  const Branch& b = attractive ? sym.down : sym.up;
  for (const StationaryState& s : b.states) {
    const BdGSpectrum spec = solve_bdg(s, Nonlinearity::NormIndependent);
    const BdGMode* best = nullptr;
    for (const auto& m : spec.modes)
      if (!m.is_trivial && (!best || std::abs(m.omega) < std::abs(best->omega))) best = &m;
    if (!best) continue;
    try {
      StationaryState t = broken_from_mode(s, best->u, best->v, 1e-2);
      if (t.symmetry != SymmetryClass::PTBrokenPlus) t = pt_image(t);
      if (t.symmetry == SymmetryClass::PTBrokenPlus) return t;
    } catch (const NotAvailable&) {
    }
  }
  return std::nullopt;
}

Families compute_families(const RunConfig& cfg, double gamma) {
  const GridSpec grid = cfg.grid();
  SeedOptions seed_opts;
  seed_opts.n0a_step = cfg.n0a_step;
  SweepOptions sweep_opts;

  Families out;
  const double lo = cfg.n0a_min;
  const double hi = cfg.n0a_max;
  const double center = std::clamp(0.0, lo, hi);
  const double anchors[] = {center, hi, lo, 0.5 * (center + hi), 0.5 * (center + lo)};

  auto family_from = [&](const StationaryState& seed) {
    return Family{seed.symmetry, sweep_branch(seed, SweepParameter::N0a, lo, cfg.n0a_step, sweep_opts),
                  sweep_branch(seed, SweepParameter::N0a, hi, cfg.n0a_step, sweep_opts)};
  };

  std::optional<Family> ground, excited;
  for (SymmetryClass cls : {SymmetryClass::PTSymmetricGround, SymmetryClass::PTSymmetricExcited}) {
    std::optional<StationaryState> seed;
    for (double a : anchors) {
      try {
        seed = symmetric_state(grid, cfg.system(gamma, a), cls, seed_opts);
        break;
      } catch (const NotAvailable&) {
      } catch (const NonConvergence&) {
      }
    }
    if (!seed) {
      out.notes.push_back("no " + std::string(to_string(cls)) + " state in the N0a range");
      continue;
    }
    (cls == SymmetryClass::PTSymmetricGround ? ground : excited) = family_from(*seed);
  }
  if (ground) out.families.push_back(*ground);
  if (excited) out.families.push_back(*excited);

  std::vector<Family> broken;
  for (bool attractive : {true, false}) {
    const double anchor = attractive ? lo : hi;
    const bool covered = std::any_of(broken.begin(), broken.end(), [&](const Family& f) {
      const double a = f.down.last_parameter();
      const double b = f.up.last_parameter();
      return std::min(a, b) <= anchor && anchor <= std::max(a, b);
    });
    if (covered || (attractive ? lo >= 0.0 : hi <= 0.0)) continue;

    std::optional<StationaryState> seed;
    if (cfg.broken_seeding == BrokenSeeding::Mode) {
      // Attractive pitchforks sit on the ground branch, repulsive ones on the excited branch.
      const auto& sym = attractive ? ground : excited;
      if (sym) seed = seed_from_modes(*sym, attractive);
    } else {
      try {
        seed = broken_state(grid, cfg.system(gamma, anchor), SymmetryClass::PTBrokenPlus, seed_opts);
      } catch (const NotAvailable&) {
      } catch (const NonConvergence&) {
      }
    }
    if (!seed) continue;
    broken.push_back(family_from(*seed));
  }
  for (const Family& f : broken) {
    out.families.push_back(f);
    out.families.push_back({SymmetryClass::PTBrokenMinus, pt_image(f.down), pt_image(f.up)});
  }
  return out;
}

std::vector<Branch> segments(const std::vector<Family>& fams) {
  std::vector<Branch> out;
  for (const auto& f : fams) {
    out.push_back(f.down);
    out.push_back(f.up);
  }
  return out;
}

ordered_json bifurcation_json(double gamma, const Bifurcation& b) {
  ordered_json parts = ordered_json::array();
  for (auto c : b.participants) parts.push_back(std::string(to_string(c)));
  return {{"gamma", gamma},
          {"kind", std::string(to_string(b.kind))},
          {"parameter", std::string(to_string(b.parameter))},
          {"location", b.location},
          {"lower", b.lower},
          {"upper", b.upper},
          {"participants", parts}};
}

struct Context {
  const RunConfig& cfg;
  RunSummary& summary;
  ordered_json tasks = ordered_json::array();
  std::mutex mutex;

  fs::path path(const std::string& name) const { return cfg.output_dir / name; }

  void fail(const std::string& task, const std::string& what) {
    std::lock_guard lock(mutex);
    summary.failures.push_back({task, what});
  }
};

// Runs body() and records any library error against the task.
template <class F>
void guarded(Context& ctx, const std::string& task, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    ctx.fail(task, e.what());
  }
}

std::string gamma_task(double gamma) { return "gamma=" + format_double(gamma); }

void run_spectrum(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<std::optional<Families>> results(cfg.gammas.size());
  std::vector<std::vector<Bifurcation>> bifs(cfg.gammas.size());
  parallel_for(cfg.gammas.size(), cfg.workers, [&](std::size_t i) {
    guarded(ctx, gamma_task(cfg.gammas[i]), [&] {
      results[i] = compute_families(cfg, cfg.gammas[i]);
      const auto segs = segments(results[i]->families);
      bifs[i] = detect_bifurcations(segs);
    });
  });

  CsvWriter csv(ctx.path("spectrum.csv"), {"gamma", "n0a", "branch", "class", "re_mu", "im_mu"});
  ordered_json bj = ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) continue;
    for (const auto& note : results[i]->notes) ctx.fail(gamma_task(cfg.gammas[i]), note);
    long long id = 0;
    for (const auto& f : results[i]->families) {
      for (const StationaryState* s : f.ordered())
        csv.row({cfg.gammas[i], s->params.n0a, id, std::string(to_string(f.label)), s->mu.real(),
                 s->mu.imag()});
      ++id;
    }
    for (const auto& b : bifs[i]) bj.push_back(bifurcation_json(cfg.gammas[i], b));
  }
  csv.close();
  std::ofstream(ctx.path("bifurcations.json")) << bj.dump(2) << '\n';
  ctx.summary.files.push_back("spectrum.csv");
  ctx.summary.files.push_back("bifurcations.json");
}

void run_stability(Context& ctx) {
  const auto& cfg = ctx.cfg;
  struct Row {
    double n0a;
    long long branch;
    long long mode;
    complex omega;
    bool trivial;
  };
  struct Result {
    std::vector<Row> rows;
    ordered_json onsets = ordered_json::array();
    std::vector<Bifurcation> bifs;
  };
  std::vector<std::optional<Result>> results(cfg.gammas.size());

  parallel_for(cfg.gammas.size(), cfg.workers, [&](std::size_t i) {
    const double gamma = cfg.gammas[i];
    guarded(ctx, gamma_task(gamma), [&] {
      const Families fams = compute_families(cfg, gamma);
      for (const auto& note : fams.notes) ctx.fail(gamma_task(gamma), note);
      Result r;
      r.bifs = detect_bifurcations(segments(fams.families));
      long long id = 0;
      for (const auto& f : fams.families) {
        for (const StationaryState* s : f.ordered()) {
          const BdGSpectrum spec = solve_bdg(*s, cfg.nonlinearity, cfg.bdg_modes);
          long long m = 0;
          for (const auto& mode : spec.modes)
            r.rows.push_back({s->params.n0a, id, m++, mode.omega, mode.is_trivial});
        }
        if (is_pt_symmetric(f.label)) {
          for (const Branch* seg : {&f.down, &f.up}) {
            ordered_json o = {{"gamma", gamma},
                              {"branch", id},
                              {"class", std::string(to_string(f.label))},
                              {"nonlinearity", std::string(to_string(cfg.nonlinearity))},
                              {"from", seg->first_parameter()},
                              {"to", seg->last_parameter()}};
            try {
              OnsetOptions oo;
              oo.window = cfg.onset_window;
              const Onset on = instability_onset(*seg, cfg.nonlinearity, oo);
              o["onset"] = {{"location", on.location}, {"lower", on.lower}, {"upper", on.upper}};
            } catch (const NotFound& e) {
              o["onset"] = nullptr;
              o["reason"] = e.what();
            }
            r.onsets.push_back(o);
          }
        }
        ++id;
      }
      results[i] = std::move(r);
    });
  });

  CsvWriter csv(ctx.path("bdg.csv"),
                {"gamma", "n0a", "branch", "mode_index", "re_omega", "im_omega", "is_trivial"});
  ordered_json onsets = ordered_json::array();
  ordered_json bj = ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) continue;
    for (const Row& row : results[i]->rows)
      csv.row({cfg.gammas[i], row.n0a, row.branch, row.mode, row.omega.real(), row.omega.imag(),
               static_cast<long long>(row.trivial)});
    for (const auto& o : results[i]->onsets) onsets.push_back(o);
    for (const auto& b : results[i]->bifs) bj.push_back(bifurcation_json(cfg.gammas[i], b));
  }
  csv.close();
  std::ofstream(ctx.path("onsets.json"))
      << ordered_json{{"onsets", onsets}, {"bifurcations", bj}}.dump(2) << '\n';
  ctx.summary.files.push_back("bdg.csv");
  ctx.summary.files.push_back("onsets.json");
}

std::string initial_name(InitialKind k) {
  switch (k) {
    case InitialKind::Ground: return "ground";
    case InitialKind::Excited: return "excited";
    case InitialKind::BrokenPlus: return "broken_plus";
    case InitialKind::BrokenMinus: return "broken_minus";
    case InitialKind::Sphere: return "sphere";
  }
  return "?";
}

ComplexField initial_state(const RunConfig& cfg, double gamma) {
  const GridSpec grid = cfg.grid();
  const SystemParams params = cfg.system(gamma, cfg.n0a);
  SeedOptions so;
  so.n0a_step = cfg.n0a_step;
  if (cfg.initial == InitialKind::Sphere) {
    const BlochBasis basis = build_basis(grid, params, so);
    const double thetas[] = {cfg.theta};
    return great_circle_states(basis, thetas, cfg.phi).front();
  }
  const StationaryState s = [&] {
    switch (cfg.initial) {
      case InitialKind::Ground:
        return symmetric_state(grid, params, SymmetryClass::PTSymmetricGround, so);
      case InitialKind::Excited:
        return symmetric_state(grid, params, SymmetryClass::PTSymmetricExcited, so);
      case InitialKind::BrokenPlus:
        return broken_state(grid, params, SymmetryClass::PTBrokenPlus, so);
      default:
        return broken_state(grid, params, SymmetryClass::PTBrokenMinus, so);
    }
  }();
  if (cfg.perturb_mode < 0) return s.psi;
  const BdGSpectrum spec = solve_bdg(s, cfg.nonlinearity);
  if (static_cast<std::size_t>(cfg.perturb_mode) >= spec.modes.size())
    throw UsageError("dynamics.perturb_mode out of range");
  return perturb_along_mode(s, spec.modes[static_cast<std::size_t>(cfg.perturb_mode)], cfg.epsilon);
}

void run_evolve(Context& ctx) {
  const auto& cfg = ctx.cfg;
  std::vector<std::optional<Trajectory>> trajs(cfg.gammas.size());
  parallel_for(cfg.gammas.size(), cfg.workers, [&](std::size_t i) {
    const double gamma = cfg.gammas[i];
    guarded(ctx, "traj_" + task_id(i), [&] {
      PropagateOptions po;
      po.n0 = cfg.n0;
      po.snapshot_every = 0;
      const Trajectory t = propagate(initial_state(cfg, gamma), cfg.system(gamma, cfg.n0a),
                                     cfg.t_final, cfg.dt, cfg.sample_every, po);
      CsvWriter csv(ctx.path("traj_" + task_id(i) + ".csv"), {"t", "norm", "n_particles", "x_mean"});
      for (std::size_t k = 0; k < t.times.size(); ++k)
        csv.row({t.times[k], t.observables[k].norm, t.observables[k].n_particles,
                 t.observables[k].x_mean});
      csv.close();
      trajs[i] = t;
    });
  });
  for (std::size_t i = 0; i < cfg.gammas.size(); ++i) {
    ordered_json t = {{"id", "traj_" + task_id(i)},
                      {"gamma", cfg.gammas[i]},
                      {"n0a", cfg.n0a},
                      {"initial", initial_name(cfg.initial)}};
    if (trajs[i]) {
      t["diverged"] = trajs[i]->diverged;
      t["divergence_time"] =
          trajs[i]->divergence_time ? ordered_json(*trajs[i]->divergence_time) : ordered_json();
    }
    ctx.tasks.push_back(t);
    if (trajs[i]) ctx.summary.files.push_back("traj_" + task_id(i) + ".csv");
  }
}

void run_bloch(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::size_t ng = cfg.gammas.size();
  const std::size_t ns = cfg.bloch_starts;
  const GridSpec grid = cfg.grid();
  SeedOptions so;
  so.n0a_step = cfg.n0a_step;

  std::vector<std::optional<BlochBasis>> bases(ng);
  std::vector<std::optional<Families>> fams(ng);
  parallel_for(ng, cfg.workers, [&](std::size_t i) {
    guarded(ctx, gamma_task(cfg.gammas[i]) + " basis", [&] {
      bases[i] = build_basis(grid, cfg.system(cfg.gammas[i], cfg.n0a), so);
    });
    if (bases[i] && cfg.bloch_eigencurves)
      guarded(ctx, gamma_task(cfg.gammas[i]) + " eigencurves",
              [&] { fams[i] = compute_families(cfg, cfg.gammas[i]); });
  });

  // Start j sits at angle 2 pi j / ns on the great circle through both poles.
  auto start_angles = [&](std::size_t j) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(ns);
    return a <= std::numbers::pi ? std::pair{a, 0.0} : std::pair{2.0 * std::numbers::pi - a, std::numbers::pi};
  };

  struct Meta {
    bool written = false;
    bool diverged_forward = false;
    bool diverged_backward = false;
    double max_err = 0.0;
  };
  std::vector<Meta> meta(ng * ns);
  parallel_for(ng * ns, cfg.workers, [&](std::size_t k) {
    const std::size_t i = k / ns;
    const std::size_t j = k % ns;
    if (!bases[i]) return;
    const std::string id = task_id(i) + "_" + task_id(j);
    guarded(ctx, "bloch_" + id, [&] {
      const BlochBasis& basis = *bases[i];
      const auto [theta, phi] = start_angles(j);
      const double th[] = {theta};
      const ComplexField psi0 = great_circle_states(basis, th, phi).front();
      PropagateOptions po;
      po.n0 = cfg.n0;
      const SystemParams params = cfg.system(cfg.gammas[i], cfg.n0a);
      const double span = std::abs(cfg.t_final);
      const Trajectory fwd = propagate(psi0, params, span, cfg.dt, cfg.sample_every, po);
      std::vector<BlochSample> samples;
      Meta m;
      if (cfg.bloch_backward) {
        const Trajectory bwd = propagate(psi0, params, -span, cfg.dt, cfg.sample_every, po);
        for (const auto& s : trajectory_to_bloch(bwd, basis))
          if (s.t != 0.0) samples.push_back(s);
        m.diverged_backward = bwd.diverged;
      }
      for (const auto& s : trajectory_to_bloch(fwd, basis)) samples.push_back(s);
      m.diverged_forward = fwd.diverged;
      m.max_err = max_error(samples);

      CsvWriter csv(ctx.path("bloch_" + id + ".csv"), {"t", "R", "theta", "phi", "chi", "err"});
      for (const auto& s : samples)
        csv.row({s.t, s.point.R, s.point.theta, s.point.phi, s.point.chi, s.point.err});
      csv.close();
      m.written = true;
      meta[k] = m;
    });
  });

  for (std::size_t k = 0; k < ng * ns; ++k) {
    const std::size_t i = k / ns;
    const std::size_t j = k % ns;
    if (!bases[i]) continue;
    const std::string id = task_id(i) + "_" + task_id(j);
    const auto [theta, phi] = start_angles(j);
    ctx.tasks.push_back({{"id", "bloch_" + id},
                         {"gamma", cfg.gammas[i]},
                         {"n0a", cfg.n0a},
                         {"theta0", theta},
                         {"phi0", phi},
                         {"diverged_forward", meta[k].diverged_forward},
                         {"diverged_backward", meta[k].diverged_backward},
                         {"max_err", meta[k].max_err}});
    if (meta[k].written) ctx.summary.files.push_back("bloch_" + id + ".csv");
  }

  if (cfg.bloch_eigencurves) {
    CsvWriter csv(ctx.path("eigencurves.csv"),
                  {"gamma", "branch", "class", "n0a", "R", "theta", "phi"});
    for (std::size_t i = 0; i < ng; ++i) {
      if (!bases[i] || !fams[i]) continue;
      long long id = 0;
      for (const auto& f : fams[i]->families) {
        Branch joined;
        joined.label = f.label;
        for (const StationaryState* s : f.ordered()) joined.states.push_back(*s);
        const double base = bases[i]->base_params.n0a;
        std::size_t p = 0;
        const auto points = project_branch(joined, *bases[i]);
        for (const StationaryState& s : joined.states) {
          const double ratio = s.params.n0a / base;
          if (!(ratio > 0.0) || !std::isfinite(ratio)) continue;
          const BlochPoint& pt = points[p++];
          csv.row({cfg.gammas[i], id, std::string(to_string(f.label)), s.params.n0a, pt.R, pt.theta,
                   pt.phi});
        }
        ++id;
      }
    }
    csv.close();
    ctx.summary.files.push_back("eigencurves.csv");
  }
}

}  // namespace

RunSummary run(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(cfg.output_dir);

  RunSummary summary;
  Context ctx{cfg, summary, ordered_json::array(), {}};
  switch (cfg.mode) {
    case Mode::Spectrum: run_spectrum(ctx); break;
    case Mode::Stability: run_stability(ctx); break;
    case Mode::Evolve: run_evolve(ctx); break;
    case Mode::Bloch: run_bloch(ctx); break;
  }
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::sort(summary.failures.begin(), summary.failures.end(),
            [](const TaskFailure& a, const TaskFailure& b) {
              return std::tie(a.task, a.error) < std::tie(b.task, b.error);
            });

  ordered_json config = ordered_json::object();
  for (const auto& key : config_keys()) config[key.name] = get_key(cfg, key.name);
  config["mode"] = std::string(to_string(cfg.mode));
  ordered_json files = ordered_json::array();
  for (const auto& f : summary.files)
    files.push_back({{"path", f.string()},
                     {"sha256", sha256_file(cfg.output_dir / f)},
                     {"bytes", fs::file_size(cfg.output_dir / f)}});
  ordered_json failures = ordered_json::array();
  for (const auto& f : summary.failures) failures.push_back({{"task", f.task}, {"error", f.error}});

  const ordered_json manifest = {{"program", "ptbec"},
                                 {"version", PTBEC_VERSION},
                                 {"mode", std::string(to_string(cfg.mode))},
                                 {"config", config},
                                 {"wall_seconds", summary.wall_seconds},
                                 {"files", files},
                                 {"tasks", ctx.tasks},
                                 {"failures", failures}};
  std::ofstream(cfg.output_dir / "manifest.json") << manifest.dump(2) << '\n';
  return summary;
}

}  // namespace ptbec::io
