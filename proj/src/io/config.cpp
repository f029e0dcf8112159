#include "ptbec/io/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "ptbec/errors.hpp"
#include "ptbec/io/csv.hpp"

namespace ptbec::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw UsageError("expected a number, got '" + std::string(s) + "'");
  return v;
}

long long to_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw UsageError("expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::size_t to_count(std::string_view s) {
  const long long v = to_integer(s);
  if (v < 0) throw UsageError("expected a non-negative integer, got '" + std::string(s) + "'");
  return static_cast<std::size_t>(v);
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw UsageError("expected true or false, got '" + std::string(s) + "'");
}

std::vector<double> to_list(std::string_view s) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(to_double(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

template <class E>
struct EnumName {
  E value;
  std::string_view name;
};

constexpr EnumName<InitialKind> kInitialNames[] = {
    {InitialKind::Ground, "ground"},
    {InitialKind::Excited, "excited"},
    {InitialKind::BrokenPlus, "broken_plus"},
    {InitialKind::BrokenMinus, "broken_minus"},
    {InitialKind::Sphere, "sphere"},
};

constexpr EnumName<BrokenSeeding> kSeedingNames[] = {
    {BrokenSeeding::Localized, "localized"},
    {BrokenSeeding::Mode, "mode"},
};

template <class E, std::size_t N>
E parse_enum(const EnumName<E> (&names)[N], std::string_view s) {
  s = trim(s);
  for (const auto& n : names)
    if (n.name == s) return n.value;
  std::string allowed;
  for (const auto& n : names) allowed += (allowed.empty() ? "" : ", ") + std::string(n.name);
  throw UsageError("unknown value '" + std::string(s) + "' (allowed: " + allowed + ")");
}

template <class E, std::size_t N>
std::string enum_text(const EnumName<E> (&names)[N], E v) {
  for (const auto& n : names)
    if (n.value == v) return std::string(n.name);
  return "?";
}

struct Entry {
  KeyInfo info;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define PTBEC_DOUBLE(key, member, help)                                          \
  Entry {                                                                        \
    {key, help}, [](RunConfig& c, std::string_view v) { c.member = to_double(v); }, \
        [](const RunConfig& c) { return format_double(c.member); }               \
  }
#define PTBEC_COUNT(key, member, help)                                          \
  Entry {                                                                       \
    {key, help}, [](RunConfig& c, std::string_view v) { c.member = to_count(v); }, \
        [](const RunConfig& c) { return std::to_string(c.member); }             \
  }
#define PTBEC_BOOL(key, member, help)                                           \
  Entry {                                                                       \
    {key, help}, [](RunConfig& c, std::string_view v) { c.member = to_bool(v); }, \
        [](const RunConfig& c) { return std::string(c.member ? "true" : "false"); } \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      Entry{{"mode", "spectrum, stability, evolve or bloch"},
            [](RunConfig& c, std::string_view v) { c.mode = parse_mode(trim(v)); },
            [](const RunConfig& c) { return std::string(to_string(c.mode)); }},
      PTBEC_DOUBLE("grid.half_width", grid_half_width, "grid spans [-half_width, half_width]"),
      PTBEC_COUNT("grid.points", grid_points, "number of grid points (even)"),
      PTBEC_DOUBLE("potential.v0", potential.v0, "barrier height"),
      PTBEC_DOUBLE("potential.sigma", potential.sigma, "barrier width parameter"),
      PTBEC_DOUBLE("potential.rho", potential.rho, "width of the gain/loss term"),
      Entry{{"system.nonlinearity", "standard or norm_independent"},
            [](RunConfig& c, std::string_view v) {
              const auto k = parse_nonlinearity(trim(v));
              if (!k)
                throw UsageError("unknown value '" + std::string(trim(v)) +
                                 "' (allowed: standard, norm_independent)");
              c.nonlinearity = *k;
            },
            [](const RunConfig& c) { return std::string(to_string(c.nonlinearity)); }},
      Entry{{"sweep.gamma", "comma-separated gain/loss values, one task each"},
            [](RunConfig& c, std::string_view v) { c.gammas = to_list(v); },
            [](const RunConfig& c) { return list_text(c.gammas); }},
      PTBEC_DOUBLE("sweep.n0a_min", n0a_min, "lower end of the N0a sweep"),
      PTBEC_DOUBLE("sweep.n0a_max", n0a_max, "upper end of the N0a sweep"),
      PTBEC_DOUBLE("sweep.n0a_step", n0a_step, "largest continuation step in N0a"),
      Entry{{"seed.broken", "localized or mode: how PT-broken branches are seeded"},
            [](RunConfig& c, std::string_view v) { c.broken_seeding = parse_enum(kSeedingNames, v); },
            [](const RunConfig& c) { return enum_text(kSeedingNames, c.broken_seeding); }},
      PTBEC_COUNT("stability.modes", bdg_modes, "nontrivial BdG modes kept per state (0 = all)"),
      PTBEC_DOUBLE("stability.onset_window", onset_window, "bisection window for onsets"),
      PTBEC_DOUBLE("dynamics.n0a", n0a, "interaction strength for evolve and bloch"),
      PTBEC_DOUBLE("dynamics.t_final", t_final, "final time; negative integrates backward"),
      PTBEC_DOUBLE("dynamics.dt", dt, "time step"),
      PTBEC_COUNT("dynamics.sample_every", sample_every, "steps between samples"),
      PTBEC_DOUBLE("dynamics.n0", n0, "particle-number scale N0"),
      Entry{{"dynamics.initial", "ground, excited, broken_plus, broken_minus or sphere"},
            [](RunConfig& c, std::string_view v) { c.initial = parse_enum(kInitialNames, v); },
            [](const RunConfig& c) { return enum_text(kInitialNames, c.initial); }},
      PTBEC_DOUBLE("dynamics.theta", theta, "polar angle of a sphere start"),
      PTBEC_DOUBLE("dynamics.phi", phi, "azimuth of a sphere start"),
      Entry{{"dynamics.perturb_mode", "BdG mode index to kick along (-1 = none)"},
            [](RunConfig& c, std::string_view v) {
              c.perturb_mode = static_cast<int>(to_integer(v));
            },
            [](const RunConfig& c) { return std::to_string(c.perturb_mode); }},
      PTBEC_DOUBLE("dynamics.epsilon", epsilon, "kick amplitude"),
      PTBEC_COUNT("bloch.starts", bloch_starts, "initial states around the great circle"),
      PTBEC_BOOL("bloch.backward", bloch_backward, "also integrate backward in time"),
      PTBEC_BOOL("bloch.eigencurves", bloch_eigencurves, "project stationary branches"),
      Entry{{"output.dir", "output directory"},
            [](RunConfig& c, std::string_view v) { c.output_dir = std::string(trim(v)); },
            [](const RunConfig& c) { return c.output_dir.string(); }},
      PTBEC_COUNT("run.workers", workers, "worker threads (0 = available cores)"),
  };
  return table;
}

#undef PTBEC_DOUBLE
#undef PTBEC_COUNT
#undef PTBEC_BOOL

const Entry& find_entry(std::string_view key) {
  for (const auto& e : entries())
    if (e.info.name == key) return e;
  throw UsageError("unknown key '" + std::string(key) + "'");
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Spectrum: return "spectrum";
    case Mode::Stability: return "stability";
    case Mode::Evolve: return "evolve";
    case Mode::Bloch: return "bloch";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  for (Mode m : {Mode::Spectrum, Mode::Stability, Mode::Evolve, Mode::Bloch})
    if (to_string(m) == text) return m;
  throw UsageError("unknown mode '" + std::string(text) + "'");
}

SystemParams RunConfig::system(double gamma, double n0a_value) const {
  SystemParams p;
  p.potential = potential;
  p.potential.gamma = gamma;
  p.n0a = n0a_value;
  p.nonlinearity = nonlinearity;
  return p;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw UsageError(key + ": " + why);
  };
  if (!(grid_half_width > 0.0)) fail("grid.half_width", "must be positive");
  if (grid_points < 4 || grid_points % 2 != 0) fail("grid.points", "must be even and >= 4");
  try {
    potential.validate();
  } catch (const UsageError& e) {
    throw UsageError(e.what());
  }
  if (gammas.empty()) fail("sweep.gamma", "empty list");
  for (double g : gammas)
    if (!(g >= 0.0)) fail("sweep.gamma", "values must be non-negative");
  if (!(n0a_min < n0a_max)) fail("sweep.n0a_min", "empty N0a range (need n0a_min < n0a_max)");
  if (!(n0a_step > 0.0)) fail("sweep.n0a_step", "must be positive");
  if (!(onset_window > 0.0)) fail("stability.onset_window", "must be positive");
  if (!(dt > 0.0)) fail("dynamics.dt", "must be positive");
  if (!std::isfinite(t_final) || t_final == 0.0) fail("dynamics.t_final", "must be nonzero");
  if (sample_every == 0) fail("dynamics.sample_every", "must be at least 1");
  if (!(n0 > 0.0)) fail("dynamics.n0", "must be positive");
  if (bloch_starts == 0) fail("bloch.starts", "must be at least 1");
}

const std::vector<KeyInfo>& config_keys() {
  static const std::vector<KeyInfo> keys = [] {
    std::vector<KeyInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return keys;
}

void set_key(RunConfig& cfg, std::string_view key, std::string_view value) {
  const Entry& e = find_entry(key);
  try {
    e.set(cfg, value);
  } catch (const UsageError& err) {
    throw UsageError(std::string(key) + ": " + err.what());
  }
}

std::string get_key(const RunConfig& cfg, std::string_view key) { return find_entry(key).get(cfg); }

void apply_config_text(RunConfig& cfg, std::string_view text, std::string_view source) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw UsageError(where + "expected 'key = value', got '" + std::string(line) + "'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (value.empty()) throw UsageError(where + std::string(key) + ": missing value");
    try {
      set_key(cfg, key, value);
    } catch (const UsageError& e) {
      throw UsageError(where + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path.string());
}

}  // namespace ptbec::io
