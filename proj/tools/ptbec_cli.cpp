#include <cstdio>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "ptbec/errors.hpp"
#include "ptbec/io/config.hpp"
#include "ptbec/io/runner.hpp"

namespace {

// Exit codes: 0 success, 2 invalid input, 3 some tasks failed, 1 anything else.
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;

struct Options {
  std::string config;
  std::string out;
  std::size_t workers = 0;
  bool workers_set = false;
  std::map<std::string, std::string> overrides;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace ptbec;
  CLI::App app{"PT-symmetric double-well condensate laboratory"};
  app.set_version_flag("--version", std::string(PTBEC_VERSION));
  app.require_subcommand(1);

  Options opt;
  const char* modes[][2] = {
      {"spectrum", "stationary branches and bifurcations (spectrum.csv, bifurcations.json)"},
      {"stability", "BdG spectra along the branches and instability onsets (bdg.csv, onsets.json)"},
      {"evolve", "split-step propagation, one trajectory per gamma (traj_<id>.csv)"},
      {"bloch", "great-circle fans projected on the Bloch sphere (bloch_<id>.csv, eigencurves.csv)"}};
  for (const auto& [name, help] : modes) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "key = value configuration file");
    sub->add_option("--out", opt.out, "output directory (same as output.dir)");
    sub->add_option("--workers", opt.workers, "worker threads (same as run.workers)")
        ->each([&](const std::string&) { opt.workers_set = true; });
    for (const auto& key : io::config_keys()) {
      if (key.name == "mode") continue;
      sub->add_option_function<std::string>(
          "--" + key.name, [&opt, name = key.name](const std::string& v) { opt.overrides[name] = v; },
          key.help);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  io::RunConfig cfg;
  try {
    cfg.mode = io::parse_mode(app.get_subcommands().front()->get_name());
    if (!opt.config.empty()) io::apply_config_file(cfg, opt.config);
    // The subcommand decides the mode even if the file names another one.
    cfg.mode = io::parse_mode(app.get_subcommands().front()->get_name());
    for (const auto& [k, v] : opt.overrides) io::set_key(cfg, k, v);
    if (!opt.out.empty()) cfg.output_dir = opt.out;
    if (opt.workers_set) cfg.workers = opt.workers;
    cfg.validate();
  } catch (const UsageError& e) {
    std::fprintf(stderr, "ptbec: %s\n", e.what());
    return kExitUsage;
  }

  try {
    const io::RunSummary summary = io::run(cfg);
    for (const auto& f : summary.failures)
      std::fprintf(stderr, "ptbec: task %s failed: %s\n", f.task.c_str(), f.error.c_str());
    std::printf("wrote %zu files to %s in %.1f s\n", summary.files.size() + 1,
                cfg.output_dir.string().c_str(), summary.wall_seconds);
    return summary.failures.empty() ? 0 : kExitPartial;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "ptbec: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "ptbec: %s\n", e.what());
    return 1;
  }
}
