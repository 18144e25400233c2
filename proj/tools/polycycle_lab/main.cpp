#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using polycycle::lab::Format;
  using polycycle::lab::RunConfig;

  CLI::App app{"polycycle_lab: rectifying charts, sparkling connections and visit frequencies"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::int64_t depth = 0;
  const std::map<std::string, Format> formats{{"csv", Format::Csv}, {"json", Format::Json}};

  const std::pair<const char*, const char*> commands[] = {
      {"rectify", "Rectifying chart of a map model at sampled x"},
      {"sparkle", "Sparkling-connection roots eps_n for a model and target"},
      {"th-run", "Spark tables, arc assignment and visit frequencies of a scenario"},
      {"freq", "Invariants phi, Phi and the projective class; verdict for two configs"},
      {"rotate", "Visit frequencies of a rotation orbit against an arc"},
      {"certify", "Grid certification of the map-model bounds"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input,-i", cfg.input, "JSON config file");
    sub->add_option("--output,-o", cfg.output, "Output file (default: stdout)");
    sub->add_option("--format,-f", cfg.format, "csv or json")->transform(CLI::CheckedTransformer(formats));
    sub->add_option("--tol", cfg.tol, "Tolerance on the xi-scale");
    sub->add_option("--depth", depth, "Depth / range end (>= 1)");
    sub->add_option("--seed", cfg.seed, "Seed for randomized grid jitter");
    sub->add_flag("--check", cfg.check, "Run the invariant suite and report pass/fail per property");
    if (std::string(name) == "th-run") sub->add_option("--table", cfg.table, "Also write the spark table CSV here");
    sub->callback([&cfg, sub] { cfg.command = sub->get_name(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return polycycle::lab::kExitError;
  }
  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--depth") > 0) cfg.depth = depth;
  }
  return polycycle::lab::run(cfg, std::cerr);
}
