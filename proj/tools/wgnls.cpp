#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wgnls/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulator and variational toolkit for the focusing cubic NLS on R^2 x T"};
  app.require_subcommand(1);

  const std::map<std::string, std::string> about = {
      {"constants", "compute the variational constants and refresh the cache"},
      {"classify", "report diagnostics and the threshold regime of the datum"},
      {"evolve", "run the full split-step solver"},
      {"resonant-evolve", "run the resonant system on the embedded datum"},
      {"weinstein", "evaluate the Weinstein sequence on the ground state"},
      {"large-scale", "compare rescaled full runs with the resonant proxy"},
      {"virial", "record the localized virial identity along a run"},
      {"campaign", "classify and evolve every [row.*] of the config"},
      {"gn-test", "sample the mixed Gagliardo-Nirenberg inequality"},
  };

  wgnls::CommandRequest req;
  for (const auto& name : wgnls::command_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("-c,--config", req.config_path, "INI configuration file");
    sub->add_option("-o,--out", req.output_dir, "output directory (overrides run.output_dir)");
    sub->add_option("-s,--set", req.overrides, "override a config value, section.key=value");
    if (name == "classify" || name == "evolve" || name == "resonant-evolve" || name == "large-scale" ||
        name == "virial") {
      sub->add_option("--snapshot", req.snapshot, "read the initial datum from a snapshot file");
    }
    sub->callback([&req, name] { req.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
  return wgnls::run_command(req, std::cout, std::cerr);
}
