#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qlstab/config.hpp"
#include "qlstab/errors.hpp"
#include "qlstab/run.hpp"

namespace qlstab {
namespace {

// Leftover "--key value" / "--key=value" tokens become config overrides.
std::vector<Override> collect_overrides(const std::vector<std::string>& extras) {
  std::vector<Override> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& tok = extras[i];
    if (tok.rfind("--", 0) != 0 || tok.size() < 3) throw ConfigError(tok, "expected --key value");
    std::string key = tok.substr(2);
    if (const auto eq = key.find('='); eq != std::string::npos) {
      out.emplace_back(key.substr(0, eq), key.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw ConfigError(key, "missing value");
    out.emplace_back(key, extras[++i]);
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ground states, evolution and orbital stability of a quasilinear Schrodinger equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<CLI::App*> subs;
  for (Command c : {Command::GroundState, Command::Evolve, Command::Stability, Command::ScalingProbe}) {
    CLI::App* sub = app.add_subcommand(to_string(c));
    sub->add_option("--config", config_path, "key=value configuration file")->required();
    sub->allow_extras();
    subs.push_back(sub);
  }
  app.footer("Any config key may be overridden with --key value, e.g. --p 3 --n 801.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* chosen = app.get_subcommands().front();
    const Command command = command_from_string(chosen->get_name());
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config", "cannot read '" + config_path + "'");
    std::stringstream text;
    text << in.rdbuf();
    const RunConfig cfg = parse_config(command, text.str(), collect_overrides(chosen->remaining()));
    return run(cfg, out);
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace qlstab
