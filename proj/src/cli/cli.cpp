#include "cpi/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "cpi/core.hpp"

namespace cpi::cli {

namespace {

using Handler = std::function<int(const Options&, std::ostream&, std::ostream&)>;

struct Command {
  std::string name;
  std::string help;
  std::vector<std::string> flags;
  Handler handler;
};

const std::vector<Command>& commands() {
  static const std::vector<std::string> kernel{"lambda", "range", "kernel"};
  auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  static const std::vector<Command> c{
      {"simulate", "one construction: interface series of the standard pair",
       with(kernel, {"T", "grid", "seed", "guard", "out", "dump-events", "load-events"}), cmd_simulate},
      {"interface", "interface replicas: speed, tightness, excursions, gamma-slow escapes",
       with(kernel, {"T", "grid", "replicas", "seed", "guard", "gamma", "out", "threads", "dump-events",
                     "discard-contaminated", "abort-contaminated"}),
       cmd_interface},
      {"blocks", "renormalised fields (--what field), beta-expanding samples (expanding), good-point scan (good)",
       with(kernel, {"what", "K", "N", "beta", "i", "m-max", "replicas", "cases", "guard", "queries", "max-draws",
                     "gamma", "lengths", "dt", "a", "seed", "out", "threads"}),
       cmd_blocks},
      {"percolate", "Gamma(i) and escapes on Bernoulli fields",
       {"p", "height", "gamma-beta", "i", "levels", "replicas", "seed", "out", "threads"}, cmd_percolate},
      {"verify", "invariant suites: oracle, coupling, chi, blocks, prefilter, all",
       {"suite", "cases", "seed", "threads", "out"}, cmd_verify},
      {"plot", "SVG and gnuplot files from a summary.json", {"in", "out"}, cmd_plot},
  };
  return c;
}

// Binds one flag name to its Options field.
CLI::Option* bind(CLI::App& app, const std::string& name, Options& o) {
  const std::string f = "--" + name;
  if (name == "lambda") return app.add_option(f, o.lambda, "infection rate (kernel weights sum to 1)");
  if (name == "range") return app.add_option(f, o.range, "uniform kernel range M");
  if (name == "kernel") return app.add_option(f, o.kernel, "one-sided kernel weights, csv");
  if (name == "T") return app.add_option(f, o.T, "time horizon");
  if (name == "grid") return app.add_option(f, o.grid, "sample times, csv");
  if (name == "replicas") return app.add_option(f, o.replicas, "replicas / fields / accepted samples");
  if (name == "seed") return app.add_option(f, o.seed, "base seed");
  if (name == "guard") return app.add_option(f, o.guard, "guard band half-width (0 = default)");
  if (name == "K") return app.add_option(f, o.K, "block time factor");
  if (name == "N") return app.add_option(f, o.N, "block length");
  if (name == "beta") return app.add_option(f, o.beta, "cone slope");
  if (name == "gamma-beta") return app.add_option(f + ",--beta", o.beta, "cone slope of Gamma");
  if (name == "gamma") return app.add_option(f, o.gamma, "slow speed gamma");
  if (name == "p") return app.add_option(f, o.p, "open probability");
  if (name == "i") return app.add_option(f, o.i, "level / horizon i");
  if (name == "height") return app.add_option(f, o.height, "field height standing in for Gamma");
  if (name == "levels") return app.add_option(f, o.levels, "levels, csv");
  if (name == "out") return app.add_option(f, o.out, "output directory");
  if (name == "threads") return app.add_option(f, o.threads, "worker cap (0 = machine)");
  if (name == "dump-events") return app.add_flag(f, o.dump_events, "write construction files to --out");
  if (name == "load-events") return app.add_option(f, o.load_events, "read the construction from a file");
  if (name == "discard-contaminated") return app.add_flag(f, o.discard_contaminated, "drop contaminated replicas");
  if (name == "abort-contaminated") return app.add_flag(f, o.abort_contaminated, "exit 2 on contamination");
  if (name == "what") {
    return app.add_option(f, o.what, "field | expanding | good")->check(CLI::IsMember({"field", "expanding", "good"}));
  }
  if (name == "cases") return app.add_option(f, o.cases, "random cases / verified cells (0 = default)");
  if (name == "queries") return app.add_option(f, o.queries, "barrier queries per sample");
  if (name == "max-draws") return app.add_option(f, o.max_draws, "rejection sampling cap");
  if (name == "lengths") return app.add_option(f, o.lengths, "scan lengths b - a, csv");
  if (name == "dt") return app.add_option(f, o.dt, "scan time step");
  if (name == "a") return app.add_option(f, o.a, "scan start");
  if (name == "m-max") return app.add_option(f, o.m_max, "field half-width in blocks (0 = i + 2)");
  if (name == "suite") return app.add_option(f, o.suite, "suite name or all");
  if (name == "in") return app.add_option(f, o.in, "summary.json or a directory holding one");
  throw std::logic_error("unbound flag " + name);
}

std::string valid_flags(const Command& c) {
  std::ostringstream os;
  os << "valid flags for " << c.name << ":";
  for (const auto& f : c.flags) os << " --" << f;
  os << " --config";
  return os.str();
}

// Config file entries as flag tokens, placed before the command-line flags so
// that later (command-line) values win.
std::vector<std::string> config_tokens(const std::string& path, const Command& c, CLI::App& sub) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot read config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : j.items()) {
    if (std::find(c.flags.begin(), c.flags.end(), key) == c.flags.end()) {
      throw InvalidArgument("config key '" + key + "' is not a flag of " + c.name + "; " + valid_flags(c));
    }
    CLI::Option* opt = sub.get_option("--" + key);
    if (opt->get_type_size() == 0) {
      if (!value.is_boolean()) throw InvalidArgument("config key '" + key + "' must be true or false");
      if (value.get<bool>()) tokens.push_back("--" + key);
      continue;
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (std::size_t k = 0; k < value.size(); ++k) {
        if (k) text += ",";
        text += value[k].is_string() ? value[k].get<std::string>() : value[k].dump();
      }
    } else {
      text = value.dump();
    }
    tokens.push_back("--" + key);
    tokens.push_back(text);
  }
  return tokens;
}

void usage(std::ostream& err) {
  err << "usage: cpi <command> [flags]\ncommands:\n";
  for (const auto& c : commands()) err << "  " << c.name << "  " << c.help << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    usage(args.empty() ? err : out);
    return args.empty() ? kExitUsage : kExitOk;
  }
  const auto& cmds = commands();
  const auto it = std::find_if(cmds.begin(), cmds.end(), [&](const Command& c) { return c.name == args[0]; });
  if (it == cmds.end()) {
    err << "unknown command '" << args[0] << "'\n";
    usage(err);
    return kExitUsage;
  }
  const Command& cmd = *it;

  Options o;
  o.command = cmd.name;
  CLI::App app{cmd.help, "cpi " + cmd.name};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::map<std::string, CLI::Option*> opts;
  for (const auto& f : cmd.flags) opts[f] = bind(app, f, o);
  std::string config_path;
  app.add_option("--config", config_path, "JSON file mirroring the flags");
  if (opts.count("discard-contaminated")) opts["discard-contaminated"]->excludes(opts["abort-contaminated"]);

  std::vector<std::string> rest(args.begin() + 1, args.end());
  try {
    // locate --config first so its values sit underneath the command line
    for (std::size_t k = 0; k < rest.size(); ++k) {
      if (rest[k] == "--config" && k + 1 < rest.size()) config_path = rest[k + 1];
      if (rest[k].rfind("--config=", 0) == 0) config_path = rest[k].substr(9);
    }
    std::vector<std::string> tokens;
    if (!config_path.empty()) tokens = config_tokens(config_path, cmd, app);
    tokens.insert(tokens.end(), rest.begin(), rest.end());
    std::reverse(tokens.begin(), tokens.end());  // CLI11 consumes a reversed vector
    app.parse(tokens);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << valid_flags(cmd) << "\n";
    return kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  for (const auto& [name, opt] : opts) {
    if (opt->count() > 0) o.given.insert(name);
  }
  if (o.given.count("gamma-beta")) o.given.insert("beta");

  try {
    return cmd.handler(o, out, err);
  } catch (const ContaminationError& e) {
    err << "contaminated: " << e.what() << "\n";
    return kExitContaminated;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const WindowError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace cpi::cli
