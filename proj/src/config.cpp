#include "qlstab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qlstab/errors.hpp"

namespace qlstab {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, std::string_view text) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "off" || text == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + std::string(text) + "'");
}

std::vector<double> parse_list(const std::string& key, std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(key, text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

struct Parser {
  RunConfig cfg;
  std::set<std::string> seen;

  void apply(const std::string& key, std::string_view value) {
    using Setter = std::function<void(std::string_view)>;
    const auto num = [&](double& dst) { return Setter([&dst, key](std::string_view v) { dst = parse_double(key, v); }); };
    const auto count = [&](std::size_t& dst) {
      return Setter([&dst, key](std::string_view v) { dst = static_cast<std::size_t>(parse_unsigned(key, v)); });
    };
    const auto integer = [&](int& dst) {
      return Setter([&dst, key](std::string_view v) {
        const auto u = parse_unsigned(key, v);
        if (u > 1000000) throw ConfigError(key, "value out of range");
        dst = static_cast<int>(u);
      });
    };
    const auto text = [&](std::string& dst) { return Setter([&dst](std::string_view v) { dst = std::string(trim(v)); }); };

    RunConfig& c = cfg;
    const std::map<std::string, Setter> table{
        {"N", integer(c.model.dimension)},
        {"k", num(c.model.k)},
        {"theta", num(c.model.theta)},
        {"p", num(c.model.p)},
        {"lambda", num(c.model.lambda)},
        {"potential", text(c.potential_name)},
        {"potential_table", text(c.potential_table)},
        {"grid",
         [&c, key](std::string_view v) {
           v = trim(v);
           if (v == "line") c.grid_kind = GridKind::Line;
           else if (v == "radial") c.grid_kind = GridKind::Radial;
           else throw ConfigError(key, "expected line or radial, got '" + std::string(v) + "'");
         }},
        {"L", num(c.L)},
        {"Rmax", num(c.Rmax)},
        {"n", count(c.n)},
        {"tau", num(c.solver.tau)},
        {"max_iter", count(c.solver.max_iterations)},
        {"tol_energy", num(c.solver.energy_tol)},
        {"tol_residual", num(c.solver.residual_tol)},
        {"nonnegative", [&c, key](std::string_view v) { c.solver.enforce_nonnegative = parse_bool(key, v); }},
        {"recenter_every", count(c.solver.recenter_every)},
        {"recenter_radius", num(c.solver.recenter_radius)},
        {"init_width", num(c.solver.initializer.width)},
        {"init_center", num(c.solver.initializer.center)},
        {"preconditioner",
         [&c, key](std::string_view v) {
           v = trim(v);
           if (v == "sobolev") c.solver.preconditioner = Preconditioner::Sobolev;
           else if (v == "l2") c.solver.preconditioner = Preconditioner::L2;
           else throw ConfigError(key, "expected sobolev or l2, got '" + std::string(v) + "'");
         }},
        {"T", num(c.T)},
        {"dt", num(c.dt)},
        {"sample_every", count(c.sample_every)},
        {"picard_tol", num(c.evolution.picard_tol)},
        {"picard_max", integer(c.evolution.max_sweeps)},
        {"retry_budget", integer(c.evolution.retry_budget)},
        {"delta", num(c.perturbation.delta)},
        {"mode",
         [&c, key](std::string_view v) {
           v = trim(v);
           if (v == "scale") c.perturbation.mode = PerturbationMode::Scale;
           else if (v == "bump") c.perturbation.mode = PerturbationMode::Bump;
           else if (v == "random") c.perturbation.mode = PerturbationMode::Random;
           else throw ConfigError(key, "expected scale, bump or random, got '" + std::string(v) + "'");
         }},
        {"seed", [&c, key](std::string_view v) { c.perturbation.seed = parse_unsigned(key, v); }},
        {"bump_center", num(c.perturbation.bump_center)},
        {"bump_width", num(c.perturbation.bump_width)},
        {"noise_width", num(c.perturbation.noise_width)},
        {"C", num(c.C)},
        {"norm",
         [&c, key](std::string_view v) {
           v = trim(v);
           if (v == "H1") c.norm = DistanceNorm::H1;
           else if (v == "H1V") c.norm = DistanceNorm::H1V;
           else if (v == "auto") c.norm.reset();
           else throw ConfigError(key, "expected H1, H1V or auto, got '" + std::string(v) + "'");
         }},
        {"xis", [&c, key](std::string_view v) { c.xis = parse_list(key, v); }},
        {"out", text(c.out)},
    };
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(key, "unknown key");
    it->second(value);
    seen.insert(key);
  }

  void finish() {
    RunConfig& c = cfg;
    const auto check = [](bool ok, const char* key, const std::string& what) {
      if (!ok) throw ConfigError(key, what);
    };
    check(c.model.dimension >= 1 && c.model.dimension <= 3, "N", "N must be 1, 2 or 3");
    check(c.model.k >= 0.0, "k", "k must be >= 0");
    check(c.model.theta > 0.0, "theta", "theta must be > 0");
    check(c.model.p > 2.0, "p", "p must be > 2");
    check(c.model.lambda > 0.0, "lambda", "lambda must be > 0");

    if (!seen.count("grid")) c.grid_kind = c.model.dimension == 1 ? GridKind::Line : GridKind::Radial;
    if (c.model.dimension == 1)
      check(c.grid_kind == GridKind::Line, "grid", "N=1 requires grid=line");
    else
      check(c.grid_kind == GridKind::Radial, "grid", "N>=2 requires grid=radial");
    check(c.L > 0.0, "L", "L must be > 0");
    check(c.Rmax > 0.0, "Rmax", "Rmax must be > 0");
    check(c.n >= 3, "n", "n must be >= 3");

    if (c.potential_name == "zero") {
      c.model.potential = {};
    } else if (c.potential_name == "harmonic") {
      c.model.potential = {PotentialKind::Harmonic, {}, {}};
    } else if (c.potential_name == "table") {
      check(!c.potential_table.empty(), "potential_table", "potential=table needs potential_table");
      check(c.grid_kind == GridKind::Radial, "potential", "tabulated potentials need a radial grid");
      try {
        c.model.potential = read_potential_table(c.potential_table);
      } catch (const InvalidArgument& e) {
        throw ConfigError("potential_table", e.what());
      }
    } else {
      throw ConfigError("potential", "expected zero, harmonic or table, got '" + c.potential_name + "'");
    }
    check(c.model.dimension != 1 || c.potential_name == "zero", "potential",
          "N=1 requires potential=zero");
    try {
      c.model.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError("potential_table", e.what());
    }

    check(c.solver.tau >= 0.0, "tau", "tau must be >= 0 (0 picks the default)");
    check(c.solver.max_iterations > 0, "max_iter", "max_iter must be > 0");
    check(c.solver.energy_tol > 0.0, "tol_energy", "tol_energy must be > 0");
    check(c.solver.residual_tol > 0.0, "tol_residual", "tol_residual must be > 0");
    check(c.solver.recenter_radius > 0.0, "recenter_radius", "recenter_radius must be > 0");
    check(c.solver.recenter_every == 0 || c.grid_kind == GridKind::Line, "recenter_every",
          "recentering needs a line grid");
    check(c.solver.initializer.width > 0.0, "init_width", "init_width must be > 0");

    check(c.T >= 0.0, "T", "T must be >= 0");
    check(c.dt > 0.0, "dt", "dt must be > 0");
    check(c.sample_every >= 1, "sample_every", "sample_every must be >= 1");
    check(c.evolution.picard_tol > 0.0, "picard_tol", "picard_tol must be > 0");
    check(c.evolution.max_sweeps >= 1, "picard_max", "picard_max must be >= 1");

    check(c.perturbation.delta >= 0.0, "delta", "delta must be >= 0");
    check(c.perturbation.bump_width > 0.0, "bump_width", "bump_width must be > 0");
    check(c.perturbation.noise_width > 0.0, "noise_width", "noise_width must be > 0");
    check(c.C > 0.0, "C", "C must be > 0");
    for (double xi : c.xis) check(xi > 0.0, "xis", "every xi must be > 0");

    if (c.command == Command::ScalingProbe) {
      check(c.model.dimension == 1, "N", "scaling-probe needs N=1");
    }
  }
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::GroundState: return "ground-state";
    case Command::Evolve: return "evolve";
    case Command::Stability: return "stability";
    case Command::ScalingProbe: return "scaling-probe";
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  for (Command c : {Command::GroundState, Command::Evolve, Command::Stability, Command::ScalingProbe})
    if (name == to_string(c)) return c;
  throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

GridPtr RunConfig::make_grid() const {
  if (grid_kind == GridKind::Line) return Grid::line(L, n);
  return Grid::radial(model.dimension, Rmax, n);
}

RunConfig parse_config(Command command, std::string_view text, const std::vector<Override>& overrides) {
  Parser parser;
  parser.cfg.command = command;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(std::string(line), "line " + std::to_string(line_no) + " is not key=value");
    parser.apply(std::string(trim(line.substr(0, eq))), line.substr(eq + 1));
  }
  for (const auto& [key, value] : overrides) parser.apply(key, value);
  parser.finish();
  return parser.cfg;
}

std::string to_text(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  const auto d = [](double v) { return format_double(v); };
  kv["N"] = std::to_string(c.model.dimension);
  kv["k"] = d(c.model.k);
  kv["theta"] = d(c.model.theta);
  kv["p"] = d(c.model.p);
  kv["lambda"] = d(c.model.lambda);
  kv["potential"] = c.potential_name;
  if (!c.potential_table.empty()) kv["potential_table"] = c.potential_table;
  kv["grid"] = c.grid_kind == GridKind::Line ? "line" : "radial";
  kv["L"] = d(c.L);
  kv["Rmax"] = d(c.Rmax);
  kv["n"] = std::to_string(c.n);
  kv["tau"] = d(c.solver.tau);
  kv["max_iter"] = std::to_string(c.solver.max_iterations);
  kv["tol_energy"] = d(c.solver.energy_tol);
  kv["tol_residual"] = d(c.solver.residual_tol);
  kv["nonnegative"] = c.solver.enforce_nonnegative ? "true" : "false";
  kv["recenter_every"] = std::to_string(c.solver.recenter_every);
  kv["recenter_radius"] = d(c.solver.recenter_radius);
  kv["init_width"] = d(c.solver.initializer.width);
  kv["init_center"] = d(c.solver.initializer.center);
  kv["preconditioner"] = c.solver.preconditioner == Preconditioner::Sobolev ? "sobolev" : "l2";
  kv["T"] = d(c.T);
  kv["dt"] = d(c.dt);
  kv["sample_every"] = std::to_string(c.sample_every);
  kv["picard_tol"] = d(c.evolution.picard_tol);
  kv["picard_max"] = std::to_string(c.evolution.max_sweeps);
  kv["retry_budget"] = std::to_string(c.evolution.retry_budget);
  kv["delta"] = d(c.perturbation.delta);
  kv["mode"] = to_string(c.perturbation.mode);
  kv["seed"] = std::to_string(c.perturbation.seed);
  kv["bump_center"] = d(c.perturbation.bump_center);
  kv["bump_width"] = d(c.perturbation.bump_width);
  kv["noise_width"] = d(c.perturbation.noise_width);
  kv["C"] = d(c.C);
  kv["norm"] = c.norm ? to_string(*c.norm) : "auto";
  std::string xis;
  for (std::size_t i = 0; i < c.xis.size(); ++i) xis += (i ? "," : "") + d(c.xis[i]);
  kv["xis"] = xis;
  kv["out"] = c.out;

  std::string text;
  for (const auto& [key, value] : kv) text += key + "=" + value + "\n";
  return text;
}

std::string config_hash(const RunConfig& cfg) {
  // The output directory does not change any number, so it stays out of the hash.
  RunConfig copy = cfg;
  copy.out.clear();
  const std::string text = std::string(to_string(cfg.command)) + "\n" + to_text(copy);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

Potential read_potential_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open potential table '" + path + "'");
  Potential pot;
  pot.kind = PotentialKind::TabulatedRadial;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream row(line);
    double r = 0.0, v = 0.0;
    if (!(row >> r)) continue;
    std::string rest;
    if (!(row >> v) || (row >> rest))
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected two columns r V");
    pot.radii.push_back(r);
    pot.values.push_back(v);
  }
  if (pot.radii.empty()) throw InvalidArgument(path + ": no rows");
  return pot;
}

}  // namespace qlstab
