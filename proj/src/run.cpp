#include "qlstab/run.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "qlstab/errors.hpp"

namespace qlstab {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class Writer {
 public:
  Writer(const RunConfig& cfg, RegimeTag regime)
      : dir_(cfg.out), hash_(config_hash(cfg)), regime_(std::move(regime)), grid_(cfg.make_grid()) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw OutputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
    std::ostringstream text;
    header(text);
    text << to_text(cfg);
    write("config.txt", text.str());
  }

  void header(std::ostream& os) const {
    os << "# regime=" << to_string(regime_.regime) << "\n# config_hash=" << hash_ << "\n";
  }

  void summary(const std::vector<std::pair<std::string, std::string>>& extra) const {
    std::ostringstream os;
    os << "regime=" << to_string(regime_.regime) << "\n";
    os << "regime_explanation=" << regime_.explanation << "\n";
    os << "config_hash=" << hash_ << "\n";
    for (const auto& [k, v] : extra) os << k << "=" << v << "\n";
    write("summary.txt", os.str());
  }

  void csv(const std::string& columns, const std::vector<std::vector<double>>& rows) const {
    std::ostringstream os;
    header(os);
    os << columns << "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << num(row[i]);
      os << "\n";
    }
    write("series.csv", os.str());
  }

  void field(const std::string& name, const RealField& u) const {
    std::ostringstream os;
    field_header(os, "value");
    for (double v : u.values) os << num(v) << "\n";
    write("field_" + name + ".txt", os.str());
  }

  void field(const std::string& name, const ComplexField& z) const {
    std::ostringstream os;
    field_header(os, "re im");
    for (const auto& v : z.values) os << num(v.real()) << " " << num(v.imag()) << "\n";
    write("field_" + name + ".txt", os.str());
  }

 private:
  void field_header(std::ostream& os, const char* columns) const {
    header(os);
    const Grid& g = *grid_;
    if (g.is_line())
      os << "# grid=line L=" << num(g.extent());
    else
      os << "# grid=radial N=" << g.dimension() << " Rmax=" << num(g.extent());
    os << " n=" << g.size() << " h=" << num(g.spacing()) << "\n# columns=" << columns << "\n";
  }

  void write(const std::string& name, const std::string& content) const {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.close();
    if (!out) throw OutputError("failed writing '" + path.string() + "'");
  }

  fs::path dir_;
  std::string hash_;
  RegimeTag regime_;
  GridPtr grid_;
};

using Summary = std::vector<std::pair<std::string, std::string>>;

void add_ground(Summary& s, const GroundState& g) {
  s.emplace_back("m", num(g.m));
  s.emplace_back("gamma", num(g.gamma));
  s.emplace_back("mu", num(g.mu));
  s.emplace_back("residual", num(g.residual));
  s.emplace_back("iterations", std::to_string(g.iterations));
  s.emplace_back("F1", num(g.values.F1));
  s.emplace_back("F2", num(g.values.F2));
  s.emplace_back("F3", num(g.values.F3));
  s.emplace_back("F4", num(g.values.F4));
  s.emplace_back("E", num(g.values.E));
  s.emplace_back("I", num(g.values.I));
}

DistanceNorm default_norm(const RunConfig& cfg) {
  return cfg.norm.value_or(cfg.grid_kind == GridKind::Line ? DistanceNorm::H1 : DistanceNorm::H1V);
}

int ground_state(const RunConfig& cfg, const GridPtr& grid, const Writer& out, std::ostream& log) {
  std::vector<std::vector<double>> rows;
  SolverOptions opts = cfg.solver;
  opts.on_iteration = [&](const IterationRecord& r) {
    rows.push_back({static_cast<double>(r.iteration), r.energy, r.residual, r.gamma, r.tau});
  };
  const char* columns = "iteration,energy,residual,gamma,tau";
  try {
    const GroundState g = solve(cfg.model, grid, opts);
    out.csv(columns, rows);
    out.field("u0", g.u0);
    Summary s{{"command", "ground-state"}, {"status", "converged"}};
    add_ground(s, g);
    out.summary(s);
    log << "ground state converged in " << g.iterations << " iterations, m=" << num(g.m)
        << " gamma=" << num(g.gamma) << "\n";
    return kExitOk;
  } catch (const ConvergenceFailure& e) {
    out.csv(columns, rows);
    out.field("u_last", e.last_iterate().u0);
    Summary s{{"command", "ground-state"}, {"status", "convergence-failure"}, {"error", e.what()}};
    add_ground(s, e.last_iterate());
    out.summary(s);
    log << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const UnboundedBelow& e) {
    out.csv(columns, rows);
    out.summary({{"command", "ground-state"}, {"status", "unbounded-below"}, {"error", e.what()}});
    log << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  }
}

// Solves for the ground state used by evolve and stability; writes the failure
// summary itself when the solver gives up.
std::optional<GroundState> base_state(const RunConfig& cfg, const GridPtr& grid, const Writer& out,
                                      std::ostream& log) {
  try {
    return solve(cfg.model, grid, cfg.solver);
  } catch (const ConvergenceFailure& e) {
    out.summary({{"command", to_string(cfg.command)}, {"status", "convergence-failure"}, {"error", e.what()}});
    log << "convergence failure: " << e.what() << "\n";
  } catch (const UnboundedBelow& e) {
    out.summary({{"command", to_string(cfg.command)}, {"status", "unbounded-below"}, {"error", e.what()}});
    log << "convergence failure: " << e.what() << "\n";
  }
  return std::nullopt;
}

int evolve_run(const RunConfig& cfg, const GridPtr& grid, const Writer& out, std::ostream& log) {
  const auto g = base_state(cfg, grid, out, log);
  if (!g) return kExitConvergence;

  const DistanceNorm norm = default_norm(cfg);
  std::optional<RealField> potential;
  if (norm == DistanceNorm::H1V) potential = potential_values(cfg.model, grid);
  const OrbitMetric metric(grid, norm, potential);

  std::vector<double> wave_error;
  EvolveRequest req;
  req.duration = cfg.T;
  req.dt = cfg.dt;
  req.sample_every = cfg.sample_every;
  req.options = cfg.evolution;
  ComplexField diff(grid);
  req.on_sample = [&](double t, const ComplexField& z) {
    const auto phase = std::polar(1.0, g->mu * t);
    for (std::size_t i = 0; i < z.size(); ++i) diff.values[i] = z.values[i] - phase * g->u0[i];
    wave_error.push_back(std::sqrt(metric.norm2(diff)));
  };
  const Trajectory tr = evolve(ComplexField(g->u0), cfg.model, req);

  std::vector<std::vector<double>> rows;
  const ConservedPair first = tr.samples.front().pair;
  double max_wave = 0.0;
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& r = tr.samples[i];
    const double dm = std::abs(r.pair.mass - first.mass) / first.mass;
    const double de = std::abs(r.pair.energy - first.energy) / std::max(std::abs(first.energy), 1e-300);
    rows.push_back({r.t, r.pair.mass, r.pair.energy, dm, de, wave_error[i]});
    max_wave = std::max(max_wave, wave_error[i]);
  }
  out.csv("t,mass,energy,rel_mass_drift,rel_energy_drift,standing_wave_error", rows);
  out.field("u0", g->u0);
  out.field("z_final", tr.final_state);

  Summary s{{"command", "evolve"}, {"status", tr.failed ? "step-failure" : "completed"}};
  add_ground(s, *g);
  s.emplace_back("t_end", num(tr.t_end));
  s.emplace_back("steps", std::to_string(tr.steps));
  s.emplace_back("max_rel_mass_drift", num(tr.max_rel_mass_drift));
  s.emplace_back("max_abs_energy_drift", num(tr.max_abs_energy_drift));
  s.emplace_back("max_rel_energy_drift", num(tr.max_rel_energy_drift));
  s.emplace_back("standing_wave_norm", to_string(norm));
  s.emplace_back("max_standing_wave_error", num(max_wave));
  if (tr.failed) s.emplace_back("error", tr.failure);
  out.summary(s);
  log << "evolved to t=" << num(tr.t_end) << " in " << tr.steps << " steps, mass drift "
      << num(tr.max_rel_mass_drift) << "\n";
  return tr.failed ? kExitStep : kExitOk;
}

int stability_run(const RunConfig& cfg, const GridPtr& grid, const Writer& out, std::ostream& log) {
  const auto g = base_state(cfg, grid, out, log);
  if (!g) return kExitConvergence;

  StabilityRequest req;
  req.perturbation = cfg.perturbation;
  req.duration = cfg.T;
  req.dt = cfg.dt;
  req.sample_every = cfg.sample_every;
  req.C = cfg.C;
  req.norm = cfg.norm;
  req.evolution = cfg.evolution;
  const StabilityReport rep = stability_experiment(*g, cfg.model, req);

  std::vector<std::vector<double>> rows;
  for (const auto& r : rep.series) rows.push_back({r.t, r.d, r.mass, r.energy});
  out.csv("t,d,mass,energy", rows);
  out.field("u0", g->u0);

  Summary s{{"command", "stability"}, {"status", rep.evolution_failed ? "step-failure" : "completed"}};
  add_ground(s, *g);
  s.emplace_back("delta", num(rep.perturbation.delta));
  s.emplace_back("mode", to_string(rep.perturbation.mode));
  s.emplace_back("seed", std::to_string(rep.perturbation.seed));
  s.emplace_back("norm", to_string(rep.norm));
  s.emplace_back("C", num(rep.C));
  s.emplace_back("initial_distance", num(rep.initial_distance));
  s.emplace_back("max_orbit_distance", num(rep.max_orbit_distance));
  s.emplace_back("max_rel_mass_drift", num(rep.max_rel_mass_drift));
  s.emplace_back("max_rel_energy_drift", num(rep.max_rel_energy_drift));
  s.emplace_back("stable", rep.stable ? "true" : "false");
  s.emplace_back("verdict", rep.verdict);
  out.summary(s);
  log << rep.verdict << "\n";
  return rep.evolution_failed ? kExitStep : kExitOk;
}

int scaling_run(const RunConfig& cfg, const GridPtr& grid, const Writer& out, std::ostream& log) {
  const RealField psi = initial_profile(cfg.model, grid, cfg.solver.initializer);
  const ScalingProbe probe = scaling_probe(psi, cfg.model, cfg.xis);
  std::vector<std::vector<double>> rows;
  double max_err = 0.0;
  for (const auto& s : probe.samples) {
    const double err = std::abs(s.numeric - s.analytic);
    rows.push_back({s.xi, s.numeric, s.analytic, err});
    max_err = std::max(max_err, err);
  }
  out.csv("xi,numeric,analytic,abs_err", rows);
  out.field("psi", psi);
  Summary s{{"command", "scaling-probe"}, {"status", "completed"}};
  s.emplace_back("a", num(probe.a));
  s.emplace_back("b", num(probe.b));
  s.emplace_back("c", num(probe.c));
  s.emplace_back("max_abs_err", num(max_err));
  s.emplace_back("certifies_negative", probe.negative_xi ? "true" : "false");
  if (probe.negative_xi) s.emplace_back("negative_xi", num(*probe.negative_xi));
  out.summary(s);
  log << "scaling probe: max |numeric - analytic| = " << num(max_err) << "\n";
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  const GridPtr grid = cfg.make_grid();
  const Writer out(cfg, classify_regime(cfg.model));
  switch (cfg.command) {
    case Command::GroundState: return ground_state(cfg, grid, out, log);
    case Command::Evolve: return evolve_run(cfg, grid, out, log);
    case Command::Stability: return stability_run(cfg, grid, out, log);
    case Command::ScalingProbe: return scaling_run(cfg, grid, out, log);
  }
  return kExitConfig;
}

}  // namespace qlstab
