#include "hypdisk/cli.hpp"

#include <CLI11.hpp>
#include <boost/version.hpp>
#include <json.hpp>
#include <Eigen/Core>

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "hypdisk/amsler.hpp"
#include "hypdisk/errors.hpp"
#include "hypdisk/hyperboloid.hpp"
#include "hypdisk/minimax.hpp"
#include "hypdisk/pseudosphere.hpp"
#include "hypdisk/small_slopes.hpp"

#ifndef HYPDISK_VERSION
#define HYPDISK_VERSION "0.0.0"
#endif

namespace hypdisk::cli {
namespace {

using nlohmann::json;

const char* format_name(Format f) {
  switch (f) {
    case Format::csv: return "csv";
    case Format::json: return "json";
    case Format::obj: return "obj";
  }
  return "csv";
}

void positive(double x, const char* flag) {
  if (!(std::isfinite(x) && x > 0.0))
    throw UsageError(std::string(flag) + " must be a positive finite number");
}

// Collects artifacts and the manifest of one run.
class Session {
 public:
  explicit Session(const RunConfig& c) : config_(c) {}

  std::ofstream open(const std::string& name) {
    std::filesystem::create_directories(config_.out_dir);
    const auto path = config_.out_dir / name;
    std::ofstream f(path);
    if (!f) throw Error("io_error", "cannot write " + path.string());
    f.precision(12);
    outputs_.push_back(name);
    return f;
  }

  json& results() { return results_; }
  json& skipped() { return skipped_; }
  json& tolerances() { return tolerances_; }

  void write_manifest(const Error* failure) {
    json m;
    m["tool"] = "hypdisk";
    m["version"] = HYPDISK_VERSION;
    m["subcommand"] = config_.subcommand;
    m["inputs"] = inputs();
    m["seed"] = config_.seed;
    m["format"] = format_name(config_.format);
    m["tolerances"] = tolerances_;
    m["libraries"] = {{"boost", BOOST_LIB_VERSION},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)},
                      {"compiler", __VERSION__}};
    m["outputs"] = outputs_;
    if (!skipped_.empty()) m["skipped"] = skipped_;
    if (failure) {
      m["status"] = "error";
      m["error"] = json::parse(format_error_json(*failure));
    } else {
      m["status"] = "ok";
    }
    std::filesystem::create_directories(config_.out_dir);
    std::ofstream f(config_.out_dir / "manifest.json");
    f << m.dump(2) << '\n';
  }

 private:
  json inputs() const {
    const auto& c = config_;
    json j;
    j["out_dir"] = c.out_dir.string();
    j["mesh"] = c.mesh;
    j["mesh_h"] = c.mesh_h;
    const auto& s = c.subcommand;
    if (s == "pseudosphere") {
      j["eta0"] = c.eta0;
      j["radius"] = c.radius;
    } else if (s == "hyperboloid") {
      j["radius"] = c.radius;
      if (c.modulus) j["modulus"] = *c.modulus;
      j["calibration"] = c.calibration;
      if (c.max_radius) j["max_radius"] = *c.max_radius;
    } else if (s == "amsler" || s == "small-slopes") {
      j["n"] = c.n;
      j["radius"] = c.radius;
    } else if (s == "minimax") {
      j["lambda"] = c.lambda;
      j["p"] = c.p;
      j["n"] = c.grid_n;
      j["continuation"] = c.continuation;
    } else if (s == "sweep") {
      j["radii"] = c.radii;
      j["ns"] = c.ns;
      j["eta0s"] = c.eta0s;
      j["jobs"] = c.jobs;
    }
    return j;
  }

  const RunConfig& config_;
  std::vector<std::string> outputs_;
  json results_ = json::object();
  json skipped_ = json::array();
  json tolerances_ = json::object();
};

void energy_tolerances(Session& s) {
  const AdaptiveEnergyOptions e;
  s.tolerances()["energy_rel_tol"] = e.rel_tol;
  s.tolerances()["energy_max_doublings"] = e.max_doublings;
  s.tolerances()["geodesic_rel_tol"] = e.grid.shoot.rel_tol;
  s.tolerances()["geodesic_abs_tol"] = e.grid.shoot.abs_tol;
}

json entry_json(const EnergyReport& r) {
  json a = json::array();
  for (const auto& e : r.entries)
    a.push_back({{"R", e.R},
                 {"energy", e.energy},
                 {"err_estimate", e.err_estimate},
                 {"N_r", e.n_r},
                 {"N_psi", e.n_psi}});
  return {{"surface", r.surface}, {"param", r.param}, {"rule", r.rule}, {"entries", a}};
}

EnergyReport report(std::string surface, std::string param,
                    std::string rule = "simpson-r/trapezoid-psi") {
  EnergyReport r;
  r.surface = std::move(surface);
  r.param = std::move(param);
  r.rule = std::move(rule);
  return r;
}

std::string param(const char* key, double v) {
  std::ostringstream s;
  s.precision(10);
  s << key << '=' << v;
  return s.str();
}

void emit_energy(Session& s, const RunConfig& c, const std::vector<EnergyReport>& reports,
                 const std::string& file, std::ostream& out) {
  auto f = s.open(file);
  write_energy_csv(reports, f);
  json a = json::array();
  for (const auto& r : reports) a.push_back(entry_json(r));
  s.results()["energy"] = a;
  if (c.format != Format::json) write_energy_csv(reports, out);
}

void emit_mesh(Session& s, const RunConfig& c, const SurfaceMesh& mesh,
               const std::string& stem) {
  if (c.format == Format::obj) {
    auto f = s.open(stem + ".obj");
    write_obj(mesh, f);
  } else {
    auto f = s.open(stem + ".csv");
    write_csv(mesh, f);
  }
  s.results()["mesh"] = {{"vertices", mesh.vertices.size()}, {"quads", mesh.quads.size()}};
}

void run_pseudosphere(Session& s, const RunConfig& c, std::ostream& out) {
  energy_tolerances(s);
  auto r = report("pseudosphere", param("eta0", c.eta0));
  r.entries.push_back(pseudosphere::disk_energy(c.eta0, c.radius));
  s.results()["max_radius"] = pseudosphere::max_disk_radius(c.eta0);
  emit_energy(s, c, {r}, "energy.csv", out);
  if (c.mesh) emit_mesh(s, c, pseudosphere::disk_mesh(c.eta0, c.radius, c.mesh_h), "mesh");
}

void run_hyperboloid(Session& s, const RunConfig& c, std::ostream& out) {
  energy_tolerances(s);
  double b;
  if (c.modulus) {
    b = *c.modulus;
  } else if (c.calibration == "max-radius") {
    b = hyperboloid::modulus_for_max_radius(*c.max_radius).b;
  } else {
    b = hyperboloid::modulus_from_radius(c.radius).b;
  }
  s.results()["modulus"] = b;
  s.results()["max_radius"] = hyperboloid::max_disk_radius(b);
  auto r = report("hyperboloid", param("b", b));
  r.entries.push_back(hyperboloid::disk_energy(b, c.radius));
  emit_energy(s, c, {r}, "energy.csv", out);
  if (c.mesh) emit_mesh(s, c, hyperboloid::disk_mesh(b, c.radius, c.mesh_h), "mesh");
}

void write_radii_header(std::ostream& f) { f << "n,R_max,psi,polar_angle,z_singular\n"; }

void write_radii_row(std::ostream& f, const amsler::Profile& p, const amsler::MaxRadius& m) {
  f << p.n() << ',' << m.radius << ',' << m.psi << ',' << amsler::polar_angle(m.psi, p.n())
    << ',' << p.z_singular() << '\n';
}

void run_amsler(Session& s, const RunConfig& c, std::ostream& out) {
  energy_tolerances(s);
  const amsler::Profile profile(c.n);
  s.tolerances()["profile_rel_tol"] = 1e-12;
  {
    auto f = s.open("profile.csv");
    amsler::write_profile_csv(f, profile);
  }
  const auto m = amsler::max_radius(profile);
  {
    auto f = s.open("radii.csv");
    write_radii_header(f);
    write_radii_row(f, profile, m);
  }
  s.results()["max_radius"] = m.radius;
  s.results()["z_singular"] = profile.z_singular();
  if (!(c.radius < m.radius))
    throw BoundaryExceededError("geodesic disk reaches the singular curve", c.radius,
                                m.radius, amsler::polar_angle(m.psi, c.n));
  auto r = report("amsler", param("n", c.n));
  r.entries.push_back(amsler::disk_energy(profile, c.radius));
  emit_energy(s, c, {r}, "energy.csv", out);
  if (c.mesh) {
    const auto pm = amsler::build_periodic_mesh(profile, c.radius, c.mesh_h);
    s.results()["weld_gap"] = pm.weld_gap;
    emit_mesh(s, c, pm.mesh, "mesh");
  }
}

void run_small_slopes(Session& s, const RunConfig& c, std::ostream& out) {
  const small_slopes::PeriodicSaddle saddle(c.n);
  const double closed = small_slopes::periodic_energy(c.n, c.radius);
  const double quad = small_slopes::energy_quadrature(c.n, c.radius);
  s.tolerances()["quadrature_check"] = 1e-6;
  auto r = report("small-slopes", param("n", c.n), "closed-form");
  r.entries.push_back({c.radius, closed, std::abs(closed - quad), 8, 8});
  s.results()["amplitude"] = small_slopes::amplitude(c.n, c.radius);
  emit_energy(s, c, {r}, "energy.csv", out);
  auto f = s.open("height.csv");
  small_slopes::write_height_csv(f, saddle, c.radius, c.mesh_h);
}

std::string p_tag(double p) {
  std::ostringstream s;
  s << p;
  return s.str();
}

void run_minimax(Session& s, const RunConfig& c, std::ostream& out) {
  minimax::MinimizeOptions opt;
  opt.seed = c.seed;
  s.tolerances()["grad_tol"] = opt.grad_tol;
  s.tolerances()["max_iterations"] = opt.max_iterations;
  s.tolerances()["perturbed_starts"] = opt.perturbed_starts;
  s.tolerances()["angle_guard"] = opt.angle_guard;
  std::vector<double> ps;
  if (c.continuation)
    for (double q = 2.0; q < c.p; q *= 2.0) ps.push_back(q);
  ps.push_back(c.p);
  const auto n = static_cast<std::size_t>(c.grid_n);
  const auto sols = ps.size() == 1 ? std::vector{minimax::grid_minimize(c.lambda, c.p, n, opt)}
                                   : minimax::continuation(c.lambda, ps, n, opt);
  const auto bound = minimax::curvature_bound(c.lambda);
  auto table = s.open("minimax.csv");
  minimax::write_csv_header(table);
  if (c.format != Format::json) minimax::write_csv_header(out);
  json rows = json::array();
  for (const auto& sol : sols) {
    minimax::write_csv_row(table, sol, bound);
    if (c.format != Format::json) minimax::write_csv_row(out, sol, bound);
    auto f = s.open("field_p" + p_tag(sol.p) + ".csv");
    minimax::write_field_csv(f, sol);
    rows.push_back({{"lambda", sol.lambda},
                    {"p", sol.p},
                    {"N", sol.n},
                    {"I_p", sol.objective},
                    {"sup_cot2", sol.sup_cot2},
                    {"eps", bound.epsilon},
                    {"I_inf", bound.I_inf},
                    {"M", bound.M},
                    {"converged", sol.converged},
                    {"spread", minimax::anti_diagonal_spread(sol)},
                    {"sg_residual", sol.sg_residual}});
  }
  s.results()["minimax"] = rows;
}

// Runs tasks on a small pool; results land in fixed slots so the output
// order never depends on scheduling.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& f) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < count;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct SweepTask {
  EnergyReport report;
  double max_radius = 0.0;
  std::function<EnergyEntry(double)> energy;
  std::vector<std::pair<double, std::string>> skipped = {};
};

void run_sweep(Session& s, const RunConfig& c, std::ostream& out) {
  energy_tolerances(s);
  std::vector<amsler::Profile> profiles;
  for (int n : c.ns) profiles.emplace_back(n);
  std::vector<amsler::MaxRadius> rmax(profiles.size());
  parallel_for(profiles.size(), c.jobs,
               [&](std::size_t i) { rmax[i] = amsler::max_radius(profiles[i]); });
  {
    auto f = s.open("radii.csv");
    write_radii_header(f);
    for (std::size_t i = 0; i < profiles.size(); ++i) write_radii_row(f, profiles[i], rmax[i]);
  }

  // Amsler, hyperboloids matched to the Amsler maximal radii, pseudospheres,
  // small slopes.
  std::vector<SweepTask> tasks;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& p = profiles[i];
    tasks.push_back({report("amsler", param("n", p.n())), rmax[i].radius,
                     [&p](double R) { return amsler::disk_energy(p, R); }});
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const double b = hyperboloid::modulus_for_max_radius(rmax[i].radius).b;
    tasks.push_back({report("hyperboloid", param("b", b)), hyperboloid::max_disk_radius(b),
                     [b](double R) { return hyperboloid::disk_energy(b, R); }});
  }
  for (double eta0 : c.eta0s)
    tasks.push_back({report("pseudosphere", param("eta0", eta0)), pseudosphere::max_disk_radius(eta0),
                     [eta0](double R) { return pseudosphere::disk_energy(eta0, R); }});
  for (int n : c.ns)
    tasks.push_back({report("small-slopes", param("n", n), "closed-form"),
                     std::numeric_limits<double>::infinity(), [n](double R) {
                       const double e = small_slopes::periodic_energy(n, R);
                       const double q = small_slopes::energy_quadrature(n, R);
                       return EnergyEntry{R, e, std::abs(e - q), 8, 8};
                     }});

  std::vector<std::pair<std::size_t, double>> points;
  for (std::size_t t = 0; t < tasks.size(); ++t)
    for (double R : c.radii) {
      if (R < tasks[t].max_radius)
        points.emplace_back(t, R);
      else
        tasks[t].skipped.emplace_back(R, "outside_domain");
    }
  std::vector<std::optional<EnergyEntry>> results(points.size());
  std::vector<std::string> failures(points.size());
  parallel_for(points.size(), c.jobs, [&](std::size_t k) {
    try {
      results[k] = tasks[points[k].first].energy(points[k].second);
    } catch (const Error& e) {
      failures[k] = e.name();
    }
  });
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto& t = tasks[points[k].first];
    if (results[k])
      t.report.entries.push_back(*results[k]);
    else
      t.skipped.emplace_back(points[k].second, failures[k]);
  }

  std::vector<EnergyReport> all;
  for (const char* family : {"amsler", "hyperboloid", "pseudosphere", "small-slopes"}) {
    std::vector<EnergyReport> reports;
    for (auto& t : tasks) {
      if (t.report.surface != family) continue;
      reports.push_back(t.report);
      for (const auto& [R, why] : t.skipped)
        s.skipped().push_back(
            {{"surface", t.report.surface}, {"param", t.report.param}, {"R", R}, {"reason", why}});
    }
    auto f = s.open(std::string("sweep_") + family + ".csv");
    write_energy_csv(reports, f);
    all.insert(all.end(), reports.begin(), reports.end());
  }
  emit_energy(s, c, all, "sweep_energy.csv", out);
}

}  // namespace

const char* version() { return HYPDISK_VERSION; }

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Isometric immersions of hyperbolic disks", "hypdisk"};
  app.set_version_flag("--version", HYPDISK_VERSION);
  app.require_subcommand(1, 1);
  app.fallthrough();
  std::string format = "csv";
  app.add_option("--out-dir", c.out_dir, "output directory");
  app.add_option("--format", format, "csv, json or obj")
      ->check(CLI::IsMember({"csv", "json", "obj"}));
  app.add_option("--seed", c.seed, "optimizer seed");
  bool no_mesh = false;
  app.add_flag("--no-mesh", no_mesh, "skip mesh export");
  app.add_option("--spacing", c.mesh_h, "mesh and height-field spacing");

  auto* ps = app.add_subcommand("pseudosphere", "pseudosphere disk");
  ps->add_option("--eta0", c.eta0)->required();
  ps->add_option("--radius", c.radius)->required();

  auto* hy = app.add_subcommand("hyperboloid", "hyperboloid disk");
  hy->add_option("--radius", c.radius)->required();
  hy->add_option("--modulus", c.modulus);
  hy->add_option("--calibration", c.calibration)->check(CLI::IsMember({"tof", "max-radius"}));
  hy->add_option("--max-radius", c.max_radius);

  auto* am = app.add_subcommand("amsler", "periodic Amsler surface disk");
  am->add_option("--n", c.n)->required();
  am->add_option("--radius", c.radius)->required();

  auto* ss = app.add_subcommand("small-slopes", "periodic saddle in the small-slope limit");
  ss->add_option("--n", c.n)->required();
  ss->add_option("--radius", c.radius)->required();

  auto* mm = app.add_subcommand("minimax", "discrete minimax on the Chebyshev square");
  mm->add_option("--lambda", c.lambda)->required();
  mm->add_option("--p", c.p)->required();
  mm->add_option("--n", c.grid_n)->required();
  mm->add_flag("--continuation", c.continuation, "warm-started ladder p = 2, 4, ..");

  auto* sw = app.add_subcommand("sweep", "energy against radius for every family");
  sw->add_option("--radii", c.radii)->delimiter(',');
  sw->add_option("--ns", c.ns)->delimiter(',');
  sw->add_option("--eta0s", c.eta0s)->delimiter(',');
  sw->add_option("--jobs", c.jobs);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << HYPDISK_VERSION << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  c.format = format == "json" ? Format::json : format == "obj" ? Format::obj : Format::csv;
  c.mesh = !no_mesh;
  if (c.subcommand == "sweep" && c.radii.empty())
    for (int i = 1; i <= 10; ++i) c.radii.push_back(0.25 * i);
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  positive(c.mesh_h, "--spacing");
  const auto& s = c.subcommand;
  if (s == "pseudosphere") {
    positive(c.eta0, "--eta0");
    positive(c.radius, "--radius");
  } else if (s == "hyperboloid") {
    positive(c.radius, "--radius");
    if (c.modulus && !(*c.modulus > 0.0 && *c.modulus < 1.0))
      throw UsageError("--modulus must lie in (0, 1)");
    if (c.calibration != "tof" && c.calibration != "max-radius")
      throw UsageError("--calibration must be tof or max-radius");
    if (!c.modulus && c.calibration == "max-radius") {
      if (!c.max_radius) throw UsageError("--calibration max-radius needs --max-radius");
      positive(*c.max_radius, "--max-radius");
    }
  } else if (s == "amsler" || s == "small-slopes") {
    if (c.n < 2) throw UsageError("--n must be an integer >= 2");
    positive(c.radius, "--radius");
  } else if (s == "minimax") {
    if (!(std::isfinite(c.lambda) && c.lambda >= 0.0))
      throw UsageError("--lambda must be a finite number >= 0");
    if (!(std::isfinite(c.p) && c.p >= 1.0)) throw UsageError("--p must be finite and >= 1");
    if (c.grid_n < 3) throw UsageError("--n must be an integer >= 3");
  } else if (s == "sweep") {
    if (c.radii.empty()) throw UsageError("--radii must not be empty");
    for (double R : c.radii) positive(R, "--radii");
    for (int n : c.ns)
      if (n < 2) throw UsageError("--ns entries must be integers >= 2");
    for (double e : c.eta0s) positive(e, "--eta0s");
  } else {
    throw UsageError("unknown subcommand '" + s + "'");
  }
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Session session(c);
  out.precision(12);
  try {
    const auto& s = c.subcommand;
    if (s == "pseudosphere") run_pseudosphere(session, c, out);
    else if (s == "hyperboloid") run_hyperboloid(session, c, out);
    else if (s == "amsler") run_amsler(session, c, out);
    else if (s == "small-slopes") run_small_slopes(session, c, out);
    else if (s == "minimax") run_minimax(session, c, out);
    else run_sweep(session, c, out);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    err << format_error_json(e) << '\n';
    session.write_manifest(&e);
    return 1;
  }
  session.write_manifest(nullptr);
  if (c.format == Format::json) out << session.results().dump(2) << '\n';
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse_args(argc, argv, out);
    if (!config) return 0;
    return run(*config, out, err);
  } catch (const UsageError& e) {
    err << format_error_json(e) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << format_error_json(Error("internal_error", e.what())) << '\n';
    return 1;
  }
}

}  // namespace hypdisk::cli
