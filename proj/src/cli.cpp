#include "syzlab/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "syzlab/analysis.hpp"
#include "syzlab/errors.hpp"
#include "syzlab/growth.hpp"
#include "syzlab/io.hpp"
#include "syzlab/metrics.hpp"
#include "syzlab/syz.hpp"
#include "syzlab/version.hpp"

namespace syzlab::cli {

namespace {

struct RunConfig {
  std::string geometry;
  std::string weights;
  std::string metric;
  std::string section;
  std::string divisor;
  std::string out_dir;
  std::uint64_t seed = 42;
  int threads = 1;

  growth::GrowthOptions growth;
  double box = 8.0;
  int resolution = 129;
  double residual_bound = 1e-1;
  double half_width = 14.0;
  double theta = std::nan("");
  double eps = 1.0;
  int per_axis = 41;
  double margin = 1e-2;
  std::vector<std::string> at;
  double sample_box = 8.0;
  int sample_points = 17;
};

/// Everything a command reads, hashed so that reports can be traced to inputs.
std::string config_fingerprint(const std::string& command, const RunConfig& c) {
  std::ostringstream s;
  s.precision(17);
  s << command << '\n';
  for (const auto* path : {&c.geometry, &c.weights, &c.metric, &c.section}) {
    s << *path << '\n';
    if (!path->empty()) s << io::read_text_file(*path) << '\n';
  }
  s << c.divisor << '\n' << c.seed << '\n';
  const auto& g = c.growth;
  s << g.T0 << ' ' << g.step << ' ' << g.samples << ' ' << g.tol_fit << ' ' << g.tol_lim << ' ' << g.tol_match << ' '
    << g.tol_zero << '\n';
  s << c.box << ' ' << c.resolution << ' ' << c.residual_bound << ' ' << c.half_width << ' ' << c.theta << ' ' << c.eps
    << ' ' << c.per_axis << ' ' << c.margin << ' ' << c.sample_box << ' ' << c.sample_points << '\n';
  for (const auto& a : c.at) s << a << ';';
  return s.str();
}

class Runner {
 public:
  Runner(std::string command, const RunConfig& config, std::ostream& out)
      : command_(std::move(command)), config_(config), out_(out) {}

  io::Geometry geometry() const {
    if (config_.geometry.empty()) throw Error(ErrorCode::InvalidInput, "--geometry is required");
    const io::Json doc = io::read_json_file(config_.geometry);
    if (config_.weights.empty()) return io::parse_geometry(doc);
    const io::Json w = io::read_json_file(config_.weights);
    return io::parse_geometry(doc, &w);
  }

  std::optional<LatticeVec> divisor() const {
    if (config_.divisor.empty()) return std::nullopt;
    return io::parse_lattice(config_.divisor);
  }

  metrics::MetricPotential metric(const io::Geometry& g) const {
    if (!config_.metric.empty()) return io::parse_metric(io::read_json_file(config_.metric), g.potential);
    if (auto a = divisor()) return metrics::MetricPotential(g.potential, *a);
    throw Error(ErrorCode::InvalidInput, "give --metric or --divisor");
  }

  syz::LagrangianSection section(const io::Geometry& g) const {
    if (!config_.section.empty()) return io::parse_section(io::read_json_file(config_.section), g.potential);
    return syz::transform(metric(g));
  }

  growth::GrowthOptions growth_options() const {
    growth::GrowthOptions o = config_.growth;
    o.seed = config_.seed;
    o.threads = config_.threads;
    return o;
  }

  std::vector<Vec> points(int dim) const {
    std::vector<Vec> out;
    for (const auto& text : config_.at) {
      std::vector<double> values;
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
          v = std::stod(item, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != item.size()) throw Error(ErrorCode::InvalidInput, "bad coordinate \"" + item + "\"");
        values.push_back(v);
      }
      if (static_cast<int>(values.size()) != dim) throw Error(ErrorCode::InvalidInput, "point has wrong dimension");
      out.push_back(Eigen::Map<Vec>(values.data(), dim));
    }
    if (out.empty()) out.push_back(Vec::Zero(dim));
    return out;
  }

  void emit(io::OrderedJson body) const {
    io::OrderedJson report;
    report["command"] = command_;
    report["version"] = kVersion;
    report["config_hash"] = io::hex64(io::fnv1a(config_fingerprint(command_, config_)));
    report["seed"] = config_.seed;
    for (auto it = body.begin(); it != body.end(); ++it) report[it.key()] = it.value();
    const std::string text = io::dump(report);
    if (config_.out_dir.empty()) {
      out_ << text;
      return;
    }
    write_file("report.json", [&](std::ostream& f) { f << text; });
  }

  void write_file(const std::string& name, const std::function<void(std::ostream&)>& body) const {
    if (config_.out_dir.empty()) return;
    std::filesystem::create_directories(config_.out_dir);
    const auto path = std::filesystem::path(config_.out_dir) / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path.string());
    body(f);
  }

  const RunConfig& config() const { return config_; }

 private:
  std::string command_;
  const RunConfig& config_;
  std::ostream& out_;
};

io::OrderedJson vec_json(const Vec& v) {
  io::OrderedJson out = io::OrderedJson::array();
  for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(v[j]);
  return out;
}

io::OrderedJson mat_json(const Mat& m) {
  io::OrderedJson out = io::OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vec_json(m.row(r).transpose()));
  return out;
}

int cmd_fan_check(const Runner& r) {
  if (r.config().geometry.empty()) throw Error(ErrorCode::InvalidInput, "--geometry is required");
  const toric::Fan fan = io::parse_fan(io::read_json_file(r.config().geometry));
  const auto report = toric::validate_fan(fan, r.config().seed);
  io::OrderedJson body;
  body["fan"] = io::to_json(report);
  r.emit(body);
  return report.ok() ? 0 : 1;
}

int cmd_polytope_info(const Runner& r) {
  const auto g = r.geometry();
  io::OrderedJson body;
  body["polytope"] = io::to_json(*g.polytope);
  r.emit(body);
  return 0;
}

int cmd_metric_guillemin(const Runner& r) {
  const auto g = r.geometry();
  const auto m = r.metric(g);
  const double lambda = analysis::slope_topological(*g.polytope, m.divisor());
  io::OrderedJson samples = io::OrderedJson::array();
  for (const auto& xi : r.points(g.fan.dim)) {
    io::OrderedJson s;
    s["xi"] = vec_json(xi);
    const Jet j = m.total().jet(xi, 2);
    s["value"] = j.value;
    s["gradient"] = vec_json(j.grad);
    s["hessian"] = mat_json(j.hess);
    s["he_residual"] = metrics::he_residual(m, lambda, xi);
    samples.push_back(std::move(s));
  }
  io::OrderedJson body;
  body["divisor"] = io::lattice_json(m.divisor());
  body["picard_class"] = io::lattice_json(m.picard_class().canonical);
  body["slope"] = lambda;
  body["samples"] = std::move(samples);
  r.emit(body);
  return 0;
}

int cmd_syz_transform(const Runner& r) {
  const auto g = r.geometry();
  const auto s = syz::transform(r.metric(g));
  io::OrderedJson samples = io::OrderedJson::array();
  for (const auto& xi : r.points(g.fan.dim)) {
    io::OrderedJson p;
    p["xi"] = vec_json(xi);
    p["y"] = vec_json(s.section_map(xi));
    samples.push_back(std::move(p));
  }
  io::OrderedJson body;
  body["representative"] = io::lattice_json(*s.representative());
  body["picard_class"] = io::lattice_json(s.picard_class()->canonical);
  body["samples"] = std::move(samples);
  r.emit(body);
  syz::SectionGrid grid;
  std::ostringstream xi_csv, x_csv;
  if (!r.config().out_dir.empty()) {
    syz::write_section_csv(s, grid, xi_csv, x_csv);
    r.write_file("section_xi.csv", [&](std::ostream& f) { f << xi_csv.str(); });
    r.write_file("section_x.csv", [&](std::ostream& f) { f << x_csv.str(); });
  }
  return 0;
}

int cmd_syz_invert(const Runner& r) {
  const auto g = r.geometry();
  const auto s = r.section(g);
  io::OrderedJson body;
  try {
    const auto inv = syz::invert(s, r.growth_options());
    const auto gauge =
        syz::affine_gauge_fit(inv.metric.correction(), r.config().sample_box, r.config().sample_points);
    body["extendable"] = true;
    body["divisor"] = io::lattice_json(inv.metric.divisor());
    body["picard_class"] = io::lattice_json(inv.inference.picard.canonical);
    body["correction_gauge"] = {{"linear", vec_json(gauge.linear)},
                                {"constant", gauge.constant},
                                {"max_deviation", gauge.max_deviation}};
    body["growth"] = io::to_json(inv.inference.report);
    r.emit(body);
    return 0;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotExtendable) throw;
    body["extendable"] = false;
    body["reason"] = e.what();
    r.emit(body);
    return 1;
  }
}

int cmd_growth_check(const Runner& r) {
  const auto g = r.geometry();
  const auto s = r.section(g);
  LatticeVec a;
  if (auto d = r.divisor()) a = *d;
  else if (s.representative()) a = *s.representative();
  else throw Error(ErrorCode::InvalidInput, "a section file needs --divisor or a representative");
  const auto report = growth::check_growth(s, a, r.growth_options());
  io::OrderedJson body;
  body["growth"] = io::to_json(report);
  r.emit(body);
  return report.any_fail() ? 1 : 0;
}

int cmd_growth_infer(const Runner& r) {
  const auto g = r.geometry();
  const auto s = r.section(g);
  const auto inf = growth::infer_class(s, r.growth_options());
  io::OrderedJson body;
  body["found"] = inf.has_value();
  if (inf) {
    body["representative"] = io::lattice_json(inf->representative);
    body["picard_class"] = io::lattice_json(inf->picard.canonical);
    io::OrderedJson fits = io::OrderedJson::array();
    for (const auto& f : inf->boundary_fits) fits.push_back(io::to_json(f));
    body["boundary_fits"] = std::move(fits);
    body["growth"] = io::to_json(inf->report);
  }
  r.emit(body);
  return inf ? 0 : 1;
}

int cmd_slope(const Runner& r) {
  const auto g = r.geometry();
  const auto s = r.section(g);
  LatticeVec a;
  if (s.representative()) a = *s.representative();
  else if (auto inf = growth::infer_class(s, r.growth_options())) a = inf->representative;
  else throw Error(ErrorCode::NotExtendable, "section fails the growth condition; its slope is undefined");
  analysis::QuadratureOptions q;
  q.half_width = r.config().half_width;
  q.threads = r.config().threads;
  const auto result = analysis::slope(s, a, q);
  io::OrderedJson body;
  body["divisor"] = io::lattice_json(a);
  body["slope"] = io::to_json(result);
  r.emit(body);
  return 0;
}

analysis::HarmonicSolution solve_harmonic(const Runner& r, const io::Geometry& g) {
  auto a = r.divisor();
  if (!a) {
    if (r.config().metric.empty()) throw Error(ErrorCode::InvalidInput, "give --divisor or --metric");
    a = io::parse_metric(io::read_json_file(r.config().metric), g.potential).divisor();
  }
  analysis::HarmonicOptions o;
  o.half_width = r.config().box;
  o.resolution = r.config().resolution;
  o.residual_bound = r.config().residual_bound;
  o.threads = r.config().threads;
  return analysis::harmonic_solve(g.potential, *a, o);
}

int cmd_harmonic_solve(const Runner& r) {
  const auto g = r.geometry();
  const auto sol = solve_harmonic(r, g);
  io::OrderedJson body;
  body["harmonic"] = io::harmonic_header(sol);
  body["slope_topological"] = analysis::slope_topological(*g.polytope, sol.divisor);
  r.emit(body);
  r.write_file("harmonic.csv", [&](std::ostream& f) { io::write_harmonic_csv(sol, f); });
  return 0;
}

int cmd_slag_residual(const Runner& r) {
  const auto g = r.geometry();
  std::optional<syz::LagrangianSection> base;
  double lambda = 0.0;
  io::OrderedJson body;
  if (r.config().section.empty() && r.config().metric.empty()) {
    const auto sol = solve_harmonic(r, g);
    base = sol.section();
    lambda = sol.lambda;
    body["harmonic"] = io::harmonic_header(sol);
  } else {
    base = r.section(g);
    if (base->representative()) lambda = analysis::slope_topological(*g.polytope, *base->representative());
  }
  const double eps = r.config().eps;
  const double theta = std::isnan(r.config().theta) ? std::atan(eps * lambda) : r.config().theta;
  analysis::SlagOptions o;
  o.per_axis = r.config().per_axis;
  o.margin = r.config().margin;
  o.threads = r.config().threads;
  const auto res = analysis::slag_residual(analysis::fiber_rescale(*base, eps), theta, o);
  body["eps"] = eps;
  body["theta"] = theta;
  body["lambda"] = lambda;
  body["points"] = res.points.size();
  body["max_residual"] = res.max_norm;
  r.emit(body);
  r.write_file("slag.csv", [&](std::ostream& f) {
    f.precision(17);
    for (int d = 0; d < g.fan.dim; ++d) f << 'x' << d + 1 << ',';
    f << "residual\n";
    for (std::size_t p = 0; p < res.points.size(); ++p) {
      for (Eigen::Index d = 0; d < res.points[p].size(); ++d) f << res.points[p][d] << ',';
      f << res.residuals[p] << '\n';
    }
  });
  return 0;
}

int cmd_roundtrip(const Runner& r) {
  const auto g = r.geometry();
  const auto m = r.metric(g);
  const auto s = syz::transform(m);
  io::OrderedJson body;
  body["divisor"] = io::lattice_json(m.divisor());
  try {
    const auto inv = syz::invert(s, r.growth_options());
    const auto back = syz::transform(inv.metric);
    const double y_error =
        syz::max_section_difference(s.potential(), back.potential(), r.config().sample_box, r.config().sample_points);
    const bool same_class = inv.inference.picard == m.picard_class();
    body["recovered_divisor"] = io::lattice_json(inv.metric.divisor());
    body["same_class"] = same_class;
    body["y_error"] = y_error;
    body["ok"] = same_class && y_error <= 1e-8;
    r.emit(body);
    return same_class && y_error <= 1e-8 ? 0 : 1;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotExtendable) throw;
    body["ok"] = false;
    body["reason"] = e.what();
    r.emit(body);
    return 1;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  CLI::App app{"SYZ mirror transform lab for projective toric manifolds", "syzlab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--geometry", config.geometry, "fan and polytope JSON")->check(CLI::ExistingFile);
    sub->add_option("--weights", config.weights, "lattice-point weights JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", config.out_dir, "output directory (report.json and CSV files)");
    sub->add_option("--seed", config.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto add_metric = [&](CLI::App* sub) {
    sub->add_option("--metric", config.metric, "metric JSON")->check(CLI::ExistingFile);
    sub->add_option("--divisor", config.divisor, "divisor representative, e.g. 1,0,0");
  };
  auto add_section = [&](CLI::App* sub) {
    add_metric(sub);
    sub->add_option("--section", config.section, "section JSON")->check(CLI::ExistingFile);
  };
  auto add_growth = [&](CLI::App* sub) {
    auto& g = config.growth;
    sub->add_option("--T0", g.T0, "first sample depth")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--step", g.step, "sample spacing")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--samples", g.samples, "samples per window")->check(CLI::Range(3, 1000))->capture_default_str();
    sub->add_option("--tol-fit", g.tol_fit)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--tol-lim", g.tol_lim)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--tol-match", g.tol_match)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--tol-zero", g.tol_zero)->check(CLI::PositiveNumber)->capture_default_str();
  };
  auto add_samples = [&](CLI::App* sub) {
    sub->add_option("--at", config.at, "evaluation point xi, e.g. 0.5,-1 (repeatable)");
  };
  auto add_box = [&](CLI::App* sub) {
    sub->add_option("--sample-box", config.sample_box, "half-width of comparison grid")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--sample-points", config.sample_points, "comparison grid points per axis")
        ->check(CLI::Range(2, 10000))
        ->capture_default_str();
  };
  auto add_harmonic = [&](CLI::App* sub) {
    sub->add_option("--box", config.box, "grid half-width T")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--resolution", config.resolution, "grid points per axis (odd)")
        ->check(CLI::Range(5, 100001))
        ->capture_default_str();
    sub->add_option("--residual-bound", config.residual_bound)->check(CLI::PositiveNumber)->capture_default_str();
  };

  std::string command;
  std::function<int(const Runner&)> action;
  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help, int (*fn)(const Runner&)) {
    CLI::App* sub = group->add_subcommand(name, help);
    add_common(sub);
    sub->callback([&, name, group, fn] {
      command = (group == &app ? std::string() : group->get_name() + " ") + name;
      action = fn;
    });
    return sub;
  };

  CLI::App* fan = app.add_subcommand("fan", "fan checks")->require_subcommand(1);
  leaf(fan, "check", "validate primitivity, smoothness and completeness", cmd_fan_check);
  CLI::App* polytope = app.add_subcommand("polytope", "moment polytope")->require_subcommand(1);
  leaf(polytope, "info", "vertices, volumes and lattice points", cmd_polytope_info);
  CLI::App* metric = app.add_subcommand("metric", "hermitian metrics")->require_subcommand(1);
  auto* mg = leaf(metric, "guillemin", "metric potential, curvature and HE residual", cmd_metric_guillemin);
  add_metric(mg);
  add_samples(mg);
  CLI::App* syzcmd = app.add_subcommand("syz", "SYZ transform")->require_subcommand(1);
  auto* st = leaf(syzcmd, "transform", "metric to Lagrangian section", cmd_syz_transform);
  add_metric(st);
  add_samples(st);
  auto* si = leaf(syzcmd, "invert", "Lagrangian section to metric", cmd_syz_invert);
  add_section(si);
  add_growth(si);
  add_box(si);
  CLI::App* grow = app.add_subcommand("growth", "growth conditions")->require_subcommand(1);
  auto* gc = leaf(grow, "check", "check the growth condition for a representative", cmd_growth_check);
  add_section(gc);
  add_growth(gc);
  auto* gi = leaf(grow, "infer", "infer the divisor class of a section", cmd_growth_infer);
  add_section(gi);
  add_growth(gi);
  auto* sl = leaf(&app, "slope", "normalized slope by quadrature and topology", cmd_slope);
  add_section(sl);
  add_growth(sl);
  sl->add_option("--half-width", config.half_width, "quadrature box half-width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  CLI::App* harm = app.add_subcommand("harmonic", "harmonic sections")->require_subcommand(1);
  auto* hs = leaf(harm, "solve", "solve the harmonic equation on a grid", cmd_harmonic_solve);
  add_metric(hs);
  add_harmonic(hs);
  CLI::App* slag = app.add_subcommand("slag", "special Lagrangian residuals")->require_subcommand(1);
  auto* sr = leaf(slag, "residual", "Im(e^{i theta} det(I - i dy/dx)) on the polytope", cmd_slag_residual);
  add_section(sr);
  add_harmonic(sr);
  sr->add_option("--theta", config.theta, "phase (default atan(eps lambda))");
  sr->add_option("--eps", config.eps, "fiber rescaling")->check(CLI::PositiveNumber)->capture_default_str();
  sr->add_option("--per-axis", config.per_axis, "polytope grid points per axis")
      ->check(CLI::Range(2, 10000))
      ->capture_default_str();
  sr->add_option("--margin", config.margin, "minimum facet distance")->check(CLI::PositiveNumber)->capture_default_str();
  auto* rt = leaf(&app, "roundtrip", "transform, infer and invert a metric", cmd_roundtrip);
  add_metric(rt);
  add_growth(rt);
  add_box(rt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (!action) {
    err << app.help();
    return 2;
  }
  try {
    Runner runner(command, config, out);
    return action(runner);
  } catch (const Error& e) {
    err << "syzlab " << command << ": " << e.what() << '\n';
    return e.is_numerical() ? 3 : 2;
  } catch (const std::exception& e) {
    err << "syzlab " << command << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace syzlab::cli
