#include "syzlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "syzlab/errors.hpp"

namespace syzlab::io {

namespace {

void require_object(const Json& doc, std::string_view what) {
  if (!doc.is_object()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a JSON object");
}

void check_keys(const Json& doc, std::initializer_list<std::string_view> allowed, std::string_view what) {
  require_object(doc, what);
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw Error(ErrorCode::InvalidInput, "unknown key \"" + key + "\" in " + std::string(what));
  }
}

const Json& member(const Json& doc, const char* key, std::string_view what) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorCode::InvalidInput, std::string(what) + " is missing \"" + key + "\"");
  return *it;
}

std::int64_t exact_integer(const Json& v, std::string_view what) {
  if (!v.is_number_integer())
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must contain integers only, got " + v.dump());
  return v.get<std::int64_t>();
}

double number(const Json& v, std::string_view what) {
  if (!v.is_number()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be finite");
  return x;
}

Vec number_vector(const Json& v, int dim, std::string_view what) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim)
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must be an array of length " + std::to_string(dim));
  Vec out(dim);
  for (int j = 0; j < dim; ++j) out[j] = number(v[static_cast<std::size_t>(j)], what);
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path + ": " + e.what());
  }
}

LatticeVec json_lattice(const Json& value, std::string_view what) {
  if (!value.is_array()) throw Error(ErrorCode::InvalidInput, std::string(what) + " must be an array");
  LatticeVec out;
  for (const auto& x : value) out.push_back(exact_integer(x, what));
  return out;
}

toric::Fan parse_fan(const Json& doc) {
  check_keys(doc, {"dim", "generators", "max_cones", "offsets"}, "geometry");
  toric::Fan fan;
  const auto dim = exact_integer(member(doc, "dim", "geometry"), "dim");
  if (dim < 1) throw Error(ErrorCode::InvalidInput, "dim must be positive");
  fan.dim = static_cast<int>(dim);
  const Json& gens = member(doc, "generators", "geometry");
  if (!gens.is_array()) throw Error(ErrorCode::InvalidInput, "generators must be an array");
  for (const auto& g : gens) {
    LatticeVec v = json_lattice(g, "generators");
    if (static_cast<int>(v.size()) != fan.dim)
      throw Error(ErrorCode::MalformedFan, "generator " + toric::format_lattice(v) + " has wrong dimension");
    fan.generators.push_back(std::move(v));
  }
  const Json& cones = member(doc, "max_cones", "geometry");
  if (!cones.is_array()) throw Error(ErrorCode::InvalidInput, "max_cones must be an array");
  for (const auto& c : cones) {
    std::vector<int> cone;
    for (auto i : json_lattice(c, "max_cones")) {
      if (i < 1 || i > fan.num_rays())
        throw Error(ErrorCode::MalformedFan, "cone index " + std::to_string(i) + " out of range (1-based)");
      cone.push_back(static_cast<int>(i - 1));
    }
    fan.max_cones.push_back(std::move(cone));
  }
  return fan;
}

LatticeVec parse_offsets(const Json& doc) {
  require_object(doc, "geometry");
  return json_lattice(member(doc, "offsets", "geometry"), "offsets");
}

std::vector<double> parse_weights(const Json& doc, const toric::Polytope& polytope) {
  require_object(doc, "weights");
  std::map<LatticeVec, double> overrides;
  for (const auto& [key, value] : doc.items()) {
    const LatticeVec u = parse_lattice(key);
    if (static_cast<int>(u.size()) != polytope.dim())
      throw Error(ErrorCode::InvalidInput, "weight key \"" + key + "\" has wrong dimension");
    const double w = number(value, "weight");
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidInput, "weight for \"" + key + "\" must be positive");
    if (!overrides.emplace(u, w).second) throw Error(ErrorCode::InvalidInput, "duplicate weight key \"" + key + "\"");
  }
  return kaehler::weights_from_map(polytope, overrides);
}

Geometry parse_geometry(const Json& doc, const Json* weights) {
  Geometry g;
  g.fan = parse_fan(doc);
  g.offsets = parse_offsets(doc);
  g.polytope = std::make_shared<const toric::Polytope>(toric::Polytope::build(g.fan, g.offsets));
  std::optional<std::vector<double>> c;
  if (weights) c = parse_weights(*weights, *g.polytope);
  g.potential = kaehler::ToricPotential::make(g.polytope, c);
  return g;
}

ScalarField parse_field(const Json& spec, const kaehler::ToricPotential& geometry) {
  require_object(spec, "field");
  const int n = geometry.dim();
  const Json& type_value = member(spec, "type", "field");
  if (!type_value.is_string()) throw Error(ErrorCode::InvalidInput, "field type must be a string");
  const std::string type = type_value.get<std::string>();
  if (type == "zero") {
    check_keys(spec, {"type"}, "zero field");
    return ScalarField::zero(n);
  }
  if (type == "grid") {
    check_keys(spec, {"type", "box", "samples", "resolution"}, "grid field");
    const double box = number(member(spec, "box", "grid field"), "box");
    if (!(box > 0.0)) throw Error(ErrorCode::InvalidInput, "grid box must be positive");
    const Json& samples = member(spec, "samples", "grid field");
    if (!samples.is_array()) throw Error(ErrorCode::InvalidInput, "grid samples must be an array");
    std::vector<double> values;
    for (const auto& v : samples) values.push_back(number(v, "grid sample"));
    int N = static_cast<int>(std::lround(std::pow(static_cast<double>(values.size()), 1.0 / n)));
    if (auto it = spec.find("resolution"); it != spec.end()) N = static_cast<int>(exact_integer(*it, "resolution"));
    std::size_t expected = 1;
    for (int d = 0; d < n; ++d) expected *= static_cast<std::size_t>(std::max(N, 0));
    if (N < 4 || expected != values.size())
      throw Error(ErrorCode::InvalidInput, "grid samples must form a square grid with at least 4 points per axis");
    return ScalarField::grid(TensorSpline(n, box, N, std::move(values)));
  }
  if (type == "guillemin") {
    check_keys(spec, {"type", "divisor"}, "guillemin field");
    return metrics::guillemin_field(geometry, json_lattice(member(spec, "divisor", "guillemin field"), "divisor"));
  }
  if (type == "toric_potential") {
    check_keys(spec, {"type"}, "toric_potential field");
    return geometry.field();
  }
  if (type == "affine") {
    check_keys(spec, {"type", "linear", "constant"}, "affine field");
    const Vec linear = number_vector(member(spec, "linear", "affine field"), n, "linear");
    const double c = spec.contains("constant") ? number(spec["constant"], "constant") : 0.0;
    return ScalarField::affine(linear, c);
  }
  if (type == "bump") {
    check_keys(spec, {"type", "center", "radius", "amplitude"}, "bump field");
    return ScalarField::bump(number_vector(member(spec, "center", "bump field"), n, "center"),
                             number(member(spec, "radius", "bump field"), "radius"),
                             number(member(spec, "amplitude", "bump field"), "amplitude"));
  }
  if (type == "polynomial") {
    check_keys(spec, {"type", "monomials"}, "polynomial field");
    std::vector<PolynomialForm::Monomial> monomials;
    for (const auto& m : member(spec, "monomials", "polynomial field")) {
      check_keys(m, {"coefficient", "powers"}, "monomial");
      std::vector<int> powers;
      for (auto p : json_lattice(member(m, "powers", "monomial"), "powers")) powers.push_back(static_cast<int>(p));
      monomials.push_back({number(member(m, "coefficient", "monomial"), "coefficient"), std::move(powers)});
    }
    return ScalarField::polynomial(n, std::move(monomials));
  }
  if (type == "exponential") {
    check_keys(spec, {"type", "coefficient", "rate"}, "exponential field");
    return ScalarField::exponential(number(member(spec, "coefficient", "exponential field"), "coefficient"),
                                    number_vector(member(spec, "rate", "exponential field"), n, "rate"));
  }
  if (type == "sum") {
    check_keys(spec, {"type", "terms"}, "sum field");
    const Json& terms = member(spec, "terms", "sum field");
    if (!terms.is_array() || terms.empty()) throw Error(ErrorCode::InvalidInput, "sum needs a non-empty term list");
    ScalarField total = ScalarField::zero(n);
    for (const auto& t : terms) {
      check_keys(t, {"coefficient", "field"}, "sum term");
      const double c = t.contains("coefficient") ? number(t["coefficient"], "coefficient") : 1.0;
      total = total + c * parse_field(member(t, "field", "sum term"), geometry);
    }
    return total;
  }
  throw Error(ErrorCode::InvalidInput, "unknown field type \"" + type + "\"");
}

metrics::MetricPotential parse_metric(const Json& doc, std::shared_ptr<const kaehler::ToricPotential> geometry) {
  check_keys(doc, {"divisor", "correction"}, "metric");
  LatticeVec a = json_lattice(member(doc, "divisor", "metric"), "divisor");
  if (static_cast<int>(a.size()) != geometry->polytope().num_facets())
    throw Error(ErrorCode::InvalidInput, "divisor needs one entry per ray");
  std::optional<ScalarField> f;
  if (auto it = doc.find("correction"); it != doc.end()) f = parse_field(*it, *geometry);
  return metrics::MetricPotential(std::move(geometry), std::move(a), std::move(f));
}

syz::LagrangianSection parse_section(const Json& doc, std::shared_ptr<const kaehler::ToricPotential> geometry) {
  check_keys(doc, {"potential", "representative"}, "section");
  ScalarField g = parse_field(member(doc, "potential", "section"), *geometry);
  std::optional<LatticeVec> rep;
  if (auto it = doc.find("representative"); it != doc.end()) rep = json_lattice(*it, "representative");
  return syz::LagrangianSection(std::move(geometry), std::move(g), std::move(rep));
}

LatticeVec parse_lattice(std::string_view text) {
  LatticeVec out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item(text.substr(pos, comma - pos));
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw Error(ErrorCode::InvalidInput, "empty entry in \"" + std::string(text) + "\"");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw Error(ErrorCode::InvalidInput, "\"" + item + "\" is not an integer");
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

namespace {

void dump_into(const OrderedJson& v, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{";
    out += nl;
    bool first = true;
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (!first) out += std::string(",") + nl;
      first = false;
      out += pad + OrderedJson(it.key()).dump() + (indent > 0 ? ": " : ":");
      dump_into(it.value(), indent, depth + 1, out);
    }
    out += nl + close + "}";
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
      return;
    }
    const bool flat = std::all_of(v.begin(), v.end(), [](const OrderedJson& x) { return x.is_primitive(); });
    out += "[";
    bool first = true;
    for (const auto& x : v) {
      if (!first) out += flat ? ", " : std::string(",") + nl;
      else if (!flat) out += nl;
      first = false;
      if (!flat) out += pad;
      dump_into(x, indent, depth + 1, out);
    }
    if (!flat) out += nl + close;
    out += "]";
  } else if (v.is_number_float()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      out += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    out += s;
  } else {
    out += v.dump();
  }
}

}  // namespace

std::string dump(const OrderedJson& value, int indent) {
  std::string out;
  dump_into(value, indent, 0, out);
  out += "\n";
  return out;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

OrderedJson lattice_json(const LatticeVec& v) {
  OrderedJson out = OrderedJson::array();
  for (auto x : v) out.push_back(x);
  return out;
}

OrderedJson to_json(const toric::FanReport& r) {
  OrderedJson out;
  OrderedJson prim = OrderedJson::array();
  for (bool b : r.primitive) prim.push_back(b);
  out["primitive"] = prim;
  out["cone_determinants"] = lattice_json(r.cone_determinants);
  OrderedJson smooth = OrderedJson::array();
  for (bool b : r.cone_smooth) smooth.push_back(b);
  out["cone_smooth"] = smooth;
  OrderedJson unused = OrderedJson::array();
  for (int i : r.unused_generators) unused.push_back(i + 1);
  out["unused_generators"] = unused;
  out["complete"] = r.complete;
  out["completeness"] = r.exact_completeness ? "exact" : "sampled";
  out["ok"] = r.ok();
  return out;
}

OrderedJson to_json(const toric::Polytope& p) {
  OrderedJson out;
  out["dim"] = p.dim();
  out["offsets"] = lattice_json(p.offsets());
  OrderedJson verts = OrderedJson::array();
  for (const auto& v : p.vertices()) verts.push_back(lattice_json(v));
  out["vertices"] = verts;
  out["volume"] = p.volume();
  out["facet_euclidean_volumes"] = p.facet_euclidean_volumes();
  out["facet_lattice_volumes"] = p.facet_lattice_volumes();
  const auto points = p.lattice_points();
  out["num_lattice_points"] = points.size();
  OrderedJson pts = OrderedJson::array();
  for (const auto& u : points) pts.push_back(lattice_json(u));
  out["lattice_points"] = pts;
  return out;
}

OrderedJson to_json(const growth::TailFit& f) {
  OrderedJson out;
  out["limit"] = f.limit;
  out["decay"] = f.decay;
  out["residual"] = f.residual;
  out["shifted_limit"] = f.shifted_limit;
  out["T0"] = f.T0;
  out["step"] = f.step;
  out["samples"] = f.samples;
  out["rate"] = f.rate;
  out["converged"] = f.converged;
  out["status"] = growth::to_string(f.status);
  return out;
}

OrderedJson to_json(const growth::GrowthReport& r) {
  OrderedJson out;
  out["representative"] = lattice_json(r.representative);
  out["overall"] = growth::to_string(r.overall());
  out["pass"] = r.pass();
  OrderedJson checks = OrderedJson::array();
  for (const auto& e : r.entries) {
    OrderedJson c;
    c["cone"] = e.cone + 1;
    c["condition"] = e.condition;
    if (e.j >= 0) c["j"] = e.j + 1;
    if (e.k >= 0) c["k"] = e.k + 1;
    if (e.l >= 0) c["l"] = e.l + 1;
    c["frozen"] = e.frozen == 0 ? "zero" : "random";
    c["limit_lhs"] = e.limit_lhs;
    c["limit_rhs"] = e.limit_rhs;
    if (e.condition == 1) c["first_order_limit"] = e.first_order_limit;
    c["residual"] = e.residual;
    c["verdict"] = growth::to_string(e.verdict);
    if (!e.note.empty()) c["note"] = e.note;
    checks.push_back(std::move(c));
  }
  out["checks"] = std::move(checks);
  return out;
}

OrderedJson to_json(const analysis::SlopeResult& s) {
  OrderedJson out;
  out["quadrature"] = s.quadrature;
  out["topological"] = s.topological;
  out["difference"] = s.quadrature - s.topological;
  out["volume"] = s.volume;
  out["facet_contributions"] = s.facet_contributions;
  return out;
}

OrderedJson harmonic_header(const analysis::HarmonicSolution& s) {
  OrderedJson out;
  out["divisor"] = lattice_json(s.divisor);
  out["lambda"] = s.lambda;
  out["discrete_residual"] = s.discrete_residual;
  out["interior_residual"] = s.interior_residual;
  OrderedJson grid;
  grid["half_width"] = s.half_width;
  grid["resolution"] = s.resolution;
  grid["spacing"] = s.h;
  out["grid"] = grid;
  return out;
}

void write_harmonic_csv(const analysis::HarmonicSolution& s, std::ostream& out) {
  const int n = s.geometry->dim();
  const auto precision = out.precision(17);
  for (int d = 0; d < n; ++d) out << "xi" << d + 1 << ',';
  out << "f\n";
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (double value : s.samples) {
    for (int d = 0; d < n; ++d) out << -s.half_width + s.h * idx[static_cast<std::size_t>(d)] << ',';
    out << value << '\n';
    for (int d = n - 1; d >= 0; --d) {
      if (++idx[static_cast<std::size_t>(d)] < s.resolution) break;
      idx[static_cast<std::size_t>(d)] = 0;
    }
  }
  out.precision(precision);
}

}  // namespace syzlab::io
