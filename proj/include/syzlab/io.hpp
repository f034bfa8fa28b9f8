#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "syzlab/analysis.hpp"
#include "syzlab/growth.hpp"
#include "syzlab/kaehler.hpp"
#include "syzlab/metrics.hpp"
#include "syzlab/section.hpp"
#include "syzlab/toric.hpp"

namespace syzlab::io {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Parsed input; malformed documents raise InvalidInput.
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

struct Geometry {
  toric::Fan fan;
  LatticeVec offsets;
  std::shared_ptr<const toric::Polytope> polytope;
  std::shared_ptr<const kaehler::ToricPotential> potential;
};

/// {"dim", "generators", "max_cones" (1-based), "offsets"}; integers only.
toric::Fan parse_fan(const Json& doc);
LatticeVec parse_offsets(const Json& doc);
/// Builds the polytope and toric potential; `weights` may be null.
Geometry parse_geometry(const Json& doc, const Json* weights = nullptr);
/// {"u1,u2,...": w} with w > 0.
std::vector<double> parse_weights(const Json& doc, const toric::Polytope& polytope);

/// Field specification, see README for the accepted types.
ScalarField parse_field(const Json& spec, const kaehler::ToricPotential& geometry);
/// {"divisor": [...], "correction": field}
metrics::MetricPotential parse_metric(const Json& doc, std::shared_ptr<const kaehler::ToricPotential> geometry);
/// {"potential": field, "representative": [...]} (representative optional)
syz::LagrangianSection parse_section(const Json& doc, std::shared_ptr<const kaehler::ToricPotential> geometry);

/// "1,0,-2" -> {1, 0, -2}
LatticeVec parse_lattice(std::string_view text);
LatticeVec json_lattice(const Json& value, std::string_view what);

/// Serializes with every floating value printed to 17 significant digits.
std::string dump(const OrderedJson& value, int indent = 2);

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t value);

OrderedJson to_json(const toric::FanReport& report);
OrderedJson to_json(const toric::Polytope& polytope);
OrderedJson to_json(const growth::TailFit& fit);
OrderedJson to_json(const growth::GrowthReport& report);
OrderedJson to_json(const analysis::SlopeResult& result);
OrderedJson harmonic_header(const analysis::HarmonicSolution& solution);
OrderedJson lattice_json(const LatticeVec& v);

/// One row per node: xi coordinates, f.
void write_harmonic_csv(const analysis::HarmonicSolution& solution, std::ostream& out);

}  // namespace syzlab::io
