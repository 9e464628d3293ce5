#pragma once

#include <string>

#include <json.hpp>

#include "theon/density.hpp"
#include "theon/peon.hpp"
#include "theon/quasitest.hpp"
#include "theon/space.hpp"
#include "theon/symbols.hpp"

namespace theon {

using nlohmann::json;

json language_to_json(const Language& l);
LanguagePtr language_from_json(const json& j);

// {"language": [...], "vertices": [...], "relations": {"P": [[v,...],...]}}
json structure_to_json(const Structure& m);
Structure structure_from_json(const json& j);

// map from comma-joined sorted labels to {"w": [...], "orders": [[...],...]}
json point_to_json(const Point& x);
Point point_from_json(const json& j);

json formula_to_json(const Formula& f);
Formula formula_from_json(const json& j);

json chamber_table_to_json(const ChamberTable& t);
std::shared_ptr<const ChamberTable> chamber_table_from_json(const json& j);

json estimate_to_json(const DensityEstimate& e);
json equivalence_to_json(const EquivalenceReport& r);
json report_to_json(const TestReport& r);

std::string table_to_csv(const DistributionTable& t);
json table_to_json(const DistributionTable& t);

// Theon specification: a gallery name, an explicit chamber table, or a
// composition tree of reduct / interpret / coupling / strip_orders /
// simulate_orders nodes.
EuclideanStructure theon_from_config(const json& j);
EuclideanStructure theon_from_spec(const std::string& text);  // name, inline JSON or @file

// Small builtin structures for the CLI (edge, nonedge, triangle, ...) or
// inline JSON / @file.
Structure structure_from_spec(const std::string& text, const LanguagePtr& lang);

}  // namespace theon
