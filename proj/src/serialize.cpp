#include "theon/serialize.hpp"

#include <fstream>
#include <sstream>

#include "theon/realization.hpp"
#include "theon/stats.hpp"

namespace theon {

// ------------------------------------------------------------------ language

json language_to_json(const Language& l) {
  json out = json::array();
  for (const auto& p : l.predicates()) {
    json e{{"name", p.name}, {"arity", p.arity}};
    if (p.symmetric) e["symmetric"] = true;
    out.push_back(std::move(e));
  }
  return out;
}

LanguagePtr language_from_json(const json& j) {
  std::vector<Predicate> preds;
  for (const auto& e : j)
    preds.push_back(Predicate{e.at("name").get<std::string>(),
                              e.at("arity").get<int>(),
                              e.value("symmetric", false)});
  return Language::of(std::move(preds));
}

// ----------------------------------------------------------------- structure

json structure_to_json(const Structure& m) {
  json rels = json::object();
  for (int p = 0; p < m.lang->size(); ++p) {
    json tuples = json::array();
    for (const auto& t : m.rels[p]) {
      json tuple = json::array();
      for (auto v : t) tuple.push_back(m.vertices->label(v));
      tuples.push_back(std::move(tuple));
    }
    rels[m.lang->at(p).name] = std::move(tuples);
  }
  return json{{"language", language_to_json(*m.lang)},
              {"vertices", m.vertices->labels()},
              {"relations", std::move(rels)}};
}

Structure structure_from_json(const json& j) {
  LanguagePtr lang = language_from_json(j.at("language"));
  VertexSetPtr vs = VertexSet::of(j.at("vertices").get<std::vector<std::string>>());
  Structure m = Structure::empty(lang, vs);
  const json& rels = j.at("relations");
  for (int p = 0; p < lang->size(); ++p) {
    auto it = rels.find(lang->at(p).name);
    if (it == rels.end()) continue;
    for (const auto& tuple : *it) {
      std::vector<std::uint8_t> t;
      for (const auto& label : tuple) {
        int idx = vs->index_of(label.get<std::string>());
        if (idx < 0) throw Error("relation uses an undeclared vertex");
        t.push_back(static_cast<std::uint8_t>(idx));
      }
      m.add_tuple(p, std::move(t));
    }
  }
  m.normalize();
  return m;
}

// --------------------------------------------------------------------- point

namespace {

std::string subset_key(const VertexSet& vs, Subset a) {
  std::string key;
  for (int i : subset_elements(a)) {
    if (!key.empty()) key += ',';
    key += vs.label(i);
  }
  return key;
}

}  // namespace

json point_to_json(const Point& x) {
  const Point m = x.materialize();
  json out = json::object();
  const VertexSet& vs = *m.vertex_set();
  for (Subset a : r_sets(vs.size(), m.ell())) {
    Coord c = m.coord(a);
    json orders = json::array();
    for (const auto& o : c.ord) {
      json ranked = json::array();
      for (auto e : o.ranked) ranked.push_back(vs.label(e));
      orders.push_back(std::move(ranked));
    }
    out[subset_key(vs, a)] = json{{"w", c.w}, {"orders", std::move(orders)}};
  }
  return out;
}

Point point_from_json(const json& j) {
  std::vector<std::string> labels;
  SpaceDescriptor desc{1, 0};
  int max_size = 0;
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::stringstream ss(it.key());
    std::string part;
    int count = 0;
    while (std::getline(ss, part, ',')) {
      ++count;
      labels.push_back(part);
    }
    max_size = std::max(max_size, count);
    if (first) {
      desc.weight_width = static_cast<int>(it.value().at("w").size());
      desc.order_degree = static_cast<int>(it.value().at("orders").size());
      first = false;
    }
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  VertexSetPtr vs = VertexSet::of(labels);
  int ell = max_size < vs->size() ? max_size : 0;

  std::map<Subset, Coord> coords;
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::stringstream ss(it.key());
    std::string part;
    Subset a = 0;
    while (std::getline(ss, part, ',')) {
      int idx = vs->index_of(part);
      if (idx < 0) throw Error("point key uses an unknown label");
      a |= Subset{1} << idx;
    }
    Coord c;
    c.w = it.value().at("w").get<std::vector<double>>();
    for (const auto& ranked : it.value().at("orders")) {
      Order o;
      for (const auto& label : ranked)
        o.ranked.push_back(static_cast<std::uint8_t>(vs->index_of(label.get<std::string>())));
      c.ord.push_back(std::move(o));
    }
    coords[a] = std::move(c);
  }
  return Point::materialized(vs, desc, std::move(coords), ell);
}

// ------------------------------------------------------------------- formula

json formula_to_json(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::True:
      return json(true);
    case K::False:
      return json(false);
    case K::Pred:
      return json{{"pred", f.pred}, {"vars", f.vars}};
    case K::Eq:
      return json{{"eq", {f.lhs, f.rhs}}};
    case K::Not:
      return json{{"not", formula_to_json(f.kids[0])}};
    case K::And: {
      json kids = json::array();
      for (const auto& k : f.kids) kids.push_back(formula_to_json(k));
      return json{{"and", std::move(kids)}};
    }
    case K::Or: {
      json kids = json::array();
      for (const auto& k : f.kids) kids.push_back(formula_to_json(k));
      return json{{"or", std::move(kids)}};
    }
  }
  return json(true);
}

Formula formula_from_json(const json& j) {
  if (j.is_boolean()) return Formula::truth(j.get<bool>());
  if (j.contains("pred"))
    return Formula::atom(j.at("pred").get<std::string>(),
                         j.at("vars").get<std::vector<int>>());
  if (j.contains("eq"))
    return Formula::eq(j.at("eq").at(0).get<int>(), j.at("eq").at(1).get<int>());
  if (j.contains("not")) return Formula::negate(formula_from_json(j.at("not")));
  if (j.contains("and")) {
    std::vector<Formula> kids;
    for (const auto& k : j.at("and")) kids.push_back(formula_from_json(k));
    return Formula::conj(std::move(kids));
  }
  if (j.contains("or")) {
    std::vector<Formula> kids;
    for (const auto& k : j.at("or")) kids.push_back(formula_from_json(k));
    return Formula::disj(std::move(kids));
  }
  throw Error("unrecognized formula node");
}

// ------------------------------------------------------------- chamber table

namespace {

json coords_to_json(const std::vector<std::pair<Subset, int>>& coords) {
  json out = json::array();
  for (const auto& [a, c] : coords) {
    json elems = json::array();
    for (int e : subset_elements(a)) elems.push_back(e + 1);  // 1-based locals
    out.push_back(json{{"subset", std::move(elems)}, {"component", c}});
  }
  return out;
}

std::vector<std::pair<Subset, int>> coords_from_json(const json& j) {
  std::vector<std::pair<Subset, int>> out;
  for (const auto& e : j) {
    Subset a = 0;
    for (const auto& v : e.at("subset")) a |= Subset{1} << (v.get<int>() - 1);
    out.push_back({a, e.at("component").get<int>()});
  }
  return out;
}

}  // namespace

json chamber_table_to_json(const ChamberTable& t) {
  json entries = json::array();
  for (const auto& [key, value] : t.entries())
    entries.push_back(json{{"key", key}, {"holds", value}});
  return json{{"arity", t.arity()},
              {"m", t.resolution()},
              {"weight_width", t.descriptor().weight_width},
              {"order_degree", t.descriptor().order_degree},
              {"wcoords", coords_to_json(t.wcoords())},
              {"ocoords", coords_to_json(t.ocoords())},
              {"entries", std::move(entries)}};
}

std::shared_ptr<const ChamberTable> chamber_table_from_json(const json& j) {
  std::map<std::vector<int>, bool> entries;
  for (const auto& e : j.at("entries"))
    entries[e.at("key").get<std::vector<int>>()] = e.at("holds").get<bool>();
  return ChamberTable::from_parts(
      j.at("arity").get<int>(),
      SpaceDescriptor{j.at("weight_width").get<int>(), j.at("order_degree").get<int>()},
      j.at("m").get<int>(), coords_from_json(j.at("wcoords")),
      coords_from_json(j.at("ocoords")), std::move(entries));
}

// ------------------------------------------------------------------- reports

json estimate_to_json(const DensityEstimate& e) {
  json out{{"estimate", e.estimate},
           {"ci_low", e.ci_low},
           {"ci_high", e.ci_high},
           {"samples", e.samples},
           {"exact", e.exact}};
  if (e.exact) {
    std::ostringstream os;
    os << e.value;
    out["value"] = os.str();
  }
  return out;
}

json equivalence_to_json(const EquivalenceReport& r) {
  json out{{"exact", r.exact},
           {"distinguishable", r.distinguishable},
           {"tv", r.tv},
           {"vertices", r.vertices},
           {"samples", r.samples}};
  if (r.p_value) out["p_value"] = *r.p_value;
  if (r.witness) out["witness"] = structure_id(*r.witness);
  return out;
}

json report_to_json(const TestReport& r) {
  return json{{"property", r.property},
              {"theon", r.theon},
              {"params",
               json{{"ell", r.ell},
                    {"n", r.vertices},
                    {"trials", r.trials},
                    {"cells", r.cells},
                    {"significance", r.significance}}},
              {"statistic", r.statistic},
              {"p_value", r.p_value},
              {"verdict", r.rejected ? "rejected" : "consistent"},
              {"low_power", r.low_power},
              {"witness", r.witness}};
}

// --------------------------------------------------------------------- table

std::string table_to_csv(const DistributionTable& t) {
  std::ostringstream os;
  os << "structure-id,structure-json,value,ci-low,ci-high,exact\n";
  auto row = [&](const Structure& st, double value, double lo, double hi) {
    std::string js = structure_to_json(st).dump();
    std::string quoted = "\"";
    for (char c : js) {
      if (c == '"') quoted += "\"\"";
      else quoted += c;
    }
    quoted += "\"";
    os << structure_id(st) << ',' << quoted << ',' << value << ',' << lo << ','
       << hi << ',' << (t.exact ? "true" : "false") << '\n';
  };
  if (t.exact) {
    for (const auto& [st, p] : t.probs) {
      double v = static_cast<double>(p);
      row(st, v, v, v);
    }
  } else {
    for (const auto& [st, c] : t.counts) {
      auto ci = stats::wilson_ci(c, t.total);
      row(st, t.total ? static_cast<double>(c) / t.total : 0.0, ci.low, ci.high);
    }
  }
  return os.str();
}

json table_to_json(const DistributionTable& t) {
  json entries = json::array();
  if (t.exact) {
    for (const auto& [st, p] : t.probs) {
      std::ostringstream os;
      os << p;
      entries.push_back(json{{"id", structure_id(st)},
                             {"structure", structure_to_json(st)},
                             {"probability", static_cast<double>(p)},
                             {"exact_value", os.str()}});
    }
  } else {
    for (const auto& [st, c] : t.counts)
      entries.push_back(json{{"id", structure_id(st)},
                             {"structure", structure_to_json(st)},
                             {"count", c},
                             {"probability",
                              t.total ? static_cast<double>(c) / t.total : 0.0}});
  }
  return json{{"exact", t.exact},
              {"complete", t.complete},
              {"total", t.total},
              {"entries", std::move(entries)}};
}

// -------------------------------------------------------------------- config

EuclideanStructure theon_from_config(const json& j) {
  if (j.is_string()) return gallery(j.get<std::string>());
  if (j.contains("gallery"))
    return gallery(j.at("gallery").get<std::string>(), j.value("k", 0));
  if (j.contains("chamber_grid")) {
    auto table = chamber_table_from_json(j.at("chamber_grid"));
    EuclideanStructure n;
    n.desc = table->descriptor();
    n.name = j.value("name", std::string("chamber_grid"));
    const json& cg = j.at("chamber_grid");
    if (cg.contains("language"))
      n.lang = language_from_json(cg.at("language"));
    else
      n.lang = orientation_language(table->arity());
    if (n.lang->size() != 1 || n.lang->at(0).arity != table->arity())
      throw Error("chamber table language must have one matching predicate");
    n.peons.push_back(Peon::from_table(std::move(table)));
    return n;
  }
  const std::string op = j.at("op").get<std::string>();
  if (op == "coupling")
    return independent_coupling(theon_from_config(j.at("left")),
                                theon_from_config(j.at("right")));
  if (op == "reduct") {
    EuclideanStructure inner = theon_from_config(j.at("inner"));
    std::vector<Predicate> preds;
    for (const auto& name : j.at("keep")) {
      int q = inner.lang->index_of(name.get<std::string>());
      if (q < 0) throw Error("reduct keeps an unknown predicate");
      preds.push_back(inner.lang->at(q));
    }
    return reduct_theon(inner, Language::of(std::move(preds)));
  }
  if (op == "interpret") {
    EuclideanStructure inner = theon_from_config(j.at("inner"));
    LanguagePtr source = language_from_json(j.at("language"));
    std::vector<Formula> defs;
    for (const auto& p : source->predicates())
      defs.push_back(formula_from_json(j.at("defs").at(p.name)));
    return interpret_theon(Interpretation::of(source, inner.lang, std::move(defs)),
                           inner);
  }
  if (op == "strip_orders") {
    EuclideanStructure inner = theon_from_config(j.at("inner"));
    RealizationFamily fam(inner.desc, j.value("level_cap", 6));
    return fam.pull_theon(inner);
  }
  if (op == "simulate_orders") {
    EuclideanStructure inner = theon_from_config(j.at("inner"));
    SimulationBundle bundle =
        simulate_orders(inner, j.at("ell").get<int>(), j.value("trials", 2000),
                        j.value("seed", std::uint64_t{17}));
    return interpret_theon(bundle.interp, bundle.coupled);
  }
  throw Error("unrecognized theon configuration");
}

EuclideanStructure theon_from_spec(const std::string& text) {
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw Error("cannot open theon config " + text.substr(1));
    json j;
    in >> j;
    return theon_from_config(j);
  }
  if (!text.empty() && (text[0] == '{' || text[0] == '"'))
    return theon_from_config(json::parse(text));
  return theon_from_config(json(text));
}

// ---------------------------------------------------------------- structures

namespace {

Structure builtin_structure(const std::string& name, const LanguagePtr& lang) {
  auto vsn = [](int n) { return VertexSet::range(n); };
  auto mk = [&](int n) { return Structure::empty(lang, vsn(n)); };
  auto sym_pair = [](Structure& m, int p, int u, int v) {
    m.add_tuple(p, {static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v)});
    m.add_tuple(p, {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(u)});
  };
  if (name == "edge") {
    Structure m = mk(2);
    sym_pair(m, 0, 0, 1);
    m.normalize();
    return m;
  }
  if (name == "nonedge") return mk(2);
  if (name == "triangle") {
    Structure m = mk(3);
    sym_pair(m, 0, 0, 1);
    sym_pair(m, 0, 0, 2);
    sym_pair(m, 0, 1, 2);
    m.normalize();
    return m;
  }
  if (name.rfind("empty:", 0) == 0) return mk(std::stoi(name.substr(6)));
  throw Error("unknown structure name: " + name);
}

}  // namespace

Structure structure_from_spec(const std::string& text, const LanguagePtr& lang) {
  if (!text.empty() && text[0] == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw Error("cannot open structure file " + text.substr(1));
    json j;
    in >> j;
    return structure_from_json(j);
  }
  if (!text.empty() && text[0] == '{') return structure_from_json(json::parse(text));
  return builtin_structure(text, lang);
}

}  // namespace theon
