#include "theon/symbols.hpp"

#include <algorithm>
#include <set>

namespace theon {

// ------------------------------------------------------------------ languages

std::shared_ptr<const Language> Language::of(std::vector<Predicate> preds) {
  std::set<std::string> names;
  for (const auto& p : preds) {
    if (p.name.empty()) throw Error("predicate names must be non-empty");
    if (p.arity < 1) throw Error("predicate arity must be positive");
    if (!names.insert(p.name).second)
      throw Error("duplicate predicate name: " + p.name);
  }
  return std::shared_ptr<const Language>(new Language(std::move(preds)));
}

int Language::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < preds_.size(); ++i)
    if (preds_[i].name == name) return static_cast<int>(i);
  return -1;
}

bool Language::same_shape(const Language& other) const {
  if (preds_.size() != other.preds_.size()) return false;
  for (std::size_t i = 0; i < preds_.size(); ++i)
    if (preds_[i].arity != other.preds_[i].arity ||
        preds_[i].symmetric != other.preds_[i].symmetric)
      return false;
  return true;
}

LanguagePtr graph_language() {
  static LanguagePtr l = Language::of({{"E", 2, true}});
  return l;
}

LanguagePtr orientation_language(int k) {
  return Language::of({{"P", k, false}});
}

LanguagePtr hypergraph3_language() {
  static LanguagePtr l = Language::of({{"H", 3, true}});
  return l;
}

LanguagePtr disjoint_union(const LanguagePtr& a, const LanguagePtr& b) {
  std::vector<Predicate> preds = a->predicates();
  for (Predicate p : b->predicates()) {
    if (a->index_of(p.name) >= 0) p.name += "_2";  // rename on collision
    preds.push_back(std::move(p));
  }
  return Language::of(std::move(preds));
}

// ----------------------------------------------------------------- structures

Structure Structure::empty(LanguagePtr lang, VertexSetPtr vs) {
  Structure m;
  m.lang = std::move(lang);
  m.vertices = std::move(vs);
  m.rels.resize(m.lang->size());
  return m;
}

void Structure::add_tuple(int pred, std::vector<std::uint8_t> tuple) {
  const Predicate& p = lang->at(pred);
  if (static_cast<int>(tuple.size()) != p.arity)
    throw Error("tuple length does not match arity of " + p.name);
  std::set<std::uint8_t> seen;
  for (auto v : tuple) {
    if (v >= vertices->size()) throw Error("tuple entry is not a vertex");
    if (!seen.insert(v).second)
      throw Error("relations hold on injective tuples only");
  }
  rels[pred].push_back(std::move(tuple));
}

bool Structure::holds(int pred, const std::vector<std::uint8_t>& tuple) const {
  const auto& r = rels[pred];
  return std::binary_search(r.begin(), r.end(), tuple);
}

void Structure::normalize() {
  for (auto& r : rels) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }
}

std::size_t Structure::tuple_count() const {
  std::size_t n = 0;
  for (const auto& r : rels) n += r.size();
  return n;
}

bool Structure::operator==(const Structure& o) const {
  return lang->same_shape(*o.lang) &&
         vertices->labels() == o.vertices->labels() && rels == o.rels;
}

bool Structure::operator<(const Structure& o) const {
  if (vertices->labels() != o.vertices->labels())
    return vertices->labels() < o.vertices->labels();
  return rels < o.rels;
}

std::string structure_id(const Structure& m) {
  // predicate name + characteristic bits over the enumerated slots
  std::string out;
  const int n = m.vertices->size();
  for (int p = 0; p < m.lang->size(); ++p) {
    if (p) out += '|';
    out += m.lang->at(p).name;
    out += ':';
    const Predicate& pr = m.lang->at(p);
    if (pr.symmetric) {
      for (Subset s : r_sets(n)) {
        if (subset_size(s) != pr.arity) continue;
        std::vector<int> e = subset_elements(s);
        std::vector<std::uint8_t> t(e.begin(), e.end());
        out += m.holds(p, t) ? '1' : '0';
      }
    } else {
      std::vector<std::vector<std::uint8_t>> tuples;
      std::vector<std::uint8_t> idx(n);
      for (int i = 0; i < n; ++i) idx[i] = static_cast<std::uint8_t>(i);
      // all injective arity-tuples in lexicographic order
      std::vector<std::uint8_t> t(pr.arity);
      auto rec = [&](auto&& self, int pos, std::uint32_t used) -> void {
        if (pos == pr.arity) {
          out += m.holds(p, t) ? '1' : '0';
          return;
        }
        for (int v = 0; v < n; ++v) {
          if (used & (1u << v)) continue;
          t[pos] = static_cast<std::uint8_t>(v);
          self(self, pos + 1, used | (1u << v));
        }
      };
      rec(rec, 0, 0);
    }
  }
  return out;
}

Structure pullback_structure(const Injection& alpha, const Structure& m) {
  if (alpha.cod->labels() != m.vertices->labels())
    throw Error("pullback_structure: codomain does not match the structure");
  Structure out = Structure::empty(m.lang, alpha.dom);
  const int n = alpha.dom->size();
  for (int p = 0; p < m.lang->size(); ++p) {
    const int k = m.lang->at(p).arity;
    std::vector<std::uint8_t> beta(k);
    auto rec = [&](auto&& self, int pos, std::uint32_t used) -> void {
      if (pos == k) {
        std::vector<std::uint8_t> mapped(k);
        for (int i = 0; i < k; ++i) mapped[i] = alpha.map[beta[i]];
        if (m.holds(p, mapped)) out.rels[p].push_back(beta);
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (used & (1u << v)) continue;
        beta[pos] = static_cast<std::uint8_t>(v);
        self(self, pos + 1, used | (1u << v));
      }
    };
    rec(rec, 0, 0);
  }
  out.normalize();
  return out;
}

Structure reduct(const Structure& m, const LanguagePtr& sub) {
  Structure out = Structure::empty(sub, m.vertices);
  for (int p = 0; p < sub->size(); ++p) {
    int q = m.lang->index_of(sub->at(p).name);
    if (q < 0 || m.lang->at(q).arity != sub->at(p).arity)
      throw Error("reduct: not a sublanguage");
    out.rels[p] = m.rels[q];
  }
  return out;
}

Structure disjoint_union_structure(const Structure& a, const Structure& b) {
  if (a.vertices->labels() != b.vertices->labels())
    throw Error("disjoint union needs a shared vertex set");
  LanguagePtr lang = disjoint_union(a.lang, b.lang);
  Structure out = Structure::empty(lang, a.vertices);
  for (int p = 0; p < a.lang->size(); ++p) out.rels[p] = a.rels[p];
  for (int p = 0; p < b.lang->size(); ++p)
    out.rels[a.lang->size() + p] = b.rels[p];
  return out;
}

namespace {

// Enumeration slots: one per k-set for symmetric predicates, one per
// injective tuple otherwise. A chosen symmetric slot adds all orderings.
struct Slot {
  int pred;
  std::vector<std::vector<std::uint8_t>> tuples;
};

std::vector<Slot> enumeration_slots(const Language& lang, int n) {
  std::vector<Slot> slots;
  for (int p = 0; p < lang.size(); ++p) {
    const Predicate& pr = lang.at(p);
    if (pr.arity > n) continue;
    if (pr.symmetric) {
      for (Subset s : r_sets(n)) {
        if (subset_size(s) != pr.arity) continue;
        std::vector<int> e = subset_elements(s);
        Slot slot{p, {}};
        for (const Perm& perm : all_perms(pr.arity)) {
          std::vector<std::uint8_t> t(pr.arity);
          for (int i = 0; i < pr.arity; ++i) t[i] = static_cast<std::uint8_t>(e[perm[i]]);
          slot.tuples.push_back(std::move(t));
        }
        slots.push_back(std::move(slot));
      }
    } else {
      std::vector<std::uint8_t> t(pr.arity);
      auto rec = [&](auto&& self, int pos, std::uint32_t used) -> void {
        if (pos == pr.arity) {
          slots.push_back(Slot{p, {t}});
          return;
        }
        for (int v = 0; v < n; ++v) {
          if (used & (1u << v)) continue;
          t[pos] = static_cast<std::uint8_t>(v);
          self(self, pos + 1, used | (1u << v));
        }
      };
      rec(rec, 0, 0);
    }
  }
  return slots;
}

}  // namespace

std::vector<Structure> enumerate_structures(const LanguagePtr& lang,
                                            const VertexSetPtr& vs) {
  const int n = vs->size();
  std::vector<Slot> slots = enumeration_slots(*lang, n);
  if (slots.size() >= 63 ||
      (std::uint64_t{1} << slots.size()) > limits().max_enum_structures)
    throw Error("enumerate_structures: count exceeds the configured cap");
  std::vector<Structure> out;
  out.reserve(std::size_t{1} << slots.size());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots.size()); ++bits) {
    Structure m = Structure::empty(lang, vs);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (bits & (std::uint64_t{1} << i))
        for (const auto& t : slots[i].tuples) m.rels[slots[i].pred].push_back(t);
    m.normalize();
    out.push_back(std::move(m));
  }
  return out;
}

std::int64_t automorphism_count(const Structure& k) {
  const int n = k.vertices->size();
  if (n > limits().max_order_size)
    throw Error("automorphism_count: vertex count exceeds the cap");
  std::int64_t count = 0;
  for (const Perm& p : all_perms(n)) {
    bool ok = true;
    for (int q = 0; q < k.lang->size() && ok; ++q) {
      for (const auto& t : k.rels[q]) {
        std::vector<std::uint8_t> img(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) img[i] = p[t[i]];
        if (!k.holds(q, img)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) ++count;  // bijections preserving relations forward preserve them both ways
  }
  return count;
}

bool isomorphic(const Structure& a, const Structure& b) {
  if (!a.lang->same_shape(*b.lang)) return false;
  if (a.vertices->size() != b.vertices->size()) return false;
  if (a.tuple_count() != b.tuple_count()) return false;
  for (const Perm& p : all_perms(a.vertices->size())) {
    bool ok = true;
    for (int q = 0; q < a.lang->size() && ok; ++q) {
      if (a.rels[q].size() != b.rels[q].size()) return false;
      for (const auto& t : a.rels[q]) {
        std::vector<std::uint8_t> img(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) img[i] = p[t[i]];
        if (!b.holds(q, img)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return true;
  }
  return false;
}

bool is_k_orientation(const Structure& m) {
  if (m.lang->size() != 1) return false;
  const int k = m.lang->at(0).arity;
  const int n = m.vertices->size();
  if (k > n) return m.rels[0].empty();
  for (Subset s : r_sets(n)) {
    if (subset_size(s) != k) continue;
    std::vector<int> e = subset_elements(s);
    int hits = 0;
    for (const Perm& p : all_perms(k)) {
      std::vector<std::uint8_t> t(k);
      for (int i = 0; i < k; ++i) t[i] = static_cast<std::uint8_t>(e[p[i]]);
      if (m.holds(0, t)) ++hits;
    }
    if (hits != 1) return false;
  }
  return true;
}

// ------------------------------------------------------------------- formulas

Formula Formula::truth(bool b) {
  Formula f;
  f.kind = b ? Kind::True : Kind::False;
  return f;
}

Formula Formula::atom(std::string pred, std::vector<int> vars) {
  Formula f;
  f.kind = Kind::Pred;
  f.pred = std::move(pred);
  f.vars = std::move(vars);
  return f;
}

Formula Formula::eq(int i, int j) {
  Formula f;
  f.kind = Kind::Eq;
  f.lhs = i;
  f.rhs = j;
  return f;
}

Formula Formula::negate(Formula g) {
  Formula f;
  f.kind = Kind::Not;
  f.kids.push_back(std::move(g));
  return f;
}

Formula Formula::conj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::And;
  f.kids = std::move(fs);
  return f;
}

Formula Formula::disj(std::vector<Formula> fs) {
  Formula f;
  f.kind = Kind::Or;
  f.kids = std::move(fs);
  return f;
}

int Formula::max_var() const {
  int m = 0;
  switch (kind) {
    case Kind::Pred:
      for (int v : vars) m = std::max(m, v);
      break;
    case Kind::Eq:
      m = std::max(lhs, rhs);
      break;
    default:
      for (const auto& k : kids) m = std::max(m, k.max_var());
  }
  return m;
}

void Formula::validate(const Language& lang, int n_vars) const {
  switch (kind) {
    case Kind::Pred: {
      int p = lang.index_of(pred);
      if (p < 0) throw Error("formula uses unknown predicate " + pred);
      if (static_cast<int>(vars.size()) != lang.at(p).arity)
        throw Error("atom length does not match arity of " + pred);
      for (int v : vars)
        if (v < 1 || v > n_vars) throw Error("variable index out of range");
      break;
    }
    case Kind::Eq:
      if (lhs < 1 || lhs > n_vars || rhs < 1 || rhs > n_vars)
        throw Error("variable index out of range");
      break;
    default:
      for (const auto& k : kids) k.validate(lang, n_vars);
  }
}

Formula Formula::nnf(bool negated) const {
  switch (kind) {
    case Kind::True:
      return truth(!negated);
    case Kind::False:
      return truth(negated);
    case Kind::Pred:
    case Kind::Eq:
      return negated ? negate(*this) : *this;
    case Kind::Not:
      return kids[0].nnf(!negated);
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> ks;
      ks.reserve(kids.size());
      for (const auto& k : kids) ks.push_back(k.nnf(negated));
      bool is_and = (kind == Kind::And) != negated;
      return is_and ? conj(std::move(ks)) : disj(std::move(ks));
    }
  }
  return truth(true);
}

bool eval_formula(const Formula& f, const Structure& m,
                  const std::vector<std::uint8_t>& assignment) {
  switch (f.kind) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Pred: {
      int p = m.lang->index_of(f.pred);
      if (p < 0) throw Error("formula predicate missing from structure language");
      std::vector<std::uint8_t> t(f.vars.size());
      std::uint32_t used = 0;
      for (std::size_t i = 0; i < f.vars.size(); ++i) {
        std::uint8_t v = assignment.at(f.vars[i] - 1);
        if (used & (1u << v)) return false;  // canonical: repeated entries never hold
        used |= 1u << v;
        t[i] = v;
      }
      return m.holds(p, t);
    }
    case Formula::Kind::Eq:
      return assignment.at(f.lhs - 1) == assignment.at(f.rhs - 1);
    case Formula::Kind::Not:
      return !eval_formula(f.kids[0], m, assignment);
    case Formula::Kind::And:
      for (const auto& k : f.kids)
        if (!eval_formula(k, m, assignment)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& k : f.kids)
        if (eval_formula(k, m, assignment)) return true;
      return false;
  }
  return false;
}

// ------------------------------------------------------------ interpretations

Interpretation Interpretation::of(LanguagePtr source, LanguagePtr target,
                                  std::vector<Formula> defs) {
  if (static_cast<int>(defs.size()) != source->size())
    throw Error("interpretation needs one formula per source predicate");
  for (int p = 0; p < source->size(); ++p)
    defs[p].validate(*target, source->at(p).arity);
  Interpretation i;
  i.source = std::move(source);
  i.target = std::move(target);
  i.defs = std::move(defs);
  return i;
}

Interpretation Interpretation::reduct_map(LanguagePtr sub, LanguagePtr full) {
  std::vector<Formula> defs;
  for (const auto& p : sub->predicates()) {
    if (full->index_of(p.name) < 0) throw Error("reduct: not a sublanguage");
    std::vector<int> vars(p.arity);
    for (int i = 0; i < p.arity; ++i) vars[i] = i + 1;
    defs.push_back(Formula::atom(p.name, vars));
  }
  return of(std::move(sub), std::move(full), std::move(defs));
}

Structure interpret_structure(const Interpretation& in, const Structure& m) {
  for (const auto& p : in.target->predicates()) {
    int q = m.lang->index_of(p.name);
    if (q < 0 || m.lang->at(q).arity != p.arity)
      throw Error("interpret_structure: structure is not in the target language");
  }
  Structure out = Structure::empty(in.source, m.vertices);
  const int n = m.vertices->size();
  for (int p = 0; p < in.source->size(); ++p) {
    const int k = in.source->at(p).arity;
    std::vector<std::uint8_t> a(k);
    auto rec = [&](auto&& self, int pos, std::uint32_t used) -> void {
      if (pos == k) {
        if (eval_formula(in.defs[p], m, a)) out.rels[p].push_back(a);
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (used & (1u << v)) continue;
        a[pos] = static_cast<std::uint8_t>(v);
        self(self, pos + 1, used | (1u << v));
      }
    };
    rec(rec, 0, 0);
  }
  out.normalize();
  return out;
}

}  // namespace theon
