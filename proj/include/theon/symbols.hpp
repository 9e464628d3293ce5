#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "theon/common.hpp"
#include "theon/space.hpp"

namespace theon {

// ---------------------------------------------------------------------------

struct Predicate {
  std::string name;
  int arity = 1;
  // Symmetric predicates hold on all orderings of a set or none; enumeration
  // and distribution tables range over k-sets for them (graphs, hypergraphs).
  bool symmetric = false;
};

class Language {
 public:
  static std::shared_ptr<const Language> of(std::vector<Predicate> preds);

  const std::vector<Predicate>& predicates() const { return preds_; }
  int size() const { return static_cast<int>(preds_.size()); }
  int index_of(const std::string& name) const;  // -1 if absent
  const Predicate& at(int i) const { return preds_[i]; }

  bool same_shape(const Language& other) const;  // arities and flags match

 private:
  explicit Language(std::vector<Predicate> p) : preds_(std::move(p)) {}
  std::vector<Predicate> preds_;
};

using LanguagePtr = std::shared_ptr<const Language>;

LanguagePtr graph_language();        // E/2, symmetric
LanguagePtr orientation_language(int k);  // P/k
LanguagePtr hypergraph3_language();  // H/3, symmetric
LanguagePtr disjoint_union(const LanguagePtr& a, const LanguagePtr& b);

// ---------------------------------------------------------------------------

// Canonical relational structure: relations hold on injective tuples only.
// Tuples are stored as sorted lists of vertex indices into the vertex set.
struct Structure {
  LanguagePtr lang;
  VertexSetPtr vertices;
  // per predicate, sorted set of injective index tuples
  std::vector<std::vector<std::vector<std::uint8_t>>> rels;

  static Structure empty(LanguagePtr lang, VertexSetPtr vs);

  void add_tuple(int pred, std::vector<std::uint8_t> tuple);
  bool holds(int pred, const std::vector<std::uint8_t>& tuple) const;
  void normalize();  // sort + dedupe tuples
  std::size_t tuple_count() const;

  bool operator==(const Structure& o) const;
  bool operator<(const Structure& o) const;
};

std::string structure_id(const Structure& m);

Structure pullback_structure(const Injection& alpha, const Structure& m);
Structure reduct(const Structure& m, const LanguagePtr& sub);
Structure disjoint_union_structure(const Structure& a, const Structure& b);

std::vector<Structure> enumerate_structures(const LanguagePtr& lang,
                                            const VertexSetPtr& vs);

std::int64_t automorphism_count(const Structure& k);
bool isomorphic(const Structure& a, const Structure& b);

// Exactly one oriented tuple per k-set of the single k-ary predicate.
bool is_k_orientation(const Structure& m);

// ---------------------------------------------------------------------------

// Quantifier-free formula over a language; variables are 1-based indices.
struct Formula {
  enum class Kind { True, False, Pred, Eq, Not, And, Or };

  Kind kind = Kind::True;
  std::string pred;            // Kind::Pred
  std::vector<int> vars;       // Kind::Pred
  int lhs = 0, rhs = 0;        // Kind::Eq
  std::vector<Formula> kids;   // Not / And / Or

  static Formula truth(bool b);
  static Formula atom(std::string pred, std::vector<int> vars);
  static Formula eq(int i, int j);
  static Formula negate(Formula f);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);

  int max_var() const;
  void validate(const Language& lang, int n_vars) const;
  Formula nnf(bool negated = false) const;  // negation normal form
};

bool eval_formula(const Formula& f, const Structure& m,
                  const std::vector<std::uint8_t>& assignment);

// ---------------------------------------------------------------------------

struct Interpretation {
  LanguagePtr source;
  LanguagePtr target;
  std::vector<Formula> defs;  // per source predicate, n_vars = arity

  static Interpretation of(LanguagePtr source, LanguagePtr target,
                           std::vector<Formula> defs);
  static Interpretation reduct_map(LanguagePtr sub, LanguagePtr full);
};

Structure interpret_structure(const Interpretation& i, const Structure& m);

}  // namespace theon
