#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qtilt/error.hpp"
#include "qtilt/field.hpp"
#include "qtilt/matrix.hpp"

namespace qtilt {

struct ParseError : InputError {
  using InputError::InputError;
};

struct AlgebraError : InputError {
  using InputError::InputError;
};

struct Arrow {
  std::string name;
  int from = -1;
  int to = -1;
};

struct Quiver {
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  int vertex_index(const std::string& name) const;  // -1 when absent
  int arrow_index(const std::string& name) const;
};

// Sequence of arrow indices in traversal order: entry 0 acts first.
using Mono = std::vector<int>;

// Length-lexicographic order with arrows compared by declaration index.
// Used as the term order everywhere; the leading term is the largest.
struct MonoLess {
  bool operator()(const Mono& a, const Mono& b) const;
};

// A basis path: trivial when `arrows` is empty, based at `vertex`.
struct Word {
  int vertex;
  Mono arrows;
};

struct RelTerm {
  Scalar coeff;
  Mono word;
};

struct Relation {
  std::vector<RelTerm> terms;
};

struct Presentation {
  Field field;
  Quiver quiver;
  std::vector<Relation> relations;  // words stored in traversal order
  int nilpotency_bound = 1;
};

using Poly = std::map<Mono, Scalar, MonoLess>;

// Sparse combination of algebra basis elements, sorted by index.
using LinComb = std::vector<std::pair<int, Scalar>>;

// A presentation together with its completed rewriting system and the
// normal-form path basis. Construction verifies J^{L+1} = 0.
class Algebra {
 public:
  static Algebra complete(Presentation pres);

  const Presentation& presentation() const { return pres_; }
  const Quiver& quiver() const { return pres_.quiver; }
  Field field() const { return pres_.field; }
  int num_vertices() const { return static_cast<int>(pres_.quiver.vertices.size()); }
  int dim() const { return static_cast<int>(basis_.size()); }
  int nilpotency_bound() const { return pres_.nilpotency_bound; }

  // Basis sorted by (length, word, base vertex); trivial paths come first,
  // so unit(v) == v.
  const std::vector<Word>& basis() const { return basis_; }
  int unit(int v) const { return v; }
  int word_source(int b) const { return basis_[b].vertex; }
  int word_target(int b) const;
  int word_length(int b) const { return static_cast<int>(basis_[b].arrows.size()); }
  std::string word_name(int b) const;
  int max_basis_length() const { return max_len_; }

  int arrow_source(int a) const { return pres_.quiver.arrows[a].from; }
  int arrow_target(int a) const { return pres_.quiver.arrows[a].to; }
  int mono_target(const Mono& w, int source) const;

  const std::vector<int>& basis_from(int source) const { return from_[source]; }
  const std::vector<int>& basis_pair(int target, int source) const {
    return pair_[target][source];
  }

  int basis_index(const Word& w) const;  // -1 when not a normal word

  // Normal form of an arbitrary composable word based at source_vertex.
  LinComb reduce_word(int source_vertex, const Mono& w) const;
  // Product "i after j": defined when target(j) = source(i), else zero.
  LinComb mult(int i, int j) const;
  LinComb mult(const LinComb& x, const LinComb& y) const;

  const std::vector<Poly>& groebner() const { return gb_; }

 private:
  Algebra() = default;

  Presentation pres_;
  std::vector<Poly> gb_;
  std::vector<Word> basis_;
  std::map<Mono, int, MonoLess> nontrivial_index_;
  std::vector<std::vector<int>> from_;
  std::vector<std::vector<std::vector<int>>> pair_;
  int max_len_ = 0;
  mutable std::map<std::pair<int, int>, LinComb> mult_cache_;
};

LinComb lincomb_add(Field F, const LinComb& a, const LinComb& b);
LinComb lincomb_scale(Field F, const Scalar& c, const LinComb& a);

Presentation opposite_presentation(const Presentation& p);

// Vertices from which some directed path reaches an oriented cycle.
std::vector<int> precyclic_vertices(const Quiver& q);

// Disjoint union of two presented algebras plus connecting arrows, with the
// crossing-path relations that make the first factor a corner. Alpha arrows
// run from the second quiver into the first, beta arrows the other way;
// their endpoints are vertex indices into the respective inputs. Requires
// target(alpha) != source(beta) for every pair.
Presentation merge_presentations(const Algebra& part_e, const Algebra& part_rest,
                                 const std::vector<Arrow>& alphas,
                                 const std::vector<Arrow>& betas);

// An associative algebra handed to the presentation extractor as raw linear
// data: elements are coordinate vectors, mult(a, b) is the product "a after
// b", units are orthogonal primitive idempotents summing to the identity,
// and the radical columns span J.
struct AbstractAlgebra {
  Field F;
  int dim = 0;
  std::vector<std::string> vertex_names;
  std::vector<std::vector<Scalar>> units;
  Matrix radical;
  std::function<std::vector<Scalar>(const std::vector<Scalar>&, const std::vector<Scalar>&)> mult;
  // Optional arrow candidates per (target, source) block, tried in order;
  // when absent an echelon basis of the block is used with generated names.
  std::function<std::vector<std::pair<std::string, std::vector<Scalar>>>(int, int)>
      block_candidates;
};

struct Presented {
  Algebra algebra;
  std::vector<std::vector<Scalar>> arrow_coords;
  std::vector<std::vector<Scalar>> basis_coords;
};

// Extracts a quiver-with-relations presentation and verifies the result has
// the same dimension as the input data.
Presented present_from_algebra(const AbstractAlgebra& B);

struct CornerResult {
  Algebra algebra;
  std::vector<int> parent_vertex;      // corner vertex -> parent vertex
  std::vector<LinComb> arrow_value;    // corner arrow -> element of the parent
  std::vector<LinComb> basis_value;    // corner basis -> element of the parent
};

CornerResult corner(const Algebra& A, const std::vector<int>& e);

}  // namespace qtilt
