#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qtilt/presentation.hpp"

namespace qtilt {

using AlgebraPtr = std::shared_ptr<const Algebra>;

AlgebraPtr complete_algebra(Presentation pres);
// Completed opposite algebra, cached per input instance.
AlgebraPtr opposite_of(const AlgebraPtr& A);

// A finite-dimensional left module: one space per vertex, one matrix per
// arrow mapping the source space into the target space.
struct Representation {
  AlgebraPtr A;
  std::vector<int> dims;
  std::vector<Matrix> maps;  // per arrow, (target dim) x (source dim)

  int total_dim() const;
  bool is_zero() const { return total_dim() == 0; }
};

// Validates shapes and that every relation acts as zero.
Representation make_representation(AlgebraPtr A, std::vector<int> dims,
                                   std::vector<Matrix> maps);

Representation zero_module(AlgebraPtr A);
Representation simple_module(AlgebraPtr A, int v);
Representation projective_module(AlgebraPtr A, int v);
Representation injective_module(AlgebraPtr A, int v);

// Matrix of the action of a basis path on M, source space to target space.
Matrix word_action(const Representation& M, int source, const Mono& w);

struct Morphism {
  Representation src;
  Representation dst;
  std::vector<Matrix> f;  // per vertex, dst.dims[v] x src.dims[v]
};

bool morphism_ok(const Morphism& m);
Morphism identity_morphism(const Representation& M);
Morphism zero_morphism(Representation src, Representation dst);
Morphism compose(const Morphism& g, const Morphism& f);  // g after f
Morphism add(const Morphism& a, const Morphism& b);
Morphism scale(const Scalar& c, const Morphism& a);
bool is_invertible_morphism(const Morphism& m);
Morphism inverse_morphism(const Morphism& m);

std::vector<Morphism> hom_basis(const Representation& M, const Representation& N);
int hom_dim(const Representation& M, const Representation& N);

// Per-vertex column spans; always echelonized on return.
std::vector<Matrix> image_spaces(const Morphism& m);
std::vector<Matrix> kernel_spaces(const Morphism& m);
std::vector<Matrix> radical_spaces(const Representation& M);
std::vector<Matrix> socle_spaces(const Representation& M);

struct SubmoduleResult {
  Representation sub;
  Morphism incl;
};
// spaces must be closed under all arrow actions
SubmoduleResult submodule(const Representation& M, const std::vector<Matrix>& spaces);

struct QuotientResult {
  Representation quot;
  Morphism proj;
};
QuotientResult quotient(const Representation& M, const std::vector<Matrix>& spaces);

std::vector<int> top_multiplicities(const Representation& M);
std::vector<int> socle_multiplicities(const Representation& M);

struct Layers {
  std::vector<std::vector<int>> radical_layers;  // dim vectors, top first
  std::vector<std::vector<int>> socle_layers;    // dim vectors, socle first
  int loewy_length = 0;
};
Layers layers(const Representation& M);

Morphism projective_cover(const Representation& M);    // P(M) -> M
Morphism injective_envelope(const Representation& M);  // M -> E(M)

// K-linear dual as a module over the supplied opposite algebra.
Representation dual_module(const Representation& M, const AlgebraPtr& Aop);
Morphism dual_morphism(const Morphism& m, const AlgebraPtr& Aop);

Representation direct_sum(const std::vector<Representation>& parts);
Morphism summand_injection(const std::vector<Representation>& parts, int k);
Morphism summand_projection(const std::vector<Representation>& parts, int k);

struct PullbackResult {
  Representation P;
  Morphism to_first;   // P -> src(f)
  Morphism to_second;  // P -> src(g)
};
// of f: X -> Z and g: Y -> Z
PullbackResult pullback(const Morphism& f, const Morphism& g);

// h with h∘surj = kappa, for surjective surj whose kernel dies under kappa.
Morphism factor_through(const Morphism& surj, const Morphism& kappa);
// h with inj∘h = kappa, for injective inj whose image contains im(kappa).
Morphism lift_through(const Morphism& inj, const Morphism& kappa);
// h on dst(incl) with h∘incl = g, when any extension exists.
std::optional<Morphism> extend_along(const Morphism& incl, const Morphism& g);

// Vertices of the summands of projective_cover(M), in cover order.
std::vector<int> cover_vertices(const Representation& M);

// Morphism ⊕_g P(gen_vertex[g]) -> target sending each generator to its image.
Morphism projective_map_from_gens(const std::vector<int>& gen_vertex,
                                  const Representation& target,
                                  const std::vector<std::vector<Scalar>>& gen_image);

// A morphism between direct sums of projectives, written as algebra elements:
// block (b, a) is the element whose right multiplication P(src_vertex[b]) ->
// P(dst_vertex[a]) is that component of d.
std::vector<std::vector<LinComb>> projective_map_elements(
    const std::vector<int>& src_vertex, const std::vector<int>& dst_vertex,
    const Morphism& d);
Morphism projective_map_from_elements(const AlgebraPtr& A,
                                      const std::vector<int>& src_vertex,
                                      const std::vector<int>& dst_vertex,
                                      const std::vector<std::vector<LinComb>>& z);

// Basis of the Jacobson radical of End(M), given a basis of End(M).
std::vector<Morphism> end_radical(const Representation& M,
                                  const std::vector<Morphism>& endos);

struct Decomposition {
  std::vector<Representation> summands;  // pairwise non-isomorphic
  std::vector<int> multiplicities;
  // inclusion of each copy into M, indexed [summand][copy]
  std::vector<std::vector<Morphism>> embeddings;
};
Decomposition decompose(const Representation& M, std::uint64_t seed = 0);

struct IsoResult {
  bool isomorphic = false;
  std::optional<Morphism> witness;
};
IsoResult is_isomorphic(const Representation& M, const Representation& N,
                        std::uint64_t seed = 0);

}  // namespace qtilt
