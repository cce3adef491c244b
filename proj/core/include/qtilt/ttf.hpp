#pragma once

#include "qtilt/repmod.hpp"

namespace qtilt {

// A vertex-set idempotent together with its corner algebra and the data
// needed to move modules back and forth: each corner arrow and corner basis
// element is recorded as an element of the parent algebra.
struct Idempotent {
  AlgebraPtr parent;
  AlgebraPtr corner;
  std::vector<int> vertices;         // parent vertices in e, ascending
  std::vector<bool> in_e;            // per parent vertex
  std::vector<int> parent_vertex;    // corner vertex -> parent vertex
  std::vector<LinComb> arrow_value;  // corner arrow -> parent element
  std::vector<LinComb> basis_value;  // corner basis -> parent element
};

Idempotent make_idempotent(const AlgebraPtr& A, std::vector<int> vertices);

struct TorsionParts {
  SubmoduleResult delta;  // largest submodule annihilated by e
  SubmoduleResult nabla;  // submodule generated by the e-components
  QuotientResult core;    // nabla / delta(nabla), with its projection
};

TorsionParts torsion_parts(const Representation& M, const Idempotent& e);

Representation restrict(const Representation& M, const Idempotent& e);
Morphism restrict(const Morphism& m, const Idempotent& e);

// Λe ⊗ X realized through a projective presentation of the corner module X;
// keeps the presentation data so morphisms can be induced and the counit
// assembled without recomputing covers.
struct InducedModule {
  Representation module;  // over the parent
  Morphism eta;           // X -> restrict(module), always invertible
  Morphism cover;         // corner projective sum -> X
  std::vector<int> gen_vertex;                 // cover summand vertices
  std::vector<std::vector<Scalar>> gen_image;  // cover generator images in X
  Morphism hat_proj;      // parent projective sum -> module
};

InducedModule induce(const Representation& X, const Idempotent& e);
// Parent morphism induce(g.src) -> induce(g.dst) for given inductions.
Morphism induce(const InducedModule& ix, const InducedModule& iy,
                const Morphism& g, const Idempotent& e);

// induce(restrict(M)) -> M with image ∇(M).
Morphism counit(const InducedModule& ind, const Representation& M,
                const Idempotent& e);
Morphism counit(const Representation& M, const Idempotent& e);

struct GiraudObject {
  Representation M_sigma;
  Morphism unit;  // M -> M_sigma
};

GiraudObject sigma(const Representation& M, const Idempotent& e);

struct TtfClasses {
  bool in_C = false;  // generated by the e-components
  bool in_T = false;  // annihilated by e
  bool in_F = false;  // no nonzero submodule annihilated by e
  bool in_G = false;  // unit of sigma invertible
};

TtfClasses classify(const Representation& M, const Idempotent& e);

// Maximal essential extension of f: M -> Y by a torsion module, for
// torsionfree M and Y: the pullback of f_sigma along the unit of Y.
struct DeltaExtension {
  Representation N;
  Morphism embedding;  // M -> N, essential with torsion cokernel
  Morphism phi;        // N -> Y, restricting to f on M
};

DeltaExtension max_delta_extension(const Morphism& f, const Idempotent& e);

}  // namespace qtilt
