#pragma once

#include <optional>
#include <vector>

#include "qtilt/repmod.hpp"

namespace qtilt {

// Kernel of the projective cover; zero exactly when M is projective.
Representation syzygy(const Representation& M);

enum class PdimKind { Finite, InfiniteCertified, Unknown };

// Projective dimension verdict. Finite carries the dimension. The infinite
// verdict records a repetition of nonzero syzygies at stages stage_i < stage_j
// together with the isomorphism that certifies it, which forces the minimal
// resolution to cycle forever. Unknown means the stage bound ran out first.
struct PdimResult {
  PdimKind kind = PdimKind::Unknown;
  int dim = -1;
  int stage_i = -1;
  int stage_j = -1;
  int bound = 0;
  std::optional<Morphism> witness;

  bool finite() const { return kind == PdimKind::Finite; }
};

int default_resolution_bound(const AlgebraPtr& A);

// size_cap > 0 abandons the computation (verdict Unknown) as soon as a
// syzygy's total dimension exceeds it; syzygies can grow geometrically, so
// callers that merely probe should set it.
PdimResult pdim(const Representation& M, int bound, int size_cap = 0);
PdimResult pdim(const Representation& M);

// Minimal projective resolution up to the requested length. maps[0] is the
// cover P_0 -> M and maps[k] the differential P_k -> P_{k-1}; gens[k] lists
// the vertices of the summands of P_k in cover order.
struct ResolutionReport {
  std::vector<std::vector<int>> gens;
  std::vector<Representation> projectives;
  std::vector<Morphism> maps;
  bool minimal = true;
  bool terminated = false;
};
ResolutionReport resolution(const Representation& M, int length);

int ext_dim(const Representation& M, const Representation& N, int i);

enum class Side { Left, Right };

// Whether every simple on the stated side embeds into the socle of the
// regular module on that side.
bool bass_socle_test(const AlgebraPtr& A, Side side);

enum class CfEvidenceKind { BassZero, FiniteGlobalDim, Supplied, Unverified };

struct CfEvidence {
  CfEvidenceKind kind = CfEvidenceKind::Unverified;
  std::optional<int> gldim;
};

// Hypothesis report for a corner choice: every simple off the corner and the
// restriction of the off-corner projectives must have finite projective
// dimension, and the corner needs evidence that its finite-dimension modules
// admit the approximations the reduction downstream relies on.
struct SettingReport {
  std::vector<int> e;
  std::vector<int> outside;
  std::vector<PdimResult> simple_pdim;  // one per outside vertex
  Representation corner_rest;           // off-corner projectives over the corner
  PdimResult corner_rest_pdim;
  CfEvidence evidence;
  bool pdim_conditions = false;
  bool with_evidence = false;
};
// bound caps resolutions over A; computations over the corner use the
// corner's own default bound when that is smaller.
SettingReport setting_check(const AlgebraPtr& A, const std::vector<int>& e,
                            int bound, bool cf_supplied = false);

enum class ModuleScope { Projectives, Injectives };

// Loewy length of each indecomposable projective or injective, per vertex.
std::vector<int> loewy_profile(const AlgebraPtr& A, ModuleScope scope, Side side);

}  // namespace qtilt
