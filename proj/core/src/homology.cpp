#include "qtilt/homology.hpp"

#include <algorithm>

#include "qtilt/ttf.hpp"

namespace qtilt {

Representation syzygy(const Representation& M) {
  Morphism cover = projective_cover(M);
  return submodule(cover.src, kernel_spaces(cover)).sub;
}

int default_resolution_bound(const AlgebraPtr& A) { return 2 * A->dim() + 2; }

PdimResult pdim(const Representation& M, int bound, int size_cap) {
  if (bound < 1) throw InputError("resolution bound must be positive");
  PdimResult out;
  out.bound = bound;

  std::vector<Representation> omegas{M};
  for (int d = 0; d <= bound; ++d) {
    Representation next = syzygy(omegas.back());
    if (next.is_zero()) {
      out.kind = PdimKind::Finite;
      out.dim = d;
      return out;
    }
    if (size_cap > 0) {
      int tot = 0;
      for (int dv : next.dims) tot += dv;
      if (tot > size_cap) break;  // syzygies outgrew the cap, give up
    }
    if (d == bound) break;  // the bound caps how many syzygies we may take
    for (std::size_t k = 0; k < omegas.size(); ++k) {
      if (omegas[k].dims != next.dims) continue;
      IsoResult iso = is_isomorphic(omegas[k], next);
      if (!iso.isomorphic) continue;
      out.kind = PdimKind::InfiniteCertified;
      out.stage_i = static_cast<int>(k);
      out.stage_j = static_cast<int>(omegas.size());
      out.witness = std::move(iso.witness);
      return out;
    }
    omegas.push_back(std::move(next));
  }
  return out;
}

PdimResult pdim(const Representation& M) {
  return pdim(M, default_resolution_bound(M.A));
}

ResolutionReport resolution(const Representation& M, int length) {
  if (length < 0) throw InputError("resolution length must be nonnegative");
  ResolutionReport out;
  Morphism aug = projective_cover(M);
  out.gens.push_back(cover_vertices(M));
  out.projectives.push_back(aug.src);
  SubmoduleResult ker = submodule(aug.src, kernel_spaces(aug));
  out.maps.push_back(std::move(aug));

  for (int k = 1; k <= length; ++k) {
    if (ker.sub.is_zero()) {
      out.terminated = true;
      return out;
    }
    Morphism cover = projective_cover(ker.sub);
    Morphism d = compose(ker.incl, cover);
    std::vector<Matrix> im = image_spaces(d);
    std::vector<Matrix> rad = radical_spaces(out.projectives.back());
    for (int v = 0; v < M.A->num_vertices(); ++v)
      internal_check(columns_contained(im[v], rad[v]),
                     "resolution differential escapes the radical");
    out.gens.push_back(cover_vertices(ker.sub));
    out.projectives.push_back(cover.src);
    out.maps.push_back(std::move(d));
    ker = submodule(cover.src, kernel_spaces(cover));
  }
  out.terminated = ker.sub.is_zero();
  return out;
}

namespace {

// Matrix of composition with the k-th differential on generator values:
// a map out of P_{k-1} is a choice of element of N at each generator, and
// composing with d_k multiplies those elements by the entries of d_k.
Matrix hom_step(const ResolutionReport& res, const Representation& N, int k) {
  const AlgebraPtr& A = N.A;
  Field F = A->field();
  const std::vector<int>& src = res.gens[k];
  const std::vector<int>& dst = res.gens[k - 1];
  std::vector<std::vector<LinComb>> z =
      projective_map_elements(src, dst, res.maps[k]);

  int rows = 0, cols = 0;
  for (int w : src) rows += N.dims[w];
  for (int v : dst) cols += N.dims[v];
  Matrix D(F, rows, cols);
  int roff = 0;
  for (std::size_t b = 0; b < src.size(); ++b) {
    int coff = 0;
    for (std::size_t a = 0; a < dst.size(); ++a) {
      Matrix block(F, N.dims[src[b]], N.dims[dst[a]]);
      for (const auto& [widx, cf] : z[b][a])
        block = add(block, scale(cf, word_action(N, dst[a], A->basis()[widx].arrows)));
      for (int r = 0; r < block.rows(); ++r)
        for (int c = 0; c < block.cols(); ++c) D.at(roff + r, coff + c) = block.at(r, c);
      coff += N.dims[dst[a]];
    }
    roff += N.dims[src[b]];
  }
  return D;
}

}  // namespace

int ext_dim(const Representation& M, const Representation& N, int i) {
  internal_check(M.A.get() == N.A.get(), "ext arguments live over different algebras");
  if (i < 0) throw InputError("ext degree must be nonnegative");
  ResolutionReport res = resolution(M, i + 1);
  if (static_cast<int>(res.projectives.size()) <= i) return 0;

  int hom_i = 0;
  for (int w : res.gens[i]) hom_i += N.dims[w];

  int ker_next = hom_i;
  if (i + 1 < static_cast<int>(res.projectives.size())) {
    Matrix D = hom_step(res, N, i + 1);
    ker_next = D.cols() - rank(D);
  }
  int rank_prev = 0;
  if (i >= 1) rank_prev = rank(hom_step(res, N, i));
  return ker_next - rank_prev;
}

bool bass_socle_test(const AlgebraPtr& A, Side side) {
  AlgebraPtr B = side == Side::Left ? A : opposite_of(A);
  std::vector<Representation> parts;
  for (int v = 0; v < B->num_vertices(); ++v) parts.push_back(projective_module(B, v));
  std::vector<int> mult = socle_multiplicities(direct_sum(parts));
  return std::all_of(mult.begin(), mult.end(), [](int m) { return m >= 1; });
}

SettingReport setting_check(const AlgebraPtr& A, const std::vector<int>& e,
                            int bound, bool cf_supplied) {
  SettingReport out;
  Idempotent idem = make_idempotent(A, e);
  out.e = idem.vertices;
  for (int v = 0; v < A->num_vertices(); ++v)
    if (!idem.in_e[v]) out.outside.push_back(v);

  bool ok = true;
  for (int v : out.outside) {
    out.simple_pdim.push_back(pdim(simple_module(A, v), bound));
    ok = ok && out.simple_pdim.back().finite();
  }

  // resolutions over the corner are bounded by the corner's own default; the
  // caller's bound tracks the size of A and would let an uncertified infinite
  // dimension over a small corner eat arbitrary amounts of work
  int bound_c = std::min(bound, default_resolution_bound(idem.corner));

  std::vector<Representation> rest;
  for (int v : out.outside) rest.push_back(restrict(projective_module(A, v), idem));
  out.corner_rest = rest.empty() ? zero_module(idem.corner) : direct_sum(rest);
  out.corner_rest_pdim = pdim(out.corner_rest, bound_c);
  ok = ok && out.corner_rest_pdim.finite();
  out.pdim_conditions = ok;

  // approximation evidence for the corner, strongest source first
  if (bass_socle_test(idem.corner, Side::Right)) {
    out.evidence.kind = CfEvidenceKind::BassZero;
  } else {
    // global dimension probe with a growth guard: syzygies can expand
    // geometrically over the corner, and this path is opportunistic, so it
    // gives up once they outgrow the algebra instead of resolving further
    int cap = 8 * idem.corner->dim() + 40;
    bool all_finite = true;
    int gl = 0;
    for (int v = 0; v < idem.corner->num_vertices() && all_finite; ++v) {
      PdimResult r = pdim(simple_module(idem.corner, v), bound_c, cap);
      all_finite = r.finite();
      if (all_finite) gl = std::max(gl, r.dim);
    }
    if (all_finite) {
      out.evidence.kind = CfEvidenceKind::FiniteGlobalDim;
      out.evidence.gldim = gl;
    } else if (cf_supplied) {
      out.evidence.kind = CfEvidenceKind::Supplied;
    }
  }
  out.with_evidence = ok && out.evidence.kind != CfEvidenceKind::Unverified;
  return out;
}

std::vector<int> loewy_profile(const AlgebraPtr& A, ModuleScope scope, Side side) {
  AlgebraPtr B = side == Side::Left ? A : opposite_of(A);
  std::vector<int> out;
  for (int v = 0; v < B->num_vertices(); ++v) {
    Representation M = scope == ModuleScope::Projectives ? projective_module(B, v)
                                                         : injective_module(B, v);
    out.push_back(layers(M).loewy_length);
  }
  return out;
}

}  // namespace qtilt
