#include "qtilt/ttf.hpp"

#include <algorithm>
#include <utility>

namespace qtilt {

namespace {

bool same_maps(const Morphism& a, const Morphism& b) {
  for (std::size_t v = 0; v < a.f.size(); ++v)
    if (!(a.f[v] == b.f[v])) return false;
  return true;
}

// Largest per-vertex subspaces that vanish over e and are closed under every
// arrow: start full off e and shrink until stable.
std::vector<Matrix> delta_spaces(const Representation& M, const Idempotent& e) {
  Field F = M.A->field();
  int n = M.A->num_vertices();
  std::vector<Matrix> d(n);
  for (int v = 0; v < n; ++v)
    d[v] = e.in_e[v] ? Matrix(F, M.dims[v], 0) : Matrix::identity(F, M.dims[v]);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < M.maps.size(); ++a) {
      int s = M.A->arrow_source(static_cast<int>(a));
      int t = M.A->arrow_target(static_cast<int>(a));
      Matrix meet = intersect_columns(d[s], preimage_columns(M.maps[a], d[t]));
      if (meet.cols() != d[s].cols()) {
        d[s] = std::move(meet);
        changed = true;
      }
    }
  }
  return d;
}

// Span of the e-components under the arrow actions, grown until stable.
std::vector<Matrix> nabla_spaces(const Representation& M, const Idempotent& e) {
  Field F = M.A->field();
  int n = M.A->num_vertices();
  std::vector<Matrix> v(n);
  for (int j = 0; j < n; ++j)
    v[j] = e.in_e[j] ? Matrix::identity(F, M.dims[j]) : Matrix(F, M.dims[j], 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < M.maps.size(); ++a) {
      int s = M.A->arrow_source(static_cast<int>(a));
      int t = M.A->arrow_target(static_cast<int>(a));
      if (v[s].cols() == 0) continue;
      Matrix grown = column_echelon(hstack(v[t], mul(M.maps[a], v[s])));
      if (grown.cols() != v[t].cols()) {
        v[t] = std::move(grown);
        changed = true;
      }
    }
  }
  return v;
}

bool spaces_zero(const std::vector<Matrix>& s) {
  for (const Matrix& m : s)
    if (m.cols() != 0) return false;
  return true;
}

// Index of w inside a sorted basis_pair list.
int pair_position(const std::vector<int>& lst, int w) {
  auto it = std::lower_bound(lst.begin(), lst.end(), w);
  internal_check(it != lst.end() && *it == w, "element outside its block");
  return static_cast<int>(it - lst.begin());
}

std::vector<std::vector<LinComb>> to_parent_elements(
    const std::vector<std::vector<LinComb>>& z, const Idempotent& e) {
  Field F = e.parent->field();
  std::vector<std::vector<LinComb>> zhat(z.size());
  for (std::size_t b = 0; b < z.size(); ++b) {
    zhat[b].resize(z[b].size());
    for (std::size_t a = 0; a < z[b].size(); ++a) {
      LinComb acc;
      for (const auto& [w, c] : z[b][a])
        acc = lincomb_add(F, acc, lincomb_scale(F, c, e.basis_value[w]));
      zhat[b][a] = std::move(acc);
    }
  }
  return zhat;
}

std::vector<int> to_parent_vertices(const std::vector<int>& gv, const Idempotent& e) {
  std::vector<int> out;
  out.reserve(gv.size());
  for (int i : gv) out.push_back(e.parent_vertex[i]);
  return out;
}

}  // namespace

Idempotent make_idempotent(const AlgebraPtr& A, std::vector<int> vertices) {
  internal_check(A != nullptr, "idempotent without algebra");
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  if (vertices.empty()) throw InputError("idempotent needs at least one vertex");
  for (int v : vertices)
    if (v < 0 || v >= A->num_vertices())
      throw InputError("idempotent vertex out of range");
  CornerResult cr = corner(*A, vertices);
  Idempotent e;
  e.parent = A;
  e.corner = std::make_shared<const Algebra>(std::move(cr.algebra));
  e.in_e.assign(A->num_vertices(), false);
  for (int v : vertices) e.in_e[v] = true;
  e.vertices = std::move(vertices);
  e.parent_vertex = std::move(cr.parent_vertex);
  e.arrow_value = std::move(cr.arrow_value);
  e.basis_value = std::move(cr.basis_value);
  return e;
}

TorsionParts torsion_parts(const Representation& M, const Idempotent& e) {
  TorsionParts out{submodule(M, delta_spaces(M, e)),
                   submodule(M, nabla_spaces(M, e)), {}};
  out.core = quotient(out.nabla.sub, delta_spaces(out.nabla.sub, e));
  return out;
}

Representation restrict(const Representation& M, const Idempotent& e) {
  Field F = e.corner->field();
  int m = e.corner->num_vertices();
  std::vector<int> dims(m);
  for (int i = 0; i < m; ++i) dims[i] = M.dims[e.parent_vertex[i]];
  std::vector<Matrix> maps;
  for (std::size_t a = 0; a < e.corner->quiver().arrows.size(); ++a) {
    int s = e.corner->arrow_source(static_cast<int>(a));
    int t = e.corner->arrow_target(static_cast<int>(a));
    int ps = e.parent_vertex[s];
    Matrix act(F, dims[t], dims[s]);
    for (const auto& [w, c] : e.arrow_value[a])
      act = add(act, scale(c, word_action(M, ps, M.A->basis()[w].arrows)));
    maps.push_back(std::move(act));
  }
  return make_representation(e.corner, std::move(dims), std::move(maps));
}

Morphism restrict(const Morphism& m, const Idempotent& e) {
  std::vector<Matrix> f;
  for (int i = 0; i < e.corner->num_vertices(); ++i)
    f.push_back(m.f[e.parent_vertex[i]]);
  return Morphism{restrict(m.src, e), restrict(m.dst, e), std::move(f)};
}

InducedModule induce(const Representation& X, const Idempotent& e) {
  internal_check(X.A.get() == e.corner.get(), "inducing a non-corner module");
  Field F = e.parent->field();
  const Algebra& C = *e.corner;

  Morphism cover = projective_cover(X);
  std::vector<int> gv = cover_vertices(X);
  std::vector<std::vector<Scalar>> gx;
  for (std::size_t g = 0; g < gv.size(); ++g) {
    int col = 0;
    for (std::size_t g2 = 0; g2 < g; ++g2)
      col += static_cast<int>(C.basis_pair(gv[g], gv[g2]).size());
    gx.push_back(cover.f[gv[g]].column(col));
  }

  SubmoduleResult ker = submodule(cover.src, kernel_spaces(cover));
  Morphism kcover = projective_cover(ker.sub);
  std::vector<int> gv1 = cover_vertices(ker.sub);
  Morphism d = compose(ker.incl, kcover);

  std::vector<std::vector<LinComb>> zhat =
      to_parent_elements(projective_map_elements(gv1, gv, d), e);
  std::vector<int> pg0 = to_parent_vertices(gv, e);
  Morphism dhat = projective_map_from_elements(e.parent, to_parent_vertices(gv1, e),
                                               pg0, zhat);
  QuotientResult q = quotient(dhat.dst, image_spaces(dhat));

  // unit: change cover coordinates into the parent cover, then project;
  // independent of the chosen section because the kernels correspond
  Representation R = restrict(q.quot, e);
  std::vector<Matrix> etaf(static_cast<std::size_t>(C.num_vertices()));
  for (int i = 0; i < C.num_vertices(); ++i) {
    int p = e.parent_vertex[i];
    Matrix K(F, dhat.dst.dims[p], cover.src.dims[i]);
    int col = 0, rowoff = 0;
    for (std::size_t g = 0; g < gv.size(); ++g) {
      const std::vector<int>& rows = e.parent->basis_pair(p, pg0[g]);
      for (int u : C.basis_pair(i, gv[g])) {
        for (const auto& [w, c] : e.basis_value[u])
          K.at(rowoff + pair_position(rows, w), col) = c;
        ++col;
      }
      rowoff += static_cast<int>(rows.size());
    }
    auto sec = solve(cover.f[i], Matrix::identity(F, X.dims[i]));
    internal_check(sec.has_value(), "cover lost surjectivity");
    etaf[static_cast<std::size_t>(i)] = mul(q.proj.f[p], mul(K, *sec));
  }
  Morphism eta{X, std::move(R), std::move(etaf)};
  internal_check(morphism_ok(eta), "unit is not a morphism");
  internal_check(is_invertible_morphism(eta), "unit is not invertible");

  return InducedModule{q.quot, std::move(eta), std::move(cover), std::move(gv),
                       std::move(gx), std::move(q.proj)};
}

Morphism induce(const InducedModule& ix, const InducedModule& iy,
                const Morphism& g, const Idempotent& e) {
  // lift the generator images through the cover of the target
  std::vector<std::vector<Scalar>> lifted;
  for (std::size_t k = 0; k < ix.gen_vertex.size(); ++k) {
    int i = ix.gen_vertex[k];
    Matrix x(g.src.A->field(), g.src.dims[i], 1);
    for (int r = 0; r < x.rows(); ++r) x.at(r, 0) = ix.gen_image[k][r];
    auto u = solve(iy.cover.f[i], mul(g.f[i], x));
    internal_check(u.has_value(), "cover lost surjectivity");
    lifted.push_back(u->column(0));
  }
  Morphism L = projective_map_from_gens(ix.gen_vertex, iy.cover.src, lifted);
  internal_check(same_maps(compose(iy.cover, L), compose(g, ix.cover)),
                 "generator lift does not commute");

  std::vector<std::vector<LinComb>> zhat = to_parent_elements(
      projective_map_elements(ix.gen_vertex, iy.gen_vertex, L), e);
  Morphism Lhat =
      projective_map_from_elements(e.parent, to_parent_vertices(ix.gen_vertex, e),
                                   to_parent_vertices(iy.gen_vertex, e), zhat);
  Morphism ghat = factor_through(ix.hat_proj, compose(iy.hat_proj, Lhat));
  internal_check(same_maps(compose(restrict(ghat, e), ix.eta), compose(iy.eta, g)),
                 "induced morphism is not natural");
  return ghat;
}

Morphism counit(const InducedModule& ind, const Representation& M,
                const Idempotent& e) {
  Morphism kappa = projective_map_from_gens(to_parent_vertices(ind.gen_vertex, e),
                                            M, ind.gen_image);
  return factor_through(ind.hat_proj, kappa);
}

Morphism counit(const Representation& M, const Idempotent& e) {
  return counit(induce(restrict(M, e), e), M, e);
}

GiraudObject sigma(const Representation& M, const Idempotent& e) {
  QuotientResult mb = quotient(M, delta_spaces(M, e));
  Morphism env = injective_envelope(mb.quot);
  QuotientResult co = quotient(env.dst, image_spaces(env));
  std::vector<Matrix> dq = delta_spaces(co.quot, e);
  std::vector<Matrix> pre(dq.size());
  for (std::size_t v = 0; v < dq.size(); ++v)
    pre[v] = preimage_columns(co.proj.f[v], dq[v]);
  SubmoduleResult ms = submodule(env.dst, pre);
  Morphism unit = lift_through(ms.incl, compose(env, mb.proj));
  internal_check(spaces_zero(delta_spaces(ms.sub, e)), "localization kept torsion");
  internal_check(is_invertible_morphism(restrict(unit, e)),
                 "unit is not invertible over the corner");
  return GiraudObject{std::move(ms.sub), std::move(unit)};
}

TtfClasses classify(const Representation& M, const Idempotent& e) {
  TorsionParts tp = torsion_parts(M, e);
  TtfClasses c;
  c.in_C = tp.nabla.sub.total_dim() == M.total_dim();
  c.in_T = tp.delta.sub.total_dim() == M.total_dim();
  c.in_F = tp.delta.sub.is_zero();
  c.in_G = is_invertible_morphism(sigma(M, e).unit);
  return c;
}

DeltaExtension max_delta_extension(const Morphism& f, const Idempotent& e) {
  if (!spaces_zero(delta_spaces(f.src, e)))
    throw InputError("domain of the extension problem has torsion");
  if (!spaces_zero(delta_spaces(f.dst, e)))
    throw InputError("codomain of the extension problem has torsion");
  GiraudObject sm = sigma(f.src, e);
  GiraudObject sy = sigma(f.dst, e);
  // the localized map is unique: two extensions differ on a torsion quotient
  // mapping into a torsionfree module
  auto fs = extend_along(sm.unit, compose(sy.unit, f));
  internal_check(fs.has_value(), "map does not localize");
  PullbackResult pb = pullback(*fs, sy.unit);

  std::vector<Matrix> inclf, legf;
  for (std::size_t v = 0; v < f.f.size(); ++v) {
    inclf.push_back(vstack(pb.to_first.f[v], pb.to_second.f[v]));
    legf.push_back(vstack(sm.unit.f[v], f.f[v]));
  }
  std::vector<Representation> parts{sm.M_sigma, f.dst};
  Representation S = direct_sum(parts);
  Morphism incl{pb.P, S, std::move(inclf)};
  Morphism legs{f.src, std::move(S), std::move(legf)};
  Morphism j = lift_through(incl, legs);
  internal_check(same_maps(compose(pb.to_second, j), f),
                 "extension does not restrict to the given map");

  std::vector<Matrix> soc = socle_spaces(pb.P);
  std::vector<Matrix> im = image_spaces(j);
  for (std::size_t v = 0; v < soc.size(); ++v) {
    internal_check(columns_contained(soc[v], im[v]), "extension is not essential");
    if (e.in_e[static_cast<int>(v)])
      internal_check(im[v].cols() == pb.P.dims[static_cast<int>(v)],
                     "cokernel of the extension is not torsion");
  }
  return DeltaExtension{pb.P, std::move(j), std::move(pb.to_second)};
}

}  // namespace qtilt
