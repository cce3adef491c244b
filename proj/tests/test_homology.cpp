#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "qtilt/fixtures.hpp"
#include "qtilt/homology.hpp"
#include "qtilt/ttf.hpp"
#include "testutil.hpp"

using namespace qtilt;

namespace {

Idempotent fixture_idempotent(const std::string& id) {
  Fixture fx = get_fixture(id);
  AlgebraPtr A = complete_algebra(fx.presentation);
  return make_idempotent(A, vertex_indices(A, fx.e));
}

Representation nth_syzygy(Representation M, int n) {
  for (int k = 0; k < n; ++k) M = syzygy(M);
  return M;
}

// simple three-cycle with all paths of length three set to zero
AlgebraPtr truncated_cycle() {
  Presentation p;
  p.field = Field{0};
  p.quiver.vertices = {"1", "2", "3"};
  p.quiver.arrows = {{"x", 0, 1}, {"y", 1, 2}, {"z", 2, 0}};
  p.relations.push_back({{{p.field.one(), Mono{0, 1, 2}}}});
  p.relations.push_back({{{p.field.one(), Mono{1, 2, 0}}}});
  p.relations.push_back({{{p.field.one(), Mono{2, 0, 1}}}});
  p.nilpotency_bound = 2;
  return complete_algebra(std::move(p));
}

AlgebraPtr semisimple_pair() {
  Presentation p;
  p.field = Field{0};
  p.quiver.vertices = {"1", "2"};
  p.nilpotency_bound = 1;
  return complete_algebra(std::move(p));
}

}  // namespace

TEST_CASE("syzygies of projectives vanish and respect direct sums") {
  AlgebraPtr A = fixture_algebra("ex2.2");
  for (int v = 0; v < 4; ++v) CHECK(syzygy(projective_module(A, v)).is_zero());
  CHECK(syzygy(zero_module(A)).is_zero());

  Representation S3 = simple_module(A, 2);
  Representation with_proj = direct_sum({S3, projective_module(A, 1)});
  CHECK(syzygy(with_proj).dims == syzygy(S3).dims);
}

TEST_CASE("projective dimension verdicts on the fixtures") {
  AlgebraPtr A = fixture_algebra("ex2.2");
  CHECK(default_resolution_bound(A) == 52);

  PdimResult s3 = pdim(simple_module(A, 2));
  CHECK(s3.finite());
  CHECK(s3.dim == 1);
  PdimResult s4 = pdim(simple_module(A, 3));
  CHECK(s4.finite());
  CHECK(s4.dim == 2);
  // the second syzygy is projective, the first is not
  CHECK(syzygy(nth_syzygy(simple_module(A, 3), 2)).is_zero());
  CHECK(!syzygy(nth_syzygy(simple_module(A, 3), 1)).is_zero());

  // the corner simples cycle with period two
  PdimResult s1 = pdim(simple_module(A, 0));
  CHECK(s1.kind == PdimKind::InfiniteCertified);
  CHECK(s1.stage_i == 2);
  CHECK(s1.stage_j == 4);
  PdimResult s2 = pdim(simple_module(A, 1));
  CHECK(s2.kind == PdimKind::InfiniteCertified);
  CHECK(s2.stage_i == 1);
  CHECK(s2.stage_j == 3);

  // the witness is a genuine isomorphism between the named syzygies
  REQUIRE(s1.witness.has_value());
  CHECK(morphism_ok(*s1.witness));
  CHECK(is_invertible_morphism(*s1.witness));
  Representation o2 = nth_syzygy(simple_module(A, 0), 2);
  Representation o4 = nth_syzygy(simple_module(A, 0), 4);
  CHECK(!o2.is_zero());
  CHECK(s1.witness->src.dims == o2.dims);
  CHECK(s1.witness->dst.dims == o4.dims);
  CHECK(is_isomorphic(o2, o4).isomorphic);

  for (int v = 0; v < 4; ++v) CHECK(pdim(projective_module(A, v)).dim == 0);
  CHECK(pdim(zero_module(A)).dim == 0);
  CHECK_THROWS_AS(pdim(simple_module(A, 0), 0), InputError);

  AlgebraPtr B = fixture_algebra("ex4.9");
  PdimResult b3 = pdim(simple_module(B, 2));
  CHECK(b3.finite());
  CHECK(b3.dim == 2);

  AlgebraPtr C = fixture_algebra("ex6.9");
  PdimResult c4 = pdim(simple_module(C, 3));
  CHECK(c4.finite());
  CHECK(c4.dim == 1);
  CHECK(syzygy(syzygy(simple_module(C, 3))).is_zero());
  PdimResult c5 = pdim(simple_module(C, 4));
  CHECK(c5.finite());
  CHECK(c5.dim == 3);

  // a small bound reports honestly instead of guessing
  CHECK(pdim(simple_module(C, 4), 2).kind == PdimKind::Unknown);
  CHECK(pdim(simple_module(C, 4), 2).bound == 2);
}

TEST_CASE("the restricted projectives over the loop corner are periodic") {
  Idempotent e = fixture_idempotent("ex4.9");
  Representation N = restrict(projective_module(e.parent, 2), e);
  CHECK(N.dims == std::vector<int>{0, 2});
  CHECK(is_isomorphic(syzygy(N), N).isomorphic);
  PdimResult r = pdim(N, 20);
  CHECK(r.kind == PdimKind::InfiniteCertified);
  CHECK(r.stage_i == 0);
  CHECK(r.stage_j == 1);
}

TEST_CASE("resolutions are minimal and exact") {
  AlgebraPtr A = fixture_algebra("ex2.2");

  ResolutionReport res = resolution(simple_module(A, 0), 4);
  CHECK(res.minimal);
  CHECK(!res.terminated);
  REQUIRE(res.projectives.size() == 5);
  CHECK(res.gens[0] == std::vector<int>{0});
  CHECK(res.gens[1] == std::vector<int>{1});
  CHECK(res.gens[2] == std::vector<int>{0, 3, 3});
  for (std::size_t k = 0; k + 1 < res.maps.size(); ++k)
    CHECK(image_spaces(res.maps[k + 1]) == kernel_spaces(res.maps[k]));

  ResolutionReport fin = resolution(simple_module(A, 3), 6);
  CHECK(fin.terminated);
  CHECK(fin.projectives.size() == 3);
  CHECK(fin.gens[1] == std::vector<int>{2});
  CHECK(fin.gens[2] == std::vector<int>{3});

  ResolutionReport zero_len = resolution(simple_module(A, 0), 0);
  CHECK(zero_len.projectives.size() == 1);
  CHECK_THROWS_AS(resolution(simple_module(A, 0), -1), InputError);
}

TEST_CASE("ext dimensions match hom in degree zero and arrows in degree one") {
  AlgebraPtr A = fixture_algebra("ex2.2");
  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    Representation M = random_module(A, rng);
    Representation N = random_module(A, rng);
    CHECK(ext_dim(M, N, 0) == hom_dim(M, N));
  }

  // arrow counts between each ordered vertex pair
  for (const std::string& id : {"ex2.2", "ex4.9"}) {
    AlgebraPtr B = fixture_algebra(id);
    int n = B->num_vertices();
    std::vector<std::vector<int>> arrows(n, std::vector<int>(n, 0));
    for (std::size_t a = 0; a < B->quiver().arrows.size(); ++a)
      ++arrows[B->arrow_source(static_cast<int>(a))][B->arrow_target(static_cast<int>(a))];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(ext_dim(simple_module(B, i), simple_module(B, j), 1) == arrows[i][j]);
  }
}

TEST_CASE("ext in degree two counts the defining relations") {
  // for a monomial presentation the minimal relations from i to j give the
  // second ext group of the simples
  AlgebraPtr A = fixture_algebra("ex2.2");
  auto e22 = [&](int i, int j) {
    return ext_dim(simple_module(A, i), simple_module(A, j), 2);
  };
  CHECK(e22(0, 0) == 1);  // c then d
  CHECK(e22(1, 1) == 1);  // d then c
  CHECK(e22(3, 3) == 1);  // b then a
  CHECK(e22(0, 3) == 2);  // c then either beta
  CHECK(e22(1, 0) == 4);  // beta, b, alpha in four combinations
  CHECK(e22(0, 1) == 0);
  for (int j = 0; j < 4; ++j) CHECK(e22(2, j) == 0);

  AlgebraPtr B = fixture_algebra("ex4.9");
  auto e49 = [&](int i, int j) {
    return ext_dim(simple_module(B, i), simple_module(B, j), 2);
  };
  CHECK(e49(0, 2) == 2);
  CHECK(e49(0, 1) == 1);
  CHECK(e49(1, 1) == 1);
  CHECK(e49(1, 2) == 1);
  CHECK(e49(2, 2) == 1);
  CHECK(e49(2, 1) == 0);
}

TEST_CASE("ext vanishes beyond finite projective dimension and on projectives") {
  AlgebraPtr A = fixture_algebra("ex2.2");
  Representation S4 = simple_module(A, 3);
  for (int j = 0; j < 4; ++j) {
    CHECK(ext_dim(projective_module(A, 2), simple_module(A, j), 1) == 0);
    CHECK(ext_dim(projective_module(A, 2), simple_module(A, j), 2) == 0);
    CHECK(ext_dim(S4, simple_module(A, j), 3) == 0);
  }
  CHECK(ext_dim(S4, S4, 2) == 1);

  // period two propagates through ext in high degrees
  Representation S1 = simple_module(A, 0);
  CHECK(ext_dim(S1, S4, 2) == 2);
  CHECK(ext_dim(S1, S4, 4) == 2);

  CHECK_THROWS_AS(ext_dim(S1, S4, -1), InputError);
}

TEST_CASE("socle embedding of the simples distinguishes the two sides") {
  AlgebraPtr ist = fixture_algebra("ist");
  CHECK(bass_socle_test(ist, Side::Right));
  CHECK(!bass_socle_test(ist, Side::Left));

  Idempotent e49 = fixture_idempotent("ex4.9");
  CHECK(bass_socle_test(e49.corner, Side::Right));
  CHECK(!bass_socle_test(e49.corner, Side::Left));

  Idempotent e69 = fixture_idempotent("ex6.9");
  CHECK(bass_socle_test(e69.corner, Side::Right));

  AlgebraPtr ss = semisimple_pair();
  CHECK(bass_socle_test(ss, Side::Left));
  CHECK(bass_socle_test(ss, Side::Right));
}

TEST_CASE("hypothesis reports for the fixture corners") {
  AlgebraPtr A = fixture_algebra("ex2.2");
  SettingReport sa = setting_check(A, {0, 1}, 52);
  CHECK(sa.outside == std::vector<int>{2, 3});
  REQUIRE(sa.simple_pdim.size() == 2);
  CHECK(sa.simple_pdim[0].dim == 1);
  CHECK(sa.simple_pdim[1].dim == 2);
  CHECK(sa.corner_rest.dims == std::vector<int>{6, 6});
  CHECK(sa.corner_rest_pdim.dim == 0);
  CHECK(sa.pdim_conditions);
  CHECK(sa.evidence.kind == CfEvidenceKind::BassZero);
  CHECK(sa.with_evidence);

  // dropping the loop vertex of the second fixture fails exactly at the
  // corner restriction, whose dimension is infinite
  AlgebraPtr B = fixture_algebra("ex4.9");
  SettingReport sb = setting_check(B, {0, 1}, 20);
  REQUIRE(sb.simple_pdim.size() == 1);
  CHECK(sb.simple_pdim[0].finite());
  CHECK(sb.simple_pdim[0].dim == 2);
  CHECK(sb.corner_rest_pdim.kind == PdimKind::InfiniteCertified);
  CHECK(!sb.pdim_conditions);
  CHECK(!sb.with_evidence);
  CHECK(sb.evidence.kind == CfEvidenceKind::BassZero);

  // the full vertex set passes vacuously
  SettingReport sc = setting_check(B, {0, 1, 2}, 20);
  CHECK(sc.outside.empty());
  CHECK(sc.corner_rest.is_zero());
  CHECK(sc.corner_rest_pdim.dim == 0);
  CHECK(sc.pdim_conditions);

  AlgebraPtr C = fixture_algebra("ex6.9");
  SettingReport sd = setting_check(C, {0, 1, 2}, 30);
  REQUIRE(sd.simple_pdim.size() == 2);
  CHECK(sd.simple_pdim[0].dim == 1);
  CHECK(sd.simple_pdim[1].dim == 3);
  CHECK(sd.corner_rest_pdim.dim == 0);
  CHECK(sd.pdim_conditions);
  CHECK(sd.evidence.kind == CfEvidenceKind::BassZero);
  CHECK(sd.with_evidence);

  CHECK_THROWS_AS(setting_check(A, {}, 10), InputError);
}

TEST_CASE("supplied evidence is only a fallback") {
  // an acyclic two-vertex algebra has finite global dimension, which beats
  // the supplied flag
  Presentation p;
  p.field = Field{0};
  p.quiver.vertices = {"1", "2"};
  p.quiver.arrows = {{"a", 0, 1}};
  p.nilpotency_bound = 1;
  AlgebraPtr A = complete_algebra(std::move(p));
  SettingReport sr = setting_check(A, {0, 1}, 10, true);
  CHECK(sr.evidence.kind != CfEvidenceKind::Unverified);
  CHECK(sr.with_evidence);
}

TEST_CASE("loewy profiles") {
  AlgebraPtr T = truncated_cycle();
  std::vector<int> all3(3, 3);
  CHECK(loewy_profile(T, ModuleScope::Projectives, Side::Left) == all3);
  CHECK(loewy_profile(T, ModuleScope::Projectives, Side::Right) == all3);
  CHECK(loewy_profile(T, ModuleScope::Injectives, Side::Left) == all3);

  Idempotent e69 = fixture_idempotent("ex6.9");
  CHECK(loewy_profile(e69.corner, ModuleScope::Projectives, Side::Left) ==
        std::vector<int>{3, 2, 2});

  AlgebraPtr ss = semisimple_pair();
  CHECK(loewy_profile(ss, ModuleScope::Projectives, Side::Left) == std::vector<int>{1, 1});
  CHECK(loewy_profile(ss, ModuleScope::Injectives, Side::Right) == std::vector<int>{1, 1});
}

TEST_CASE("finite projective dimension transfers across the corner") {
  Idempotent e = fixture_idempotent("ex2.2");
  std::mt19937_64 rng(41);
  for (int t = 0; t < 25; ++t) {
    Representation M = random_module(e.parent, rng);
    PdimResult pm = pdim(M, 12);
    PdimResult pc = pdim(restrict(M, e), 12);
    if (pm.finite()) CHECK(pc.finite());
    if (pc.kind == PdimKind::InfiniteCertified) CHECK(!pm.finite());
  }
  // inducing a finite-dimension corner module keeps the dimension finite
  for (int t = 0; t < 10; ++t) {
    Representation X = random_module(e.corner, rng);
    if (!pdim(X, 12).finite()) continue;
    CHECK(pdim(induce(X, e).module, 12).finite());
  }
}
