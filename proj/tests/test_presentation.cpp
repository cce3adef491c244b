#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "qtilt/fixtures.hpp"
#include "qtilt/presentation.hpp"

using namespace qtilt;

namespace {

Algebra fixture_algebra(const std::string& id) {
  return Algebra::complete(get_fixture(id).presentation);
}

std::vector<int> projective_dims(const Algebra& A) {
  std::vector<int> out;
  for (int v = 0; v < A.num_vertices(); ++v)
    out.push_back(static_cast<int>(A.basis_from(v).size()));
  return out;
}

// dimension of e_t A e_s for every (t, s)
std::vector<std::vector<int>> pair_dims(const Algebra& A) {
  std::vector<std::vector<int>> out(A.num_vertices(),
                                    std::vector<int>(A.num_vertices()));
  for (int t = 0; t < A.num_vertices(); ++t)
    for (int s = 0; s < A.num_vertices(); ++s)
      out[t][s] = static_cast<int>(A.basis_pair(t, s).size());
  return out;
}

}  // namespace

TEST_CASE("two commuting squares with crossing arrows") {
  Algebra A = fixture_algebra("ex2.2");
  CHECK(A.dim() == 25);
  CHECK(A.max_basis_length() == 4);
  CHECK(projective_dims(A) == std::vector<int>{2, 6, 11, 6});
  auto pd = pair_dims(A);
  CHECK(pd[0][2] == 4);  // four paths from vertex 3 into vertex 1
  CHECK(pd[1][2] == 4);
  CHECK(pd[2][2] == 2);
  CHECK(pd[3][2] == 1);
  CHECK(pd[3][1] == 2);
  for (int v = 0; v < 4; ++v) CHECK(A.unit(v) == v);
  for (int b = 0; b < A.dim(); ++b) {
    if (b < 4) CHECK(A.word_length(b) == 0);
  }
}

TEST_CASE("loop with a one-sided kill pattern") {
  Algebra A = fixture_algebra("ex4.9");
  CHECK(A.dim() == 12);
  CHECK(projective_dims(A) == std::vector<int>{4, 5, 3});
  auto pd = pair_dims(A);
  CHECK(pd[1][1] == 4);
  CHECK(pd[2][1] == 1);
  CHECK(pd[1][0] == 3);
}

TEST_CASE("five-vertex algebra with commutation relations") {
  Algebra A = fixture_algebra("ex6.9");
  CHECK(A.dim() == 33);
  CHECK(projective_dims(A) == std::vector<int>{5, 6, 5, 11, 6});

  // the composite rho then alpha then gamma is forced to zero even though
  // no input relation names it directly
  const Quiver& q = A.quiver();
  Mono w{q.arrow_index("rho"), q.arrow_index("alpha"), q.arrow_index("gamma")};
  CHECK(A.reduce_word(q.vertex_index("3"), w).empty());

  // the two squares commute after completion
  Mono ag{q.arrow_index("alpha"), q.arrow_index("gamma")};
  Mono bd{q.arrow_index("beta"), q.arrow_index("delta")};
  LinComb x = A.reduce_word(1, ag);
  LinComb y = A.reduce_word(1, bd);
  REQUIRE(x.size() == 1);
  CHECK(x == y);
}

TEST_CASE("declared bound smaller than the true nilpotency degree is rejected") {
  {
    Presentation p;
    p.field = Field{0};
    p.quiver.vertices = {"v"};
    p.quiver.arrows = {{"x", 0, 0}, {"y", 0, 0}};
    Scalar one = p.field.one();
    p.relations.push_back({{{one, {0, 0, 0}}, {p.field.neg(one), {1, 1}}}});
    p.relations.push_back({{{one, {0, 1}}}});
    p.relations.push_back({{{one, {1, 0}}}});
    p.nilpotency_bound = 2;
    // x^3 equals y^2 which is nonzero, so the radical cube survives
    CHECK_THROWS_AS(Algebra::complete(p), AlgebraError);
    try {
      Algebra::complete(p);
    } catch (const AlgebraError& e) {
      CHECK(std::string(e.what()).find("nilpotency") != std::string::npos);
    }
    p.nilpotency_bound = 3;
    Algebra A = Algebra::complete(p);
    CHECK(A.dim() == 5);
    CHECK(A.max_basis_length() == 2);
  }
}

TEST_CASE("input validation") {
  Presentation p;
  p.field = Field{0};
  p.quiver.vertices = {"1", "2"};
  p.quiver.arrows = {{"a", 0, 1}, {"b", 1, 0}};
  p.nilpotency_bound = 0;
  CHECK_THROWS_AS(Algebra::complete(p), AlgebraError);
  p.nilpotency_bound = 2;

  Presentation bad = p;
  bad.quiver.arrows.push_back({"a", 0, 1});
  CHECK_THROWS_AS(Algebra::complete(bad), AlgebraError);

  bad = p;
  bad.relations.push_back({{{p.field.one(), {0}}}});  // length one
  CHECK_THROWS_AS(Algebra::complete(bad), AlgebraError);

  bad = p;
  bad.relations.push_back({{{p.field.one(), {0, 0}}}});  // not composable
  CHECK_THROWS_AS(Algebra::complete(bad), AlgebraError);

  bad = p;
  bad.relations.push_back(
      {{{p.field.one(), {0, 1}}, {p.field.one(), {0, 1}}}});  // duplicate path
  CHECK_THROWS_AS(Algebra::complete(bad), AlgebraError);

  bad = p;
  bad.relations.push_back(
      {{{p.field.one(), {0, 1}}, {p.field.one(), {1, 0}}}});  // not parallel
  CHECK_THROWS_AS(Algebra::complete(bad), AlgebraError);

  bad = p;
  bad.relations.push_back({{{p.field.zero(), {0, 1}}}});  // zero coefficient
  CHECK_THROWS_AS(Algebra::complete(bad), AlgebraError);

  // without relations the declared bound must absorb the cycle; bound 2
  // leaves the length-3 path a*b*a alive
  CHECK_THROWS_AS(Algebra::complete(p), AlgebraError);
  p.relations.push_back({{{p.field.one(), {0, 1}}}});
  p.relations.push_back({{{p.field.one(), {1, 0}}}});
  CHECK(Algebra::complete(p).dim() == 4);
}

TEST_CASE("multiplication is associative on the whole basis") {
  Algebra A = fixture_algebra("ex4.9");
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j)
      for (int k = 0; k < A.dim(); ++k) {
        LinComb li{{i, A.field().one()}};
        LinComb lj{{j, A.field().one()}};
        LinComb lk{{k, A.field().one()}};
        CHECK(A.mult(A.mult(li, lj), lk) == A.mult(li, A.mult(lj, lk)));
      }
}

TEST_CASE("normal forms agree with stepwise reduction of random words") {
  Algebra A = fixture_algebra("ex2.2");
  const Quiver& q = A.quiver();
  std::mt19937_64 rng(0);
  int tried = 0;
  while (tried < 100) {
    int v = static_cast<int>(rng() % q.vertices.size());
    Mono w;
    int at = v;
    int len = 1 + static_cast<int>(rng() % 7);
    for (int s = 0; s < len; ++s) {
      std::vector<int> outgoing;
      for (std::size_t a = 0; a < q.arrows.size(); ++a)
        if (q.arrows[a].from == at) outgoing.push_back(static_cast<int>(a));
      if (outgoing.empty()) break;
      int a = outgoing[rng() % outgoing.size()];
      w.push_back(a);
      at = q.arrows[a].to;
    }
    if (w.empty()) continue;
    ++tried;

    // fold arrow by arrow through the cached product
    LinComb acc{{A.unit(v), A.field().one()}};
    for (int a : w) {
      LinComb arrow_elt{{A.basis_index(Word{q.arrows[a].from, {a}}), A.field().one()}};
      acc = A.mult(arrow_elt, acc);
    }
    CHECK(acc == A.reduce_word(v, w));
  }
}

TEST_CASE("opposite of opposite restores the presentation") {
  for (const char* id : {"ex2.2", "ex4.9", "ex6.9", "ist"}) {
    Presentation p = get_fixture(id).presentation;
    Presentation q = opposite_presentation(opposite_presentation(p));
    CHECK(p.quiver.vertices == q.quiver.vertices);
    REQUIRE(p.quiver.arrows.size() == q.quiver.arrows.size());
    for (std::size_t i = 0; i < p.quiver.arrows.size(); ++i) {
      CHECK(p.quiver.arrows[i].name == q.quiver.arrows[i].name);
      CHECK(p.quiver.arrows[i].from == q.quiver.arrows[i].from);
      CHECK(p.quiver.arrows[i].to == q.quiver.arrows[i].to);
    }
    REQUIRE(p.relations.size() == q.relations.size());
    for (std::size_t i = 0; i < p.relations.size(); ++i)
      for (std::size_t t = 0; t < p.relations[i].terms.size(); ++t)
        CHECK(p.relations[i].terms[t].word == q.relations[i].terms[t].word);
    CHECK(Algebra::complete(opposite_presentation(p)).dim() ==
          Algebra::complete(p).dim());
  }
}

TEST_CASE("vertices that reach an oriented cycle") {
  CHECK(precyclic_vertices(get_fixture("ex2.2").presentation.quiver) ==
        std::vector<int>{0, 1, 2, 3});
  CHECK(precyclic_vertices(get_fixture("ex6.9").presentation.quiver) ==
        std::vector<int>{0, 1, 2, 3, 4});
  CHECK(precyclic_vertices(get_fixture("ist").presentation.quiver) ==
        std::vector<int>{0, 1});

  Quiver q;
  q.vertices = {"1", "2"};
  q.arrows = {{"f", 0, 1}};
  CHECK(precyclic_vertices(q).empty());
  q.arrows.push_back({"l", 0, 0});
  CHECK(precyclic_vertices(q) == std::vector<int>{0});
  q.arrows[1] = {"l", 1, 1};
  CHECK(precyclic_vertices(q) == std::vector<int>{0, 1});
}

TEST_CASE("corner at the full vertex set reproduces the algebra") {
  Algebra A = fixture_algebra("ex4.9");
  CornerResult c = corner(A, {0, 1, 2});
  CHECK(c.algebra.dim() == A.dim());
  CHECK(c.algebra.num_vertices() == 3);
  CHECK(c.algebra.quiver().vertices == A.quiver().vertices);
  CHECK(projective_dims(c.algebra) == projective_dims(A));
  std::set<std::string> names;
  for (const Arrow& a : c.algebra.quiver().arrows) names.insert(a.name);
  CHECK(names == std::set<std::string>{"alpha", "beta", "eps", "gamma", "delta"});
}

TEST_CASE("corner of the commuting squares at the left square") {
  Algebra A = fixture_algebra("ex2.2");
  CornerResult c = corner(A, {0, 1});
  CHECK(c.algebra.dim() == 4);
  CHECK(c.algebra.nilpotency_bound() == 1);
  CHECK(c.algebra.quiver().arrows.size() == 2);
  CHECK(c.algebra.presentation().relations.size() == 2);
  CHECK(c.parent_vertex == std::vector<int>{0, 1});
  // corner arrow values sit inside the parent
  for (const LinComb& v : c.arrow_value) {
    REQUIRE(v.size() == 1);
    CHECK(A.word_length(v[0].first) == 1);
  }
}

TEST_CASE("corner with a composite arrow") {
  Algebra A = fixture_algebra("ex4.9");
  CornerResult c = corner(A, {0, 1});
  CHECK(c.algebra.dim() == 8);
  CHECK(c.algebra.nilpotency_bound() == 2);
  REQUIRE(c.algebra.quiver().arrows.size() == 4);
  std::set<std::string> names;
  for (const Arrow& a : c.algebra.quiver().arrows) names.insert(a.name);
  CHECK(names == std::set<std::string>{"alpha", "beta", "eps", "gamma_delta"});
  CHECK(c.algebra.presentation().relations.size() == 6);
  CHECK(projective_dims(c.algebra) == std::vector<int>{4, 4});
}

TEST_CASE("corner of the five-vertex algebra at the non-split part") {
  Algebra A = fixture_algebra("ex6.9");
  CornerResult c = corner(A, {0, 1, 2});
  CHECK(c.algebra.dim() == 9);
  CHECK(c.algebra.nilpotency_bound() == 2);
  REQUIRE(c.algebra.quiver().arrows.size() == 5);
  std::vector<std::string> names;
  for (const Arrow& a : c.algebra.quiver().arrows) names.push_back(a.name);
  CHECK(names == std::vector<std::string>{"mu", "rho", "sigma", "alpha_gamma",
                                          "alpha_delta"});
  CHECK(c.algebra.presentation().relations.size() == 9);
  CHECK(projective_dims(c.algebra) == std::vector<int>{3, 3, 3});
}

TEST_CASE("merging glues a corner back onto a complement") {
  Fixture f = get_fixture("merge-demo");
  CHECK(f.presentation.nilpotency_bound == 4);
  Algebra M = Algebra::complete(f.presentation);
  CHECK(M.dim() == 11);
  CHECK(M.num_vertices() == 3);

  CornerResult c = corner(M, {0, 1});
  Algebra ist = fixture_algebra("ist");
  CHECK(c.algebra.dim() == ist.dim());
  std::set<std::string> names;
  for (const Arrow& a : c.algebra.quiver().arrows) names.insert(a.name);
  CHECK(names == std::set<std::string>{"gamma", "beta", "alpha"});
  CHECK(c.algebra.presentation().relations.size() == 3);

  // the glued vertex column is a projective over the corner
  auto pd = pair_dims(M);
  CHECK(pd[0][2] == 2);
  CHECK(pd[1][2] == 1);
  CHECK(pd[2][2] == 1);
}

TEST_CASE("merge rejects clashing names and touching connectors") {
  Algebra ist = fixture_algebra("ist");
  {
    Presentation pt;
    pt.field = Field{0};
    pt.quiver.vertices = {"1"};  // collides with the first factor
    Algebra rest = Algebra::complete(pt);
    CHECK_THROWS_AS(
        merge_presentations(ist, rest, {{"x", 0, 0}}, {{"y", 1, 0}}),
        InputError);
  }
  {
    Presentation pt;
    pt.field = Field{0};
    pt.quiver.vertices = {"3"};
    Algebra rest = Algebra::complete(pt);
    // connector into vertex 1 paired with one leaving vertex 1
    CHECK_THROWS_AS(
        merge_presentations(ist, rest, {{"x", 0, 0}}, {{"y", 0, 0}}),
        InputError);
  }
}

TEST_CASE("generated truncated fixtures are deterministic and consistent") {
  for (unsigned long long seed : {0ull, 1ull, 2ull, 3ull, 4ull}) {
    Fixture a = get_fixture("trunc:" + std::to_string(seed));
    Fixture b = get_fixture("trunc:" + std::to_string(seed));
    CHECK(a.presentation.quiver.vertices == b.presentation.quiver.vertices);
    REQUIRE(a.presentation.quiver.arrows.size() ==
            b.presentation.quiver.arrows.size());
    CHECK(a.presentation.relations.size() == b.presentation.relations.size());
    CHECK(!a.e.empty());

    Algebra A = Algebra::complete(a.presentation);
    // basis must be exactly the paths of length at most the declared bound
    const Quiver& q = a.presentation.quiver;
    long paths = 0;
    std::vector<std::pair<int, Mono>> level;
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v)
      level.push_back({v, {}});
    for (int len = 0; len <= a.presentation.nilpotency_bound; ++len) {
      paths += static_cast<long>(level.size());
      std::vector<std::pair<int, Mono>> next;
      for (const auto& [src, w] : level) {
        int tgt = w.empty() ? src : q.arrows[w.back()].to;
        for (std::size_t ar = 0; ar < q.arrows.size(); ++ar) {
          if (q.arrows[ar].from != tgt) continue;
          Mono w2 = w;
          w2.push_back(static_cast<int>(ar));
          next.push_back({src, std::move(w2)});
        }
      }
      level = std::move(next);
    }
    CHECK(A.dim() == paths);

    std::vector<int> e;
    for (const std::string& name : a.e) e.push_back(q.vertex_index(name));
    CornerResult c = corner(A, e);
    CHECK(c.algebra.dim() >= static_cast<int>(e.size()));
  }
}

TEST_CASE("fixture ids") {
  CHECK(is_fixture_id("ex2.2"));
  CHECK(is_fixture_id("trunc:17"));
  CHECK(!is_fixture_id("nope"));
  CHECK_THROWS_AS(get_fixture("nope"), InputError);
  CHECK_THROWS_AS(get_fixture("trunc:xyz"), InputError);
}
