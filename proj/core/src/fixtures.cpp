#include "qtilt/fixtures.hpp"

#include <random>
#include <set>

namespace qtilt {

namespace {

struct Builder {
  Presentation p;

  void vertices(std::initializer_list<const char*> names) {
    for (const char* n : names) p.quiver.vertices.push_back(n);
  }
  void arrow(const char* name, const char* from, const char* to) {
    p.quiver.arrows.push_back(
        {name, p.quiver.vertex_index(from), p.quiver.vertex_index(to)});
  }
  Mono word(std::initializer_list<const char*> arrows) {
    Mono w;
    for (const char* n : arrows) w.push_back(p.quiver.arrow_index(n));
    return w;
  }
  // single path set to zero; arrows listed in traversal order
  void zero(std::initializer_list<const char*> arrows) {
    p.relations.push_back({{{p.field.one(), word(arrows)}}});
  }
  // difference of two parallel paths set to zero
  void equate(std::initializer_list<const char*> a, std::initializer_list<const char*> b) {
    p.relations.push_back(
        {{{p.field.one(), word(a)}, {p.field.neg(p.field.one()), word(b)}}});
  }
};

Presentation two_vertex_loop_core() {
  // gamma: 1 -> 2 against a parallel pair back; only the composite
  // "gamma then alpha" survives in degree two
  Builder b;
  b.p.field = Field{0};
  b.vertices({"1", "2"});
  b.arrow("gamma", "1", "2");
  b.arrow("beta", "2", "1");
  b.arrow("alpha", "2", "1");
  b.zero({"gamma", "beta"});
  b.zero({"alpha", "gamma"});
  b.zero({"beta", "gamma"});
  b.p.nilpotency_bound = 2;
  return b.p;
}

Fixture make_ex22() {
  Builder b;
  b.p.field = Field{0};
  b.vertices({"1", "2", "3", "4"});
  b.arrow("c", "1", "2");
  b.arrow("d", "2", "1");
  b.arrow("alpha1", "3", "1");
  b.arrow("alpha2", "3", "1");
  b.arrow("a", "3", "4");
  b.arrow("b", "4", "3");
  b.arrow("beta1", "2", "4");
  b.arrow("beta2", "2", "4");
  b.zero({"b", "a"});
  b.zero({"d", "c"});
  b.zero({"c", "d"});
  b.zero({"c", "beta1"});
  b.zero({"c", "beta2"});
  b.zero({"beta1", "b", "alpha1"});
  b.zero({"beta1", "b", "alpha2"});
  b.zero({"beta2", "b", "alpha1"});
  b.zero({"beta2", "b", "alpha2"});
  b.p.nilpotency_bound = 4;
  return {"ex2.2", std::move(b.p), {"1", "2"}};
}

Fixture make_ex49() {
  Builder b;
  b.p.field = Field{0};
  b.vertices({"1", "2", "3"});
  b.arrow("alpha", "1", "2");
  b.arrow("beta", "1", "2");
  b.arrow("eps", "2", "2");
  b.arrow("gamma", "2", "3");
  b.arrow("delta", "3", "2");
  b.zero({"alpha", "gamma"});
  b.zero({"beta", "gamma"});
  b.zero({"beta", "eps"});
  b.zero({"eps", "eps"});
  b.zero({"eps", "gamma"});
  b.zero({"delta", "gamma"});
  b.p.nilpotency_bound = 3;
  return {"ex4.9", std::move(b.p), {"1", "2"}};
}

Fixture make_ex69() {
  Builder b;
  b.p.field = Field{0};
  b.vertices({"1", "2", "3", "4", "5"});
  b.arrow("mu", "1", "2");
  b.arrow("alpha", "2", "4");
  b.arrow("beta", "2", "4");
  b.arrow("gamma", "4", "3");
  b.arrow("delta", "4", "3");
  b.arrow("rho", "3", "2");
  b.arrow("sigma", "3", "2");
  b.arrow("nu", "3", "5");
  b.arrow("tau", "5", "4");
  b.equate({"alpha", "gamma"}, {"beta", "delta"});
  b.equate({"beta", "gamma"}, {"alpha", "delta"});
  b.equate({"rho", "alpha"}, {"sigma", "beta"});
  b.equate({"rho", "alpha"}, {"nu", "tau"});
  b.zero({"mu", "beta", "gamma"});
  b.zero({"rho", "beta"});
  b.zero({"sigma", "alpha"});
  b.zero({"tau", "delta"});
  b.zero({"alpha", "gamma", "rho"});
  b.zero({"beta", "gamma", "rho"});
  b.zero({"alpha", "gamma", "sigma"});
  b.zero({"beta", "gamma", "sigma"});
  b.zero({"beta", "gamma", "nu"});
  b.zero({"mu", "alpha", "gamma", "nu"});
  b.zero({"tau", "gamma", "rho", "alpha"});
  b.p.nilpotency_bound = 3;
  return {"ex6.9", std::move(b.p), {"1", "2", "3"}};
}

Fixture make_ist() { return {"ist", two_vertex_loop_core(), {"1", "2"}}; }

Fixture make_merge_demo() {
  Algebra part_e = Algebra::complete(two_vertex_loop_core());
  Builder point;
  point.p.field = Field{0};
  point.vertices({"3"});
  point.p.nilpotency_bound = 1;
  Algebra part_rest = Algebra::complete(std::move(point.p));
  std::vector<Arrow> alphas{{"alpha1", 0, 0}};  // 3 -> 1
  std::vector<Arrow> betas{{"beta1", 1, 0}};    // 2 -> 3
  Presentation merged = merge_presentations(part_e, part_rest, alphas, betas);
  return {"merge-demo", std::move(merged), {"1", "2"}};
}

Fixture make_trunc(const std::string& id, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  Builder b;
  b.p.field = Field{2};
  int n = 2 + static_cast<int>(rng() % 3);
  for (int v = 0; v < n; ++v) b.p.quiver.vertices.push_back(std::to_string(v + 1));
  int L = 2 + static_cast<int>(rng() % 2);
  b.p.nilpotency_bound = L;

  int next_arrow = 0;
  const int cap = n + 3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (next_arrow >= cap) break;
      unsigned roll = static_cast<unsigned>(rng() % 100);
      int count = roll < 30 ? 1 : (roll < 38 ? 2 : 0);
      for (int k = 0; k < count && next_arrow < cap; ++k)
        b.p.quiver.arrows.push_back({"a" + std::to_string(next_arrow++), i, j});
    }
  if (precyclic_vertices(b.p.quiver).empty())
    b.p.quiver.arrows.push_back({"a" + std::to_string(next_arrow++), 0, 0});

  // truncate: every path of length L+1 vanishes
  std::vector<std::pair<int, Mono>> level;
  for (int v = 0; v < n; ++v) level.push_back({v, {}});
  for (int len = 1; len <= L + 1; ++len) {
    std::vector<std::pair<int, Mono>> next;
    for (const auto& [src, w] : level) {
      int tgt = w.empty() ? src : b.p.quiver.arrows[w.back()].to;
      for (std::size_t a = 0; a < b.p.quiver.arrows.size(); ++a) {
        if (b.p.quiver.arrows[a].from != tgt) continue;
        Mono w2 = w;
        w2.push_back(static_cast<int>(a));
        next.push_back({src, std::move(w2)});
      }
    }
    level = std::move(next);
  }
  for (auto& [src, w] : level)
    b.p.relations.push_back({{{b.p.field.one(), std::move(w)}}});

  Fixture f{id, std::move(b.p), {}};
  for (int v : precyclic_vertices(f.presentation.quiver))
    f.e.push_back(f.presentation.quiver.vertices[v]);
  return f;
}

}  // namespace

std::vector<std::string> fixture_ids() {
  return {"ex2.2", "ex4.9", "ex6.9", "ist", "merge-demo"};
}

bool is_fixture_id(const std::string& id) {
  if (id.rfind("trunc:", 0) == 0) return true;
  for (const std::string& s : fixture_ids())
    if (s == id) return true;
  return false;
}

Fixture get_fixture(const std::string& id) {
  if (id == "ex2.2") return make_ex22();
  if (id == "ex4.9") return make_ex49();
  if (id == "ex6.9") return make_ex69();
  if (id == "ist") return make_ist();
  if (id == "merge-demo") return make_merge_demo();
  if (id.rfind("trunc:", 0) == 0) {
    const std::string tail = id.substr(6);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
      throw InputError("bad generated-fixture id '" + id + "'");
    return make_trunc(id, std::stoull(tail));
  }
  throw InputError("unknown fixture id '" + id + "'");
}

}  // namespace qtilt
