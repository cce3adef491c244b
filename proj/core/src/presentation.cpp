#include "qtilt/presentation.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

namespace qtilt {

int Quiver::vertex_index(const std::string& name) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == name) return static_cast<int>(i);
  return -1;
}

int Quiver::arrow_index(const std::string& name) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == name) return static_cast<int>(i);
  return -1;
}

bool MonoLess::operator()(const Mono& a, const Mono& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

int find_subword(const Mono& w, const Mono& lead) {
  if (lead.empty() || lead.size() > w.size()) return -1;
  for (std::size_t pos = 0; pos + lead.size() <= w.size(); ++pos) {
    bool hit = true;
    for (std::size_t k = 0; k < lead.size(); ++k)
      if (w[pos + k] != lead[k]) {
        hit = false;
        break;
      }
    if (hit) return static_cast<int>(pos);
  }
  return -1;
}

bool has_suffix(const Mono& w, const Mono& s) {
  if (s.size() > w.size()) return false;
  return std::equal(s.begin(), s.end(), w.end() - static_cast<long>(s.size()));
}

const Mono& lead_of(const Poly& p) { return std::prev(p.end())->first; }

void poly_add(Field F, Poly& p, const Mono& w, const Scalar& c, int trunc) {
  if (trunc >= 0 && static_cast<int>(w.size()) > trunc) return;
  if (F.is_zero(c)) return;
  auto it = p.find(w);
  if (it == p.end()) {
    p.emplace(w, c);
    return;
  }
  Scalar s = F.add(it->second, c);
  if (F.is_zero(s))
    p.erase(it);
  else
    it->second = s;
}

void make_monic(Field F, Poly& p) {
  Scalar inv = F.inv(std::prev(p.end())->second);
  if (F.is_one(inv)) return;
  for (auto& [w, c] : p) c = F.mul(inv, c);
}

// Rewrites the largest term repeatedly until every term is irreducible.
// Deterministic: leftmost match position, then lowest system index.
Poly reduce_poly(Field F, Poly work, const std::vector<Poly>& gb,
                 const std::vector<char>* alive, int trunc) {
  Poly out;
  while (!work.empty()) {
    auto top = std::prev(work.end());
    Mono w = top->first;
    Scalar c = top->second;
    work.erase(top);

    int best_pos = -1, best_g = -1;
    for (std::size_t g = 0; g < gb.size(); ++g) {
      if (alive && !(*alive)[g]) continue;
      int pos = find_subword(w, lead_of(gb[g]));
      if (pos >= 0 && (best_pos < 0 || pos < best_pos)) {
        best_pos = pos;
        best_g = static_cast<int>(g);
        if (pos == 0) break;
      }
    }
    if (best_g < 0) {
      poly_add(F, out, w, c, trunc);
      continue;
    }
    const Poly& g = gb[best_g];
    const Mono& lead = lead_of(g);
    for (auto it = g.begin(); std::next(it) != g.end(); ++it) {
      Mono nw;
      nw.reserve(w.size() - lead.size() + it->first.size());
      nw.insert(nw.end(), w.begin(), w.begin() + best_pos);
      nw.insert(nw.end(), it->first.begin(), it->first.end());
      nw.insert(nw.end(), w.begin() + best_pos + static_cast<long>(lead.size()), w.end());
      poly_add(F, work, nw, F.neg(F.mul(c, it->second)), trunc);
    }
  }
  return out;
}

// Incremental echelonization of sparse vectors; pivot = lowest index.
struct SparseEchelon {
  Field F;
  std::map<int, LinComb> rows;

  LinComb residue(LinComb v) const {
    bool hit = true;
    while (hit && !v.empty()) {
      hit = false;
      for (const auto& [idx, c] : v) {
        auto it = rows.find(idx);
        if (it != rows.end()) {
          v = lincomb_add(F, v, lincomb_scale(F, F.neg(c), it->second));
          hit = true;
          break;
        }
      }
    }
    return v;
  }

  // returns the normalized inserted row, empty when dependent
  LinComb insert(const LinComb& v) {
    LinComb r = residue(v);
    if (r.empty()) return r;
    r = lincomb_scale(F, F.inv(r.front().second), r);
    rows.emplace(r.front().first, r);
    return r;
  }
};

struct CompletionState {
  Field F;
  int maxdeg;
  std::vector<Poly> gb;
  std::vector<char> alive;
  std::deque<Poly> pending;

  void push_overlaps(std::size_t fi, std::size_t gi) {
    const Mono& u = lead_of(gb[fi]);
    const Mono& v = lead_of(gb[gi]);
    int smax = static_cast<int>(std::min(u.size(), v.size()));
    for (int s = 1; s <= smax; ++s) {
      if (fi == gi && s == static_cast<int>(u.size())) continue;
      if (static_cast<int>(u.size() + v.size()) - s > maxdeg) continue;
      if (!std::equal(v.begin(), v.begin() + s, u.end() - s)) continue;
      // overlap word: u followed by the rest of v
      Poly spoly;
      for (const auto& [m, c] : gb[fi]) {
        Mono nw = m;
        nw.insert(nw.end(), v.begin() + s, v.end());
        poly_add(F, spoly, nw, c, -1);
      }
      for (const auto& [m, c] : gb[gi]) {
        Mono nw(u.begin(), u.end() - s);
        nw.insert(nw.end(), m.begin(), m.end());
        poly_add(F, spoly, nw, F.neg(c), -1);
      }
      if (!spoly.empty()) pending.push_back(std::move(spoly));
    }
  }

  void run() {
    while (!pending.empty()) {
      Poly p = reduce_poly(F, std::move(pending.front()), gb, &alive, -1);
      pending.pop_front();
      if (p.empty()) continue;
      make_monic(F, p);
      const Mono lead = lead_of(p);
      for (std::size_t i = 0; i < gb.size(); ++i) {
        if (alive[i] && find_subword(lead_of(gb[i]), lead) >= 0) {
          alive[i] = 0;
          pending.push_back(gb[i]);
        }
      }
      gb.push_back(std::move(p));
      alive.push_back(1);
      std::size_t pi = gb.size() - 1;
      for (std::size_t i = 0; i < gb.size(); ++i) {
        if (!alive[i]) continue;
        push_overlaps(pi, i);
        if (i != pi) push_overlaps(i, pi);
      }
    }
    interreduce();
  }

  void interreduce() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < gb.size(); ++i) {
        if (!alive[i]) continue;
        alive[i] = 0;
        Poly r = reduce_poly(F, gb[i], gb, &alive, -1);
        if (r.empty()) {
          changed = true;
          continue;
        }
        make_monic(F, r);
        if (!(r == gb[i])) changed = true;
        gb[i] = std::move(r);
        alive[i] = 1;
      }
    }
  }

  std::vector<Poly> result() const {
    std::vector<Poly> out;
    for (std::size_t i = 0; i < gb.size(); ++i)
      if (alive[i]) out.push_back(gb[i]);
    std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) {
      return MonoLess{}(lead_of(a), lead_of(b));
    });
    return out;
  }
};

std::string join_arrow_names(const Quiver& q, const Mono& w, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += sep;
    s += q.arrows[w[i]].name;
  }
  return s;
}

}  // namespace

LinComb lincomb_add(Field F, const LinComb& a, const LinComb& b) {
  LinComb out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      Scalar s = F.add(a[i].second, b[j].second);
      if (!F.is_zero(s)) out.emplace_back(a[i].first, s);
      ++i;
      ++j;
    }
  }
  return out;
}

LinComb lincomb_scale(Field F, const Scalar& c, const LinComb& a) {
  if (F.is_zero(c)) return {};
  LinComb out;
  out.reserve(a.size());
  for (const auto& [idx, x] : a) {
    Scalar s = F.mul(c, x);
    if (!F.is_zero(s)) out.emplace_back(idx, s);
  }
  return out;
}

int Algebra::word_target(int b) const {
  const Word& w = basis_[b];
  if (w.arrows.empty()) return w.vertex;
  return pres_.quiver.arrows[w.arrows.back()].to;
}

std::string Algebra::word_name(int b) const {
  const Word& w = basis_[b];
  if (w.arrows.empty()) return "e_" + pres_.quiver.vertices[w.vertex];
  return join_arrow_names(pres_.quiver, w.arrows, "*");
}

int Algebra::mono_target(const Mono& w, int source) const {
  return w.empty() ? source : pres_.quiver.arrows[w.back()].to;
}

int Algebra::basis_index(const Word& w) const {
  if (w.arrows.empty())
    return (w.vertex >= 0 && w.vertex < num_vertices()) ? w.vertex : -1;
  auto it = nontrivial_index_.find(w.arrows);
  return it == nontrivial_index_.end() ? -1 : it->second;
}

LinComb Algebra::reduce_word(int source_vertex, const Mono& w) const {
  if (w.empty()) return {{unit(source_vertex), field().one()}};
  Poly p;
  p.emplace(w, field().one());
  Poly r = reduce_poly(field(), std::move(p), gb_, nullptr, pres_.nilpotency_bound);
  LinComb out;
  for (const auto& [m, c] : r) {
    int idx = basis_index(Word{source_vertex, m});
    internal_check(idx >= 0, "normal form produced a word outside the basis");
    out.emplace_back(idx, c);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

LinComb Algebra::mult(int i, int j) const {
  if (word_target(j) != word_source(i)) return {};
  auto key = std::make_pair(i, j);
  auto it = mult_cache_.find(key);
  if (it != mult_cache_.end()) return it->second;
  Mono w = basis_[j].arrows;
  w.insert(w.end(), basis_[i].arrows.begin(), basis_[i].arrows.end());
  LinComb r = reduce_word(word_source(j), w);
  mult_cache_.emplace(key, r);
  return r;
}

LinComb Algebra::mult(const LinComb& x, const LinComb& y) const {
  std::map<int, Scalar> acc;
  Field F = field();
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) {
      LinComb prod = mult(i, j);
      if (prod.empty()) continue;
      Scalar c = F.mul(ci, cj);
      for (const auto& [b, cb] : prod) {
        auto it = acc.find(b);
        if (it == acc.end())
          acc.emplace(b, F.mul(c, cb));
        else
          it->second = F.add(it->second, F.mul(c, cb));
      }
    }
  LinComb out;
  for (const auto& [b, c] : acc)
    if (!F.is_zero(c)) out.emplace_back(b, c);
  return out;
}

Algebra Algebra::complete(Presentation pres) {
  const Quiver& q = pres.quiver;
  if (q.vertices.empty()) throw AlgebraError("quiver has no vertices");
  {
    std::set<std::string> names(q.vertices.begin(), q.vertices.end());
    if (names.size() != q.vertices.size())
      throw AlgebraError("duplicate vertex names");
    std::set<std::string> anames;
    for (const Arrow& a : q.arrows) {
      if (!anames.insert(a.name).second)
        throw AlgebraError("duplicate arrow name '" + a.name + "'");
      if (a.from < 0 || a.from >= static_cast<int>(q.vertices.size()) ||
          a.to < 0 || a.to >= static_cast<int>(q.vertices.size()))
        throw AlgebraError("arrow '" + a.name + "' has an undeclared endpoint");
    }
  }
  if (pres.nilpotency_bound < 1)
    throw AlgebraError("nilpotency bound must be at least 1");

  Field F = pres.field;
  int max_term = 0;
  for (const Relation& rel : pres.relations) {
    if (rel.terms.empty()) throw AlgebraError("empty relation");
    int src = -1, tgt = -1;
    std::set<Mono> seen;
    for (const RelTerm& t : rel.terms) {
      if (t.word.size() < 2)
        throw AlgebraError("relation term of length < 2 (ideal must be admissible)");
      if (F.is_zero(t.coeff)) throw AlgebraError("relation term with zero coefficient");
      for (std::size_t k = 0; k + 1 < t.word.size(); ++k)
        if (q.arrows[t.word[k]].to != q.arrows[t.word[k + 1]].from)
          throw AlgebraError("non-composable path in relation: " +
                             join_arrow_names(q, t.word, "*"));
      int s = q.arrows[t.word.front()].from;
      int e = q.arrows[t.word.back()].to;
      if (src < 0) {
        src = s;
        tgt = e;
      } else if (s != src || e != tgt) {
        throw AlgebraError("relation terms are not parallel");
      }
      if (!seen.insert(t.word).second)
        throw AlgebraError("duplicate path among relation terms");
      max_term = std::max(max_term, static_cast<int>(t.word.size()));
    }
  }

  const int L = pres.nilpotency_bound;
  CompletionState comp{F, std::max(L + 1, max_term), {}, {}, {}};
  for (const Relation& rel : pres.relations) {
    Poly p;
    for (const RelTerm& t : rel.terms) poly_add(F, p, t.word, t.coeff, -1);
    if (!p.empty()) comp.pending.push_back(std::move(p));
  }
  comp.run();

  Algebra A;
  A.pres_ = std::move(pres);
  A.gb_ = comp.result();
  const Quiver& Q = A.pres_.quiver;

  // Normal words up to length L+1; a survivor at L+1 is itself a nilpotency
  // witness. Built by extension: a new occurrence of a leading word must be
  // a suffix.
  std::vector<Word> normal;
  for (int v = 0; v < A.num_vertices(); ++v) normal.push_back({v, {}});
  std::size_t level_start = 0;
  for (int len = 1; len <= L + 1; ++len) {
    std::size_t level_end = normal.size();
    for (std::size_t i = level_start; i < level_end; ++i) {
      int tgt = A.mono_target(normal[i].arrows, normal[i].vertex);
      for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
        if (Q.arrows[a].from != tgt) continue;
        Mono w = normal[i].arrows;
        w.push_back(static_cast<int>(a));
        bool reducible = false;
        for (const Poly& g : A.gb_)
          if (has_suffix(w, lead_of(g))) {
            reducible = true;
            break;
          }
        if (!reducible) {
          if (len == L + 1)
            throw AlgebraError("nilpotency violation: path " +
                               join_arrow_names(Q, w, "*") +
                               " of length " + std::to_string(L + 1) +
                               " has nonzero normal form");
          normal.push_back({normal[i].vertex, std::move(w)});
        }
      }
    }
    level_start = level_end;
  }

  std::sort(normal.begin(), normal.end(), [](const Word& a, const Word& b) {
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
    if (a.arrows != b.arrows)
      return std::lexicographical_compare(a.arrows.begin(), a.arrows.end(),
                                          b.arrows.begin(), b.arrows.end());
    return a.vertex < b.vertex;
  });
  A.basis_ = std::move(normal);
  A.max_len_ = 0;
  for (std::size_t b = 0; b < A.basis_.size(); ++b) {
    if (!A.basis_[b].arrows.empty())
      A.nontrivial_index_.emplace(A.basis_[b].arrows, static_cast<int>(b));
    A.max_len_ = std::max(A.max_len_, A.word_length(static_cast<int>(b)));
  }
  A.from_.assign(A.num_vertices(), {});
  A.pair_.assign(A.num_vertices(),
                 std::vector<std::vector<int>>(A.num_vertices()));
  for (int b = 0; b < A.dim(); ++b) {
    A.from_[A.word_source(b)].push_back(b);
    A.pair_[A.word_target(b)][A.word_source(b)].push_back(b);
  }

  // Mixed-length relations can leave a long path with a nonzero short
  // normal form, so absence of long normal words is not enough: iterate the
  // spans of normal forms of paths of each exact length and require the
  // span at L+1 to vanish.
  {
    std::map<std::pair<int, int>, LinComb> tau;  // (basis word, arrow) -> NF
    auto right_ext = [&](int b, int a) -> const LinComb& {
      auto key = std::make_pair(b, a);
      auto it = tau.find(key);
      if (it != tau.end()) return it->second;
      LinComb nf;
      if (A.word_target(b) == Q.arrows[a].from) {
        Mono w = A.basis_[b].arrows;
        w.push_back(a);
        Poly p;
        p.emplace(std::move(w), F.one());
        Poly r = reduce_poly(F, std::move(p), A.gb_, nullptr, -1);
        for (const auto& [m, c] : r) {
          int idx = A.basis_index(Word{A.word_source(b), m});
          internal_check(idx >= 0, "nilpotency scan left the computed basis");
          nf.emplace_back(idx, c);
        }
        std::sort(nf.begin(), nf.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
      }
      return tau.emplace(key, std::move(nf)).first->second;
    };

    std::vector<LinComb> level;
    for (int v = 0; v < A.num_vertices(); ++v)
      level.push_back({{A.unit(v), F.one()}});
    for (int len = 1; len <= L + 1 && !level.empty(); ++len) {
      SparseEchelon ech{F, {}};
      std::vector<LinComb> next;
      for (const LinComb& v : level)
        for (std::size_t a = 0; a < Q.arrows.size(); ++a) {
          std::map<int, Scalar> acc;
          for (const auto& [b, c] : v)
            for (const auto& [nb, nc] : right_ext(b, static_cast<int>(a))) {
              auto it = acc.find(nb);
              if (it == acc.end())
                acc.emplace(nb, F.mul(c, nc));
              else
                it->second = F.add(it->second, F.mul(c, nc));
            }
          LinComb u;
          for (const auto& [b, c] : acc)
            if (!F.is_zero(c)) u.emplace_back(b, c);
          if (u.empty()) continue;
          if (len == L + 1) {
            // witness search: depth-first over paths with nonzero normal form
            std::vector<std::pair<Mono, LinComb>> stack;
            for (int vtx = 0; vtx < A.num_vertices(); ++vtx)
              stack.push_back({{}, {{A.unit(vtx), F.one()}}});
            while (!stack.empty()) {
              auto [w, nf] = std::move(stack.back());
              stack.pop_back();
              if (static_cast<int>(w.size()) == L + 1)
                throw AlgebraError("nilpotency violation: path " +
                                   join_arrow_names(Q, w, "*") +
                                   " of length " + std::to_string(L + 1) +
                                   " has nonzero normal form");
              for (std::size_t na = 0; na < Q.arrows.size(); ++na) {
                std::map<int, Scalar> acc2;
                for (const auto& [b, c] : nf)
                  for (const auto& [nb, nc] : right_ext(b, static_cast<int>(na))) {
                    auto it = acc2.find(nb);
                    if (it == acc2.end())
                      acc2.emplace(nb, F.mul(c, nc));
                    else
                      it->second = F.add(it->second, F.mul(c, nc));
                  }
                LinComb u2;
                for (const auto& [b, c] : acc2)
                  if (!F.is_zero(c)) u2.emplace_back(b, c);
                if (u2.empty()) continue;
                Mono w2 = w;
                w2.push_back(static_cast<int>(na));
                stack.push_back({std::move(w2), std::move(u2)});
              }
            }
            internal_check(false, "nonzero span at length L+1 but no witness path");
          }
          LinComb ins = ech.insert(u);
          if (!ins.empty()) next.push_back(std::move(ins));
        }
      level = std::move(next);
    }
  }

  return A;
}

Presentation opposite_presentation(const Presentation& p) {
  Presentation out;
  out.field = p.field;
  out.nilpotency_bound = p.nilpotency_bound;
  out.quiver.vertices = p.quiver.vertices;
  for (const Arrow& a : p.quiver.arrows)
    out.quiver.arrows.push_back({a.name, a.to, a.from});
  for (const Relation& rel : p.relations) {
    Relation r;
    for (const RelTerm& t : rel.terms) {
      Mono w(t.word.rbegin(), t.word.rend());
      r.terms.push_back({t.coeff, std::move(w)});
    }
    out.relations.push_back(std::move(r));
  }
  return out;
}

std::vector<int> precyclic_vertices(const Quiver& q) {
  int n = static_cast<int>(q.vertices.size());
  std::vector<std::vector<int>> succ(n);
  for (const Arrow& a : q.arrows) succ[a.from].push_back(a.to);

  auto reachable_from = [&](int start) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : succ[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    return seen;  // vertices reachable by a path of length >= 1
  };

  std::vector<char> on_cycle(n, 0);
  for (int v = 0; v < n; ++v)
    if (reachable_from(v)[v]) on_cycle[v] = 1;

  std::vector<int> result;
  for (int v = 0; v < n; ++v) {
    if (on_cycle[v]) {
      result.push_back(v);
      continue;
    }
    std::vector<char> r = reachable_from(v);
    for (int w = 0; w < n; ++w)
      if (on_cycle[w] && r[w]) {
        result.push_back(v);
        break;
      }
  }
  return result;
}

Presentation merge_presentations(const Algebra& part_e, const Algebra& part_rest,
                                 const std::vector<Arrow>& alphas,
                                 const std::vector<Arrow>& betas) {
  const Presentation& pe = part_e.presentation();
  const Presentation& pr = part_rest.presentation();
  if (!(pe.field == pr.field)) throw InputError("merge: ground fields differ");

  for (const Arrow& al : alphas)
    for (const Arrow& be : betas)
      if (al.to == be.from)
        throw InputError("merge: arrow '" + al.name + "' ends at the source of '" +
                         be.name + "'");

  Presentation out;
  out.field = pe.field;
  out.quiver.vertices = pe.quiver.vertices;
  out.quiver.vertices.insert(out.quiver.vertices.end(), pr.quiver.vertices.begin(),
                             pr.quiver.vertices.end());
  {
    std::set<std::string> names(out.quiver.vertices.begin(), out.quiver.vertices.end());
    if (names.size() != out.quiver.vertices.size())
      throw InputError("merge: vertex names collide");
  }
  const int voff = part_e.num_vertices();
  const int aoff_rest = static_cast<int>(pe.quiver.arrows.size());
  const int aoff_alpha = aoff_rest + static_cast<int>(pr.quiver.arrows.size());
  const int aoff_beta = aoff_alpha + static_cast<int>(alphas.size());

  for (const Arrow& a : pe.quiver.arrows) out.quiver.arrows.push_back(a);
  for (const Arrow& a : pr.quiver.arrows)
    out.quiver.arrows.push_back({a.name, a.from + voff, a.to + voff});
  for (const Arrow& a : alphas) {
    if (a.from < 0 || a.from >= part_rest.num_vertices() || a.to < 0 ||
        a.to >= part_e.num_vertices())
      throw InputError("merge: bad endpoints on arrow '" + a.name + "'");
    out.quiver.arrows.push_back({a.name, a.from + voff, a.to});
  }
  for (const Arrow& a : betas) {
    if (a.from < 0 || a.from >= part_e.num_vertices() || a.to < 0 ||
        a.to >= part_rest.num_vertices())
      throw InputError("merge: bad endpoints on arrow '" + a.name + "'");
    out.quiver.arrows.push_back({a.name, a.from, a.to + voff});
  }
  {
    std::set<std::string> names;
    for (const Arrow& a : out.quiver.arrows)
      if (!names.insert(a.name).second)
        throw InputError("merge: arrow names collide on '" + a.name + "'");
  }

  out.relations = pe.relations;
  for (const Relation& rel : pr.relations) {
    Relation r;
    for (const RelTerm& t : rel.terms) {
      Mono w;
      for (int a : t.word) w.push_back(a + aoff_rest);
      r.terms.push_back({t.coeff, std::move(w)});
    }
    out.relations.push_back(std::move(r));
  }

  // Paths that enter the first factor through an alpha arrow must not leave
  // it again: kill beta composed with any basis path out of an alpha target.
  std::set<int> entry_vertices;
  for (const Arrow& a : alphas) entry_vertices.insert(a.to);
  for (std::size_t l = 0; l < betas.size(); ++l) {
    for (int b = 0; b < part_e.dim(); ++b) {
      if (part_e.word_length(b) == 0) continue;
      if (part_e.word_target(b) != betas[l].from) continue;
      if (!entry_vertices.count(part_e.word_source(b))) continue;
      Mono w = part_e.basis()[b].arrows;
      w.push_back(aoff_beta + static_cast<int>(l));
      out.relations.push_back({{{out.field.one(), std::move(w)}}});
    }
  }

  // No path may cross from the first factor into the second and back.
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    for (std::size_t l = 0; l < betas.size(); ++l) {
      for (int b = 0; b < part_rest.dim(); ++b) {
        if (part_rest.word_source(b) != betas[l].to) continue;
        if (part_rest.word_target(b) != alphas[k].from) continue;
        Mono w{aoff_beta + static_cast<int>(l)};
        for (int a : part_rest.basis()[b].arrows) w.push_back(a + aoff_rest);
        w.push_back(aoff_alpha + static_cast<int>(k));
        out.relations.push_back({{{out.field.one(), std::move(w)}}});
      }
    }
  }

  out.nilpotency_bound = pe.nilpotency_bound + pr.nilpotency_bound + 1;
  return out;
}

namespace {

Matrix columns_from(Field F, const std::vector<std::vector<Scalar>>& cols, int rows) {
  return Matrix::from_columns(F, rows, cols);
}

std::vector<Scalar> block_project(const AbstractAlgebra& B, int i, int j,
                                  const std::vector<Scalar>& x) {
  return B.mult(B.units[i], B.mult(x, B.units[j]));
}

}  // namespace

Presented present_from_algebra(const AbstractAlgebra& B) {
  Field F = B.F;
  const int n = static_cast<int>(B.units.size());
  internal_check(n > 0 && B.dim > 0, "abstract algebra without units");

  auto is_zero_vec = [&](const std::vector<Scalar>& v) {
    for (const Scalar& c : v)
      if (!F.is_zero(c)) return false;
    return true;
  };
  auto vec_sub = [&](std::vector<Scalar> a, const std::vector<Scalar>& b) {
    for (int i = 0; i < B.dim; ++i) a[i] = F.sub(a[i], b[i]);
    return a;
  };
  for (int i = 0; i < n; ++i) {
    internal_check(is_zero_vec(vec_sub(B.mult(B.units[i], B.units[i]), B.units[i])),
                   "unit is not idempotent");
    for (int j = 0; j < n; ++j)
      if (i != j)
        internal_check(is_zero_vec(B.mult(B.units[i], B.units[j])),
                       "units are not orthogonal");
  }

  // radical powers give the exact nilpotency bound for the presentation
  Matrix J = column_echelon(B.radical);
  std::vector<Matrix> jpow{J};
  while (jpow.back().cols() > 0) {
    internal_check(static_cast<int>(jpow.size()) <= B.dim + 1,
                   "radical is not nilpotent");
    const Matrix& prev = jpow.back();
    std::vector<std::vector<Scalar>> prods;
    for (int x = 0; x < J.cols(); ++x)
      for (int y = 0; y < prev.cols(); ++y)
        prods.push_back(B.mult(J.column(x), prev.column(y)));
    jpow.push_back(column_echelon(columns_from(F, prods, B.dim)));
  }
  const int nil_bound = std::max(1, static_cast<int>(jpow.size()) - 1);
  Matrix jsq = jpow.size() > 1 ? jpow[1] : Matrix(F, B.dim, 0);

  Presentation pres;
  pres.field = F;
  pres.nilpotency_bound = nil_bound;
  pres.quiver.vertices = B.vertex_names;

  // arrows: per block, greedily keep candidates independent modulo J^2
  std::vector<std::vector<Scalar>> arrow_vals;
  int auto_name = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<std::pair<std::string, std::vector<Scalar>>> cands;
      if (B.block_candidates) {
        cands = B.block_candidates(i, j);
      } else {
        std::vector<std::vector<Scalar>> raw;
        for (int c = 0; c < J.cols(); ++c) {
          auto v = block_project(B, i, j, J.column(c));
          if (!is_zero_vec(v)) raw.push_back(std::move(v));
        }
        Matrix blk = column_echelon(columns_from(F, raw, B.dim));
        for (int c = 0; c < blk.cols(); ++c)
          cands.emplace_back("", blk.column(c));
      }
      Matrix span = jsq;
      for (auto& [name, val] : cands) {
        Matrix v = columns_from(F, {val}, B.dim);
        if (columns_contained(v, span)) continue;
        span = hstack(span, v);
        std::string nm = name;
        if (nm.empty()) nm = "a" + std::to_string(auto_name++);
        while (pres.quiver.arrow_index(nm) >= 0) nm += "'";
        pres.quiver.arrows.push_back({nm, j, i});
        arrow_vals.push_back(val);
      }
    }
  }
  {
    int expected = J.cols() - jsq.cols();
    internal_check(static_cast<int>(arrow_vals.size()) == expected,
                   "arrow extraction missed part of rad/rad^2");
  }

  // accepted-path loop: walk words in length-lex order, keep those with
  // independent values, turn each dependent word into a relation
  struct Accepted {
    Mono word;
    int source;
    std::vector<Scalar> value;
  };
  std::vector<Accepted> acc;
  IncrementalSpan span(F, B.dim);
  for (int v = 0; v < n; ++v) {
    acc.push_back({{}, v, B.units[v]});
    internal_check(!span.insert_or_express(B.units[v]).has_value(),
                   "units are linearly dependent");
  }
  std::size_t level_start = 0;
  auto word_target = [&](const Accepted& a) {
    return a.word.empty() ? a.source : pres.quiver.arrows[a.word.back()].to;
  };
  std::vector<Mono> rule_leads;
  while (level_start < acc.size()) {
    std::size_t level_end = acc.size();
    for (std::size_t p = level_start; p < level_end; ++p) {
      for (std::size_t a = 0; a < pres.quiver.arrows.size(); ++a) {
        if (pres.quiver.arrows[a].from != word_target(acc[p])) continue;
        Mono w = acc[p].word;
        w.push_back(static_cast<int>(a));
        // already reducible by a recorded relation; a new rule would be
        // redundant (the prefix is normal, so only suffixes can match)
        bool known = false;
        for (const Mono& lead : rule_leads)
          if (lead.size() <= w.size() &&
              std::equal(lead.begin(), lead.end(), w.end() - static_cast<long>(lead.size()))) {
            known = true;
            break;
          }
        if (known) continue;
        std::vector<Scalar> val = B.mult(arrow_vals[a], acc[p].value);
        auto expr = span.insert_or_express(val);
        if (!expr.has_value()) {
          acc.push_back({std::move(w), acc[p].source, std::move(val)});
          continue;
        }
        // The value lies in rad^2 and short accepted paths are independent
        // of it, so the expression uses paths of length >= 2 only and the
        // recorded relation is admissible.
        Relation rel;
        rel.terms.push_back({F.one(), w});
        for (std::size_t c = 0; c < expr->size(); ++c) {
          const Scalar& x = (*expr)[c];
          if (F.is_zero(x)) continue;
          internal_check(acc[c].word.size() >= 2,
                         "dependent path expression touches a short path");
          rel.terms.push_back({F.neg(x), acc[c].word});
        }
        pres.relations.push_back(std::move(rel));
        rule_leads.push_back(w);
      }
    }
    level_start = level_end;
  }
  internal_check(static_cast<int>(acc.size()) == B.dim,
                 "accepted paths do not span the algebra");

  Presented out{Algebra::complete(std::move(pres)), std::move(arrow_vals), {}};
  internal_check(out.algebra.dim() == B.dim,
                 "extracted presentation has the wrong dimension");

  out.basis_coords.resize(B.dim);
  for (int b = 0; b < B.dim; ++b) {
    const Word& wd = out.algebra.basis()[b];
    std::vector<Scalar> val = B.units[wd.vertex];
    for (int a : wd.arrows) val = B.mult(out.arrow_coords[a], val);
    out.basis_coords[b] = std::move(val);
  }
  return out;
}

CornerResult corner(const Algebra& A, const std::vector<int>& e_in) {
  if (e_in.empty()) throw InputError("corner: empty idempotent set");
  std::vector<int> e = e_in;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  for (int v : e)
    if (v < 0 || v >= A.num_vertices())
      throw InputError("corner: vertex index out of range");

  std::vector<char> in_e(A.num_vertices(), 0);
  for (int v : e) in_e[v] = 1;
  std::vector<int> corner_vertex_of(A.num_vertices(), -1);
  for (std::size_t i = 0; i < e.size(); ++i) corner_vertex_of[e[i]] = static_cast<int>(i);

  // coordinates: the sub-span of basis words with both endpoints in e
  std::vector<int> words;
  std::vector<int> coord_of(A.dim(), -1);
  for (int b = 0; b < A.dim(); ++b)
    if (in_e[A.word_source(b)] && in_e[A.word_target(b)]) {
      coord_of[b] = static_cast<int>(words.size());
      words.push_back(b);
    }
  const int cdim = static_cast<int>(words.size());
  Field F = A.field();

  auto to_coords = [&](const LinComb& x) {
    std::vector<Scalar> v(cdim, F.zero());
    for (const auto& [b, c] : x) {
      internal_check(coord_of[b] >= 0, "corner product escapes the corner span");
      v[coord_of[b]] = c;
    }
    return v;
  };
  auto to_lincomb = [&](const std::vector<Scalar>& v) {
    LinComb x;
    for (int i = 0; i < cdim; ++i)
      if (!F.is_zero(v[i])) x.emplace_back(words[i], v[i]);
    return x;
  };

  AbstractAlgebra B;
  B.F = F;
  B.dim = cdim;
  for (int v : e) B.vertex_names.push_back(A.quiver().vertices[v]);
  for (int v : e) {
    std::vector<Scalar> u(cdim, F.zero());
    u[coord_of[A.unit(v)]] = F.one();
    B.units.push_back(std::move(u));
  }
  {
    std::vector<std::vector<Scalar>> rad;
    for (int i = 0; i < cdim; ++i)
      if (A.word_length(words[i]) > 0) {
        std::vector<Scalar> u(cdim, F.zero());
        u[i] = F.one();
        rad.push_back(std::move(u));
      }
    B.radical = Matrix::from_columns(F, cdim, rad);
  }
  B.mult = [&A, to_coords, to_lincomb](const std::vector<Scalar>& x,
                                       const std::vector<Scalar>& y) {
    return to_coords(A.mult(to_lincomb(x), to_lincomb(y)));
  };
  B.block_candidates = [&](int i, int j) {
    std::vector<std::pair<std::string, std::vector<Scalar>>> out;
    for (int c = 0; c < cdim; ++c) {
      int b = words[c];
      if (A.word_length(b) == 0) continue;
      if (A.word_target(b) != e[i] || A.word_source(b) != e[j]) continue;
      std::string name;
      if (A.word_length(b) == 1) {
        name = A.quiver().arrows[A.basis()[b].arrows[0]].name;
      } else {
        name = join_arrow_names(A.quiver(), A.basis()[b].arrows, "_");
      }
      std::vector<Scalar> v(cdim, F.zero());
      v[c] = F.one();
      out.emplace_back(std::move(name), std::move(v));
    }
    return out;  // already in length-lex order
  };

  Presented pr = present_from_algebra(B);
  CornerResult res{std::move(pr.algebra), e, {}, {}};
  for (const auto& coords : pr.arrow_coords) res.arrow_value.push_back(to_lincomb(coords));
  for (const auto& coords : pr.basis_coords) res.basis_value.push_back(to_lincomb(coords));
  return res;
}

}  // namespace qtilt
