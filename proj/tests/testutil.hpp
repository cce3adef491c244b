#pragma once

#include <random>
#include <string>
#include <vector>

#include "qtilt/fixtures.hpp"
#include "qtilt/repmod.hpp"

namespace qtilt {

inline AlgebraPtr fixture_algebra(const std::string& id) {
  return complete_algebra(get_fixture(id).presentation);
}

inline std::vector<int> vertex_indices(const AlgebraPtr& A,
                                       const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const std::string& n : names) out.push_back(A->quiver().vertex_index(n));
  return out;
}

// Random quotients and submodules of random sums of projectives: every
// module produced this way satisfies the relations by construction.
inline Representation random_module(const AlgebraPtr& A, std::mt19937_64& rng) {
  Field F = A->field();
  std::vector<Representation> parts;
  for (int i = 0; i < A->num_vertices(); ++i) {
    int mult = static_cast<int>(rng() % 3);
    for (int k = 0; k < mult; ++k) parts.push_back(projective_module(A, i));
  }
  if (parts.empty()) parts.push_back(projective_module(A, 0));
  Representation M0 = direct_sum(parts);

  int n = A->num_vertices();
  std::vector<std::vector<std::vector<Scalar>>> cols(n);
  int gens = 1 + static_cast<int>(rng() % 3);
  for (int g = 0; g < gens; ++g) {
    int v = static_cast<int>(rng() % n);
    if (M0.dims[v] == 0) continue;
    std::vector<Scalar> x;
    for (int r = 0; r < M0.dims[v]; ++r) {
      long long c = F.rational() ? static_cast<long long>(rng() % 5) - 2
                                 : static_cast<long long>(rng() % F.p);
      x.push_back(F.from_int(c));
    }
    cols[v].push_back(std::move(x));
  }
  std::vector<Matrix> spaces;
  for (int v = 0; v < n; ++v)
    spaces.push_back(column_echelon(Matrix::from_columns(F, M0.dims[v], cols[v])));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < M0.maps.size(); ++a) {
      int s = A->arrow_source(static_cast<int>(a));
      int t = A->arrow_target(static_cast<int>(a));
      Matrix joined = column_echelon(hstack(spaces[t], mul(M0.maps[a], spaces[s])));
      if (joined.cols() != spaces[t].cols()) {
        spaces[t] = std::move(joined);
        changed = true;
      }
    }
  }
  if (rng() & 1) return submodule(M0, spaces).sub;
  return quotient(M0, spaces).quot;
}

}  // namespace qtilt
