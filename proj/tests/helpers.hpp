#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "lep/superop.hpp"
#include "lep/types.hpp"

namespace lep::test {

inline Mat random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

inline LindbladModel random_model(int dim, int jumps, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  LindbladModel model;
  Mat h = random_complex(dim, dim, rng);
  model.hamiltonian = (h + h.adjoint()) / 2;
  for (int k = 0; k < jumps; ++k)
    model.jumps.emplace_back(std::abs(g(rng)), random_complex(dim, dim, rng));
  return model;
}

// greedy nearest-match pairing distance between eigenvalue multisets
inline double multiset_distance(std::vector<cd> a, std::vector<cd> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const cd& va : a) {
    auto best = std::min_element(b.begin(), b.end(), [&](const cd& x, const cd& y) {
      return std::abs(x - va) < std::abs(y - va);
    });
    worst = std::max(worst, std::abs(*best - va));
    b.erase(best);
  }
  return worst;
}

inline std::vector<cd> to_vector(const Vec& v) {
  return std::vector<cd>(v.data(), v.data() + v.size());
}

// index of the eigenvalue in `values` nearest to target
inline int nearest_mode(const Vec& values, cd target) {
  int best = 0;
  for (int i = 1; i < values.size(); ++i)
    if (std::abs(values(i) - target) < std::abs(values(best) - target)) best = i;
  return best;
}

}  // namespace lep::test
