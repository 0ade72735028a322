#pragma once

// Map fixtures shared by the unit and acceptance suites.

#include <string>
#include <vector>

#include "grassorth/maps.hpp"
#include "grassorth/random.hpp"

namespace fixtures {

using grassorth::Complex;
using grassorth::PolyMatrixMap;

struct Named {
  std::string name;
  PolyMatrixMap<Complex> map;
};

/// Standard embedding pre-composed with z -> zV and post-composed with F -> F U for
/// seeded unitaries V (s x s) and U (s' x s'); both preserve 1 - z w^H and F F^H.
inline PolyMatrixMap<Complex> rotated_standard(size_t s, size_t rp, size_t sp, uint64_t seed) {
  grassorth::Rng rng(seed);
  const auto v = grassorth::random_unitary(s, rng);
  const auto u = grassorth::random_unitary(sp, rng);
  return grassorth::compose_target(grassorth::compose_source(grassorth::standard_embedding<Complex>(s, rp, sp), v), u);
}

/// Adds `delta` to the coefficient of z^exp in entry (i, j).
template <typename T>
PolyMatrixMap<T> perturb(PolyMatrixMap<T> f, size_t i, size_t j, const grassorth::Exponent& exp, const T& delta) {
  f.entry(i, j).add_term(exp, delta);
  return f;
}

inline grassorth::Exponent unit_exponent(size_t nvars, size_t k) {
  grassorth::Exponent e(nvars, 0);
  e[k] = 1;
  return e;
}

/// Built-ins plus 20 rotated standard embeddings.
inline std::vector<Named> suite() {
  std::vector<Named> out;
  const std::vector<std::array<size_t, 3>> standard{{2, 2, 3}, {3, 2, 4}, {3, 3, 5}, {4, 2, 5}};
  for (const auto& [s, rp, sp] : standard)
    out.push_back({"standard(" + std::to_string(s) + "," + std::to_string(rp) + "," + std::to_string(sp) + ")",
                   grassorth::standard_embedding<Complex>(s, rp, sp)});
  for (size_t s : {2, 3, 4})
    for (size_t rp : {2, 3})
      out.push_back({"whitney(" + std::to_string(s) + "," + std::to_string(rp) + ")",
                     grassorth::whitney_map<Complex>(s, rp)});
  out.push_back({"constant_shilov(2,2,3)", grassorth::constant_shilov_map<Complex>(2, 2, 3)});
  for (uint64_t k = 0; k < 20; ++k) {
    const auto& [s, rp, sp] = standard[k % standard.size()];
    out.push_back({"rotated_standard#" + std::to_string(k), rotated_standard(s, rp, sp, 1000 + k)});
  }
  return out;
}

}  // namespace fixtures
