#pragma once

#include <vector>

#include "sunada/homsearch.hpp"
#include "sunada/psl2.hpp"

namespace sunada {

// Discrete logs of the peripheral images in their cyclic group of order ell:
// rho(mu) = x^s and rho(lambda) = x^t for the generator x = rho(mu) when
// nontrivial, else x = rho(lambda). Naming: ell is the prime, and the
// surgery coefficients below are (m, n), so no letter does double duty.
struct PeripheralExponents {
  int ell = 0;
  int s = 0;
  int t = 0;
};

PeripheralExponents exponents_from_images(const ProjMat& mu, const ProjMat& lambda);
PeripheralExponents exponents_from_hom(const HomRecord& h, const Presentation& pres, int cusp_index);

struct FillingSlope {
  long m = 0;
  long n = 0;
  friend bool operator==(const FillingSlope&, const FillingSlope&) = default;
};

// The first `count` coprime pairs (m, n) with m*s + n*t == 0 (mod ell),
// ordered by |m|+|n| then lexicographically. Slopes are normalized to
// n > 0, or n == 0 with m > 0; every returned slope is re-verified coprime
// and congruent. A homomorphism with these exponents kills mu^m lambda^n,
// so it factors through the filled manifold's group.
std::vector<FillingSlope> filling_slopes(const PeripheralExponents& e, int count);

}  // namespace sunada
