#include "sunada/surgery.hpp"

#include <numeric>
#include <stdexcept>

namespace sunada {

PeripheralExponents exponents_from_images(const ProjMat& mu, const ProjMat& lambda) {
  int p = mu.p;
  ProjMat id = proj_identity(p);
  if (mu == id && lambda == id)
    throw Psl2Error("peripheral image is trivial; exponents are undefined");
  const ProjMat& x = mu == id ? lambda : mu;

  auto dlog = [&](const ProjMat& target) {
    ProjMat acc = id;
    for (int k = 0; k < p; ++k) {
      if (acc == target) return k;
      acc = multiply(acc, x);
    }
    throw Psl2Error("peripheral image " + target.str() + " does not lie in the cyclic group of " +
                    x.str());
  };
  PeripheralExponents e;
  e.ell = p;
  e.s = dlog(mu);
  e.t = dlog(lambda);
  return e;
}

PeripheralExponents exponents_from_hom(const HomRecord& h, const Presentation& pres, int cusp_index) {
  if (cusp_index < 0 || cusp_index >= static_cast<int>(pres.cusps.size()))
    throw Psl2Error("cusp index out of range");
  const Cusp& cusp = pres.cusps[static_cast<std::size_t>(cusp_index)];
  ProjMat id = proj_identity(h.ell);
  auto mul = [](const ProjMat& a, const ProjMat& b) { return multiply(a, b); };
  auto inv = [](const ProjMat& a) { return inverse(a); };
  ProjMat mu = evaluate_word(cusp.meridian, h.images, id, mul, inv);
  ProjMat la = evaluate_word(cusp.longitude, h.images, id, mul, inv);
  return exponents_from_images(mu, la);
}

std::vector<FillingSlope> filling_slopes(const PeripheralExponents& e, int count) {
  if (e.ell < 2) throw Psl2Error("invalid peripheral exponents");
  if (e.s % e.ell == 0 && e.t % e.ell == 0)
    throw Psl2Error("peripheral exponents are both zero mod ell");
  std::vector<FillingSlope> out;
  for (long sum = 1; static_cast<int>(out.size()) < count; ++sum) {
    for (long m = -sum; m <= sum; ++m) {
      long n = sum - (m < 0 ? -m : m);
      if (n == 0 && m < 0) continue;  // (m,n) ~ (-m,-n); keep n > 0, or n == 0 with m > 0
      if (std::gcd(m < 0 ? -m : m, n) != 1) continue;
      long residue = ((m * e.s + n * e.t) % e.ell + e.ell) % e.ell;
      if (residue != 0) continue;
      out.push_back({m, n});
      if (static_cast<int>(out.size()) == count) break;
    }
  }
  return out;
}

}  // namespace sunada
