#include <doctest.h>

#include <numeric>

#include "sunada/pipeline.hpp"
#include "sunada/surgery.hpp"

using namespace sunada;

namespace {

const std::string kFixtures = SUNADA_FIXTURE_DIR;

}  // namespace

TEST_CASE("peripheral exponents as discrete logs") {
  // the published meridian/longitude images of the K11n116 reduction at 7
  ProjMat mu = proj_mat(7, 0, 4, 5, 5);
  ProjMat la = proj_mat(7, 2, 5, 1, 3);
  PeripheralExponents e = exponents_from_images(mu, la);
  CHECK(e.ell == 7);
  CHECK(e.s == 1);
  // oracle: the published longitude image is the cube of the meridian image
  ProjMat acc = proj_identity(7);
  int d = -1;
  for (int k = 0; k < 7; ++k) {
    if (acc == la) d = k;
    acc = multiply(acc, mu);
  }
  REQUIRE(d >= 0);
  CHECK(e.t == d);
  CHECK(e.t == 3);

  // trivial longitude gives t = 0
  PeripheralExponents e0 = exponents_from_images(mu, proj_identity(7));
  CHECK(e0.t == 0);

  // both the meridian and longitude of the conjugated two-cusped example
  // map to the same parabolic, so the exponents agree
  ProjMat par = proj_mat(7, 1, -1, 0, 1);
  PeripheralExponents same = exponents_from_images(par, par);
  CHECK(same.s == same.t);

  CHECK_THROWS_WITH_AS(exponents_from_images(proj_identity(7), proj_identity(7)),
                       doctest::Contains("trivial"), Psl2Error);
  // a longitude outside the meridian's cyclic group is rejected
  CHECK_THROWS_AS(exponents_from_images(proj_mat(7, 1, 1, 0, 1), proj_mat(7, 1, 0, 1, 1)),
                  Psl2Error);
}

TEST_CASE("exponents straight from a homomorphism record") {
  FixtureBundle k11 = load_bundle(kFixtures + "/k11n116.bundle.json");
  HomRecord h;
  h.ell = 7;
  for (const PublishedRep& rep : k11.published)
    if (rep.name == "rho7") h.images = rep.generator_images;
  PeripheralExponents e = exponents_from_hom(h, k11.pres, 0);
  CHECK(e.s == 1);
  CHECK(e.t == 3);
  CHECK_THROWS_AS(exponents_from_hom(h, k11.pres, 1), Psl2Error);  // cusp index out of range
}

TEST_CASE("filling slopes satisfy the congruence and are coprime") {
  for (auto [s, t] : std::vector<std::pair<int, int>>{{2, 2}, {2, 0}, {6, 6}, {1, 3}, {0, 4}}) {
    std::vector<FillingSlope> slopes = filling_slopes({7, s, t}, 25);
    CHECK(slopes.size() == 25);
    for (const FillingSlope& sl : slopes) {
      CHECK(std::gcd(std::abs(sl.m), std::abs(sl.n)) == 1);
      CHECK(((sl.m * s + sl.n * t) % 7 + 7) % 7 == 0);
    }
  }
}

TEST_CASE("slopes include the published families") {
  // s = t = 2: q = 1 and p of the form 7a - 1
  std::vector<FillingSlope> a = filling_slopes({7, 2, 2}, 40);
  CHECK(std::find(a.begin(), a.end(), FillingSlope{6, 1}) != a.end());
  CHECK(std::find(a.begin(), a.end(), FillingSlope{13, 1}) != a.end());
  CHECK(std::find(a.begin(), a.end(), FillingSlope{-1, 1}) != a.end());

  // exactly one peripheral image trivial: p = 7n with q coprime to it
  std::vector<FillingSlope> b = filling_slopes({7, 2, 0}, 40);
  CHECK(std::find(b.begin(), b.end(), FillingSlope{7, 1}) != b.end());
  CHECK(std::find(b.begin(), b.end(), FillingSlope{7, 2}) != b.end());
  for (const FillingSlope& sl : b) CHECK(sl.m % 7 == 0);

  // both images equal (s = t = -1 mod 7): p = -(7n + 1), q = 1
  std::vector<FillingSlope> c = filling_slopes({7, 6, 6}, 40);
  CHECK(std::find(c.begin(), c.end(), FillingSlope{-1, 1}) != c.end());
  CHECK(std::find(c.begin(), c.end(), FillingSlope{-8, 1}) != c.end());
  CHECK(std::find(c.begin(), c.end(), FillingSlope{-15, 1}) != c.end());
}

TEST_CASE("slopes are ordered by |m|+|n| then lexicographically") {
  std::vector<FillingSlope> slopes = filling_slopes({7, 2, 2}, 30);
  for (std::size_t i = 1; i < slopes.size(); ++i) {
    long si = std::abs(slopes[i - 1].m) + std::abs(slopes[i - 1].n);
    long sj = std::abs(slopes[i].m) + std::abs(slopes[i].n);
    CHECK(si <= sj);
    if (si == sj) CHECK(slopes[i - 1].m < slopes[i].m);
  }
}

TEST_CASE("the homomorphism kills the filling word of every returned slope") {
  FixtureBundle k11 = load_bundle(kFixtures + "/k11n116.bundle.json");
  ProjMat mu = proj_mat(7, 0, 4, 5, 5);
  ProjMat la = proj_mat(7, 2, 5, 1, 3);
  PeripheralExponents e = exponents_from_images(mu, la);

  // evaluate mu^m * lambda^n as a word in a rank-2 alphabet
  Presentation rank2;
  rank2.generators = {'m', 'l'};
  std::vector<ProjMat> imgs = {mu, la};
  auto mul = [](const ProjMat& x, const ProjMat& y) { return multiply(x, y); };
  auto inv = [](const ProjMat& x) { return inverse(x); };
  for (const FillingSlope& sl : filling_slopes(e, 30)) {
    Word filling = Word({Letter{0, 1}}).pow(sl.m) * Word({Letter{1, 1}}).pow(sl.n);
    CHECK(evaluate_word(filling, imgs, proj_identity(7), mul, inv) == proj_identity(7));
  }
}

TEST_CASE("slopes exist in abundance for every valid exponent pair") {
  for (int ell : {7, 11})
    for (int s = 0; s < ell; ++s)
      for (int t = 0; t < ell; ++t) {
        if (s == 0 && t == 0) continue;
        CHECK(filling_slopes({ell, s, t}, 1000).size() == 1000);
      }
  CHECK_THROWS_AS(filling_slopes({7, 0, 0}, 5), Psl2Error);
  CHECK_THROWS_AS(filling_slopes({7, 7, 14}, 5), Psl2Error);  // both zero mod 7
}
