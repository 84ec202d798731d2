#include <doctest.h>

#include <map>
#include <set>

#include "sunada/homsearch.hpp"
#include "sunada/pipeline.hpp"

using namespace sunada;

namespace {

const std::string kFixtures = SUNADA_FIXTURE_DIR;

const std::vector<ProjMat>& published_rho7(const FixtureBundle& bundle) {
  for (const PublishedRep& rep : bundle.published)
    if (rep.name == "rho7") return rep.generator_images;
  static std::vector<ProjMat> none;
  REQUIRE(false);
  return none;
}

}  // namespace

TEST_CASE("a presentation that kills its generator has no surjections") {
  Presentation pres;
  pres.generators = {'a'};
  pres.relators = {pres.parse("a")};
  HomSearchResult res = enumerate_homs(pres, 7);
  CHECK(res.raw_hom_count == 1);  // only the trivial map
  CHECK(res.raw_surjection_count == 0);
  CHECK(res.surjective_classes == 0);
}

TEST_CASE("too many generators are refused with the bound") {
  Presentation pres;
  pres.generators = {'a', 'b', 'c', 'd'};
  CHECK_THROWS_WITH_AS(enumerate_homs(pres, 7), doctest::Contains("3 generators"), FpGroupError);
}

TEST_CASE("search on K11n116 at 7: counts in both normalizations") {
  FixtureBundle k11 = load_bundle(kFixtures + "/k11n116.bundle.json");
  HomSearchResult res = enumerate_homs(k11.pres, 7);
  CHECK(res.raw_hom_count == 1176);
  CHECK(res.raw_surjection_count == 672);  // = 4 classes x |PSL(2,7)|
  CHECK(res.surjective_classes == 2);
  CHECK(res.surjective_inner_classes == 4);

  // every record satisfies the relators (re-checked by word evaluation)
  auto mul = [](const ProjMat& x, const ProjMat& y) { return multiply(x, y); };
  auto inv = [](const ProjMat& x) { return inverse(x); };
  for (const HomRecord& h : res.classes)
    for (const Word& r : k11.pres.relators)
      CHECK(evaluate_word(r, h.images, proj_identity(7), mul, inv) == proj_identity(7));

  // dedup soundness: canonical keys pairwise distinct
  std::set<std::vector<int>> keys;
  for (const HomRecord& h : res.classes) CHECK(keys.insert(aut_canonical_key(h.images)).second);

  // deterministic order
  HomSearchResult again = enumerate_homs(k11.pres, 7);
  REQUIRE(again.classes.size() == res.classes.size());
  for (std::size_t i = 0; i < res.classes.size(); ++i)
    CHECK(again.classes[i].images == res.classes[i].images);

  // the published reduction appears among the surjections up to Aut
  std::vector<int> pub = aut_canonical_key(published_rho7(k11));
  bool found = false;
  for (const HomRecord& h : res.classes)
    if (h.surjective && aut_canonical_key(h.images) == pub) found = true;
  CHECK(found);
}

TEST_CASE("dedup completeness against raw enumeration on a 2-generator group") {
  // the (2,3,7) triangle group surjects onto PSL(2,7)
  Presentation pres;
  pres.generators = {'a', 'b'};
  pres.relators = {pres.parse("aa"), pres.parse("bbb"),
                   pres.parse("ababababababab")};  // (ab)^7
  HomSearchResult pruned = enumerate_homs(pres, 7);

  const GroupPSL2& g = GroupPSL2::get(7);
  long n = g.order();
  auto eval = [&](const Word& w, int A, int B) {
    int img[2] = {A, B};
    int acc = g.identity();
    for (const Letter& l : w.letters())
      acc = g.mul(acc, l.sign > 0 ? img[l.gen] : g.inv(img[l.gen]));
    return acc;
  };
  long raw = 0, raw_surj = 0;
  std::set<std::vector<int>> aut_keys, inner_keys;
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      bool ok = true;
      for (const Word& r : pres.relators)
        if (eval(r, A, B) != g.identity()) {
          ok = false;
          break;
        }
      if (!ok) continue;
      ++raw;
      std::vector<ProjMat> imgs = {g.at(A), g.at(B)};
      aut_keys.insert(aut_canonical_key(imgs));
      inner_keys.insert(inner_canonical_key(imgs));
      if (static_cast<long>(g.closure({A, B}).size()) == n) ++raw_surj;
    }
  CHECK(pruned.raw_hom_count == raw);
  CHECK(pruned.raw_surjection_count == raw_surj);
  CHECK(static_cast<long>(pruned.classes.size()) == static_cast<long>(aut_keys.size()));
  long inner_total = 0;
  for (const HomRecord& h : pruned.classes) inner_total += h.inner_classes;
  CHECK(inner_total == static_cast<long>(inner_keys.size()));
}

TEST_CASE("p-rep classification of the published reductions") {
  FixtureBundle k11 = load_bundle(kFixtures + "/k11n116.bundle.json");
  HomRecord h;
  h.ell = 7;
  h.images = published_rho7(k11);
  h.surjective = true;
  classify_p_rep(h, k11.pres);
  CHECK(h.p_rep);
  REQUIRE(h.cusp_info.size() == 1);
  CHECK(h.cusp_info[0].image_order == 7);
  CHECK(h.cusp_info[0].all_parabolic);

  FixtureBundle l9 = load_bundle(kFixtures + "/l9a21.bundle.json");
  HomRecord h2;
  h2.ell = 7;
  h2.images = published_rho7(l9);
  classify_p_rep(h2, l9.pres);
  CHECK(h2.p_rep);
  REQUIRE(h2.cusp_info.size() == 2);
  for (const CuspImageInfo& info : h2.cusp_info) CHECK(info.p_rep_cusp());

  // a map killing the peripheral subgroup is not a p-rep
  Presentation toy;
  toy.generators = {'a', 'b'};
  toy.cusps.push_back({toy.parse("a"), toy.parse("a")});
  HomRecord triv;
  triv.ell = 7;
  triv.images = {proj_identity(7), proj_mat(7, 1, 1, 0, 1)};
  classify_p_rep(triv, toy);
  CHECK_FALSE(triv.p_rep);
  CHECK_FALSE(triv.cusp_info[0].nontrivial);
}

TEST_CASE("p-good classification builds both Sunada covers") {
  FixtureBundle k11 = load_bundle(kFixtures + "/k11n116.bundle.json");
  HomSearchResult res = enumerate_homs(k11.pres, 7);

  long good = 0, good_inner = 0;
  for (const HomRecord& h : res.classes) {
    if (!h.surjective) {
      GoodRepReport rep = classify_p_good(h, k11.pres);
      CHECK_FALSE(rep.p_good);
      CHECK(rep.failed_condition == "not surjective");
      continue;
    }
    GoodRepReport rep = classify_p_good(h, k11.pres);
    if (rep.p_good) {
      ++good;
      good_inner += h.inner_classes;
      CHECK(rep.cover1.cusp_count == 1);
      CHECK(rep.cover2.cusp_count == 1);
      CHECK(rep.homologies_equal);
      CHECK(rep.cover1.homology == make_invariants({2, 110, 0}));
    } else {
      CHECK(rep.failed_condition == "cover not 1-cusped");
      CHECK((rep.cover1.cusp_count != 1 || rep.cover2.cusp_count != 1));
    }
  }
  CHECK(good == 1);        // one Aut-class of 7-good surjections
  CHECK(good_inner == 2);  // two conjugacy classes, swapped by the outer automorphism
}

TEST_CASE("the two 7-good conjugacy classes merge under the outer automorphism") {
  FixtureBundle k11 = load_bundle(kFixtures + "/k11n116.bundle.json");
  const GroupPSL2& g = GroupPSL2::get(7);
  std::vector<ProjMat> rho = published_rho7(k11);
  std::vector<ProjMat> outer;
  for (const ProjMat& m : rho) outer.push_back(g.at(g.outer_conj(g.index_of(m))));
  CHECK(inner_canonical_key(rho) != inner_canonical_key(outer));
  CHECK(aut_canonical_key(rho) == aut_canonical_key(outer));
}
