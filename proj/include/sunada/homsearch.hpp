#pragma once

#include <string>
#include <vector>

#include "sunada/fpgroups.hpp"
#include "sunada/psl2.hpp"
#include "sunada/sunada_pairs.hpp"
#include "sunada/words.hpp"

namespace sunada {

struct CuspImageInfo {
  long image_order = 0;     // order of <rho(mu), rho(lambda)>
  bool nontrivial = false;
  bool all_parabolic = false;  // every nontrivial element of the image
  bool p_rep_cusp() const { return nontrivial && all_parabolic; }
};

// A homomorphism to PSL(2,ell), one Aut-class representative. A surjective
// Aut-class always contains exactly two conjugacy classes (no automorphism
// other than an inner one fixes a surjection pointwise up to conjugacy),
// which is why counts are reported in both normalizations.
struct HomRecord {
  int ell = 0;
  std::vector<ProjMat> images;  // one per generator
  bool surjective = false;
  bool p_rep = false;
  std::vector<CuspImageInfo> cusp_info;
  int aut_class_id = 0;
  long inner_classes = 1;  // conjugacy classes inside this Aut-class
};

struct HomSearchResult {
  std::vector<HomRecord> classes;  // deduplicated up to Aut(PSL(2,ell)), sorted
  long raw_hom_count = 0;          // relator-satisfying tuples over the full G^k space
  long raw_surjection_count = 0;
  long surjective_classes = 0;        // up to Aut
  long surjective_inner_classes = 0;  // up to conjugacy
};

// Exhaustive search: the first generator ranges over conjugacy-class
// representatives (conjugating a homomorphism moves nothing up to Aut),
// the remaining generators over all of PSL(2,ell); relator evaluation
// short-circuits on the first failure. Results are deduplicated under the
// full PGL(2,ell) conjugation action and ordered by their canonical keys.
// Presentations with more than 3 generators are refused.
HomSearchResult enumerate_homs(const Presentation& pres, int ell);

// Per-cusp peripheral classification: the image of <mu, lambda> must be
// nontrivial with every nontrivial element parabolic (equivalently, cyclic
// of order ell generated by parabolics). Fills cusp_info and p_rep.
void classify_p_rep(HomRecord& h, const Presentation& pres);

struct GoodRepReport {
  HomRecord hom;
  CoverRecord cover1, cover2;  // pullbacks over the two Sunada subgroups
  bool p_good = false;
  bool homologies_equal = false;
  std::string failed_condition;  // empty when p_good
  // Non-isometry of the two covers is a geometric fact outside this
  // library's scope (isometry checking needs hyperbolic-geometry tooling).
  // What is certified here is that the covers arise from the two
  // non-conjugate Sunada subgroups.
  const char* isometry_note = "non-isometry verified externally";
};

// Builds both Sunada covers of a surjective homomorphism; p-good iff both
// are 1-cusped. Reports which condition failed otherwise.
GoodRepReport classify_p_good(const HomRecord& h, const Presentation& pres);

// Canonical key of a generator-image tuple under PGL(2,ell) conjugation;
// equal keys == Aut-equivalent homomorphisms.
std::vector<int> aut_canonical_key(const std::vector<ProjMat>& images);
// Same under PSL(2,ell) conjugation only; equal keys == conjugate.
std::vector<int> inner_canonical_key(const std::vector<ProjMat>& images);

}  // namespace sunada
