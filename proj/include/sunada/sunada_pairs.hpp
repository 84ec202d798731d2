#pragma once

#include <optional>
#include <vector>

#include "sunada/psl2.hpp"

namespace sunada {

// A subgroup of PSL(2,p), stored as a sorted list of element indices into
// GroupPSL2::get(p). Records are canonical class representatives: the
// lexicographically smallest element-set in the conjugacy class.
struct SubgroupRecord {
  int p = 0;
  std::vector<int> elements;
  long order = 0;
  long index = 0;
  int conj_class_id = 0;

  bool contains(int elt) const;
};

// All conjugacy classes of index-p subgroups of PSL(2,p), found by an
// exhaustive closure sweep over unordered pairs of elements. Every subgroup
// of PSL(2,p) is 2-generated (cyclic, dihedral, A4, S4, A5 or Borel), so the
// pair sweep sees every subgroup; this is the documented assumption the
// sweep itself verifies for the orders in range.
std::vector<SubgroupRecord> index_p_subgroups(int p);

struct ClassCount {
  int class_id = 0;
  long in_h1 = 0;
  long in_h2 = 0;
};

struct SunadaCertificate {
  SubgroupRecord h1, h2;
  std::vector<ClassCount> counts;      // one row per conjugacy class of G
  bool exhaustive_nonconjugacy = false;  // no g in G conjugates H1 onto H2
};

struct AlmostConjugateResult {
  enum class Refusal { None, CountsDiffer, Conjugate };
  std::optional<SunadaCertificate> certificate;
  Refusal refusal = Refusal::None;
  int failing_class = -1;  // set when refusal == CountsDiffer
};

// Certifies |C ∩ H1| == |C ∩ H2| on every conjugacy class C and that H1 and
// H2 are not conjugate (checked by conjugating H1 by every group element).
AlmostConjugateResult almost_conjugate(const SubgroupRecord& h1, const SubgroupRecord& h2,
                                       const ConjClassTable& classes);

// True iff conjugation by a determinant-nonresidue matrix (the outer half of
// PGL(2,p)) carries H1 into the conjugacy class of H2.
bool outer_swap_check(const SubgroupRecord& h1, const SubgroupRecord& h2);

// Conjugate subgroup g H g^-1 as a sorted element-index list.
std::vector<int> conjugate_subgroup(const GroupPSL2& g, const std::vector<int>& elements, int by);

}  // namespace sunada
