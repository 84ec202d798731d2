#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sunada/psl2.hpp"
#include "sunada/sunada_pairs.hpp"
#include "sunada/words.hpp"
#include "sunada/zlinalg.hpp"

namespace sunada {

struct EnumerationLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FpGroupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The action of a finitely presented group on the right cosets of a
// finite-index subgroup. Complete and collapsed: every generator acts by a
// bijection, the action is transitive, every relator acts trivially, and
// the defining subgroup generators fix the base coset.
struct CosetTable {
  int ngens = 0;
  int degree = 0;
  int base = 0;
  // act[2*g] is the permutation of generator g, act[2*g+1] its inverse.
  std::vector<std::vector<int>> act;

  int apply(int coset, const Letter& l) const {
    return act[static_cast<std::size_t>(2 * l.gen + (l.sign > 0 ? 0 : 1))][static_cast<std::size_t>(coset)];
  }
  int apply_word(int coset, const Word& w) const;
  std::vector<int> perm_of(const Word& w) const;  // coset -> coset under w

  // Flattened table relabeled by breadth-first appearance from `start`;
  // minimizing over starts gives a conjugation-invariant canonical form.
  std::vector<int> standard_flat(int start) const;
  std::vector<int> canonical_form() const;

  // Checks the table invariants against a presentation and subgroup
  // generators, independently of how the table was built.
  void validate(const Presentation& pres, const std::vector<Word>& subgroup_gens) const;
};

// HLT-style Todd-Coxeter with coincidence handling and a lookahead collapse
// pass under memory pressure. Deterministic coset numbering by
// first-definition order. Throws EnumerationLimit if more than `coset_limit`
// cosets would be defined (never returns a wrong table). The default limit
// honors the SUNADA_COSET_LIMIT environment variable.
CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup_gens,
                           long coset_limit = -1);

// Permutation image of the action: the subgroup of S_degree generated by the
// generator permutations, enumerated by closure. `cap` bounds the closure
// (image groups in scope are small); exceeding it is an error.
struct PermImage {
  int degree = 0;
  int base = 0;
  std::vector<std::vector<int>> gen_perms;  // one per presentation generator
  std::vector<std::vector<int>> elements;   // sorted, closure of the generators
  long order = 0;
};

PermImage perm_image(const CosetTable& table, long cap = 1000000);

// |(conjugacy class of the word's image) ∩ (image of the subgroup)|.
// The subgroup's image equals the stabilizer of the base coset: the action
// kernel is the core of the subgroup, so the subgroup surjects onto that
// stabilizer. The subgroup generators are checked to land in it.
long class_meets_subgroup(const PermImage& image, const CosetTable& table, const Word& element_word,
                          const std::vector<Word>& subgroup_gens);

// First homology of the subgroup/cover carried by a complete table:
// Reidemeister-Schreier rewriting along a Schreier transversal, then Smith
// normal form of the abelianized relation matrix, which has
// degree * |relators| rows and degree * (ngens - 1) + 1 columns.
IntMatrix schreier_relation_matrix(const CosetTable& table, const Presentation& pres);
AbelianInvariants rewrite_homology(const CosetTable& table, const Presentation& pres);

// Words generating the subgroup the table describes (Schreier generators of
// the non-tree edges). Feeding them back to coset_enumerate reproduces the
// table up to relabeling.
std::vector<Word> schreier_generators(const CosetTable& table, const Presentation& pres);

// The cover of a presented group pulled back from a homomorphism onto
// PSL(2,p) and a subgroup H: the action on cosets of H composed with the
// homomorphism. Cusp count is the number of orbits of each cusp's
// peripheral image on the cosets, summed over declared cusps.
struct CoverRecord {
  CosetTable table;
  int cusp_count = 0;  // 0 when the presentation declares no cusps
  AbelianInvariants homology;
};

CoverRecord pullback_cover(const Presentation& pres, const std::vector<ProjMat>& images,
                           const SubgroupRecord& subgroup);

// Cusp count of an arbitrary cover given by a complete table.
int cover_cusp_count(const CosetTable& table, const Presentation& pres);

// All conjugacy classes of subgroups of index exactly n: systematic
// backtracking over partial coset tables in standard form, with a minimal-
// relabeling canonicity test. Deterministic order.
std::vector<CosetTable> low_index_subgroups(const Presentation& pres, int n);

}  // namespace sunada
