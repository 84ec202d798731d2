#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sunada {

struct Psl2Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Prime modulus, checked at construction. Group tables (enumeration,
// multiplication, conjugacy classes) are only built for p <= 13.
struct PrimeField {
  int p;
  explicit PrimeField(int p);
  long reduce(long x) const {
    long r = x % p;
    return r < 0 ? r + p : r;
  }
};

// Element of PSL(2,p): a 2x2 determinant-1 matrix over F_p, canonicalized
// under sign so that the first nonzero entry in scan order (a,b,c,d) lies
// in {1,...,(p-1)/2}. Consequently canon(M) == canon(-M).
struct ProjMat {
  int p = 0;
  std::array<int, 4> e{};  // row-major: a b c d

  friend bool operator==(const ProjMat&, const ProjMat&) = default;
  friend auto operator<=>(const ProjMat&, const ProjMat&) = default;
  std::string str() const;  // "[[a,b],[c,d]] mod p"
};

// Reduces mod p, checks det == 1, canonicalizes the sign.
ProjMat proj_mat(int p, long a, long b, long c, long d);
ProjMat proj_identity(int p);
ProjMat multiply(const ProjMat& x, const ProjMat& y);  // throws on mixed moduli
ProjMat inverse(const ProjMat& x);
// Trace is only defined up to sign in PSL; report the unordered pair {t, p-t}.
std::pair<int, int> trace_pair(const ProjMat& x);
// True iff trace^2 == 4 (mod p) and x is not the identity. Such elements
// have order exactly p.
bool is_parabolic(const ProjMat& x);

struct ConjClassTable {
  int p = 0;
  std::vector<int> representative;  // element index of each class rep
  std::vector<int> class_of;        // element index -> class id
  std::vector<long> class_size;
  int num_classes() const { return static_cast<int>(representative.size()); }
};

// Cached tables for one PSL(2,p): the full element list in a fixed canonical
// order, index-level multiplication/inverse tables, and conjugacy classes.
// Built once on first use, then shared read-only.
class GroupPSL2 {
 public:
  static const GroupPSL2& get(int p);  // p prime, p <= 13

  int p() const { return p_; }
  long order() const { return static_cast<long>(elements_.size()); }
  const std::vector<ProjMat>& elements() const { return elements_; }
  const ProjMat& at(int i) const { return elements_[static_cast<std::size_t>(i)]; }
  int index_of(const ProjMat& m) const;
  int identity() const { return id_; }

  int mul(int x, int y) const { return mult_[static_cast<std::size_t>(x) * n_ + y]; }
  int inv(int x) const { return inv_[static_cast<std::size_t>(x)]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }  // g x g^-1

  const ConjClassTable& classes() const { return classes_; }

  // Smallest-set-closure of a generating set; bails out (returns empty) if
  // the closure exceeds `cap` elements (cap < 0 means no cap).
  std::vector<int> closure(const std::vector<int>& gens, long cap = -1) const;

  // Index of a fixed matrix with non-square determinant lifted to an inner
  // map: outer_conj(x) represents conjugation by diag(nonresidue, 1).
  int outer_conj(int x) const { return outer_conj_[static_cast<std::size_t>(x)]; }

 private:
  explicit GroupPSL2(int p);
  int p_;
  std::size_t n_;
  std::vector<ProjMat> elements_;
  std::vector<int> code_to_index_;  // dense over p^4 encodings, -1 if absent
  std::vector<uint16_t> mult_;
  std::vector<uint16_t> inv_;
  std::vector<uint16_t> outer_conj_;
  int id_;
  ConjClassTable classes_;
};

// Free-function entry points over the cached tables.
std::vector<ProjMat> enumerate_group(int p);
ConjClassTable conjugacy_classes(int p);
std::vector<ProjMat> closure(const std::vector<ProjMat>& generators);

}  // namespace sunada
