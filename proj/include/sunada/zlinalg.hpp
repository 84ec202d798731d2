#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace sunada {

using Int = mpz_class;

struct ZlinalgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;  // row-major

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0) {}
  Int& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const Int& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// Diagonal of the Smith normal form: nonnegative d1 | d2 | ... of length
// min(rows, cols). Pivots are chosen smallest-|value|-first, ties broken by
// row-major position, so the routine is deterministic.
std::vector<Int> smith_normal_form(IntMatrix m);

// Invariant factors of an abelian group, with factors of 1 suppressed and
// trailing zeros recording the free rank: (2, 110, 0) is Z/2 + Z/110 + Z.
struct AbelianInvariants {
  std::vector<Int> factors;
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
  long free_rank() const;
  std::string str() const;        // additive style: "Z/2 + Z/110 + Z"
  std::string magma_style() const;  // "[ 2, 110, 0 ]"
};

AbelianInvariants make_invariants(std::vector<long> factors);

// Cokernel of the relation matrix acting on Z^ambient_rank (rows = relations).
AbelianInvariants abelian_invariants(const IntMatrix& relations, int ambient_rank);

}  // namespace sunada
