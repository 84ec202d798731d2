#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "sunada/psl2.hpp"
#include "sunada/zlinalg.hpp"

namespace sunada {

struct NumfieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Q[t]/(f) for a monic integer polynomial f, coefficients ascending.
struct NumberField {
  std::vector<Int> min_poly;
  int degree() const { return static_cast<int>(min_poly.size()) - 1; }
  void validate() const;  // monic, degree >= 1
};

// Element of Z[t]/(f): integer polynomial of degree < deg f, ascending.
struct FieldElem {
  std::vector<Int> coeffs;
  friend bool operator==(const FieldElem&, const FieldElem&) = default;
  bool is_zero() const { return coeffs.empty(); }
  std::string str() const;
};

FieldElem fe_const(long v);
FieldElem fe_from(std::vector<long> ascending);
FieldElem fe_add(const FieldElem& a, const FieldElem& b);
FieldElem fe_sub(const FieldElem& a, const FieldElem& b);
FieldElem fe_neg(const FieldElem& a);
// Product reduced mod f (exact division by the monic modulus).
FieldElem fe_mul(const NumberField& k, const FieldElem& a, const FieldElem& b);
// Evaluation at t = root over F_ell.
long fe_eval_mod(const FieldElem& a, long ell, long root);

// 2x2 matrix over Z[t]/(f).
struct NFMatrix {
  std::array<FieldElem, 4> e;  // row-major
  friend bool operator==(const NFMatrix&, const NFMatrix&) = default;
};

NFMatrix nf_identity();
NFMatrix nf_mul(const NumberField& k, const NFMatrix& x, const NFMatrix& y);
FieldElem nf_det(const NumberField& k, const NFMatrix& m);
// Inverse via the adjugate; requires det == 1.
NFMatrix nf_inv(const NumberField& k, const NFMatrix& m);
// Identity in PSL(2, Z[t]/(f)): m == I or m == -I.
bool nf_is_proj_identity(const NFMatrix& m);

// disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f), computed exactly via a
// fraction-free (Bareiss) determinant of the Sylvester matrix.
Int poly_discriminant(const std::vector<Int>& f);
Int resultant(const std::vector<Int>& f, const std::vector<Int>& g);

struct SplittingReport {
  long prime = 0;
  std::vector<int> factor_degrees;  // sorted multiset; sums to deg f
  std::vector<long> degree_one_roots;  // sorted residues r with f(r) == 0 mod ell
};

// Degrees of the irreducible factors of f mod ell (distinct-degree
// factorization) plus the degree-one roots. Requires ell unramified,
// i.e. ell does not divide disc(f).
SplittingReport split_prime(const NumberField& k, long ell);

// Reduces a matrix over Z[t]/(f) at a degree-one prime (ell, t - root):
// evaluate every entry at t = root mod ell. The result must have
// determinant 1; anything else signals a corrupted fixture.
ProjMat reduce_matrix(const NumberField& k, const NFMatrix& m, long ell, long root);

// Exact matrices for a geometric representation: one matrix per generator,
// optionally one meridian/longitude pair per cusp.
struct ExactMatrices {
  std::vector<std::pair<std::string, NFMatrix>> generators;
  struct CuspMats {
    NFMatrix meridian, longitude;
  };
  std::vector<CuspMats> peripheral;
};

// JSON loaders (formats documented in the README).
NumberField load_number_field(const std::string& path);
ExactMatrices load_nf_matrices(const std::string& path);

}  // namespace sunada
