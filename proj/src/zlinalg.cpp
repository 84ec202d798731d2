#include "sunada/zlinalg.hpp"

#include <algorithm>
#include <sstream>

namespace sunada {

namespace {

// Finds the nonzero entry of smallest absolute value in m[k.., k..];
// ties go to the earlier row-major position. Returns false if that
// submatrix is zero.
bool find_pivot(const IntMatrix& m, int k, int& pr, int& pc) {
  bool found = false;
  Int best;
  for (int r = k; r < m.rows; ++r)
    for (int c = k; c < m.cols; ++c) {
      const Int& v = m.at(r, c);
      if (v == 0) continue;
      Int av = abs(v);
      if (!found || av < best) {
        found = true;
        best = av;
        pr = r;
        pc = c;
      }
    }
  return found;
}

void swap_rows(IntMatrix& m, int r1, int r2) {
  if (r1 == r2) return;
  for (int c = 0; c < m.cols; ++c) std::swap(m.at(r1, c), m.at(r2, c));
}

void swap_cols(IntMatrix& m, int c1, int c2) {
  if (c1 == c2) return;
  for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, c1), m.at(r, c2));
}

// Quotient minimizing |a - q*b| for b > 0; the remainder ends up in
// [-b/2, b/2], which is what keeps entries from blowing up.
Int nearest_quotient(const Int& a, const Int& b) {
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (2 * r > b) q += 1;
  return q;
}

}  // namespace

std::vector<Int> smith_normal_form(IntMatrix m) {
  int n = std::min(m.rows, m.cols);
  std::vector<Int> diag(static_cast<std::size_t>(n), Int(0));
  int k = 0;
  while (k < n) {
    // Reselect the global smallest pivot after every reduction pass: each
    // pass with leftovers strictly shrinks it, and small pivots keep the
    // row/column operations from amplifying the rest of the matrix.
    int pr = 0, pc = 0;
    if (!find_pivot(m, k, pr, pc)) break;  // remaining block is zero
    swap_rows(m, k, pr);
    swap_cols(m, k, pc);
    if (m.at(k, k) < 0)
      for (int c = k; c < m.cols; ++c) m.at(k, c) = -m.at(k, c);

    bool clean = true;
    for (int r = k + 1; r < m.rows; ++r) {
      if (m.at(r, k) == 0) continue;
      Int q = nearest_quotient(m.at(r, k), m.at(k, k));
      if (q != 0)
        for (int c = k; c < m.cols; ++c) m.at(r, c) -= q * m.at(k, c);
      if (m.at(r, k) != 0) clean = false;
    }
    for (int c = k + 1; c < m.cols; ++c) {
      if (m.at(k, c) == 0) continue;
      Int q = nearest_quotient(m.at(k, c), m.at(k, k));
      if (q != 0)
        for (int r = k; r < m.rows; ++r) m.at(r, c) -= q * m.at(r, k);
      if (m.at(k, c) != 0) clean = false;
    }
    if (!clean) continue;

    // Row and column are clear. Enforce that the pivot divides every
    // remaining entry; otherwise fold the offending row in and repeat.
    bool divides = true;
    for (int r = k + 1; r < m.rows && divides; ++r)
      for (int c = k + 1; c < m.cols && divides; ++c)
        if (!mpz_divisible_p(m.at(r, c).get_mpz_t(), m.at(k, k).get_mpz_t())) {
          for (int cc = k; cc < m.cols; ++cc) m.at(k, cc) += m.at(r, cc);
          divides = false;
        }
    if (!divides) continue;

    diag[static_cast<std::size_t>(k)] = m.at(k, k);
    ++k;
  }
  return diag;
}

long AbelianInvariants::free_rank() const {
  return std::count(factors.begin(), factors.end(), Int(0));
}

std::string AbelianInvariants::str() const {
  if (factors.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const Int& d : factors) {
    if (!first) out << " + ";
    first = false;
    if (d == 0)
      out << "Z";
    else
      out << "Z/" << d.get_str();
  }
  return out.str();
}

std::string AbelianInvariants::magma_style() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < factors.size(); ++i)
    out << (i ? ", " : " ") << factors[i].get_str();
  out << (factors.empty() ? "]" : " ]");
  return out.str();
}

AbelianInvariants make_invariants(std::vector<long> factors) {
  AbelianInvariants inv;
  for (long f : factors) inv.factors.emplace_back(f);
  return inv;
}

AbelianInvariants abelian_invariants(const IntMatrix& relations, int ambient_rank) {
  if (relations.cols > ambient_rank)
    throw ZlinalgError("relation matrix has more columns than the ambient rank");
  std::vector<Int> diag = smith_normal_form(relations);
  AbelianInvariants inv;
  long nonzero = 0;
  for (const Int& d : diag)
    if (d != 0) {
      ++nonzero;
      if (d != 1) inv.factors.push_back(d);
    }
  for (long i = 0; i < ambient_rank - nonzero; ++i) inv.factors.emplace_back(0);
  return inv;
}

}  // namespace sunada
