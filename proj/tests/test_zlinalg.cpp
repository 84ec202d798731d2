#include <doctest.h>

#include <random>

#include "sunada/zlinalg.hpp"

using namespace sunada;

namespace {

IntMatrix from_rows(std::vector<std::vector<long>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

std::vector<Int> diag_of(std::vector<long> v) {
  std::vector<Int> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Oracle: d_1 * ... * d_k = gcd of all k x k minors. Only sensible for tiny
// matrices; determinants by Laplace expansion.
Int minor_det(const IntMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::size_t k = rows.size();
  if (k == 1) return m.at(rows[0], cols[0]);
  Int acc = 0;
  int sign = 1;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    std::vector<int> sub_cols;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) sub_cols.push_back(cols[j]);
    acc += sign * m.at(rows[0], cols[i]) * minor_det(m, sub_rows, sub_cols);
    sign = -sign;
  }
  return acc;
}

void subsets(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(static_cast<std::size_t>(k));
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur[static_cast<std::size_t>(depth)] = i;
      self(self, i + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
}

std::vector<Int> minors_oracle(const IntMatrix& m) {
  int n = std::min(m.rows, m.cols);
  std::vector<Int> gcds(static_cast<std::size_t>(n), Int(0));
  for (int k = 1; k <= n; ++k) {
    std::vector<std::vector<int>> rsets, csets;
    subsets(m.rows, k, rsets);
    subsets(m.cols, k, csets);
    Int g = 0;
    for (const auto& rs : rsets)
      for (const auto& cs : csets) g = gcd(g, minor_det(m, rs, cs));
    gcds[static_cast<std::size_t>(k - 1)] = g;
    if (g == 0) break;  // all higher minors vanish too
  }
  std::vector<Int> d(static_cast<std::size_t>(n), Int(0));
  Int prev = 1;
  for (int k = 0; k < n; ++k) {
    if (gcds[static_cast<std::size_t>(k)] == 0) break;
    d[static_cast<std::size_t>(k)] = gcds[static_cast<std::size_t>(k)] / prev;
    prev = gcds[static_cast<std::size_t>(k)];
  }
  return d;
}

IntMatrix random_matrix(std::mt19937& rng, int max_dim, long max_entry) {
  std::uniform_int_distribution<int> dim(1, max_dim);
  std::uniform_int_distribution<long> entry(-max_entry, max_entry);
  IntMatrix m(dim(rng), dim(rng));
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) m.at(r, c) = entry(rng);
  return m;
}

// random elementary row/column operations keep the SNF fixed
IntMatrix unimodular_shuffle(std::mt19937& rng, IntMatrix m, int steps) {
  std::uniform_int_distribution<int> which(0, 3), coeff(-3, 3);
  for (int s = 0; s < steps; ++s) {
    switch (which(rng)) {
      case 0: {
        if (m.rows < 2) break;
        std::uniform_int_distribution<int> pick(0, m.rows - 1);
        int i = pick(rng), j = pick(rng);
        if (i == j) break;
        long q = coeff(rng);
        for (int c = 0; c < m.cols; ++c) m.at(i, c) += q * m.at(j, c);
        break;
      }
      case 1: {
        if (m.cols < 2) break;
        std::uniform_int_distribution<int> pick(0, m.cols - 1);
        int i = pick(rng), j = pick(rng);
        if (i == j) break;
        long q = coeff(rng);
        for (int r = 0; r < m.rows; ++r) m.at(r, i) += q * m.at(r, j);
        break;
      }
      case 2: {
        std::uniform_int_distribution<int> pick(0, m.rows - 1);
        int i = pick(rng);
        for (int c = 0; c < m.cols; ++c) m.at(i, c) = -m.at(i, c);
        break;
      }
      default: {
        std::uniform_int_distribution<int> pick(0, m.cols - 1);
        int i = pick(rng);
        for (int r = 0; r < m.rows; ++r) m.at(r, i) = -m.at(r, i);
        break;
      }
    }
  }
  return m;
}

}  // namespace

TEST_CASE("smith normal form on the textbook cases") {
  CHECK(smith_normal_form(from_rows({{2, 0}, {0, 3}})) == diag_of({1, 6}));
  CHECK(smith_normal_form(from_rows({{0, 0}, {0, 0}, {0, 0}})) == diag_of({0, 0}));
  CHECK(smith_normal_form(from_rows({{1, 0}, {0, 1}})) == diag_of({1, 1}));
  CHECK(smith_normal_form(from_rows({{4}})) == diag_of({4}));
}

TEST_CASE("smith normal form agrees with the minors oracle on random matrices") {
  std::mt19937 rng(101);
  for (int i = 0; i < 150; ++i) {
    IntMatrix m = random_matrix(rng, 5, 9);
    CHECK(smith_normal_form(m) == minors_oracle(m));
  }
}

TEST_CASE("smith normal form is invariant under unimodular transformations") {
  std::mt19937 rng(103);
  for (int i = 0; i < 100; ++i) {
    IntMatrix m = random_matrix(rng, 5, 9);
    std::vector<Int> d = smith_normal_form(m);
    for (std::size_t k = 1; k < d.size(); ++k)
      if (d[k - 1] != 0) CHECK(d[k] % d[k - 1] == 0);  // divisibility chain
    CHECK(smith_normal_form(unimodular_shuffle(rng, m, 12)) == d);
  }
}

TEST_CASE("abelian invariants: cokernel with suppressed units and free rank") {
  CHECK(abelian_invariants(IntMatrix(0, 0), 1) == make_invariants({0}));
  CHECK(abelian_invariants(from_rows({{2}}), 1) == make_invariants({2}));
  CHECK(abelian_invariants(from_rows({{2, 0}, {0, 1}}), 3) == make_invariants({2, 0}));
  CHECK_THROWS_AS(abelian_invariants(from_rows({{1, 2}}), 1), ZlinalgError);
}

TEST_CASE("invariants print in the additive style") {
  CHECK(make_invariants({2, 110, 0}).str() == "Z/2 + Z/110 + Z");
  CHECK(make_invariants({0}).str() == "Z");
  CHECK(make_invariants({}).str() == "0");
  CHECK(make_invariants({5, 0}).magma_style() == "[ 5, 0 ]");
  CHECK(make_invariants({2, 110, 0}).free_rank() == 1);
}
