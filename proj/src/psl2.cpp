#include "sunada/psl2.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace sunada {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

constexpr int kMaxTablePrime = 13;

}  // namespace

PrimeField::PrimeField(int p_in) : p(p_in) {
  if (!is_prime(p)) throw Psl2Error("modulus " + std::to_string(p) + " is not prime");
}

std::string ProjMat::str() const {
  std::ostringstream out;
  out << "[[" << e[0] << "," << e[1] << "],[" << e[2] << "," << e[3] << "]] mod " << p;
  return out.str();
}

ProjMat proj_mat(int p, long a, long b, long c, long d) {
  PrimeField f(p);
  ProjMat m;
  m.p = p;
  m.e = {static_cast<int>(f.reduce(a)), static_cast<int>(f.reduce(b)),
         static_cast<int>(f.reduce(c)), static_cast<int>(f.reduce(d))};
  long det = f.reduce(static_cast<long>(m.e[0]) * m.e[3] - static_cast<long>(m.e[1]) * m.e[2]);
  if (det != 1)
    throw Psl2Error("matrix " + m.str() + " has determinant " + std::to_string(det) + ", expected 1");
  if (p > 2) {
    int half = (p - 1) / 2;
    for (int v : m.e) {
      if (v == 0) continue;
      if (v > half)
        for (int& x : m.e) x = x == 0 ? 0 : p - x;
      break;
    }
  }
  return m;
}

ProjMat proj_identity(int p) { return proj_mat(p, 1, 0, 0, 1); }

ProjMat multiply(const ProjMat& x, const ProjMat& y) {
  if (x.p != y.p)
    throw Psl2Error("mismatched moduli " + std::to_string(x.p) + " and " + std::to_string(y.p));
  long a = static_cast<long>(x.e[0]) * y.e[0] + static_cast<long>(x.e[1]) * y.e[2];
  long b = static_cast<long>(x.e[0]) * y.e[1] + static_cast<long>(x.e[1]) * y.e[3];
  long c = static_cast<long>(x.e[2]) * y.e[0] + static_cast<long>(x.e[3]) * y.e[2];
  long d = static_cast<long>(x.e[2]) * y.e[1] + static_cast<long>(x.e[3]) * y.e[3];
  return proj_mat(x.p, a, b, c, d);
}

ProjMat inverse(const ProjMat& x) {
  // det == 1, so the inverse is the adjugate.
  return proj_mat(x.p, x.e[3], -x.e[1], -x.e[2], x.e[0]);
}

std::pair<int, int> trace_pair(const ProjMat& x) {
  int t = (x.e[0] + x.e[3]) % x.p;
  int s = (x.p - t) % x.p;
  return {std::min(t, s), std::max(t, s)};
}

bool is_parabolic(const ProjMat& x) {
  if (x == proj_identity(x.p)) return false;
  long t = x.e[0] + x.e[3];
  return (t * t - 4) % x.p == 0;
}

GroupPSL2::GroupPSL2(int p) : p_(p) {
  PrimeField f(p);
  if (p > kMaxTablePrime)
    throw Psl2Error("group tables unsupported for p = " + std::to_string(p) +
                    " (max " + std::to_string(kMaxTablePrime) + ")");

  // Canonical elements in lexicographic (a,b,c,d) order.
  std::size_t codes = static_cast<std::size_t>(p) * p * p * p;
  code_to_index_.assign(codes, -1);
  int half = p > 2 ? (p - 1) / 2 : 1;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int d = 0; d < p; ++d) {
          long det = (static_cast<long>(a) * d - static_cast<long>(b) * c) % p;
          if (det < 0) det += p;
          if (det != 1) continue;
          int first = a != 0 ? a : b != 0 ? b : c != 0 ? c : d;
          if (p > 2 && first > half) continue;
          ProjMat m;
          m.p = p;
          m.e = {a, b, c, d};
          std::size_t code = ((static_cast<std::size_t>(a) * p + b) * p + c) * p + d;
          code_to_index_[code] = static_cast<int>(elements_.size());
          elements_.push_back(m);
        }
  n_ = elements_.size();
  long expected = static_cast<long>(p) * (static_cast<long>(p) * p - 1) / (p > 2 ? 2 : 1);
  if (static_cast<long>(n_) != expected)
    throw Psl2Error("internal: enumerated " + std::to_string(n_) + " elements, expected " +
                    std::to_string(expected));

  mult_.resize(n_ * n_);
  inv_.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    inv_[i] = static_cast<uint16_t>(index_of(inverse(elements_[i])));
    for (std::size_t j = 0; j < n_; ++j)
      mult_[i * n_ + j] = static_cast<uint16_t>(index_of(multiply(elements_[i], elements_[j])));
  }
  id_ = index_of(proj_identity(p));

  // Conjugation orbits. The transvections generate PSL(2,p), so conjugating
  // by them alone sweeps out full classes.
  std::vector<int> gens = {index_of(proj_mat(p, 1, 1, 0, 1)), index_of(proj_mat(p, 1, 0, 1, 1))};
  classes_.p = p;
  classes_.class_of.assign(n_, -1);
  for (std::size_t i = 0; i < n_; ++i) {
    if (classes_.class_of[i] != -1) continue;
    int cid = classes_.num_classes();
    classes_.representative.push_back(static_cast<int>(i));
    long size = 0;
    std::vector<int> stack = {static_cast<int>(i)};
    classes_.class_of[i] = cid;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      ++size;
      for (int g : gens) {
        int y = conj(g, x);
        if (classes_.class_of[static_cast<std::size_t>(y)] == -1) {
          classes_.class_of[static_cast<std::size_t>(y)] = cid;
          stack.push_back(y);
        }
      }
    }
    classes_.class_size.push_back(size);
  }

  // Conjugation by diag(nu,1) for a quadratic nonresidue nu realizes the
  // outer half of PGL(2,p) on PSL(2,p).
  int nu = -1;
  for (int v = 2; v < p && nu < 0; ++v) {
    bool square = false;
    for (int w = 1; w < p; ++w)
      if (w * w % p == v) square = true;
    if (!square) nu = v;
  }
  outer_conj_.resize(n_);
  if (nu < 0) {
    for (std::size_t i = 0; i < n_; ++i) outer_conj_[i] = static_cast<uint16_t>(i);
  } else {
    // m X m^-1 with m = diag(nu,1): entries (a, nu*b, c/nu, d); det unchanged.
    long nu_inv = 1;
    for (int w = 1; w < p; ++w)
      if (static_cast<long>(w) * nu % p == 1) nu_inv = w;
    for (std::size_t i = 0; i < n_; ++i) {
      const ProjMat& m = elements_[i];
      ProjMat c = proj_mat(p_, m.e[0], static_cast<long>(nu) * m.e[1],
                           nu_inv * m.e[2], m.e[3]);
      outer_conj_[i] = static_cast<uint16_t>(index_of(c));
    }
  }
}

int GroupPSL2::index_of(const ProjMat& m) const {
  if (m.p != p_) throw Psl2Error("element modulus does not match group");
  std::size_t code =
      ((static_cast<std::size_t>(m.e[0]) * p_ + m.e[1]) * p_ + m.e[2]) * p_ + m.e[3];
  int idx = code_to_index_[code];
  if (idx < 0) throw Psl2Error("matrix " + m.str() + " is not canonical");
  return idx;
}

const GroupPSL2& GroupPSL2::get(int p) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GroupPSL2>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it == cache.end())
    it = cache.emplace(p, std::unique_ptr<GroupPSL2>(new GroupPSL2(p))).first;
  return *it->second;
}

std::vector<int> GroupPSL2::closure(const std::vector<int>& gens, long cap) const {
  if (gens.empty()) throw Psl2Error("closure of an empty generating set");
  std::vector<char> seen(n_, 0);
  std::vector<int> members;
  std::vector<int> queue;
  auto push = [&](int x) {
    if (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = 1;
      members.push_back(x);
      queue.push_back(x);
    }
  };
  push(id_);
  for (int g : gens) push(g);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (int g : gens) {
      push(mul(x, g));
      if (cap >= 0 && static_cast<long>(members.size()) > cap) return {};
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<ProjMat> enumerate_group(int p) { return GroupPSL2::get(p).elements(); }

ConjClassTable conjugacy_classes(int p) { return GroupPSL2::get(p).classes(); }

std::vector<ProjMat> closure(const std::vector<ProjMat>& generators) {
  if (generators.empty()) throw Psl2Error("closure of an empty generating set");
  int p = generators.front().p;
  const GroupPSL2& g = GroupPSL2::get(p);
  std::vector<int> idx;
  for (const ProjMat& m : generators) idx.push_back(g.index_of(m));
  std::vector<ProjMat> out;
  for (int i : g.closure(idx)) out.push_back(g.at(i));
  return out;
}

}  // namespace sunada
