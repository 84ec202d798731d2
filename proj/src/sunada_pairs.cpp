#include "sunada/sunada_pairs.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace sunada {

bool SubgroupRecord::contains(int elt) const {
  return std::binary_search(elements.begin(), elements.end(), elt);
}

std::vector<int> conjugate_subgroup(const GroupPSL2& g, const std::vector<int>& elements, int by) {
  std::vector<int> out;
  out.reserve(elements.size());
  for (int x : elements) out.push_back(g.conj(by, x));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<SubgroupRecord> compute_index_p_subgroups(int p) {
  const GroupPSL2& g = GroupPSL2::get(p);
  long n = g.order();
  if (n % p != 0) return {};
  long target = n / p;

  // Exhaustive sweep over unordered pairs; closures are abandoned as soon
  // as they exceed the target order.
  std::set<std::vector<int>> found;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<int> cl = g.closure({i, j}, target);
      if (!cl.empty() && static_cast<long>(cl.size()) == target) found.insert(std::move(cl));
    }

  // Group the distinct subgroups into conjugacy classes; the class
  // representative is the lexicographically smallest member.
  std::vector<std::vector<int>> subgroups(found.begin(), found.end());
  std::vector<char> used(subgroups.size(), 0);
  std::vector<SubgroupRecord> out;
  for (std::size_t s = 0; s < subgroups.size(); ++s) {
    if (used[s]) continue;
    std::set<std::vector<int>> orbit;
    for (long c = 0; c < n; ++c) orbit.insert(conjugate_subgroup(g, subgroups[s], static_cast<int>(c)));
    for (std::size_t t = s; t < subgroups.size(); ++t)
      if (!used[t] && orbit.count(subgroups[t])) used[t] = 1;
    SubgroupRecord rec;
    rec.p = p;
    rec.elements = *orbit.begin();
    rec.order = target;
    rec.index = p;
    rec.conj_class_id = static_cast<int>(out.size());
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<SubgroupRecord> index_p_subgroups(int p) {
  static std::mutex mu;
  static std::map<int, std::vector<SubgroupRecord>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, compute_index_p_subgroups(p)).first;
  return it->second;
}

AlmostConjugateResult almost_conjugate(const SubgroupRecord& h1, const SubgroupRecord& h2,
                                       const ConjClassTable& classes) {
  if (h1.p != h2.p || h1.p != classes.p)
    throw Psl2Error("almost_conjugate requires subgroups of the same PSL(2,p)");
  const GroupPSL2& g = GroupPSL2::get(h1.p);

  AlmostConjugateResult res;
  std::vector<ClassCount> counts;
  for (int c = 0; c < classes.num_classes(); ++c) counts.push_back({c, 0, 0});
  for (int x : h1.elements) ++counts[static_cast<std::size_t>(classes.class_of[static_cast<std::size_t>(x)])].in_h1;
  for (int x : h2.elements) ++counts[static_cast<std::size_t>(classes.class_of[static_cast<std::size_t>(x)])].in_h2;
  for (const ClassCount& cc : counts)
    if (cc.in_h1 != cc.in_h2) {
      res.refusal = AlmostConjugateResult::Refusal::CountsDiffer;
      res.failing_class = cc.class_id;
      return res;
    }

  for (long c = 0; c < g.order(); ++c)
    if (conjugate_subgroup(g, h1.elements, static_cast<int>(c)) == h2.elements) {
      res.refusal = AlmostConjugateResult::Refusal::Conjugate;
      return res;
    }

  SunadaCertificate cert;
  cert.h1 = h1;
  cert.h2 = h2;
  cert.counts = std::move(counts);
  cert.exhaustive_nonconjugacy = true;
  res.certificate = std::move(cert);
  return res;
}

bool outer_swap_check(const SubgroupRecord& h1, const SubgroupRecord& h2) {
  if (h1.p != h2.p) throw Psl2Error("outer_swap_check requires subgroups of the same PSL(2,p)");
  const GroupPSL2& g = GroupPSL2::get(h1.p);
  std::vector<int> swapped;
  swapped.reserve(h1.elements.size());
  for (int x : h1.elements) swapped.push_back(g.outer_conj(x));
  std::sort(swapped.begin(), swapped.end());
  for (long c = 0; c < g.order(); ++c)
    if (conjugate_subgroup(g, swapped, static_cast<int>(c)) == h2.elements) return true;
  return false;
}

}  // namespace sunada
