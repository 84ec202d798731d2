#include "sunada/homsearch.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace sunada {

namespace {

struct LetterIdx {
  int gen;
  bool inv;
};

std::vector<LetterIdx> letters_of(const Word& w) {
  std::vector<LetterIdx> out;
  for (const Letter& l : w.letters()) out.push_back({l.gen, l.sign < 0});
  return out;
}

int eval_indices(const GroupPSL2& g, const std::vector<std::vector<LetterIdx>>& words, std::size_t wi,
                 const std::vector<int>& images) {
  int acc = g.identity();
  for (const LetterIdx& l : words[wi]) {
    int x = images[static_cast<std::size_t>(l.gen)];
    acc = g.mul(acc, l.inv ? g.inv(x) : x);
  }
  return acc;
}

}  // namespace

namespace {

std::vector<int> canonical_key(const std::vector<ProjMat>& images, bool with_outer) {
  if (images.empty()) return {};
  const GroupPSL2& g = GroupPSL2::get(images.front().p);
  std::vector<int> idx;
  for (const ProjMat& m : images) idx.push_back(g.index_of(m));

  auto key_of = [&](const std::vector<int>& tuple) {
    std::vector<int> key;
    key.reserve(tuple.size() * 4);
    for (int i : tuple)
      for (int v : g.at(i).e) key.push_back(v);
    return key;
  };

  std::vector<int> best = key_of(idx);
  std::vector<int> tuple(idx.size());
  for (int outer = 0; outer < (with_outer ? 2 : 1); ++outer) {
    std::vector<int> base = idx;
    if (outer == 1)
      for (int& v : base) v = g.outer_conj(v);
    for (long c = 0; c < g.order(); ++c) {
      for (std::size_t k = 0; k < base.size(); ++k)
        tuple[k] = g.conj(static_cast<int>(c), base[k]);
      std::vector<int> key = key_of(tuple);
      if (key < best) best = std::move(key);
    }
  }
  return best;
}

}  // namespace

std::vector<int> aut_canonical_key(const std::vector<ProjMat>& images) {
  return canonical_key(images, true);
}

std::vector<int> inner_canonical_key(const std::vector<ProjMat>& images) {
  return canonical_key(images, false);
}

HomSearchResult enumerate_homs(const Presentation& pres, int ell) {
  pres.validate();
  int ng = pres.ngens();
  if (ng > 3)
    throw FpGroupError("exhaustive search supports at most 3 generators, presentation has " +
                       std::to_string(ng));
  const GroupPSL2& g = GroupPSL2::get(ell);
  long n = g.order();

  std::vector<std::vector<LetterIdx>> rels;
  for (const Word& w : pres.relators) rels.push_back(letters_of(w));

  const ConjClassTable& classes = g.classes();
  HomSearchResult res;

  // Found relator-satisfying tuples, first generator pinned to class reps.
  std::vector<std::vector<int>> found;
  std::vector<int> images(static_cast<std::size_t>(ng));
  auto relators_ok = [&]() {
    for (std::size_t wi = 0; wi < rels.size(); ++wi)
      if (eval_indices(g, rels, wi, images) != g.identity()) return false;
    return true;
  };

  auto record = [&](long first_class_size) {
    found.push_back(images);
    res.raw_hom_count += first_class_size;
  };

  for (int ci = 0; ci < classes.num_classes(); ++ci) {
    images[0] = classes.representative[static_cast<std::size_t>(ci)];
    long csz = classes.class_size[static_cast<std::size_t>(ci)];
    if (ng == 1) {
      if (relators_ok()) record(csz);
    } else if (ng == 2) {
      for (long x = 0; x < n; ++x) {
        images[1] = static_cast<int>(x);
        if (relators_ok()) record(csz);
      }
    } else {
      for (long x = 0; x < n; ++x) {
        images[1] = static_cast<int>(x);
        for (long y = 0; y < n; ++y) {
          images[2] = static_cast<int>(y);
          if (relators_ok()) record(csz);
        }
      }
    }
  }

  // Deduplicate up to Aut(PSL(2,ell)) = PGL(2,ell) acting by conjugation,
  // tracking how many plain conjugacy classes each Aut-class contains.
  std::map<std::vector<int>, std::vector<int>> by_key;           // aut key -> tuple
  std::map<std::vector<int>, std::set<std::vector<int>>> inner;  // aut key -> inner keys
  for (const std::vector<int>& tuple : found) {
    std::vector<ProjMat> mats;
    for (int i : tuple) mats.push_back(g.at(i));
    std::vector<int> key = aut_canonical_key(mats);
    inner[key].insert(inner_canonical_key(mats));
    by_key.emplace(std::move(key), tuple);
  }

  // Raw surjection count over the full G^k space: each found tuple with
  // first image in class C accounts for |C| homomorphisms.
  for (const std::vector<int>& tuple : found) {
    std::vector<int> cl = g.closure(tuple);
    if (static_cast<long>(cl.size()) == n) {
      res.raw_surjection_count +=
          classes.class_size[static_cast<std::size_t>(classes.class_of[static_cast<std::size_t>(tuple[0])])];
    }
  }

  for (auto& [key, tuple] : by_key) {
    HomRecord rec;
    rec.ell = ell;
    for (int i : tuple) rec.images.push_back(g.at(i));
    std::vector<int> cl = g.closure(tuple);
    rec.surjective = static_cast<long>(cl.size()) == n;
    rec.inner_classes = static_cast<long>(inner[key].size());
    classify_p_rep(rec, pres);
    rec.aut_class_id = static_cast<int>(res.classes.size());
    if (rec.surjective) {
      ++res.surjective_classes;
      res.surjective_inner_classes += rec.inner_classes;
    }
    res.classes.push_back(std::move(rec));
  }
  return res;
}

void classify_p_rep(HomRecord& h, const Presentation& pres) {
  const GroupPSL2& g = GroupPSL2::get(h.ell);
  h.cusp_info.clear();
  bool all = !pres.cusps.empty();
  for (const Cusp& cusp : pres.cusps) {
    ProjMat id = proj_identity(h.ell);
    auto mul = [](const ProjMat& a, const ProjMat& b) { return multiply(a, b); };
    auto inv = [](const ProjMat& a) { return inverse(a); };
    ProjMat mu = evaluate_word(cusp.meridian, h.images, id, mul, inv);
    ProjMat la = evaluate_word(cusp.longitude, h.images, id, mul, inv);
    std::vector<int> peripheral = g.closure({g.index_of(mu), g.index_of(la)});
    CuspImageInfo info;
    info.image_order = static_cast<long>(peripheral.size());
    info.nontrivial = info.image_order > 1;
    info.all_parabolic = true;
    for (int e : peripheral)
      if (e != g.identity() && !is_parabolic(g.at(e))) info.all_parabolic = false;
    all = all && info.p_rep_cusp();
    h.cusp_info.push_back(info);
  }
  h.p_rep = all;
}

GoodRepReport classify_p_good(const HomRecord& h, const Presentation& pres) {
  GoodRepReport report;
  report.hom = h;
  if (!h.surjective) {
    report.failed_condition = "not surjective";
    return report;
  }
  std::vector<SubgroupRecord> subgroups = index_p_subgroups(h.ell);
  if (subgroups.size() != 2)
    throw Psl2Error("PSL(2," + std::to_string(h.ell) + ") has no Sunada pair of index-" +
                    std::to_string(h.ell) + " subgroups");
  report.cover1 = pullback_cover(pres, h.images, subgroups[0]);
  report.cover2 = pullback_cover(pres, h.images, subgroups[1]);
  report.homologies_equal = report.cover1.homology == report.cover2.homology;
  if (report.cover1.cusp_count != 1 || report.cover2.cusp_count != 1) {
    report.failed_condition = "cover not 1-cusped";
    return report;
  }
  report.p_good = true;
  return report;
}

}  // namespace sunada
