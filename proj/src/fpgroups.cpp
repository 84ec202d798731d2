#include "sunada/fpgroups.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace sunada {

namespace {

// Letters as table directions: 2*gen for the generator, 2*gen+1 for its
// inverse; d^1 flips direction.
int dir_of(const Letter& l) { return 2 * l.gen + (l.sign > 0 ? 0 : 1); }

std::vector<int> dirs_of(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (const Letter& l : w.letters()) out.push_back(dir_of(l));
  return out;
}

long default_coset_limit() {
  if (const char* env = std::getenv("SUNADA_COSET_LIMIT")) {
    long v = std::atol(env);
    if (v > 0) return v;
  }
  return 1000000;
}

// HLT coset enumerator with coincidence processing (union-find merging) and
// a deduction-only lookahead pass under table pressure.
struct Enumerator {
  int ngens;
  int ndirs;
  std::vector<std::vector<int>> rels;
  std::vector<std::vector<int>> subs;
  long limit;

  std::vector<std::vector<int>> t;  // t[coset][dir], -1 undefined
  std::vector<int> parent;
  long lookahead_at;

  Enumerator(const Presentation& pres, const std::vector<Word>& subgroup_gens, long lim)
      : ngens(pres.ngens()), ndirs(2 * pres.ngens()), limit(lim) {
    for (const Word& w : pres.relators) rels.push_back(dirs_of(w));
    for (const Word& w : subgroup_gens) subs.push_back(dirs_of(w));
    lookahead_at = std::max<long>(20000, limit / 4);
    new_coset();
  }

  bool alive(int k) const { return parent[static_cast<std::size_t>(k)] == k; }

  int rep(int k) {
    int r = k;
    while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
    while (parent[static_cast<std::size_t>(k)] != k) {
      int next = parent[static_cast<std::size_t>(k)];
      parent[static_cast<std::size_t>(k)] = r;
      k = next;
    }
    return r;
  }

  int new_coset() {
    if (static_cast<long>(t.size()) >= limit)
      throw EnumerationLimit("coset enumeration did not complete within the limit of " +
                             std::to_string(limit) + " cosets");
    t.emplace_back(ndirs, -1);
    parent.push_back(static_cast<int>(t.size()) - 1);
    return static_cast<int>(t.size()) - 1;
  }

  void merge(int a, int b, std::deque<int>& q) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    q.push_back(b);
  }

  void process_coincidence(int a, int b) {
    std::deque<int> q;
    merge(a, b, q);
    while (!q.empty()) {
      int y = q.front();
      q.pop_front();
      for (int d = 0; d < ndirs; ++d) {
        int delta = t[static_cast<std::size_t>(y)][static_cast<std::size_t>(d)];
        if (delta == -1) continue;
        t[static_cast<std::size_t>(y)][static_cast<std::size_t>(d)] = -1;
        if (t[static_cast<std::size_t>(delta)][static_cast<std::size_t>(d ^ 1)] == y)
          t[static_cast<std::size_t>(delta)][static_cast<std::size_t>(d ^ 1)] = -1;
        int mu = rep(y), nu = rep(delta);
        int& fwd = t[static_cast<std::size_t>(mu)][static_cast<std::size_t>(d)];
        if (fwd != -1) {
          merge(nu, fwd, q);
        } else {
          int& bwd = t[static_cast<std::size_t>(nu)][static_cast<std::size_t>(d ^ 1)];
          if (bwd != -1) {
            merge(mu, bwd, q);
          } else {
            fwd = nu;
            t[static_cast<std::size_t>(nu)][static_cast<std::size_t>(d ^ 1)] = mu;
          }
        }
      }
    }
  }

  int step(int coset, int d) {
    int v = t[static_cast<std::size_t>(coset)][static_cast<std::size_t>(d)];
    return v == -1 ? -1 : rep(v);
  }

  // Scans word w at alpha, filling gaps with new cosets (HLT style).
  void scan_and_fill(int alpha, const std::vector<int>& w, bool fill) {
    int f = alpha, i = 0;
    int b = alpha, j = static_cast<int>(w.size()) - 1;
    for (;;) {
      while (i <= j) {
        int nxt = step(f, w[static_cast<std::size_t>(i)]);
        if (nxt == -1) break;
        f = nxt;
        ++i;
      }
      if (i > j) {
        if (f != b) process_coincidence(f, b);
        return;
      }
      while (j >= i) {
        int nxt = step(b, w[static_cast<std::size_t>(j)] ^ 1);
        if (nxt == -1) break;
        b = nxt;
        --j;
      }
      if (j < i) {
        if (f != b) process_coincidence(f, b);
        return;
      }
      if (i == j) {  // deduction closes the cycle
        t[static_cast<std::size_t>(f)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = b;
        t[static_cast<std::size_t>(b)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)] ^ 1)] = f;
        return;
      }
      if (!fill) return;
      int beta = new_coset();
      t[static_cast<std::size_t>(f)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)])] = beta;
      t[static_cast<std::size_t>(beta)][static_cast<std::size_t>(w[static_cast<std::size_t>(i)] ^ 1)] = f;
      f = beta;
      ++i;
    }
  }

  void lookahead() {
    for (int a = 0; a < static_cast<int>(t.size()); ++a) {
      if (!alive(a)) continue;
      for (const auto& r : rels) {
        if (!alive(a)) break;
        scan_and_fill(rep(a), r, /*fill=*/false);
      }
    }
  }

  bool closed_everywhere() {
    for (int a = 0; a < static_cast<int>(t.size()); ++a) {
      if (!alive(a)) continue;
      for (int d = 0; d < ndirs; ++d)
        if (t[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)] == -1) return false;
    }
    for (int a = 0; a < static_cast<int>(t.size()); ++a) {
      if (!alive(a)) continue;
      for (const auto& r : rels) {
        int c = a;
        for (int d : r) c = step(c, d);
        if (c != a) return false;
      }
    }
    int base = rep(0);
    for (const auto& s : subs) {
      int c = base;
      for (int d : s) c = step(c, d);
      if (c != base) return false;
    }
    return true;
  }

  void run() {
    for (const auto& s : subs) scan_and_fill(rep(0), s, /*fill=*/true);
    for (int sweep = 0; sweep < 64; ++sweep) {
      long before_defs = static_cast<long>(t.size());
      for (int a = 0; a < static_cast<int>(t.size()); ++a) {
        if (!alive(a)) continue;
        for (const auto& r : rels) {
          if (!alive(a)) break;
          scan_and_fill(rep(a), r, /*fill=*/true);
        }
        if (!alive(a)) continue;
        for (int d = 0; d < ndirs; ++d)
          if (t[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)] == -1) {
            int beta = new_coset();
            t[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)] = beta;
            t[static_cast<std::size_t>(beta)][static_cast<std::size_t>(d ^ 1)] = a;
          }
        if (static_cast<long>(t.size()) > lookahead_at && static_cast<long>(t.size()) > 2 * before_defs)
          lookahead();
      }
      if (closed_everywhere()) return;
    }
    throw FpGroupError("internal: coset enumeration failed to stabilize");
  }

  CosetTable finish() {
    std::vector<int> newidx(t.size(), -1);
    int degree = 0;
    for (int a = 0; a < static_cast<int>(t.size()); ++a)
      if (alive(a)) newidx[static_cast<std::size_t>(a)] = degree++;
    CosetTable out;
    out.ngens = ngens;
    out.degree = degree;
    out.base = newidx[static_cast<std::size_t>(rep(0))];
    out.act.assign(static_cast<std::size_t>(ndirs), std::vector<int>(static_cast<std::size_t>(degree), -1));
    for (int a = 0; a < static_cast<int>(t.size()); ++a) {
      if (!alive(a)) continue;
      for (int d = 0; d < ndirs; ++d) {
        int raw = t[static_cast<std::size_t>(a)][static_cast<std::size_t>(d)];
        if (raw == -1) throw FpGroupError("internal: incomplete table after enumeration");
        int v = rep(raw);
        out.act[static_cast<std::size_t>(d)][static_cast<std::size_t>(newidx[static_cast<std::size_t>(a)])] =
            newidx[static_cast<std::size_t>(v)];
      }
    }
    return out;
  }
};

}  // namespace

int CosetTable::apply_word(int coset, const Word& w) const {
  int c = coset;
  for (const Letter& l : w.letters()) c = apply(c, l);
  return c;
}

std::vector<int> CosetTable::perm_of(const Word& w) const {
  std::vector<int> out(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) out[static_cast<std::size_t>(i)] = apply_word(i, w);
  return out;
}

std::vector<int> CosetTable::standard_flat(int start) const {
  std::vector<int> label(static_cast<std::size_t>(degree), -1);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(degree));
  label[static_cast<std::size_t>(start)] = 0;
  order.push_back(start);
  for (std::size_t head = 0; head < order.size(); ++head) {
    int o = order[head];
    for (const auto& col : act) {
      int v = col[static_cast<std::size_t>(o)];
      if (label[static_cast<std::size_t>(v)] == -1) {
        label[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
        order.push_back(v);
      }
    }
  }
  if (static_cast<int>(order.size()) != degree)
    throw FpGroupError("coset table is not transitive");
  std::vector<int> flat;
  flat.reserve(order.size() * act.size());
  for (int o : order)
    for (const auto& col : act) flat.push_back(label[static_cast<std::size_t>(col[static_cast<std::size_t>(o)])]);
  return flat;
}

std::vector<int> CosetTable::canonical_form() const {
  std::vector<int> best = standard_flat(0);
  for (int s = 1; s < degree; ++s) best = std::min(best, standard_flat(s));
  return best;
}

void CosetTable::validate(const Presentation& pres, const std::vector<Word>& subgroup_gens) const {
  if (ngens != pres.ngens()) throw FpGroupError("table generator count does not match presentation");
  if (static_cast<int>(act.size()) != 2 * ngens) throw FpGroupError("table has wrong number of columns");
  for (int g = 0; g < ngens; ++g) {
    const auto& fwd = act[static_cast<std::size_t>(2 * g)];
    const auto& bwd = act[static_cast<std::size_t>(2 * g + 1)];
    if (static_cast<int>(fwd.size()) != degree || static_cast<int>(bwd.size()) != degree)
      throw FpGroupError("table column has wrong length");
    for (int i = 0; i < degree; ++i) {
      int v = fwd[static_cast<std::size_t>(i)];
      if (v < 0 || v >= degree || bwd[static_cast<std::size_t>(v)] != i)
        throw FpGroupError("generator action is not a bijection with consistent inverse");
    }
  }
  standard_flat(base);  // throws unless transitive
  for (const Word& r : pres.relators)
    for (int i = 0; i < degree; ++i)
      if (apply_word(i, r) != i)
        throw FpGroupError("relator " + r.str(pres.generators) + " does not act trivially");
  for (const Word& s : subgroup_gens)
    if (apply_word(base, s) != base)
      throw FpGroupError("subgroup generator " + s.str(pres.generators) + " does not fix the base coset");
}

CosetTable coset_enumerate(const Presentation& pres, const std::vector<Word>& subgroup_gens,
                           long coset_limit) {
  pres.validate();
  if (coset_limit <= 0) coset_limit = default_coset_limit();
  Enumerator e(pres, subgroup_gens, coset_limit);
  e.run();
  CosetTable out = e.finish();
  out.validate(pres, subgroup_gens);
  return out;
}

namespace {

std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
  std::vector<int> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[static_cast<std::size_t>(p[i])];
  return r;
}

std::vector<int> perm_inverse(const std::vector<int>& p) {
  std::vector<int> r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return r;
}

}  // namespace

PermImage perm_image(const CosetTable& table, long cap) {
  PermImage img;
  img.degree = table.degree;
  img.base = table.base;
  for (int g = 0; g < table.ngens; ++g) img.gen_perms.push_back(table.act[static_cast<std::size_t>(2 * g)]);

  std::vector<int> id(static_cast<std::size_t>(table.degree));
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> seen;
  std::deque<std::vector<int>> queue;
  seen.insert(id);
  queue.push_back(id);
  while (!queue.empty()) {
    std::vector<int> cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : img.gen_perms) {
      std::vector<int> nxt = compose(cur, g);
      if (seen.insert(nxt).second) {
        if (static_cast<long>(seen.size()) > cap)
          throw FpGroupError("permutation image closure exceeded the cap of " + std::to_string(cap));
        queue.push_back(std::move(nxt));
      }
    }
  }
  img.elements.assign(seen.begin(), seen.end());
  img.order = static_cast<long>(img.elements.size());
  return img;
}

long class_meets_subgroup(const PermImage& image, const CosetTable& table, const Word& element_word,
                          const std::vector<Word>& subgroup_gens) {
  for (const Word& s : subgroup_gens)
    if (table.apply_word(table.base, s) != table.base)
      throw FpGroupError("subgroup generator does not fix the base coset");

  std::vector<int> x = table.perm_of(element_word);

  // Conjugacy class of x in the image group, swept by generator conjugation.
  std::set<std::vector<int>> cls;
  std::deque<std::vector<int>> queue;
  cls.insert(x);
  queue.push_back(x);
  while (!queue.empty()) {
    std::vector<int> cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : image.gen_perms) {
      std::vector<int> conj = compose(compose(perm_inverse(g), cur), g);
      if (cls.insert(conj).second) queue.push_back(std::move(conj));
    }
  }

  // The image of the subgroup is the stabilizer of the base coset.
  long count = 0;
  for (const auto& e : image.elements)
    if (e[static_cast<std::size_t>(image.base)] == image.base && cls.count(e)) ++count;
  return count;
}

namespace {

// Schreier transversal bookkeeping for a complete table: a breadth-first
// spanning tree from the base, and a column index for every non-tree
// (coset, generator) slot.
struct SchreierData {
  std::vector<std::vector<int>> col_of;  // [coset][gen] -> column, -1 on the tree
  std::vector<Word> transversal;         // base * transversal[i] lands on coset i
  int ncols = 0;
};

SchreierData schreier_data(const CosetTable& table) {
  int d = table.degree, g = table.ngens;
  SchreierData sd;
  sd.col_of.assign(static_cast<std::size_t>(d), std::vector<int>(static_cast<std::size_t>(g), -2));
  sd.transversal.assign(static_cast<std::size_t>(d), Word());

  std::vector<char> visited(static_cast<std::size_t>(d), 0);
  std::vector<int> order;
  visited[static_cast<std::size_t>(table.base)] = 1;
  order.push_back(table.base);
  for (std::size_t head = 0; head < order.size(); ++head) {
    int o = order[head];
    for (int dir = 0; dir < 2 * g; ++dir) {
      int v = table.act[static_cast<std::size_t>(dir)][static_cast<std::size_t>(o)];
      if (visited[static_cast<std::size_t>(v)]) continue;
      visited[static_cast<std::size_t>(v)] = 1;
      order.push_back(v);
      Letter l{dir / 2, dir % 2 == 0 ? +1 : -1};
      sd.transversal[static_cast<std::size_t>(v)] = sd.transversal[static_cast<std::size_t>(o)] * Word({l});
      // Mark the positive slot of the tree edge.
      if (dir % 2 == 0)
        sd.col_of[static_cast<std::size_t>(o)][static_cast<std::size_t>(dir / 2)] = -1;
      else
        sd.col_of[static_cast<std::size_t>(v)][static_cast<std::size_t>(dir / 2)] = -1;
    }
  }
  if (static_cast<int>(order.size()) != d) throw FpGroupError("coset table is not transitive");

  for (int i = 0; i < d; ++i)
    for (int gen = 0; gen < g; ++gen)
      if (sd.col_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(gen)] == -2)
        sd.col_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(gen)] = sd.ncols++;
  // Schreier index formula: d*g non-tree-or-tree slots minus d-1 tree edges.
  if (sd.ncols != d * (g - 1) + 1)
    throw FpGroupError("internal: Schreier generator count mismatch");
  return sd;
}

}  // namespace

IntMatrix schreier_relation_matrix(const CosetTable& table, const Presentation& pres) {
  SchreierData sd = schreier_data(table);
  int d = table.degree;
  int nrel = static_cast<int>(pres.relators.size());
  IntMatrix m(d * nrel, sd.ncols);
  int row = 0;
  for (const Word& rel : pres.relators)
    for (int i = 0; i < d; ++i, ++row) {
      int cur = i;
      for (const Letter& l : rel.letters()) {
        if (l.sign > 0) {
          int col = sd.col_of[static_cast<std::size_t>(cur)][static_cast<std::size_t>(l.gen)];
          if (col >= 0) m.at(row, col) += 1;
          cur = table.act[static_cast<std::size_t>(2 * l.gen)][static_cast<std::size_t>(cur)];
        } else {
          int nxt = table.act[static_cast<std::size_t>(2 * l.gen + 1)][static_cast<std::size_t>(cur)];
          int col = sd.col_of[static_cast<std::size_t>(nxt)][static_cast<std::size_t>(l.gen)];
          if (col >= 0) m.at(row, col) -= 1;
          cur = nxt;
        }
      }
      if (cur != i) throw FpGroupError("relator does not close at coset " + std::to_string(i));
    }
  return m;
}

AbelianInvariants rewrite_homology(const CosetTable& table, const Presentation& pres) {
  IntMatrix m = schreier_relation_matrix(table, pres);
  return abelian_invariants(m, m.cols);
}

std::vector<Word> schreier_generators(const CosetTable& table, const Presentation&) {
  SchreierData sd = schreier_data(table);
  std::vector<Word> gens(static_cast<std::size_t>(sd.ncols));
  for (int i = 0; i < table.degree; ++i)
    for (int g = 0; g < table.ngens; ++g) {
      int col = sd.col_of[static_cast<std::size_t>(i)][static_cast<std::size_t>(g)];
      if (col < 0) continue;
      int j = table.act[static_cast<std::size_t>(2 * g)][static_cast<std::size_t>(i)];
      Word w = sd.transversal[static_cast<std::size_t>(i)] * Word({Letter{g, +1}}) *
               sd.transversal[static_cast<std::size_t>(j)].inverse();
      gens[static_cast<std::size_t>(col)] = std::move(w);
    }
  return gens;
}

int cover_cusp_count(const CosetTable& table, const Presentation& pres) {
  int total = 0;
  for (const Cusp& cusp : pres.cusps) {
    std::vector<int> pm = table.perm_of(cusp.meridian);
    std::vector<int> pl = table.perm_of(cusp.longitude);
    std::vector<int> uf(static_cast<std::size_t>(table.degree));
    std::iota(uf.begin(), uf.end(), 0);
    auto find = [&](int x) {
      while (uf[static_cast<std::size_t>(x)] != x) {
        uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
        x = uf[static_cast<std::size_t>(x)];
      }
      return x;
    };
    auto unite = [&](int a, int b) {
      a = find(a);
      b = find(b);
      if (a != b) uf[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };
    for (int i = 0; i < table.degree; ++i) {
      unite(i, pm[static_cast<std::size_t>(i)]);
      unite(i, pl[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < table.degree; ++i)
      if (find(i) == i) ++total;
  }
  return total;
}

CoverRecord pullback_cover(const Presentation& pres, const std::vector<ProjMat>& images,
                           const SubgroupRecord& subgroup) {
  pres.validate();
  if (static_cast<int>(images.size()) != pres.ngens())
    throw FpGroupError("expected one image per generator");
  const GroupPSL2& g = GroupPSL2::get(subgroup.p);
  std::vector<int> img_idx;
  for (const ProjMat& m : images) img_idx.push_back(g.index_of(m));

  auto eval_idx = [&](const Word& w) {
    int acc = g.identity();
    for (const Letter& l : w.letters()) {
      int gi = img_idx[static_cast<std::size_t>(l.gen)];
      acc = g.mul(acc, l.sign > 0 ? gi : g.inv(gi));
    }
    return acc;
  };
  for (const Word& r : pres.relators)
    if (eval_idx(r) != g.identity())
      throw FpGroupError("homomorphism violates relator " + r.str(pres.generators));

  // Right cosets Hx, numbered by their smallest member.
  long n = g.order();
  std::vector<int> coset_of(static_cast<std::size_t>(n), -1);
  std::vector<int> coset_rep;
  for (long x = 0; x < n; ++x) {
    if (coset_of[static_cast<std::size_t>(x)] != -1) continue;
    int cid = static_cast<int>(coset_rep.size());
    coset_rep.push_back(static_cast<int>(x));
    for (int h : subgroup.elements)
      coset_of[static_cast<std::size_t>(g.mul(h, static_cast<int>(x)))] = cid;
  }
  int degree = static_cast<int>(coset_rep.size());
  if (static_cast<long>(degree) * subgroup.order != n)
    throw FpGroupError("internal: coset space size mismatch");

  CoverRecord cover;
  CosetTable& tab = cover.table;
  tab.ngens = pres.ngens();
  tab.degree = degree;
  tab.base = coset_of[static_cast<std::size_t>(g.identity())];
  tab.act.assign(static_cast<std::size_t>(2 * pres.ngens()),
                 std::vector<int>(static_cast<std::size_t>(degree)));
  for (int gen = 0; gen < pres.ngens(); ++gen) {
    int mi = img_idx[static_cast<std::size_t>(gen)];
    int inv = g.inv(mi);
    for (int c = 0; c < degree; ++c) {
      int rep = coset_rep[static_cast<std::size_t>(c)];
      tab.act[static_cast<std::size_t>(2 * gen)][static_cast<std::size_t>(c)] =
          coset_of[static_cast<std::size_t>(g.mul(rep, mi))];
      tab.act[static_cast<std::size_t>(2 * gen + 1)][static_cast<std::size_t>(c)] =
          coset_of[static_cast<std::size_t>(g.mul(rep, inv))];
    }
  }
  tab.validate(pres, {});
  cover.cusp_count = cover_cusp_count(tab, pres);
  cover.homology = rewrite_homology(tab, pres);
  return cover;
}

namespace {

// Backtracking search over partial coset tables. Deductions only: a forced
// coincidence contradicts injectivity and prunes the branch. Tables are
// flat int8 arrays (degree * ndirs cells, -1 undefined), cheap to copy per
// branch node.
struct LowIndexSearch {
  int ngens, ndirs, n;
  std::vector<std::vector<int>> rels;
  std::vector<CosetTable> results;

  using Table = std::vector<int8_t>;
  int deg(const Table& t) const { return static_cast<int>(t.size()) / ndirs; }
  int8_t get(const Table& t, int c, int d) const {
    return t[static_cast<std::size_t>(c * ndirs + d)];
  }
  void set(Table& t, int c, int d, int v) {
    t[static_cast<std::size_t>(c * ndirs + d)] = static_cast<int8_t>(v);
  }

  // Scans relator w at alpha. Returns false on contradiction; sets
  // `progress` when a deduction fills a slot.
  bool scan(Table& t, int alpha, const std::vector<int>& w, bool& progress) {
    int f = alpha, i = 0;
    int b = alpha, j = static_cast<int>(w.size()) - 1;
    while (i <= j && get(t, f, w[static_cast<std::size_t>(i)]) != -1)
      f = get(t, f, w[static_cast<std::size_t>(i++)]);
    if (i > j) return f == b;
    while (j >= i && get(t, b, w[static_cast<std::size_t>(j)] ^ 1) != -1)
      b = get(t, b, w[static_cast<std::size_t>(j--)] ^ 1);
    if (j < i) return f == b;
    if (i == j) {
      set(t, f, w[static_cast<std::size_t>(i)], b);
      set(t, b, w[static_cast<std::size_t>(i)] ^ 1, f);
      progress = true;
    }
    return true;
  }

  struct Branch {
    enum Kind { Fail, Complete, Slot } kind = Fail;
    int coset = -1, dir = -1;
    std::vector<int> candidates;  // existing-coset targets to try
    bool allow_new = false;
  };

  // Deduction fixpoint plus arc consistency on two-edge gaps, then the
  // branching decision: the open scan with the fewest consistent
  // intermediates, falling back to the first undefined slot.
  Branch analyze(Table& t) {
    Branch br;
    bool progress = true;
    while (progress) {
      progress = false;
      br = Branch{};  // discard any slot recorded before the last deduction
      for (int a = 0; a < deg(t); ++a)
        for (const auto& r : rels)
          if (!scan(t, a, r, progress)) return br;  // Fail

      if (progress) continue;
      bool full = deg(t) >= n;

      // Sweep open scans once: force or fail the constrained two-edge gaps,
      // otherwise remember the most constrained one for branching.
      int best_count = -1;
      for (int a = 0; a < deg(t) && !progress; ++a)
        for (const auto& w : rels) {
          int f = a, i = 0;
          int b = a, j = static_cast<int>(w.size()) - 1;
          while (i <= j && get(t, f, w[static_cast<std::size_t>(i)]) != -1)
            f = get(t, f, w[static_cast<std::size_t>(i++)]);
          if (i > j) continue;
          while (j >= i && get(t, b, w[static_cast<std::size_t>(j)] ^ 1) != -1)
            b = get(t, b, w[static_cast<std::size_t>(j--)] ^ 1);
          if (j != i + 1) continue;
          int din = w[static_cast<std::size_t>(i)], dout = w[static_cast<std::size_t>(j)];
          std::vector<int> cands;
          for (int e = 0; e < deg(t); ++e)
            if (get(t, e, din ^ 1) == -1 && get(t, e, dout) == -1) cands.push_back(e);
          if (cands.empty()) {
            if (full) return br;  // Fail
            // the intermediate must be a fresh coset
            int e = deg(t);
            t.resize(t.size() + static_cast<std::size_t>(ndirs), -1);
            set(t, f, din, e);
            set(t, e, din ^ 1, f);
            progress = true;
            break;
          }
          if (cands.size() == 1 && full) {
            set(t, f, din, cands[0]);
            set(t, cands[0], din ^ 1, f);
            progress = true;
            break;
          }
          if (best_count < 0 || static_cast<int>(cands.size()) < best_count) {
            best_count = static_cast<int>(cands.size());
            br.coset = f;
            br.dir = din;
            br.candidates = std::move(cands);
          }
        }
      if (progress) continue;

      if (br.coset >= 0) {
        br.kind = Branch::Slot;
        br.allow_new = !full;
        return br;
      }
      // No two-edge gap anywhere: branch on the frontier of the tightest
      // open scan, or on the first undefined slot of a scan-free table.
      int best_gap = -1;
      for (int a = 0; a < deg(t); ++a)
        for (const auto& w : rels) {
          int f = a, i = 0;
          int b = a, j = static_cast<int>(w.size()) - 1;
          while (i <= j && get(t, f, w[static_cast<std::size_t>(i)]) != -1)
            f = get(t, f, w[static_cast<std::size_t>(i++)]);
          if (i > j) continue;
          while (j >= i && get(t, b, w[static_cast<std::size_t>(j)] ^ 1) != -1)
            b = get(t, b, w[static_cast<std::size_t>(j--)] ^ 1);
          int gap = j - i + 1;
          if (best_gap < 0 || gap < best_gap) {
            best_gap = gap;
            br.coset = f;
            br.dir = w[static_cast<std::size_t>(i)];
          }
        }
      if (br.coset < 0) {
        for (int c = 0; c < deg(t) && br.coset < 0; ++c)
          for (int d = 0; d < ndirs; ++d)
            if (get(t, c, d) == -1) {
              br.coset = c;
              br.dir = d;
              break;
            }
      }
      if (br.coset < 0) {
        br.kind = Branch::Complete;
        return br;
      }
      br.kind = Branch::Slot;
      br.allow_new = !full;
      for (int e = 0; e < deg(t); ++e)
        if (get(t, e, br.dir ^ 1) == -1) br.candidates.push_back(e);
      return br;
    }
    return br;  // unreachable
  }

  // Breadth-first relabel sequence from `s`, truncated at the first
  // undefined entry. The prefix only ever extends as the table fills in,
  // which is what makes the symmetry prune below safe on partial tables.
  std::vector<int> bfs_seq(const Table& t, int s) {
    std::vector<int> label(static_cast<std::size_t>(deg(t)), -1);
    std::vector<int> order;
    label[static_cast<std::size_t>(s)] = 0;
    order.push_back(s);
    std::vector<int> seq;
    for (std::size_t head = 0; head < order.size(); ++head) {
      int o = order[head];
      for (int d = 0; d < ndirs; ++d) {
        int v = get(t, o, d);
        if (v == -1) return seq;
        if (label[static_cast<std::size_t>(v)] == -1) {
          label[static_cast<std::size_t>(v)] = static_cast<int>(order.size());
          order.push_back(v);
        }
        seq.push_back(label[static_cast<std::size_t>(v)]);
      }
    }
    return seq;
  }

  // First-in-class test: if relabeling from some other base is already
  // lexicographically smaller on the common defined prefix, no completion
  // of this table can be the class representative.
  bool symmetry_ok(const Table& t) {
    std::vector<int> seq0 = bfs_seq(t, 0);
    for (int b = 1; b < deg(t); ++b) {
      std::vector<int> seq = bfs_seq(t, b);
      std::size_t len = std::min(seq.size(), seq0.size());
      for (std::size_t i = 0; i < len; ++i) {
        if (seq[i] == seq0[i]) continue;
        if (seq[i] < seq0[i]) return false;
        break;
      }
    }
    return true;
  }

  void to_result(const Table& t) {
    if (deg(t) != n) return;
    CosetTable out;
    out.ngens = ngens;
    out.degree = deg(t);
    out.base = 0;
    out.act.assign(static_cast<std::size_t>(ndirs), std::vector<int>(static_cast<std::size_t>(deg(t))));
    for (int c = 0; c < deg(t); ++c)
      for (int d = 0; d < ndirs; ++d)
        out.act[static_cast<std::size_t>(d)][static_cast<std::size_t>(c)] = get(t, c, d);
    results.push_back(std::move(out));
  }

  void dfs(Table t) {
    Branch br = analyze(t);
    if (br.kind == Branch::Fail) return;
    if (!symmetry_ok(t)) return;
    if (br.kind == Branch::Complete) {
      to_result(t);
      return;
    }
    for (int e : br.candidates) {
      Table t2 = t;
      set(t2, br.coset, br.dir, e);
      set(t2, e, br.dir ^ 1, br.coset);
      dfs(std::move(t2));
    }
    if (br.allow_new) {
      int e = deg(t);
      Table t2 = std::move(t);
      t2.resize(t2.size() + static_cast<std::size_t>(ndirs), -1);
      set(t2, br.coset, br.dir, e);
      set(t2, e, br.dir ^ 1, br.coset);
      dfs(std::move(t2));
    }
  }
};

}  // namespace

std::vector<CosetTable> low_index_subgroups(const Presentation& pres, int n) {
  pres.validate();
  if (n < 1) throw FpGroupError("index must be at least 1");
  if (n > 120) throw FpGroupError("low-index search supports index at most 120");
  LowIndexSearch search;
  search.ngens = pres.ngens();
  search.ndirs = 2 * pres.ngens();
  search.n = n;
  for (const Word& w : pres.relators) search.rels.push_back(dirs_of(w));

  LowIndexSearch::Table t0(static_cast<std::size_t>(search.ndirs), -1);
  search.dfs(std::move(t0));

  // One table per conjugacy class of subgroups: dedup by the relabeling-
  // minimal canonical form, keeping the first representative found.
  std::set<std::vector<int>> seen;
  std::vector<CosetTable> out;
  for (CosetTable& tab : search.results)
    if (seen.insert(tab.canonical_form()).second) out.push_back(std::move(tab));
  for (CosetTable& tab : out) tab.validate(pres, {});
  return out;
}

}  // namespace sunada
