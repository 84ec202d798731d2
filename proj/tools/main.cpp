// Command-line front end: Sunada pairs in PSL(2,p), number-field reductions,
// epimorphism search, covers, low-index subgroups, surgery slopes, Smith
// normal form, and the built-in Bianchi coset-action session.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sunada/fpgroups.hpp"
#include "sunada/homsearch.hpp"
#include "sunada/numfield.hpp"
#include "sunada/pipeline.hpp"
#include "sunada/psl2.hpp"
#include "sunada/sunada_pairs.hpp"
#include "sunada/surgery.hpp"
#include "sunada/words.hpp"
#include "sunada/zlinalg.hpp"

using namespace sunada;
using ordered_json = nlohmann::ordered_json;

namespace {

int emit_report(const RunReport& report, bool as_json) {
  if (as_json)
    std::cout << report.json.dump(2) << "\n";
  else
    std::cout << report.text();
  return report.ok ? 0 : 1;
}

FixtureBundle bundle_from_presentation(const std::string& path) {
  FixtureBundle bundle;
  bundle.name = path;
  bundle.pres = load_presentation(path);
  return bundle;
}

int cmd_sunada_pairs(int p) {
  std::vector<SubgroupRecord> subs = index_p_subgroups(p);
  std::cout << "PSL(2," << p << "): " << subs.size() << " conjugacy classes of index-" << p
            << " subgroups\n";
  for (const SubgroupRecord& s : subs)
    std::cout << "  class " << s.conj_class_id << ": order " << s.order << ", index " << s.index
              << "\n";
  if (subs.size() != 2) {
    std::cout << "no Sunada pair of index-" << p << " subgroups\n";
    return 1;
  }
  ConjClassTable classes = conjugacy_classes(p);
  AlmostConjugateResult res = almost_conjugate(subs[0], subs[1], classes);
  if (!res.certificate) {
    std::cout << "pair is not almost conjugate\n";
    return 1;
  }
  std::cout << "almost conjugate: per-class intersection counts (class id, size, |C^H1|, |C^H2|)\n";
  for (const ClassCount& cc : res.certificate->counts)
    std::cout << "  " << cc.class_id << "  " << classes.class_size[static_cast<std::size_t>(cc.class_id)]
              << "  " << cc.in_h1 << "  " << cc.in_h2 << "\n";
  std::cout << "not conjugate (checked against all " << GroupPSL2::get(p).order()
            << " conjugators): yes\n";
  bool swapped = outer_swap_check(subs[0], subs[1]);
  std::cout << "interchanged by the outer automorphism: " << (swapped ? "yes" : "no") << "\n";
  return swapped ? 0 : 1;
}

int cmd_split(const std::string& field_path, long prime) {
  NumberField k = load_number_field(field_path);
  std::cout << "polynomial discriminant: " << poly_discriminant(k.min_poly).get_str() << "\n";
  SplittingReport rep = split_prime(k, prime);
  std::cout << "factor degrees of the minimal polynomial mod " << prime << ":";
  for (int d : rep.factor_degrees) std::cout << " " << d;
  std::cout << "\ndegree-one roots:";
  for (long r : rep.degree_one_roots) std::cout << " " << r;
  std::cout << "\n";
  return 0;
}

int cmd_reduce(const std::string& field_path, const std::string& mat_path, long prime, long root) {
  NumberField k = load_number_field(field_path);
  ExactMatrices mats = load_nf_matrices(mat_path);
  ordered_json out;
  for (const auto& [name, m] : mats.generators)
    out["generators"][name] = reduce_matrix(k, m, prime, root).str();
  for (std::size_t i = 0; i < mats.peripheral.size(); ++i) {
    ordered_json cusp;
    cusp["meridian"] = reduce_matrix(k, mats.peripheral[i].meridian, prime, root).str();
    cusp["longitude"] = reduce_matrix(k, mats.peripheral[i].longitude, prime, root).str();
    out["peripheral"].push_back(std::move(cusp));
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_homsearch(const std::string& pres_path, int prime, bool raw_count, bool as_json) {
  FixtureBundle bundle = bundle_from_presentation(pres_path);
  RunReport report = run_method_r(bundle, prime);
  if (raw_count) {
    const auto& counts = report.json.at("counts");
    std::cout << "raw homomorphisms: " << counts.at("raw_homomorphisms") << "\n"
              << "raw surjections:   " << counts.at("raw_surjections") << "\n";
  }
  return emit_report(report, as_json);
}

int cmd_cover(const std::string& pres_path, const std::string& published_path,
              const std::string& rep_name, int subgroup_class, bool as_json) {
  Presentation pres = load_presentation(pres_path);
  std::ifstream in(published_path);
  if (!in) throw PipelineError("cannot open " + published_path);
  ordered_json pub;
  in >> pub;
  for (const auto& red : pub.at("reductions")) {
    if (red.at("name").get<std::string>() != rep_name) continue;
    int prime = red.at("prime").get<int>();
    std::vector<ProjMat> images;
    for (char gname : pres.generators) {
      const auto& jm = red.at("generators").at(std::string(1, gname));
      images.push_back(proj_mat(prime, jm[0][0].get<long>(), jm[0][1].get<long>(),
                                jm[1][0].get<long>(), jm[1][1].get<long>()));
    }
    std::vector<SubgroupRecord> subs = index_p_subgroups(prime);
    if (subgroup_class < 0 || subgroup_class >= static_cast<int>(subs.size()))
      throw PipelineError("subgroup class out of range");
    CoverRecord cover = pullback_cover(pres, images, subs[static_cast<std::size_t>(subgroup_class)]);
    ordered_json out;
    out["degree"] = cover.table.degree;
    out["cusp_count"] = cover.cusp_count;
    out["homology"] = cover.homology.str();
    ordered_json acts = ordered_json::array();
    for (int g = 0; g < cover.table.ngens; ++g)
      acts.push_back(cover.table.act[static_cast<std::size_t>(2 * g)]);
    out["table"] = {{"degree", cover.table.degree},
                    {"base", cover.table.base},
                    {"generator_permutations", acts}};
    if (as_json)
      std::cout << out.dump(2) << "\n";
    else
      std::cout << "degree " << cover.table.degree << ", " << cover.cusp_count
                << " cusp(s), homology " << cover.homology.str() << "\n";
    return 0;
  }
  throw PipelineError("no reduction named " + rep_name + " in " + published_path);
}

int cmd_low_index(const std::string& pres_path, int n, bool as_json) {
  Presentation pres = load_presentation(pres_path);
  std::vector<CosetTable> tables = low_index_subgroups(pres, n);
  ordered_json out;
  out["index"] = n;
  out["classes"] = static_cast<long>(tables.size());
  ordered_json rows = ordered_json::array();
  int one_cusped = 0;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    ordered_json row;
    row["class"] = i;
    if (!pres.cusps.empty()) {
      int cusps = cover_cusp_count(tables[i], pres);
      row["cusp_count"] = cusps;
      if (cusps == 1) ++one_cusped;
    }
    row["homology"] = rewrite_homology(tables[i], pres).str();
    rows.push_back(std::move(row));
  }
  out["covers"] = std::move(rows);
  if (!pres.cusps.empty()) out["one_cusped"] = one_cusped;
  if (as_json)
    std::cout << out.dump(2) << "\n";
  else {
    std::cout << tables.size() << " classes of index-" << n << " subgroups";
    if (!pres.cusps.empty()) std::cout << ", " << one_cusped << " with a 1-cusped cover";
    std::cout << "\n";
    for (const auto& row : out.at("covers")) {
      std::cout << "  class " << row.at("class");
      if (row.contains("cusp_count")) std::cout << ": " << row.at("cusp_count") << " cusp(s),";
      std::cout << " homology " << row.at("homology").get<std::string>() << "\n";
    }
  }
  return 0;
}

int cmd_surgery(int prime, int s, int t, int count) {
  std::vector<FillingSlope> slopes = filling_slopes({prime, s, t}, count);
  std::cout << "slopes (m,n) with m*" << s << " + n*" << t << " == 0 (mod " << prime << "):";
  for (const FillingSlope& sl : slopes) std::cout << " (" << sl.m << "," << sl.n << ")";
  std::cout << "\n";
  return 0;
}

int cmd_snf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ZlinalgError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  int rows = static_cast<int>(j.size());
  int cols = rows ? static_cast<int>(j[0].size()) : 0;
  IntMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const auto& v = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      m.at(r, c) = v.is_string() ? Int(v.get<std::string>()) : Int(v.get<long>());
    }
  std::vector<Int> diag = smith_normal_form(m);
  std::cout << "diagonal:";
  for (const Int& d : diag) std::cout << " " << d.get_str();
  std::cout << "\ninvariants (cokernel of the rows): " << abelian_invariants(m, cols).str() << "\n";
  return 0;
}

int cmd_batch(const std::string& dir, std::vector<int> primes, bool as_json) {
  namespace fs = std::filesystem;
  std::vector<FixtureBundle> bundles;
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.path().extension() == ".json" &&
        entry.path().filename().string().find("bundle") != std::string::npos)
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  for (const std::string& p : paths) bundles.push_back(load_bundle(p));
  if (bundles.empty()) {
    // fall back to bare presentation files
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.path().extension() == ".pres") paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    for (const std::string& p : paths) bundles.push_back(bundle_from_presentation(p));
  }
  return emit_report(run_batch(bundles, primes), as_json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sunada pairs of 1-cusped covers: finite-group machinery in PSL(2,p), "
               "number-field reductions, epimorphism search, covers and homology"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "emit machine-readable JSON reports");
  long coset_limit = 0;
  app.add_option("--coset-limit", coset_limit,
                 "cap on defined cosets during enumeration (default 1000000, also settable "
                 "via SUNADA_COSET_LIMIT)");

  auto* sp = app.add_subcommand("sunada-pairs", "index-p subgroup pairs of PSL(2,p)");
  int sp_prime = 7;
  sp->add_option("--prime", sp_prime, "7 or 11 (13 shows the empty case)")->required();

  auto* split = app.add_subcommand("split", "factor a rational prime in the field");
  std::string split_field;
  long split_prime_v = 7;
  split->add_option("--field", split_field, "number field JSON")->required();
  split->add_option("--prime", split_prime_v)->required();

  auto* reduce = app.add_subcommand("reduce", "reduce exact matrices at a degree-one prime");
  std::string red_field, red_mats;
  long red_prime = 7, red_root = 1;
  reduce->add_option("--field", red_field)->required();
  reduce->add_option("--matrices", red_mats)->required();
  reduce->add_option("--prime", red_prime)->required();
  reduce->add_option("--root", red_root)->required();

  auto* hs = app.add_subcommand("homsearch", "exhaustive homomorphism search onto PSL(2,p)");
  std::string hs_pres;
  int hs_prime = 7;
  bool hs_raw = false;
  hs->add_option("presentation", hs_pres)->required();
  hs->add_option("--prime", hs_prime)->required();
  hs->add_flag("--raw-count", hs_raw, "also print raw tuple counts");

  auto* cover = app.add_subcommand("cover", "pullback cover of a published reduction");
  std::string cov_pres, cov_pub, cov_rep = "rho7";
  int cov_sub = 0;
  cover->add_option("presentation", cov_pres)->required();
  cover->add_option("--published", cov_pub, "published reductions JSON")->required();
  cover->add_option("--rep", cov_rep, "reduction name");
  cover->add_option("--subgroup", cov_sub, "Sunada subgroup class (0 or 1)");

  auto* li = app.add_subcommand("low-index", "conjugacy classes of index-n subgroups");
  std::string li_pres;
  int li_n = 2;
  li->add_option("presentation", li_pres)->required();
  li->add_option("-n,--index", li_n)->required();

  auto* surg = app.add_subcommand("surgery", "filling slopes compatible with a p-rep");
  int su_prime = 7, su_s = 0, su_t = 0, su_count = 10;
  surg->add_option("--prime", su_prime)->required();
  surg->add_option("--s", su_s)->required();
  surg->add_option("--t", su_t)->required();
  surg->add_option("--count", su_count);

  auto* snf = app.add_subcommand("snf", "Smith normal form of an integer matrix (JSON rows)");
  std::string snf_path;
  snf->add_option("matrix", snf_path)->required();

  auto* bianchi = app.add_subcommand("bianchi-session", "coset-action session for the two "
                                                        "index-12 subgroups of PSL(2,Z[w])");

  auto* mg = app.add_subcommand("method-g", "reduce a geometric representation and analyze covers");
  std::string mg_bundle;
  mg->add_option("bundle", mg_bundle, "bundle manifest JSON")->required();

  auto* mr = app.add_subcommand("method-r", "search epimorphisms and classify p-good classes");
  std::string mr_bundle;
  int mr_prime = 7;
  mr->add_option("bundle", mr_bundle)->required();
  mr->add_option("--prime", mr_prime)->required();

  auto* batch = app.add_subcommand("batch", "method R over a directory of bundles/presentations");
  std::string batch_dir;
  std::vector<int> batch_primes{7, 11};
  batch->add_option("directory", batch_dir)->required();
  batch->add_option("--primes", batch_primes, "primes to search (default 7 11)");

  CLI11_PARSE(app, argc, argv);

  if (coset_limit > 0) setenv("SUNADA_COSET_LIMIT", std::to_string(coset_limit).c_str(), 1);

  try {
    if (sp->parsed()) return cmd_sunada_pairs(sp_prime);
    if (split->parsed()) return cmd_split(split_field, split_prime_v);
    if (reduce->parsed()) return cmd_reduce(red_field, red_mats, red_prime, red_root);
    if (hs->parsed()) return cmd_homsearch(hs_pres, hs_prime, hs_raw, as_json);
    if (cover->parsed()) return cmd_cover(cov_pres, cov_pub, cov_rep, cov_sub, as_json);
    if (li->parsed()) return cmd_low_index(li_pres, li_n, as_json);
    if (surg->parsed()) return cmd_surgery(su_prime, su_s, su_t, su_count);
    if (snf->parsed()) return cmd_snf(snf_path);
    if (bianchi->parsed()) return emit_report(run_bianchi_session(), as_json);
    if (mg->parsed()) return emit_report(run_method_g(load_bundle(mg_bundle)), as_json);
    if (mr->parsed()) return emit_report(run_method_r(load_bundle(mr_bundle), mr_prime), as_json);
    if (batch->parsed()) return cmd_batch(batch_dir, batch_primes, as_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
