#include "sunada/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace sunada {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open " + path);
  ordered_json j;
  in >> j;
  return j;
}

ProjMat json_to_proj(const ordered_json& j, int prime) {
  if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
    throw PipelineError("matrix must be [[a,b],[c,d]]");
  return proj_mat(prime, j[0][0].get<long>(), j[0][1].get<long>(), j[1][0].get<long>(),
                  j[1][1].get<long>());
}

ordered_json invariants_to_json(const AbelianInvariants& inv) {
  ordered_json arr = ordered_json::array();
  for (const Int& f : inv.factors) {
    if (f.fits_slong_p())
      arr.push_back(f.get_si());
    else
      arr.push_back(f.get_str());
  }
  return arr;
}

std::vector<std::string> invariants_key(const AbelianInvariants& inv) {
  std::vector<std::string> out;
  for (const Int& f : inv.factors) out.push_back(f.get_str());
  return out;
}

std::vector<std::string> json_invariants_key(const ordered_json& arr) {
  std::vector<std::string> out;
  for (const auto& v : arr) {
    if (v.is_string())
      out.push_back(v.get<std::string>());
    else
      out.push_back(std::to_string(v.get<long>()));
  }
  return out;
}

// One expected-vs-actual row; FAIL rows carry the expected value's source.
struct Comparisons {
  ordered_json rows = ordered_json::array();
  bool all_ok = true;

  void add(bool pass, const std::string& what, const std::string& expected,
           const std::string& actual, const std::string& source) {
    ordered_json row;
    row["what"] = what;
    row["expected"] = expected;
    row["actual"] = actual;
    row["source"] = source;
    row["pass"] = pass;
    rows.push_back(std::move(row));
    all_ok = all_ok && pass;
  }
};

ProjMat eval_peripheral(const Word& w, const std::vector<ProjMat>& images, int prime) {
  return evaluate_word(
      w, images, proj_identity(prime), [](const ProjMat& a, const ProjMat& b) { return multiply(a, b); },
      [](const ProjMat& a) { return inverse(a); });
}

bool rep_is_surjective(const std::vector<ProjMat>& images, int prime) {
  const GroupPSL2& g = GroupPSL2::get(prime);
  std::vector<int> idx;
  for (const ProjMat& m : images) idx.push_back(g.index_of(m));
  return static_cast<long>(g.closure(idx).size()) == g.order();
}

bool rep_relators_ok(const Presentation& pres, const std::vector<ProjMat>& images, int prime,
                     std::string* failing = nullptr) {
  for (const Word& r : pres.relators)
    if (eval_peripheral(r, images, prime) != proj_identity(prime)) {
      if (failing) *failing = r.str(pres.generators);
      return false;
    }
  return true;
}

}  // namespace

BianchiFixture bianchi_fixture() {
  BianchiFixture fx;
  fx.pres.generators = {'a', 'b', 'c'};
  for (const char* r : {"bb", "ababab", "acbCCbacbCCb", "acbCbacbCbacbCb", "AACbcbCbCbcb", "ACac"})
    fx.pres.relators.push_back(fx.pres.parse(r));
  fx.pres.validate();
  fx.h1 = {fx.pres.parse("a"), fx.pres.parse("bcb")};
  fx.h2 = {fx.pres.parse("aa"), fx.pres.parse("bcabaCbCb")};
  fx.probes = {fx.pres.parse("bC"), fx.pres.parse("bc"), fx.pres.parse("bac"), fx.pres.parse("bAC")};
  return fx;
}

FixtureBundle load_bundle(const std::string& manifest_path) {
  ordered_json manifest = load_json_file(manifest_path);
  fs::path dir = fs::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& rel) { return (dir / rel).string(); };

  FixtureBundle bundle;
  bundle.name = manifest.at("name").get<std::string>();
  bundle.pres = load_presentation(resolve(manifest.at("presentation").get<std::string>()));
  if (manifest.contains("field"))
    bundle.field = load_number_field(resolve(manifest.at("field").get<std::string>()));
  if (manifest.contains("exact_matrices"))
    bundle.exact = load_nf_matrices(resolve(manifest.at("exact_matrices").get<std::string>()));
  if (manifest.contains("published")) {
    ordered_json pub = load_json_file(resolve(manifest.at("published").get<std::string>()));
    for (const auto& red : pub.at("reductions")) {
      PublishedRep rep;
      rep.name = red.at("name").get<std::string>();
      rep.prime = red.at("prime").get<int>();
      if (red.contains("root")) rep.root = red.at("root").get<long>();
      const auto& gens = red.at("generators");
      for (char gname : bundle.pres.generators) {
        std::string key(1, gname);
        if (!gens.contains(key))
          throw PipelineError(bundle.name + ": published reduction " + rep.name +
                              " is missing generator " + key);
        rep.generator_images.push_back(json_to_proj(gens.at(key), rep.prime));
      }
      if (red.contains("peripheral"))
        for (const auto& cusp : red.at("peripheral"))
          rep.peripheral.emplace_back(json_to_proj(cusp.at("meridian"), rep.prime),
                                      json_to_proj(cusp.at("longitude"), rep.prime));
      bundle.published.push_back(std::move(rep));
    }
  }
  if (manifest.contains("expect")) bundle.expect = manifest.at("expect");
  return bundle;
}

std::string RunReport::text() const {
  std::ostringstream out;
  out << "== " << json.value("method", std::string("report")) << " : "
      << json.value("bundle", std::string("")) << "\n";
  if (json.contains("stages")) {
    for (const auto& [key, val] : json.at("stages").items())
      out << "   " << key << ": " << val.dump() << "\n";
  }
  if (json.contains("counts")) out << "   counts: " << json.at("counts").dump() << "\n";
  if (json.contains("comparisons")) {
    for (const auto& row : json.at("comparisons")) {
      bool pass = row.at("pass").get<bool>();
      out << (pass ? "[PASS] " : "[FAIL] ") << row.at("what").get<std::string>();
      if (!pass)
        out << ": expected " << row.at("expected").get<std::string>() << ", got "
            << row.at("actual").get<std::string>() << " (source: "
            << row.at("source").get<std::string>() << ")";
      out << "\n";
    }
  }
  out << (ok ? "OK" : "FAILED") << "\n";
  return out.str();
}

RunReport run_method_g(const FixtureBundle& bundle) {
  RunReport report;
  ordered_json& j = report.json;
  j["schema_version"] = 1;
  j["method"] = "G";
  j["bundle"] = bundle.name;
  ordered_json stages;
  Comparisons cmp;
  const std::string fixture_src = bundle.name + " fixtures";

  std::vector<std::pair<long, long>> reduction_points;  // (prime, root)
  if (bundle.field) {
    Int disc = poly_discriminant(bundle.field->min_poly);
    stages["polynomial_discriminant"] = disc.get_str();
    if (bundle.expect.contains("discriminant"))
      cmp.add(disc.get_str() == bundle.expect.at("discriminant").get<std::string>(),
              "polynomial discriminant", bundle.expect.at("discriminant").get<std::string>(),
              disc.get_str(), fixture_src);

    ordered_json splits = ordered_json::array();
    for (long ell : {7L, 11L}) {
      ordered_json s;
      s["prime"] = ell;
      try {
        SplittingReport rep = split_prime(*bundle.field, ell);
        s["factor_degrees"] = rep.factor_degrees;
        s["degree_one_roots"] = rep.degree_one_roots;
        for (long r : rep.degree_one_roots) reduction_points.emplace_back(ell, r);
        if (bundle.expect.contains("splitting") &&
            bundle.expect.at("splitting").contains(std::to_string(ell))) {
          std::vector<int> want =
              bundle.expect.at("splitting").at(std::to_string(ell)).get<std::vector<int>>();
          std::ostringstream wantstr, gotstr;
          for (int d : want) wantstr << d << " ";
          for (int d : rep.factor_degrees) gotstr << d << " ";
          cmp.add(want == rep.factor_degrees, "splitting degrees at " + std::to_string(ell),
                  wantstr.str(), gotstr.str(), fixture_src);
        }
      } catch (const NumfieldError& err) {
        s["error"] = err.what();
      }
      splits.push_back(std::move(s));
    }
    stages["splitting"] = std::move(splits);
  } else {
    stages["field"] = "number field unavailable";
  }

  // Reductions to analyze: from the exact matrices at every degree-one root
  // above 7 and 11, or the published matrices when no exact ones exist.
  struct Reduction {
    std::string name;
    int prime;
    long root;
    std::vector<ProjMat> images;
    std::vector<std::pair<ProjMat, ProjMat>> reduced_peripheral;  // from exact matrices
  };
  std::vector<Reduction> reductions;

  if (bundle.exact && bundle.field) {
    const NumberField& k = *bundle.field;
    std::vector<NFMatrix> exact_images;
    for (char gname : bundle.pres.generators) {
      std::string key(1, gname);
      auto it = std::find_if(bundle.exact->generators.begin(), bundle.exact->generators.end(),
                             [&](const auto& pr) { return pr.first == key; });
      if (it == bundle.exact->generators.end())
        throw PipelineError(bundle.name + ": exact matrices missing generator " + key);
      exact_images.push_back(it->second);
    }

    bool dets_ok = true;
    for (const NFMatrix& m : exact_images)
      if (nf_det(k, m) != fe_const(1)) dets_ok = false;
    for (const auto& cusp : bundle.exact->peripheral) {
      if (nf_det(k, cusp.meridian) != fe_const(1)) dets_ok = false;
      if (nf_det(k, cusp.longitude) != fe_const(1)) dets_ok = false;
    }
    cmp.add(dets_ok, "exact matrices have determinant 1", "det = 1", dets_ok ? "det = 1" : "det != 1",
            fixture_src);

    bool relators_ok = true;
    for (const Word& r : bundle.pres.relators) {
      NFMatrix val = evaluate_word(
          r, exact_images, nf_identity(),
          [&](const NFMatrix& a, const NFMatrix& b) { return nf_mul(k, a, b); },
          [&](const NFMatrix& a) { return nf_inv(k, a); });
      if (!nf_is_proj_identity(val)) relators_ok = false;
    }
    cmp.add(relators_ok, "relators hold for the exact matrices", "+-identity",
            relators_ok ? "+-identity" : "violated", fixture_src);

    if (!bundle.exact->peripheral.empty()) {
      bool match = bundle.exact->peripheral.size() == bundle.pres.cusps.size();
      for (std::size_t i = 0; match && i < bundle.pres.cusps.size(); ++i) {
        auto eval_nf = [&](const Word& w) {
          return evaluate_word(
              w, exact_images, nf_identity(),
              [&](const NFMatrix& a, const NFMatrix& b) { return nf_mul(k, a, b); },
              [&](const NFMatrix& a) { return nf_inv(k, a); });
        };
        NFMatrix mu = eval_nf(bundle.pres.cusps[i].meridian);
        NFMatrix la = eval_nf(bundle.pres.cusps[i].longitude);
        auto same_proj = [&](const NFMatrix& x, const NFMatrix& y) {
          NFMatrix neg = y;
          for (auto& e : neg.e) e = fe_neg(e);
          return x == y || x == neg;
        };
        if (!same_proj(mu, bundle.exact->peripheral[i].meridian)) match = false;
        if (!same_proj(la, bundle.exact->peripheral[i].longitude)) match = false;
      }
      cmp.add(match, "peripheral words evaluate to the exact peripheral matrices", "equal up to sign",
              match ? "equal up to sign" : "mismatch", fixture_src);
    }

    for (auto [ell, root] : reduction_points) {
      Reduction red;
      red.name = "mod (" + std::to_string(ell) + ", t-" + std::to_string(root) + ")";
      red.prime = static_cast<int>(ell);
      red.root = root;
      for (const NFMatrix& m : exact_images) red.images.push_back(reduce_matrix(k, m, ell, root));
      for (const auto& cusp : bundle.exact->peripheral)
        red.reduced_peripheral.emplace_back(reduce_matrix(k, cusp.meridian, ell, root),
                                            reduce_matrix(k, cusp.longitude, ell, root));
      reductions.push_back(std::move(red));
    }
  } else {
    stages["exact_matrices"] = "exact matrices unavailable; validating published reductions";
    for (const PublishedRep& rep : bundle.published) {
      Reduction red;
      red.name = rep.name;
      red.prime = rep.prime;
      red.root = rep.root;
      red.images = rep.generator_images;
      reductions.push_back(std::move(red));
      if (bundle.field && rep.root >= 0) {
        bool found = false;
        for (auto [ell, root] : reduction_points)
          if (ell == rep.prime && root == rep.root) found = true;
        cmp.add(found, rep.name + ": published root is a degree-one root",
                "root of min_poly mod " + std::to_string(rep.prime), std::to_string(rep.root),
                fixture_src);
      }
    }
  }

  std::map<int, std::vector<AbelianInvariants>> cover_homologies_by_prime;
  ordered_json red_stage = ordered_json::array();
  for (const Reduction& red : reductions) {
    ordered_json rj;
    rj["name"] = red.name;
    rj["prime"] = red.prime;
    if (red.root >= 0) rj["root"] = red.root;
    ordered_json imgs;
    for (int gi = 0; gi < bundle.pres.ngens(); ++gi)
      imgs[std::string(1, bundle.pres.generators[static_cast<std::size_t>(gi)])] =
          red.images[static_cast<std::size_t>(gi)].str();
    rj["generator_images"] = std::move(imgs);

    std::string failing;
    bool rel_ok = rep_relators_ok(bundle.pres, red.images, red.prime, &failing);
    cmp.add(rel_ok, red.name + ": relators map to the identity", "identity",
            rel_ok ? "identity" : "relator " + failing + " violated", fixture_src);

    // Peripheral images by word evaluation.
    std::vector<std::pair<ProjMat, ProjMat>> peripheral;
    ordered_json pj = ordered_json::array();
    for (const Cusp& cusp : bundle.pres.cusps) {
      ProjMat mu = eval_peripheral(cusp.meridian, red.images, red.prime);
      ProjMat la = eval_peripheral(cusp.longitude, red.images, red.prime);
      ordered_json c;
      c["meridian"] = mu.str();
      c["longitude"] = la.str();
      c["meridian_parabolic"] = is_parabolic(mu);
      pj.push_back(std::move(c));
      peripheral.emplace_back(mu, la);
    }
    rj["peripheral_images"] = std::move(pj);

    if (!red.reduced_peripheral.empty()) {
      bool agree = red.reduced_peripheral.size() == peripheral.size();
      for (std::size_t i = 0; agree && i < peripheral.size(); ++i)
        agree = peripheral[i] == red.reduced_peripheral[i];
      cmp.add(agree, red.name + ": reduced peripheral matrices match the peripheral words",
              "equal", agree ? "equal" : "mismatch", fixture_src);
    }

    // Compare against the published reduction at the same (prime, root).
    for (const PublishedRep& pub : bundle.published) {
      if (pub.prime != red.prime || pub.root != red.root) continue;
      bool gens_equal = pub.generator_images == red.images;
      cmp.add(gens_equal, red.name + ": generator images match published " + pub.name,
              "published matrices (canonicalized)", gens_equal ? "equal" : "mismatch",
              bundle.name + " published fixture, reduction " + pub.name);
      if (!pub.peripheral.empty()) {
        bool per_equal = pub.peripheral == peripheral;
        cmp.add(per_equal, red.name + ": peripheral images match published " + pub.name,
                "published matrices (canonicalized)", per_equal ? "equal" : "mismatch",
                bundle.name + " published fixture, reduction " + pub.name);
      }
    }

    bool surjective = rep_is_surjective(red.images, red.prime);
    rj["surjective"] = surjective;
    if (bundle.expect.value("surjective", false))
      cmp.add(surjective, red.name + ": surjective onto PSL(2," + std::to_string(red.prime) + ")",
              "onto", surjective ? "onto" : "proper image", fixture_src);

    HomRecord hom;
    hom.ell = red.prime;
    hom.images = red.images;
    hom.surjective = surjective;
    classify_p_rep(hom, bundle.pres);
    rj["p_rep"] = hom.p_rep;
    if (bundle.expect.value("p_rep", false))
      cmp.add(hom.p_rep, red.name + ": peripheral images are parabolic (p-rep)", "p-rep",
              hom.p_rep ? "p-rep" : "not a p-rep", fixture_src);

    if (rel_ok && surjective && (red.prime == 7 || red.prime == 11)) {
      std::vector<SubgroupRecord> subgroups = index_p_subgroups(red.prime);
      ordered_json covers = ordered_json::array();
      for (const SubgroupRecord& h : subgroups) {
        CoverRecord cover = pullback_cover(bundle.pres, red.images, h);
        ordered_json cj;
        cj["subgroup_class"] = h.conj_class_id;
        cj["degree"] = cover.table.degree;
        cj["cusp_count"] = cover.cusp_count;
        cj["homology"] = cover.homology.str();
        cj["homology_factors"] = invariants_to_json(cover.homology);
        covers.push_back(std::move(cj));
        cover_homologies_by_prime[red.prime].push_back(cover.homology);
        if (bundle.expect.contains("sunada_cover_cusps")) {
          int want = bundle.expect.at("sunada_cover_cusps").get<int>();
          cmp.add(cover.cusp_count == want,
                  red.name + ": cover over subgroup class " + std::to_string(h.conj_class_id) +
                      " has " + std::to_string(want) + " cusp(s)",
                  std::to_string(want), std::to_string(cover.cusp_count), fixture_src);
        }
      }
      rj["sunada_covers"] = std::move(covers);
    }
    red_stage.push_back(std::move(rj));
  }
  stages["reductions"] = std::move(red_stage);

  if (bundle.expect.contains("cover_homologies")) {
    for (const auto& [prime_str, expected_list] : bundle.expect.at("cover_homologies").items()) {
      int prime = std::stoi(prime_str);
      std::vector<std::vector<std::string>> want, got;
      for (const auto& inv : expected_list) want.push_back(json_invariants_key(inv));
      for (const AbelianInvariants& inv : cover_homologies_by_prime[prime])
        got.push_back(invariants_key(inv));
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      std::ostringstream wstr, gstr;
      for (const auto& v : want) {
        for (const auto& s : v) wstr << s << ",";
        wstr << " ";
      }
      for (const auto& v : got) {
        for (const auto& s : v) gstr << s << ",";
        gstr << " ";
      }
      cmp.add(want == got, "cover homology multiset at " + prime_str, wstr.str(), gstr.str(),
              fixture_src);
    }
  }

  // When two reductions share a prime, record how their peripheral images
  // relate (informational).
  if (reductions.size() >= 2) {
    ordered_json relations = ordered_json::array();
    for (std::size_t i = 0; i < reductions.size(); ++i)
      for (std::size_t k2 = i + 1; k2 < reductions.size(); ++k2) {
        if (reductions[i].prime != reductions[k2].prime) continue;
        if (bundle.pres.cusps.empty()) continue;
        ProjMat mu_i = eval_peripheral(bundle.pres.cusps[0].meridian, reductions[i].images,
                                       reductions[i].prime);
        ProjMat la_i = eval_peripheral(bundle.pres.cusps[0].longitude, reductions[i].images,
                                       reductions[i].prime);
        ProjMat mu_k = eval_peripheral(bundle.pres.cusps[0].meridian, reductions[k2].images,
                                       reductions[k2].prime);
        ProjMat la_k = eval_peripheral(bundle.pres.cusps[0].longitude, reductions[k2].images,
                                       reductions[k2].prime);
        ordered_json rel;
        rel["pair"] = reductions[i].name + " vs " + reductions[k2].name;
        rel["mu_equal"] = mu_i == mu_k;
        rel["lambda_equal"] = la_i == la_k;
        rel["mu_vs_other_lambda"] = mu_i == la_k;
        rel["lambda_vs_other_mu"] = la_i == mu_k;
        relations.push_back(std::move(rel));
      }
    if (!relations.empty()) stages["peripheral_image_relations"] = std::move(relations);
  }

  j["stages"] = std::move(stages);
  j["comparisons"] = std::move(cmp.rows);
  report.ok = cmp.all_ok;
  j["ok"] = report.ok;
  return report;
}

RunReport run_method_r(const FixtureBundle& bundle, int ell) {
  RunReport report;
  ordered_json& j = report.json;
  j["schema_version"] = 1;
  j["method"] = "R";
  j["bundle"] = bundle.name;
  j["prime"] = ell;
  Comparisons cmp;
  const std::string fixture_src = bundle.name + " fixtures";

  HomSearchResult res = enumerate_homs(bundle.pres, ell);

  long p_rep_classes = 0, good_classes = 0, good_inner_classes = 0;
  ordered_json classes = ordered_json::array();
  std::vector<std::vector<int>> good_keys;
  for (const HomRecord& h : res.classes) {
    ordered_json cj;
    cj["aut_class"] = h.aut_class_id;
    ordered_json imgs = ordered_json::array();
    for (const ProjMat& m : h.images) imgs.push_back(m.str());
    cj["images"] = std::move(imgs);
    cj["surjective"] = h.surjective;
    cj["p_rep"] = h.p_rep;
    if (h.p_rep) ++p_rep_classes;
    if (h.surjective && (ell == 7 || ell == 11)) {
      GoodRepReport good = classify_p_good(h, bundle.pres);
      cj["p_good"] = good.p_good;
      if (!good.p_good) cj["failed_condition"] = good.failed_condition;
      ordered_json covers;
      covers["cusp_counts"] = {good.cover1.cusp_count, good.cover2.cusp_count};
      covers["homology"] = {good.cover1.homology.str(), good.cover2.homology.str()};
      covers["homologies_equal"] = good.homologies_equal;
      covers["isometry"] = good.isometry_note;
      cj["sunada_covers"] = std::move(covers);
      if (good.p_good) {
        ++good_classes;
        good_inner_classes += h.inner_classes;
        good_keys.push_back(aut_canonical_key(h.images));
      }
    }
    classes.push_back(std::move(cj));
  }

  ordered_json counts;
  counts["raw_homomorphisms"] = res.raw_hom_count;
  counts["raw_surjections"] = res.raw_surjection_count;
  counts["aut_classes"] = static_cast<long>(res.classes.size());
  counts["surjective_classes"] = res.surjective_classes;
  counts["surjective_inner_classes"] = res.surjective_inner_classes;
  counts["p_rep_classes"] = p_rep_classes;
  counts["good_classes"] = good_classes;
  counts["good_inner_classes"] = good_inner_classes;
  j["counts"] = std::move(counts);
  j["classes"] = std::move(classes);

  if (bundle.expect.contains("good_classes") &&
      bundle.expect.at("good_classes").contains(std::to_string(ell))) {
    long want = bundle.expect.at("good_classes").at(std::to_string(ell)).get<long>();
    cmp.add(good_classes == want,
            "p-good Aut-classes at " + std::to_string(ell), std::to_string(want),
            std::to_string(good_classes), fixture_src);
  }
  if (bundle.expect.contains("good_inner_classes") &&
      bundle.expect.at("good_inner_classes").contains(std::to_string(ell))) {
    long want = bundle.expect.at("good_inner_classes").at(std::to_string(ell)).get<long>();
    cmp.add(good_inner_classes == want,
            "p-good conjugacy classes at " + std::to_string(ell), std::to_string(want),
            std::to_string(good_inner_classes), fixture_src);
  }
  if (bundle.expect.contains("min_good_classes") &&
      bundle.expect.at("min_good_classes").contains(std::to_string(ell))) {
    long want = bundle.expect.at("min_good_classes").at(std::to_string(ell)).get<long>();
    cmp.add(good_classes >= want, "at least " + std::to_string(want) + " p-good Aut-class(es) at " +
                                      std::to_string(ell),
            ">= " + std::to_string(want), std::to_string(good_classes), fixture_src);
  }

  // The published reductions at this prime must appear among the classes
  // up to Aut(PSL(2,ell)).
  for (const PublishedRep& pub : bundle.published) {
    if (pub.prime != ell) continue;
    std::vector<int> key = aut_canonical_key(pub.generator_images);
    bool found = false;
    for (const HomRecord& h : res.classes)
      if (h.surjective && aut_canonical_key(h.images) == key) found = true;
    cmp.add(found, "published reduction " + pub.name + " appears among the Aut-classes",
            "present", found ? "present" : "absent",
            bundle.name + " published fixture, reduction " + pub.name);
  }

  j["comparisons"] = std::move(cmp.rows);
  report.ok = cmp.all_ok;
  j["ok"] = report.ok;
  return report;
}

RunReport run_bianchi_session() {
  BianchiFixture fx = bianchi_fixture();
  RunReport report;
  ordered_json& j = report.json;
  j["schema_version"] = 1;
  j["method"] = "bianchi-session";
  j["bundle"] = "PSL(2,Z[w]), w^2+w+1=0";
  Comparisons cmp;
  const std::string src = "built-in session fixture";

  CosetTable t1 = coset_enumerate(fx.pres, fx.h1);
  CosetTable t2 = coset_enumerate(fx.pres, fx.h2);
  cmp.add(t1.degree == 12, "index of h1", "12", std::to_string(t1.degree), src);
  cmp.add(t2.degree == 12, "index of h2", "12", std::to_string(t2.degree), src);

  AbelianInvariants inv1 = rewrite_homology(t1, fx.pres);
  AbelianInvariants inv2 = rewrite_homology(t2, fx.pres);
  cmp.add(inv1 == make_invariants({0}), "abelian invariants of h1", "[ 0 ]", inv1.magma_style(), src);
  cmp.add(inv2 == make_invariants({5, 0}), "abelian invariants of h2", "[ 5, 0 ]", inv2.magma_style(),
          src);

  PermImage i1 = perm_image(t1);
  PermImage i2 = perm_image(t2);
  cmp.add(i1.order == 1920, "coset action image order for h1", "1920", std::to_string(i1.order), src);
  cmp.add(i2.order == 60, "coset action image order for h2", "60", std::to_string(i2.order), src);

  const char* probe_names[] = {"bC", "bc", "bac", "bAC"};
  long expected_h1[] = {0, 0, 0, 0};
  ordered_json inter1, inter2;
  for (int k = 0; k < 4; ++k) {
    long got = class_meets_subgroup(i1, t1, fx.probes[static_cast<std::size_t>(k)], fx.h1);
    inter1[probe_names[k]] = got;
    cmp.add(got == expected_h1[k],
            std::string("class of ") + probe_names[k] + " meets the image of h1",
            std::to_string(expected_h1[k]), std::to_string(got), src);
  }
  for (int k = 0; k < 4; ++k) {
    long got = class_meets_subgroup(i2, t2, fx.probes[static_cast<std::size_t>(k)], fx.h2);
    inter2[probe_names[k]] = got;
    if (k == 0)
      cmp.add(got == 2, "class of bC meets the image of h2", "2", std::to_string(got), src);
  }

  ordered_json session;
  session["indices"] = {t1.degree, t2.degree};
  session["abelian_invariants_h1"] = invariants_to_json(inv1);
  session["abelian_invariants_h2"] = invariants_to_json(inv2);
  session["image_orders"] = {i1.order, i2.order};
  session["class_intersections_h1"] = std::move(inter1);
  session["class_intersections_h2"] = std::move(inter2);
  j["stages"] = std::move(session);
  j["comparisons"] = std::move(cmp.rows);
  report.ok = cmp.all_ok;
  j["ok"] = report.ok;
  return report;
}

RunReport run_batch(const std::vector<FixtureBundle>& bundles, const std::vector<int>& primes) {
  RunReport report;
  ordered_json& j = report.json;
  j["schema_version"] = 1;
  j["method"] = "batch";
  j["bundle"] = std::to_string(bundles.size()) + " presentations";
  Comparisons cmp;

  std::map<int, std::set<std::string>> good_sets;
  ordered_json rows = ordered_json::array();
  bool sub_ok = true;
  for (const FixtureBundle& bundle : bundles) {
    ordered_json row;
    row["name"] = bundle.name;
    for (int ell : primes) {
      RunReport r = run_method_r(bundle, ell);
      long good = r.json.at("counts").at("good_classes").get<long>();
      row["good_classes_" + std::to_string(ell)] = good;
      if (good > 0) good_sets[ell].insert(bundle.name);
      for (const auto& c : r.json.at("comparisons")) cmp.rows.push_back(c);
      sub_ok = sub_ok && r.ok;
    }
    rows.push_back(std::move(row));
  }
  j["manifolds"] = std::move(rows);

  if (primes.size() == 2) {
    int p1 = primes[0], p2 = primes[1];
    const auto &s1 = good_sets[p1], &s2 = good_sets[p2];
    long both = 0, only1 = 0, only2 = 0;
    for (const FixtureBundle& b : bundles) {
      bool in1 = s1.count(b.name), in2 = s2.count(b.name);
      both += in1 && in2;
      only1 += in1 && !in2;
      only2 += !in1 && in2;
    }
    ordered_json agg;
    agg["good_at_both"] = both;
    agg["good_only_at_" + std::to_string(p1)] = only1;
    agg["good_only_at_" + std::to_string(p2)] = only2;
    agg["good_at_neither"] = static_cast<long>(bundles.size()) - both - only1 - only2;
    j["aggregate"] = std::move(agg);
  }

  j["comparisons"] = std::move(cmp.rows);
  report.ok = sub_ok;
  j["ok"] = report.ok;
  return report;
}

}  // namespace sunada
