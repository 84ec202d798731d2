#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sunada/fpgroups.hpp"
#include "sunada/homsearch.hpp"
#include "sunada/numfield.hpp"
#include "sunada/words.hpp"

namespace sunada {

struct PipelineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A reduced representation as published: prime, evaluation root, generator
// images (normalized mod the prime at ingestion and validated), and one
// meridian/longitude image pair per cusp.
struct PublishedRep {
  std::string name;
  int prime = 0;
  long root = -1;  // -1 when the fixture does not name one
  std::vector<ProjMat> generator_images;  // presentation generator order
  std::vector<std::pair<ProjMat, ProjMat>> peripheral;
};

// Everything one manifold's pipeline run needs. Loaded from a JSON manifest
// whose relative paths resolve against the manifest's directory.
struct FixtureBundle {
  std::string name;
  Presentation pres;
  std::optional<NumberField> field;
  std::optional<ExactMatrices> exact;  // generator matrices over the field
  std::vector<PublishedRep> published;
  nlohmann::ordered_json expect;  // optional expected-output block
};

FixtureBundle load_bundle(const std::string& manifest_path);

// A deterministic, versioned report: JSON for machines plus a text renderer.
// `ok` is true iff every expected-value comparison passed.
struct RunReport {
  nlohmann::ordered_json json;
  bool ok = true;
  std::string text() const;
};

RunReport run_method_g(const FixtureBundle& bundle);
RunReport run_method_r(const FixtureBundle& bundle, int ell);
RunReport run_bianchi_session();
RunReport run_batch(const std::vector<FixtureBundle>& bundles, const std::vector<int>& primes);

// The Bianchi group PSL(2,Z[w]) fixture behind run_bianchi_session, with the
// two index-12 subgroups and the four probe words of the session.
struct BianchiFixture {
  Presentation pres;
  std::vector<Word> h1, h2;
  std::vector<Word> probes;  // x0, x1, y0, y1
};
BianchiFixture bianchi_fixture();

}  // namespace sunada
