#include <doctest.h>

#include <random>
#include <sstream>

#include "sunada/psl2.hpp"
#include "sunada/words.hpp"

using namespace sunada;

namespace {

const std::vector<char> abc = {'a', 'b', 'c'};

Word rand_word(std::mt19937& rng, int ngens, int len) {
  std::uniform_int_distribution<int> gen(0, ngens - 1), sign(0, 1);
  std::vector<Letter> ls;
  for (int i = 0; i < len; ++i) ls.push_back({gen(rng), sign(rng) ? 1 : -1});
  return Word(std::move(ls));
}

}  // namespace

TEST_CASE("parse_word follows the capital-letter convention") {
  Word mu = parse_word("CbAcb", abc);
  std::vector<Letter> expected = {{2, -1}, {1, 1}, {0, -1}, {2, 1}, {1, 1}};
  CHECK(mu.letters() == expected);
  CHECK(mu.str(abc) == "CbAcb");

  CHECK(parse_word("aA", abc).empty());
  CHECK(parse_word("a B A C b", abc) ==
        Word({{0, 1}, {1, -1}, {0, -1}, {2, -1}, {1, 1}}));
  CHECK(parse_word("a,B,A,C,b", abc) == parse_word("aBACb", abc));
}

TEST_CASE("parse_word rejects undeclared letters with their position") {
  CHECK_THROWS_WITH_AS(parse_word("abXc", abc), doctest::Contains("'X' at position 3"), ParseError);
  CHECK_THROWS_AS(parse_word("a1b", abc), ParseError);
  CHECK_THROWS_AS(parse_word("d", abc), ParseError);
}

TEST_CASE("words are stored freely reduced and reduction is idempotent") {
  Word w = parse_word("abBAcaAC", abc);
  CHECK(w.empty());
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Word u = rand_word(rng, 3, i % 40);
    CHECK(Word(u.letters()) == u);  // re-reducing changes nothing
    std::string s = u.str(abc);
    CHECK(parse_word(s, abc) == u);  // parse . print is the identity
  }
}

TEST_CASE("invert reverses and flips") {
  CHECK(parse_word("abC", abc).inverse() == parse_word("cBA", abc));
  CHECK(Word().inverse() == Word());
  CHECK(parse_word("a", abc).inverse() == parse_word("A", abc));
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    Word u = rand_word(rng, 3, 25);
    CHECK(u.inverse().inverse() == u);
    CHECK((u * u.inverse()).empty());
  }
}

TEST_CASE("evaluate_word is a homomorphism into PSL(2,7)") {
  auto mul = [](const ProjMat& x, const ProjMat& y) { return multiply(x, y); };
  auto inv = [](const ProjMat& x) { return inverse(x); };
  ProjMat id = proj_identity(7);

  // Images from the published reduction of the K11n116 representation.
  std::vector<ProjMat> rho = {proj_mat(7, 6, 1, 6, 0), proj_mat(7, 1, 6, 3, 5),
                              proj_mat(7, 3, 4, 0, 5)};

  CHECK(evaluate_word(Word(), rho, id, mul, inv) == id);
  CHECK(evaluate_word(parse_word("aB", abc), rho, id, mul, inv) == proj_mat(7, -1, 0, 2, -1));
  CHECK(evaluate_word(parse_word("aaCbAccBB", abc), rho, id, mul, inv) == id);
  CHECK(evaluate_word(parse_word("aacbCbAAB", abc), rho, id, mul, inv) == id);

  std::mt19937 rng(13);
  const GroupPSL2& g = GroupPSL2::get(7);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(g.order()) - 1);
  std::vector<ProjMat> imgs = {g.at(pick(rng)), g.at(pick(rng)), g.at(pick(rng))};
  for (int i = 0; i < 50; ++i) {
    Word u = rand_word(rng, 3, 12), v = rand_word(rng, 3, 12);
    CHECK(evaluate_word(u * v, imgs, id, mul, inv) ==
          multiply(evaluate_word(u, imgs, id, mul, inv), evaluate_word(v, imgs, id, mul, inv)));
  }
}

TEST_CASE("presentation files parse, validate and round-trip") {
  std::istringstream in(
      "# a knot group\n"
      "generators: a b c\n"
      "relator: aaCbAccBB\n"
      "relator: aacbCbAAB\n"
      "cusp: meridian=CbAcb longitude=AAbCCbacb\n");
  Presentation pres = parse_presentation(in);
  CHECK(pres.ngens() == 3);
  CHECK(pres.relators.size() == 2);
  CHECK(pres.cusps.size() == 1);
  CHECK(pres.cusps[0].meridian == pres.parse("CbAcb"));

  std::istringstream again(render_presentation(pres));
  Presentation back = parse_presentation(again);
  CHECK(back.generators == pres.generators);
  CHECK(back.relators == pres.relators);
  CHECK(back.cusps.size() == pres.cusps.size());

  std::istringstream bad("generators: a a\n");
  CHECK_THROWS_AS(parse_presentation(bad), ParseError);
  std::istringstream bad2("relator: ab\n");
  CHECK_THROWS_AS(parse_presentation(bad2), ParseError);
  std::istringstream bad3("generators: a b\nrelator: abc\n");
  CHECK_THROWS_AS(parse_presentation(bad3), ParseError);
}

TEST_CASE("fixture presentations load") {
  Presentation k11 = load_presentation(std::string(SUNADA_FIXTURE_DIR) + "/k11n116.pres");
  CHECK(k11.ngens() == 3);
  CHECK(k11.cusps.size() == 1);
  Presentation l9 = load_presentation(std::string(SUNADA_FIXTURE_DIR) + "/l9a21.pres");
  CHECK(l9.cusps.size() == 2);
  CHECK(l9.relators[0].size() == 18);  // spelled with spaces in the file
  Presentation v29 = load_presentation(std::string(SUNADA_FIXTURE_DIR) + "/v2986.pres");
  CHECK(v29.cusps.size() == 1);
  CHECK(v29.cusps[0].meridian.size() == 1);
}
