#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sunada {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One letter of a free-group word: generator index and exponent sign (+1/-1).
struct Letter {
  int gen = 0;
  int sign = +1;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

// A word in a free group, stored freely reduced. Immutable after construction.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);  // freely reduces its input

  const std::vector<Letter>& letters() const { return letters_; }
  bool empty() const { return letters_.empty(); }
  std::size_t size() const { return letters_.size(); }

  Word inverse() const;               // reverse, flip signs
  Word operator*(const Word&) const;  // concatenate, reduce
  Word pow(long e) const;

  // Prints in the capital-letter convention: lowercase = generator,
  // uppercase = inverse. `names[g]` is the letter of generator g.
  std::string str(const std::vector<char>& names) const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

// Parses a word in the capital-letter notation over the given
// single-letter generator names. Whitespace and commas are ignored. An undeclared letter
// raises ParseError naming the character and its 1-based position.
Word parse_word(std::string_view text, const std::vector<char>& generators);

struct Cusp {
  Word meridian;
  Word longitude;
};

// A finite presentation with optional peripheral structure.
struct Presentation {
  std::vector<char> generators;  // distinct single lowercase letters
  std::vector<Word> relators;
  std::vector<Cusp> cusps;

  int ngens() const { return static_cast<int>(generators.size()); }
  Word parse(std::string_view text) const { return parse_word(text, generators); }
  void validate() const;  // throws ParseError on malformed data
};

// Line-oriented presentation file format:
//   # comment
//   generators: a b c
//   relator: aaCbAccBB
//   cusp: meridian=CbAcb longitude=AAbCCbacb
// Words may contain spaces and commas; the cusp line is split at the
// literal token "longitude=".
Presentation parse_presentation(std::istream& in);
Presentation load_presentation(const std::string& path);
std::string render_presentation(const Presentation& pres);

// Pushes a word through a homomorphism given by generator images.
// `mul(x,y)` multiplies, `inv(x)` inverts; the empty word maps to `id`.
template <typename Elt, typename MulFn, typename InvFn>
Elt evaluate_word(const Word& w, const std::vector<Elt>& images, const Elt& id,
                  MulFn mul, InvFn inv) {
  Elt acc = id;
  for (const Letter& l : w.letters()) {
    const Elt& g = images.at(static_cast<std::size_t>(l.gen));
    acc = l.sign > 0 ? mul(acc, g) : mul(acc, inv(g));
  }
  return acc;
}

}  // namespace sunada
