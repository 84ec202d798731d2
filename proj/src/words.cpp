#include "sunada/words.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sunada {

Word::Word(std::vector<Letter> letters) {
  letters_.reserve(letters.size());
  for (const Letter& l : letters) {
    if (l.sign != 1 && l.sign != -1) throw ParseError("letter sign must be +1 or -1");
    if (!letters_.empty() && letters_.back().gen == l.gen &&
        letters_.back().sign == -l.sign) {
      letters_.pop_back();  // cancel adjacent g g^-1
    } else {
      letters_.push_back(l);
    }
  }
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l.sign = -l.sign;
  return Word(std::move(out));
}

Word Word::operator*(const Word& rhs) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

Word Word::pow(long e) const {
  Word base = e < 0 ? inverse() : *this;
  long n = e < 0 ? -e : e;
  Word acc;
  for (long i = 0; i < n; ++i) acc = acc * base;
  return acc;
}

std::string Word::str(const std::vector<char>& names) const {
  std::string out;
  out.reserve(letters_.size());
  for (const Letter& l : letters_) {
    char c = names.at(static_cast<std::size_t>(l.gen));
    out.push_back(l.sign > 0 ? c : static_cast<char>(std::toupper(c)));
  }
  return out;
}

Word parse_word(std::string_view text, const std::vector<char>& generators) {
  std::vector<Letter> letters;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
    char low = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto it = std::find(generators.begin(), generators.end(), low);
    if (it == generators.end() || !std::isalpha(static_cast<unsigned char>(c))) {
      std::ostringstream msg;
      msg << "undeclared letter '" << c << "' at position " << (i + 1);
      throw ParseError(msg.str());
    }
    int gen = static_cast<int>(it - generators.begin());
    int sign = std::isupper(static_cast<unsigned char>(c)) ? -1 : +1;
    letters.push_back({gen, sign});
  }
  return Word(std::move(letters));
}

void Presentation::validate() const {
  for (char c : generators) {
    if (!std::islower(static_cast<unsigned char>(c)))
      throw ParseError(std::string("generator name must be a single lowercase letter, got '") + c + "'");
  }
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (generators[i] == generators[j])
        throw ParseError(std::string("duplicate generator name '") + generators[i] + "'");
  auto check = [&](const Word& w, const char* what) {
    for (const Letter& l : w.letters())
      if (l.gen < 0 || l.gen >= ngens())
        throw ParseError(std::string(what) + " uses an undeclared generator index");
  };
  for (const Word& r : relators) check(r, "relator");
  for (const Cusp& c : cusps) {
    check(c.meridian, "meridian");
    check(c.longitude, "longitude");
  }
}

namespace {

std::string strip(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

Presentation parse_presentation(std::istream& in) {
  Presentation pres;
  bool have_generators = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    auto colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key: value'");
    std::string key = strip(s.substr(0, colon));
    std::string val = strip(s.substr(colon + 1));
    if (key == "generators") {
      if (have_generators)
        throw ParseError("line " + std::to_string(lineno) + ": duplicate generators line");
      for (char c : val) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
        pres.generators.push_back(c);
      }
      have_generators = true;
    } else if (key == "relator") {
      if (!have_generators)
        throw ParseError("line " + std::to_string(lineno) + ": relator before generators");
      pres.relators.push_back(pres.parse(val));
    } else if (key == "cusp") {
      if (!have_generators)
        throw ParseError("line " + std::to_string(lineno) + ": cusp before generators");
      auto mpos = val.find("meridian=");
      auto lpos = val.find("longitude=");
      if (mpos == std::string::npos || lpos == std::string::npos || lpos < mpos)
        throw ParseError("line " + std::to_string(lineno) +
                         ": cusp line must read 'meridian=<word> longitude=<word>'");
      std::string mer = val.substr(mpos + 9, lpos - (mpos + 9));
      std::string lon = val.substr(lpos + 10);
      pres.cusps.push_back({pres.parse(mer), pres.parse(lon)});
    } else {
      throw ParseError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_generators) throw ParseError("presentation file has no generators line");
  pres.validate();
  return pres;
}

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open presentation file: " + path);
  return parse_presentation(in);
}

std::string render_presentation(const Presentation& pres) {
  std::ostringstream out;
  out << "generators:";
  for (char c : pres.generators) out << ' ' << c;
  out << '\n';
  for (const Word& r : pres.relators) out << "relator: " << r.str(pres.generators) << '\n';
  for (const Cusp& c : pres.cusps)
    out << "cusp: meridian=" << c.meridian.str(pres.generators)
        << " longitude=" << c.longitude.str(pres.generators) << '\n';
  return out.str();
}

}  // namespace sunada
