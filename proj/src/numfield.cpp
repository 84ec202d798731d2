#include "sunada/numfield.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sunada {

namespace {

void normalize(std::vector<Int>& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// Remainder of a mod the monic polynomial f, exact over Z.
std::vector<Int> mod_monic(std::vector<Int> a, const std::vector<Int>& f) {
  int n = static_cast<int>(f.size()) - 1;
  while (static_cast<int>(a.size()) > n) {
    Int lead = a.back();
    int shift = static_cast<int>(a.size()) - 1 - n;
    if (lead != 0)
      for (int i = 0; i <= n; ++i)
        a[static_cast<std::size_t>(shift + i)] -= lead * f[static_cast<std::size_t>(i)];
    a.pop_back();
  }
  normalize(a);
  return a;
}

}  // namespace

void NumberField::validate() const {
  if (min_poly.size() < 2) throw NumfieldError("min_poly must have degree >= 1");
  if (min_poly.back() != 1) throw NumfieldError("min_poly must be monic");
}

std::string FieldElem::str() const {
  if (coeffs.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const Int& c = coeffs[i];
    if (c == 0) continue;
    if (!first) out << (c > 0 ? " + " : " - ");
    Int a = first ? c : Int(abs(c));
    first = false;
    if (i == 0)
      out << a.get_str();
    else if (a == 1)
      out << "t" << (i > 1 ? "^" + std::to_string(i) : "");
    else if (a == -1)
      out << "-t" << (i > 1 ? "^" + std::to_string(i) : "");
    else
      out << a.get_str() << "*t" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return out.str();
}

FieldElem fe_const(long v) {
  FieldElem e;
  if (v != 0) e.coeffs.emplace_back(v);
  return e;
}

FieldElem fe_from(std::vector<long> ascending) {
  FieldElem e;
  for (long v : ascending) e.coeffs.emplace_back(v);
  normalize(e.coeffs);
  return e;
}

FieldElem fe_add(const FieldElem& a, const FieldElem& b) {
  FieldElem r;
  r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  normalize(r.coeffs);
  return r;
}

FieldElem fe_neg(const FieldElem& a) {
  FieldElem r = a;
  for (Int& c : r.coeffs) c = -c;
  return r;
}

FieldElem fe_sub(const FieldElem& a, const FieldElem& b) { return fe_add(a, fe_neg(b)); }

FieldElem fe_mul(const NumberField& k, const FieldElem& a, const FieldElem& b) {
  if (a.coeffs.empty() || b.coeffs.empty()) return FieldElem{};
  std::vector<Int> prod(a.coeffs.size() + b.coeffs.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) prod[i + j] += a.coeffs[i] * b.coeffs[j];
  FieldElem r;
  r.coeffs = mod_monic(std::move(prod), k.min_poly);
  return r;
}

long fe_eval_mod(const FieldElem& a, long ell, long root) {
  Int acc = 0;
  for (std::size_t i = a.coeffs.size(); i-- > 0;) acc = acc * root + a.coeffs[i];
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), acc.get_mpz_t(), Int(ell).get_mpz_t());
  return r.get_si();
}

NFMatrix nf_identity() {
  NFMatrix m;
  m.e = {fe_const(1), fe_const(0), fe_const(0), fe_const(1)};
  return m;
}

NFMatrix nf_mul(const NumberField& k, const NFMatrix& x, const NFMatrix& y) {
  NFMatrix r;
  r.e[0] = fe_add(fe_mul(k, x.e[0], y.e[0]), fe_mul(k, x.e[1], y.e[2]));
  r.e[1] = fe_add(fe_mul(k, x.e[0], y.e[1]), fe_mul(k, x.e[1], y.e[3]));
  r.e[2] = fe_add(fe_mul(k, x.e[2], y.e[0]), fe_mul(k, x.e[3], y.e[2]));
  r.e[3] = fe_add(fe_mul(k, x.e[2], y.e[1]), fe_mul(k, x.e[3], y.e[3]));
  return r;
}

FieldElem nf_det(const NumberField& k, const NFMatrix& m) {
  return fe_sub(fe_mul(k, m.e[0], m.e[3]), fe_mul(k, m.e[1], m.e[2]));
}

NFMatrix nf_inv(const NumberField& k, const NFMatrix& m) {
  if (nf_det(k, m) != fe_const(1))
    throw NumfieldError("nf_inv requires determinant 1, got " + nf_det(k, m).str());
  NFMatrix r;
  r.e = {m.e[3], fe_neg(m.e[1]), fe_neg(m.e[2]), m.e[0]};
  return r;
}

bool nf_is_proj_identity(const NFMatrix& m) {
  if (!m.e[1].is_zero() || !m.e[2].is_zero()) return false;
  return (m.e[0] == fe_const(1) && m.e[3] == fe_const(1)) ||
         (m.e[0] == fe_const(-1) && m.e[3] == fe_const(-1));
}

Int resultant(const std::vector<Int>& f, const std::vector<Int>& g) {
  int m = static_cast<int>(f.size()) - 1;
  int n = static_cast<int>(g.size()) - 1;
  if (m < 0 || n < 0) throw NumfieldError("resultant of a zero polynomial");
  int dim = m + n;
  if (dim == 0) return Int(1);
  // Sylvester matrix: n rows of f's coefficients (descending), then m of g's.
  IntMatrix s(dim, dim);
  for (int r = 0; r < n; ++r)
    for (int i = 0; i <= m; ++i) s.at(r, r + i) = f[static_cast<std::size_t>(m - i)];
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= n; ++i) s.at(n + r, r + i) = g[static_cast<std::size_t>(n - i)];

  // Bareiss fraction-free elimination; divisions are exact.
  Int prev(1);
  int sign = 1;
  for (int k = 0; k < dim - 1; ++k) {
    if (s.at(k, k) == 0) {
      int piv = -1;
      for (int r = k + 1; r < dim; ++r)
        if (s.at(r, k) != 0) {
          piv = r;
          break;
        }
      if (piv < 0) return Int(0);
      for (int c = 0; c < dim; ++c) std::swap(s.at(k, c), s.at(piv, c));
      sign = -sign;
    }
    for (int r = k + 1; r < dim; ++r)
      for (int c = k + 1; c < dim; ++c) {
        Int num = s.at(r, c) * s.at(k, k) - s.at(r, k) * s.at(k, c);
        mpz_divexact(s.at(r, c).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = s.at(k, k);
  }
  return sign > 0 ? s.at(dim - 1, dim - 1) : Int(-s.at(dim - 1, dim - 1));
}

Int poly_discriminant(const std::vector<Int>& f) {
  int n = static_cast<int>(f.size()) - 1;
  if (n < 2) throw NumfieldError("discriminant needs degree >= 2");
  std::vector<Int> df(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) df[static_cast<std::size_t>(i - 1)] = i * f[static_cast<std::size_t>(i)];
  Int res = resultant(f, df);
  Int disc;
  mpz_divexact(disc.get_mpz_t(), res.get_mpz_t(), f.back().get_mpz_t());
  if ((static_cast<long>(n) * (n - 1) / 2) % 2 != 0) disc = -disc;
  return disc;
}

namespace {

// Dense polynomials over F_ell, ascending coefficients, always normalized.
using FpPoly = std::vector<long>;

void fp_norm(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long ell) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % ell;
  fp_norm(r);
  return r;
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, long ell) {
  long inv_lead = 1;
  for (long w = 1; w < ell; ++w)
    if (w * m.back() % ell == 1) inv_lead = w;
  while (a.size() >= m.size()) {
    long coef = a.back() * inv_lead % ell;
    std::size_t shift = a.size() - m.size();
    if (coef != 0)
      for (std::size_t i = 0; i < m.size(); ++i)
        a[shift + i] = ((a[shift + i] - coef * m[i]) % ell + ell) % ell;
    a.pop_back();
    fp_norm(a);
    if (a.empty()) break;
  }
  return a;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long ell) {
  while (!b.empty()) {
    FpPoly r = fp_mod(a, b, ell);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {  // make monic
    long inv_lead = 1;
    for (long w = 1; w < ell; ++w)
      if (w * a.back() % ell == 1) inv_lead = w;
    for (long& c : a) c = c * inv_lead % ell;
  }
  return a;
}

FpPoly fp_powmod_x(long exp_base, int times, const FpPoly& m, long ell) {
  // x^(ell^times) mod m by iterated Frobenius.
  FpPoly x = fp_mod({0, 1}, m, ell);
  FpPoly acc = x;
  for (int k = 0; k < times; ++k) {
    // acc = acc^ell mod m, square-and-multiply on the exponent ell.
    FpPoly result = fp_mod({1}, m, ell);
    FpPoly base = acc;
    long e = exp_base;
    while (e > 0) {
      if (e & 1) result = fp_mod(fp_mul(result, base, ell), m, ell);
      base = fp_mod(fp_mul(base, base, ell), m, ell);
      e >>= 1;
    }
    acc = result;
  }
  return acc;
}

FpPoly fp_divexact(const FpPoly& a, const FpPoly& b, long ell) {
  // a / b when b | a; schoolbook long division.
  FpPoly rem = a, q(a.size() - b.size() + 1, 0);
  long inv_lead = 1;
  for (long w = 1; w < ell; ++w)
    if (w * b.back() % ell == 1) inv_lead = w;
  while (rem.size() >= b.size() && !rem.empty()) {
    long coef = rem.back() * inv_lead % ell;
    std::size_t shift = rem.size() - b.size();
    q[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i)
      rem[shift + i] = ((rem[shift + i] - coef * b[i]) % ell + ell) % ell;
    fp_norm(rem);
    if (rem.empty()) break;
  }
  fp_norm(q);
  return q;
}

}  // namespace

SplittingReport split_prime(const NumberField& k, long ell) {
  k.validate();
  if (ell < 2) throw NumfieldError("prime expected, got " + std::to_string(ell));
  Int disc = poly_discriminant(k.min_poly);
  if (mpz_divisible_ui_p(disc.get_mpz_t(), static_cast<unsigned long>(ell)))
    throw NumfieldError(std::to_string(ell) + " divides the discriminant (ramified prime)");

  SplittingReport rep;
  rep.prime = ell;
  FpPoly f;
  for (const Int& c : k.min_poly) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), Int(ell).get_mpz_t());
    f.push_back(r.get_si());
  }
  fp_norm(f);

  // Distinct-degree factorization of the squarefree f mod ell: the gcd with
  // x^(ell^d) - x splits off the product of all degree-d irreducible factors.
  FpPoly g = f;
  for (int d = 1; static_cast<int>(g.size()) - 1 > 0; ++d) {
    int deg_g = static_cast<int>(g.size()) - 1;
    if (2 * d > deg_g) {
      rep.factor_degrees.push_back(deg_g);  // irreducible remainder
      break;
    }
    FpPoly frob = fp_powmod_x(ell, d, g, ell);
    FpPoly diff = frob;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = ((diff[1] - 1) % ell + ell) % ell;
    fp_norm(diff);
    FpPoly h = fp_gcd(g, diff, ell);
    if (!h.empty() && h.size() > 1) {
      int copies = (static_cast<int>(h.size()) - 1) / d;
      for (int i = 0; i < copies; ++i) rep.factor_degrees.push_back(d);
      g = fp_divexact(g, h, ell);
    }
  }
  std::sort(rep.factor_degrees.begin(), rep.factor_degrees.end());

  for (long r = 0; r < ell; ++r) {
    long acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = (acc * r + f[i]) % ell;
    if (acc == 0) rep.degree_one_roots.push_back(r);
  }

  int ones = static_cast<int>(std::count(rep.factor_degrees.begin(), rep.factor_degrees.end(), 1));
  if (ones != static_cast<int>(rep.degree_one_roots.size()))
    throw NumfieldError("internal: degree-one factor count disagrees with root scan");
  int total = 0;
  for (int d : rep.factor_degrees) total += d;
  if (total != k.degree())
    throw NumfieldError("internal: factor degrees do not sum to the field degree");
  return rep;
}

ProjMat reduce_matrix(const NumberField& k, const NFMatrix& m, long ell, long root) {
  FieldElem fbar;
  fbar.coeffs = k.min_poly;
  if (fe_eval_mod(fbar, ell, root) != 0)
    throw NumfieldError("t = " + std::to_string(root) + " is not a root of the minimal polynomial mod " +
                        std::to_string(ell));
  long a = fe_eval_mod(m.e[0], ell, root);
  long b = fe_eval_mod(m.e[1], ell, root);
  long c = fe_eval_mod(m.e[2], ell, root);
  long d = fe_eval_mod(m.e[3], ell, root);
  long det = ((a * d - b * c) % ell + ell) % ell;
  if (det != 1)
    throw NumfieldError("reduced matrix has determinant " + std::to_string(det) +
                        " mod " + std::to_string(ell) + " (corrupted fixture?)");
  return proj_mat(static_cast<int>(ell), a, b, c, d);
}

namespace {

std::vector<Int> json_to_coeffs(const nlohmann::json& j) {
  std::vector<Int> out;
  for (const auto& c : j) {
    if (c.is_number_integer())
      out.emplace_back(c.get<long>());
    else
      out.emplace_back(c.get<std::string>());  // large coefficients as strings
  }
  return out;
}

FieldElem json_to_elem(const nlohmann::json& j) {
  FieldElem e;
  e.coeffs = json_to_coeffs(j);
  while (!e.coeffs.empty() && e.coeffs.back() == 0) e.coeffs.pop_back();
  return e;
}

NFMatrix json_to_nfmat(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4)
    throw NumfieldError("matrix entry must be an array of 4 coefficient lists");
  NFMatrix m;
  for (int i = 0; i < 4; ++i) m.e[static_cast<std::size_t>(i)] = json_to_elem(j[static_cast<std::size_t>(i)]);
  return m;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NumfieldError("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

NumberField load_number_field(const std::string& path) {
  nlohmann::json j = load_json(path);
  NumberField k;
  k.min_poly = json_to_coeffs(j.at("min_poly"));
  k.validate();
  return k;
}

ExactMatrices load_nf_matrices(const std::string& path) {
  nlohmann::json j = load_json(path);
  ExactMatrices out;
  for (const auto& [name, mat] : j.at("generators").items())
    out.generators.emplace_back(name, json_to_nfmat(mat));
  std::sort(out.generators.begin(), out.generators.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (j.contains("peripheral"))
    for (const auto& cusp : j.at("peripheral"))
      out.peripheral.push_back({json_to_nfmat(cusp.at("meridian")), json_to_nfmat(cusp.at("longitude"))});
  return out;
}

}  // namespace sunada
