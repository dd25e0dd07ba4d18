#include "ptcount/heights.hpp"

#include <algorithm>

namespace ptcount {

ProjectivePointQ canonicalize(std::span<const BigInt> raw) {
  if (raw.empty()) throw InvalidInput("projective point needs at least one coordinate");
  BigInt g = 0;
  for (const auto& v : raw) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  if (g == 0) throw InvalidInput("projective point cannot have all coordinates zero");
  const auto lead = std::find_if(raw.begin(), raw.end(), [](const BigInt& v) { return v != 0; });
  if (*lead < 0) g = -g;
  std::vector<BigInt> coords;
  coords.reserve(raw.size());
  for (const auto& v : raw) coords.emplace_back(v / g);
  return ProjectivePointQ(std::move(coords));
}

ProjectivePointQ canonicalize(std::span<const std::int64_t> raw) {
  std::vector<BigInt> big;
  big.reserve(raw.size());
  for (auto v : raw) big.push_back(to_big(v));
  return canonicalize(std::span<const BigInt>(big));
}

ProjectivePointQ canonicalize(std::initializer_list<std::int64_t> raw) {
  return canonicalize(std::span<const std::int64_t>(raw.begin(), raw.size()));
}

Polynomial Polynomial::monomial(std::size_t num_vars, std::vector<unsigned> exponents, const BigInt& coeff) {
  Polynomial p(num_vars);
  p.add_term(coeff, std::move(exponents));
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  std::vector<unsigned> e(num_vars, 0);
  e.at(index) = 1;
  return monomial(num_vars, std::move(e));
}

Polynomial& Polynomial::add_term(const BigInt& coeff, std::vector<unsigned> exponents) {
  if (exponents.size() != num_vars_) throw InvalidInput("exponent vector length does not match variable count");
  if (coeff == 0) return *this;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), exponents,
                             [](const Term& t, const std::vector<unsigned>& e) { return t.exponents < e; });
  if (it != terms_.end() && it->exponents == exponents) {
    it->coeff += coeff;
    if (it->coeff == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{coeff, std::move(exponents)});
  }
  return *this;
}

std::optional<unsigned> Polynomial::homogeneous_degree() const {
  std::optional<unsigned> deg;
  for (const auto& t : terms_) {
    unsigned d = 0;
    for (auto e : t.exponents) d += e;
    if (deg && *deg != d) return std::nullopt;
    deg = d;
  }
  return deg;
}

BigInt Polynomial::evaluate(std::span<const BigInt> x) const {
  if (x.size() != num_vars_) throw InvalidInput("point dimension does not match polynomial");
  BigInt sum = 0;
  BigInt power;
  for (const auto& t : terms_) {
    BigInt term = t.coeff;
    for (std::size_t i = 0; i < num_vars_; ++i) {
      if (t.exponents[i] == 0) continue;
      mpz_pow_ui(power.get_mpz_t(), x[i].get_mpz_t(), t.exponents[i]);
      term *= power;
    }
    sum += term;
  }
  return sum;
}

BigInt Polynomial::evaluate(std::span<const std::int64_t> x) const {
  std::vector<BigInt> big;
  big.reserve(x.size());
  for (auto v : x) big.push_back(to_big(v));
  return evaluate(std::span<const BigInt>(big));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) throw InvalidInput("adding polynomials in different variable counts");
  Polynomial r = *this;
  for (const auto& t : other.terms_) r.add_term(t.coeff, t.exponents);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other.scaled(-1); }

Polynomial Polynomial::scaled(const BigInt& c) const {
  Polynomial r(num_vars_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

SectionBasis::SectionBasis(std::vector<Polynomial> sections, unsigned degree)
    : sections_(std::move(sections)), degree_(degree) {
  if (sections_.empty()) throw InvalidInput("section basis must be nonempty");
  const std::size_t n = sections_.front().num_vars();
  bool any_nonzero = false;
  for (const auto& s : sections_) {
    if (s.num_vars() != n) throw InvalidInput("sections use different variable counts");
    if (s.is_zero()) continue;
    any_nonzero = true;
    if (s.homogeneous_degree() != degree_) throw InvalidInput("section is not homogeneous of the basis degree");
  }
  if (!any_nonzero) throw InvalidInput("section basis has only zero sections");
}

SectionBasis SectionBasis::coordinates(std::size_t m) {
  std::vector<Polynomial> s;
  for (std::size_t i = 0; i <= m; ++i) s.push_back(Polynomial::variable(m + 1, i));
  return SectionBasis(std::move(s), 1);
}

SectionBasis SectionBasis::monomials(std::size_t m, unsigned degree) {
  std::vector<Polynomial> s;
  std::vector<unsigned> e(m + 1, 0);
  // Exponent vectors of total degree `degree`, descending lexicographic.
  auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
    if (pos == m) {
      e[pos] = left;
      s.push_back(Polynomial::monomial(m + 1, e));
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      e[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, degree);
  return SectionBasis(std::move(s), degree);
}

std::vector<BigInt> SectionBasis::evaluate(const ProjectivePointQ& p) const {
  std::vector<BigInt> v;
  v.reserve(sections_.size());
  for (const auto& s : sections_) v.push_back(s.evaluate(std::span<const BigInt>(p.coords())));
  return v;
}

HeightValue height_of_values(std::span<const BigInt> values) {
  BigInt g = 0;
  BigInt mx = 0;
  for (const auto& v : values) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (abs(v) > mx) mx = abs(v);
  }
  if (g == 0) throw BasePointError("every section vanishes at the point");
  return HeightValue{mx / g};
}

HeightValue height_q(const SectionBasis& basis, const ProjectivePointQ& p) {
  if (p.coords().size() != basis.num_vars()) throw InvalidInput("point dimension does not match section basis");
  const auto values = basis.evaluate(p);
  return height_of_values(values);
}

std::vector<ProjectivePointQ> enumerate_projective_space(std::size_t m, std::int64_t bound) {
  std::vector<ProjectivePointQ> out;
  for_each_projective_point(m, bound, [&](std::span<const std::int64_t> x) { out.push_back(canonicalize(x)); });
  return out;
}

BigRational weil_comparison_bound(const SectionBasis& a, const SectionBasis& b, const IntMatrix& change) {
  if (change.size() != b.size()) throw InvalidInput("change-of-basis matrix must have one row per target section");
  if (a.num_vars() != b.num_vars() || a.degree() != b.degree()) throw InvalidInput("bases live on different spaces");
  BigInt max_entry = 0;
  for (std::size_t i = 0; i < change.size(); ++i) {
    if (change[i].size() != a.size()) throw InvalidInput("change-of-basis matrix has wrong column count");
    Polynomial combined(a.num_vars());
    for (std::size_t j = 0; j < a.size(); ++j) {
      combined = combined + a.sections()[j].scaled(change[i][j]);
      if (abs(change[i][j]) > max_entry) max_entry = abs(change[i][j]);
    }
    if (!(combined == b.sections()[i])) throw InvalidInput("target section is not the stated combination of source sections");
  }
  if (change.size() != a.size() || determinant(change) == 0) throw InvalidInput("change-of-basis matrix is singular");
  return BigRational(BigInt(static_cast<unsigned long>(a.size())) * max_entry);
}

}  // namespace ptcount
