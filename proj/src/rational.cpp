#include "deform/rational.hpp"

#include <stdexcept>

namespace deform {

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den))
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  std::string n(num[0] == '+' ? num.substr(1) : num);
  std::string d(den[0] == '+' ? den.substr(1) : den);
  mpz_class nz(n, 10), dz(d, 10);
  if (dz == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational r(nz, dz);
  r.canonicalize();
  return r;
}

std::string format_rational(const Rational& value) {
  Rational v(value);
  v.canonicalize();
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

void axpy(Vector& y, const Rational& a, const Vector& x) {
  if (a == 0) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) y[i] += a * x[i];
}

Vector operator+(const Vector& a, const Vector& b) {
  Vector r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Vector operator-(const Vector& a, const Vector& b) {
  Vector r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

Vector operator-(const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Vector operator*(const Rational& s, const Vector& v) {
  Vector r(v.size());
  if (s == 0) return r;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) r[i] = s * v[i];
  return r;
}

Vector unit_vector(std::size_t n, std::size_t i) {
  Vector v(n);
  v.at(i) = 1;
  return v;
}

}  // namespace deform
