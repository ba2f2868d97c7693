#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace deform {

using Rational = mpq_class;
using Vector = std::vector<Rational>;

// Accepts "p", "p/q", "-p/q" (whitespace not allowed). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& value);

inline Vector zeros(std::size_t n) { return Vector(n); }
bool is_zero(const Vector& v);
void axpy(Vector& y, const Rational& a, const Vector& x);  // y += a x
Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(const Rational& s, const Vector& v);
Vector unit_vector(std::size_t n, std::size_t i);

inline int sign_of_parity(long long k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace deform
