#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "deform/linalg.hpp"

namespace deform {

class InvalidComplex : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Orientation { chain, cochain };

// Finite-support graded vector space with labelled bases. Degrees are homological.
class GradedSpace {
 public:
  GradedSpace() = default;
  explicit GradedSpace(std::map<int, std::vector<std::string>> labels);

  std::size_t dim(int n) const;
  std::size_t total_dim() const;
  const std::vector<std::string>& labels(int n) const;
  std::vector<int> degrees() const;  // degrees with nonzero dimension, increasing
  bool empty() const { return labels_.empty(); }
  int min_degree() const;
  int max_degree() const;
  // Position of degree-n basis vector i in the concatenation of all degrees (increasing).
  std::size_t offset(int n) const;

 private:
  std::map<int, std::vector<std::string>> labels_;
};

// Chain complex d_n : C_n -> C_{n-1}. A cochain complex is stored with C^i = C_{-i};
// the orientation flag only records which reading is intended.
class Complex {
 public:
  Complex() = default;
  // Throws InvalidComplex on shape mismatch or d^2 != 0.
  Complex(GradedSpace space, std::map<int, Matrix> differential, Orientation orientation = Orientation::chain);

  const GradedSpace& space() const { return space_; }
  Orientation orientation() const { return orientation_; }
  std::size_t dim(int n) const { return space_.dim(n); }
  // d_n : C_n -> C_{n-1}, a dim(n-1) x dim(n) matrix (zero when absent).
  Matrix d(int n) const;
  std::vector<int> degrees() const { return space_.degrees(); }

  // Cochain reading: C^i = C_{-i}, d^i : C^i -> C^{i+1} equals d_{-i}.
  std::size_t cochain_dim(int i) const { return dim(-i); }
  Matrix cochain_d(int i) const { return d(-i); }

  Complex with_orientation(Orientation o) const;
  bool operator==(const Complex& other) const;

 private:
  GradedSpace space_;
  std::map<int, Matrix> d_;
  Orientation orientation_ = Orientation::chain;
};

// Degree-r map: component n is a dim_target(n+r) x dim_source(n) matrix.
struct ChainMap {
  Complex source;
  Complex target;
  int degree = 0;
  std::map<int, Matrix> components;

  Matrix at(int n) const;
  // d f - (-1)^r f d == 0 in every degree
  bool commutes() const;
};

Homology homology(const Complex& c, int n);
std::vector<std::size_t> betti_numbers(const Complex& c, int lo, int hi);
bool is_acyclic(const Complex& c);

Complex hom_complex(const Complex& m, const Complex& n);
Complex tensor(const Complex& u, const Complex& v);
// (M_[i])_m = M_{i+m}, differential (-1)^i d.
Complex shift(const Complex& c, int i);
// cone(f)_n = M_{n-1} (+) N_n, d(x, y) = (-d x, f x + d y).
Complex cone(const ChainMap& f);
Complex cone(const Complex& m);
// chain <-> cochain reading (same data, flag flipped); u(u(c)) == c.
Complex u_convert(const Complex& c);
// Cochain shift (M^[j])^m = M^{j+m}, i.e. chain shift by -j.
Complex cochain_shift(const Complex& c, int j);

Complex direct_sum(const Complex& a, const Complex& b);
ChainMap identity_map(const Complex& c);
Complex zero_complex();

}  // namespace deform
