#include "deform/chain.hpp"

#include <algorithm>
#include <set>

namespace deform {

namespace {
const std::vector<std::string> kNoLabels;
}

GradedSpace::GradedSpace(std::map<int, std::vector<std::string>> labels) {
  for (auto& [n, l] : labels) {
    if (l.empty()) continue;
    std::vector<std::string> sorted = l;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidComplex("duplicate basis label in degree " + std::to_string(n));
    labels_[n] = std::move(l);
  }
}

std::size_t GradedSpace::dim(int n) const {
  auto it = labels_.find(n);
  return it == labels_.end() ? 0 : it->second.size();
}

std::size_t GradedSpace::total_dim() const {
  std::size_t t = 0;
  for (const auto& [n, l] : labels_) t += l.size();
  return t;
}

const std::vector<std::string>& GradedSpace::labels(int n) const {
  auto it = labels_.find(n);
  return it == labels_.end() ? kNoLabels : it->second;
}

std::vector<int> GradedSpace::degrees() const {
  std::vector<int> out;
  for (const auto& [n, l] : labels_) out.push_back(n);
  return out;
}

int GradedSpace::min_degree() const { return labels_.empty() ? 0 : labels_.begin()->first; }
int GradedSpace::max_degree() const { return labels_.empty() ? 0 : labels_.rbegin()->first; }

std::size_t GradedSpace::offset(int n) const {
  std::size_t t = 0;
  for (const auto& [k, l] : labels_) {
    if (k >= n) break;
    t += l.size();
  }
  return t;
}

Complex::Complex(GradedSpace space, std::map<int, Matrix> differential, Orientation orientation)
    : space_(std::move(space)), orientation_(orientation) {
  for (auto& [n, m] : differential) {
    if (m.rows() != space_.dim(n - 1) || m.cols() != space_.dim(n))
      throw InvalidComplex("differential in degree " + std::to_string(n) + " has shape " +
                           std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                           std::to_string(space_.dim(n - 1)) + "x" + std::to_string(space_.dim(n)));
    if (!m.is_zero()) d_[n] = std::move(m);
  }
  for (const auto& [n, m] : d_) {
    auto it = d_.find(n - 1);
    if (it != d_.end() && !(it->second * m).is_zero())
      throw InvalidComplex("d_" + std::to_string(n - 1) + " d_" + std::to_string(n) + " != 0");
  }
}

Matrix Complex::d(int n) const {
  auto it = d_.find(n);
  if (it != d_.end()) return it->second;
  return Matrix(space_.dim(n - 1), space_.dim(n));
}

Complex Complex::with_orientation(Orientation o) const {
  Complex c = *this;
  c.orientation_ = o;
  return c;
}

bool Complex::operator==(const Complex& other) const {
  if (orientation_ != other.orientation_) return false;
  if (space_.degrees() != other.space_.degrees()) return false;
  for (int n : space_.degrees())
    if (space_.labels(n) != other.space_.labels(n)) return false;
  return d_ == other.d_;
}

Matrix ChainMap::at(int n) const {
  auto it = components.find(n);
  if (it != components.end()) return it->second;
  return Matrix(target.dim(n + degree), source.dim(n));
}

bool ChainMap::commutes() const {
  int lo = std::min(source.space().min_degree(), target.space().min_degree() - degree) - 1;
  int hi = std::max(source.space().max_degree(), target.space().max_degree() - degree) + 1;
  for (int n = lo; n <= hi; ++n) {
    Matrix lhs = target.d(n + degree) * at(n);
    Matrix rhs = at(n - 1) * source.d(n);
    Matrix diff = (degree % 2 == 0) ? lhs - rhs : lhs + rhs;
    if (!diff.is_zero()) return false;
  }
  return true;
}

Homology homology(const Complex& c, int n) {
  return homology_at(c.d(n + 1), c.d(n), c.dim(n));
}

std::vector<std::size_t> betti_numbers(const Complex& c, int lo, int hi) {
  std::vector<std::size_t> out;
  for (int n = lo; n <= hi; ++n) out.push_back(homology(c, n).dim);
  return out;
}

bool is_acyclic(const Complex& c) {
  for (int n : c.degrees())
    if (homology(c, n).dim != 0) return false;
  return true;
}

Complex hom_complex(const Complex& m, const Complex& n) {
  if (m.space().empty() || n.space().empty()) return Complex({}, {}, Orientation::cochain);
  int ilo = m.space().min_degree() - n.space().max_degree();
  int ihi = m.space().max_degree() - n.space().min_degree();
  // basis of Hom^i: for each source degree q, target degree q - i: E(p <- x)
  struct Slot {
    int src_deg;
    std::size_t src, tgt;
  };
  std::map<int, std::vector<Slot>> slots;
  std::map<int, std::vector<std::string>> labels;
  for (int i = ilo; i <= ihi; ++i) {
    for (int q : m.degrees()) {
      int p = q - i;
      for (std::size_t a = 0; a < m.dim(q); ++a)
        for (std::size_t b = 0; b < n.dim(p); ++b) {
          slots[i].push_back({q, a, b});
          labels[-i].push_back(n.space().labels(p)[b] + "<-" + m.space().labels(q)[a]);
        }
    }
  }
  auto index_of = [&](int i, int q, std::size_t a, std::size_t b) -> std::size_t {
    // slots are ordered by (q increasing, a, b)
    std::size_t idx = 0;
    for (int qq : m.degrees()) {
      if (qq == q) return idx + a * n.dim(q - i) + b;
      idx += m.dim(qq) * n.dim(qq - i);
    }
    return idx;
  };
  std::map<int, Matrix> d;
  for (int i = ilo; i <= ihi; ++i) {
    auto it = slots.find(i);
    if (it == slots.end()) continue;
    std::size_t rows = slots.count(i + 1) ? slots[i + 1].size() : 0;
    Matrix mat(rows, it->second.size());
    int sign = (i % 2 == 0) ? 1 : -1;
    for (std::size_t col = 0; col < it->second.size(); ++col) {
      const Slot& s = it->second[col];
      int p = s.src_deg - i;
      // d_N o E(b <- a): E(b' <- a) with coefficient dN[b', b]
      Matrix dn = n.d(p);
      for (std::size_t b2 = 0; b2 < dn.rows(); ++b2) {
        Rational x = dn.at(b2, s.tgt);
        if (x != 0) mat.add(index_of(i + 1, s.src_deg, s.src, b2), col, x);
      }
      // -(-1)^i E(b <- a) o d_M : E(b <- a') with coefficient dM[a, a'], a' in M_{q+1}
      Matrix dm = m.d(s.src_deg + 1);
      for (std::size_t a2 = 0; a2 < dm.cols(); ++a2) {
        Rational x = dm.at(s.src, a2);
        if (x != 0) mat.add(index_of(i + 1, s.src_deg + 1, a2, s.tgt), col, -sign * x);
      }
    }
    d[-i] = std::move(mat);
  }
  return Complex(GradedSpace(labels), std::move(d), Orientation::cochain);
}

Complex tensor(const Complex& u, const Complex& v) {
  std::map<int, std::vector<std::string>> labels;
  for (int i : u.degrees())
    for (int j : v.degrees())
      for (const auto& x : u.space().labels(i))
        for (const auto& y : v.space().labels(j)) labels[i + j].push_back(x + "⊗" + y);
  // index of (i, a, j, b) in degree i + j, ordering: i increasing, then a, then b
  auto index_of = [&](int i, std::size_t a, int j, std::size_t b) {
    int n = i + j;
    std::size_t idx = 0;
    for (int ii : u.degrees()) {
      if (ii == i) return idx + a * v.dim(j) + b;
      idx += u.dim(ii) * v.dim(n - ii);
    }
    return idx;
  };
  std::map<int, Matrix> d;
  GradedSpace space(labels);
  for (int n : space.degrees()) {
    Matrix mat(space.dim(n - 1), space.dim(n));
    for (int i : u.degrees()) {
      int j = n - i;
      if (v.dim(j) == 0) continue;
      Matrix du = u.d(i), dv = v.d(j);
      int sign = (i % 2 == 0) ? 1 : -1;
      for (std::size_t a = 0; a < u.dim(i); ++a)
        for (std::size_t b = 0; b < v.dim(j); ++b) {
          std::size_t col = index_of(i, a, j, b);
          for (std::size_t a2 = 0; a2 < du.rows(); ++a2) {
            Rational x = du.at(a2, a);
            if (x != 0) mat.add(index_of(i - 1, a2, j, b), col, x);
          }
          for (std::size_t b2 = 0; b2 < dv.rows(); ++b2) {
            Rational x = dv.at(b2, b);
            if (x != 0) mat.add(index_of(i, a, j - 1, b2), col, sign * x);
          }
        }
    }
    d[n] = std::move(mat);
  }
  return Complex(space, std::move(d), u.orientation());
}

Complex shift(const Complex& c, int i) {
  std::map<int, std::vector<std::string>> labels;
  for (int n : c.degrees()) labels[n - i] = c.space().labels(n);
  std::map<int, Matrix> d;
  for (int n : c.degrees()) d[n - i] = (i % 2 == 0) ? c.d(n) : c.d(n).scaled(-1);
  return Complex(GradedSpace(labels), std::move(d), c.orientation());
}

Complex cone(const ChainMap& f) {
  if (f.degree != 0) throw InvalidComplex("cone needs a degree-0 chain map");
  const Complex& m = f.source;
  const Complex& n = f.target;
  std::map<int, std::vector<std::string>> labels;
  std::set<int> degs;
  for (int k : m.degrees()) degs.insert(k + 1);
  for (int k : n.degrees()) degs.insert(k);
  for (int k : degs) {
    for (const auto& x : m.space().labels(k - 1)) labels[k].push_back("s" + x);
    for (const auto& y : n.space().labels(k)) labels[k].push_back(y);
  }
  GradedSpace space(labels);
  std::map<int, Matrix> d;
  for (int k : degs) {
    std::size_t mk = m.dim(k - 1), nk = n.dim(k);
    std::size_t mk1 = m.dim(k - 2);
    Matrix mat(space.dim(k - 1), mk + nk);
    Matrix dm = m.d(k - 1), fk = f.at(k - 1), dn = n.d(k);
    for (std::size_t i = 0; i < dm.rows(); ++i)
      for (const auto& [j, x] : dm.row(i)) mat.add(i, j, -x);
    for (std::size_t i = 0; i < fk.rows(); ++i)
      for (const auto& [j, x] : fk.row(i)) mat.add(mk1 + i, j, x);
    for (std::size_t i = 0; i < dn.rows(); ++i)
      for (const auto& [j, x] : dn.row(i)) mat.add(mk1 + i, mk + j, x);
    d[k] = std::move(mat);
  }
  return Complex(space, std::move(d), m.orientation());
}

Complex cone(const Complex& m) { return cone(identity_map(m)); }

Complex u_convert(const Complex& c) {
  return c.with_orientation(c.orientation() == Orientation::chain ? Orientation::cochain : Orientation::chain);
}

Complex cochain_shift(const Complex& c, int j) { return shift(c, -j); }

Complex direct_sum(const Complex& a, const Complex& b) {
  std::map<int, std::vector<std::string>> labels;
  std::set<int> degs;
  for (int k : a.degrees()) degs.insert(k);
  for (int k : b.degrees()) degs.insert(k);
  for (int k : degs) {
    for (const auto& x : a.space().labels(k)) labels[k].push_back("0." + x);
    for (const auto& y : b.space().labels(k)) labels[k].push_back("1." + y);
  }
  GradedSpace space(labels);
  std::map<int, Matrix> d;
  for (int k : degs) {
    Matrix mat(space.dim(k - 1), space.dim(k));
    Matrix da = a.d(k), db = b.d(k);
    for (std::size_t i = 0; i < da.rows(); ++i)
      for (const auto& [j, x] : da.row(i)) mat.add(i, j, x);
    for (std::size_t i = 0; i < db.rows(); ++i)
      for (const auto& [j, x] : db.row(i)) mat.add(a.dim(k - 1) + i, a.dim(k) + j, x);
    d[k] = std::move(mat);
  }
  return Complex(space, std::move(d), a.orientation());
}

ChainMap identity_map(const Complex& c) {
  ChainMap f{c, c, 0, {}};
  for (int n : c.degrees()) f.components[n] = Matrix::identity(c.dim(n));
  return f;
}

Complex zero_complex() { return Complex(); }

}  // namespace deform
