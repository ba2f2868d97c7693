#include "deform/operad.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace deform {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Calls f(inputs) for every tuple in {0..dim-1}^n in mixed-radix order.
template <class F>
void for_each_tuple(std::size_t dim, int n, F&& f) {
  std::vector<std::size_t> t(static_cast<std::size_t>(n), 0);
  if (n > 0 && dim == 0) return;
  while (true) {
    f(static_cast<const std::vector<std::size_t>&>(t));
    int k = n - 1;
    while (k >= 0 && ++t[static_cast<std::size_t>(k)] == dim) t[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return;
  }
}

int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

// (-1)^{n(n-1)/2} (-1)^{sum_k (n-1-k)(|a_k|+1)}
int suspension_sign(const FlatBasis& b, const std::vector<std::size_t>& inputs) {
  const long n = static_cast<long>(inputs.size());
  long e = n * (n - 1) / 2;
  for (long k = 0; k < n; ++k) e += (n - 1 - k) * (b.degrees[inputs[static_cast<std::size_t>(k)]] + 1);
  return parity_sign(e);
}

int internal_degree(const FlatBasis& b, std::size_t out, const std::vector<std::size_t>& inputs) {
  int c = b.degrees[out];
  for (std::size_t i : inputs) c -= b.degrees[i];
  return c;
}

}  // namespace

FlatBasis flat_basis(const Complex& a) {
  FlatBasis b;
  for (int n : a.degrees())
    for (const auto& l : a.space().labels(n)) {
      b.degrees.push_back(n);
      b.labels.push_back(l);
    }
  const std::size_t dim = b.degrees.size();
  b.d = Matrix(dim, dim);
  for (int n : a.degrees()) {
    if (a.dim(n - 1) == 0) continue;
    Matrix dn = a.d(n);
    std::size_t ro = a.space().offset(n - 1), co = a.space().offset(n);
    for (std::size_t i = 0; i < dn.rows(); ++i)
      for (const auto& [j, x] : dn.row(i)) b.d.set(ro + i, co + j, x);
  }
  return b;
}

Complex complex_from_flat(const std::vector<int>& degrees, const std::vector<std::string>& labels, const Matrix& d,
                          Orientation o) {
  std::map<int, std::vector<std::string>> lab;
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    lab[degrees[i]].push_back(labels[i]);
    idx[degrees[i]].push_back(i);
  }
  std::map<int, Matrix> dm;
  for (const auto& [n, cols] : idx) {
    auto it = idx.find(n - 1);
    if (it == idx.end()) continue;
    Matrix block = d.submatrix(it->second, cols);
    if (!block.is_zero()) dm[n] = block;
  }
  return Complex(GradedSpace(lab), dm, o);
}

bool CooperadSlot::has(int n) const { return std::find(arities.begin(), arities.end(), n) != arities.end(); }

CooperadSlot associative_slot(int cutoff) {
  if (cutoff < 2) throw CutoffTooSmall("arity cutoff must be at least 2");
  CooperadSlot s;
  s.cutoff = cutoff;
  for (int n = 2; n <= cutoff; ++n) s.arities.push_back(n);
  return s;
}

CooperadSlot with_counit(const CooperadSlot& slot) {
  CooperadSlot s = slot;
  if (!s.has(1)) s.arities.insert(s.arities.begin(), 1);
  return s;
}

std::size_t multilinear_index(std::size_t dim, std::size_t out, const std::vector<std::size_t>& inputs) {
  std::size_t idx = out;
  for (std::size_t i : inputs) idx = idx * dim + i;
  return idx;
}

std::size_t ConvolutionDgla::index(int arity, std::size_t out, const std::vector<std::size_t>& inputs) const {
  return offsets.at(arity) + multilinear_index(basis.dim(), out, inputs);
}

int ConvolutionDgla::arity(std::size_t idx) const {
  int best = -1;
  for (const auto& [n, off] : offsets)
    if (idx >= off) best = n;
  return best;
}

std::pair<std::size_t, std::vector<std::size_t>> ConvolutionDgla::decode(std::size_t idx) const {
  int n = arity(idx);
  std::size_t local = idx - offsets.at(n), dim = basis.dim();
  std::vector<std::size_t> inputs(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    inputs[static_cast<std::size_t>(k)] = local % dim;
    local /= dim;
  }
  return {local, inputs};
}

std::vector<std::size_t> ConvolutionDgla::arity_indices(int n) const {
  std::vector<std::size_t> out;
  auto it = offsets.find(n);
  if (it == offsets.end()) return out;
  std::size_t count = ipow(basis.dim(), n + 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(it->second + i);
  return out;
}

ConvolutionDgla build_convolution(const Complex& a, const CooperadSlot& slot) {
  if (slot.cutoff < 2) throw CutoffTooSmall("arity cutoff must be at least 2");
  ConvolutionDgla c;
  c.algebra = a;
  c.basis = flat_basis(a);
  c.slot = slot;
  const FlatBasis& b = c.basis;
  const std::size_t dim = b.dim();
  std::size_t total = 0;
  for (int n : slot.arities) {
    if (n < 1 || n > slot.cutoff) throw std::invalid_argument("build_convolution: arity outside 1..cutoff");
    c.offsets[n] = total;
    total += ipow(dim, n + 1);
  }
  std::vector<std::string> names(total);
  std::vector<int> degrees(total);
  for (int n : slot.arities)
    for (std::size_t o = 0; o < dim; ++o)
      for_each_tuple(dim, n, [&](const std::vector<std::size_t>& in) {
        std::size_t idx = c.index(n, o, in);
        std::string name = b.labels[o] + "<-(";
        for (std::size_t k = 0; k < in.size(); ++k) name += (k ? "," : "") + b.labels[in[k]];
        names[idx] = name + ")";
        degrees[idx] = CooperadSlot::suspension(n) - internal_degree(b, o, in);
      });

  // f.g summed over insertion positions, added antisymmetrically into the bracket
  BilinearTable br(total, total, total);
  std::vector<std::size_t> merged;
  for (int p : slot.arities)
    for (int q : slot.arities) {
      int r = p + q - 1;
      if (r > slot.cutoff || !slot.has(r)) continue;
      for (std::size_t o = 0; o < dim; ++o)
        for_each_tuple(dim, p, [&](const std::vector<std::size_t>& in) {
          std::size_t f = c.index(p, o, in);
          long prefix = 0;  // suspended degrees of inputs before the insertion point
          for (int pos = 0; pos < p; ++pos) {
            std::size_t slot_out = in[static_cast<std::size_t>(pos)];
            for_each_tuple(dim, q, [&](const std::vector<std::size_t>& jn) {
              std::size_t g = c.index(q, slot_out, jn);
              merged.assign(in.begin(), in.begin() + pos);
              merged.insert(merged.end(), jn.begin(), jn.end());
              merged.insert(merged.end(), in.begin() + pos + 1, in.end());
              std::size_t target = c.index(r, o, merged);
              int sign = parity_sign(static_cast<long>(degrees[g]) * prefix);
              br.add(f, g, target, sign);
              br.add(g, f, target, -sign * parity_sign(static_cast<long>(degrees[f]) * degrees[g]));
            });
            prefix += b.degrees[slot_out] + 1;
          }
        });
    }

  // d f = [b_1, f] = b_1.f - (-1)^{|f|} f.b_1
  Matrix d(total, total);
  const Matrix dt = b.d.transpose();
  for (int n : slot.arities)
    for (std::size_t o = 0; o < dim; ++o)
      for_each_tuple(dim, n, [&](const std::vector<std::size_t>& in) {
        std::size_t f = c.index(n, o, in);
        for (const auto& [o2, x] : dt.row(o)) d.add(c.index(n, o2, in), f, x);
        int fs = parity_sign(degrees[f]);
        long prefix = 0;
        std::vector<std::size_t> changed = in;
        for (int pos = 0; pos < n; ++pos) {
          std::size_t slot_out = in[static_cast<std::size_t>(pos)];
          for (const auto& [j, x] : b.d.row(slot_out)) {
            changed[static_cast<std::size_t>(pos)] = j;
            d.add(c.index(n, o, changed), f, -fs * parity_sign(prefix) * x);
          }
          changed[static_cast<std::size_t>(pos)] = slot_out;
          prefix += b.degrees[slot_out] + 1;
        }
      });
  c.dgla = Dgla(std::move(names), std::move(degrees), std::move(d), std::move(br));
  return c;
}

ConvolutionDgla build_convolution(const Complex& a, int cutoff, bool augmented) {
  CooperadSlot s;
  s.cutoff = cutoff;
  if (cutoff < 2) throw CutoffTooSmall("arity cutoff must be at least 2");
  for (int n = augmented ? 1 : 2; n <= cutoff; ++n) s.arities.push_back(n);
  return build_convolution(a, s);
}

AInftyStructure strict_structure(const Complex& a, const BilinearTable& product) {
  FlatBasis b = flat_basis(a);
  const std::size_t dim = b.dim();
  if (product.left_dim() != dim || product.right_dim() != dim || product.out_dim() != dim)
    throw std::invalid_argument("strict_structure: product table has wrong shape");
  Vector m2(ipow(dim, 3));
  for (std::size_t i = 0; i < dim; ++i)
    for (const auto& [j, v] : product.row(i))
      for (const auto& [k, x] : v) m2[multilinear_index(dim, k, {i, j})] = x;
  AInftyStructure s;
  s.m[2] = m2;
  return s;
}

AlgebraData algebra_of_ring(const ArtinianCdga& r) {
  AlgebraData out;
  out.complex = r.complex();
  const std::size_t dim = r.dim();
  out.flat_of_ring.assign(dim, 0);
  std::size_t pos = 0;
  for (int n : out.complex.degrees())
    for (std::size_t i = 0; i < dim; ++i)
      if (r.degree(i) == n) out.flat_of_ring[i] = pos++;
  BilinearTable product(dim, dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (const auto& [j, v] : r.multiplication().row(i))
      for (const auto& [k, x] : v) product.add(out.flat_of_ring[i], out.flat_of_ring[j], out.flat_of_ring[k], x);
  out.structure = strict_structure(out.complex, product);
  return out;
}

Vector structure_component(const Complex& a, const AInftyStructure& s, int n) {
  FlatBasis b = flat_basis(a);
  const std::size_t dim = b.dim();
  Vector out(ipow(dim, n + 1));
  if (n == 1 && s.m1_is_differential) {
    for (std::size_t o = 0; o < dim; ++o)
      for (const auto& [i, x] : b.d.row(o)) out[multilinear_index(dim, o, {i})] = x;
    return out;
  }
  auto it = s.m.find(n);
  if (it == s.m.end()) return out;
  if (it->second.size() != out.size())
    throw std::invalid_argument("A-infinity operation m_" + std::to_string(n) + " has wrong length");
  for (std::size_t o = 0; o < dim; ++o)
    for_each_tuple(dim, n, [&](const std::vector<std::size_t>& in) {
      std::size_t idx = multilinear_index(dim, o, in);
      if (it->second[idx] != 0 && internal_degree(b, o, in) != n - 2)
        throw DegreeMismatch("m_" + std::to_string(n) + " has a component of degree " +
                             std::to_string(internal_degree(b, o, in)) + ", expected " + std::to_string(n - 2));
    });
  return it->second;
}

AInftyCheck ainfty_check(const Complex& a, const AInftyStructure& s, int cutoff) {
  FlatBasis b = flat_basis(a);
  const std::size_t dim = b.dim();
  std::map<int, Vector> m;
  for (int n = 1; n <= cutoff; ++n) m[n] = structure_component(a, s, n);
  for (int n = 1; n <= cutoff; ++n) {
    Vector res(ipow(dim, n + 1));
    for_each_tuple(dim, n, [&](const std::vector<std::size_t>& in) {
      for (int sa = 1; sa <= n; ++sa)
        for (int r = 0; r + sa <= n; ++r) {
          int t = n - sa - r, u = r + 1 + t;
          const Vector& ms = m[sa];
          const Vector& mu = m[u];
          long before = 0;
          for (int k = 0; k < r; ++k) before += b.degrees[in[static_cast<std::size_t>(k)]];
          int sign = parity_sign(r + static_cast<long>(sa) * t) * parity_sign(static_cast<long>(sa - 2) * before);
          std::vector<std::size_t> inner(in.begin() + r, in.begin() + r + sa);
          std::vector<std::size_t> args(in.begin(), in.begin() + r);
          args.push_back(0);
          args.insert(args.end(), in.begin() + r + sa, in.end());
          for (std::size_t cidx = 0; cidx < dim; ++cidx) {
            const Rational& val = ms[multilinear_index(dim, cidx, inner)];
            if (val == 0) continue;
            args[static_cast<std::size_t>(r)] = cidx;
            for (std::size_t o = 0; o < dim; ++o) {
              const Rational& w = mu[multilinear_index(dim, o, args)];
              if (w != 0) res[multilinear_index(dim, o, in)] += sign * val * w;
            }
          }
        }
    });
    if (!is_zero(res)) return AInftyViolation{n, res};
  }
  return AInftyValid{};
}

Vector structure_to_mc(const ConvolutionDgla& c, const AInftyStructure& s) {
  const FlatBasis& b = c.basis;
  const std::size_t dim = b.dim();
  Vector out(c.dgla.dim());
  Vector d_a = structure_component(c.algebra, AInftyStructure{}, 1);
  Vector m1 = structure_component(c.algebra, s, 1);
  if (!c.augmented() && m1 != d_a)
    throw std::invalid_argument("structure_to_mc: m_1 differs from d_A but the convolution dgla has no arity 1");
  for (int n : c.slot.arities) {
    Vector mn = structure_component(c.algebra, s, n);
    if (n == 1) mn = mn - d_a;
    for (std::size_t o = 0; o < dim; ++o)
      for_each_tuple(dim, n, [&](const std::vector<std::size_t>& in) {
        const Rational& x = mn[multilinear_index(dim, o, in)];
        if (x != 0) out[c.index(n, o, in)] = suspension_sign(b, in) * x;
      });
  }
  return out;
}

AInftyStructure mc_to_structure(const ConvolutionDgla& c, const Vector& x) {
  c.dgla.require_degree(x, 1, "mc_to_structure");
  const FlatBasis& b = c.basis;
  const std::size_t dim = b.dim();
  AInftyStructure s;
  for (int n : c.slot.arities) {
    Vector mn(ipow(dim, n + 1));
    for (std::size_t o = 0; o < dim; ++o)
      for_each_tuple(dim, n, [&](const std::vector<std::size_t>& in) {
        const Rational& v = x[c.index(n, o, in)];
        if (v != 0) mn[multilinear_index(dim, o, in)] = suspension_sign(b, in) * v;
      });
    if (n == 1) {
      if (is_zero(mn)) continue;
      s.m1_is_differential = false;
      mn = mn + structure_component(c.algebra, AInftyStructure{}, 1);
    }
    if (!is_zero(mn)) s.m[n] = mn;
  }
  return s;
}

Dgla twist_by_structure(const ConvolutionDgla& c, const Vector& gamma) { return twist(c.dgla, gamma); }

namespace {

// True when no basis element of arity above the cutoff lies in convolution degree q or q+1.
bool truncation_exact(const FlatBasis& b, int cutoff, int q) {
  if (b.dim() == 0) return true;
  std::set<int> shifted;
  int max_deg = b.degrees.front();
  for (int d : b.degrees) {
    shifted.insert(d + 1);
    max_deg = std::max(max_deg, d);
  }
  int lo = *shifted.begin();
  if (lo <= 0) return false;
  std::set<int> sums = {0};
  for (int k = 1;; ++k) {
    std::set<int> next;
    for (int s : sums)
      for (int x : shifted) next.insert(s + x);
    sums = std::move(next);
    if (k <= cutoff) continue;
    if (-1 - max_deg + k * lo > q + 1) return true;
    for (int s : sums)
      for (int d : b.degrees) {
        int conv = -1 - d + s;
        if (conv == q || conv == q + 1) return false;
      }
  }
}

}  // namespace

HochschildResult hochschild(const Complex& a, const AInftyStructure& s, int n, int cutoff) {
  if (cutoff < 2 || cutoff < n + 1)
    throw CutoffTooSmall("Hochschild degree " + std::to_string(n) + " needs arity cutoff at least " +
                         std::to_string(std::max(2, n + 1)));
  ConvolutionDgla c = build_convolution(a, cutoff, true);
  Dgla t = twist_by_structure(c, structure_to_mc(c, s));
  HochschildResult r;
  r.degree = n;
  r.convolution_degree = n - 1;
  std::vector<std::size_t> all(t.dim());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  SubcomplexHomology h = subcomplex_homology(t, all, n - 1);
  r.dimension = h.homology.dim;
  for (const auto& v : h.homology.representatives) r.cocycles.push_back(h.flat(v, t.dim()));
  r.truncation_exact = truncation_exact(c.basis, cutoff, n - 1);
  return r;
}

ReducedAugmented reduced_vs_augmented(const Complex& a, const AInftyStructure& s, int cutoff) {
  ReducedAugmented out;
  out.reduced = build_convolution(a, cutoff, false);
  out.augmented = build_convolution(a, cutoff, true);
  out.reduced_twisted = twist_by_structure(out.reduced, structure_to_mc(out.reduced, s));
  out.augmented_twisted = twist_by_structure(out.augmented, structure_to_mc(out.augmented, s));
  out.inclusion = Matrix(out.augmented.dgla.dim(), out.reduced.dgla.dim());
  for (std::size_t i = 0; i < out.reduced.dgla.dim(); ++i) {
    auto [o, in] = out.reduced.decode(i);
    out.inclusion.set(out.augmented.index(static_cast<int>(in.size()), o, in), i, 1);
  }
  out.complement = block_complex(out.augmented_twisted, out.augmented.arity_indices(1));
  return out;
}

}  // namespace deform
