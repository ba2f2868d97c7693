#include "deform/dictionary.hpp"

#include <algorithm>
#include <numeric>

namespace deform {

namespace {

Rational sgn(long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

}  // namespace

DeformationModel complex_model(const Complex& v) {
  DeformationModel m;
  m.kind = DeformationModel::Kind::Complex;
  m.lie = commutator_dgla(end_algebra(v));
  m.object = v;
  m.base = v;
  m.hat = Matrix::identity(m.lie.dim());
  m.linear = m.hat;
  return m;
}

DeformationModel algebra_model(const Complex& a, const AInftyStructure& s, int cutoff) {
  if (!s.m1_is_differential) throw std::invalid_argument("algebra_model: m_1 must be the differential of the complex");
  DeformationModel m;
  m.kind = DeformationModel::Kind::Algebra;
  m.cutoff = cutoff;
  m.object = a;
  m.convolution = build_convolution(a, cutoff, true);
  const ConvolutionDgla& c = *m.convolution;
  m.structure = structure_to_mc(c, s);
  if (!is_maurer_cartan(c.dgla, m.structure)) throw NotMaurerCartan("algebra_model: structure fails the Stasheff identities");
  m.lie = twist(c.dgla, m.structure);

  const FlatBasis& b = c.basis;
  const std::size_t na = b.dim();
  // words of length 1..N in mixed-radix order, then stably sorted by degree
  std::vector<std::vector<std::size_t>> words;
  for (int len = 1; len <= cutoff; ++len) {
    std::vector<std::size_t> w(static_cast<std::size_t>(len), 0);
    if (na == 0) break;
    while (true) {
      words.push_back(w);
      int k = len - 1;
      while (k >= 0 && ++w[static_cast<std::size_t>(k)] == na) w[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
  }
  auto degree = [&](const std::vector<std::size_t>& w) {
    int h = 0;
    for (std::size_t x : w) h += b.degrees[x] + 1;
    return h;
  };
  std::stable_sort(words.begin(), words.end(),
                   [&](const auto& x, const auto& y) { return degree(x) < degree(y); });
  std::map<std::vector<std::size_t>, std::size_t> pos;
  std::vector<int> degrees;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < words.size(); ++i) {
    pos[words[i]] = i;
    degrees.push_back(degree(words[i]));
    std::string l = "[";
    for (std::size_t k = 0; k < words[i].size(); ++k) l += (k ? "|" : "") + b.labels[words[i][k]];
    labels.push_back(l + "]");
  }
  m.words = words;
  const std::size_t nb = words.size();

  // coderivation: f^(x_1..x_m) = sum_i (-1)^{|f|(|x_1|+..+|x_i|)} x_1..x_i f(x_{i+1}..x_{i+n}) ..
  m.hat = Matrix(nb * nb, c.dgla.dim());
  std::vector<std::size_t> target;
  for (std::size_t q = 0; q < nb; ++q) {
    const auto& w = words[q];
    const int len = static_cast<int>(w.size());
    long prefix = 0;
    for (int i = 0; i < len; ++i) {
      for (int n : c.slot.arities) {
        if (i + n > len) continue;
        const std::vector<std::size_t> sub(w.begin() + i, w.begin() + i + n);
        for (std::size_t o = 0; o < na; ++o) {
          const std::size_t idx = c.index(n, o, sub);
          target.assign(w.begin(), w.begin() + i);
          target.push_back(o);
          target.insert(target.end(), w.begin() + i + n, w.end());
          m.hat.add(pos.at(target) * nb + q, idx, sgn(static_cast<long>(c.dgla.degree(idx)) * prefix));
        }
      }
      prefix += b.degrees[w[static_cast<std::size_t>(i)]] + 1;
    }
  }
  Vector q = m.structure;
  for (std::size_t o = 0; o < na; ++o)
    for (const auto& [i, x] : b.d.row(o)) q[c.index(1, o, {i})] += x;
  const Vector db = m.hat * q;
  Matrix d(nb, nb);
  for (std::size_t i = 0; i < db.size(); ++i)
    if (db[i] != 0) d.set(i / nb, i % nb, db[i]);
  m.base = complex_from_flat(degrees, labels, d, Orientation::chain);

  m.linear = Matrix(na * na, c.dgla.dim());
  for (std::size_t o = 0; o < na; ++o)
    for (std::size_t i = 0; i < na; ++i) m.linear.set(o * na + i, c.index(1, o, {i}), 1);
  return m;
}

Vector map_coefficientwise(const Matrix& f, const Vector& w, const ArtinianCdga& r) {
  const std::size_t rm = r.dim() - 1;
  if (w.size() != f.cols() * rm) throw std::invalid_argument("map_coefficientwise: element has the wrong length");
  Vector out(f.rows() * rm);
  for (std::size_t b = 0; b < f.rows(); ++b)
    for (const auto& [a, x] : f.row(b))
      for (std::size_t j = 0; j < rm; ++j)
        if (w[a * rm + j] != 0) out[b * rm + j] += x * w[a * rm + j];
  return out;
}

ContraModule deformed_object(const DeformationModel& model, const ArtinianCdga& r, const Vector& w) {
  return realize_module(model.base, map_coefficientwise(model.hat, w, r), r);
}

Vector recover_element(const DeformationModel& model, const ContraModule& m) {
  const ContraModule back = module_from_differential(model.base, m.ring, m.d);
  const std::size_t rm = m.ring.dim() - 1, dl = model.lie.dim();
  Vector out(dl * rm);
  for (std::size_t j = 0; j < rm; ++j) {
    Vector col(model.hat.rows());
    for (std::size_t e = 0; e < col.size(); ++e) col[e] = back.omega[e * rm + j];
    if (is_zero(col)) continue;
    std::optional<Vector> x = solve(model.hat, col);
    if (!x) throw std::invalid_argument("recover_element: perturbation is not in the image of the deformation dgla");
    for (std::size_t a = 0; a < dl; ++a) out[a * rm + j] = (*x)[a];
  }
  return out;
}

ContraModule underlying_module(const DeformationModel& model, const ArtinianCdga& r, const Vector& w) {
  return realize_module(model.object, map_coefficientwise(model.linear, w, r), r);
}

Matrix exp_nilpotent(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix sum = Matrix::identity(n), term = Matrix::identity(n);
  for (std::size_t k = 1; k <= n + 1; ++k) {
    term = (term * a).scaled(Rational(1, static_cast<long>(k)));
    if (term.is_zero()) return sum;
    sum = sum + term;
  }
  throw std::invalid_argument("exp_nilpotent: matrix is not nilpotent");
}

Matrix hat_operator(const DeformationModel& model, const ContraModule& source, const ContraModule& target,
                    const Vector& a) {
  const ArtinianCdga& r = source.ring;
  const Vector ah = map_coefficientwise(model.hat, a, r);
  const std::size_t rd = r.dim(), rm = rd - 1;
  Vector full(model.hat.rows() * rd);
  for (std::size_t i = 0; i < ah.size(); ++i) full[i / rm * rd + i % rm + 1] = ah[i];
  // Hom_k (x) R -> Hom_R coordinates (the sign change is an involution)
  return hom_r_matrix(source, target, hom_r_to_tensor(source, target, full));
}

GaugeIsomorphism gauge_isomorphism(const DeformationModel& model, const ArtinianCdga& r, const Vector& a, const Vector& w) {
  const NilpotentDgla n(model.lie, r);
  GaugeIsomorphism out;
  out.target_element = gauge_act(n, a, w);
  const ContraModule src = deformed_object(model, r, w), tgt = deformed_object(model, r, out.target_element);
  const Matrix am = hat_operator(model, src, tgt, a);
  out.map = make_mod_map(src, tgt, hom_r_coordinates(src, tgt, exp_nilpotent(am)));
  out.inverse = make_mod_map(tgt, src, hom_r_coordinates(tgt, src, exp_nilpotent(am.scaled(-1))));
  return out;
}

}  // namespace deform
