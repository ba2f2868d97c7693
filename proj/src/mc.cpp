#include "deform/mc.hpp"

#include <functional>
#include <map>

namespace deform {

namespace {

Rational factorial(int k) {
  Rational f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

Vector select(const Vector& x, const std::vector<std::size_t>& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = x[idx[i]];
  return out;
}

void scatter_add(Vector& out, const Vector& local, const std::vector<std::size_t>& idx) {
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] += local[i];
}

}  // namespace

Vector mc_residual(const Dgla& l, const Vector& w) {
  l.require_degree(w, 1, "mc_residual");
  Vector r = l.d(w);
  axpy(r, Rational(1, 2), l.bracket(w, w));
  return r;
}

bool is_maurer_cartan(const Dgla& l, const Vector& w) { return is_zero(mc_residual(l, w)); }

Vector mc_residual(const NilpotentDgla& n, const Vector& w) { return mc_residual(n.dgla(), w); }

Dgla twist(const Dgla& l, const Vector& gamma) {
  l.require_degree(gamma, 1, "twist");
  if (!is_maurer_cartan(l, gamma)) throw NotMaurerCartan("twist: element is not Maurer-Cartan");
  Matrix d = l.differential();
  for (std::size_t j = 0; j < l.dim(); ++j) {
    Vector col = l.bracket(gamma, unit_vector(l.dim(), j));
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i] != 0) d.add(i, j, col[i]);
  }
  return l.with_differential(std::move(d));
}

Vector gauge_act(const NilpotentDgla& n, const Vector& a, const Vector& w) {
  const Dgla& l = n.dgla();
  l.require_degree(a, 0, "gauge_act (gauge parameter)");
  l.require_degree(w, 1, "gauge_act (MC element)");
  const int bound = n.nilpotency_index() + 1;
  Vector result = w;
  Vector term = w;
  for (int k = 1; k <= bound; ++k) {
    term = Rational(1, k) * l.bracket(a, term);
    if (is_zero(term)) break;
    result = result + term;
  }
  term = l.d(a);
  for (int k = 0; k <= bound && !is_zero(term); ++k) {
    // term = ad_a^k(da) / (k+1)!
    result = result - term;
    term = Rational(1, k + 2) * l.bracket(a, term);
  }
  return result;
}

Vector bch(const NilpotentDgla& n, const Vector& a, const Vector& b) {
  const Dgla& l = n.dgla();
  l.require_degree(a, 0, "bch");
  l.require_degree(b, 0, "bch");
  const int c = std::max(1, n.nilpotency_index() - 1);  // longest nonvanishing bracket word
  Vector result(l.dim());
  // Dynkin: sum over n >= 1 and (r_i, s_i) with r_i + s_i >= 1 of
  //   (-1)^{n-1}/n * [X^{r1} Y^{s1} ... X^{rn} Y^{sn}] / (L * prod r_i! s_i!)
  std::vector<std::pair<int, int>> seq;
  std::function<void(int, int)> rec = [&](int blocks_left, int length) {
    if (blocks_left == 0) {
      std::vector<const Vector*> word;
      Rational denom = 1;
      for (const auto& [r, s] : seq) {
        for (int i = 0; i < r; ++i) word.push_back(&a);
        for (int i = 0; i < s; ++i) word.push_back(&b);
        denom *= factorial(r) * factorial(s);
      }
      const int nblocks = static_cast<int>(seq.size());
      denom *= nblocks * static_cast<int>(word.size());
      Vector v = *word.back();
      for (std::size_t i = word.size() - 1; i-- > 0;) {
        v = l.bracket(*word[i], v);
        if (is_zero(v)) return;
      }
      Rational coeff = Rational(nblocks % 2 == 1 ? 1 : -1) / denom;
      axpy(result, coeff, v);
      return;
    }
    for (int r = 0; r + length <= c; ++r)
      for (int s = 0; r + s + length <= c; ++s) {
        if (r + s == 0) continue;
        seq.emplace_back(r, s);
        rec(blocks_left - 1, length + r + s);
        seq.pop_back();
      }
  };
  for (int blocks = 1; blocks <= c; ++blocks) rec(blocks, 0);
  return result;
}

Vector SubcomplexHomology::local(const Vector& flat) const { return select(flat, at); }

Vector SubcomplexHomology::flat(const Vector& local, std::size_t dim) const {
  Vector out(dim);
  scatter_add(out, local, at);
  return out;
}

SubcomplexHomology subcomplex_homology(const Dgla& l, const std::vector<std::size_t>& support, int degree) {
  SubcomplexHomology s;
  for (std::size_t i : support) {
    if (l.degree(i) == degree - 1) s.below.push_back(i);
    if (l.degree(i) == degree) s.at.push_back(i);
    if (l.degree(i) == degree + 1) s.above.push_back(i);
  }
  const Matrix& d = l.differential();
  s.homology = homology_at(d.submatrix(s.at, s.below), d.submatrix(s.above, s.at), s.at.size());
  return s;
}

LiftResult lift_mc(const Dgla& l, const SmallExtension& e, const Vector& w_bar,
                   const std::optional<Vector>& linear_lift_shift) {
  NilpotentDgla nq(l, e.quotient), nt(l, e.total);
  if (!is_maurer_cartan(nq.dgla(), w_bar)) throw NotMaurerCartan("lift_mc: input is not Maurer-Cartan over the quotient");
  Vector w = nq.map_coefficients(w_bar, nt, e.section);
  std::vector<char> in_kernel(e.total.dim(), 0);
  for (std::size_t j : e.kernel) in_kernel[j] = 1;
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < nt.dim(); ++i)
    if (in_kernel[nt.ring_index(i)]) support.push_back(i);
  if (linear_lift_shift) {
    for (std::size_t i = 0; i < nt.dim(); ++i)
      if ((*linear_lift_shift)[i] != 0 && !in_kernel[nt.ring_index(i)])
        throw std::invalid_argument("lift_mc: lift shift must lie in L (x) I");
    w = w + *linear_lift_shift;
  }
  Vector r = mc_residual(nt, w);
  for (std::size_t i = 0; i < nt.dim(); ++i)
    if (r[i] != 0 && !in_kernel[nt.ring_index(i)]) throw std::logic_error("lift_mc: residual not in L (x) I");

  SubcomplexHomology h2 = subcomplex_homology(nt.dgla(), support, 2);
  Vector rl = h2.local(r);
  Vector cls = h2.homology.class_of(rl);
  if (!is_zero(cls)) {
    ObstructedMc o;
    o.obstruction = CohomologyClass{2, h2.homology.dim, cls, r};
    o.residual = r;
    return o;
  }
  const Matrix& d = nt.dgla().differential();
  auto c = solve(d.submatrix(h2.at, h2.below), -rl);
  if (!c) throw std::logic_error("lift_mc: exact residual without primitive");
  Vector corrected = w;
  scatter_add(corrected, *c, h2.below);
  if (!is_maurer_cartan(nt.dgla(), corrected)) throw std::logic_error("lift_mc: corrected lift is not Maurer-Cartan");
  SubcomplexHomology h1 = subcomplex_homology(nt.dgla(), support, 1);
  LiftedMc out;
  out.element = corrected;
  for (const auto& z : h1.homology.cycles.generators()) out.torsor_basis.push_back(h1.flat(z, nt.dim()));
  return out;
}

namespace {

// Multi-index as sorted (variable, exponent) pairs.
using MultiIndex = std::vector<std::pair<std::size_t, int>>;

void enumerate_multi(std::size_t vars, int max_total, std::size_t start, int total, MultiIndex& cur,
                     const std::function<void(const MultiIndex&, int)>& f) {
  f(cur, total);
  if (total == max_total) return;
  for (std::size_t v = start; v < vars; ++v) {
    bool extend = !cur.empty() && cur.back().first == v;
    if (extend)
      ++cur.back().second;
    else
      cur.emplace_back(v, 1);
    enumerate_multi(vars, max_total, v, total + 1, cur, f);
    if (extend)
      --cur.back().second;
    else
      cur.pop_back();
  }
}

Rational binomial(int n, int k) {
  Rational r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

EquivalenceResult gauge_equivalent(const NilpotentDgla& n, const Vector& w, const Vector& w2) {
  const Dgla& l = n.dgla();
  if (!is_maurer_cartan(l, w)) throw NotMaurerCartan("gauge_equivalent: first element is not Maurer-Cartan");
  if (!is_maurer_cartan(l, w2)) throw NotMaurerCartan("gauge_equivalent: second element is not Maurer-Cartan");
  const std::size_t dim = l.dim();
  Vector alpha0(dim);
  std::vector<Vector> K;  // affine family alpha0 + sum theta_i K_i
  bool complete = true;
  const Matrix& d = l.differential();

  for (int s = 1; s < n.nilpotency_index(); ++s) {
    std::vector<std::size_t> d1 = n.indices(1, s), e0 = n.indices(0, s), d2 = n.indices(2, s);
    auto f = [&](const std::map<std::size_t, Rational>& theta) {
      Vector alpha = alpha0;
      for (const auto& [i, x] : theta) axpy(alpha, x, K[i]);
      Vector diff = w2 - gauge_act(n, alpha, w);
      return select(diff, d1);
    };
    const std::size_t p = K.size();
    Vector f0 = f({});
    bool affine = true;
    if (p > 0 && s >= 2) {
      std::map<MultiIndex, Vector> values;
      auto value_at = [&](const MultiIndex& b) -> const Vector& {
        auto it = values.find(b);
        if (it != values.end()) return it->second;
        std::map<std::size_t, Rational> theta;
        for (const auto& [v, e] : b) theta[v] = e;
        return values.emplace(b, f(theta)).first->second;
      };
      MultiIndex cur;
      enumerate_multi(p, s, 0, 0, cur, [&](const MultiIndex& a, int total) {
        if (!affine || total < 2) return;
        // Newton forward difference: sum_{b <= a} (-1)^{|a|-|b|} prod C(a_i, b_i) f(b)
        Vector acc(d1.size());
        MultiIndex b;
        std::function<void(std::size_t, int, Rational)> sub = [&](std::size_t pos, int removed, Rational coeff) {
          if (pos == a.size()) {
            MultiIndex bb;
            for (const auto& e : b)
              if (e.second > 0) bb.push_back(e);
            axpy(acc, (removed % 2 == 0 ? coeff : -coeff), value_at(bb));
            return;
          }
          for (int k = 0; k <= a[pos].second; ++k) {
            b.emplace_back(a[pos].first, k);
            sub(pos + 1, removed + a[pos].second - k, coeff * binomial(a[pos].second, k));
            b.pop_back();
          }
        };
        sub(0, 0, 1);
        if (!is_zero(acc)) affine = false;
      });
    }
    Matrix bmat = d.submatrix(d1, e0);
    if (affine) {
      std::vector<Vector> jcols;
      for (std::size_t i = 0; i < p; ++i) jcols.push_back(f({{i, Rational(1)}}) - f0);
      Matrix m = Matrix::hstack(Matrix::from_columns(jcols, d1.size()), bmat);
      auto z = solve(m, -f0);
      if (!z) {
        if (!complete) return Undecided{s, "affine family restricted after a non-affine stage has no solution"};
        SubcomplexHomology gr;
        gr.below = e0;
        gr.at = d1;
        gr.above = d2;
        gr.homology = homology_at(bmat, d.submatrix(d2, d1), d1.size());
        Inequivalent out;
        out.stage = s;
        out.discrepancy = gr.flat(f0, dim);
        out.cls = CohomologyClass{1, gr.homology.dim, gr.homology.class_of(f0), out.discrepancy};
        return out;
      }
      auto ker = kernel_basis(m);
      Vector next0 = alpha0;
      for (std::size_t i = 0; i < p; ++i) axpy(next0, (*z)[i], K[i]);
      for (std::size_t i = 0; i < e0.size(); ++i) next0[e0[i]] += (*z)[p + i];
      std::vector<Vector> nextK;
      for (const auto& kv : ker) {
        Vector dir(dim);
        for (std::size_t i = 0; i < p; ++i) axpy(dir, kv[i], K[i]);
        for (std::size_t i = 0; i < e0.size(); ++i) dir[e0[i]] += kv[p + i];
        nextK.push_back(std::move(dir));
      }
      alpha0 = std::move(next0);
      K = std::move(nextK);
    } else {
      complete = false;
      auto z = solve(bmat, -f0);
      if (!z) return Undecided{s, "discrepancy depends non-affinely on earlier choices"};
      for (std::size_t i = 0; i < e0.size(); ++i) alpha0[e0[i]] += (*z)[i];
      K.clear();
      for (const auto& kv : kernel_basis(bmat)) {
        Vector dir(dim);
        for (std::size_t i = 0; i < e0.size(); ++i) dir[e0[i]] = kv[i];
        K.push_back(std::move(dir));
      }
    }
  }
  if (gauge_act(n, alpha0, w) != w2) throw std::logic_error("gauge_equivalent: witness failed verification");
  return Equivalent{alpha0};
}

TangentSpace tangent_defs(const NilpotentDgla& n) {
  if (!n.ring().is_square_zero()) throw RingNotSquareZero("tangent_defs: m(R)^2 != 0 for " + n.ring().name());
  std::vector<std::size_t> all(n.dim());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  SubcomplexHomology h = subcomplex_homology(n.dgla(), all, 1);
  TangentSpace t;
  t.dim = h.homology.dim;
  for (const auto& r : h.homology.representatives) t.basis.push_back(h.flat(r, n.dim()));
  t.homology = h.homology;
  return t;
}

GaugePath gauge_to_path(const NilpotentDgla& n, const Vector& a, const Vector& w, int truncation) {
  n.dgla().require_degree(a, 0, "gauge_to_path");
  if (!is_maurer_cartan(n.dgla(), w)) throw NotMaurerCartan("gauge_to_path: input is not Maurer-Cartan");
  GaugePath p;
  p.truncation = truncation;
  p.forms = poly_forms_line(truncation);
  p.base_dim = n.base().dim();
  p.forms_dim = p.forms.dim();
  p.coeff_dim = n.coeff_dim();
  p.dgla = tensor(tensor(n.base(), p.forms), maximal_ideal(n.ring()));
  const std::size_t D = static_cast<std::size_t>(truncation);

  // w(t) = gauge_act(t a, w) is polynomial in t; recover its coefficients by interpolation.
  std::vector<Vector> values;
  for (std::size_t c = 0; c <= D + 1; ++c) values.push_back(gauge_act(n, Rational(static_cast<long>(c)) * a, w));
  Matrix vander(D + 1, D + 1);
  for (std::size_t c = 0; c <= D; ++c) {
    Rational x = 1;
    for (std::size_t k = 0; k <= D; ++k) {
      vander.set(c, k, x);
      x *= static_cast<long>(c);
    }
  }
  std::vector<Vector> coeffs(D + 1, Vector(n.dim()));
  for (std::size_t idx = 0; idx < n.dim(); ++idx) {
    Vector rhs(D + 1);
    bool any = false;
    for (std::size_t c = 0; c <= D; ++c) {
      rhs[c] = values[c][idx];
      if (rhs[c] != 0) any = true;
    }
    if (!any && values[D + 1][idx] == 0) continue;
    Vector sol = *solve(vander, rhs);
    Rational predicted = 0, x = 1;
    for (std::size_t k = 0; k <= D; ++k) {
      predicted += sol[k] * x;
      x *= static_cast<long>(D + 1);
    }
    if (predicted != values[D + 1][idx])
      throw TruncationTooSmall("gauge_to_path: path has polynomial degree above " + std::to_string(truncation));
    for (std::size_t k = 0; k <= D; ++k) coeffs[k][idx] = sol[k];
  }
  auto flat = [&](std::size_t x, std::size_t form, std::size_t j) { return (x * p.forms_dim + form) * p.coeff_dim + (j - 1); };
  Vector base_element(p.dgla.dim());
  for (std::size_t k = 0; k <= D; ++k)
    for (std::size_t idx = 0; idx < n.dim(); ++idx)
      if (coeffs[k][idx] != 0) base_element[flat(n.base_index(idx), k, n.ring_index(idx))] += coeffs[k][idx];
  if (D == 0 && !is_zero(a)) throw TruncationTooSmall("gauge_to_path: truncation 0 cannot carry dt");
  for (int sign : {-1, 1}) {
    Vector e = base_element;
    if (D > 0) {
      for (std::size_t idx = 0; idx < n.dim(); ++idx) {
        if (a[idx] == 0) continue;
        std::size_t j = n.ring_index(idx);
        // (x (x) r) dt = (-1)^{|r|} (x (x) dt) (x) r
        int koszul = (n.ring().degree(j) % 2 == 0) ? 1 : -1;
        e[flat(n.base_index(idx), D + 1, j)] += sign * koszul * a[idx];
      }
    }
    if (is_maurer_cartan(p.dgla, e)) {
      p.element = std::move(e);
      p.flow_sign = sign;
      return p;
    }
    if (is_zero(a)) break;
  }
  throw std::logic_error("gauge_to_path: no flow sign yields a Maurer-Cartan path");
}

Vector evaluate_path(const GaugePath& p, const Rational& t) {
  Vector out(p.base_dim * p.coeff_dim);
  const std::size_t D = static_cast<std::size_t>(p.truncation);
  for (std::size_t x = 0; x < p.base_dim; ++x) {
    Rational power = 1;
    for (std::size_t k = 0; k <= D; ++k) {
      for (std::size_t j = 0; j < p.coeff_dim; ++j) {
        const Rational& c = p.element[(x * p.forms_dim + k) * p.coeff_dim + j];
        if (c != 0) out[x * p.coeff_dim + j] += power * c;
      }
      power *= t;
    }
  }
  return out;
}

Vector path_form_component(const GaugePath& p, std::size_t k) {
  Vector out(p.base_dim * p.coeff_dim);
  const std::size_t form = static_cast<std::size_t>(p.truncation) + 1 + k;
  for (std::size_t x = 0; x < p.base_dim; ++x)
    for (std::size_t j = 0; j < p.coeff_dim; ++j) out[x * p.coeff_dim + j] = p.element[(x * p.forms_dim + form) * p.coeff_dim + j];
  return out;
}

}  // namespace deform
