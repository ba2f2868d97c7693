#include "deform/contra.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "deform/operad.hpp"

namespace deform {

namespace {

Rational sgn(long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

bool same_shape(const ContraModule& a, const ContraModule& b) {
  return a.vdeg == b.vdeg && a.ring.dim() == b.ring.dim() && a.d == b.d;
}

// Module data for an arbitrary (possibly non-square-zero) twist, used for graded lifts.
ContraModule shell(const Complex& v, const Vector& omega, const ArtinianCdga& r) {
  ContraModule m;
  m.base = v;
  m.ring = r;
  m.omega = omega;
  for (int deg : flat_basis(v).degrees) m.vdeg.push_back(-deg);
  const std::size_t nv = m.vdeg.size(), rd = r.dim();
  m.degrees.resize(nv * rd);
  for (std::size_t i = 0; i < nv; ++i)
    for (std::size_t j = 0; j < rd; ++j) m.degrees[i * rd + j] = m.vdeg[i] - r.degree(j);
  m.d = module_differential(v, omega, r);
  return m;
}

// Hom_R coordinates whose ring index lies in `ideal`, grouped by cochain degree.
std::map<int, std::vector<std::size_t>> ideal_indices(const ContraModule& m, const ContraModule& n,
                                                      const std::vector<std::size_t>& ideal) {
  const std::set<std::size_t> in(ideal.begin(), ideal.end());
  const std::size_t rd = m.ring.dim(), total = m.base_dim() * n.base_dim() * rd;
  std::map<int, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < total; ++i)
    if (in.count(i % rd)) out[hom_r_degree(m, n, i)].push_back(i);
  return out;
}

// [D, -] : Hom_R(M, N)^deg -> Hom_R(M, N)^{deg+1} restricted to the given coordinate lists.
Matrix commutator_block(const ContraModule& m, const ContraModule& n, const std::vector<std::size_t>& cols,
                        const std::vector<std::size_t>& rows, int deg) {
  const std::size_t total = m.base_dim() * n.base_dim() * m.ring.dim();
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t i = 0; i < rows.size(); ++i) row_of[rows[i]] = i;
  Matrix out(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    Matrix phi = hom_r_matrix(m, n, unit_vector(total, cols[c]));
    Vector v = hom_r_coordinates(m, n, n.d * phi - (phi * m.d).scaled(sgn(deg)));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] == 0) continue;
      auto it = row_of.find(i);
      if (it == row_of.end()) throw std::logic_error("commutator leaves the ideal part of Hom_R");
      out.set(it->second, c, v[i]);
    }
  }
  return out;
}

Vector restrict_to(const Vector& v, const std::vector<std::size_t>& idx) {
  Vector out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

Vector extend_from(const Vector& local, const std::vector<std::size_t>& idx, std::size_t total) {
  Vector out(total);
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = local[i];
  return out;
}

// Hom_R(M, M) coordinates with values in m -> End(V) (x) m(R) coordinates.
Vector to_ideal_coordinates(const ContraModule& m, const Vector& f) {
  const std::size_t rd = m.ring.dim();
  const Vector t = hom_r_to_tensor(m, m, f);
  Vector out(t.size() / rd * (rd - 1));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] == 0) continue;
    if (i % rd == 0) throw std::logic_error("element has a unit component");
    out[i / rd * (rd - 1) + i % rd - 1] = t[i];
  }
  return out;
}

}  // namespace

ModMap make_mod_map(const ContraModule& source, const ContraModule& target, const Vector& coordinates) {
  if (source.ring.dim() != target.ring.dim()) throw InvalidModMap("module maps need a common ring");
  const std::size_t total = source.base_dim() * target.base_dim() * source.ring.dim();
  if (coordinates.size() != total) throw InvalidModMap("module map has the wrong number of coordinates");
  for (std::size_t i = 0; i < total; ++i)
    if (coordinates[i] != 0 && hom_r_degree(source, target, i) != 0)
      throw InvalidModMap("module map is not of degree 0");
  ModMap f{source, target, coordinates, hom_r_matrix(source, target, coordinates)};
  if (target.d * f.matrix != f.matrix * source.d) throw InvalidModMap("module map does not commute with the differentials");
  return f;
}

ModMap identity_mod_map(const ContraModule& m) {
  const std::size_t nv = m.base_dim(), rd = m.ring.dim();
  Vector c(nv * nv * rd);
  for (std::size_t q = 0; q < nv; ++q) c[(q * nv + q) * rd] = 1;
  return make_mod_map(m, m, c);
}

ModMap compose(const ModMap& g, const ModMap& f) {
  if (!same_shape(f.target, g.source)) throw InvalidModMap("compose: maps are not composable");
  return make_mod_map(f.source, g.target, hom_r_coordinates(f.source, g.target, g.matrix * f.matrix));
}

Matrix reduced_matrix(const ModMap& f) {
  const std::size_t nv = f.source.base_dim(), nw = f.target.base_dim(), rd = f.source.ring.dim();
  Matrix out(nw, nv);
  for (std::size_t p = 0; p < nw; ++p)
    for (std::size_t q = 0; q < nv; ++q) out.set(p, q, f.coordinates[(p * nv + q) * rd]);
  return out;
}

ChainMap reduce(const ModMap& f) {
  ChainMap c;
  c.source = reduce(f.source);
  c.target = reduce(f.target);
  c.degree = 0;
  const Matrix r = reduced_matrix(f);
  for (int n : c.source.degrees()) {
    const std::size_t ds = c.source.dim(n), dt = c.target.dim(n);
    if (dt == 0) continue;
    const std::size_t os = c.source.space().offset(n), ot = c.target.space().offset(n);
    Matrix block(dt, ds);
    for (std::size_t i = 0; i < dt; ++i)
      for (std::size_t j = 0; j < ds; ++j) block.set(i, j, r.at(ot + i, os + j));
    c.components[n] = block;
  }
  return c;
}

bool is_mod_qiso(const ModMap& f) { return is_acyclic(cone(reduce(f))); }

ContraModule module_from_differential(const Complex& v, const ArtinianCdga& r, const Matrix& d) {
  const FlatBasis b = flat_basis(v);
  const std::size_t nv = b.dim(), rd = r.dim();
  if (d.rows() != nv * rd || d.cols() != nv * rd) throw std::invalid_argument("module_from_differential: wrong shape");
  Vector w(nv * nv * (rd - 1));
  for (std::size_t q = 0; q < nv; ++q) {
    const long vq = -b.degrees[q];
    for (std::size_t p = 0; p < nv; ++p)
      for (std::size_t s = 1; s < rd; ++s) {
        const Rational c = d.at(p * rd + s, q * rd);
        if (c != 0) w[(p * nv + q) * (rd - 1) + s - 1] = sgn(static_cast<long>(r.degree(s)) * vq) * c;
      }
  }
  ContraModule m = realize_module(v, w, r);
  if (m.d != d) throw std::invalid_argument("module_from_differential: not of the form d_V + w on a free module");
  return m;
}

ContraModule cone(const ModMap& f) {
  const ContraModule &m = f.source, &n = f.target;
  const FlatBasis bv = flat_basis(m.base), bw = flat_basis(n.base);
  const std::size_t nv = bv.dim(), nw = bw.dim(), rd = m.ring.dim();
  // order: by degree, target generators before shifted source generators
  std::vector<std::tuple<int, int, std::size_t>> keys;
  for (std::size_t i = 0; i < nw; ++i) keys.emplace_back(bw.degrees[i], 0, i);
  for (std::size_t i = 0; i < nv; ++i) keys.emplace_back(bv.degrees[i] + 1, 1, i);
  std::sort(keys.begin(), keys.end());
  std::vector<std::size_t> pos_w(nw), pos_v(nv);
  std::vector<int> degrees;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto [deg, which, i] = keys[k];
    degrees.push_back(deg);
    if (which == 0) {
      pos_w[i] = k;
      labels.push_back("t:" + bw.labels[i]);
    } else {
      pos_v[i] = k;
      labels.push_back("s:" + bv.labels[i]);
    }
  }
  const std::size_t nc = keys.size();
  const Matrix f0 = reduced_matrix(f);
  Matrix base(nc, nc);
  for (std::size_t i = 0; i < nw; ++i)
    for (const auto& [j, c] : bw.d.row(i)) base.add(pos_w[i], pos_w[j], c);
  for (std::size_t i = 0; i < nv; ++i)
    for (const auto& [j, c] : bv.d.row(i)) base.add(pos_v[i], pos_v[j], -c);
  for (std::size_t i = 0; i < nw; ++i)
    for (const auto& [j, c] : f0.row(i)) base.add(pos_w[i], pos_v[j], c);
  const Complex cb = complex_from_flat(degrees, labels, base, n.base.orientation());

  Matrix d(nc * rd, nc * rd);
  auto place = [&](const Matrix& src, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                   const Rational& s) {
    for (std::size_t i = 0; i < src.rows(); ++i)
      for (const auto& [j, c] : src.row(i)) d.add(rows[i / rd] * rd + i % rd, cols[j / rd] * rd + j % rd, s * c);
  };
  place(n.d, pos_w, pos_w, 1);
  place(f.matrix, pos_w, pos_v, 1);
  place(m.d, pos_v, pos_v, -1);
  return module_from_differential(cb, m.ring, d);
}

ContraModule change_ring(const ContraModule& m, const ArtinianCdga& target, const Matrix& ring_map) {
  const Dgla l = commutator_dgla(end_algebra(m.base));
  const NilpotentDgla src(l, m.ring), dst(l, target);
  return realize_module(m.base, src.map_coefficients(m.omega, dst, ring_map), target);
}

ModMap change_ring(const ModMap& f, const ArtinianCdga& target, const Matrix& ring_map) {
  const std::size_t rd = f.source.ring.dim(), td = target.dim();
  const std::size_t blocks = f.coordinates.size() / rd;
  Vector c(blocks * td);
  for (std::size_t a = 0; a < blocks; ++a)
    for (std::size_t j = 0; j < rd; ++j) {
      const Rational x = f.coordinates[a * rd + j];
      if (x == 0) continue;
      for (std::size_t k = 0; k < td; ++k) c[a * td + k] += ring_map.at(k, j) * x;
    }
  return make_mod_map(change_ring(f.source, target, ring_map), change_ring(f.target, target, ring_map), c);
}

std::optional<Homotopy> contracting_homotopy(const ContraModule& m) {
  const std::size_t nv = m.base_dim(), rd = m.ring.dim(), total = nv * nv * rd;
  std::vector<std::size_t> unknowns;
  for (std::size_t i = 0; i < total; ++i)
    if (hom_r_degree(m, m, i) == -1) unknowns.push_back(i);
  std::vector<Vector> cols;
  for (std::size_t u : unknowns) {
    Matrix phi = hom_r_matrix(m, m, unit_vector(total, u));
    cols.push_back(hom_r_coordinates(m, m, m.d * phi + phi * m.d));
  }
  Vector id(total);
  for (std::size_t q = 0; q < nv; ++q) id[(q * nv + q) * rd] = 1;
  std::optional<Vector> x = cols.empty() ? (is_zero(id) ? std::optional<Vector>(Vector()) : std::nullopt)
                                         : solve(Matrix::from_columns(cols, total), id);
  if (!x) return std::nullopt;
  Homotopy h;
  h.coordinates = Vector(total);
  for (std::size_t k = 0; k < unknowns.size(); ++k) h.coordinates[unknowns[k]] = (*x)[k];
  h.matrix = hom_r_matrix(m, m, h.coordinates);
  if (m.d * h.matrix + h.matrix * m.d != Matrix::identity(m.dim()))
    throw std::logic_error("contracting_homotopy: solution does not contract");
  return h;
}

std::vector<Vector> Filtration::span(const ContraModule& m, std::size_t stage) const {
  std::vector<Vector> out;
  const std::size_t end = stage_ends.at(stage);
  for (std::size_t g = 0; g < end; ++g)
    for (std::size_t j = 0; j < m.ring.dim(); ++j) out.push_back(right_multiply(m, generators[g], j));
  return out;
}

ConnectivityResult connectivity_filtration(const ContraModule& m, int window_floor) {
  if (!m.ring.is_nonnegatively_graded())
    throw std::invalid_argument("connectivity_filtration: the ring must be non-negatively graded");
  const FlatBasis b = flat_basis(m.base);
  const std::size_t nv = b.dim(), rd = m.ring.dim();
  for (int deg : b.degrees)
    if (deg < window_floor) throw std::invalid_argument("connectivity_filtration: module extends below the window");
  Matrix red(nv, nv);
  for (std::size_t p = 0; p < nv; ++p)
    for (std::size_t q = 0; q < nv; ++q) red.set(p, q, m.d.at(p * rd, q * rd));
  std::map<int, std::vector<std::size_t>> idx;
  for (std::size_t i = 0; i < nv; ++i) idx[b.degrees[i]].push_back(i);
  std::vector<std::size_t> all(nv);
  for (std::size_t i = 0; i < nv; ++i) all[i] = i;

  // splitting V (+) U (+) dU degree by degree
  std::map<int, std::vector<Vector>> vpart, upart;
  for (const auto& [n, cols] : idx) {
    std::vector<Vector> z;
    for (const auto& k : kernel_basis(red.submatrix(all, cols))) z.push_back(extend_from(k, cols, nv));
    std::vector<Vector> bnd;
    auto up = idx.find(n + 1);
    if (up != idx.end())
      for (std::size_t i : up->second) {
        Vector x = red * unit_vector(nv, i);
        if (!is_zero(x)) bnd.push_back(x);
      }
    std::vector<Vector> acc = bnd;
    for (const auto& x : z)
      if (!Span(nv, acc).contains(x)) {
        acc.push_back(x);
        vpart[n].push_back(x);
      }
    for (std::size_t i : cols) {
      Vector e = unit_vector(nv, i);
      if (!Span(nv, acc).contains(e)) {
        acc.push_back(e);
        upart[n].push_back(e);
      }
    }
  }
  auto vf = vpart.find(window_floor);
  if (vf != vpart.end() && !vf->second.empty()) return NotBoundedBelow{window_floor, vf->second.front()};

  Filtration f;
  f.n0 = idx.empty() ? window_floor : idx.rbegin()->first + 1;
  for (const auto& [n, vs] : vpart)
    if (!vs.empty()) {
      f.n0 = n;
      break;
    }
  auto lift = [&](const Vector& x) {
    Vector out(m.dim());
    for (std::size_t i = 0; i < nv; ++i) out[i * rd] = x[i];
    return out;
  };
  auto close_stage = [&](const std::string& label) {
    if (f.generators.size() > (f.stage_ends.empty() ? 0 : f.stage_ends.back())) {
      f.stage_ends.push_back(f.generators.size());
      f.stage_labels.push_back(label);
    }
  };
  for (const auto& [n, us] : upart)
    for (const auto& u : us) f.generators.push_back(m.d * lift(u));
  close_stage("R.D(U)");
  for (const auto& [n, us] : upart)
    if (n < f.n0)
      for (const auto& u : us) f.generators.push_back(lift(u));
  close_stage("U below n0");
  for (const auto& [n, cols] : idx) {
    if (n < f.n0) continue;
    for (const auto& v : vpart[n]) f.generators.push_back(lift(v));
    for (const auto& u : upart[n]) f.generators.push_back(lift(u));
    close_stage("V+U in degree " + std::to_string(n));
  }
  if (!check_filtration(m, f).empty()) throw std::logic_error("connectivity_filtration: construction failed its checks");
  return f;
}

std::vector<std::string> check_filtration(const ContraModule& m, const Filtration& f) {
  std::vector<std::string> out;
  const std::size_t dim = m.dim();
  Span prev(dim, {});
  const bool literal = m.ring.differential().is_zero();
  std::size_t begin = 0;
  for (std::size_t s = 0; s < f.stages(); ++s) {
    const std::vector<Vector> basis = f.span(m, s);
    const Span cur(dim, basis);
    for (const auto& x : basis)
      if (!cur.contains(m.d * x)) {
        out.push_back("stage " + std::to_string(s) + " is not a subcomplex");
        break;
      }
    for (std::size_t g = begin; g < f.stage_ends[s]; ++g)
      if (!prev.contains(m.d * f.generators[g])) {
        out.push_back("stage " + std::to_string(s) + ": d of a new generator leaves the previous stage");
        break;
      }
    if (literal)
      for (const auto& x : basis)
        if (!prev.contains(m.d * x)) {
          out.push_back("stage " + std::to_string(s) + ": d(M(i+1)) is not contained in M(i)");
          break;
        }
    begin = f.stage_ends[s];
    prev = cur;
  }
  if (prev.dim() != f.generators.size() * m.ring.dim()) out.push_back("generators are not free");
  if (prev.dim() != dim) out.push_back("filtration is not exhaustive");
  return out;
}

Filtration coarsen(const ContraModule& m, const Filtration& f) {
  Filtration out;
  out.n0 = f.n0;
  out.generators = f.generators;
  std::size_t begin = 0;
  for (std::size_t s = 0; s < f.stages(); ++s) {
    const std::size_t end = f.stage_ends[s];
    bool merge = false;
    if (!out.stage_ends.empty()) {
      const std::size_t k = out.stage_ends.size();
      Span below(m.dim(), {});
      if (k >= 2) below = Span(m.dim(), out.span(m, k - 2));
      merge = true;
      for (std::size_t g = begin; g < end && merge; ++g) merge = below.contains(m.d * f.generators[g]);
    }
    if (merge) {
      out.stage_ends.back() = end;
      out.stage_labels.back() += " + " + f.stage_labels[s];
    } else {
      out.stage_ends.push_back(end);
      out.stage_labels.push_back(f.stage_labels[s]);
    }
    begin = end;
  }
  return out;
}

ObjectLift lift_object(const SmallExtension& e, const ContraModule& c, const std::optional<Vector>& shift) {
  if (c.ring.dim() != e.quotient.dim()) throw std::invalid_argument("lift_object: module is not over the quotient ring");
  const Dgla l = commutator_dgla(end_algebra(c.base));
  const NilpotentDgla nq(l, e.quotient), nt(l, e.total);
  Vector w = nq.map_coefficients(c.omega, nt, e.section);
  const std::set<std::size_t> kernel(e.kernel.begin(), e.kernel.end());
  if (shift) {
    if (shift->size() != nt.dim()) throw std::invalid_argument("lift_object: shift has the wrong length");
    nt.dgla().require_degree(*shift, 1, "lift_object shift");
    for (std::size_t i = 0; i < shift->size(); ++i)
      if ((*shift)[i] != 0 && !kernel.count(nt.ring_index(i)))
        throw std::invalid_argument("lift_object: shift must have coefficients in the kernel");
    w = w + *shift;
  }
  const ContraModule lifted = shell(c.base, w, e.total);
  const Vector square = hom_r_coordinates(lifted, lifted, lifted.d * lifted.d);

  auto groups = ideal_indices(lifted, lifted, e.kernel);
  const auto &c1 = groups[1], &c2 = groups[2], &c3 = groups[3];
  for (std::size_t i = 0; i < square.size(); ++i)
    if (square[i] != 0 && std::find(c2.begin(), c2.end(), i) == c2.end())
      throw std::logic_error("lift_object: square of the lift leaves End(V) (x) I in degree 2");
  const Matrix d12 = commutator_block(lifted, lifted, c1, c2, 1);
  const Matrix d23 = commutator_block(lifted, lifted, c2, c3, 2);
  const Homology h = homology_at(d12, d23, c2.size());
  const Vector s_local = restrict_to(square, c2);
  if (!h.is_cycle(s_local)) throw std::logic_error("lift_object: square of the lift is not a cocycle");
  const std::size_t total = square.size();
  if (!h.is_boundary(s_local)) {
    ObstructedObject o;
    o.obstruction.degree = 2;
    o.obstruction.space_dim = h.dim;
    o.obstruction.coordinates = h.class_of(s_local);
    o.obstruction.representative = to_ideal_coordinates(lifted, square);
    return o;
  }
  std::optional<Vector> x = c1.empty() ? std::optional<Vector>(Vector()) : solve(d12, -s_local);
  if (!x) throw std::logic_error("lift_object: boundary without a preimage");
  const Vector v = extend_from(*x, c1, total);
  LiftedObject out;
  out.module = realize_module(c.base, w + to_ideal_coordinates(lifted, v), e.total);
  for (const auto& z : kernel_basis(d12)) out.torsor_basis.push_back(to_ideal_coordinates(lifted, extend_from(z, c1, total)));
  return out;
}

MorphismLift lift_morphism(const SmallExtension& e, const ContraModule& source, const ContraModule& target,
                           const ModMap& f_bar, const std::optional<Vector>& shift) {
  if (source.ring.dim() != e.total.dim() || target.ring.dim() != e.total.dim())
    throw std::invalid_argument("lift_morphism: modules are not over the total ring");
  const ContraModule sq = change_ring(source, e.quotient, e.projection);
  const ContraModule tq = change_ring(target, e.quotient, e.projection);
  if (!same_shape(sq, f_bar.source) || !same_shape(tq, f_bar.target))
    throw std::invalid_argument("lift_morphism: the map does not lie over the reductions of the modules");
  const std::size_t qd = e.quotient.dim(), td = e.total.dim();
  const std::size_t blocks = f_bar.coordinates.size() / qd, total = blocks * td;
  Vector f(total);
  for (std::size_t a = 0; a < blocks; ++a)
    for (std::size_t j = 0; j < qd; ++j) {
      const Rational x = f_bar.coordinates[a * qd + j];
      if (x == 0) continue;
      for (std::size_t k = 0; k < td; ++k) f[a * td + k] += e.section.at(k, j) * x;
    }
  const std::set<std::size_t> kernel(e.kernel.begin(), e.kernel.end());
  if (shift) {
    if (shift->size() != total) throw std::invalid_argument("lift_morphism: shift has the wrong length");
    for (std::size_t i = 0; i < total; ++i)
      if ((*shift)[i] != 0 && (!kernel.count(i % td) || hom_r_degree(source, target, i) != 0))
        throw std::invalid_argument("lift_morphism: shift must be of degree 0 with coefficients in the kernel");
    f = f + *shift;
  }
  const Matrix ft = hom_r_matrix(source, target, f);
  const Vector o = hom_r_coordinates(source, target, target.d * ft - ft * source.d);
  auto groups = ideal_indices(source, target, e.kernel);
  const auto &c0 = groups[0], &c1 = groups[1], &c2 = groups[2];
  for (std::size_t i = 0; i < total; ++i)
    if (o[i] != 0 && std::find(c1.begin(), c1.end(), i) == c1.end())
      throw std::logic_error("lift_morphism: obstruction leaves Hom(V, W) (x) I in degree 1");
  const Matrix d01 = commutator_block(source, target, c0, c1, 0);
  const Matrix d12 = commutator_block(source, target, c1, c2, 1);
  const Homology h = homology_at(d01, d12, c1.size());
  const Vector o_local = restrict_to(o, c1);
  if (!h.is_cycle(o_local)) throw std::logic_error("lift_morphism: obstruction is not a cocycle");
  if (!h.is_boundary(o_local)) {
    ObstructedMorphism out;
    out.obstruction.degree = 1;
    out.obstruction.space_dim = h.dim;
    out.obstruction.coordinates = h.class_of(o_local);
    out.obstruction.representative = o;
    return out;
  }
  std::optional<Vector> x = c0.empty() ? std::optional<Vector>(Vector()) : solve(d01, -o_local);
  if (!x) throw std::logic_error("lift_morphism: boundary without a preimage");
  LiftedMorphism out{make_mod_map(source, target, f + extend_from(*x, c0, total)), {}};
  for (const auto& z : kernel_basis(d01)) out.kernel_basis.push_back(extend_from(z, c0, total));
  return out;
}

}  // namespace deform
