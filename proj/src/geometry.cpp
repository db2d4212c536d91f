#include "atlas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace atlas {

namespace {

double factorial_d(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Visits every m-subset of [0, r) in lexicographic order.
template <typename F>
void for_each_subset(int r, int m, F&& fn) {
  if (m < 0 || m > r) return;
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = m - 1;
    while (i >= 0 && idx[i] == r - m + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
  }
}

int affine_dim(const std::vector<VecD>& pts, double tol) {
  if (pts.empty()) return -1;
  const int m = static_cast<int>(pts[0].size());
  const int k = static_cast<int>(pts.size()) - 1;
  if (k == 0) return 0;
  Eigen::MatrixXd d(m, k);
  for (int i = 0; i < k; ++i) d.col(i) = pts[i + 1] - pts[0];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return rank;
}

struct NormalizedBody {
  std::vector<VecD> u;  // unit normals
  VecD h;               // scaled offsets
};

NormalizedBody normalize_system(const std::vector<VecD>& normals, const VecD& offsets) {
  const int r = static_cast<int>(normals.size());
  if (r == 0) throw std::invalid_argument("halfspace system has no facets");
  const int m = static_cast<int>(normals[0].size());
  if (m < 1) throw std::invalid_argument("halfspace system has dimension 0");
  if (static_cast<int>(offsets.size()) != r)
    throw std::invalid_argument("offset count does not match normal count");
  NormalizedBody b;
  b.u.resize(r);
  b.h.resize(r);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(normals[i].size()) != m)
      throw std::invalid_argument("normals of mixed dimensions");
    const double n = normals[i].norm();
    if (n < 1e-12) throw std::invalid_argument("zero normal vector");
    b.u[i] = normals[i] / n;
    b.h(i) = offsets(i) / n;
  }
  return b;
}

struct VertexData {
  std::vector<VecD> verts;
  std::vector<std::vector<int>> incidence;  // sorted facet indices per vertex
};

VertexData enumerate_vertex_data(const NormalizedBody& b, double eps) {
  const int r = static_cast<int>(b.u.size());
  const int m = static_cast<int>(b.u[0].size());
  const double hscale = std::max(1.0, b.h.cwiseAbs().maxCoeff());
  const double tol0 = std::max(eps, 1e-12) * hscale;
  VertexData out;
  for_each_subset(r, m, [&](const std::vector<int>& idx) {
    Eigen::MatrixXd a(m, m);
    VecD rhs(m);
    for (int k = 0; k < m; ++k) {
      a.row(k) = b.u[idx[k]].transpose();
      rhs(k) = b.h(idx[k]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-9);
    if (!lu.isInvertible()) return;
    const VecD x = lu.solve(rhs);
    const double tol = tol0 * std::max(1.0, x.cwiseAbs().maxCoeff());
    for (int i = 0; i < r; ++i)
      if (b.u[i].dot(x) - b.h(i) > tol) return;
    for (const VecD& v : out.verts)
      if ((v - x).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, x.cwiseAbs().maxCoeff()))
        return;  // already found via another facet subset
    out.verts.push_back(x);
  });
  out.incidence.resize(out.verts.size());
  for (std::size_t v = 0; v < out.verts.size(); ++v) {
    const VecD& x = out.verts[v];
    const double tol = tol0 * std::max(1.0, x.cwiseAbs().maxCoeff());
    for (int i = 0; i < r; ++i)
      if (std::abs(b.u[i].dot(x) - b.h(i)) <= tol) out.incidence[v].push_back(i);
  }
  return out;
}

void check_bounded(const std::vector<VecD>& u, int m) {
  const int r = static_cast<int>(u.size());
  Eigen::MatrixXd all(r, m);
  for (int i = 0; i < r; ++i) all.row(i) = u[i].transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(all);
  qr.setThreshold(1e-9);
  if (qr.rank() < m)
    throw std::invalid_argument("unbounded polytope: normals do not span the space");
  auto recedes = [&](VecD d) {
    const double n = d.norm();
    if (n < 1e-9) return false;
    d /= n;
    for (int i = 0; i < r; ++i)
      if (u[i].dot(d) > 1e-9) return false;
    return true;
  };
  if (m == 1) {
    VecD d(1);
    d << 1;
    if (recedes(d) || recedes(VecD(-d)))
      throw std::invalid_argument("unbounded polytope");
    return;
  }
  // An extreme recession ray lies in the kernel of m-1 independent normals.
  bool unbounded = false;
  for_each_subset(r, m - 1, [&](const std::vector<int>& idx) {
    if (unbounded) return;
    Eigen::MatrixXd a(m - 1, m);
    for (int k = 0; k < m - 1; ++k) a.row(k) = u[idx[k]].transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-9);
    const Eigen::MatrixXd ker = lu.kernel();
    for (Eigen::Index c = 0; c < ker.cols(); ++c)
      if (recedes(ker.col(c)) || recedes(VecD(-ker.col(c)))) unbounded = true;
  });
  if (unbounded) throw std::invalid_argument("unbounded polytope");
}

// A face of the shared combinatorial structure, carried through the facet
// recursion: the reference vertices lying on it, the facets still active, the
// in-subspace unit normals (in ambient coordinates), and per-body support
// numbers.
struct Face {
  int dim = 0;
  std::vector<int> verts;
  std::vector<int> active;
  std::map<int, VecD> normal;
  std::vector<std::map<int, double>> hb;
};

bool vertex_on(const PolytopeFamily& fam, int v, int facet) {
  const auto& in = fam.ref_incidence[v];
  return std::binary_search(in.begin(), in.end(), facet);
}

Face root_face(const PolytopeFamily& fam) {
  Face f;
  f.dim = fam.atype.m;
  f.verts.resize(fam.ref_vertices.size());
  std::iota(f.verts.begin(), f.verts.end(), 0);
  f.active.resize(fam.r());
  std::iota(f.active.begin(), f.active.end(), 0);
  for (int i = 0; i < fam.r(); ++i) f.normal[i] = fam.atype.normals[i];
  f.hb.resize(fam.bodies());
  for (int b = 0; b < fam.bodies(); ++b)
    for (int i = 0; i < fam.r(); ++i) f.hb[b][i] = fam.h[b](i);
  return f;
}

Face child_face(const PolytopeFamily& fam, const Face& f, int i) {
  Face c;
  c.dim = f.dim - 1;
  for (int v : f.verts)
    if (vertex_on(fam, v, i)) c.verts.push_back(v);
  if (c.verts.empty()) throw std::runtime_error("facet recursion reached an empty facet");
  const VecD ni = f.normal.at(i);
  c.hb.resize(f.hb.size());
  for (int j : f.active) {
    if (j == i) continue;
    bool on = false;
    for (int v : c.verts)
      if (vertex_on(fam, v, j)) {
        on = true;
        break;
      }
    if (!on) continue;
    const VecD& nj = f.normal.at(j);
    const double cosx = ni.dot(nj);
    const double s2 = 1 - cosx * cosx;
    if (s2 < 1e-12) throw std::runtime_error("degenerate angle in facet recursion");
    const double sinx = std::sqrt(s2);
    c.active.push_back(j);
    c.normal[j] = ((nj - cosx * ni) / sinx).eval();
    for (std::size_t b = 0; b < f.hb.size(); ++b)
      c.hb[b][j] = f.hb[b].at(j) / sinx - f.hb[b].at(i) * cosx / sinx;
  }
  return c;
}

double face_mixed_volume(const PolytopeFamily& fam, const Face& f,
                         const std::vector<int>& sel, std::size_t idx) {
  if (f.dim == 0) return 1.0;
  const auto& h = f.hb[sel[idx]];
  double total = 0;
  for (int i : f.active)
    total += h.at(i) * face_mixed_volume(fam, child_face(fam, f, i), sel, idx + 1);
  return total / f.dim;
}

MatX<double> face_mv_matrix(const PolytopeFamily& fam, const Face& f,
                            const std::vector<int>& sel) {
  const int r = fam.r();
  const int d = f.dim;
  if (d < 2 || static_cast<int>(sel.size()) != d - 2)
    throw std::invalid_argument("mixed-volume matrix needs dim - 2 selected bodies");
  MatX<double> mat = MatX<double>::Zero(r, r);
  const double fact = factorial_d(d - 2);
  for (std::size_t a = 0; a < f.active.size(); ++a)
    for (std::size_t b = a + 1; b < f.active.size(); ++b) {
      const int i = f.active[a], j = f.active[b];
      bool shared = false;
      for (int v : f.verts)
        if (vertex_on(fam, v, i) && vertex_on(fam, v, j)) {
          shared = true;
          break;
        }
      if (!shared) continue;
      const double cosx = f.normal.at(i).dot(f.normal.at(j));
      const double s2 = 1 - cosx * cosx;
      if (s2 < 1e-12) throw std::runtime_error("degenerate angle between adjacent facets");
      const double sinx = std::sqrt(s2);
      const Face fij = child_face(fam, child_face(fam, f, i), j);
      const double val = fact * face_mixed_volume(fam, fij, sel, 0);
      mat(i, j) += val / sinx;
      mat(j, i) += val / sinx;
      mat(i, i) -= val * cosx / sinx;
      mat(j, j) -= val * cosx / sinx;
    }
  return mat;
}

void check_body_index(const PolytopeFamily& fam, int body) {
  if (body < 0 || body >= fam.bodies())
    throw std::invalid_argument("body index out of range");
}

VecD body_centroid(const PolytopeFamily& fam, int b) {
  const NormalizedBody nb{fam.atype.normals, fam.h[b]};
  const VertexData vd = enumerate_vertex_data(nb, kDefaultEps);
  VecD c = VecD::Zero(fam.atype.m);
  for (const VecD& v : vd.verts) c += v;
  return c / static_cast<double>(vd.verts.size());
}

}  // namespace

bool AType::adjacent(int i, int j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  return std::binary_search(J.begin(), J.end(), std::make_pair(i, j));
}

double AType::theta(int i, int j) const {
  const double c = std::clamp(normals[i].dot(normals[j]), -1.0, 1.0);
  return std::acos(c);
}

int PolytopeFamily::body(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown body name: " + name);
}

std::vector<VecD> enumerate_vertices(const HalfspaceSystem& sys, double eps) {
  return enumerate_vertex_data(normalize_system(sys.normals, sys.offsets), eps).verts;
}

PolytopeFamily family_atype(const std::vector<VecD>& normals,
                            const std::vector<VecD>& offsets,
                            std::vector<std::string> names, double eps) {
  const int r = static_cast<int>(normals.size());
  if (r == 0) throw std::invalid_argument("family has no facets");
  const int m = static_cast<int>(normals[0].size());
  if (offsets.empty()) throw std::invalid_argument("family has no bodies");
  if (r < m + 1)
    throw std::invalid_argument("too few facets for a bounded full-dimensional polytope");
  const int bodies = static_cast<int>(offsets.size());
  if (names.empty())
    for (int b = 0; b < bodies; ++b) names.push_back("P" + std::to_string(b));
  if (static_cast<int>(names.size()) != bodies)
    throw std::invalid_argument("name count does not match body count");
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    throw std::invalid_argument("duplicate body names");

  PolytopeFamily fam;
  fam.atype.m = m;
  fam.names = std::move(names);
  std::vector<NormalizedBody> nb(bodies);
  for (int b = 0; b < bodies; ++b) {
    nb[b] = normalize_system(normals, offsets[b]);
    fam.h.push_back(nb[b].h);
  }
  fam.atype.normals = nb[0].u;
  check_bounded(fam.atype.normals, m);

  const double adim_tol = 1e-7;
  std::vector<VertexData> vd(bodies);
  for (int b = 0; b < bodies; ++b) {
    vd[b] = enumerate_vertex_data(nb[b], eps);
    if (vd[b].verts.empty())
      throw std::invalid_argument("empty polytope: " + fam.names[b]);
    if (affine_dim(vd[b].verts, adim_tol) != m)
      throw std::invalid_argument("polytope is not full-dimensional: " + fam.names[b]);
    for (const auto& in : vd[b].incidence)
      if (static_cast<int>(in.size()) != m)
        throw std::invalid_argument("polytope is not simple: " + fam.names[b]);
    for (int i = 0; i < r; ++i) {
      std::vector<VecD> on;
      for (std::size_t v = 0; v < vd[b].verts.size(); ++v)
        if (std::binary_search(vd[b].incidence[v].begin(), vd[b].incidence[v].end(), i))
          on.push_back(vd[b].verts[v]);
      if (on.empty())
        throw std::invalid_argument("facet " + std::to_string(i) + " is empty in body " +
                                    fam.names[b]);
      if (affine_dim(on, adim_tol) != m - 1)
        throw std::invalid_argument("facet " + std::to_string(i) + " is degenerate in body " +
                                    fam.names[b]);
    }
  }

  // Strong isomorphism: identical vertex-incidence structure across members.
  const std::set<std::vector<int>> ref_inc(vd[0].incidence.begin(), vd[0].incidence.end());
  for (int b = 1; b < bodies; ++b)
    if (std::set<std::vector<int>>(vd[b].incidence.begin(), vd[b].incidence.end()) != ref_inc)
      throw std::invalid_argument("combinatorial structure differs across bodies (" +
                                  fam.names[0] + " vs " + fam.names[b] + ")");

  // Facet adjacency, identical across bodies by the check above.
  std::set<std::pair<int, int>> adj;
  for (const auto& in : vd[0].incidence)
    for (std::size_t a = 0; a < in.size(); ++a)
      for (std::size_t c = a + 1; c < in.size(); ++c) adj.emplace(in[a], in[c]);
  for (const auto& [i, j] : adj) {
    std::vector<VecD> shared;
    for (std::size_t v = 0; v < vd[0].verts.size(); ++v) {
      const auto& in = vd[0].incidence[v];
      if (std::binary_search(in.begin(), in.end(), i) &&
          std::binary_search(in.begin(), in.end(), j))
        shared.push_back(vd[0].verts[v]);
    }
    if (affine_dim(shared, adim_tol) != m - 2)
      throw std::invalid_argument("facets " + std::to_string(i) + "," + std::to_string(j) +
                                  " do not meet in a ridge");
    const double c = fam.atype.normals[i].dot(fam.atype.normals[j]);
    if (1 - c * c < 1e-12)
      throw std::invalid_argument("adjacent facets with parallel normals");
    fam.atype.J.emplace_back(i, j);
  }
  std::sort(fam.atype.J.begin(), fam.atype.J.end());
  fam.ref_vertices = vd[0].verts;
  fam.ref_incidence = vd[0].incidence;
  return fam;
}

std::map<int, double> facet_support(const PolytopeFamily& fam, int body, int i) {
  check_body_index(fam, body);
  if (i < 0 || i >= fam.r()) throw std::invalid_argument("facet index out of range");
  std::map<int, double> out;
  const VecD& h = fam.h[body];
  for (const auto& [a, b] : fam.atype.J) {
    if (a != i && b != i) continue;
    const int j = (a == i) ? b : a;
    const double t = fam.atype.theta(i, j);
    out[j] = h(j) / std::sin(t) - h(i) / std::tan(t);
  }
  if (out.empty()) throw std::invalid_argument("facet has no adjacent facets");
  return out;
}

double volume(const PolytopeFamily& fam, int body) {
  check_body_index(fam, body);
  const std::vector<int> sel(fam.atype.m, body);
  return face_mixed_volume(fam, root_face(fam), sel, 0);
}

double facet_volume(const PolytopeFamily& fam, int body, int i) {
  check_body_index(fam, body);
  if (i < 0 || i >= fam.r()) throw std::invalid_argument("facet index out of range");
  const Face c = child_face(fam, root_face(fam), i);
  const std::vector<int> sel(fam.atype.m - 1, body);
  return face_mixed_volume(fam, c, sel, 0);
}

double mixed_volume(const PolytopeFamily& fam, const std::vector<int>& selection) {
  if (static_cast<int>(selection.size()) != fam.atype.m)
    throw std::invalid_argument("mixed volume needs exactly dim bodies");
  for (int b : selection) check_body_index(fam, b);
  return face_mixed_volume(fam, root_face(fam), selection, 0);
}

MatX<double> mv_matrix(const PolytopeFamily& fam, const std::vector<int>& selection) {
  if (static_cast<int>(selection.size()) != fam.atype.m - 2)
    throw std::invalid_argument("mixed-volume matrix needs exactly dim - 2 bodies");
  for (int b : selection) check_body_index(fam, b);
  return face_mv_matrix(fam, root_face(fam), selection);
}

MvIdentityReport mv_identities(const PolytopeFamily& fam, int A, int B,
                               const std::vector<int>& rest, double tol) {
  check_body_index(fam, A);
  check_body_index(fam, B);
  const int m = fam.atype.m;
  if (static_cast<int>(rest.size()) != m - 2)
    throw std::invalid_argument("identity check needs exactly dim - 2 extra bodies");
  const MatX<double> mat = mv_matrix(fam, rest);
  const VecD mha = mat * fam.h[A];
  MvIdentityReport rep;
  auto dev = [&](double lhs, double rhs) {
    const double d = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
    rep.max_rel_dev = std::max(rep.max_rel_dev, d);
  };
  const Face root = root_face(fam);
  std::vector<int> sel_a{A};
  sel_a.insert(sel_a.end(), rest.begin(), rest.end());
  for (int i = 0; i < fam.r(); ++i) {
    const Face ci = child_face(fam, root, i);
    dev(mha(i), factorial_d(m - 1) * face_mixed_volume(fam, ci, sel_a, 0));
  }
  std::vector<int> sel_ab{A, B};
  sel_ab.insert(sel_ab.end(), rest.begin(), rest.end());
  dev(fam.h[A].dot(mat * fam.h[B]), factorial_d(m) * mixed_volume(fam, sel_ab));
  rep.holds = rep.max_rel_dev <= tol;
  return rep;
}

PolytopeFamily translate_origin_interior(const PolytopeFamily& fam) {
  std::vector<VecD> offsets;
  for (int b = 0; b < fam.bodies(); ++b) {
    const VecD c = body_centroid(fam, b);
    VecD h = fam.h[b];
    for (int i = 0; i < fam.r(); ++i) h(i) -= fam.atype.normals[i].dot(c);
    offsets.push_back(h);
  }
  return family_atype(fam.atype.normals, offsets, fam.names);
}

AfAtlasResult af_atlas(const PolytopeFamily& fam_in, const std::vector<int>& selection) {
  const int m = fam_in.atype.m;
  if (m < 3) throw std::invalid_argument("the atlas route needs dimension >= 3");
  if (static_cast<int>(selection.size()) != m - 2)
    throw std::invalid_argument("atlas needs exactly dim - 2 selected bodies");
  for (int b : selection) check_body_index(fam_in, b);
  const PolytopeFamily fam = translate_origin_interior(fam_in);
  const int r = fam.r();
  const Face root = root_face(fam);

  AfAtlasResult out;
  out.atlas.dimension = r;
  out.root = "v";
  AtlasVertex<double> src;
  src.id = "v";
  src.M = SymmetricMatrixD(face_mv_matrix(fam, root, selection));
  src.h = fam.h[selection[0]];
  const std::vector<int> sub(selection.begin() + 1, selection.end());
  for (int i = 0; i < r; ++i) {
    const Face ci = child_face(fam, root, i);
    AtlasVertex<double> sink;
    sink.id = "F" + std::to_string(i);
    sink.M = SymmetricMatrixD(face_mv_matrix(fam, ci, sub));
    VecD hi = VecD::Zero(r);
    MatX<double> t = MatX<double>::Zero(r, r);
    for (int j : ci.active) {
      const double ang = fam.atype.theta(i, j);
      const double csc = 1 / std::sin(ang), cot = 1 / std::tan(ang);
      t(j, j) = csc;
      t(j, i) = -cot;
      hi(j) = src.h(j) * csc - src.h(i) * cot;
    }
    sink.h = hi;
    src.out_edges[i] = {sink.id, EdgeTransform<double>::matrix(t)};
    out.atlas.add(std::move(sink));
  }
  out.atlas.add(std::move(src));
  return out;
}

AfReport verify_af(const PolytopeFamily& fam_in, int A, int B,
                   const std::vector<int>& rest, double eps) {
  check_body_index(fam_in, A);
  check_body_index(fam_in, B);
  const int m = fam_in.atype.m;
  if (m < 2) throw std::invalid_argument("quadratic inequality needs dimension >= 2");
  if (static_cast<int>(rest.size()) != m - 2)
    throw std::invalid_argument("need exactly dim - 2 extra bodies");
  const PolytopeFamily fam = translate_origin_interior(fam_in);

  AfReport rep;
  std::vector<int> sab{A, B}, saa{A, A}, sbb{B, B};
  for (auto* s : {&sab, &saa, &sbb}) s->insert(s->end(), rest.begin(), rest.end());
  rep.v_ab = mixed_volume(fam, sab);
  rep.v_aa = mixed_volume(fam, saa);
  rep.v_bb = mixed_volume(fam, sbb);
  rep.slack = rep.v_ab * rep.v_ab - rep.v_aa * rep.v_bb;
  const double scale =
      std::max({1.0, rep.v_ab * rep.v_ab, std::abs(rep.v_aa * rep.v_bb)});
  rep.direct_ok = rep.slack >= -std::max(eps, 1e-12) * scale;

  const SymmetricMatrixD sm(mv_matrix(fam, rest));
  rep.ope = check_ope(sm, eps);
  rep.pair_ok = check_hyp_pair(sm, fam.h[A], fam.h[B], eps);
  rep.matrix_ok = mv_identities(fam, A, B, rest).holds;
  if (m == 2) {
    rep.base_ok = check_ndc_with_direction(sm, fam.h[A], eps);
  } else {
    const AfAtlasResult res = af_atlas(fam, rest);
    rep.atlas_ok = verify_local_global(res.atlas, res.root, eps).holds;
  }
  rep.holds = rep.direct_ok && rep.matrix_ok && rep.ope && rep.pair_ok &&
              rep.base_ok && rep.atlas_ok;
  return rep;
}

PolytopeFamily perturb_family(const std::vector<HalfspaceSystem>& bodies,
                              double eps_scale, std::uint64_t seed) {
  if (bodies.empty()) throw std::invalid_argument("no bodies to perturb");
  if (!(eps_scale > 0)) throw std::invalid_argument("perturbation scale must be positive");
  const int m = static_cast<int>(bodies[0].normals.empty() ? 0 : bodies[0].normals[0].size());
  if (m != 2 && m != 3)
    throw std::invalid_argument("perturbation supports dimensions 2 and 3 only");

  struct BodyData {
    NormalizedBody nb;
    std::vector<VecD> verts;
  };
  std::vector<BodyData> data;
  for (const auto& sys : bodies) {
    BodyData d{normalize_system(sys.normals, sys.offsets), {}};
    d.verts = enumerate_vertex_data(d.nb, kDefaultEps).verts;
    if (d.verts.empty()) throw std::invalid_argument("empty body in perturbation input");
    data.push_back(std::move(d));
  }
  auto support_of = [](const BodyData& d, const VecD& dir) {
    double best = d.verts[0].dot(dir);
    for (const VecD& v : d.verts) best = std::max(best, v.dot(dir));
    return best;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<VecD> segs;  // accumulated generic zonotope segments
  std::string last_error;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<VecD> dirs;
    auto push_dir = [&](const VecD& d) {
      const double n = d.norm();
      if (n < 1e-12) return;
      const VecD u = d / n;
      for (const VecD& e : dirs)
        if (e.dot(u) > 1 - 1e-10) return;
      dirs.push_back(u);
    };
    for (const auto& d : data)
      for (const VecD& u : d.nb.u) push_dir(u);
    if (m == 2) {
      for (const VecD& s : segs) {
        VecD p(2);
        p << -s(1), s(0);
        push_dir(p);
        push_dir(VecD(-p));
      }
    } else {
      for (std::size_t a = 0; a < segs.size(); ++a)
        for (std::size_t b = a + 1; b < segs.size(); ++b) {
          const Eigen::Vector3d c =
              Eigen::Vector3d(segs[a]).cross(Eigen::Vector3d(segs[b]));
          push_dir(VecD(c));
          push_dir(VecD(-c));
        }
    }
    std::sort(dirs.begin(), dirs.end(), [](const VecD& a, const VecD& b) {
      for (int i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return a(i) < b(i);
      return false;
    });
    const int r = static_cast<int>(dirs.size());
    auto support_q = [&](const VecD& dir) {
      double s = 0;
      for (const auto& d : data) s += support_of(d, dir);
      for (const VecD& seg : segs) s += std::abs(dir.dot(seg)) / 2;
      return s;
    };
    std::vector<VecD> offsets;
    for (const auto& d : data) {
      VecD o(r);
      for (int i = 0; i < r; ++i)
        o(i) = support_of(d, dirs[i]) + eps_scale * support_q(dirs[i]);
      offsets.push_back(o);
    }
    try {
      return family_atype(dirs, offsets);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
    const int extra = 2 * std::max(r, 2);
    for (int k = 0; k < extra; ++k) {
      VecD s(m);
      for (int i = 0; i < m; ++i) s(i) = uni(rng);
      if (s.norm() > 0.1) segs.push_back(s);
    }
  }
  throw std::runtime_error("perturbation retry cap exceeded: " + last_error);
}

namespace {

std::vector<VecD> ccw_vertices(const HalfspaceSystem& sys) {
  std::vector<VecD> v = enumerate_vertices(sys);
  if (v.size() < 3) throw std::invalid_argument("degenerate polygon");
  VecD c = VecD::Zero(2);
  for (const VecD& p : v) c += p;
  c /= static_cast<double>(v.size());
  std::sort(v.begin(), v.end(), [&](const VecD& a, const VecD& b) {
    return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
  });
  return v;
}

double shoelace(const std::vector<VecD>& v) {
  double s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const VecD& a = v[i];
    const VecD& b = v[(i + 1) % v.size()];
    s += a(0) * b(1) - b(0) * a(1);
  }
  return s / 2;
}

// Rotates a counterclockwise vertex list to start at the lowest (then
// leftmost) vertex, so edge directions appear in increasing angle order.
void start_at_bottom(std::vector<VecD>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i](1) < v[best](1) || (v[i](1) == v[best](1) && v[i](0) < v[best](0))) best = i;
  std::rotate(v.begin(), v.begin() + best, v.end());
}

}  // namespace

double polygon_area(const HalfspaceSystem& sys) { return shoelace(ccw_vertices(sys)); }

double polygon_mixed_area(const HalfspaceSystem& A, const HalfspaceSystem& B) {
  std::vector<VecD> va = ccw_vertices(A), vb = ccw_vertices(B);
  start_at_bottom(va);
  start_at_bottom(vb);
  std::vector<VecD> edges;
  for (const auto* poly : {&va, &vb})
    for (std::size_t i = 0; i < poly->size(); ++i)
      edges.push_back((*poly)[(i + 1) % poly->size()] - (*poly)[i]);
  std::stable_sort(edges.begin(), edges.end(), [](const VecD& a, const VecD& b) {
    auto ang = [](const VecD& e) {
      double t = std::atan2(e(1), e(0));
      if (t < 0) t += 2 * M_PI;
      return t;
    };
    return ang(a) < ang(b);
  });
  std::vector<VecD> sum;
  VecD cur = va[0] + vb[0];
  for (const VecD& e : edges) {
    sum.push_back(cur);
    cur += e;
  }
  return (shoelace(sum) - shoelace(va) - shoelace(vb)) / 2;
}

}  // namespace atlas
