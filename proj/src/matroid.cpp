#include "atlas/matroid.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>

namespace atlas {

namespace {

int popcount(FaceMask m) { return std::popcount(m); }

bool in_mask(FaceMask m, int x) { return (m >> x) & 1u; }

}  // namespace

long long factorial_ll(int k) {
  long long f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// ---------------------------------------------------------------------------
// SimplicialComplex / Matroid

SimplicialComplex::SimplicialComplex(int n, std::set<FaceMask> faces)
    : n_(n), faces_(std::move(faces)), rank_(0) {
  if (n < 0 || n > 20) throw std::invalid_argument("ground set size out of range");
  if (!faces_.count(0)) throw std::invalid_argument("complex must contain the empty set");
  for (FaceMask f : faces_) {
    if (f >> n) throw std::invalid_argument("face outside the ground set");
    rank_ = std::max(rank_, popcount(f));
    for (int x = 0; x < n; ++x)
      if (in_mask(f, x) && !faces_.count(f & ~(FaceMask(1) << x)))
        throw std::invalid_argument("face family is not downward closed");
  }
}

SimplicialComplex SimplicialComplex::downward_closure(int n,
                                                      const std::vector<FaceMask>& generators) {
  std::set<FaceMask> faces{0};
  std::vector<FaceMask> stack(generators.begin(), generators.end());
  while (!stack.empty()) {
    const FaceMask f = stack.back();
    stack.pop_back();
    if (faces.count(f)) continue;
    faces.insert(f);
    for (int x = 0; x < n; ++x)
      if (in_mask(f, x)) stack.push_back(f & ~(FaceMask(1) << x));
  }
  return SimplicialComplex(n, std::move(faces));
}

std::vector<long long> SimplicialComplex::independence_profile() const {
  std::vector<long long> profile(rank_ + 1, 0);
  for (FaceMask f : faces_) ++profile[popcount(f)];
  return profile;
}

std::optional<ExchangeWitness> Matroid::exchange_violation(const SimplicialComplex& c) {
  for (FaceMask s : c.faces())
    for (FaceMask t : c.faces()) {
      if (popcount(s) >= popcount(t)) continue;
      bool ok = false;
      const FaceMask diff = t & ~s;
      for (int x = 0; x < c.n() && !ok; ++x)
        if (in_mask(diff, x) && c.is_face(s | (FaceMask(1) << x))) ok = true;
      if (!ok) return ExchangeWitness{s, t};
    }
  return std::nullopt;
}

Matroid::Matroid(SimplicialComplex c) : c_(std::move(c)) {
  if (exchange_violation(c_))
    throw std::invalid_argument("face family violates the exchange property");
}

Matroid Matroid::uniform(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("uniform matroid needs 0 <= k <= n");
  std::set<FaceMask> faces;
  for (FaceMask f = 0; f < (FaceMask(1) << n); ++f)
    if (popcount(f) <= k) faces.insert(f);
  return Matroid(SimplicialComplex(n, std::move(faces)));
}

Matroid Matroid::graphic(int vertex_count, const std::vector<std::pair<int, int>>& edges) {
  const int n = static_cast<int>(edges.size());
  if (n > 20) throw std::invalid_argument("too many edges");
  for (const auto& [u, v] : edges)
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count || u == v)
      throw std::invalid_argument("malformed edge");
  std::set<FaceMask> faces;
  std::vector<int> parent(vertex_count);
  for (FaceMask f = 0; f < (FaceMask(1) << n); ++f) {
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
      while (parent[a] != a) a = parent[a] = parent[parent[a]];
      return a;
    };
    bool forest = true;
    for (int e = 0; e < n && forest; ++e) {
      if (!in_mask(f, e)) continue;
      const int a = find(edges[e].first), b = find(edges[e].second);
      if (a == b)
        forest = false;
      else
        parent[a] = b;
    }
    if (forest) faces.insert(f);
  }
  return Matroid(SimplicialComplex(n, std::move(faces)));
}

Matroid Matroid::restriction(FaceMask keep) const {
  std::vector<int> elements;
  for (int x = 0; x < n(); ++x)
    if (in_mask(keep, x)) elements.push_back(x);
  std::set<FaceMask> faces;
  for (FaceMask f : c_.faces()) {
    if (f & ~keep) continue;
    FaceMask g = 0;
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (in_mask(f, elements[i])) g |= FaceMask(1) << i;
    faces.insert(g);
  }
  return Matroid(SimplicialComplex(static_cast<int>(elements.size()), std::move(faces)));
}

// ---------------------------------------------------------------------------
// Weights and continuation counts

WeightProfile WeightProfile::unweighted(int max_index) {
  WeightProfile w;
  w.c.assign(max_index + 1, Rat(1));
  return w;
}

WeightProfile WeightProfile::strong(int max_index, int n, int k) {
  WeightProfile w = unweighted(std::max(max_index, k + 1));
  if (n <= k) throw std::invalid_argument("strong weights need k < n");
  w.c[k + 1] = Rat(1) + rat(1, n - k);
  return w;
}

const Rat& WeightProfile::at(int i) const {
  if (i < 0 || i >= static_cast<int>(c.size()))
    throw std::invalid_argument("weight index out of range");
  return c[i];
}

bool WeightProfile::is_unweighted() const {
  for (const Rat& x : c)
    if (x != 1) return false;
  return true;
}

long long cnt_set(const SimplicialComplex& c, FaceMask alpha_set, int k) {
  if (k < 0) throw std::invalid_argument("cnt needs k >= 0");
  if (!c.is_face(alpha_set)) return 0;
  long long subsets = 0;
  for (FaceMask f : c.faces())
    if ((f & alpha_set) == alpha_set && popcount(f) == popcount(alpha_set) + k) ++subsets;
  return subsets * factorial_ll(k);
}

long long cnt(const SimplicialComplex& c, const Word& alpha, int k) {
  FaceMask mask = 0;
  for (int x : alpha) {
    if (x < 0 || x >= c.n()) throw std::invalid_argument("word letter out of range");
    const FaceMask bit = FaceMask(1) << x;
    if (mask & bit) return 0;  // not simple
    mask |= bit;
  }
  return cnt_set(c, mask, k);
}

// ---------------------------------------------------------------------------
// Local matrices and atlas construction

MatQ local_matrix(const SimplicialComplex& c, FaceMask alpha_set, int m,
                  const WeightProfile& w) {
  if (m < 1) throw std::invalid_argument("local matrix needs level m >= 1");
  const int n = c.n();
  const int star = n;
  const int ell = popcount(alpha_set);
  MatQ a = MatQ::Zero(n + 1, n + 1);
  if (!c.is_face(alpha_set)) return a;
  for (int x = 0; x < n; ++x) {
    if (in_mask(alpha_set, x)) continue;
    const FaceMask ax = alpha_set | (FaceMask(1) << x);
    a(x, star) = w.at(ell + m) * rat_ll(cnt_set(c, ax, m - 1));
    a(star, x) = a(x, star);
    for (int y = x + 1; y < n; ++y) {
      if (in_mask(alpha_set, y)) continue;
      const FaceMask axy = ax | (FaceMask(1) << y);
      a(x, y) = w.at(ell + m + 1) * rat_ll(cnt_set(c, axy, m - 1));
      a(y, x) = a(x, y);
    }
  }
  a(star, star) = w.at(ell + m - 1) * rat_ll(cnt_set(c, alpha_set, m - 1));
  return a;
}

std::string matroid_vertex_id(FaceMask alpha_set, int m, const Rat& t) {
  std::ostringstream os;
  os << "m" << m << ":t" << rat_to_string(t) << ":{";
  bool first = true;
  for (int x = 0; x < 20; ++x)
    if (in_mask(alpha_set, x)) {
      if (!first) os << ",";
      os << x;
      first = false;
    }
  os << "}";
  return os.str();
}

std::string matroid_bad_id(int m) { return "m" + std::to_string(m) + ":bad"; }

MatroidAtlasResult matroid_atlas(const Matroid& mat, int k, const WeightProfile& w,
                                 const std::vector<Rat>& t_samples) {
  const SimplicialComplex& c = mat.complex();
  const int n = c.n();
  const int star = n;
  if (k < 1 || k >= mat.rank())
    throw std::invalid_argument("matroid atlas needs 1 <= k < rank");
  for (const Rat& t : t_samples)
    if (t < 0 || t > 1) throw std::invalid_argument("t samples must lie in [0,1]");

  MatroidAtlasResult out;
  out.atlas.dimension = n + 1;
  out.root = matroid_vertex_id(0, k - 1, Rat(1));

  auto h_vector = [&](const Rat& t) {
    VecQ h(n + 1);
    for (int x = 0; x < n; ++x) h(x) = t;
    h(star) = Rat(1) - t;
    return h;
  };
  auto vertex_matrix = [&](FaceMask set, int m, const Rat& t) {
    MatQ res = MatQ::Zero(n + 1, n + 1);
    if (t != 0) res += t * local_matrix(c, set, m + 1, w);
    if (t != 1) res += (Rat(1) - t) * local_matrix(c, set, m, w);
    return res;
  };
  auto child_edges = [&](FaceMask set, int m, bool bad) {
    std::map<int, AtlasVertex<Rat>::Edge> edges;
    for (int x = 0; x < n; ++x) {
      const FaceMask ax = set | (FaceMask(1) << x);
      const bool ok = !bad && !in_mask(set, x) && c.is_face(ax);
      edges[x] = {ok ? matroid_vertex_id(ax, m - 1, Rat(1)) : matroid_bad_id(m - 1),
                  EdgeTransform<Rat>::identity()};
    }
    edges[star] = {bad ? matroid_bad_id(m - 1) : matroid_vertex_id(set, m - 1, Rat(1)),
                   EdgeTransform<Rat>::identity()};
    return edges;
  };

  for (int m = k - 1; m >= 0; --m) {
    const int max_ell = k - 1 - m;  // star edges descend without extending alpha
    std::vector<Rat> ts{Rat(1)};
    if (m >= 1)
      for (const Rat& t : t_samples)
        if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
    for (FaceMask set : c.faces()) {
      if (popcount(set) > max_ell) continue;
      for (const Rat& t : ts) {
        AtlasVertex<Rat> v;
        v.id = matroid_vertex_id(set, m, t);
        v.M = SymmetricMatrixQ(vertex_matrix(set, m, t));
        v.h = h_vector(t);
        if (m >= 1) v.out_edges = child_edges(set, m, false);
        out.info[v.id] = {set, m, t, false};
        out.atlas.add(std::move(v));
      }
    }
    if (m < k - 1) {  // levels a child can fall into when an extension is infeasible
      AtlasVertex<Rat> bad;
      bad.id = matroid_bad_id(m);
      bad.M = SymmetricMatrixQ::Zero(n + 1);
      bad.h = h_vector(Rat(1));
      if (m >= 1) bad.out_edges = child_edges(0, m, true);
      out.info[bad.id] = {0, m, Rat(1), true};
      out.atlas.add(std::move(bad));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sink hyperbolicity via the reduced pattern matrix

SinkReport sink_hyperbolic(const Matroid& mat, const Word& alpha, const WeightProfile& w) {
  const SimplicialComplex& c = mat.complex();
  SinkReport rep;
  FaceMask set = 0;
  bool simple = true;
  for (int x : alpha) {
    const FaceMask bit = FaceMask(1) << x;
    if (set & bit) simple = false;
    set |= bit;
  }
  rep.feasible = simple && c.is_face(set);
  if (!rep.feasible) {
    rep.ope = rep.reduced_ok = rep.routes_agree = rep.holds = true;
    return rep;
  }
  const int ell = popcount(set);
  const MatQ a = local_matrix(c, set, 1, w);
  rep.ope = check_ope(SymmetricMatrixQ(a));

  // Letters that continue alpha, and the relation x ~ y iff alpha x y is
  // infeasible; union-find plus an explicit transitivity audit.
  std::vector<int> letters;
  for (int x = 0; x < c.n(); ++x)
    if (!in_mask(set, x) && c.is_face(set | (FaceMask(1) << x))) letters.push_back(x);
  const int L = static_cast<int>(letters.size());
  std::vector<int> parent(L);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto related = [&](int i, int j) {
    const FaceMask xy =
        set | (FaceMask(1) << letters[i]) | (FaceMask(1) << letters[j]);
    return !c.is_face(xy);
  };
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      if (related(i, j)) parent[find(i)] = find(j);
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j)
      if (find(i) == find(j) && !related(i, j)) rep.transitivity_ok = false;

  std::set<int> roots;
  for (int i = 0; i < L; ++i) roots.insert(find(i));
  const int r = static_cast<int>(roots.size());
  rep.classes = r;

  if (r == 0) {
    // Only the star coordinate is supported; the 1x1 form is trivially OPE.
    rep.reduced_ok = true;
  } else {
    const Rat rho = w.at(ell + 2) * w.at(ell) / (w.at(ell + 1) * w.at(ell + 1));
    MatQ b = MatQ::Ones(r + 1, r + 1);
    for (int i = 0; i < r; ++i) b(i, i) = 0;
    b(r, r) = rho;
    rep.det = b.determinant();
    const Rat formula = (r % 2 ? Rat(-1) : Rat(1)) * (rho * (1 - r) + r);
    const bool det_matches = rep.det == formula;
    const Inertia shifted = inertia(SymmetricMatrixQ(MatQ(b + MatQ::Identity(r + 1, r + 1))));
    const bool multiplicity = shifted.n_zero == r - 1;
    // Spectrum: -1 with multiplicity r-1 plus two eigenvalues of positive sum
    // (trace rho + r - 1 > 0); one-positive-eigenvalue reduces to the sign of
    // (-1)^r det.
    const Rat signed_det = (r % 2 ? -rep.det : rep.det);
    rep.reduced_ok = det_matches && multiplicity && signed_det >= 0;
  }
  rep.routes_agree = rep.ope == rep.reduced_ok && rep.transitivity_ok;
  rep.holds = rep.ope && rep.routes_agree;
  return rep;
}

// ---------------------------------------------------------------------------
// Mason inequalities

MasonReport verify_mason(const Matroid& mat, int k, bool strong) {
  const SimplicialComplex& c = mat.complex();
  const int n = c.n();
  if (k < 1 || k >= mat.rank())
    throw std::invalid_argument("verify_mason needs 1 <= k < rank");
  const auto profile = c.independence_profile();
  MasonReport rep;
  rep.i_km1 = profile[k - 1];
  rep.i_k = profile[k];
  rep.i_kp1 = profile[k + 1];

  Rat factor = Rat(1) + rat(1, k);
  if (strong) factor *= Rat(1) + rat(1, n - k);
  rep.slack_direct = rat_ll(rep.i_k) * rat_ll(rep.i_k) - factor * rat_ll(rep.i_km1) * rat_ll(rep.i_kp1);
  rep.holds = rep.slack_direct >= 0;

  const WeightProfile w = strong ? WeightProfile::strong(mat.rank() + 1, n, k)
                                 : WeightProfile::unweighted(mat.rank() + 1);
  const MatQ root = local_matrix(c, 0, k, w);
  VecQ v = VecQ::Zero(n + 1), e_star = VecQ::Zero(n + 1);
  for (int x = 0; x < n; ++x) v(x) = 1;
  e_star(n) = 1;
  const Rat vMv = (v.transpose() * root * v)(0);
  const Rat vMw = (v.transpose() * root * e_star)(0);
  const Rat wMw = (e_star.transpose() * root * e_star)(0);

  const Rat fact_k = rat_ll(factorial_ll(k));
  rep.pairing_identities =
      vMv == w.at(k + 1) * rat_ll(factorial_ll(k + 1)) * rat_ll(rep.i_kp1) &&
      vMw == fact_k * rat_ll(rep.i_k) &&
      wMw == rat_ll(factorial_ll(k - 1)) * rat_ll(rep.i_km1);

  rep.root_ope = check_ope(SymmetricMatrixQ(root));
  rep.slack_atlas = vMw * vMw - vMv * wMw;
  rep.routes_agree = rep.slack_atlas == fact_k * fact_k * rep.slack_direct;
  // The matrix route proves the inequality whenever the root is hyperbolic
  // and the star form value is positive.
  if (rep.root_ope && wMw > 0 && rep.slack_atlas < 0) rep.routes_agree = false;
  return rep;
}

// ---------------------------------------------------------------------------
// Recognition

RecognitionReport recognize_matroid(const SimplicialComplex& c) {
  RecognitionReport rep;
  rep.exchange_witness = Matroid::exchange_violation(c);
  const bool direct = !rep.exchange_witness.has_value();

  const int n = c.n();
  bool atlas_route = true;
  for (FaceMask u : c.faces()) {
    if (!atlas_route) break;
    std::vector<int> outside;
    for (int x = 0; x < n; ++x)
      if (!in_mask(u, x)) outside.push_back(x);
    const int L = static_cast<int>(outside.size());
    for (int a = 0; a < L && atlas_route; ++a)
      for (int b = a + 1; b < L && atlas_route; ++b)
        for (int d = b + 1; d < L && atlas_route; ++d) {
          const int xs[3] = {outside[a], outside[b], outside[d]};
          MatQ m = MatQ::Zero(4, 4);
          for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
              const FaceMask pair =
                  u | (FaceMask(1) << xs[i]) | (FaceMask(1) << xs[j]);
              m(i, j) = c.is_face(pair) ? 1 : 0;
              m(j, i) = m(i, j);
            }
            m(i, 3) = c.is_face(u | (FaceMask(1) << xs[i])) ? 1 : 0;
            m(3, i) = m(i, 3);
          }
          m(3, 3) = 1;
          if (!check_ope(SymmetricMatrixQ(m))) {
            atlas_route = false;
            rep.abs_witness =
                RecognitionReport::AbsWitness{u, xs[0], xs[1], xs[2], m};
          }
        }
  }
  rep.is_matroid = direct;
  rep.routes_agree = direct == atlas_route;
  return rep;
}

}  // namespace atlas
