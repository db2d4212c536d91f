#include "atlas/lorentzian.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace atlas {

namespace {

int exp_sum(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

std::string order_id(const Exponent& e) {
  std::ostringstream os;
  os << "d[";
  for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
  os << "]";
  return os.str();
}

}  // namespace

HomogeneousPolynomial::HomogeneousPolynomial(int n, int degree) : n_(n), degree_(degree) {
  if (n < 1 || degree < 0) throw std::invalid_argument("polynomial needs n >= 1, degree >= 0");
}

HomogeneousPolynomial HomogeneousPolynomial::from_terms(
    int n, int degree, const std::map<Exponent, Rat>& terms) {
  HomogeneousPolynomial f(n, degree);
  for (const auto& [e, c] : terms) {
    if (static_cast<int>(e.size()) != n)
      throw std::invalid_argument("exponent vector of wrong length");
    for (int x : e)
      if (x < 0) throw std::invalid_argument("negative exponent");
    if (exp_sum(e) != degree)
      throw std::invalid_argument("term degree does not match the polynomial degree");
    if (c != 0) f.terms_[e] = c;
  }
  return f;
}

std::set<Exponent> HomogeneousPolynomial::support() const {
  std::set<Exponent> s;
  for (const auto& [e, c] : terms_) s.insert(e);
  return s;
}

Rat HomogeneousPolynomial::evaluate(const VecQ& w) const {
  if (static_cast<int>(w.size()) != n_)
    throw std::invalid_argument("evaluation point of wrong dimension");
  Rat total(0);
  for (const auto& [e, c] : terms_) {
    Rat term = c;
    for (int i = 0; i < n_; ++i)
      for (int p = 0; p < e[i]; ++p) term *= w(i);
    total += term;
  }
  return total;
}

HomogeneousPolynomial HomogeneousPolynomial::scaled(const Rat& c) const {
  HomogeneousPolynomial f(n_, degree_);
  if (c != 0)
    for (const auto& [e, coeff] : terms_) f.terms_[e] = c * coeff;
  return f;
}

HomogeneousPolynomial derivative(const HomogeneousPolynomial& f, const Exponent& m) {
  if (static_cast<int>(m.size()) != f.n())
    throw std::invalid_argument("derivative order of wrong length");
  const int order = exp_sum(m);
  const int new_degree = f.degree() - order;
  if (new_degree < 0) return HomogeneousPolynomial(f.n(), 0);
  std::map<Exponent, Rat> terms;
  for (const auto& [e, c] : f.terms()) {
    bool ok = true;
    Rat coeff = c;
    Exponent ne = e;
    for (int i = 0; i < f.n() && ok; ++i) {
      if (e[i] < m[i]) {
        ok = false;
        break;
      }
      for (int p = 0; p < m[i]; ++p) coeff *= (e[i] - p);
      ne[i] = e[i] - m[i];
    }
    if (ok) terms[ne] += coeff;
  }
  for (auto it = terms.begin(); it != terms.end();)
    it = (it->second == 0) ? terms.erase(it) : std::next(it);
  return HomogeneousPolynomial::from_terms(f.n(), new_degree, terms);
}

std::vector<Exponent> simplex_points(int n, int d) {
  std::vector<Exponent> out;
  Exponent cur(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  if (n >= 1 && d >= 0) rec(rec, 0, d);
  return out;
}

std::optional<MConvexWitness> m_convex_violation(const std::set<Exponent>& support) {
  for (const Exponent& a : support)
    for (const Exponent& b : support) {
      const int n = static_cast<int>(a.size());
      for (int i = 0; i < n; ++i) {
        if (a[i] <= b[i]) continue;
        bool ok = false;
        for (int j = 0; j < n && !ok; ++j) {
          if (a[j] >= b[j]) continue;
          Exponent moved = a;
          --moved[i];
          ++moved[j];
          ok = support.count(moved) > 0;
        }
        if (!ok) return MConvexWitness{a, b, i};
      }
    }
  return std::nullopt;
}

MatQ hessian(const HomogeneousPolynomial& f, const VecQ& w) {
  const int n = f.n();
  if (static_cast<int>(w.size()) != n)
    throw std::invalid_argument("hessian point of wrong dimension");
  MatQ h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Exponent m(n, 0);
      ++m[i];
      ++m[j];
      h(i, j) = derivative(f, m).evaluate(w);
      h(j, i) = h(i, j);
    }
  return h;
}

LorentzReport is_lorentzian(const HomogeneousPolynomial& f) {
  if (f.degree() < 2)
    throw std::invalid_argument("Lorentzian certification is undefined for degree < 2");
  LorentzReport rep;
  for (const auto& [e, c] : f.terms())
    if (c < 0) {
      rep.witness = "negative coefficient at " + order_id(e);
      return rep;
    }
  rep.support_witness = m_convex_violation(f.support());
  if (rep.support_witness) {
    rep.witness = "support is not M-convex (witness " +
                  order_id(rep.support_witness->a) + ", " +
                  order_id(rep.support_witness->b) + ", i=" +
                  std::to_string(rep.support_witness->i) + ")";
    return rep;
  }
  const VecQ ones = VecQ::Constant(f.n(), Rat(1));
  for (const Exponent& m : simplex_points(f.n(), f.degree() - 2)) {
    const HomogeneousPolynomial g = derivative(f, m);
    if (g.is_zero()) continue;
    if (!check_ope(SymmetricMatrixQ(hessian(g, ones)))) {
      rep.hessian_witness = m;
      rep.witness = "Hessian of derivative " + order_id(m) + " has more than one positive eigenvalue";
      return rep;
    }
  }
  rep.lorentzian = true;
  return rep;
}

LorentzAtlasResult lorentzian_atlas(const HomogeneousPolynomial& f, const VecQ& w) {
  const int n = f.n();
  const int d = f.degree();
  if (d < 3) throw std::invalid_argument("derivative tower needs degree >= 3");
  if (static_cast<int>(w.size()) != n) throw std::invalid_argument("point of wrong dimension");
  for (int i = 0; i < n; ++i)
    if (!(w(i) > 0)) throw std::invalid_argument("point must be strictly positive");

  LorentzAtlasResult out;
  out.atlas.dimension = n;
  const Exponent zero(n, 0);
  out.root = order_id(zero);
  for (int level = 0; level <= d - 2; ++level) {
    const int m = d - 2 - level;  // remaining degree of the Hessian's polynomial minus 2
    for (const Exponent& alpha : simplex_points(n, level)) {
      AtlasVertex<Rat> v;
      v.id = order_id(alpha);
      v.M = SymmetricMatrixQ(hessian(derivative(f, alpha), w));
      if (m >= 1)
        v.h = VecQ(w / rat(m));
      else
        v.h = w;  // sinks: constant Hessians, h is never consumed by an edge
      if (m >= 1)
        for (int x = 0; x < n; ++x) {
          Exponent child = alpha;
          ++child[x];
          v.out_edges[x] = {order_id(child), EdgeTransform<Rat>::identity()};
        }
      out.orders[v.id] = alpha;
      out.atlas.add(std::move(v));
    }
  }
  return out;
}

HessianHypReport verify_hessian_hyp(const HomogeneousPolynomial& f, const VecQ& w) {
  const LorentzReport cert = is_lorentzian(f);
  if (!cert.lorentzian)
    throw std::invalid_argument("not Lorentzian: " + cert.witness);
  for (int i = 0; i < f.n(); ++i)
    if (!(w(i) > 0)) throw std::invalid_argument("point must be strictly positive");
  HessianHypReport rep;
  rep.root_ope = check_ope(SymmetricMatrixQ(hessian(f, w)));
  if (f.degree() >= 3) {
    const LorentzAtlasResult res = lorentzian_atlas(f, w);
    for (const auto& [id, v] : res.atlas.vertices) {
      if (v.is_sink()) continue;
      if (support(v.M).empty()) continue;  // vanished derivative, nothing to propagate
      if (!verify_local_global(res.atlas, id).holds) {
        rep.atlas_ok = false;
        break;
      }
    }
  }
  rep.holds = rep.root_ope && rep.atlas_ok;
  return rep;
}

HomogeneousPolynomial basis_polynomial(const Matroid& m) {
  const int rank = m.rank();
  std::map<Exponent, Rat> terms;
  for (FaceMask f : m.complex().faces()) {
    if (std::popcount(f) != rank) continue;
    Exponent e(m.n(), 0);
    for (int x = 0; x < m.n(); ++x)
      if ((f >> x) & 1u) e[x] = 1;
    terms[e] = 1;
  }
  if (terms.empty()) throw std::invalid_argument("matroid has no basis");
  return HomogeneousPolynomial::from_terms(m.n(), rank, terms);
}

}  // namespace atlas
