#pragma once

#include "atlas/atlas_graph.hpp"
#include "atlas/matroid.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace atlas {

using Exponent = std::vector<int>;  // length n, entries >= 0

// Sparse homogeneous polynomial of fixed total degree with rational
// coefficients; stored coefficients are always nonzero.
class HomogeneousPolynomial {
 public:
  HomogeneousPolynomial(int n, int degree);  // zero polynomial
  static HomogeneousPolynomial from_terms(int n, int degree,
                                          const std::map<Exponent, Rat>& terms);

  int n() const { return n_; }
  int degree() const { return degree_; }
  const std::map<Exponent, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::set<Exponent> support() const;

  Rat evaluate(const VecQ& w) const;
  HomogeneousPolynomial scaled(const Rat& c) const;

 private:
  int n_;
  int degree_;
  std::map<Exponent, Rat> terms_;
};

// Iterated formal partial derivative by the exponent vector m.
HomogeneousPolynomial derivative(const HomogeneousPolynomial& f, const Exponent& m);

// All exponent vectors of length n summing to d, in lexicographic order.
std::vector<Exponent> simplex_points(int n, int d);

struct MConvexWitness {
  Exponent a, b;
  int i = -1;  // a_i > b_i but no j with a_j < b_j and a - e_i + e_j in the set
};

// Exchange axiom for exponent sets.
std::optional<MConvexWitness> m_convex_violation(const std::set<Exponent>& support);

// Symmetric n x n matrix of second partials evaluated at w.
MatQ hessian(const HomogeneousPolynomial& f, const VecQ& w);

struct LorentzReport {
  bool lorentzian = false;
  std::string witness;  // description of the first failure
  std::optional<MConvexWitness> support_witness;
  std::optional<Exponent> hessian_witness;  // derivative order whose Hessian fails
};

// Nonnegative coefficients, M-convex support, and the one-positive-eigenvalue
// condition on every Hessian of a (d-2)-fold derivative.  Degrees below 2 are
// rejected as undefined.
LorentzReport is_lorentzian(const HomogeneousPolynomial& f);

struct LorentzAtlasResult {
  AtlasQ atlas;
  std::string root;
  std::map<std::string, Exponent> orders;  // vertex id -> derivative order
};

// Derivative tower: vertices are derivative orders of size 0..d-2, edges add
// one differentiation, matrices are Hessians at w, h = w / (remaining degree
// minus 2).
LorentzAtlasResult lorentzian_atlas(const HomogeneousPolynomial& f, const VecQ& w);

struct HessianHypReport {
  bool root_ope = false;
  bool atlas_ok = true;  // local-global succeeded at every non-sink (d >= 3)
  bool holds = false;
};

// Hyperbolicity of the Hessian at a positive point, requiring a Lorentzian
// certificate first; errors on non-Lorentzian input.
HessianHypReport verify_hessian_hyp(const HomogeneousPolynomial& f, const VecQ& w);

// Sum over bases of the matroid of the corresponding squarefree monomial.
HomogeneousPolynomial basis_polynomial(const Matroid& m);

}  // namespace atlas
