#pragma once

#include "atlas/atlas_graph.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace atlas {

using VecD = Eigen::VectorXd;

// Convex polytope as {x : <normals[i], x> <= offsets[i]}.
struct HalfspaceSystem {
  std::vector<VecD> normals;
  VecD offsets;
};

// Shared combinatorial structure of a family of simple, strongly isomorphic
// polytopes: unit normals, facet adjacency with angles.
struct AType {
  int m = 0;                               // ambient dimension
  std::vector<VecD> normals;               // r unit vectors
  std::vector<std::pair<int, int>> J;      // adjacent facet pairs, i < j
  bool adjacent(int i, int j) const;
  double theta(int i, int j) const;        // angle between normals, in (0, pi)
};

struct PolytopeFamily {
  AType atype;
  std::vector<std::string> names;
  std::vector<VecD> h;                     // support vector per body

  // Combinatorics of the reference body (shared across the family).
  std::vector<VecD> ref_vertices;
  std::vector<std::vector<int>> ref_incidence;  // facet indices per vertex, sorted

  int r() const { return static_cast<int>(atype.normals.size()); }
  int bodies() const { return static_cast<int>(h.size()); }
  int body(const std::string& name) const;
};

// All vertices of the system by brute-force enumeration of facet m-subsets.
std::vector<VecD> enumerate_vertices(const HalfspaceSystem& sys, double eps = kDefaultEps);

// Builds and validates the family: bounded, full-dimensional, simple, every
// facet a proper (m-1)-face, identical adjacency across members.
PolytopeFamily family_atype(const std::vector<VecD>& normals,
                            const std::vector<VecD>& offsets,
                            std::vector<std::string> names = {},
                            double eps = kDefaultEps);

// Support numbers of the facet in direction i over its neighbor facets:
// h_j csc(theta_ij) - h_i cot(theta_ij).
std::map<int, double> facet_support(const PolytopeFamily& fam, int body, int i);

double volume(const PolytopeFamily& fam, int body);

// (m-1)-volume of the facet in direction i, inside its own subspace.
double facet_volume(const PolytopeFamily& fam, int body, int i);

// V(P_sel[0], ..., P_sel[m-1]) by the facet-decomposition recursion.
double mixed_volume(const PolytopeFamily& fam, const std::vector<int>& selection);

// The r x r mixed-volume matrix for bodies P_sel[0..m-3]: csc-weighted face
// mixed volumes on adjacent pairs, -cot sums on the diagonal.
MatX<double> mv_matrix(const PolytopeFamily& fam, const std::vector<int>& selection);

struct MvIdentityReport {
  bool holds = false;
  double max_rel_dev = 0;
};

// Checks (M h_A)_i = (m-1)! V(facet chain) coordinatewise and
// <h_A, M h_B> = m! V(A, B, P_1, ..., P_{m-2}).
MvIdentityReport mv_identities(const PolytopeFamily& fam, int A, int B,
                               const std::vector<int>& rest, double tol = 1e-6);

// Translates every member so the origin is interior (support vector > 0).
PolytopeFamily translate_origin_interior(const PolytopeFamily& fam);

struct AfAtlasResult {
  AtlasD atlas;
  std::string root;
};

// Two-level atlas: source with the mixed-volume matrix of P_sel[0..m-3] and
// h = h_{P_sel[0]}, one sink per facet with the facet-family matrix, edge
// transforms pushing support vectors to the facet.
AfAtlasResult af_atlas(const PolytopeFamily& fam, const std::vector<int>& selection);

struct AfReport {
  double v_ab = 0, v_aa = 0, v_bb = 0;
  double slack = 0;              // v_ab^2 - v_aa * v_bb
  bool direct_ok = false;        // slack >= -eps
  bool matrix_ok = false;        // quadratic-form route agrees with the volumes
  bool ope = false;              // mixed-volume matrix has at most one positive eigenvalue
  bool pair_ok = false;          // (v, w) = (h_A, h_B) instance of the pair inequality
  bool base_ok = true;           // m = 2: negative semidefinite off the h_P direction
  bool atlas_ok = true;          // m >= 3: local-global at the source
  bool holds = false;
};

// The quadratic mixed-volume inequality V(A,B,..)^2 >= V(A,A,..) V(B,B,..),
// verified directly and through the matrix machinery.
AfReport verify_af(const PolytopeFamily& fam, int A, int B,
                   const std::vector<int>& rest, double eps = kDefaultEps);

// Common family {X + eps_scale * Q} for bodies with different normal fans,
// where Q is the Minkowski sum of all inputs, with a seeded generic zonotope
// retry when the result is not simple.
PolytopeFamily perturb_family(const std::vector<HalfspaceSystem>& bodies,
                              double eps_scale, std::uint64_t seed = 0);

// Mixed area of two convex polygons via the explicit Minkowski-sum polygon.
double polygon_mixed_area(const HalfspaceSystem& A, const HalfspaceSystem& B);

double polygon_area(const HalfspaceSystem& A);

}  // namespace atlas
