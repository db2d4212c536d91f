#pragma once

#include "atlas/atlas_graph.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace atlas {

using FaceMask = std::uint32_t;  // subset of a ground set of size <= 20

// Hereditary set system on [0, n): nonempty, downward closed, contains the
// empty set.
class SimplicialComplex {
 public:
  SimplicialComplex(int n, std::set<FaceMask> faces);
  static SimplicialComplex downward_closure(int n, const std::vector<FaceMask>& generators);

  int n() const { return n_; }
  int rank() const { return rank_; }
  bool is_face(FaceMask f) const { return faces_.count(f) > 0; }
  const std::set<FaceMask>& faces() const { return faces_; }

  // I(k) = number of faces of size k, for k = 0..rank.
  std::vector<long long> independence_profile() const;

 private:
  int n_;
  std::set<FaceMask> faces_;
  int rank_;
};

struct ExchangeWitness {
  FaceMask s = 0, t = 0;
};

class Matroid {
 public:
  explicit Matroid(SimplicialComplex c);  // throws if the exchange property fails

  static std::optional<ExchangeWitness> exchange_violation(const SimplicialComplex& c);
  static Matroid uniform(int n, int k);
  static Matroid graphic(int vertex_count, const std::vector<std::pair<int, int>>& edges);

  const SimplicialComplex& complex() const { return c_; }
  int n() const { return c_.n(); }
  int rank() const { return c_.rank(); }

  // Deletion to the elements of `keep`, re-indexed to [0, popcount(keep)).
  Matroid restriction(FaceMask keep) const;

 private:
  SimplicialComplex c_;
};

// Per-degree weights c_0..c_max; all ones except, in the strong variant,
// c_{k+1} = 1 + 1/(n-k).
struct WeightProfile {
  std::vector<Rat> c;

  static WeightProfile unweighted(int max_index);
  static WeightProfile strong(int max_index, int n, int k);
  const Rat& at(int i) const;
  bool is_unweighted() const;
};

using Word = std::vector<int>;  // sequence of distinct ground-set elements

// Number of length-k words extending the word alpha within the language of
// feasible words; 0 when alpha itself is not simple and feasible.
long long cnt(const SimplicialComplex& c, const Word& alpha, int k);
// Same, keyed by the underlying set of a feasible word.
long long cnt_set(const SimplicialComplex& c, FaceMask alpha_set, int k);

// The order-(n+1) local matrix over X union {*}: entries are weighted
// continuation counts of alpha extended by zero, one, or two letters.
MatQ local_matrix(const SimplicialComplex& c, FaceMask alpha_set, int m,
                  const WeightProfile& w);

std::string matroid_vertex_id(FaceMask alpha_set, int m, const Rat& t);
std::string matroid_bad_id(int m);

struct MatroidAtlasResult {
  AtlasQ atlas;
  std::string root;
  struct Info {
    FaceMask set = 0;
    int m = 0;
    Rat t;
    bool bad = false;
  };
  std::map<std::string, Info> info;
};

// Finite truncation of the matroid atlas for target level k: root
// (empty word, k-1, t=1), out-edges to children at t=1, plus extra vertices
// at each sampled t per non-sink level.
MatroidAtlasResult matroid_atlas(const Matroid& m, int k, const WeightProfile& w,
                                 const std::vector<Rat>& t_samples);

struct SinkReport {
  bool feasible = false;
  bool ope = false;            // direct route: inertia of the local matrix
  bool reduced_ok = false;     // reduced-matrix route conclusion
  bool routes_agree = false;
  bool transitivity_ok = true; // the pairwise equivalence really is transitive
  int classes = 0;
  Rat det;                     // determinant of the reduced matrix (classes > 0)
  bool holds = false;
};

// Hyperbolicity of the sink matrix A(alpha, 1), established two independent
// ways: exact inertia, and the reduction to the small dense pattern matrix
// whose spectrum is known in closed form.
SinkReport sink_hyperbolic(const Matroid& m, const Word& alpha, const WeightProfile& w);

struct MasonReport {
  bool holds = false;
  Rat slack_direct;        // I(k)^2 - factor * I(k-1) I(k+1)
  Rat slack_atlas;         // <v,Mw>^2 - <v,Mv><w,Mw> at the atlas root
  bool routes_agree = false;  // slack_atlas == (k!)^2 * slack_direct
  bool pairing_identities = false;  // the three quadratic forms match the
                                    // factorial formulas
  bool root_ope = false;
  long long i_km1 = 0, i_k = 0, i_kp1 = 0;
};

// Log-concavity (weak) or ultra-log-concavity (strong) of the
// independent-set counts at position k, via the direct inequality and via the
// atlas-root quadratic form.
MasonReport verify_mason(const Matroid& m, int k, bool strong);

struct RecognitionReport {
  bool is_matroid = false;
  bool routes_agree = false;
  std::optional<ExchangeWitness> exchange_witness;
  struct AbsWitness {
    FaceMask u = 0;
    int x = -1, y = -1, z = -1;
    MatQ restricted;  // the 4x4 restriction that violates OPE
  };
  std::optional<AbsWitness> abs_witness;
};

// Matroid recognition: direct exchange enumeration cross-checked against the
// one-positive-eigenvalue test on 4x4 restrictions of the sink matrices.
RecognitionReport recognize_matroid(const SimplicialComplex& c);

long long factorial_ll(int k);

}  // namespace atlas
