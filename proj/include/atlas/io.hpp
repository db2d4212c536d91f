#pragma once

#include "atlas/atlas_graph.hpp"
#include "atlas/brick.hpp"
#include "atlas/geometry.hpp"
#include "atlas/lorentzian.hpp"
#include "atlas/matroid.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace atlas {

// Schema or syntax failure while reading an input file; the message carries
// the JSON pointer or byte position of the offending element.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MatrixFile {
  bool rational = true;
  MatQ q;            // used when rational
  MatX<double> d;    // used otherwise
};

MatrixFile parse_matrix(const std::string& text);
std::string serialize_matrix(const MatrixFile& f);

struct MatroidFile {
  std::string kind;  // as given in the file
  SimplicialComplex complex;
};

MatroidFile parse_matroid(const std::string& text);
// Normal form: explicit independent-set listing, faces in mask order.
std::string serialize_matroid(const MatroidFile& f);

HomogeneousPolynomial parse_polynomial(const std::string& text);
std::string serialize_polynomial(const HomogeneousPolynomial& f);

struct PolytopeFile {
  int dim = 0;
  std::vector<VecD> normals;
  std::vector<std::string> names;
  std::vector<VecD> offsets;  // one per body
};

PolytopeFile parse_polytope(const std::string& text);
std::string serialize_polytope(const PolytopeFile& f);

BrickRegion parse_bricks(const std::string& text);
std::string serialize_bricks(const BrickRegion& r);

AtlasQ parse_atlas(const std::string& text);
std::string serialize_atlas(const AtlasQ& a);

}  // namespace atlas
