#include "atlas/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

namespace atlas {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Rat as_rat(const json& j, const std::string& where) {
  if (j.is_number_integer()) return rat(j.get<long>());
  if (!j.is_string()) fail(where, "expected a rational string \"p/q\" or an integer");
  try {
    return rat_from_string(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

std::string where_at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

}  // namespace

MatrixFile parse_matrix(const std::string& text) {
  const json j = parse_text(text);
  const std::string backend = field(j, "backend", "matrix").get<std::string>();
  if (backend != "rational" && backend != "float")
    fail("matrix.backend", "must be \"rational\" or \"float\"");
  const int order = as_int(field(j, "order", "matrix"), "matrix.order");
  if (order < 1) fail("matrix.order", "must be >= 1");
  const json& rows = field(j, "rows", "matrix");
  if (!rows.is_array() || static_cast<int>(rows.size()) != order)
    fail("matrix.rows", "expected " + std::to_string(order) + " rows");
  MatrixFile f;
  f.rational = backend == "rational";
  if (f.rational)
    f.q.resize(order, order);
  else
    f.d.resize(order, order);
  for (int i = 0; i < order; ++i) {
    const json& row = rows[i];
    const std::string w = where_at("matrix.rows", i);
    if (!row.is_array() || static_cast<int>(row.size()) != order)
      fail(w, "expected " + std::to_string(order) + " entries");
    for (int k = 0; k < order; ++k) {
      if (f.rational)
        f.q(i, k) = as_rat(row[k], where_at(w, k));
      else
        f.d(i, k) = as_double(row[k], where_at(w, k));
    }
  }
  return f;
}

std::string serialize_matrix(const MatrixFile& f) {
  json j;
  j["backend"] = f.rational ? "rational" : "float";
  const int order = static_cast<int>(f.rational ? f.q.rows() : f.d.rows());
  j["order"] = order;
  json rows = json::array();
  for (int i = 0; i < order; ++i) {
    json row = json::array();
    for (int k = 0; k < order; ++k) {
      if (f.rational)
        row.push_back(rat_to_string(f.q(i, k)));
      else
        row.push_back(f.d(i, k));
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

MatroidFile parse_matroid(const std::string& text) {
  const json j = parse_text(text);
  const int n = as_int(field(j, "n", "matroid"), "matroid.n");
  const std::string kind = field(j, "kind", "matroid").get<std::string>();
  const json& sets = field(j, "sets", "matroid");
  if (!sets.is_array()) fail("matroid.sets", "expected an array");

  if (kind == "graph") {
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const std::string w = where_at("matroid.sets", i);
      const json& e = sets[i];
      if (!e.is_array() || e.size() != 2) fail(w, "graph edges are pairs");
      const int a = as_int(e[0], w), b = as_int(e[1], w);
      if (a < 0 || b < 0 || a >= n || b >= n) fail(w, "vertex out of range");
      edges.emplace_back(a, b);
    }
    try {
      return MatroidFile{kind, Matroid::graphic(n, edges).complex()};
    } catch (const std::invalid_argument& e) {
      fail("matroid", e.what());
    }
  }
  if (kind != "independent" && kind != "bases")
    fail("matroid.kind", "must be \"independent\", \"bases\" or \"graph\"");
  if (n < 1 || n > 20) fail("matroid.n", "ground set size must be in [1, 20]");
  std::vector<FaceMask> masks;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string w = where_at("matroid.sets", i);
    const json& s = sets[i];
    if (!s.is_array()) fail(w, "expected a list of elements");
    FaceMask mask = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const int x = as_int(s[k], where_at(w, k));
      if (x < 0 || x >= n) fail(where_at(w, k), "element out of range");
      const FaceMask bit = FaceMask(1) << x;
      if (mask & bit) fail(w, "repeated element");
      mask |= bit;
    }
    masks.push_back(mask);
  }
  try {
    if (kind == "bases")
      return MatroidFile{kind, SimplicialComplex::downward_closure(n, masks)};
    std::set<FaceMask> faces(masks.begin(), masks.end());
    faces.insert(0);  // the empty set is always a face
    return MatroidFile{kind, SimplicialComplex(n, std::move(faces))};
  } catch (const std::invalid_argument& e) {
    fail("matroid.sets", e.what());
  }
}

std::string serialize_matroid(const MatroidFile& f) {
  json j;
  j["kind"] = "independent";
  j["n"] = f.complex.n();
  json sets = json::array();
  for (FaceMask mask : f.complex.faces()) {
    json s = json::array();
    for (int x = 0; x < f.complex.n(); ++x)
      if ((mask >> x) & 1u) s.push_back(x);
    sets.push_back(std::move(s));
  }
  j["sets"] = std::move(sets);
  return j.dump();
}

HomogeneousPolynomial parse_polynomial(const std::string& text) {
  const json j = parse_text(text);
  const int n = as_int(field(j, "n", "polynomial"), "polynomial.n");
  const int degree = as_int(field(j, "degree", "polynomial"), "polynomial.degree");
  const json& terms = field(j, "terms", "polynomial");
  if (!terms.is_array()) fail("polynomial.terms", "expected an array");
  std::map<Exponent, Rat> parsed;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string w = where_at("polynomial.terms", i);
    const json& t = terms[i];
    const Rat coeff = as_rat(field(t, "coeff", w), w + ".coeff");
    const json& exp = field(t, "exp", w);
    if (!exp.is_array() || static_cast<int>(exp.size()) != n)
      fail(w + ".exp", "expected " + std::to_string(n) + " exponents");
    Exponent e;
    for (std::size_t k = 0; k < exp.size(); ++k)
      e.push_back(as_int(exp[k], where_at(w + ".exp", k)));
    parsed[e] += coeff;
  }
  try {
    return HomogeneousPolynomial::from_terms(n, degree, parsed);
  } catch (const std::invalid_argument& e) {
    fail("polynomial", e.what());
  }
}

std::string serialize_polynomial(const HomogeneousPolynomial& f) {
  json j;
  j["n"] = f.n();
  j["degree"] = f.degree();
  json terms = json::array();
  for (const auto& [e, c] : f.terms()) {
    json t;
    t["coeff"] = rat_to_string(c);
    t["exp"] = e;
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j.dump();
}

PolytopeFile parse_polytope(const std::string& text) {
  const json j = parse_text(text);
  PolytopeFile f;
  f.dim = as_int(field(j, "dim", "polytope"), "polytope.dim");
  if (f.dim < 1) fail("polytope.dim", "must be >= 1");
  const json& normals = field(j, "normals", "polytope");
  if (!normals.is_array() || normals.empty()) fail("polytope.normals", "expected a nonempty array");
  for (std::size_t i = 0; i < normals.size(); ++i) {
    const std::string w = where_at("polytope.normals", i);
    const json& u = normals[i];
    if (!u.is_array() || static_cast<int>(u.size()) != f.dim)
      fail(w, "expected " + std::to_string(f.dim) + " coordinates");
    VecD v(f.dim);
    for (int k = 0; k < f.dim; ++k) v(k) = as_double(u[k], where_at(w, k));
    f.normals.push_back(std::move(v));
  }
  const json& bodies = field(j, "bodies", "polytope");
  if (!bodies.is_array() || bodies.empty()) fail("polytope.bodies", "expected a nonempty array");
  std::set<std::string> seen;
  for (std::size_t b = 0; b < bodies.size(); ++b) {
    const std::string w = where_at("polytope.bodies", b);
    const std::string name = field(bodies[b], "name", w).get<std::string>();
    if (!seen.insert(name).second) fail(w + ".name", "duplicate body name '" + name + "'");
    const json& off = field(bodies[b], "offsets", w);
    if (!off.is_array() || off.size() != f.normals.size())
      fail(w + ".offsets", "expected " + std::to_string(f.normals.size()) + " offsets");
    VecD o(static_cast<int>(off.size()));
    for (std::size_t k = 0; k < off.size(); ++k)
      o(static_cast<int>(k)) = as_double(off[k], where_at(w + ".offsets", k));
    f.names.push_back(name);
    f.offsets.push_back(std::move(o));
  }
  return f;
}

std::string serialize_polytope(const PolytopeFile& f) {
  json j;
  j["dim"] = f.dim;
  json normals = json::array();
  for (const VecD& u : f.normals) {
    json row = json::array();
    for (int k = 0; k < u.size(); ++k) row.push_back(u(k));
    normals.push_back(std::move(row));
  }
  j["normals"] = std::move(normals);
  json bodies = json::array();
  for (std::size_t b = 0; b < f.names.size(); ++b) {
    json body;
    body["name"] = f.names[b];
    json off = json::array();
    for (int k = 0; k < f.offsets[b].size(); ++k) off.push_back(f.offsets[b](k));
    body["offsets"] = std::move(off);
    bodies.push_back(std::move(body));
  }
  j["bodies"] = std::move(bodies);
  return j.dump();
}

BrickRegion parse_bricks(const std::string& text) {
  const json j = parse_text(text);
  const json& bricks = field(j, "bricks", "bricks");
  if (!bricks.is_array()) fail("bricks.bricks", "expected an array");
  std::vector<Brick> out;
  for (std::size_t i = 0; i < bricks.size(); ++i) {
    const std::string w = where_at("bricks.bricks", i);
    const json& b = bricks[i];
    if (!b.is_array() || b.size() != 4) fail(w, "a brick is [x1, x2, y1, y2]");
    out.push_back({as_double(b[0], w), as_double(b[1], w), as_double(b[2], w),
                   as_double(b[3], w)});
  }
  try {
    return make_brick_region(std::move(out));
  } catch (const std::invalid_argument& e) {
    fail("bricks", e.what());
  }
}

std::string serialize_bricks(const BrickRegion& r) {
  json j;
  json bricks = json::array();
  for (const Brick& b : r.bricks)
    bricks.push_back(json::array({b.x1, b.x2, b.y1, b.y2}));
  j["bricks"] = std::move(bricks);
  return j.dump();
}

AtlasQ parse_atlas(const std::string& text) {
  const json j = parse_text(text);
  AtlasQ a;
  a.dimension = as_int(field(j, "dimension", "atlas"), "atlas.dimension");
  if (a.dimension < 1) fail("atlas.dimension", "must be >= 1");
  const int r = a.dimension;
  const json& vertices = field(j, "vertices", "atlas");
  if (!vertices.is_array()) fail("atlas.vertices", "expected an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string w = where_at("atlas.vertices", i);
    const json& v = vertices[i];
    AtlasVertex<Rat> out;
    out.id = field(v, "id", w).get<std::string>();
    const json& mat = field(v, "matrix", w);
    if (!mat.is_array() || static_cast<int>(mat.size()) != r)
      fail(w + ".matrix", "expected " + std::to_string(r) + " rows");
    MatQ m(r, r);
    for (int p = 0; p < r; ++p) {
      const json& row = mat[p];
      const std::string rw = where_at(w + ".matrix", p);
      if (!row.is_array() || static_cast<int>(row.size()) != r)
        fail(rw, "expected " + std::to_string(r) + " entries");
      for (int q = 0; q < r; ++q) m(p, q) = as_rat(row[q], where_at(rw, q));
    }
    try {
      out.M = SymmetricMatrixQ(m);
    } catch (const std::invalid_argument& e) {
      fail(w + ".matrix", e.what());
    }
    const json& h = field(v, "h", w);
    if (!h.is_array() || static_cast<int>(h.size()) != r)
      fail(w + ".h", "expected " + std::to_string(r) + " entries");
    out.h.resize(r);
    for (int p = 0; p < r; ++p) out.h(p) = as_rat(h[p], where_at(w + ".h", p));
    const json& edges = field(v, "edges", w);
    if (!edges.is_array()) fail(w + ".edges", "expected an array");
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const std::string ew = where_at(w + ".edges", k);
      const json& e = edges[k];
      const int label = as_int(field(e, "label", ew), ew + ".label");
      if (out.out_edges.count(label)) fail(ew, "duplicate edge label");
      AtlasVertex<Rat>::Edge edge;
      edge.target = field(e, "target", ew).get<std::string>();
      const json& t = field(e, "transform", ew);
      if (t.is_string()) {
        if (t.get<std::string>() != "identity")
          fail(ew + ".transform", "expected \"identity\" or a matrix");
        edge.transform = EdgeTransform<Rat>::identity();
      } else {
        if (!t.is_array() || static_cast<int>(t.size()) != r)
          fail(ew + ".transform", "expected " + std::to_string(r) + " rows");
        MatQ tm(r, r);
        for (int p = 0; p < r; ++p) {
          const json& row = t[p];
          const std::string rw = where_at(ew + ".transform", p);
          if (!row.is_array() || static_cast<int>(row.size()) != r)
            fail(rw, "expected " + std::to_string(r) + " entries");
          for (int q = 0; q < r; ++q) tm(p, q) = as_rat(row[q], where_at(rw, q));
        }
        edge.transform = EdgeTransform<Rat>::matrix(std::move(tm));
      }
      out.out_edges[label] = std::move(edge);
    }
    if (a.vertices.count(out.id)) fail(w, "duplicate vertex id '" + out.id + "'");
    a.add(std::move(out));
  }
  return a;
}

std::string serialize_atlas(const AtlasQ& a) {
  json j;
  j["dimension"] = a.dimension;
  json vertices = json::array();
  for (const auto& [id, v] : a.vertices) {
    json out;
    out["id"] = id;
    json mat = json::array();
    for (int p = 0; p < a.dimension; ++p) {
      json row = json::array();
      for (int q = 0; q < a.dimension; ++q) row.push_back(rat_to_string(v.M(p, q)));
      mat.push_back(std::move(row));
    }
    out["matrix"] = std::move(mat);
    json h = json::array();
    for (int p = 0; p < a.dimension; ++p) h.push_back(rat_to_string(v.h(p)));
    out["h"] = std::move(h);
    json edges = json::array();
    for (const auto& [label, e] : v.out_edges) {
      json edge;
      edge["label"] = label;
      edge["target"] = e.target;
      if (e.transform.is_identity) {
        edge["transform"] = "identity";
      } else {
        json t = json::array();
        for (int p = 0; p < a.dimension; ++p) {
          json row = json::array();
          for (int q = 0; q < a.dimension; ++q)
            row.push_back(rat_to_string(e.transform.dense(p, q)));
          t.push_back(std::move(row));
        }
        edge["transform"] = std::move(t);
      }
      edges.push_back(std::move(edge));
    }
    out["edges"] = std::move(edges);
    vertices.push_back(std::move(out));
  }
  j["vertices"] = std::move(vertices);
  return j.dump();
}

}  // namespace atlas
