// Command-line front end: parses input files, dispatches to the verification
// routines, and prints a deterministic report.  Exit status: 0 when the
// verdict is true, 1 when false, 2 on any input or usage error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "atlas/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace atlas;

namespace {

struct Common {
  std::string format = "text";
  double eps = kDefaultEps;
  std::uint64_t seed = 0;
  std::string t_samples = "0,1/4,1/2,3/4,1";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();
  cmd->add_option("--eps", c.eps, "Numerical tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "Seed for all randomized steps")->capture_default_str();
  cmd->add_option("--t-samples", c.t_samples, "Comma-separated rational t values in [0,1]")
      ->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  return out;
}

std::vector<Rat> parse_t_samples(const std::string& s) {
  std::vector<Rat> out;
  for (const std::string& tok : split_commas(s)) {
    Rat t;
    try {
      t = rat_from_string(tok);
    } catch (const std::invalid_argument& e) {
      throw ParseError("--t-samples: " + std::string(e.what()));
    }
    if (t < Rat(0) || t > Rat(1))
      throw ParseError("--t-samples: value " + tok + " outside [0,1]");
    out.push_back(t);
  }
  if (out.empty()) throw ParseError("--t-samples: empty list");
  return out;
}

std::vector<int> mask_elements(FaceMask m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (m & (FaceMask(1) << i)) out.push_back(i);
  return out;
}

// Report under construction: header, check list, and a running verdict.
struct Report {
  json j;
  bool verdict = true;

  Report(const std::string& command, const Common& c) {
    j["header"]["command"] = command;
    j["header"]["eps"] = c.eps;
    j["header"]["seed"] = c.seed;
    j["header"]["t_samples"] = c.t_samples;
    j["checks"] = json::array();
  }

  json& check(const std::string& name, bool holds) {
    j["checks"].push_back({{"name", name}, {"holds", holds}});
    verdict = verdict && holds;
    return j["checks"].back();
  }
};

void print_text(const std::string& prefix, const json& j) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items())
      print_text(prefix.empty() ? k : prefix + "." + k, v);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      print_text(prefix + "[" + std::to_string(i) + "]", j[i]);
  } else {
    std::cout << prefix << " = " << j.dump() << "\n";
  }
}

int emit(Report& rep, const Common& c) {
  rep.j["verdict"] = rep.verdict;
  if (c.format == "json")
    std::cout << rep.j.dump(2) << "\n";
  else
    print_text("", rep.j);
  return rep.verdict ? 0 : 1;
}

json property_json(const PropertyReport& p) {
  json out;
  out["holds"] = p.holds;
  if (!p.witness.empty()) out["witness"] = p.witness;
  out["checks"] = json::array();
  for (const auto& [name, ok] : p.checks)
    out["checks"].push_back({{"name", name}, {"holds", ok}});
  return out;
}

int run_mason(const std::string& file, int k, bool strong, bool atlas_route,
              const Common& c) {
  const std::vector<Rat> ts = parse_t_samples(c.t_samples);
  const Matroid m{parse_matroid(read_file(file)).complex};
  const MasonReport rep = verify_mason(m, k, strong);
  Report out("mason", c);
  out.j["k"] = k;
  out.j["strong"] = strong;
  out.j["profile"] = {rep.i_km1, rep.i_k, rep.i_kp1};
  out.j["slack_direct"] = rat_to_string(rep.slack_direct);
  out.j["slack_atlas"] = rat_to_string(rep.slack_atlas);
  out.check("direct inequality", rep.slack_direct >= Rat(0));
  out.check("root one positive eigenvalue", rep.root_ope);
  out.check("pairing identities", rep.pairing_identities);
  out.check("routes agree", rep.routes_agree);
  out.check("holds", rep.holds);
  if (atlas_route) {
    const WeightProfile w = strong ? WeightProfile::strong(m.rank() + 1, m.n(), k)
                                   : WeightProfile::unweighted(m.rank() + 1);
    const MatroidAtlasResult res = matroid_atlas(m, k, w, ts);
    out.j["atlas_vertices"] = res.atlas.vertices.size();
    out.check("atlas structure", validate_atlas(res.atlas).holds);
    bool all_ope = true;
    for (const auto& [id, v] : res.atlas.vertices) all_ope = all_ope && check_ope(v.M, c.eps);
    out.check("atlas vertices hyperbolic", all_ope);
    const AtlasVertex<Rat>& root = res.atlas.at(res.root);
    if (root.is_sink())
      out.check("root hyperbolic", check_ope(root.M, c.eps));
    else
      out.check("root local-global", verify_local_global(res.atlas, res.root, c.eps).holds);
  }
  return emit(out, c);
}

int run_recognize(const std::string& file, const Common& c) {
  const MatroidFile f = parse_matroid(read_file(file));
  const RecognitionReport rep = recognize_matroid(f.complex);
  Report out("recognize", c);
  out.check("routes agree", rep.routes_agree);
  out.check("is matroid", rep.is_matroid);
  if (rep.exchange_witness) {
    out.j["exchange_witness"]["s"] = mask_elements(rep.exchange_witness->s);
    out.j["exchange_witness"]["t"] = mask_elements(rep.exchange_witness->t);
  }
  if (rep.abs_witness) {
    json& w = out.j["eigenvalue_witness"];
    w["u"] = mask_elements(rep.abs_witness->u);
    w["x"] = rep.abs_witness->x;
    w["y"] = rep.abs_witness->y;
    w["z"] = rep.abs_witness->z;
    w["restricted"] = json::array();
    for (int i = 0; i < rep.abs_witness->restricted.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < rep.abs_witness->restricted.cols(); ++j)
        row.push_back(rat_to_string(rep.abs_witness->restricted(i, j)));
      w["restricted"].push_back(row);
    }
  }
  return emit(out, c);
}

int run_lorentzian(const std::string& file, bool witness, const Common& c) {
  const HomogeneousPolynomial f = parse_polynomial(read_file(file));
  const LorentzReport rep = is_lorentzian(f);
  Report out("lorentzian", c);
  out.j["n"] = f.n();
  out.j["degree"] = f.degree();
  out.check("lorentzian", rep.lorentzian);
  if (witness && !rep.lorentzian) {
    out.j["witness"] = rep.witness;
    if (rep.support_witness) {
      out.j["support_witness"]["a"] = rep.support_witness->a;
      out.j["support_witness"]["b"] = rep.support_witness->b;
      out.j["support_witness"]["i"] = rep.support_witness->i;
    }
    if (rep.hessian_witness) out.j["hessian_witness"] = *rep.hessian_witness;
  }
  return emit(out, c);
}

int run_hessian(const std::string& file, const std::string& at, const Common& c) {
  const HomogeneousPolynomial f = parse_polynomial(read_file(file));
  const std::vector<std::string> toks = split_commas(at);
  if (static_cast<int>(toks.size()) != f.n())
    throw ParseError("--at: expected " + std::to_string(f.n()) + " coordinates, got " +
                     std::to_string(toks.size()));
  VecQ w(f.n());
  for (int i = 0; i < f.n(); ++i) {
    try {
      w(i) = rat_from_string(toks[i]);
    } catch (const std::invalid_argument& e) {
      throw ParseError("--at[" + std::to_string(i) + "]: " + std::string(e.what()));
    }
  }
  const HessianHypReport rep = verify_hessian_hyp(f, w);
  Report out("hessian", c);
  out.j["at"] = toks;
  out.check("root one positive eigenvalue", rep.root_ope);
  out.check("atlas local-global", rep.atlas_ok);
  out.check("holds", rep.holds);
  return emit(out, c);
}

PolytopeFamily family_from_file(const PolytopeFile& f, double eps) {
  try {
    return family_atype(f.normals, f.offsets, f.names, eps);
  } catch (const std::invalid_argument& e) {
    throw ParseError("polytope family: " + std::string(e.what()));
  }
}

int run_mixvol(const std::string& file, const std::string& select, const Common& c) {
  const PolytopeFile f = parse_polytope(read_file(file));
  const PolytopeFamily fam = family_from_file(f, c.eps);
  std::vector<int> selection;
  for (const std::string& name : split_commas(select)) selection.push_back(fam.body(name));
  if (static_cast<int>(selection.size()) != f.dim)
    throw ParseError("--select: expected " + std::to_string(f.dim) + " bodies, got " +
                     std::to_string(selection.size()));
  Report out("mixvol", c);
  out.j["select"] = split_commas(select);
  out.j["value"] = mixed_volume(fam, selection);
  out.check("computed", true);
  return emit(out, c);
}

int run_af(const std::string& file, const std::string& name_a, const std::string& name_b,
           double perturb, const Common& c) {
  const PolytopeFile f = parse_polytope(read_file(file));
  PolytopeFamily fam;
  int a = -1, b = -1;
  if (perturb > 0) {
    // Bodies that only share the normal list (not a full combinatorial type)
    // are bridged by adding a small common summand to every member.
    std::vector<HalfspaceSystem> systems;
    for (const VecD& off : f.offsets) systems.push_back({f.normals, off});
    fam = perturb_family(systems, perturb, c.seed);
    for (std::size_t i = 0; i < f.names.size(); ++i) {
      if (f.names[i] == name_a) a = static_cast<int>(i);
      if (f.names[i] == name_b) b = static_cast<int>(i);
    }
    if (a < 0) throw ParseError("--A: unknown body " + name_a);
    if (b < 0) throw ParseError("--B: unknown body " + name_b);
  } else {
    fam = family_from_file(f, c.eps);
    a = fam.body(name_a);
    b = fam.body(name_b);
  }
  // The m-2 companion bodies: remaining bodies in file order, padded with A.
  std::vector<int> rest;
  for (int i = 0; i < fam.bodies() && static_cast<int>(rest.size()) < f.dim - 2; ++i)
    if (i != a && i != b) rest.push_back(i);
  while (static_cast<int>(rest.size()) < f.dim - 2) rest.push_back(a);

  const AfReport rep = verify_af(fam, a, b, rest, c.eps);
  Report out("af", c);
  out.j["A"] = name_a;
  out.j["B"] = name_b;
  if (perturb > 0) out.j["perturb"] = perturb;
  out.j["v_ab"] = rep.v_ab;
  out.j["v_aa"] = rep.v_aa;
  out.j["v_bb"] = rep.v_bb;
  out.j["slack"] = rep.slack;
  out.check("direct inequality", rep.direct_ok);
  out.check("matrix route agrees", rep.matrix_ok);
  out.check("one positive eigenvalue", rep.ope);
  out.check("pair inequality", rep.pair_ok);
  out.check("base case", rep.base_ok);
  out.check("atlas local-global", rep.atlas_ok);
  out.check("holds", rep.holds);
  return emit(out, c);
}

int run_bm(const std::string& file_a, const std::string& file_b, bool trace,
           const Common& c) {
  const BrickRegion a = parse_bricks(read_file(file_a));
  const BrickRegion b = parse_bricks(read_file(file_b));
  const BmReport rep = bm_verify(a, b, c.eps);
  Report out("bm", c);
  out.j["area_a"] = rep.area_a;
  out.j["area_b"] = rep.area_b;
  out.j["area_sum"] = rep.area_sum;
  out.j["slack"] = rep.slack;
  out.j["equality"] = rep.equality;
  out.check("inequality", rep.holds);
  if (trace) {
    const BmSplitTrace t = bm_split_trace(a, b, c.eps);
    out.j["trace"]["max_depth"] = t.max_depth;
    out.j["trace"]["nodes"] = json::array();
    for (const BmSplitNode& n : t.nodes) {
      json node;
      node["depth"] = n.depth;
      node["bricks_a"] = n.bricks_a;
      node["bricks_b"] = n.bricks_b;
      node["leaf"] = n.leaf;
      if (!n.leaf) {
        node["axis"] = std::string(1, n.axis);
        node["theta"] = n.theta;
      }
      node["slack"] = n.ineq.slack;
      node["holds"] = n.ineq.holds;
      out.j["trace"]["nodes"].push_back(node);
    }
    out.check("all trace nodes", t.all_hold);
  }
  return emit(out, c);
}

int run_atlas_verify(const std::string& file, const std::string& vertex, bool all,
                     const Common& c) {
  const AtlasQ a = parse_atlas(read_file(file));
  Report out("atlas verify", c);
  const PropertyReport valid = validate_atlas(a);
  out.j["vertices"] = a.vertices.size();
  out.check("structure", valid.holds);
  if (!valid.holds) out.j["structure_witness"] = valid.witness;

  std::vector<std::string> targets;
  if (!vertex.empty()) {
    if (!a.vertices.count(vertex)) throw ParseError("--vertex: unknown vertex " + vertex);
    targets.push_back(vertex);
  } else if (all) {
    for (const auto& [id, v] : a.vertices) targets.push_back(id);
  }
  out.j["vertex_reports"] = json::array();
  for (const std::string& id : targets) {
    const AtlasVertex<Rat>& v = a.at(id);
    json vr;
    vr["id"] = id;
    const bool ope = check_ope(v.M, c.eps);
    vr["ope"] = ope;
    out.verdict = out.verdict && ope;
    std::vector<AtlasProperty> props = {AtlasProperty::Irr, AtlasProperty::hPos};
    if (!v.is_sink())
      for (AtlasProperty p : {AtlasProperty::Inh, AtlasProperty::Pull, AtlasProperty::PullEq,
                              AtlasProperty::Iden, AtlasProperty::TInv, AtlasProperty::DecSupp})
        props.push_back(p);
    for (AtlasProperty p : props) {
      const PropertyReport pr = check_property(a, id, p, c.eps);
      vr["properties"][property_name(p)] = pr.holds;
      out.verdict = out.verdict && pr.holds;
    }
    if (!v.is_sink()) {
      const PropertyReport lg = verify_local_global(a, id, c.eps);
      vr["local_global"] = property_json(lg);
      out.verdict = out.verdict && lg.holds;
    }
    out.j["vertex_reports"].push_back(vr);
  }
  return emit(out, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolicity verification toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string file, file_b, at, select, name_a, name_b, vertex;
  int k = 1;
  bool strong = false, atlas_route = false, witness = false, trace = false, all = false;
  double perturb = 0;

  CLI::App* mason = app.add_subcommand("mason", "Log-concavity of independent-set counts");
  mason->add_option("file", file, "Matroid file")->required();
  mason->add_option("--k", k, "Position in the count sequence")->required();
  mason->add_flag("--strong", strong, "Ultra-log-concave variant");
  mason->add_flag("--atlas-route", atlas_route, "Also verify the full sampled atlas");
  add_common(mason, c);

  CLI::App* recognize = app.add_subcommand("recognize", "Matroid recognition with witness");
  recognize->add_option("file", file, "Set-system file")->required();
  add_common(recognize, c);

  CLI::App* lorentzian = app.add_subcommand("lorentzian", "Lorentzian certification");
  lorentzian->add_option("file", file, "Polynomial file")->required();
  lorentzian->add_flag("--witness", witness, "Include failure witness");
  add_common(lorentzian, c);

  CLI::App* hessian = app.add_subcommand("hessian", "Hessian hyperbolicity at a point");
  hessian->add_option("file", file, "Polynomial file")->required();
  hessian->add_option("--at", at, "Comma-separated rational coordinates")->required();
  add_common(hessian, c);

  CLI::App* mixvol = app.add_subcommand("mixvol", "Mixed volume of selected bodies");
  mixvol->add_option("file", file, "Polytope family file")->required();
  mixvol->add_option("--select", select, "Comma-separated body names, one per dimension")
      ->required();
  add_common(mixvol, c);

  CLI::App* af = app.add_subcommand("af", "Quadratic mixed-volume inequality");
  af->add_option("file", file, "Polytope family file")->required();
  af->add_option("--A", name_a, "First body name")->required();
  af->add_option("--B", name_b, "Second body name")->required();
  af->add_option("--perturb", perturb, "Common-summand scale for mismatched fans")
      ->check(CLI::PositiveNumber);
  add_common(af, c);

  CLI::App* bm = app.add_subcommand("bm", "Brunn-Minkowski inequality for brick regions");
  bm->add_option("fileA", file, "First brick-region file")->required();
  bm->add_option("fileB", file_b, "Second brick-region file")->required();
  bm->add_flag("--trace", trace, "Report the split recursion");
  add_common(bm, c);

  CLI::App* atlas_cmd = app.add_subcommand("atlas", "Atlas file operations");
  CLI::App* verify = atlas_cmd->add_subcommand("verify", "Validate and check properties");
  atlas_cmd->require_subcommand(1);
  verify->add_option("file", file, "Atlas file")->required();
  verify->add_option("--vertex", vertex, "Check one vertex");
  verify->add_flag("--all", all, "Check every vertex");
  add_common(verify, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*mason) return run_mason(file, k, strong, atlas_route, c);
    if (*recognize) return run_recognize(file, c);
    if (*lorentzian) return run_lorentzian(file, witness, c);
    if (*hessian) return run_hessian(file, at, c);
    if (*mixvol) return run_mixvol(file, select, c);
    if (*af) return run_af(file, name_a, name_b, perturb, c);
    if (*bm) return run_bm(file, file_b, trace, c);
    if (*verify) return run_atlas_verify(file, vertex, all, c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
