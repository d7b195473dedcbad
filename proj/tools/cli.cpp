#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "sfwg/analysis.hpp"
#include "sfwg/error.hpp"
#include "sfwg/weak_gradient.hpp"

namespace sfwg::cli {

namespace {

struct Options {
  std::string field = "sinsin";
  int k = 1;
  std::string j = "auto";
  std::vector<int> levels{2, 4, 8};
  std::string generator = "tri";
  std::string mesh;
  double tol = 1e-10;
  int maxit = 20000;
  double tau = 1e-10;
  int samples = 100;
  std::uint64_t seed = 20240101;
  bool no_exact = false;
  std::string format = "csv";
  std::string out;
};

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ConfigError("invalid " + what + " '" + text + "'");
  return value;
}

Mesh load_mesh(const std::string& spec) {
  if (spec.empty()) throw ConfigError("--mesh is required");
  if (spec.rfind("gen:", 0) == 0) {
    const auto colon = spec.find(':', 4);
    if (colon == std::string::npos) throw ConfigError("mesh generator must be gen:<tri|quad|hex>:<N>");
    const std::string kind = spec.substr(4, colon - 4);
    const int n = parse_int(spec.substr(colon + 1), "mesh size");
    if (n < 1) throw ConfigError("mesh size must be positive");
    if (kind == "tri") return build_uniform_triangle_mesh(n);
    if (kind == "quad") return build_uniform_quad_mesh(n);
    if (kind == "hex") return build_hexagon_mesh(n);
    throw ConfigError("unknown mesh generator '" + kind + "'");
  }
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw ConfigError("cannot open mesh file '" + spec + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return read_mesh(buf.str());
}

std::optional<int> parse_j(const Options& o) {
  if (o.k < 1) throw ConfigError("k must be at least 1");
  if (o.j == "auto") return std::nullopt;
  const int j = parse_int(o.j, "j");
  if (j < o.k) throw ConfigError("j must be at least k");
  return j;
}

int resolve_j(const Mesh& mesh, const Options& o) {
  const auto j = parse_j(o);
  return j ? *j : auto_degree(mesh, o.k);
}

MeshKind parse_generator(const std::string& g) {
  if (g == "tri") return MeshKind::triangles;
  if (g == "quad") return MeshKind::quads;
  if (g == "hex") return MeshKind::hexagons;
  throw ConfigError("unknown generator '" + g + "'");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string converge(const Options& o) {
  ConvergenceConfig cfg;
  cfg.field = o.field;
  cfg.k = o.k;
  cfg.j = parse_j(o);
  cfg.levels = o.levels;
  cfg.mesh = parse_generator(o.generator);
  cfg.tol = o.tol;
  cfg.maxit = o.maxit;
  if (o.format != "csv" && o.format != "md") throw ConfigError("format must be csv or md");
  const ConvergenceReport report = convergence_study(cfg);
  return o.format == "csv" ? to_csv(report) : to_markdown(report);
}

std::string probe(const Options& o) {
  const Mesh mesh = load_mesh(o.mesh);
  const int j = resolve_j(mesh, o);
  const SingularityReport rep = singularity_study(mesh, o.k, j, o.tau);
  std::string s;
  s += "mesh: " + o.mesh + "\n";
  s += "elements: " + std::to_string(mesh.num_elements()) + "\n";
  s += "k: " + std::to_string(o.k) + "\n";
  s += "j: " + std::to_string(j) + (o.j == "auto" ? " (auto)" : "") + "\n";
  s += "unknowns: " + std::to_string(rep.unknowns) + "\n";
  s += "counting_lower_bound: " + std::to_string(rep.counting_bound) + "\n";
  s += "nullity: " + std::to_string(rep.probe.nullity) + "\n";
  s += "smallest_pivot: " + fmt("%.6e", rep.probe.smallest_pivot) + "\n";
  s += "max_diagonal: " + fmt("%.6e", rep.probe.max_diagonal) + "\n";
  s += std::string("verdict: ") + (rep.singular() ? "singular" : "nonsingular") + "\n";
  return s;
}

std::string normequiv(const Options& o) {
  const Mesh mesh = load_mesh(o.mesh);
  const int j = resolve_j(mesh, o);
  const NormEquivalence r = norm_equivalence_study(mesh, o.k, j, o.samples, o.seed, !o.no_exact);
  std::string s;
  s += "mesh: " + o.mesh + "\n";
  s += "k: " + std::to_string(o.k) + "\n";
  s += "j: " + std::to_string(j) + (o.j == "auto" ? " (auto)" : "") + "\n";
  s += "samples: " + std::to_string(r.samples) + "\n";
  s += "seed: " + std::to_string(o.seed) + "\n";
  s += "sampled_min_ratio: " + fmt("%.10e", r.min_ratio) + "\n";
  s += "sampled_max_ratio: " + fmt("%.10e", r.max_ratio) + "\n";
  if (r.exact_min) {
    s += "exact_min_ratio: " + fmt("%.10e", *r.exact_min) + "\n";
    s += "exact_max_ratio: " + fmt("%.10e", *r.exact_max) + "\n";
  }
  return s;
}

std::string solve(const Options& o) {
  const Mesh mesh = load_mesh(o.mesh);
  const int j = resolve_j(mesh, o);
  const NamedField field = make_field(o.field);
  const DofMap dofs(mesh, o.k);
  const SparseSpd a = assemble_stiffness(mesh, dofs, j);
  const SolveResult sol = cg_solve(a, assemble_load(mesh, dofs, field.source), o.tol, o.maxit);
  if (!sol.stats.converged()) {
    throw NumericalError("CG did not converge (relative residual " + fmt("%.3e", sol.stats.residual) +
                         " after " + std::to_string(sol.stats.iterations) + " iterations)");
  }
  std::string s = "dof,kind,entity,slot,value\n";
  const int n0 = dofs.dim_interior();
  for (int t = 0; t < mesh.num_elements(); ++t) {
    for (int i = 0; i < n0; ++i) {
      const int g = dofs.interior_offset(t) + i;
      s += std::to_string(g) + ",interior," + std::to_string(t) + "," + std::to_string(i) + "," +
           fmt("%.17g", sol.x(g)) + "\n";
    }
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (dofs.edge_offset(e) < 0) continue;
    for (int b = 0; b < dofs.dim_edge(); ++b) {
      const int g = dofs.edge_offset(e) + b;
      s += std::to_string(g) + ",edge," + std::to_string(e) + "," + std::to_string(b) + "," +
           fmt("%.17g", sol.x(g)) + "\n";
    }
  }
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stabilizer-free weak Galerkin solver for the Poisson problem on polygonal meshes"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--k", o.k, "polynomial degree of v0 and vb");
    sub->add_option("--j", o.j, "weak-gradient degree, or 'auto'");
    sub->add_option("--out", o.out, "output file (default: stdout)");
  };

  auto* conv = app.add_subcommand("converge", "convergence study on a refinement ladder");
  add_common(conv);
  conv->add_option("--field", o.field, "sinsin | bubble | zero");
  conv->add_option("--levels", o.levels, "comma-separated n values")->delimiter(',');
  conv->add_option("--generator", o.generator, "tri | quad | hex");
  conv->add_option("--tol", o.tol, "CG relative residual tolerance");
  conv->add_option("--maxit", o.maxit, "CG iteration limit");
  conv->add_option("--format", o.format, "csv | md");

  auto* prb = app.add_subcommand("probe", "singularity report of the assembled system");
  add_common(prb);
  prb->add_option("--mesh", o.mesh, "polymesh file or gen:<tri|quad|hex>:<N>")->required();
  prb->add_option("--tau", o.tau, "relative pivot tolerance");

  auto* neq = app.add_subcommand("normequiv", "energy norm vs discrete H1 norm ratios");
  add_common(neq);
  neq->add_option("--mesh", o.mesh, "polymesh file or gen:<tri|quad|hex>:<N>")->required();
  neq->add_option("--samples", o.samples, "random samples");
  neq->add_option("--seed", o.seed, "random seed");
  neq->add_flag("--no-exact", o.no_exact, "skip the generalized eigenvalue extremes");

  auto* slv = app.add_subcommand("solve", "solve once and dump the unknown vector as CSV");
  add_common(slv);
  slv->add_option("--mesh", o.mesh, "polymesh file or gen:<tri|quad|hex>:<N>")->required();
  slv->add_option("--field", o.field, "sinsin | bubble | zero");
  slv->add_option("--tol", o.tol, "CG relative residual tolerance");
  slv->add_option("--maxit", o.maxit, "CG iteration limit");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    std::string result;
    if (conv->parsed()) {
      result = converge(o);
    } else if (prb->parsed()) {
      result = probe(o);
    } else if (neq->parsed()) {
      result = normequiv(o);
    } else {
      result = solve(o);
    }
    if (o.out.empty()) {
      out << result;
    } else {
      std::ofstream file(o.out, std::ios::binary);
      if (!file) throw ConfigError("cannot write '" + o.out + "'");
      file << result;
    }
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "sfwg: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "sfwg: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MeshError& e) {
    err << "sfwg: invalid mesh: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "sfwg: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace sfwg::cli
