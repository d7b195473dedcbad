#include "sfwg/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "sfwg/error.hpp"
#include "sfwg/poly_basis.hpp"
#include "sfwg/weak_gradient.hpp"

namespace sfwg {

WgFunction WgFunction::zero(const Mesh& mesh, int k) {
  WgFunction v;
  v.k = k;
  v.interior = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_elements()) * dim_pk(k));
  v.edges = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_edges()) * (k + 1));
  return v;
}

Eigen::VectorXd WgFunction::local(const Mesh& mesh, int element) const {
  const int n0 = dim_pk(k);
  const int nb = k + 1;
  const auto edges_of = mesh.element_edges(element);
  Eigen::VectorXd d(n0 + nb * static_cast<int>(edges_of.size()));
  d.head(n0) = interior.segment(static_cast<Eigen::Index>(element) * n0, n0);
  for (std::size_t l = 0; l < edges_of.size(); ++l) {
    d.segment(n0 + l * nb, nb) = edges.segment(static_cast<Eigen::Index>(edges_of[l]) * nb, nb);
  }
  return d;
}

WgFunction expand(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& unknowns) {
  if (unknowns.size() != dofs.num_unknowns()) {
    throw std::invalid_argument("expand: vector size does not match the DOF map");
  }
  WgFunction v = WgFunction::zero(mesh, dofs.k());
  const int n0 = dofs.dim_interior();
  const int nb = dofs.dim_edge();
  v.interior = unknowns.head(static_cast<Eigen::Index>(mesh.num_elements()) * n0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (dofs.edge_offset(e) >= 0) v.edges.segment(e * nb, nb) = unknowns.segment(dofs.edge_offset(e), nb);
  }
  return v;
}

Eigen::VectorXd project_q0(const Mesh& mesh, int k, const ScalarFunction& u) {
  const int n0 = dim_pk(k);
  Eigen::VectorXd c(static_cast<Eigen::Index>(mesh.num_elements()) * n0);
  kernels::omp::for_each_element(mesh.num_elements(), [&](int t) {
    const ElementBasis basis(mesh.geometry(t), k);
    const QuadRule rule = polygon_quadrature(mesh, t, 2 * k + 4);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n0, n0);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n0);
    Eigen::VectorXd phi(n0);
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      basis.eval(rule.points[p], as_span(phi));
      gram.noalias() += rule.weights[p] * phi * phi.transpose();
      rhs += (rule.weights[p] * u(rule.points[p])) * phi;
    }
    c.segment(static_cast<Eigen::Index>(t) * n0, n0) = gram.llt().solve(rhs);
  });
  return c;
}

Eigen::VectorXd project_qb(const Mesh& mesh, int k, const ScalarFunction& u) {
  const int nb = k + 1;
  Eigen::VectorXd c(static_cast<Eigen::Index>(mesh.num_edges()) * nb);
  const QuadRule1D rule = edge_quadrature(2 * k + 4);
  kernels::omp::for_each_element(mesh.num_edges(), [&](int e) {
    const Point2 a = mesh.vertex(mesh.edge(e).vertices[0]);
    const Point2 b = mesh.vertex(mesh.edge(e).vertices[1]);
    const EdgeBasis basis(a, b, k);
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(nb, nb);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nb);
    Eigen::VectorXd psi(nb);
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      const double s = rule.points[p];
      basis.eval_parameter(s - 0.5, as_span(psi));
      gram.noalias() += rule.weights[p] * psi * psi.transpose();
      rhs += (rule.weights[p] * u(a + s * (b - a))) * psi;
    }
    // The edge length cancels between the Gram matrix and the moments.
    c.segment(static_cast<Eigen::Index>(e) * nb, nb) = gram.llt().solve(rhs);
  });
  return c;
}

WgFunction project_qh(const Mesh& mesh, int k, const ScalarFunction& u) {
  WgFunction v;
  v.k = k;
  v.interior = project_q0(mesh, k, u);
  v.edges = project_qb(mesh, k, u);
  return v;
}

Eigen::MatrixXd local_h1_matrix(const Mesh& mesh, int element, int k) {
  const ElementGeom& geom = mesh.geometry(element);
  const LocalDofLayout layout{k, mesh.num_element_edges(element)};
  const int n0 = layout.interior_size();
  const ElementBasis basis(geom, k);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(layout.total(), layout.total());

  Eigen::VectorXd phi(n0), dx(n0), dy(n0);
  const QuadRule rule = polygon_quadrature(mesh, element, std::max(2 * k, 1));
  for (std::size_t p = 0; p < rule.points.size(); ++p) {
    basis.eval(rule.points[p], as_span(phi), as_span(dx), as_span(dy));
    h.topLeftCorner(n0, n0).noalias() += rule.weights[p] * (dx * dx.transpose() + dy * dy.transpose());
  }

  const QuadRule1D erule = edge_quadrature(2 * k);
  Eigen::VectorXd psi(k + 1);
  Eigen::VectorXd jump(layout.total());
  for (int l = 0; l < layout.num_edges; ++l) {
    const Edge& e = mesh.edge(mesh.element_edges(element)[l]);
    const Point2 a = mesh.vertex(e.vertices[0]);
    const Point2 b = mesh.vertex(e.vertices[1]);
    const EdgeBasis ebasis(a, b, k);
    const int off = layout.edge_offset(l);
    for (std::size_t p = 0; p < erule.points.size(); ++p) {
      const double s = erule.points[p];
      basis.eval(a + s * (b - a), as_span(phi));
      ebasis.eval_parameter(s - 0.5, as_span(psi));
      jump.setZero();
      jump.head(n0) = phi;
      jump.segment(off, k + 1) = -psi;
      h.noalias() += (erule.weights[p] * ebasis.length() / geom.diameter) * jump * jump.transpose();
    }
  }
  return h;
}

double energy_norm(const Mesh& mesh, std::span<const Eigen::MatrixXd> local_stiffness,
                   const WgFunction& v, Execution exec) {
  std::vector<double> contrib(mesh.num_elements());
  kernels::for_each_element(mesh.num_elements(), exec, [&](int t) {
    const Eigen::VectorXd d = v.local(mesh, t);
    contrib[t] = d.dot(local_stiffness[t] * d);
  });
  double s = 0.0;
  for (double c : contrib) s += c;
  return std::sqrt(std::max(s, 0.0));
}

double energy_norm(const Mesh& mesh, int j, const WgFunction& v, Execution exec) {
  const auto ks = kernels::local_stiffness_matrices(mesh, v.k, j, exec);
  return energy_norm(mesh, ks, v, exec);
}

double energy_norm(const Mesh& mesh, int k, int j, const Eigen::VectorXd& unknowns) {
  return energy_norm(mesh, j, expand(mesh, DofMap(mesh, k), unknowns));
}

double h1_norm(const Mesh& mesh, const WgFunction& v) {
  std::vector<double> contrib(mesh.num_elements());
  kernels::omp::for_each_element(mesh.num_elements(), [&](int t) {
    const Eigen::VectorXd d = v.local(mesh, t);
    contrib[t] = d.dot(local_h1_matrix(mesh, t, v.k) * d);
  });
  double s = 0.0;
  for (double c : contrib) s += c;
  return std::sqrt(std::max(s, 0.0));
}

double h1_norm(const Mesh& mesh, int k, const Eigen::VectorXd& unknowns) {
  return h1_norm(mesh, expand(mesh, DofMap(mesh, k), unknowns));
}

double interior_l2_distance(const Mesh& mesh, int k, const Eigen::VectorXd& v0,
                            const Eigen::VectorXd& c0) {
  const int n0 = dim_pk(k);
  std::vector<double> contrib(mesh.num_elements());
  kernels::omp::for_each_element(mesh.num_elements(), [&](int t) {
    const ElementBasis basis(mesh.geometry(t), k);
    const QuadRule rule = polygon_quadrature(mesh, t, 2 * k + 4);
    const Eigen::VectorXd d = v0.segment(static_cast<Eigen::Index>(t) * n0, n0) -
                              c0.segment(static_cast<Eigen::Index>(t) * n0, n0);
    Eigen::VectorXd phi(n0);
    double s = 0.0;
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      basis.eval(rule.points[p], as_span(phi));
      const double diff = phi.dot(d);
      s += rule.weights[p] * diff * diff;
    }
    contrib[t] = s;
  });
  double s = 0.0;
  for (double c : contrib) s += c;
  return std::sqrt(s);
}

double l2_error(const Mesh& mesh, int k, const Eigen::VectorXd& c0, const ScalarFunction& u) {
  const int n0 = dim_pk(k);
  std::vector<double> contrib(mesh.num_elements());
  kernels::omp::for_each_element(mesh.num_elements(), [&](int t) {
    const ElementBasis basis(mesh.geometry(t), k);
    const QuadRule rule = polygon_quadrature(mesh, t, 2 * k + 4);
    const Eigen::VectorXd c = c0.segment(static_cast<Eigen::Index>(t) * n0, n0);
    Eigen::VectorXd phi(n0);
    double s = 0.0;
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      basis.eval(rule.points[p], as_span(phi));
      const double diff = u(rule.points[p]) - phi.dot(c);
      s += rule.weights[p] * diff * diff;
    }
    contrib[t] = s;
  });
  double s = 0.0;
  for (double c : contrib) s += c;
  return std::sqrt(s);
}

Mesh build_mesh(MeshKind kind, int n) {
  switch (kind) {
    case MeshKind::quads:
      return build_uniform_quad_mesh(n);
    case MeshKind::hexagons:
      return build_hexagon_mesh(n);
    case MeshKind::triangles:
      break;
  }
  return build_uniform_triangle_mesh(n);
}

ConvergenceReport convergence_study(const ConvergenceConfig& config) {
  if (config.k < 1) throw ConfigError("k must be at least 1");
  if (config.j && *config.j < config.k) throw ConfigError("j must be at least k");
  if (config.levels.empty()) throw ConfigError("at least one level is required");
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    if (config.levels[i] < 1) throw ConfigError("levels must be positive");
    if (i > 0 && config.levels[i] <= config.levels[i - 1]) {
      throw ConfigError("levels must be strictly increasing");
    }
  }
  if (!(config.tol > 0.0)) throw ConfigError("tol must be positive");
  const NamedField field = make_field(config.field);

  ConvergenceReport report;
  report.field = field.name;
  report.k = config.k;
  report.j_auto = !config.j.has_value();
  report.j = config.j.value_or(0);

  for (const int n : config.levels) {
    const Mesh mesh = build_mesh(config.mesh, n);
    const int j = config.j ? *config.j : auto_degree(mesh, config.k);
    report.j = std::max(report.j, j);

    const DofMap dofs(mesh, config.k);
    const auto ks = kernels::omp::local_stiffness_matrices(mesh, config.k, j);
    const SparseSpd a = assemble_matrix(dofs, ks);
    const Eigen::VectorXd b = assemble_load(mesh, dofs, field.source);
    const SolveResult sol = cg_solve(a, b, config.tol, config.maxit);
    if (!sol.stats.converged()) {
      throw NumericalError("CG did not converge at n=" + std::to_string(n) + " (relative residual " +
                           std::to_string(sol.stats.residual) + " after " +
                           std::to_string(sol.stats.iterations) + " iterations)");
    }

    const WgFunction uh = expand(mesh, dofs, sol.x);
    WgFunction diff = project_qh(mesh, config.k, field.value);
    diff.interior = uh.interior - diff.interior;
    diff.edges = uh.edges - diff.edges;

    ConvergenceRow row;
    row.n = n;
    row.h = 1.0 / n;
    row.dofs = dofs.num_unknowns();
    row.energy_error = energy_norm(mesh, ks, diff);
    row.l2_error = interior_l2_distance(mesh, config.k, diff.interior,
                                        Eigen::VectorXd::Zero(diff.interior.size()));
    row.solve = sol.stats;
    if (!report.rows.empty()) {
      const ConvergenceRow& prev = report.rows.back();
      const double ratio = std::log(prev.h / row.h);
      row.energy_rate = std::log(prev.energy_error / row.energy_error) / ratio;
      row.l2_rate = std::log(prev.l2_error / row.l2_error) / ratio;
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string rate_text(const std::optional<double>& r) {
  return r && std::isfinite(*r) ? format("%.2f", *r) : std::string();
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "# field=" + report.field + " k=" + std::to_string(report.k) +
                    " j=" + std::to_string(report.j) + (report.j_auto ? " (auto)" : "") + "\n";
  out += "level,h,dofs,energy_err,energy_rate,l2_err,l2_rate,cg_iters,residual\n";
  for (const ConvergenceRow& r : report.rows) {
    out += std::to_string(r.n) + "," + format("%.10g", r.h) + "," + std::to_string(r.dofs) + "," +
           format("%.6e", r.energy_error) + "," + rate_text(r.energy_rate) + "," +
           format("%.6e", r.l2_error) + "," + rate_text(r.l2_rate) + "," +
           std::to_string(r.solve.iterations) + "," + format("%.3e", r.solve.residual) + "\n";
  }
  return out;
}

std::string to_markdown(const ConvergenceReport& report) {
  std::string out = "field: " + report.field + ", k = " + std::to_string(report.k) +
                    ", j = " + std::to_string(report.j) + (report.j_auto ? " (auto)" : "") + "\n\n";
  char line[256];
  std::snprintf(line, sizeof(line), "| %-3s | %-7s | %-16s | %-5s | %-16s | %-5s |\n", "k", "h",
                "|||u_h - Q_h u|||", "rate", "||u_0 - Q_0 u||", "rate");
  out += line;
  out += "|-----|---------|------------------|-------|------------------|-------|\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ConvergenceRow& r = report.rows[i];
    const std::string k = i == 0 ? std::to_string(report.k) : "";
    const std::string h = "1/" + std::to_string(r.n);
    const std::string er = r.energy_rate ? rate_text(r.energy_rate) : "-";
    const std::string lr = r.l2_rate ? rate_text(r.l2_rate) : "-";
    std::snprintf(line, sizeof(line), "| %-3s | %-7s | %-16s | %-5s | %-16s | %-5s |\n", k.c_str(),
                  h.c_str(), format("%.4E", r.energy_error).c_str(), er.c_str(),
                  format("%.4E", r.l2_error).c_str(), lr.c_str());
    out += line;
  }
  return out;
}

SparseSpd assemble_h1_gram(const Mesh& mesh, const DofMap& dofs) {
  std::vector<Eigen::MatrixXd> local(mesh.num_elements());
  kernels::omp::for_each_element(mesh.num_elements(),
                                 [&](int t) { local[t] = local_h1_matrix(mesh, t, dofs.k()); });
  return assemble_matrix(dofs, local);
}

double norm_ratio(const Mesh& mesh, int k, int j, const Eigen::VectorXd& unknowns) {
  const double h1 = h1_norm(mesh, k, unknowns);
  if (h1 == 0.0) throw NumericalError("norm_ratio: ||v||_{1,h} vanishes");
  return energy_norm(mesh, k, j, unknowns) / h1;
}

NormEquivalence norm_equivalence_study(const Mesh& mesh, int k, int j, int samples,
                                       std::uint64_t seed, bool exact) {
  if (samples < 1) throw ConfigError("samples must be at least 1");
  const DofMap dofs(mesh, k);
  const SparseSpd a = assemble_stiffness(mesh, dofs, j);
  const SparseSpd b = assemble_h1_gram(mesh, dofs);

  NormEquivalence out;
  out.samples = samples;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd v(dofs.num_unknowns());
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = dist(rng);
    const double vb = v.dot(b.multiply(v));
    if (!(vb > 0.0)) throw NumericalError("norm_equivalence_study: ||v||_{1,h} vanishes for a sample");
    const double ratio = std::sqrt(std::max(v.dot(a.multiply(v)), 0.0) / vb);
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
  }

  if (exact && dofs.num_unknowns() <= kExactNormStudyLimit) {
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        a.to_dense(), b.to_dense(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (eig.info() != Eigen::Success) throw NumericalError("norm_equivalence_study: eigensolver failed");
    out.exact_min = std::sqrt(std::max(eig.eigenvalues().minCoeff(), 0.0));
    out.exact_max = std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
  }
  return out;
}

SingularityReport singularity_study(const Mesh& mesh, int k, int j, double tau_rel) {
  const DofMap dofs(mesh, k);
  if (dofs.num_unknowns() > kProbeLimit) {
    throw NumericalError("singularity_study: " + std::to_string(dofs.num_unknowns()) +
                         " unknowns exceed the probe limit " + std::to_string(kProbeLimit));
  }
  SingularityReport rep;
  rep.unknowns = dofs.num_unknowns();
  rep.counting_bound = counting_lower_bound(mesh, k, j);
  rep.probe = nullity_probe(assemble_stiffness(mesh, dofs, j), tau_rel);
  return rep;
}

}  // namespace sfwg
