#include "stochelm/helmsolve.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseLU>

#include "stochelm/bessel.hpp"
#include "stochelm/errors.hpp"

namespace stochelm
{

BoundaryClosure BoundaryClosure::dtn(int fourier_modes)
{
  if (fourier_modes < 8)
  {
    throw InputError("DtN closure needs at least 8 Fourier modes");
  }
  return {Kind::DtN, fourier_modes};
}

BoundaryClosure BoundaryClosure::dtn_default(double k, double R)
{
  return dtn(static_cast<int>(std::ceil(2.0 * k * R)) + 16);
}

SourceField SourceField::zero()
{
  return {[](const Vec2 &) { return Complex(0.0); }, Vec2::Zero(), 0.0};
}

SourceField SourceField::from_primitive(const FieldPrimitive &p)
{
  return {[p](const Vec2 &x) { return Complex(p.value(x)); }, p.center, p.radius};
}

SourceField SourceField::scaled(double factor) const
{
  auto inner = value;
  return {[inner, factor](const Vec2 &x) { return factor * inner(x); }, center, support_radius};
}

Complex dtn_symbol(int m, double k, double R)
{
  if (!(k > 0.0) || !(R > 0.0))
  {
    throw InputError("dtn_symbol: k and R must be positive");
  }
  const int order = std::abs(m);
  const double z = k * R;
  const double J = special::bessel_j(order, z);
  const double Y = special::bessel_y(order, z);
  double dJ = 0.0;
  double dY = 0.0;
  if (order == 0)
  {
    dJ = -special::bessel_j(1, z);
    dY = -special::bessel_y(1, z);
  }
  else
  {
    dJ = special::bessel_j(order - 1, z) - (order / z) * J;
    dY = special::bessel_y(order - 1, z) - (order / z) * Y;
  }
  // Divided through by Y, dominant for order > z.
  const double tau = J / Y;
  const double denom = 1.0 + tau * tau;
  const double re = k * (tau * (dJ / Y) + dY / Y) / denom;
  // Wronskian: J Y' - J' Y = 2 / (pi z).
  const double im = k * (2.0 / (std::numbers::pi * z)) / (Y * Y * denom);
  return {re, im};
}

namespace
{

struct QuadraturePoint
{
  std::array<double, 3> lambda;  // barycentric coordinates
  double weight;                 // fraction of the triangle area
};

// Degree-2 rule, three interior points.
constexpr std::array<QuadraturePoint, 3> kAssemblyRule{{
    {{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, 1.0 / 3.0},
    {{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, 1.0 / 3.0},
    {{1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}, 1.0 / 3.0},
}};

// Degree-5 Dunavant rule, seven points.
const std::array<QuadraturePoint, 7> &error_rule()
{
  static const std::array<QuadraturePoint, 7> rule = []
  {
    const double a1 = 0.059715871789770, b1 = 0.470142064105115;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456;
    const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
    return std::array<QuadraturePoint, 7>{{
        {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w0},
        {{a1, b1, b1}, w1},
        {{b1, a1, b1}, w1},
        {{b1, b1, a1}, w1},
        {{a2, b2, b2}, w2},
        {{b2, a2, b2}, w2},
        {{b2, b2, a2}, w2},
    }};
  }();
  return rule;
}

// 3-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 3> kEdgeNodes{0.1127016653792583, 0.5, 0.8872983346207417};
constexpr std::array<double, 3> kEdgeWeights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct TriangleGeometry
{
  std::array<Vec2, 3> x;
  std::array<Vec2, 3> grad;  // gradients of the barycentric hat functions
  double area;
};

TriangleGeometry triangle_geometry(const Mesh &mesh, std::size_t t)
{
  TriangleGeometry g;
  const auto &tri = mesh.triangles[t];
  for (int i = 0; i < 3; ++i)
  {
    g.x[i] = mesh.vertices[tri[i]];
  }
  g.area = signed_area(g.x[0], g.x[1], g.x[2]);
  for (int i = 0; i < 3; ++i)
  {
    const Vec2 &a = g.x[(i + 1) % 3];
    const Vec2 &b = g.x[(i + 2) % 3];
    // Rotated opposite edge, scaled so that grad . (x_i - a) = 1.
    g.grad[i] = Vec2(a.y() - b.y(), b.x() - a.x()) / (2.0 * g.area);
  }
  return g;
}

Vec2 point_at(const TriangleGeometry &g, const std::array<double, 3> &lambda)
{
  return lambda[0] * g.x[0] + lambda[1] * g.x[1] + lambda[2] * g.x[2];
}

// Fills matrix/rhs/stiffness/mass with the volume terms and, for the impedance closure,
// the Gamma_R boundary mass. `f` and `g` are the volume and Gamma_R data.
HelmholtzSystem assemble_impl(std::shared_ptr<const Mesh> mesh, const Medium &medium, double k,
                              const std::function<Complex(const Vec2 &)> &f,
                              const std::function<Complex(const Vec2 &)> *g,
                              BoundaryClosure closure)
{
  if (!(k > 0.0) || !std::isfinite(k))
  {
    throw InputError("assemble: wavenumber k must be positive");
  }
  HelmholtzSystem sys;
  sys.mesh = mesh;
  sys.k = k;
  sys.closure = closure;

  const std::size_t nv = mesh->num_vertices();
  const auto dirichlet = mesh->dirichlet_mask();
  sys.dof_of_vertex.assign(nv, -1);
  for (std::size_t v = 0; v < nv; ++v)
  {
    if (!dirichlet[v])
    {
      sys.dof_of_vertex[v] = static_cast<int>(sys.vertex_of_dof.size());
      sys.vertex_of_dof.push_back(static_cast<int>(v));
    }
  }
  const auto ndof = static_cast<Eigen::Index>(sys.vertex_of_dof.size());

  std::vector<Eigen::Triplet<Complex>> entries;
  std::vector<Eigen::Triplet<double>> k_entries;
  std::vector<Eigen::Triplet<double>> m_entries;
  entries.reserve(mesh->num_triangles() * 9);
  k_entries.reserve(mesh->num_triangles() * 9);
  m_entries.reserve(mesh->num_triangles() * 9);
  sys.rhs = Eigen::VectorXcd::Zero(ndof);
  const double k2 = k * k;

  for (std::size_t t = 0; t < mesh->num_triangles(); ++t)
  {
    const auto geo = triangle_geometry(*mesh, t);
    const auto &tri = mesh->triangles[t];
    Mat2 A_avg = Mat2::Zero();
    std::array<std::array<double, 3>, 3> mass_n{};
    std::array<Complex, 3> load{};
    for (const auto &q : kAssemblyRule)
    {
      const Vec2 x = point_at(geo, q.lambda);
      const double w = q.weight * geo.area;
      A_avg += w * medium.A(x);
      const double nv_q = medium.n(x);
      const Complex fq = f(x);
      sys.f_norm_sq += w * std::norm(fq);
      for (int i = 0; i < 3; ++i)
      {
        load[i] += w * fq * q.lambda[i];
        for (int j = 0; j < 3; ++j)
        {
          mass_n[i][j] += w * nv_q * q.lambda[i] * q.lambda[j];
        }
      }
    }
    for (int i = 0; i < 3; ++i)
    {
      for (int j = 0; j < 3; ++j)
      {
        const double kij = geo.area * geo.grad[i].dot(geo.grad[j]);
        // Exact P1 mass: area/12 (1 + delta_ij).
        const double mij = geo.area / 12.0 * (i == j ? 2.0 : 1.0);
        k_entries.emplace_back(tri[i], tri[j], kij);
        m_entries.emplace_back(tri[i], tri[j], mij);
        const int di = sys.dof_of_vertex[tri[i]];
        const int dj = sys.dof_of_vertex[tri[j]];
        if (di < 0 || dj < 0)
        {
          continue;
        }
        const double aij = geo.grad[j].dot(A_avg * geo.grad[i]);
        entries.emplace_back(di, dj, Complex(aij - k2 * mass_n[i][j]));
      }
      const int di = sys.dof_of_vertex[tri[i]];
      if (di >= 0)
      {
        sys.rhs[di] += load[i];
      }
    }
  }

  const Complex ik(0.0, k);
  for (const auto &e : mesh->boundary_edges)
  {
    if (e.tag != BoundaryTag::Truncation)
    {
      continue;
    }
    const Vec2 &a = mesh->vertices[e.v[0]];
    const Vec2 &b = mesh->vertices[e.v[1]];
    const double len = (b - a).norm();
    const std::array<int, 2> dofs{sys.dof_of_vertex[e.v[0]], sys.dof_of_vertex[e.v[1]]};
    if (closure.kind == BoundaryClosure::Kind::Impedance)
    {
      const double edge_mass[2][2] = {{len / 3.0, len / 6.0}, {len / 6.0, len / 3.0}};
      for (int i = 0; i < 2; ++i)
      {
        for (int j = 0; j < 2; ++j)
        {
          if (dofs[i] >= 0 && dofs[j] >= 0)
          {
            entries.emplace_back(dofs[i], dofs[j], -ik * edge_mass[i][j]);
          }
        }
      }
    }
    if (g != nullptr)
    {
      for (int q = 0; q < 3; ++q)
      {
        const double s = kEdgeNodes[q];
        const Complex gq = (*g)(a + s * (b - a));
        const double w = kEdgeWeights[q] * len;
        if (dofs[0] >= 0)
        {
          sys.rhs[dofs[0]] += w * gq * (1.0 - s);
        }
        if (dofs[1] >= 0)
        {
          sys.rhs[dofs[1]] += w * gq * s;
        }
      }
    }
  }

  if (closure.kind == BoundaryClosure::Kind::DtN)
  {
    // c[m][b] = (1 / 2 pi) int phi_b e^{-i m theta} dtheta for hats linear in theta; the
    // pairing <T u, v> = 2 pi R sum_m symbol(m) u_m conj(v_m).
    const int modes = closure.fourier_modes;
    std::vector<int> boundary_dofs;
    std::vector<int> slot_of_vertex(nv, -1);
    for (const auto &e : mesh->boundary_edges)
    {
      if (e.tag != BoundaryTag::Truncation)
      {
        continue;
      }
      for (int v : e.v)
      {
        if (slot_of_vertex[v] < 0)
        {
          slot_of_vertex[v] = static_cast<int>(boundary_dofs.size());
          boundary_dofs.push_back(v);
        }
      }
    }
    const auto nb = static_cast<Eigen::Index>(boundary_dofs.size());
    Eigen::MatrixXcd coeff = Eigen::MatrixXcd::Zero(2 * modes + 1, nb);
    for (const auto &e : mesh->boundary_edges)
    {
      if (e.tag != BoundaryTag::Truncation)
      {
        continue;
      }
      const Vec2 &a = mesh->vertices[e.v[0]];
      const Vec2 &b = mesh->vertices[e.v[1]];
      const double theta_a = std::atan2(a.y(), a.x());
      double dtheta = std::atan2(b.y(), b.x()) - theta_a;
      while (dtheta <= -std::numbers::pi)
      {
        dtheta += 2.0 * std::numbers::pi;
      }
      while (dtheta > std::numbers::pi)
      {
        dtheta -= 2.0 * std::numbers::pi;
      }
      for (int m = -modes; m <= modes; ++m)
      {
        // int_0^1 (1 - t) e^{-i alpha t} dt and int_0^1 t e^{-i alpha t} dt.
        const double alpha = m * dtheta;
        Complex i0, i1;
        if (std::abs(alpha) < 1e-3)
        {
          i0 = Complex(1.0 - alpha * alpha / 6.0, -alpha / 2.0);
          i1 = Complex(0.5 - alpha * alpha / 8.0, -alpha / 3.0);
        }
        else
        {
          const Complex ia(0.0, alpha);
          const Complex e_ = std::exp(-ia);
          i0 = (1.0 - e_) / ia;
          i1 = -e_ / ia + i0 / ia;
        }
        const Complex phase = std::exp(Complex(0.0, -m * theta_a)) * dtheta / (2.0 * std::numbers::pi);
        coeff(m + modes, slot_of_vertex[e.v[0]]) += phase * (i0 - i1);
        coeff(m + modes, slot_of_vertex[e.v[1]]) += phase * i1;
      }
    }
    const double R = mesh->R;
    Eigen::VectorXcd symbol(2 * modes + 1);
    for (int m = -modes; m <= modes; ++m)
    {
      symbol[m + modes] = dtn_symbol(m, k, R);
    }
    // block(i, j) = -2 pi R sum_m symbol(m) c[m][j] conj(c[m][i])
    const Eigen::MatrixXcd block =
        -2.0 * std::numbers::pi * R * (coeff.adjoint() * symbol.asDiagonal() * coeff);
    for (Eigen::Index i = 0; i < nb; ++i)
    {
      const int di = sys.dof_of_vertex[boundary_dofs[i]];
      if (di < 0)
      {
        continue;
      }
      for (Eigen::Index j = 0; j < nb; ++j)
      {
        const int dj = sys.dof_of_vertex[boundary_dofs[j]];
        if (dj >= 0)
        {
          entries.emplace_back(di, dj, block(i, j));
        }
      }
    }
  }

  sys.matrix.resize(ndof, ndof);
  sys.matrix.setFromTriplets(entries.begin(), entries.end());
  sys.stiffness.resize(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(nv));
  sys.stiffness.setFromTriplets(k_entries.begin(), k_entries.end());
  sys.mass.resize(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(nv));
  sys.mass.setFromTriplets(m_entries.begin(), m_entries.end());
  return sys;
}

}  // namespace

HelmholtzSystem assemble(std::shared_ptr<const Mesh> mesh, const Medium &medium, double k,
                         const SourceField &f, BoundaryClosure closure)
{
  if (!mesh)
  {
    throw InputError("assemble: null mesh");
  }
  if (f.support_radius > 0.0 && !(f.center.norm() + f.support_radius < mesh->R))
  {
    std::ostringstream msg;
    msg << "assemble: source support (|c| + r = " << f.center.norm() + f.support_radius
        << ") is not compactly contained in B_R, R = " << mesh->R;
    throw InputError(msg.str());
  }
  return assemble_impl(std::move(mesh), medium, k, f.value, nullptr, closure);
}

SolveReport solve(const HelmholtzSystem &system)
{
  SolveReport report;
  report.k = system.k;
  report.f_norm_sq = system.f_norm_sq;
  const auto nv = static_cast<Eigen::Index>(system.mesh->num_vertices());
  report.u = Eigen::VectorXcd::Zero(nv);

  const double bnorm = system.rhs.norm();
  if (bnorm == 0.0)
  {
    return report;  // unique solution is zero
  }

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success)
  {
    report.quasi_resonance = true;
    report.residual = std::numeric_limits<double>::infinity();
    return report;
  }
  Eigen::VectorXcd x = lu.solve(system.rhs);
  Eigen::VectorXcd r = system.rhs - system.matrix * x;
  report.residual = r.norm() / bnorm;
  for (int step = 0; step < 3 && report.residual > 1e-13 && std::isfinite(report.residual);
       ++step)
  {
    x += lu.solve(r);
    r = system.rhs - system.matrix * x;
    report.residual = r.norm() / bnorm;
  }
  if (!std::isfinite(report.residual) || report.residual > 1e-10)
  {
    report.quasi_resonance = true;
  }

  for (std::size_t d = 0; d < system.vertex_of_dof.size(); ++d)
  {
    report.u[system.vertex_of_dof[d]] = x[static_cast<Eigen::Index>(d)];
  }
  const Eigen::VectorXcd Ku = system.stiffness.cast<Complex>() * report.u;
  const Eigen::VectorXcd Mu = system.mass.cast<Complex>() * report.u;
  report.grad_norm_sq = report.u.dot(Ku).real();
  report.l2_norm_sq = report.u.dot(Mu).real();
  report.weighted_norm_sq = report.grad_norm_sq + system.k * system.k * report.l2_norm_sq;
  return report;
}

ManufacturedProblem manufactured_problem(const ManufacturedField &u_exact, const Medium &medium,
                                         double k, std::shared_ptr<const Mesh> mesh)
{
  if (!mesh)
  {
    throw InputError("manufactured_problem: null mesh");
  }
  // div(A grad u) = sum_ij d_i(A_ij d_j u) = sum_ij (d_i A_ij) d_j u + A_ij d_i d_j u
  auto f = [&u_exact, &medium, k](const Vec2 &x) -> Complex
  {
    const Mat2 A = medium.A(x);
    const auto dA = medium.grad_A(x);
    const Eigen::Vector2cd gu = u_exact.gradient(x);
    const Eigen::Matrix2cd H = u_exact.hessian(x);
    Complex div = 0.0;
    for (int i = 0; i < 2; ++i)
    {
      for (int j = 0; j < 2; ++j)
      {
        div += dA[i](i, j) * gu[j] + A(i, j) * H(i, j);
      }
    }
    return -div - k * k * medium.n(x) * u_exact.value(x);
  };
  const Complex ik(0.0, k);
  // conormal derivative; reduces to du/dnu where A = I near Gamma_R
  std::function<Complex(const Vec2 &)> g = [&u_exact, &medium, ik](const Vec2 &x) -> Complex
  {
    const Vec2 nu = x.normalized();
    const Eigen::Vector2cd flux = medium.A(x).cast<Complex>() * u_exact.gradient(x);
    return nu.x() * flux[0] + nu.y() * flux[1] - ik * u_exact.value(x);
  };
  ManufacturedProblem problem{assemble_impl(mesh, medium, k, f, &g, BoundaryClosure::impedance()),
                              Eigen::VectorXcd(static_cast<Eigen::Index>(mesh->num_vertices()))};
  for (std::size_t v = 0; v < mesh->num_vertices(); ++v)
  {
    problem.exact_nodal[static_cast<Eigen::Index>(v)] = u_exact.value(mesh->vertices[v]);
  }
  return problem;
}

DiscretizationError discretization_error(const Mesh &mesh, const Eigen::VectorXcd &u_h,
                                         const ManufacturedField &u_exact)
{
  if (u_h.size() != static_cast<Eigen::Index>(mesh.num_vertices()))
  {
    throw InputError("discretization_error: nodal vector length does not match the mesh");
  }
  double h1 = 0.0;
  double l2 = 0.0;
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t)
  {
    const auto geo = triangle_geometry(mesh, t);
    const auto &tri = mesh.triangles[t];
    Eigen::Vector2cd grad_h = Eigen::Vector2cd::Zero();
    for (int i = 0; i < 3; ++i)
    {
      grad_h += u_h[tri[i]] * geo.grad[i].cast<Complex>();
    }
    for (const auto &q : error_rule())
    {
      const Vec2 x = point_at(geo, q.lambda);
      const double w = q.weight * geo.area;
      Complex uh = 0.0;
      for (int i = 0; i < 3; ++i)
      {
        uh += q.lambda[i] * u_h[tri[i]];
      }
      l2 += w * std::norm(uh - u_exact.value(x));
      h1 += w * (grad_h - u_exact.gradient(x)).squaredNorm();
    }
  }
  return {std::sqrt(h1), std::sqrt(l2)};
}

double MeshPolicy::size_for(double k, double n_max) const
{
  const double k_eff = k * std::sqrt(std::max(n_max, 1.0));
  return std::min({h_max, kh_max / k_eff, pollution_constant * std::pow(k_eff, -1.5)});
}

}  // namespace stochelm
