#ifndef STOCHELM_HELMSOLVE_HPP
#define STOCHELM_HELMSOLVE_HPP

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "stochelm/fields.hpp"
#include "stochelm/mesh.hpp"

namespace stochelm
{

using Complex = std::complex<double>;

// Closure of the truncated problem on Gamma_R: first-order impedance du/dnu - i k u = 0,
// or the exact Dirichlet-to-Neumann map truncated to |m| <= fourier_modes.
struct BoundaryClosure
{
  enum class Kind
  {
    Impedance,
    DtN
  };

  Kind kind = Kind::Impedance;
  int fourier_modes = 0;

  static BoundaryClosure impedance() { return {}; }
  // Throws InputError for fourier_modes < 8.
  static BoundaryClosure dtn(int fourier_modes);
  // ceil(2 k R) + 16 modes.
  static BoundaryClosure dtn_default(double k, double R);
};

// Volume source f with a declared support ball (centre, radius).
struct SourceField
{
  std::function<Complex(const Vec2 &)> value;
  Vec2 center = Vec2::Zero();
  double support_radius = 0.0;

  static SourceField zero();
  static SourceField from_primitive(const FieldPrimitive &p);
  SourceField scaled(double factor) const;
};

// Eigenvalue k H_m'(kR) / H_m(kR) of the Dirichlet-to-Neumann map on the mode e^{i m theta}.
Complex dtn_symbol(int m, double k, double R);

//
// Discrete form  a(u, v) = int (A grad u) . grad v - k^2 n u v  - <T u, v>_{Gamma_R}  over P1
// functions vanishing on Gamma_D. The matrix is complex symmetric (not Hermitian).
//
struct HelmholtzSystem
{
  std::shared_ptr<const Mesh> mesh;
  double k = 0.0;
  BoundaryClosure closure;

  std::vector<int> dof_of_vertex;  // -1 on Gamma_D
  std::vector<int> vertex_of_dof;

  Eigen::SparseMatrix<Complex> matrix;
  Eigen::VectorXcd rhs;

  // Unweighted P1 stiffness and mass over all vertices, used for solution norms.
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> mass;

  double f_norm_sq = 0.0;

  std::size_t dimension() const { return vertex_of_dof.size(); }
};

// Throws InputError when supp f is not compactly inside B_R or k <= 0.
HelmholtzSystem assemble(std::shared_ptr<const Mesh> mesh, const Medium &medium, double k,
                         const SourceField &f,
                         BoundaryClosure closure = BoundaryClosure::impedance());

struct SolveReport
{
  Eigen::VectorXcd u;  // nodal values on every mesh vertex (0 on Gamma_D)
  double k = 0.0;
  double grad_norm_sq = 0.0;
  double l2_norm_sq = 0.0;
  double weighted_norm_sq = 0.0;  // grad_norm_sq + k^2 l2_norm_sq
  double f_norm_sq = 0.0;
  double residual = 0.0;          // ||S u - b|| / ||b||
  // The factorization failed or the residual exceeds 1e-10: the discrete system is (close
  // to) singular, as happens near quasi-resonances of trapping media.
  bool quasi_resonance = false;
};

// Sparse LU with COLAMD ordering and up to three steps of iterative refinement.
SolveReport solve(const HelmholtzSystem &system);

inline double weighted_norm(const SolveReport &report) { return report.weighted_norm_sq; }

// Closed-form field for the method of manufactured solutions.
struct ManufacturedField
{
  std::function<Complex(const Vec2 &)> value;
  std::function<Eigen::Vector2cd(const Vec2 &)> gradient;
  std::function<Eigen::Matrix2cd(const Vec2 &)> hessian;
};

struct ManufacturedProblem
{
  HelmholtzSystem system;
  Eigen::VectorXcd exact_nodal;
};

// Data f = -div(A grad u) - k^2 n u in D_R and g = (A grad u).nu - i k u on Gamma_R (impedance
// closure). The exact field must vanish on Gamma_D.
ManufacturedProblem manufactured_problem(const ManufacturedField &u_exact, const Medium &medium,
                                         double k, std::shared_ptr<const Mesh> mesh);

struct DiscretizationError
{
  double h1_seminorm = 0.0;  // ||grad(u_h - u)||_{L2}
  double l2 = 0.0;           // ||u_h - u||_{L2}
};

// Errors against the closed form, integrated with a degree-5 rule on every triangle.
DiscretizationError discretization_error(const Mesh &mesh, const Eigen::VectorXcd &u_h,
                                         const ManufacturedField &u_exact);

// Mesh-size rule keeping the discretization in the asymptotic regime:
// h = min(h_max, kh_max / k_eff, pollution_constant * k_eff^{-3/2}), k_eff = k sqrt(n_max).
struct MeshPolicy
{
  double h_max = 0.1;
  double kh_max = 0.5;
  double pollution_constant = 1.0;

  double size_for(double k, double n_max = 1.0) const;
};

}  // namespace stochelm

#endif  // STOCHELM_HELMSOLVE_HPP
