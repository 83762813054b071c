// radial_operator.hpp — radial meshes with measure r^m dr, tridiagonal
// Sturm-Liouville assembly, Thomas solves, and smallest-eigenvalue
// estimation (Sturm bisection bracket + inverse iteration).

#pragma once

#include <span>
#include <string>
#include <vector>

namespace spherecon {

struct RadialMesh {
  std::vector<double> r;       // strictly increasing nodes
  int weight_exponent = 0;     // measure r^m dr
  std::vector<double> h;       // interval widths (n-1)
  std::vector<double> face_a;  // mean of r^m per interval (n-1)
  std::vector<double> node_w;  // trapezoid weight theta_j * r_j^m (n)

  std::size_t size() const { return r.size(); }

  static RadialMesh uniform(double r0, double r1, int n, int m);
  static RadialMesh log_uniform(double r0, double r1, int n, int m);
  static RadialMesh from_nodes(std::vector<double> nodes, int m);
};

struct Tridiag {
  std::vector<double> lower;  // n-1
  std::vector<double> diag;   // n
  std::vector<double> upper;  // n-1
};

// Solves A x = rhs for a (copy of a) tridiagonal system.
std::vector<double> thomas_solve(const Tridiag& A, std::span<const double> rhs);

// Stiffness of u -> -(r^-m)(r^m u')' on interior nodes (Dirichlet ends dropped):
// entries of the quadratic form sum_faces face_a * (du/h)^2, i.e. the matrix
// acting on interior nodal values. Interior size = n - 2.
Tridiag interior_stiffness(const RadialMesh& mesh);

struct EigenEstimate {
  double lambda_min = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  std::string diagnostics;
};

// Smallest eigenvalue of A x = lambda M x, A tridiagonal symmetric (entries in
// `stiff` plus diagonal term diag_c .* node mass), M = diag(node mass).
// Throws std::runtime_error with iterate diagnostics on non-convergence.
EigenEstimate smallest_eigenvalue(const Tridiag& stiff, std::span<const double> diag_c,
                                  std::span<const double> mass, int max_iters = 200,
                                  double tol = 1e-11);

}  // namespace spherecon
