#include "spherecon/radial_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spherecon/common.hpp"

namespace spherecon {

namespace {

void finalize(RadialMesh& m) {
  const std::size_t n = m.r.size();
  if (n < 3) throw std::invalid_argument("RadialMesh: need at least 3 nodes");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(m.r[i + 1] > m.r[i])) throw std::invalid_argument("RadialMesh: nodes must increase");
  m.h.resize(n - 1);
  m.face_a.resize(n - 1);
  m.node_w.assign(n, 0.0);
  auto w = [&](double r) { return m.weight_exponent == 0 ? 1.0 : std::pow(r, m.weight_exponent); };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m.h[i] = m.r[i + 1] - m.r[i];
    // Midpoint coefficient: keeps the kinetic sum a midpoint rule of
    // r^m |u'|^2 (bulk O(h^2) bias otherwise for m >= 2).
    m.face_a[i] = w(0.5 * (m.r[i] + m.r[i + 1]));
    m.node_w[i] += 0.5 * m.h[i] * w(m.r[i]);
    m.node_w[i + 1] += 0.5 * m.h[i] * w(m.r[i + 1]);
  }
}

}  // namespace

RadialMesh RadialMesh::uniform(double r0, double r1, int n, int m) {
  RadialMesh mesh;
  mesh.r = lin_spaced(r0, r1, n);
  mesh.weight_exponent = m;
  finalize(mesh);
  return mesh;
}

RadialMesh RadialMesh::log_uniform(double r0, double r1, int n, int m) {
  RadialMesh mesh;
  mesh.r = log_spaced(r0, r1, n);
  mesh.weight_exponent = m;
  finalize(mesh);
  return mesh;
}

RadialMesh RadialMesh::from_nodes(std::vector<double> nodes, int m) {
  RadialMesh mesh;
  mesh.r = std::move(nodes);
  mesh.weight_exponent = m;
  finalize(mesh);
  return mesh;
}

std::vector<double> thomas_solve(const Tridiag& A, std::span<const double> rhs) {
  const std::size_t n = A.diag.size();
  if (rhs.size() != n || A.lower.size() + 1 != n || A.upper.size() + 1 != n)
    throw std::invalid_argument("thomas_solve: size mismatch");
  std::vector<double> c(n - 1), d(n), x(n);
  double piv = A.diag[0];
  if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
  c[0] = A.upper[0] / piv;
  d[0] = rhs[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = A.diag[i] - A.lower[i - 1] * c[i - 1];
    if (piv == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    if (i + 1 < n) c[i] = A.upper[i] / piv;
    d[i] = (rhs[i] - A.lower[i - 1] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

Tridiag interior_stiffness(const RadialMesh& mesh) {
  const std::size_t n = mesh.size();
  const std::size_t ni = n - 2;
  Tridiag S;
  S.diag.resize(ni);
  S.lower.assign(ni - 1, 0.0);
  S.upper.assign(ni - 1, 0.0);
  for (std::size_t j = 0; j < ni; ++j) {
    const std::size_t i = j + 1;  // global node
    S.diag[j] = mesh.face_a[i - 1] / mesh.h[i - 1] + mesh.face_a[i] / mesh.h[i];
    if (j + 1 < ni) {
      S.upper[j] = -mesh.face_a[i] / mesh.h[i];
      S.lower[j] = -mesh.face_a[i] / mesh.h[i];
    }
  }
  return S;
}

namespace {

// Number of eigenvalues of the symmetric tridiagonal (d, e) below x.
int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
  int count = 0;
  double t = d[0] - x;
  if (t < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    double denom = t;
    if (denom == 0.0) denom = 1e-300;
    t = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (t < 0.0) ++count;
  }
  return count;
}

}  // namespace

EigenEstimate smallest_eigenvalue(const Tridiag& stiff, std::span<const double> diag_c,
                                  std::span<const double> mass, int max_iters, double tol) {
  const std::size_t n = stiff.diag.size();
  if (diag_c.size() != n || mass.size() != n)
    throw std::invalid_argument("smallest_eigenvalue: size mismatch");

  // Symmetrize: B = M^-1/2 (S + diag(c .* m)) M^-1/2.
  std::vector<double> sq(n), d(n), e(n > 1 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) sq[i] = std::sqrt(mass[i]);
  for (std::size_t i = 0; i < n; ++i) d[i] = stiff.diag[i] / mass[i] + diag_c[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = stiff.upper[i] / (sq[i] * sq[i + 1]);

  // Gershgorin bracket, tightened by Sturm bisection.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::fabs(e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - off);
    hi = std::max(hi, d[i] + off);
  }
  const double scale = std::max(std::fabs(lo), std::fabs(hi));
  double a = lo, b = hi;
  for (int it = 0; it < 80 && b - a > 1e-10 * scale; ++it) {
    const double mid = 0.5 * (a + b);
    if (sturm_count(d, e, mid) >= 1)
      b = mid;
    else
      a = mid;
  }

  // Inverse iteration with a shift just below the bracketed eigenvalue.
  const double sigma = a - std::max(1e-12 * scale, 2.0 * (b - a));
  Tridiag shifted;
  shifted.diag.resize(n);
  shifted.lower = e.empty() ? std::vector<double>{} : std::vector<double>(e.begin(), e.end());
  shifted.upper = shifted.lower;
  for (std::size_t i = 0; i < n; ++i) shifted.diag[i] = d[i] - sigma;

  std::vector<double> x(n, 1.0);
  double nx = std::sqrt(static_cast<double>(n));
  for (auto& v : x) v /= nx;
  EigenEstimate est;
  double lambda = 0.0;
  // Attainable residual floor: roundoff relative to the matrix norm.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  for (int it = 0; it < max_iters; ++it) {
    std::vector<double> y = thomas_solve(shifted, x);
    double ny = 0.0;
    for (double v : y) ny += v * v;
    ny = std::sqrt(ny);
    for (auto& v : y) v /= ny;
    // Rayleigh quotient and residual of B y = lambda y.
    double num = 0.0, res = 0.0;
    std::vector<double> By(n);
    for (std::size_t i = 0; i < n; ++i) {
      double v = d[i] * y[i];
      if (i > 0) v += e[i - 1] * y[i - 1];
      if (i + 1 < n) v += e[i] * y[i + 1];
      By[i] = v;
      num += v * y[i];
    }
    lambda = num;
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = By[i] - lambda * y[i];
      res += ri * ri;
    }
    res = std::sqrt(res);
    est.iterations = it + 1;
    est.residual = res;
    x = std::move(y);
    if (res <= std::max(tol * std::max(1.0, std::fabs(lambda)), floor)) {
      est.converged = true;
      break;
    }
  }
  est.lambda_min = lambda;
  if (!est.converged) {
    std::ostringstream msg;
    msg << "smallest_eigenvalue: inverse iteration did not converge after " << est.iterations
        << " iterations (last lambda = " << lambda << ", residual = " << est.residual
        << ", bracket = [" << a << ", " << b << "])";
    est.diagnostics = msg.str();
    throw std::runtime_error(est.diagnostics);
  }
  return est;
}

}  // namespace spherecon
