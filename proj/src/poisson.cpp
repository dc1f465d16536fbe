#include "anholo/poisson.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Sparse>

#include "anholo/error.hpp"

namespace anholo {

ScalarField solve_psi(const ScalarField& upsilon4, const Rect& dom, const ScalarField& bc, int n1, int n2,
                      PoissonStats* stats) {
  if (n1 < 9 || n2 < 9) fail(ErrorKind::Precondition, "Poisson grid needs at least 9 nodes per axis");
  if (!(dom.x1min < dom.x1max && dom.x2min < dom.x2max)) fail(ErrorKind::Precondition, "empty Poisson domain");
  if (upsilon4.depends_on(T) || upsilon4.depends_on(Y))
    fail(ErrorKind::Precondition, "upsilon4 must depend on (x1, x2) only");

  AxisSpec a1{dom.x1min, dom.x1max, n1}, a2{dom.x2min, dom.x2max, n2};
  const double h1 = (dom.x1max - dom.x1min) / (n1 - 1), h2 = (dom.x2max - dom.x2min) / (n2 - 1);
  const double c1 = 1.0 / (h1 * h1), c2 = 1.0 / (h2 * h2);

  std::vector<double> psi(static_cast<size_t>(n1) * n2, 0.0), rhs(psi.size(), 0.0);
  auto at = [&](int i, int j) -> size_t { return static_cast<size_t>(i) * n2 + j; };
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      Point p{a1.node(i), a2.node(j), 0.0, 0.0};
      bool edge = i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1;
      if (edge) {
        double v = bc.value(p);
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os << "boundary value not finite at (" << p[0] << ", " << p[1] << ")";
          fail(ErrorKind::Precondition, os.str());
        }
        psi[at(i, j)] = v;
      } else {
        rhs[at(i, j)] = 2.0 * upsilon4.value(p);
      }
    }

  const int m1 = n1 - 2, m2 = n2 - 2, N = m1 * m2;
  auto id = [&](int i, int j) { return (i - 1) * m2 + (j - 1); };
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(N) * 5);
  Eigen::VectorXd b(N);
  // assemble -L (symmetric positive definite)
  for (int i = 1; i <= m1; ++i)
    for (int j = 1; j <= m2; ++j) {
      int r = id(i, j);
      double bi = -rhs[at(i, j)];
      trip.emplace_back(r, r, 2 * c1 + 2 * c2);
      const int di[4] = {-1, 1, 0, 0}, dj[4] = {0, 0, -1, 1};
      for (int k = 0; k < 4; ++k) {
        int ii = i + di[k], jj = j + dj[k];
        double c = k < 2 ? c1 : c2;
        if (ii == 0 || jj == 0 || ii == n1 - 1 || jj == n2 - 1)
          bi += c * psi[at(ii, jj)];
        else
          trip.emplace_back(r, id(ii, jj), -c);
      }
      b[r] = bi;
    }
  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Convergence, "Poisson factorization failed");
  Eigen::VectorXd u = solver.solve(b);
  if (solver.info() != Eigen::Success) fail(ErrorKind::Convergence, "Poisson solve failed");
  // iterative refinement against the assembled operator
  double res = (A * u - b).lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 3 && res > 1e-12; ++it) {
    u += solver.solve(b - A * u);
    res = (A * u - b).lpNorm<Eigen::Infinity>();
  }
  for (int i = 1; i <= m1; ++i)
    for (int j = 1; j <= m2; ++j) psi[at(i, j)] = u[id(i, j)];
  if (!(res <= 1e-10)) {
    std::ostringstream os;
    os << "Poisson residual " << res << " above 1e-10";
    fail(ErrorKind::Convergence, os.str());
  }
  if (stats) {
    stats->residual = res;
    stats->unknowns = N;
  }
  auto g = std::make_shared<GridTable>("psi", std::array<AxisSpec, 3>{a1, a2, AxisSpec{0, 0, 1}}, std::move(psi));
  g->set_order(2);
  return ScalarField::from_grid(g);
}

}  // namespace anholo
