#include "anholo/connection.hpp"

#include <cmath>

#include "anholo/error.hpp"

namespace anholo {

double max_abs(const Table3& t) {
  double m = 0;
  for (auto& a : t)
    for (auto& b : a)
      for (double v : b) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

void check_blocks(const MetricJets& mj) {
  for (int a = 0; a < 4; ++a)
    if (std::fabs(mj.G[a].v) < 1e-14) fail(ErrorKind::Domain, "degenerate metric block");
}

}  // namespace

DConnectionCoeffs canonical_dconnection(const MetricJets& mj) {
  check_blocks(mj);
  DConnectionCoeffs d;
  const auto& G = mj.G;
  // e_beta G_alpha
  double eG[4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) eG[a][b] = mj.e(b, G[a]);
  auto dN = [&](int k, int a, int b) { return mj.N[k][a].g[b]; };  // d_b N_k^a, b vertical

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        double s = 0;
        if (j == i) s += eG[i][k];
        if (k == i) s += eG[i][j];
        if (j == k) s -= eG[j][i];
        d.G[i][j][k] = 0.5 * s / G[i].v;
      }
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      for (int k = 0; k < 2; ++k) {
        double s = (a == b ? eG[a][k] : 0.0) - G[a].v * dN(k, a, b) - G[b].v * dN(k, b, a);
        d.G[a][b][k] = dN(k, a, b) + 0.5 * s / G[a].v;
      }
  for (int i = 0; i < 2; ++i)
    for (int c = 2; c < 4; ++c) d.G[i][i][c] = 0.5 * eG[i][c] / G[i].v;
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      for (int c = 2; c < 4; ++c) {
        double s = 0;
        if (b == a) s += eG[a][c];
        if (c == a) s += eG[a][b];
        if (b == c) s -= eG[b][a];
        d.G[a][b][c] = 0.5 * s / G[a].v;
      }
  return d;
}

DConnectionCoeffs canonical_dconnection(const NAdaptedMetric& m, const Point& p) {
  return canonical_dconnection(metric_jets(m, p));
}

TorsionCoeffs dtorsion(const DConnectionCoeffs& d, const Anholonomy& A) {
  TorsionCoeffs t;
  for (int g = 0; g < 4; ++g)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) t.T[g][a][b] = d.G[g][a][b] - d.G[g][b][a] + A.W[g][a][b];
  return t;
}

TorsionCoeffs dtorsion(const NAdaptedMetric& m, const Point& p) {
  MetricJets mj = metric_jets(m, p);
  return dtorsion(canonical_dconnection(mj), anholonomy(mj));
}

DistortionCoeffs distortion(const MetricJets& mj, const DConnectionCoeffs& d, const TorsionCoeffs& t,
                            const Anholonomy& A) {
  DistortionCoeffs z;
  auto& Z = z.Z;
  const auto& G = mj.G;
  auto C = [&](int i, int j, int b) { return d.G[i][j][b]; };
  auto Om = [&](int a, int j, int k) { return A.Omega(a, j, k); };
  auto T = [&](int c, int a, int b) { return t.T[c][a][b]; };
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  auto Xi = [&](int i, int h, int j, int k) {
    return 0.5 * (delta(i, j) * delta(h, k) - delta(j, k) * delta(i, h) * G[j].v / G[i].v);
  };
  auto Xpm = [&](double s, int a, int dd, int c, int b) {
    return 0.5 * (delta(a, c) * delta(dd, b) + s * delta(c, b) * delta(a, dd) * G[c].v / G[a].v);
  };

  for (int a = 2; a < 4; ++a)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) Z[a][j][k] = -C(k, j, a) * G[k].v / G[a].v + 0.5 * Om(a, j, k);

  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k)
      for (int b = 2; b < 4; ++b) {
        double s = -0.5 * Om(b, i, k) * G[b].v / G[i].v;
        for (int j = 0; j < 2; ++j)
          for (int h = 0; h < 2; ++h) s += Xi(i, h, j, k) * C(j, h, b);
        Z[i][k][b] = s;
        Z[i][b][k] = s + C(i, k, b);
      }

  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      for (int k = 0; k < 2; ++k) {
        double s1 = 0, s2 = 0;
        for (int c = 2; c < 4; ++c)
          for (int dd = 2; dd < 4; ++dd) {
            s1 += Xpm(-1.0, a, dd, c, b) * T(c, k, dd);
            s2 += Xpm(+1.0, a, dd, c, b) * T(c, k, dd);
          }
        Z[a][b][k] = s1;
        Z[a][k][b] = -s2;
      }

  for (int i = 0; i < 2; ++i)
    for (int a = 2; a < 4; ++a)
      for (int b = 2; b < 4; ++b) Z[i][a][b] = 0.5 / G[i].v * (T(b, i, a) * G[b].v + T(a, i, b) * G[a].v);
  return z;
}

DistortionCoeffs distortion(const NAdaptedMetric& m, const Point& p) {
  MetricJets mj = metric_jets(m, p);
  auto A = anholonomy(mj);
  auto d = canonical_dconnection(mj);
  return distortion(mj, d, dtorsion(d, A), A);
}

Table3 levicivita_nadapted(const MetricJets& mj, const Anholonomy& A) {
  check_blocks(mj);
  const auto& G = mj.G;
  double eG[4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) eG[a][b] = mj.e(b, G[a]);
  const auto& W = A.W;
  Table3 out{};
  // Koszul formula for a diagonal frame metric
  for (int c = 0; c < 4; ++c)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double s = 0;
        if (a == c) s += eG[a][b];
        if (b == c) s += eG[b][a];
        if (a == b) s -= eG[a][c];
        s += W[c][b][a] * G[c].v - W[a][b][c] * G[a].v - W[b][a][c] * G[b].v;
        out[c][a][b] = 0.5 * s / G[c].v;
      }
  return out;
}

Table3 levicivita_nadapted(const NAdaptedMetric& m, const Point& p) {
  MetricJets mj = metric_jets(m, p);
  return levicivita_nadapted(mj, anholonomy(mj));
}

RicciBlocks dricci_blocks(const MetricJets& mj) {
  const Jet2 &g1 = mj.base[0], &g2 = mj.base[1], &h3 = mj.base[2], &h4 = mj.base[3];
  for (const Jet2* f : {&g1, &g2, &h3, &h4})
    if (std::fabs(f->v) < 1e-14) fail(ErrorKind::Domain, "degenerate coefficient in Ricci blocks");
  RicciBlocks r;
  double bh = g2.dd(X1, X1) - g1.d(X1) * g2.d(X1) / (2 * g1.v) - g2.d(X1) * g2.d(X1) / (2 * g2.v) +
              g1.dd(X2, X2) - g1.d(X2) * g2.d(X2) / (2 * g2.v) - g1.d(X2) * g1.d(X2) / (2 * g1.v);
  r.R11 = -bh / (2 * g1.v * g2.v);
  double h3s = h3.d(T), h4s = h4.d(T);
  double bv = h4.dd(T, T) - h4s * h4s / (2 * h4.v) - h3s * h4s / (2 * h3.v);
  r.R33 = -bv / (2 * h3.v * h4.v);
  for (int k = 0; k < 2; ++k) {
    const Jet2& w = mj.N[k][T];
    const Jet2& n = mj.N[k][Y];
    r.R3k[k] = w.v / (2 * h4.v) * bv + h4s / (4 * h4.v) * (h3.d(k) / h3.v + h4.d(k) / h4.v) -
               h4.dd(k, T) / (2 * h4.v);
    // contracted curvature of the canonical d-connection; differs from the textbook
    // display in the sign of n** and the weight of h3* (see README)
    r.R4k[k] = -h4.v / (2 * h3.v) * n.dd(T, T) + (h4.v * h3s / h3.v - 3 * h4s) * n.d(T) / (4 * h3.v);
  }
  return r;
}

RicciBlocks dricci_blocks(const NAdaptedMetric& m, const Point& p) { return dricci_blocks(metric_jets(m, p)); }

CoordinateCurvature coordinate_einstein(const NAdaptedMetric& m, const Point& p) {
  auto gj = coordinate_matrix_jets(m, p);
  CoordinateCurvature cc;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) cc.metric(a, b) = gj[a][b].v;
  Eigen::FullPivLU<Eigen::Matrix4d> lu(cc.metric);
  if (!lu.isInvertible() || std::fabs(cc.metric.determinant()) < 1e-300)
    fail(ErrorKind::Domain, "coordinate metric is singular");
  cc.inverse = lu.inverse();
  const Eigen::Matrix4d& gi = cc.inverse;

  // lower Christoffel and its derivatives
  double low[4][4][4], dlow[4][4][4][4];
  for (int s = 0; s < 4; ++s)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        low[s][mu][nu] = 0.5 * (gj[s][nu].d(mu) + gj[s][mu].d(nu) - gj[mu][nu].d(s));
        for (int r = 0; r < 4; ++r)
          dlow[r][s][mu][nu] = 0.5 * (gj[s][nu].dd(r, mu) + gj[s][mu].dd(r, nu) - gj[mu][nu].dd(r, s));
      }
  // d_r g^{ls}
  double dgi[4][4][4];
  for (int r = 0; r < 4; ++r) {
    Eigen::Matrix4d dg;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) dg(a, b) = gj[a][b].d(r);
    Eigen::Matrix4d d = -gi * dg * gi;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) dgi[r][a][b] = d(a, b);
  }
  double Gam[4][4][4], dGam[4][4][4][4];  // dGam[r][l][mu][nu] = d_r Gamma^l_mu nu
  for (int l = 0; l < 4; ++l)
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += gi(l, k) * low[k][mu][nu];
        Gam[l][mu][nu] = s;
        cc.Gamma[l][mu][nu] = s;
        for (int r = 0; r < 4; ++r) {
          double ds = 0;
          for (int k = 0; k < 4; ++k) ds += dgi[r][l][k] * low[k][mu][nu] + gi(l, k) * dlow[r][k][mu][nu];
          dGam[r][l][mu][nu] = ds;
        }
      }
  // R_sn = R^r_s r n
  for (int s = 0; s < 4; ++s)
    for (int n = 0; n < 4; ++n) {
      double acc = 0;
      for (int r = 0; r < 4; ++r) {
        acc += dGam[r][r][n][s] - dGam[n][r][r][s];
        for (int l = 0; l < 4; ++l) acc += Gam[r][r][l] * Gam[l][n][s] - Gam[r][n][l] * Gam[l][r][s];
      }
      cc.ricci(s, n) = acc;
    }
  cc.scalar = (gi.cwiseProduct(cc.ricci)).sum();
  cc.einstein = cc.ricci - 0.5 * cc.scalar * cc.metric;
  cc.einstein_mixed = gi * cc.einstein;
  return cc;
}

Eigen::Matrix4d to_nadapted_mixed(const MetricJets& mj, const Eigen::Matrix4d& mixed) {
  Eigen::Matrix4d B = Eigen::Matrix4d::Identity();  // rows: e_beta components
  Eigen::Matrix4d D = Eigen::Matrix4d::Identity();  // rows: e^alpha components
  for (int i = 0; i < 2; ++i)
    for (int a = 2; a < 4; ++a) {
      B(i, a) = -mj.N[i][a].v;
      D(a, i) = mj.N[i][a].v;
    }
  return D * mixed * B.transpose();
}

}  // namespace anholo
