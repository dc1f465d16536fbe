#pragma once

// Connection coefficients in the N-adapted frame. Tables are indexed [gamma][alpha][beta]
// with 0..3 = (x1, x2, t, y); the last lower index is the derivation direction:
// D_{e_beta} e_alpha = Gamma^gamma_{alpha beta} e_gamma.

#include <Eigen/Dense>

#include "anholo/metric.hpp"

namespace anholo {

double max_abs(const Table3& t);

struct DConnectionCoeffs {
  Table3 G{};
  double Lh(int i, int j, int k) const { return G[i][j][k]; }  // L^i_jk
  double Lv(int a, int b, int k) const { return G[a][b][k]; }  // L^a_bk
  double Ch(int i, int j, int c) const { return G[i][j][c]; }  // C^i_jc
  double Cv(int a, int b, int c) const { return G[a][b][c]; }  // C^a_bc
};

struct TorsionCoeffs {
  Table3 T{};  // T^g_ab = Gamma^g_ab - Gamma^g_ba + W^g_ab
  double hh(int i, int j, int k) const { return T[i][j][k]; }   // T^i_jk
  double hv(int i, int j, int a) const { return T[i][j][a]; }   // T^i_ja
  double vhh(int a, int j, int i) const { return T[a][j][i]; }  // T^a_ji
  double vvh(int c, int a, int j) const { return T[c][a][j]; }  // T^c_aj
  double vvv(int a, int b, int c) const { return T[a][b][c]; }  // T^a_bc
  double max_abs() const { return anholo::max_abs(T); }
};

struct DistortionCoeffs {
  Table3 Z{};  // Gamma_LC = Gamma_hat + Z
  double max_abs() const { return anholo::max_abs(Z); }
};

struct RicciBlocks {
  double R11 = 0, R33 = 0;
  std::array<double, 2> R3k{}, R4k{};
};

struct CoordinateCurvature {
  Table3 Gamma{};  // Gamma^l_mn, coordinate basis
  Eigen::Matrix4d metric, inverse, ricci, einstein, einstein_mixed;
  double scalar = 0;
};

DConnectionCoeffs canonical_dconnection(const MetricJets& mj);
DConnectionCoeffs canonical_dconnection(const NAdaptedMetric& m, const Point& p);

TorsionCoeffs dtorsion(const DConnectionCoeffs& d, const Anholonomy& A);
TorsionCoeffs dtorsion(const NAdaptedMetric& m, const Point& p);

DistortionCoeffs distortion(const MetricJets& mj, const DConnectionCoeffs& d, const TorsionCoeffs& t,
                            const Anholonomy& A);
DistortionCoeffs distortion(const NAdaptedMetric& m, const Point& p);

Table3 levicivita_nadapted(const MetricJets& mj, const Anholonomy& A);
Table3 levicivita_nadapted(const NAdaptedMetric& m, const Point& p);

RicciBlocks dricci_blocks(const MetricJets& mj);
RicciBlocks dricci_blocks(const NAdaptedMetric& m, const Point& p);

CoordinateCurvature coordinate_einstein(const NAdaptedMetric& m, const Point& p);

// mixed tensor X^mu_nu in coordinates -> N-adapted components X^alpha_beta
Eigen::Matrix4d to_nadapted_mixed(const MetricJets& mj, const Eigen::Matrix4d& mixed);

}  // namespace anholo
