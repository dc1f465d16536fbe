#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "anholo/field.hpp"

namespace anholo {

using Json = nlohmann::json;
using Table3 = std::array<std::array<std::array<double, 4>, 4>, 4>;

// Axis-aligned box over the chart, used for probe lattices.
struct Box {
  Point lo{0.1, 0.1, 1.0, 0.0};
  Point hi{0.9, 0.9, 2.0, 0.0};
};

std::vector<Point> lattice(const Box& b, int n_per_axis, bool include_y = false);

struct NAdaptedMetric {
  ScalarField g1, g2, h3, h4;
  ScalarField w1, w2;  // N_i^3
  ScalarField n1, n2;  // N_i^4
  std::optional<ScalarField> omega;
  std::optional<ScalarField> qfactor;
  std::string signature = "(+,+,-,+)";
  Json provenance = Json::object();

  static NAdaptedMetric minkowski();

  const ScalarField& w(int i) const { return i == 0 ? w1 : w2; }
  const ScalarField& n(int i) const { return i == 0 ? n1 : n2; }
  // N_i^a with a in {2, 3} (t, y)
  const ScalarField& N(int i, int a) const { return a == T ? w(i) : n(i); }

  bool has_grid_fields() const;
};

// All coefficient jets at a point.
struct MetricJets {
  std::array<Jet2, 4> base;        // g1, g2, h3, h4
  std::array<std::array<Jet2, 4>, 2> N;  // N[i][a], a in {2,3}; entries 0,1 unused
  Jet2 omega{1.0}, q{1.0};
  bool has_omega = false, has_q = false;
  // frame metric diag(q^2 g1, q^2 g2, q^2 w^2 h3, q^2 w^2 h4)
  std::array<Jet2, 4> G;

  // e_alpha applied to a jet (first-order part only)
  double e(int alpha, const Jet2& f) const {
    if (alpha >= 2) return f.g[alpha];
    return f.g[alpha] - N[alpha][T].v * f.g[T] - N[alpha][Y].v * f.g[Y];
  }
};

MetricJets metric_jets(const NAdaptedMetric& m, const Point& p, double* quad_err = nullptr);

struct Polarizations {
  enum class Mode { Additive, Multiplicative };
  ScalarField eta1 = ScalarField::constant(1), eta2 = ScalarField::constant(1);
  ScalarField eta3 = ScalarField::constant(1), eta4 = ScalarField::constant(1);
  ScalarField etaN31, etaN32, etaN41, etaN42;  // zero by default (additive identity)
  Mode mode = Mode::Additive;

  static Polarizations identity(Mode m);
};

struct SourceSpec {
  ScalarField upsilon2;  // of (x1, x2, t)
  ScalarField upsilon4;  // of (x1, x2)

  SourceSpec() = default;
  SourceSpec(ScalarField u2, ScalarField u4);
};

struct SignatureReport {
  bool ok = true;
  int probed = 0;
  int violations = 0;
  std::string first_violation;
};

SignatureReport check_signature(const NAdaptedMetric& m, const std::vector<Point>& pts);

NAdaptedMetric apply_polarizations(const NAdaptedMetric& prime, const Polarizations& pol,
                                   const Box& probe = Box{}, int probe_n = 5);

Eigen::Matrix4d to_coordinate_matrix(const NAdaptedMetric& m, const Point& p);
// coordinate metric with second-order jets of every entry
std::array<std::array<Jet2, 4>, 4> coordinate_matrix_jets(const NAdaptedMetric& m, const Point& p);

struct Anholonomy {
  Table3 W{};  // [e_a, e_b] = W^c_ab e_c  as W[c][a][b]
  // Omega^a_ij = e_i N_j^a - e_j N_i^a  (so W^a_ij = -Omega^a_ij)
  double Omega(int a, int i, int j) const { return -W[a][i][j]; }
};

Anholonomy anholonomy(const MetricJets& mj);
Anholonomy anholonomy(const NAdaptedMetric& m, const Point& p);

double frame_apply(const NAdaptedMetric& m, const ScalarField& f, int i, const Point& p);

// JSON document
Json metric_to_json(const NAdaptedMetric& m);
NAdaptedMetric metric_from_json(const Json& doc);
Json grid_to_json(const GridTable& g);
std::shared_ptr<GridTable> grid_from_json(const std::string& name, const Json& j);

}  // namespace anholo
