#pragma once

#include <cstdint>
#include <vector>

#include "matelab/rng.hpp"
#include "matelab/series.hpp"
#include "matelab/stats.hpp"

namespace matelab {

// A pair of tie-free positive excursions on a shared grid together with the
// separation constant of the gluing diagram.
struct ExcursionPairGrid {
  std::vector<double> X;  // X[0] = X[n] = 0, interior > 0, values distinct
  std::vector<double> Y;
  double C = 0.0;         // > max X + max Y

  std::size_t steps() const { return X.empty() ? 0 : X.size() - 1; }
};

enum class ExcursionKind { gaussian, pm_one };

ExcursionPairGrid make_excursion_pair(RngStream stream, std::size_t n,
                                      ExcursionKind kind);

// Parent array of the plane tree encoded by an excursion: parent(i) is the
// largest j < i with X[j] < X[i]; entries 0 and n have no parent.
std::vector<long> build_tree(const std::vector<double>& excursion);

struct MapEdge {
  int u = 0;
  int v = 0;
  enum class Label { tree, dual_tree, gluing } label = Label::gluing;
};

// Combinatorial sphere map obtained by gluing the two excursion trees along
// the vertical edges, one per time index.  Bottom vertices are 0..n-1 and
// top vertices n..2n-1.
struct MatedMap {
  int n = 0;  // glued time indices
  std::vector<MapEdge> edges;
  std::vector<std::vector<int>> rotation;  // per-vertex edge ids, CCW
  std::vector<std::vector<int>> faces;     // per-face dart list
  std::vector<std::vector<int>> face_vertices;

  int vertex_count() const { return 2 * n; }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }
  int euler_characteristic() const {
    return vertex_count() - edge_count() + face_count();
  }
};

MatedMap mate(const ExcursionPairGrid& pair);

// Census of the discrete quotient classes.  Chord classes sit at interior
// strict local minima; the chord of a minimum crosses the graph inside the
// two arcs bracketing its previous-smaller and next-smaller indices, so a
// chord class has at most three preimage points (the crossing pair plus the
// minimum).  Type 2 marks chords whose crossing lands on a terminal arc and
// is absorbed by the boundary class.
struct ClassCensus {
  std::size_t type0 = 0;
  std::size_t type1 = 0;
  std::size_t type2 = 0;
  std::size_t type3 = 0;
  std::size_t max_interior_preimage = 0;
  // Times that are simultaneous strict minima of both excursions; such a
  // time would join a below-X and an above-Y chord, which continuum theory
  // excludes, so they are reported rather than merged.
  std::size_t cross_side_minima = 0;

  std::size_t class_count() const { return type0 + type1 + type2 + type3; }
};

ClassCensus class_census(const ExcursionPairGrid& pair);

struct PushforwardReport {
  std::vector<double> class_masses;
  double total_mass = 0.0;
  bool every_face_positive = false;
};

PushforwardReport pushforward_measure(const MatedMap& map,
                                      const ExcursionPairGrid& pair);

// Ancestor structure of a correlated pair: s is an ancestor of t when both
// coordinates stay strictly above their time-s values on (s, t].
struct ConeStructure {
  std::vector<long> parent;               // nearest ancestor or -1
  std::vector<std::uint8_t> ancestor_free;
  struct PinchedExcursion {
    std::size_t start = 0;  // cone time opening the excursion
    std::size_t end = 0;    // first ancestor-free time after it
    int side = 0;           // 0 = jump carried by L, 1 = by R
    double displacement = 0.0;
  };
  std::vector<PinchedExcursion> excursions;
};

ConeStructure cone_structure(const CorrelatedPair& pair);

struct JumpLogs {
  std::vector<std::pair<double, double>> jumps_L;  // (time, size), size >= eps
  std::vector<std::pair<double, double>> jumps_R;
};

JumpLogs extract_jump_processes(const CorrelatedPair& pair, double epsilon);

// theta-cone-time flags over a window of `window` steps; valid for any
// theta in (0, 2*pi), with the fast two-functional scan when theta <= pi.
std::vector<std::uint8_t> cone_time_flags(const std::vector<double>& x1,
                                          const std::vector<double>& x2,
                                          double theta, std::size_t window);

// Simultaneous running-minimum (cut) times of a pair.
std::vector<std::uint8_t> cut_time_flags(const std::vector<double>& l,
                                         const std::vector<double>& r);

// Boxes of `scale_steps` grid steps containing at least one flagged time.
std::size_t box_count(const std::vector<std::uint8_t>& flags,
                      std::size_t scale_steps);

struct BoxCountFit {
  double dimension = 0.0;
  double stderr_ = 0.0;
  std::vector<std::pair<double, double>> log_counts;  // (log2(1/scale), log2 N)
};

// Least-squares dimension from pooled box counts per scale (scales in grid
// steps, counts pooled over replicas; requires at least 4 scales).
BoxCountFit boxcount_fit(const std::vector<std::size_t>& scales_steps,
                         const std::vector<double>& pooled_counts,
                         double total_steps_per_scale);

// Covariance normalization of Lemma-style pairs: Lambda maps a standard
// pair to (L, R); standardize applies its inverse.
struct Standardizer {
  double theta_kappa = 0.0;
  double lambda[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double inv[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
};

struct StandardizedPair {
  TimeSeries X1;
  TimeSeries X2;
  Standardizer standardizer;
};

StandardizedPair standardize(const CorrelatedPair& pair,
                             bool extrapolate = false);

}  // namespace matelab
