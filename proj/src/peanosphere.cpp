#include "matelab/peanosphere.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace matelab {

namespace {

// Bridge -> excursion by cycling at the (unique) minimum, then a monotone
// interior jitter of i * 2^-52 to make all values pairwise distinct.
std::vector<double> excursion_from_bridge(const std::vector<double>& bridge) {
  std::size_t n = bridge.size();  // positions 0..n-1, bridge[n] == bridge[0]
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (bridge[i] < bridge[argmin]) argmin = i;
  std::vector<double> exc(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    std::size_t idx = (argmin + k) % n;
    exc[k] = bridge[idx] - bridge[argmin];
  }
  exc[0] = 0.0;
  exc[n] = 0.0;
  // Monotone interior jitter.  The increment must beat one ulp of the
  // largest walk values (up to ~2^10), so 2^-52 is too small; 2^-40 stays
  // eleven binary orders below the unit walk steps.
  for (std::size_t k = 1; k < n; ++k)
    exc[k] += static_cast<double>(k) * 0x1.0p-40;
  return exc;
}

std::vector<double> sample_bridge(RngStream& stream, std::size_t n,
                                  ExcursionKind kind) {
  std::vector<double> walk(n, 0.0);
  if (kind == ExcursionKind::gaussian) {
    double s = 0.0;
    std::vector<double> partial(n);
    for (std::size_t i = 0; i < n; ++i) {
      s += stream.normal();
      partial[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i)
      walk[i] = (i == 0 ? 0.0
                        : partial[i - 1] -
                              partial[n - 1] * static_cast<double>(i) /
                                  static_cast<double>(n));
    return walk;
  }
  // +-1 bridge: equal numbers of up and down steps, Fisher-Yates shuffled.
  if (n % 2 != 0)
    throw std::invalid_argument("make_excursion_pair: pm_one needs even n");
  std::vector<int> steps(n);
  for (std::size_t i = 0; i < n; ++i) steps[i] = i < n / 2 ? 1 : -1;
  for (std::size_t i = n - 1; i > 0; --i) {
    auto j = static_cast<std::size_t>(stream.uniform() * (i + 1));
    if (j > i) j = i;
    std::swap(steps[i], steps[j]);
  }
  int s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    walk[i] = s;
    s += steps[i];
  }
  return walk;
}

}  // namespace

ExcursionPairGrid make_excursion_pair(RngStream stream, std::size_t n,
                                      ExcursionKind kind) {
  if (n < 2) throw std::invalid_argument("make_excursion_pair: n >= 2");
  RngStream sx = stream.split(1);
  RngStream sy = stream.split(2);
  ExcursionPairGrid p;
  auto bx = sample_bridge(sx, n, kind);
  auto by = sample_bridge(sy, n, kind);
  p.X = excursion_from_bridge(bx);
  p.Y = excursion_from_bridge(by);
  double mx = *std::max_element(p.X.begin(), p.X.end());
  double my = *std::max_element(p.Y.begin(), p.Y.end());
  p.C = mx + my + 1.0;
  return p;
}

std::vector<long> build_tree(const std::vector<double>& excursion) {
  std::size_t m = excursion.size();
  if (m < 3) throw std::invalid_argument("build_tree: excursion too short");
  std::vector<long> parent(m, -1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < m; ++i) {
    while (!stack.empty() && excursion[stack.back()] >= excursion[i])
      stack.pop_back();
    parent[i] = stack.empty() ? -1 : static_cast<long>(stack.back());
    stack.push_back(i);
  }
  return parent;
}

namespace {

void require_tie_free(const std::vector<double>& x, const char* side) {
  std::vector<double> interior(x.begin() + 1, x.end() - 1);
  std::sort(interior.begin(), interior.end());
  for (std::size_t i = 1; i < interior.size(); ++i)
    if (interior[i] == interior[i - 1])
      throw std::invalid_argument(std::string("mate: tie collision in ") +
                                  side);
}

}  // namespace

MatedMap mate(const ExcursionPairGrid& pair) {
  std::size_t n = pair.steps();
  if (n < 2) throw std::invalid_argument("mate: need n >= 2");
  require_tie_free(pair.X, "X");
  require_tie_free(pair.Y, "Y");
  auto px = build_tree(pair.X);
  auto py = build_tree(pair.Y);

  MatedMap map;
  map.n = static_cast<int>(n);
  auto bottom = [&](std::size_t i) { return static_cast<int>(i); };
  auto top = [&](std::size_t i) { return static_cast<int>(n + i); };

  std::vector<int> rung_id(n), xedge_id(n, -1), yedge_id(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    rung_id[i] = static_cast<int>(map.edges.size());
    map.edges.push_back({bottom(i), top(i), MapEdge::Label::gluing});
  }
  for (std::size_t i = 1; i < n; ++i) {
    xedge_id[i] = static_cast<int>(map.edges.size());
    map.edges.push_back({bottom(i), bottom(static_cast<std::size_t>(px[i])),
                         MapEdge::Label::tree});
    yedge_id[i] = static_cast<int>(map.edges.size());
    map.edges.push_back({top(i), top(static_cast<std::size_t>(py[i])),
                         MapEdge::Label::dual_tree});
  }

  std::vector<std::vector<int>> cx(n), cy(n);
  for (std::size_t i = 1; i < n; ++i) {
    cx[static_cast<std::size_t>(px[i])].push_back(static_cast<int>(i));
    cy[static_cast<std::size_t>(py[i])].push_back(static_cast<int>(i));
  }

  map.rotation.assign(2 * n, {});
  for (std::size_t i = 0; i < n; ++i) {
    auto& rb = map.rotation[static_cast<std::size_t>(bottom(i))];
    rb.push_back(rung_id[i]);
    if (i > 0) rb.push_back(xedge_id[i]);
    for (auto it = cx[i].rbegin(); it != cx[i].rend(); ++it)
      rb.push_back(xedge_id[static_cast<std::size_t>(*it)]);

    auto& rt = map.rotation[static_cast<std::size_t>(top(i))];
    for (int c : cy[i]) rt.push_back(yedge_id[static_cast<std::size_t>(c)]);
    if (i > 0) rt.push_back(yedge_id[i]);
    rt.push_back(rung_id[i]);
  }

  // Position of each edge inside its endpoints' rotations.
  std::vector<int> pos_u(map.edges.size(), -1), pos_v(map.edges.size(), -1);
  for (std::size_t v = 0; v < map.rotation.size(); ++v)
    for (std::size_t k = 0; k < map.rotation[v].size(); ++k) {
      int e = map.rotation[v][k];
      if (map.edges[static_cast<std::size_t>(e)].u == static_cast<int>(v))
        pos_u[static_cast<std::size_t>(e)] = static_cast<int>(k);
      else
        pos_v[static_cast<std::size_t>(e)] = static_cast<int>(k);
    }

  // Face tracing: next dart of (u -> v along e) leaves v along the rotation
  // successor of e at v.
  std::size_t ne = map.edges.size();
  std::vector<std::uint8_t> seen(2 * ne, 0);
  for (std::size_t d0 = 0; d0 < 2 * ne; ++d0) {
    if (seen[d0]) continue;
    std::vector<int> face;
    std::vector<int> fverts;
    std::size_t d = d0;
    do {
      seen[d] = 1;
      face.push_back(static_cast<int>(d));
      std::size_t e = d / 2;
      bool from_u = (d % 2) == 0;
      int head = from_u ? map.edges[e].v : map.edges[e].u;
      fverts.push_back(head);
      int p = (head == map.edges[e].u) ? pos_u[e] : pos_v[e];
      const auto& rot = map.rotation[static_cast<std::size_t>(head)];
      int e2 = rot[(static_cast<std::size_t>(p) + 1) % rot.size()];
      bool from_u2 =
          map.edges[static_cast<std::size_t>(e2)].u == head;
      d = 2 * static_cast<std::size_t>(e2) + (from_u2 ? 0 : 1);
    } while (d != d0);
    map.faces.push_back(std::move(face));
    map.face_vertices.push_back(std::move(fverts));
  }

  if (map.euler_characteristic() != 2)
    throw std::logic_error("mate: Euler characteristic is not 2");
  return map;
}

namespace {

struct ChordClasses {
  // Interior strict local minima of one excursion with their
  // previous-smaller and next-smaller indices.
  struct Chord {
    std::size_t min_index = 0;
    std::size_t prev_smaller = 0;
    std::size_t next_smaller = 0;
  };
  std::vector<Chord> chords;
};

ChordClasses side_chords(const std::vector<double>& x) {
  std::size_t n = x.size() - 1;
  ChordClasses out;
  // prev-smaller via stack, next-smaller via reverse stack.
  std::vector<long> prev(n + 1, -1), next(n + 1, -1);
  {
    std::vector<std::size_t> st;
    for (std::size_t i = 0; i <= n; ++i) {
      while (!st.empty() && x[st.back()] >= x[i]) st.pop_back();
      prev[i] = st.empty() ? -1 : static_cast<long>(st.back());
      st.push_back(i);
    }
  }
  {
    std::vector<std::size_t> st;
    for (std::size_t ii = n + 1; ii-- > 0;) {
      while (!st.empty() && x[st.back()] >= x[ii]) st.pop_back();
      next[ii] = st.empty() ? -1 : static_cast<long>(st.back());
      st.push_back(ii);
    }
  }
  for (std::size_t m = 1; m < n; ++m) {
    if (!(x[m - 1] > x[m] && x[m] < x[m + 1])) continue;
    ChordClasses::Chord c;
    c.min_index = m;
    c.prev_smaller = static_cast<std::size_t>(prev[m]);
    c.next_smaller = static_cast<std::size_t>(next[m]);
    out.chords.push_back(c);
  }
  return out;
}

}  // namespace

ClassCensus class_census(const ExcursionPairGrid& pair) {
  std::size_t n = pair.steps();
  ChordClasses xc = side_chords(pair.X);
  ChordClasses yc = side_chords(pair.Y);

  ClassCensus census;
  census.type0 = 1;
  std::vector<std::uint8_t> claimed(n, 0);
  claimed[0] = 1;

  // Within one side distinct minima sit at distinct times, so a claimed
  // collision can only pair an X chord with a Y chord.
  auto absorb = [&](const ChordClasses& side) {
    for (const auto& c : side.chords) {
      bool boundary_contact = c.prev_smaller == 0 || c.next_smaller == n;
      if (boundary_contact)
        ++census.type2;
      else
        ++census.type3;
      census.max_interior_preimage =
          std::max(census.max_interior_preimage,
                   static_cast<std::size_t>(boundary_contact ? 2 : 3));
      if (c.min_index < n) {
        if (claimed[c.min_index]) ++census.cross_side_minima;
        claimed[c.min_index] = 1;
      }
    }
  };
  absorb(xc);
  absorb(yc);

  for (std::size_t t = 1; t < n; ++t)
    if (!claimed[t]) ++census.type1;
  if (census.max_interior_preimage == 0) census.max_interior_preimage = 1;
  return census;
}

PushforwardReport pushforward_measure(const MatedMap& map,
                                      const ExcursionPairGrid& pair) {
  std::size_t n = pair.steps();
  ChordClasses xc = side_chords(pair.X);
  ChordClasses yc = side_chords(pair.Y);

  PushforwardReport rep;
  std::vector<std::uint8_t> claimed(n, 0);
  claimed[0] = 1;
  rep.class_masses.push_back(1.0);  // boundary class carries time 0
  auto add_side = [&](const ChordClasses& side) {
    for (const auto& c : side.chords) {
      double mass = 0.0;
      if (c.min_index < n && !claimed[c.min_index]) {
        claimed[c.min_index] = 1;
        mass = 1.0;
      }
      rep.class_masses.push_back(mass);
    }
  };
  add_side(xc);
  add_side(yc);
  for (std::size_t t = 1; t < n; ++t)
    if (!claimed[t]) rep.class_masses.push_back(1.0);
  rep.total_mass =
      std::accumulate(rep.class_masses.begin(), rep.class_masses.end(), 0.0);

  rep.every_face_positive = true;
  for (const auto& fv : map.face_vertices)
    if (fv.empty()) rep.every_face_positive = false;
  return rep;
}

ConeStructure cone_structure(const CorrelatedPair& pair) {
  const auto& l = pair.L.values;
  const auto& r = pair.R.values;
  std::size_t n = l.size();
  ConeStructure cs;
  cs.parent.assign(n, -1);
  cs.ancestor_free.assign(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t t = 0; t < n; ++t) {
    while (!stack.empty() &&
           (l[stack.back()] >= l[t] || r[stack.back()] >= r[t]))
      stack.pop_back();
    cs.parent[t] = stack.empty() ? -1 : static_cast<long>(stack.back());
    cs.ancestor_free[t] = stack.empty() ? 1 : 0;
    stack.push_back(t);
  }
  // Maximal pinched intervals: runs of non-ancestor-free times.  The cone
  // point is the ancestor-free time just before the run; the exit is the
  // ancestor-free time just after it.
  std::size_t t = 1;
  while (t < n) {
    if (cs.ancestor_free[t]) {
      ++t;
      continue;
    }
    std::size_t start = t - 1;
    while (t < n && !cs.ancestor_free[t]) ++t;
    if (t >= n) break;  // excursion censored by the horizon
    std::size_t end = t;
    double dl = l[end] - l[start];
    double dr = r[end] - r[start];
    ConeStructure::PinchedExcursion ex;
    ex.start = start;
    ex.end = end;
    if (dl <= 0.0 && dr <= 0.0) continue;  // degenerate double exit
    // The coordinate that did not cause the exit carries the jump.
    if (dl <= 0.0 || (dr > 0.0 && dr >= dl)) {
      ex.side = 1;
      ex.displacement = dr;
    } else {
      ex.side = 0;
      ex.displacement = dl;
    }
    cs.excursions.push_back(ex);
  }
  return cs;
}

JumpLogs extract_jump_processes(const CorrelatedPair& pair, double epsilon) {
  if (!(pair.kappa_prime > 4.0 && pair.kappa_prime < 8.0))
    throw std::invalid_argument(
        "extract_jump_processes: kappa_prime must lie in (4,8)");
  if (epsilon <= 0.0)
    throw std::invalid_argument("extract_jump_processes: epsilon > 0");
  ConeStructure cs = cone_structure(pair);
  JumpLogs logs;
  double dt = pair.L.dt;
  for (const auto& ex : cs.excursions) {
    if (ex.displacement < epsilon) continue;
    auto& dst = ex.side == 0 ? logs.jumps_L : logs.jumps_R;
    dst.emplace_back(dt * static_cast<double>(ex.start), ex.displacement);
  }
  return logs;
}

namespace {

// Sliding-window minimum of f over (t, t+w] for every t.
std::vector<double> window_min(const std::vector<double>& f, std::size_t w) {
  std::size_t n = f.size();
  std::vector<double> out(n, std::numeric_limits<double>::infinity());
  std::deque<std::size_t> dq;
  for (std::size_t i = 1; i < n; ++i) {
    while (!dq.empty() && f[dq.back()] >= f[i]) dq.pop_back();
    dq.push_back(i);
    // window for t = i - w .. i - 1 ends at i; emit for t = i - w
    if (i >= w) {
      std::size_t t = i - w;
      while (!dq.empty() && dq.front() <= t) dq.pop_front();
      out[t] = f[dq.front()];
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> cone_time_flags(const std::vector<double>& x1,
                                          const std::vector<double>& x2,
                                          double theta, std::size_t window) {
  if (x1.size() != x2.size())
    throw std::invalid_argument("cone_time_flags: size mismatch");
  if (!(theta > 0.0 && theta < 2.0 * M_PI))
    throw std::invalid_argument("cone_time_flags: theta in (0, 2*pi)");
  std::size_t n = x1.size();
  std::vector<std::uint8_t> flags(n, 0);
  if (n <= window) return flags;

  if (theta <= M_PI + 1e-12) {
    // W_theta = {f1 >= 0} and {f2 >= 0} with f1 = y, f2 = sin(theta) x -
    // cos(theta) y; cone iff both window minima stay above the base values.
    std::vector<double> f1(n), f2(n);
    double s = std::sin(theta), c = std::cos(theta);
    for (std::size_t i = 0; i < n; ++i) {
      f1[i] = x2[i];
      f2[i] = s * x1[i] - c * x2[i];
    }
    auto m1 = window_min(f1, window);
    auto m2 = window_min(f2, window);
    for (std::size_t t = 0; t + window < n; ++t)
      flags[t] = (m1[t] >= f1[t] && m2[t] >= f2[t]) ? 1 : 0;
    return flags;
  }

  // Obtuse cones: direct angle test.
  for (std::size_t t = 0; t + window < n; ++t) {
    bool ok = true;
    for (std::size_t r = t + 1; r <= t + window && ok; ++r) {
      double vx = x1[r] - x1[t];
      double vy = x2[r] - x2[t];
      double a = std::atan2(vy, vx);
      if (a < 0.0) a += 2.0 * M_PI;
      ok = a <= theta;
    }
    flags[t] = ok ? 1 : 0;
  }
  return flags;
}

std::vector<std::uint8_t> cut_time_flags(const std::vector<double>& l,
                                         const std::vector<double>& r) {
  if (l.size() != r.size())
    throw std::invalid_argument("cut_time_flags: size mismatch");
  std::vector<std::uint8_t> flags(l.size(), 0);
  double ml = std::numeric_limits<double>::infinity();
  double mr = ml;
  for (std::size_t t = 0; t < l.size(); ++t) {
    bool rec_l = l[t] <= ml;
    bool rec_r = r[t] <= mr;
    ml = std::min(ml, l[t]);
    mr = std::min(mr, r[t]);
    flags[t] = (rec_l && rec_r) ? 1 : 0;
  }
  return flags;
}

std::size_t box_count(const std::vector<std::uint8_t>& flags,
                      std::size_t scale_steps) {
  if (scale_steps == 0) throw std::invalid_argument("box_count: scale > 0");
  std::size_t count = 0;
  for (std::size_t b = 0; b * scale_steps < flags.size(); ++b) {
    std::size_t lo = b * scale_steps;
    std::size_t hi = std::min(flags.size(), lo + scale_steps);
    for (std::size_t i = lo; i < hi; ++i)
      if (flags[i]) {
        ++count;
        break;
      }
  }
  return count;
}

BoxCountFit boxcount_fit(const std::vector<std::size_t>& scales_steps,
                         const std::vector<double>& pooled_counts,
                         double total_steps_per_scale) {
  if (scales_steps.size() < 4)
    throw std::invalid_argument("boxcount_fit: need at least 4 scales");
  if (scales_steps.size() != pooled_counts.size())
    throw std::invalid_argument("boxcount_fit: size mismatch");
  BoxCountFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < scales_steps.size(); ++i) {
    if (pooled_counts[i] <= 0.0) continue;
    double scale_rel =
        static_cast<double>(scales_steps[i]) / total_steps_per_scale;
    double x = -std::log2(scale_rel);
    double y = std::log2(pooled_counts[i]);
    xs.push_back(x);
    ys.push_back(y);
    fit.log_counts.emplace_back(x, y);
  }
  if (xs.size() < 4)
    throw std::invalid_argument("boxcount_fit: too few nonzero scales");
  LineFit lf = least_squares(xs, ys);
  fit.dimension = lf.slope;
  fit.stderr_ = lf.slope_stderr;
  return fit;
}

StandardizedPair standardize(const CorrelatedPair& pair, bool extrapolate) {
  double kp = pair.kappa_prime;
  if ((kp <= 4.0 || kp > 8.0) && !extrapolate)
    throw std::invalid_argument(
        "standardize: kappa_prime outside (4,8] without extrapolate");
  StandardizedPair out;
  double theta = 4.0 * M_PI / kp;  // pi * kappa / 4
  double s = std::sin(theta), c = std::cos(theta);
  out.standardizer.theta_kappa = theta;
  out.standardizer.lambda[0][0] = s;
  out.standardizer.lambda[0][1] = -c;
  out.standardizer.lambda[1][0] = 0.0;
  out.standardizer.lambda[1][1] = 1.0;
  out.standardizer.inv[0][0] = 1.0 / s;
  out.standardizer.inv[0][1] = c / s;
  out.standardizer.inv[1][0] = 0.0;
  out.standardizer.inv[1][1] = 1.0;
  out.X1.dt = out.X2.dt = pair.L.dt;
  std::size_t n = pair.L.values.size();
  out.X1.values.resize(n);
  out.X2.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.X1.values[i] = (pair.L.values[i] + c * pair.R.values[i]) / s;
    out.X2.values[i] = pair.R.values[i];
  }
  return out;
}

}  // namespace matelab
