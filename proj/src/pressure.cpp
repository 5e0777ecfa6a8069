#include "semipress/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <tuple>

#include "semipress/bowen.hpp"
#include "semipress/cocycle.hpp"
#include "semipress/errors.hpp"
#include "semipress/schedule.hpp"

namespace semipress {

// ---------------------------------------------------------------- samples

SetSample SetSample::grid(const Domain& domain, int resolution) {
  if (resolution < 1) throw InvalidInput("grid resolution must be positive");
  if (domain.kind() == DomainKind::cantor) throw InvalidInput("grid samples need a circle or interval domain");
  SetSample z;
  z.domain = domain;
  z.points = domain.lattice(resolution);
  z.mesh = 0.5 / resolution;
  z.descriptor = "grid(" + std::to_string(resolution) + ")";
  return z;
}

SetSample SetSample::cantor(const Domain& domain, int depth) {
  if (depth < 0 || depth > 24) throw InvalidInput("cantor sample depth must be in [0, 24]");
  SetSample z;
  z.domain = domain;
  z.points = {0.0};
  double scale = 1.0;
  for (int j = 1; j <= depth; ++j) {
    scale /= 3.0;
    const std::size_t n = z.points.size();
    for (std::size_t i = 0; i < n; ++i) z.points.push_back(z.points[i] + 2.0 * scale);
  }
  std::sort(z.points.begin(), z.points.end());
  for (double p : z.points) {
    if (!domain.contains(p)) throw InvalidInput("cantor sample point outside the system domain");
  }
  z.mesh = scale;
  z.descriptor = "cantor(" + std::to_string(depth) + ")";
  return z;
}

SetSample SetSample::explicit_points(const Domain& domain, std::vector<double> points, double mesh,
                                     std::string descriptor) {
  if (points.empty()) throw InvalidInput("sample must contain at least one point");
  if (!(mesh > 0.0)) throw InvalidInput("sample mesh must be positive");
  for (double& p : points) {
    p = domain.normalize(p);
    if (!domain.contains(p)) throw InvalidInput("sample point outside the domain");
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  SetSample z;
  z.domain = domain;
  z.points = std::move(points);
  z.mesh = mesh;
  z.descriptor = std::move(descriptor);
  return z;
}

SetSample SetSample::merged(const SetSample& other) const {
  std::vector<double> pts = points;
  pts.insert(pts.end(), other.points.begin(), other.points.end());
  return explicit_points(domain, std::move(pts), std::max(mesh, other.mesh),
                         descriptor + "+" + other.descriptor);
}

SetSample SetSample::mapped(const std::function<double(double)>& g, std::string name) const {
  std::vector<double> pts;
  pts.reserve(points.size());
  for (double p : points) pts.push_back(g(p));
  return explicit_points(domain, std::move(pts), mesh, std::move(name));
}

std::string to_string(Variant v) { return v == Variant::center ? "center" : "sup"; }

std::string to_string(Strategy s) { return s == Strategy::sweep ? "sweep" : "greedy_weight"; }

Variant parse_variant(const std::string& s) {
  if (s == "center") return Variant::center;
  if (s == "sup") return Variant::sup;
  throw InvalidInput("unknown variant '" + s + "'");
}

Strategy parse_strategy(const std::string& s) {
  if (s == "sweep") return Strategy::sweep;
  if (s == "greedy_weight") return Strategy::greedy_weight;
  throw InvalidInput("unknown strategy '" + s + "'");
}

// ---------------------------------------------------------------- modulus

ContinuityModulus continuity_modulus(const SemigroupSystem& sys, double delta, int probes) {
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  ContinuityModulus out{delta, 0.0};
  if (all_constant(sys.potentials())) return out;
  const auto& dom = sys.domain();
  const auto pts = dom.probe_points(probes);
  const std::size_t m = pts.size();
  std::vector<double> vals(m);
  for (const auto& phi : sys.potentials()) {
    if (phi.constant_value()) continue;
    for (std::size_t i = 0; i < m; ++i) vals[i] = phi(pts[i]);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m && pts[j] - pts[i] < delta; ++j) {
        out.epsilon = std::max(out.epsilon, std::abs(vals[i] - vals[j]));
      }
      if (dom.is_circle()) {
        for (std::size_t j = m; j-- > i + 1 && pts[i] + 1.0 - pts[j] < delta;) {
          out.epsilon = std::max(out.epsilon, std::abs(vals[i] - vals[j]));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- covers

bool Cover::uniform() const {
  return std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return a.depth == atoms.front().depth; });
}

int Cover::min_depth() const {
  int d = std::numeric_limits<int>::max();
  for (const auto& a : atoms) d = std::min(d, a.depth);
  return atoms.empty() ? 0 : d;
}

int Cover::max_depth() const {
  int d = 0;
  for (const auto& a : atoms) d = std::max(d, a.depth);
  return d;
}

double weighted_sum(const Cover& cover, double alpha) {
  double s = 0.0;
  for (const auto& a : cover.atoms) s += std::exp(-alpha * a.depth + a.log_weight);
  return s;
}

bool covers(const SemigroupSystem& sys, const Cover& cover, const SetSample& z) {
  const bool circle = sys.domain().is_circle();
  for (double p : z.points) {
    bool hit = false;
    for (const auto& a : cover.atoms) {
      for (int s = circle ? -1 : 0; s <= (circle ? 1 : 0) && !hit; ++s) {
        hit = std::abs(p - (a.center + s)) < a.radius;
      }
      if (hit) break;
    }
    if (!hit) return false;
  }
  return true;
}

namespace {

bool all_single_piece(const SemigroupSystem& sys) {
  for (int i = 0; i < sys.k(); ++i) {
    if (!sys.generator(i).single_piece()) return false;
  }
  return true;
}

// Candidate arcs of depth n centred on the lattice, one per covered index
// range of `points` (the lightest candidate wins ties).
template <class WeightFn>
std::vector<Atom> build_candidates(const SemigroupSystem& sys, std::span<const double> lattice,
                                   std::span<const double> points, int n, double delta, WeightFn&& weight) {
  const bool circle = sys.domain().is_circle();
  const bool shared_radius = all_single_piece(sys);
  BallRadius common{};
  if (shared_radius) common = ball_radius(sys, lattice.front(), n, delta);

  std::vector<Atom> out;
  for (double c : lattice) {
    const BallRadius exact = shared_radius ? common : ball_radius(sys, c, n, delta);
    if (!exact.exact) continue;
    // Points at an exact tie with the boundary (routine on the Cantor lattice,
    // where radii equal cylinder lengths) are excluded by a relative margin
    // instead of by rounding, so mirrored covers decide ties the same way.
    BallRadius r = exact;
    r.radius *= 1.0 - 1e-9;
    double w = 0.0;
    bool have_weight = false;
    for (int s = circle ? -1 : 0; s <= (circle ? 1 : 0); ++s) {
      const double centre = c + s;
      const auto lo = std::partition_point(points.begin(), points.end(),
                                           [&](double p) { return p - centre <= -r.radius; });
      const auto hi = std::partition_point(lo, points.end(), [&](double p) { return p - centre < r.radius; });
      if (lo == hi) continue;
      if (!have_weight) {
        w = weight(c, r.radius);
        have_weight = true;
      }
      Atom a;
      a.center = c;
      a.shift = s;
      a.depth = n;
      a.radius = r.radius;
      a.log_weight = w;
      a.first = static_cast<std::size_t>(lo - points.begin());
      a.last = static_cast<std::size_t>(hi - points.begin()) - 1;
      out.push_back(a);
    }
  }
  std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) {
    return std::tie(a.first, a.last, a.log_weight, a.center, a.shift) <
           std::tie(b.first, b.last, b.log_weight, b.center, b.shift);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Atom& a, const Atom& b) { return a.first == b.first && a.last == b.last; }),
            out.end());
  return out;
}

// Exact minimum-cost cover of points 0..m-1 by index ranges. dp[j] is the
// cheapest cover of the first j points; the range covering point j-1 starts
// at some a <= j-1, and the rest only has to cover the first a points.
std::vector<std::size_t> dp_cover(std::size_t m, std::span<const Atom* const> atoms, std::span<const double> cost) {
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a]->first < atoms[b]->first; });

  using Entry = std::pair<double, std::size_t>;  // (dp value through this atom, atom index)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<double> dp(m + 1, 0.0);
  std::vector<std::size_t> back(m + 1, 0);
  std::size_t next = 0;
  for (std::size_t j = 1; j <= m; ++j) {
    while (next < order.size() && atoms[order[next]]->first == j - 1) {
      heap.push({dp[j - 1] + cost[order[next]], order[next]});
      ++next;
    }
    while (!heap.empty() && atoms[heap.top().second]->last < j - 1) heap.pop();
    if (heap.empty()) throw DomainError("cover infeasible: sample point " + std::to_string(j - 1) + " has no atom");
    dp[j] = heap.top().first;
    back[j] = heap.top().second;
  }
  std::vector<std::size_t> chosen;
  for (std::size_t j = m; j > 0; j = atoms[back[j]]->first) chosen.push_back(back[j]);
  std::reverse(chosen.begin(), chosen.end());
  return chosen;
}

// Ratio heuristic: repeatedly take the atom covering the most uncovered
// points per unit cost. Gains only shrink, so stale heap entries are
// re-scored lazily.
std::vector<std::size_t> greedy_cover(std::size_t m, std::span<const Atom* const> atoms,
                                      std::span<const double> cost) {
  std::vector<int> fenwick(m + 1, 0);
  auto add = [&](std::size_t i, int v) {
    for (++i; i <= m; i += i & (~i + 1)) fenwick[i] += v;
  };
  auto prefix = [&](std::size_t i) {  // count in [0, i)
    int s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += fenwick[i];
    return s;
  };
  for (std::size_t i = 0; i < m; ++i) add(i, 1);
  std::vector<std::size_t> next_uncovered(m + 1);
  std::iota(next_uncovered.begin(), next_uncovered.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (next_uncovered[i] != i) {
      next_uncovered[i] = next_uncovered[next_uncovered[i]];
      i = next_uncovered[i];
    }
    return i;
  };

  using Entry = std::tuple<double, std::size_t>;
  auto worse = [](const Entry& a, const Entry& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return std::get<1>(a) > std::get<1>(b);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    heap.push({static_cast<double>(atoms[i]->last - atoms[i]->first + 1) / cost[i], i});
  }
  std::vector<std::size_t> chosen;
  std::size_t remaining = m;
  while (remaining > 0) {
    if (heap.empty()) throw DomainError("cover infeasible: greedy cover ran out of atoms");
    auto [ratio, i] = heap.top();
    heap.pop();
    const int gain = prefix(atoms[i]->last + 1) - prefix(atoms[i]->first);
    if (gain == 0) continue;
    const double fresh = gain / cost[i];
    if (fresh < ratio && !heap.empty() && fresh < std::get<0>(heap.top())) {
      heap.push({fresh, i});
      continue;
    }
    chosen.push_back(i);
    for (std::size_t p = find(atoms[i]->first); p <= atoms[i]->last; p = find(p)) {
      add(p, -1);
      --remaining;
      next_uncovered[p] = p + 1;
    }
  }
  std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(atoms[a]->first, atoms[a]->last) < std::tie(atoms[b]->first, atoms[b]->last);
  });
  return chosen;
}

std::vector<std::size_t> solve_cover(Strategy strategy, std::size_t m, std::span<const Atom* const> atoms,
                                     std::span<const double> cost) {
  return strategy == Strategy::sweep ? dp_cover(m, atoms, cost) : greedy_cover(m, atoms, cost);
}

std::pair<double, double> potential_range(const SemigroupSystem& sys, int probes) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::vector<double> pts;
  for (const auto& phi : sys.potentials()) {
    if (auto c = phi.constant_value()) {
      lo = std::min(lo, *c);
      hi = std::max(hi, *c);
      continue;
    }
    if (pts.empty()) pts = sys.domain().probe_points(probes);
    for (double p : pts) {
      lo = std::min(lo, phi(p));
      hi = std::max(hi, phi(p));
    }
  }
  return {lo, hi};
}

}  // namespace

CoverProblem::CoverProblem(const SemigroupSystem& sys, const SetSample& z, double delta, CoverSettings settings)
    : sys_(sys), z_(z), delta_(delta), settings_(settings) {
  if (!(delta > 0.0)) throw InvalidInput("delta must be positive");
  if (z_.points.empty()) throw InvalidInput("sample must contain at least one point");
  if (z_.domain.kind() != sys_.domain().kind()) throw InvalidInput("sample and system domains differ");
  if (settings_.sup_probes < 0) throw InvalidInput("sup_probes must be nonnegative");
  lattice_ = sys_.domain().lattice(settings_.reference_resolution);
  if (settings_.variant == Variant::sup && settings_.sup_probes == 0) {
    epsilon_ = continuity_modulus(sys_, delta_, settings_.modulus_probes).epsilon;
  }
  auto unit = [](double, double) { return 0.0; };
  const auto ref = build_candidates(sys_, lattice_, lattice_, 0, delta_, unit);
  std::vector<const Atom*> ptrs;
  for (const auto& a : ref) ptrs.push_back(&a);
  const std::vector<double> ones(ref.size(), 1.0);
  theta_ = static_cast<double>(dp_cover(lattice_.size(), ptrs, ones).size());
}

double CoverProblem::log_weight_at(double center, int n, double radius) const {
  const double base = averaged_sum(sys_, center, n).value;
  if (settings_.variant == Variant::center) return base;
  if (settings_.sup_probes == 0) return base + n * epsilon_;
  double best = base;
  const auto& dom = sys_.domain();
  for (int i = 0; i < settings_.sup_probes; ++i) {
    const double y = dom.normalize(center + radius * (-1.0 + (2.0 * i + 1.0) / settings_.sup_probes));
    if (dom.contains(y)) best = std::max(best, averaged_sum(sys_, y, n).value);
  }
  return best;
}

const std::vector<Atom>& CoverProblem::candidates(int n) {
  if (n < 0) throw InvalidInput("negative cover depth");
  for (const auto& [depth, atoms] : cache_) {
    if (depth == n) return atoms;
  }
  const bool shared = all_constant(sys_.potentials()) && !(settings_.variant == Variant::sup && settings_.sup_probes > 0);
  double shared_weight = 0.0;
  if (shared) shared_weight = log_weight_at(lattice_.front(), n, 0.0);
  auto weight = [&](double c, double radius) { return shared ? shared_weight : log_weight_at(c, n, radius); };
  cache_.emplace_back(n, build_candidates(sys_, lattice_, z_.points, n, delta_, weight));
  return cache_.back().second;
}

Cover CoverProblem::uniform_cover(int n) {
  const int depth[] = {n};
  return mixed_cover(depth, 0.0);
}

Cover CoverProblem::mixed_cover(std::span<const int> depths, double alpha) {
  std::vector<const Atom*> pool;
  for (int n : depths) {
    for (const auto& a : candidates(n)) pool.push_back(&a);
  }
  double shift = -std::numeric_limits<double>::infinity();
  for (const Atom* a : pool) shift = std::max(shift, -alpha * a->depth + a->log_weight);
  std::vector<double> cost;
  cost.reserve(pool.size());
  for (const Atom* a : pool) cost.push_back(std::exp(-alpha * a->depth + a->log_weight - shift));

  Cover cover;
  cover.variant = settings_.variant;
  cover.strategy = settings_.strategy;
  cover.delta = delta_;
  for (std::size_t i : solve_cover(settings_.strategy, z_.points.size(), pool, cost)) cover.atoms.push_back(*pool[i]);
  return cover;
}

std::pair<double, double> CoverProblem::alpha_bracket() const {
  auto [lo, hi] = potential_range(sys_, settings_.modulus_probes);
  if (settings_.variant == Variant::sup) hi += epsilon_;
  const double count = 3.0 * static_cast<double>(lattice_.size()) + 1.0;
  return {lo - std::log(theta_) - 1.0, hi + std::log(count) + 1.0};
}

double critical_value(const Cover& cover, double theta) {
  if (cover.atoms.empty()) throw InvalidInput("empty cover");
  if (cover.min_depth() < 1) throw InvalidInput("critical value needs depth >= 1");
  if (cover.uniform()) {
    const int n = cover.atoms.front().depth;
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& a : cover.atoms) top = std::max(top, a.log_weight);
    double s = 0.0;
    for (const auto& a : cover.atoms) s += std::exp(a.log_weight - top);
    return (std::log(s) + top - std::log(theta)) / n;
  }
  // Sum over a fixed cover is strictly decreasing in alpha: bisect. At lo every
  // term exceeds e*theta, at hi the whole sum is below one.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& a : cover.atoms) {
    lo = std::min(lo, a.log_weight / a.depth);
    hi = std::max(hi, a.log_weight / a.depth);
  }
  lo -= std::log(std::max(theta, 1.0)) + 1.0;
  hi += std::log(static_cast<double>(cover.atoms.size())) + 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (weighted_sum(cover, mid) > theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double critical_alpha(CoverProblem& problem, std::span<const int> depths, double tol) {
  if (depths.empty()) throw InvalidInput("depth set must be nonempty");
  for (int n : depths) {
    if (n < 1) throw InvalidInput("critical alpha needs depths >= 1");
  }
  std::vector<const Atom*> pool;
  for (int n : depths) {
    for (const auto& a : problem.candidates(n)) pool.push_back(&a);
  }
  const std::size_t m = problem.sample().size();
  const double log_theta = std::log(problem.theta());
  std::vector<double> cost(pool.size());
  // log of the optimal cover sum at alpha, computed in shifted form
  auto log_sum = [&](double alpha) {
    double shift = -std::numeric_limits<double>::infinity();
    for (const Atom* a : pool) shift = std::max(shift, -alpha * a->depth + a->log_weight);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      cost[i] = std::exp(-alpha * pool[i]->depth + pool[i]->log_weight - shift);
    }
    double s = 0.0;
    for (std::size_t i : solve_cover(problem.settings().strategy, m, pool, cost)) s += cost[i];
    return std::log(s) + shift;
  };
  auto [lo, hi] = problem.alpha_bracket();
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (log_sum(mid) > log_theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

CapacityEstimate capacity_pressure(CoverProblem& problem, std::span<const int> depths, double tail_fraction) {
  if (depths.empty()) throw InvalidInput("depth schedule must be nonempty");
  if (!strictly_increasing(depths)) throw InvalidInput("depth schedule must be strictly increasing");
  CapacityEstimate out;
  out.delta = problem.delta();
  out.mesh = problem.sample().mesh;
  out.theta = problem.theta();
  out.variant = problem.settings().variant;
  out.strategy = problem.settings().strategy;
  for (int n : depths) {
    const Cover cover = problem.uniform_cover(n);
    DepthEstimate e;
    e.n = n;
    e.alpha_star = critical_value(cover, problem.theta());
    e.atom_count = cover.atoms.size();
    e.total_weight = weighted_sum(cover, 0.0);
    out.profile.push_back(e);
  }
  const std::size_t tail = tail_length(out.profile.size(), tail_fraction);
  out.tail_begin = out.profile.size() - tail;
  out.lower = std::numeric_limits<double>::infinity();
  out.upper = -out.lower;
  for (std::size_t i = out.tail_begin; i < out.profile.size(); ++i) {
    out.lower = std::min(out.lower, out.profile[i].alpha_star);
    out.upper = std::max(out.upper, out.profile[i].alpha_star);
  }
  return out;
}

PesinEstimate pesin_pressure(CoverProblem& problem, int n, int refinement_budget) {
  if (refinement_budget < 0) throw InvalidInput("refinement budget must be nonnegative");
  std::vector<int> depths;
  for (int d = n; d <= n + refinement_budget; ++d) depths.push_back(d);
  return pesin_pressure(problem, depths);
}

PesinEstimate pesin_pressure(CoverProblem& problem, std::span<const int> depths) {
  if (depths.empty()) throw InvalidInput("depth set must be nonempty");
  if (!strictly_increasing(depths)) throw InvalidInput("depth set must be strictly increasing");
  PesinEstimate out;
  out.value = critical_alpha(problem, depths);
  out.n = depths.front();
  out.max_depth = depths.back();
  out.delta = problem.delta();
  out.mesh = problem.sample().mesh;
  out.variant = problem.settings().variant;
  out.strategy = problem.settings().strategy;
  out.cover = problem.mixed_cover(depths, out.value);
  out.atom_count = out.cover.atoms.size();
  out.total_weight = weighted_sum(out.cover, out.value);
  out.refinements_accepted = static_cast<std::size_t>(std::count_if(
      out.cover.atoms.begin(), out.cover.atoms.end(), [&](const Atom& a) { return a.depth > out.n; }));
  return out;
}

std::vector<int> valid_depths(const SemigroupSystem& sys, const SetSample& z, double delta,
                              std::span<const int> depths, double resolution_factor) {
  const double beta = std::max(0.0, sys.max_log_factor());
  std::vector<int> out;
  for (int n : depths) {
    if (delta * std::exp(-n * beta) >= resolution_factor * z.mesh) out.push_back(n);
  }
  return out;
}

Cover map_cover(const Cover& cover, const std::function<double(double)>& g, CoverProblem& target) {
  Cover out = cover;
  const auto& dom = target.system().domain();
  for (auto& a : out.atoms) {
    a.center = dom.normalize(g(a.center));
    a.shift = 0;
    a.first = 0;
    a.last = 0;
  }
  for (auto& a : out.atoms) a.log_weight = target.log_weight_at(a.center, a.depth, a.radius);
  return out;
}

}  // namespace semipress
