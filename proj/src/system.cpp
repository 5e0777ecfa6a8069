#include "semipress/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semipress/errors.hpp"

namespace semipress {

namespace {

constexpr double kDomainTol = 1e-9;

bool cantor_contains(double x, int depth) {
  if (x < -kDomainTol || x > 1.0 + kDomainTol) return false;
  double tol = kDomainTol;
  for (int j = 0; j < depth; ++j) {
    if (x <= 1.0 / 3.0 + tol) {
      x *= 3.0;
    } else if (x >= 2.0 / 3.0 - tol) {
      x = 3.0 * x - 2.0;
    } else {
      return false;
    }
    tol *= 3.0;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------- Domain

Domain Domain::circle() { return Domain{}; }

Domain Domain::interval() {
  Domain d;
  d.kind_ = DomainKind::interval;
  return d;
}

Domain Domain::cantor(int depth) {
  if (depth < 1 || depth > 24) throw InvalidInput("cantor_depth must be in [1, 24]");
  Domain d;
  d.kind_ = DomainKind::cantor;
  d.cantor_depth_ = depth;
  return d;
}

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::circle:
      return "circle";
    case DomainKind::interval:
      return "interval";
    case DomainKind::cantor:
      return "cantor";
  }
  return "unknown";
}

bool Domain::contains(double x) const {
  if (!std::isfinite(x)) return false;
  switch (kind_) {
    case DomainKind::circle:
      return x >= 0.0 && x < 1.0;
    case DomainKind::interval:
      return x >= -kDomainTol && x <= 1.0 + kDomainTol;
    case DomainKind::cantor:
      return cantor_contains(x, cantor_depth_);
  }
  return false;
}

double Domain::distance(double x, double y) const {
  const double d = std::abs(x - y);
  if (kind_ != DomainKind::circle) return d;
  const double r = d - std::floor(d);
  return std::min(r, 1.0 - r);
}

double Domain::normalize(double x) const {
  if (kind_ != DomainKind::circle) return x;
  double r = x - std::floor(x);
  if (r >= 1.0) r = 0.0;
  return r;
}

std::vector<double> Domain::lattice(int resolution) const {
  std::vector<double> pts;
  if (kind_ == DomainKind::cantor) {
    std::vector<double> left{0.0};
    double scale = 1.0;
    for (int j = 1; j <= cantor_depth_; ++j) {
      scale /= 3.0;
      const std::size_t n = left.size();
      for (std::size_t i = 0; i < n; ++i) left.push_back(left[i] + 2.0 * scale);
    }
    pts.reserve(2 * left.size());
    for (double a : left) {
      pts.push_back(a);
      pts.push_back(a + scale);
    }
  } else {
    if (resolution < 1) throw InvalidInput("lattice resolution must be positive");
    const int count = kind_ == DomainKind::circle ? resolution : resolution + 1;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(static_cast<double>(i) / resolution);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<double> Domain::probe_points(int count) const {
  if (kind_ == DomainKind::cantor) {
    auto pts = lattice(0);
    if (static_cast<int>(pts.size()) <= count) return pts;
    std::vector<double> out;
    const double stride = static_cast<double>(pts.size()) / count;
    for (int i = 0; i < count; ++i) out.push_back(pts[static_cast<std::size_t>(i * stride)]);
    return out;
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back((i + 0.5) / count);
  return out;
}

// ---------------------------------------------------------------- maps

PiecewiseAffineMap PiecewiseAffineMap::circle_affine(double slope, double offset) {
  if (slope == 0.0 || std::round(slope) != slope) {
    throw InvalidInput("circle_affine slopes must be nonzero integers");
  }
  return PiecewiseAffineMap({{0.0, 1.0, slope, offset}}, true);
}

PiecewiseAffineMap::PiecewiseAffineMap(std::vector<AffinePiece> pieces, bool wrap)
    : pieces_(std::move(pieces)), wrap_(wrap) {
  if (pieces_.empty()) throw InvalidInput("map needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const AffinePiece& a, const AffinePiece& b) { return a.lo < b.lo; });
  if (pieces_.front().lo != 0.0 || pieces_.back().hi != 1.0) {
    throw InvalidInput("pieces must cover [0, 1]");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.lo < p.hi)) throw InvalidInput("empty map piece");
    if (p.slope == 0.0 || !std::isfinite(p.slope)) {
      throw InvalidInput("map slopes must be finite and nonzero (no critical points)");
    }
    if (i > 0) {
      if (pieces_[i - 1].hi != p.lo) throw InvalidInput("map pieces must be contiguous");
      breakpoints_.push_back(p.lo);
    }
  }
  if (wrap_ && pieces_.size() > 1) breakpoints_.insert(breakpoints_.begin(), 0.0);
}

const AffinePiece& PiecewiseAffineMap::piece_for(double x) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                             [](double v, const AffinePiece& p) { return v < p.lo; });
  if (it == pieces_.begin()) return pieces_.front();
  return *std::prev(it);
}

double PiecewiseAffineMap::operator()(double x) const {
  const auto& p = piece_for(x);
  return p.slope * x + p.offset;
}

double PiecewiseAffineMap::slope_at(double x) const { return piece_for(x).slope; }

double PiecewiseAffineMap::factor(double x) const { return std::abs(slope_at(x)); }

double PiecewiseAffineMap::min_factor() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : pieces_) m = std::min(m, std::abs(p.slope));
  return m;
}

double PiecewiseAffineMap::max_factor() const {
  double m = 0.0;
  for (const auto& p : pieces_) m = std::max(m, std::abs(p.slope));
  return m;
}

double PiecewiseAffineMap::distance_to_breakpoint(double x) const {
  double best = std::numeric_limits<double>::infinity();
  for (double b : breakpoints_) {
    double d = std::abs(x - b);
    if (wrap_) {
      d -= std::floor(d);
      d = std::min(d, 1.0 - d);
    }
    best = std::min(best, d);
  }
  return best;
}

// ---------------------------------------------------------------- potentials

Potential Potential::constant(double c, std::string label) {
  Potential p;
  p.constant_ = c;
  p.fn_ = [c](double) { return c; };
  p.label_ = std::move(label);
  return p;
}

Potential Potential::function(std::function<double(double)> f, std::string label) {
  Potential p;
  p.fn_ = std::move(f);
  p.label_ = std::move(label);
  return p;
}

Potential Potential::scaled(double t) const {
  if (constant_) {
    return constant(t * *constant_, label_);
  }
  auto f = fn_;
  return function([f, t](double x) { return t * f(x); }, label_);
}

Potential Potential::shifted(double c) const {
  if (constant_) {
    return constant(*constant_ + c, label_);
  }
  auto f = fn_;
  return function([f, c](double x) { return f(x) + c; }, label_);
}

Potential Potential::composed(std::function<double(double)> g) const {
  if (constant_) return *this;
  auto f = fn_;
  return function([f, g = std::move(g)](double x) { return f(g(x)); }, label_);
}

Potentials scaled(const Potentials& phi, double t) {
  Potentials out;
  out.reserve(phi.size());
  for (const auto& p : phi) out.push_back(p.scaled(t));
  return out;
}

Potentials shifted(const Potentials& phi, double c) {
  Potentials out;
  out.reserve(phi.size());
  for (const auto& p : phi) out.push_back(p.shifted(c));
  return out;
}

Potentials zero_potentials(int k) { return Potentials(static_cast<std::size_t>(k), Potential::constant(0.0)); }

Potentials constant_potentials(std::span<const double> values) {
  Potentials out;
  for (double v : values) out.push_back(Potential::constant(v));
  return out;
}

bool all_constant(const Potentials& phi) {
  return std::all_of(phi.begin(), phi.end(), [](const Potential& p) { return p.constant_value().has_value(); });
}

// ---------------------------------------------------------------- system

SemigroupSystem::SemigroupSystem(std::string name, Domain domain, std::vector<PiecewiseAffineMap> generators,
                                 std::optional<Potentials> potentials, std::uint64_t word_budget)
    : name_(std::move(name)),
      domain_(domain),
      generators_(std::move(generators)),
      word_budget_(word_budget) {
  if (generators_.empty()) throw InvalidInput("a system needs at least one generator");
  if (generators_.size() > 36) throw InvalidInput("at most 36 generators are supported");
  for (const auto& g : generators_) {
    if (g.wraps() != domain_.is_circle()) {
      throw InvalidInput("generator wrap mode does not match the domain");
    }
  }
  potentials_ = potentials ? std::move(*potentials) : log_factors();
  if (potentials_.size() != generators_.size()) {
    throw InvalidInput("potential count " + std::to_string(potentials_.size()) +
                       " does not match generator count " + std::to_string(generators_.size()));
  }
  if (word_budget_ == 0) throw InvalidInput("word budget must be positive");
}

Potentials SemigroupSystem::log_factors() const {
  Potentials out;
  for (const auto& g : generators_) {
    if (g.min_factor() == g.max_factor()) {
      out.push_back(Potential::constant(std::log(g.max_factor()), "log_factor"));
    } else {
      out.push_back(Potential::function([g](double x) { return std::log(g.factor(x)); }, "log_factor"));
    }
  }
  return out;
}

double SemigroupSystem::max_log_factor() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& g : generators_) m = std::max(m, std::log(g.max_factor()));
  return m;
}

double SemigroupSystem::min_log_factor() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& g : generators_) m = std::min(m, std::log(g.min_factor()));
  return m;
}

bool SemigroupSystem::constant_factors() const {
  return std::all_of(generators_.begin(), generators_.end(),
                     [](const PiecewiseAffineMap& g) { return g.single_piece(); });
}

SemigroupSystem SemigroupSystem::with_potentials(Potentials phi) const {
  return SemigroupSystem(name_, domain_, generators_, std::move(phi), word_budget_);
}

SemigroupSystem SemigroupSystem::with_budget(std::uint64_t budget) const {
  return SemigroupSystem(name_, domain_, generators_, potentials_, budget);
}

double apply_word(const SemigroupSystem& sys, const Word& w, double x) {
  if (w.alphabet() != sys.k()) throw InvalidInput("word alphabet does not match system");
  if (!sys.domain().contains(x)) throw DomainError("start point outside the domain");
  auto symbols = w.symbols();
  for (auto it = symbols.rbegin(); it != symbols.rend(); ++it) {
    x = sys.apply(*it, x);
    if (!sys.domain().contains(x)) {
      throw DomainError("orbit left the " + sys.domain().name() + " domain while applying " + w.str());
    }
  }
  return x;
}

// ---------------------------------------------------------------- orbit tree

OrbitTree::OrbitTree(double root, int k, int depth, std::vector<double> nodes)
    : k_(k), depth_(depth), nodes_(std::move(nodes)) {
  offsets_.push_back(0);
  std::size_t width = 1;
  for (int m = 0; m <= depth_; ++m) {
    offsets_.push_back(offsets_.back() + width);
    width *= static_cast<std::size_t>(k_);
  }
  if (nodes_.size() != offsets_.back() || nodes_.front() != root) {
    throw InvalidInput("orbit tree layout mismatch");
  }
}

std::span<const double> OrbitTree::level(int m) const {
  const auto lo = offsets_[static_cast<std::size_t>(m)];
  const auto hi = offsets_[static_cast<std::size_t>(m) + 1];
  return std::span<const double>(nodes_).subspan(lo, hi - lo);
}

OrbitTree build_orbit_tree(const SemigroupSystem& sys, double x, int n) {
  if (n < 0) throw InvalidInput("negative orbit depth");
  const int k = sys.k();
  std::uint64_t total = 0;
  for (int m = 0; m <= n; ++m) total += level_size(k, m, sys.word_budget());
  std::vector<double> nodes;
  nodes.reserve(total);
  nodes.push_back(x);
  std::size_t parent_begin = 0;
  std::size_t width = 1;
  for (int m = 0; m < n; ++m) {
    for (std::size_t j = 0; j < width; ++j) {
      const double p = nodes[parent_begin + j];
      for (int i = 0; i < k; ++i) nodes.push_back(sys.apply(i, p));
    }
    parent_begin += width;
    width *= static_cast<std::size_t>(k);
  }
  return OrbitTree(x, k, n, std::move(nodes));
}

// ---------------------------------------------------------------- conjugacy

SemigroupSystem conjugate_system(const SemigroupSystem& sys, const std::function<double(double)>& g,
                                 const std::function<double(double)>& g_inv, double tol, int probes) {
  const auto& dom = sys.domain();
  for (double x : dom.probe_points(probes)) {
    const double back = dom.normalize(g(g_inv(x)));
    if (dom.distance(back, x) > tol) {
      throw InvalidInput("g o g_inv is not the identity at x = " + std::to_string(x));
    }
    for (int i = 0; i < sys.k(); ++i) {
      const double lhs = dom.normalize(g(sys.apply(i, x)));
      const double rhs = sys.apply(i, dom.normalize(g(x)));
      const double defect = dom.distance(lhs, rhs);
      if (defect > tol) {
        throw InvalidInput("g does not commute with f_" + std::to_string(i) + " at x = " +
                           std::to_string(x) + " (defect " + std::to_string(defect) + ")");
      }
    }
  }
  Potentials phi;
  for (const auto& p : sys.potentials()) {
    phi.push_back(p.composed([g_inv, dom](double y) { return dom.normalize(g_inv(y)); }));
  }
  return sys.with_potentials(std::move(phi));
}

// ---------------------------------------------------------------- catalog

namespace catalog {

SemigroupSystem doubling_pair() {
  return SemigroupSystem("doubling_pair", Domain::circle(),
                         {PiecewiseAffineMap::circle_affine(2.0, 0.0), PiecewiseAffineMap::circle_affine(2.0, 0.5)});
}

SemigroupSystem cantor_k1(int depth) {
  PiecewiseAffineMap f({{0.0, 0.5, 3.0, 0.0}, {0.5, 1.0, 3.0, -2.0}}, false);
  return SemigroupSystem("cantor_k1", Domain::cantor(depth), {f});
}

SemigroupSystem heterogeneous_pair() {
  return SemigroupSystem("heterogeneous_pair", Domain::circle(),
                         {PiecewiseAffineMap::circle_affine(2.0, 0.0), PiecewiseAffineMap::circle_affine(3.0, 0.0)});
}

std::vector<std::string> names() { return {"doubling_pair", "cantor_k1", "heterogeneous_pair"}; }

SemigroupSystem by_name(const std::string& name) {
  if (name == "doubling_pair") return doubling_pair();
  if (name == "cantor_k1") return cantor_k1();
  if (name == "heterogeneous_pair") return heterogeneous_pair();
  throw InvalidInput("unknown built-in system '" + name + "'");
}

}  // namespace catalog

}  // namespace semipress
