#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semipress/word.hpp"

namespace semipress {

enum class DomainKind { circle, interval, cantor };

/// One-dimensional ambient space: the circle [0,1) with the mod-1 metric, the
/// interval [0,1], or the middle-third Cantor set inside [0,1] (Euclidean metric).
class Domain {
 public:
  static Domain circle();
  static Domain interval();
  static Domain cantor(int depth);

  DomainKind kind() const { return kind_; }
  bool is_circle() const { return kind_ == DomainKind::circle; }
  int cantor_depth() const { return cantor_depth_; }
  std::string name() const;

  /// Membership with absolute tolerance 1e-9 (Cantor: ternary test to cantor_depth).
  bool contains(double x) const;
  double distance(double x, double y) const;
  /// Circle: wraps into [0,1). Other domains: identity.
  double normalize(double x) const;

  /// Fixed lattice of the domain used for atom centres and reference covers.
  /// Circle: i/R (i < R); interval: i/R (i <= R); Cantor: both endpoints of
  /// every depth-`cantor_depth` cylinder (resolution ignored).
  std::vector<double> lattice(int resolution) const;
  /// Points used by commutation checks and continuity probes.
  std::vector<double> probe_points(int count) const;

 private:
  DomainKind kind_ = DomainKind::circle;
  int cantor_depth_ = 0;
};

/// x in [lo, hi) maps to slope*x + offset.
struct AffinePiece {
  double lo;
  double hi;
  double slope;
  double offset;
};

/// Closed-form piecewise-affine generator. On the circle the output is
/// reduced mod 1. Points outside [0,1] use the nearest end piece, so
/// compositions can be continued affinely off the domain.
class PiecewiseAffineMap {
 public:
  /// x -> slope*x + offset (mod 1); slope must be a nonzero integer.
  static PiecewiseAffineMap circle_affine(double slope, double offset);

  PiecewiseAffineMap(std::vector<AffinePiece> pieces, bool wrap);

  double operator()(double x) const;
  double slope_at(double x) const;
  /// Conformal factor a(x): the absolute slope.
  double factor(double x) const;
  double min_factor() const;
  double max_factor() const;
  bool single_piece() const { return pieces_.size() == 1; }
  bool wraps() const { return wrap_; }
  std::span<const AffinePiece> pieces() const { return pieces_; }
  /// Interior piece boundaries (and the seam at 0 for multi-piece circle maps).
  std::span<const double> breakpoints() const { return breakpoints_; }
  /// Distance from x to the nearest breakpoint, +inf when there is none.
  double distance_to_breakpoint(double x) const;

 private:
  const AffinePiece& piece_for(double x) const;

  std::vector<AffinePiece> pieces_;
  std::vector<double> breakpoints_;
  bool wrap_;
};

/// Real-valued potential phi_i. Constant potentials are tagged so sums over
/// words can be taken in closed form.
class Potential {
 public:
  static Potential constant(double c, std::string label = "constant");
  static Potential function(std::function<double(double)> f, std::string label);

  double operator()(double x) const { return constant_ ? *constant_ : fn_(x); }
  std::optional<double> constant_value() const { return constant_; }
  const std::string& label() const { return label_; }

  Potential scaled(double t) const;
  Potential shifted(double c) const;
  /// x -> phi(g(x)).
  Potential composed(std::function<double(double)> g) const;

 private:
  std::function<double(double)> fn_;
  std::optional<double> constant_;
  std::string label_;
};

using Potentials = std::vector<Potential>;

Potentials scaled(const Potentials& phi, double t);
Potentials shifted(const Potentials& phi, double c);
Potentials zero_potentials(int k);
Potentials constant_potentials(std::span<const double> values);
bool all_constant(const Potentials& phi);

/// k generators on a 1-D compact space together with potentials Phi.
/// The generator set G_1 implicitly contains the identity.
class SemigroupSystem {
 public:
  SemigroupSystem(std::string name, Domain domain, std::vector<PiecewiseAffineMap> generators,
                  std::optional<Potentials> potentials = std::nullopt,
                  std::uint64_t word_budget = kDefaultWordBudget);

  const std::string& name() const { return name_; }
  int k() const { return static_cast<int>(generators_.size()); }
  const Domain& domain() const { return domain_; }
  const PiecewiseAffineMap& generator(int i) const { return generators_[static_cast<std::size_t>(i)]; }
  const Potentials& potentials() const { return potentials_; }
  std::uint64_t word_budget() const { return word_budget_; }

  double apply(int i, double x) const { return domain_.normalize(generator(i)(x)); }
  double distance(double x, double y) const { return domain_.distance(x, y); }

  /// Phi = {log a_0, ..., log a_{k-1}}.
  Potentials log_factors() const;
  double max_log_factor() const;
  double min_log_factor() const;
  /// True when every generator is a single affine piece (constant factor).
  bool constant_factors() const;

  SemigroupSystem with_potentials(Potentials phi) const;
  SemigroupSystem with_budget(std::uint64_t budget) const;

 private:
  std::string name_;
  Domain domain_;
  std::vector<PiecewiseAffineMap> generators_;
  Potentials potentials_;
  std::uint64_t word_budget_;
};

/// f_w(x) with f_w = f_{i_1} o ... o f_{i_n} (the last symbol acts first).
/// Throws DomainError if an intermediate point leaves a subset domain.
double apply_word(const SemigroupSystem& sys, const Word& w, double x);

/// Every point f_u(x) for words u of length <= n, where the word u = i_1..i_m
/// labels the orbit f_{i_m} o ... o f_{i_1}(x) (first symbol acts first).
/// Stored level-major: node (m, j) is the word with lexicographic index j.
class OrbitTree {
 public:
  OrbitTree(double root, int k, int depth, std::vector<double> nodes);

  double root() const { return nodes_.front(); }
  int depth() const { return depth_; }
  int alphabet() const { return k_; }
  std::span<const double> level(int m) const;
  double node(int m, std::uint64_t index) const { return level(m)[index]; }

 private:
  int k_;
  int depth_;
  std::vector<double> nodes_;
  std::vector<std::size_t> offsets_;
};

OrbitTree build_orbit_tree(const SemigroupSystem& sys, double x, int n);

/// Returns sys with potentials phi_i o g_inv after checking, on the domain's
/// probe points, that g o g_inv = id and g o f_i = f_i o g within `tol`.
SemigroupSystem conjugate_system(const SemigroupSystem& sys, const std::function<double(double)>& g,
                                 const std::function<double(double)>& g_inv, double tol = 1e-9,
                                 int probes = 10000);

namespace catalog {

/// f_0 = 2x, f_1 = 2x + 1/2 (mod 1) on the circle.
SemigroupSystem doubling_pair();
/// k = 1, f = 3x on [0,1/2), 3x - 2 on [1/2,1], restricted to the Cantor set.
SemigroupSystem cantor_k1(int depth = 12);
/// f_0 = 2x, f_1 = 3x (mod 1) on the circle.
SemigroupSystem heterogeneous_pair();

std::vector<std::string> names();
SemigroupSystem by_name(const std::string& name);

}  // namespace catalog

}  // namespace semipress
