#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semipress/system.hpp"

namespace semipress {

/// Finite surrogate for a subset Z: sorted points plus a covering guarantee
/// (every point of the intended set lies within `mesh` of some sample point).
struct SetSample {
  Domain domain;
  std::vector<double> points;
  double mesh = 0.0;
  std::string descriptor;

  /// i/R on the circle (i < R) or on the interval (i <= R); mesh 1/(2R).
  static SetSample grid(const Domain& domain, int resolution);
  /// Left endpoints of the 2^depth middle-third cylinders; mesh 3^-depth.
  static SetSample cantor(const Domain& domain, int depth);
  static SetSample explicit_points(const Domain& domain, std::vector<double> points, double mesh,
                                   std::string descriptor = "explicit");

  std::size_t size() const { return points.size(); }
  /// Union of both samples; the mesh is the larger of the two.
  SetSample merged(const SetSample& other) const;
  SetSample mapped(const std::function<double(double)>& g, std::string descriptor) const;
};

enum class Variant { center, sup };
enum class Strategy { sweep, greedy_weight };

std::string to_string(Variant v);
std::string to_string(Strategy s);
Variant parse_variant(const std::string& s);
Strategy parse_strategy(const std::string& s);

struct CoverSettings {
  /// Lattice resolution for atom centres on the circle and interval.
  int reference_resolution = 16384;
  Variant variant = Variant::center;
  Strategy strategy = Strategy::sweep;
  /// Sup variant: 0 bounds the in-ball sup by centre value + n*eps(delta);
  /// p > 0 takes the max of A_n over p equally spaced points of the arc.
  int sup_probes = 0;
  /// Probe count for the continuity modulus eps(delta).
  int modulus_probes = 2048;
};

struct ContinuityModulus {
  double delta = 0.0;
  double epsilon = 0.0;
};

/// eps(delta) = max_i sup |phi_i(x) - phi_i(y)| over probe pairs with d(x, y) < delta.
ContinuityModulus continuity_modulus(const SemigroupSystem& sys, double delta, int probes = 2048);

/// Bowen ball atom (center - radius, center + radius). On the circle the arc
/// is laid out on the line at center + shift, shift in {-1, 0, 1}; the atom
/// covers sample indices [first, last] of the problem it was built for.
struct Atom {
  double center = 0.0;
  int shift = 0;
  int depth = 0;
  double radius = 0.0;
  double log_weight = 0.0;  // A_n(center), plus the sup correction when requested
  std::size_t first = 0;
  std::size_t last = 0;
};

struct Cover {
  std::vector<Atom> atoms;
  Variant variant = Variant::center;
  Strategy strategy = Strategy::sweep;
  double delta = 0.0;

  bool uniform() const;
  int min_depth() const;
  int max_depth() const;
};

/// sum over atoms of exp(-alpha*n + log_weight).
double weighted_sum(const Cover& cover, double alpha);

/// True iff every sample point lies in some atom (checked by distance, not by
/// the stored index ranges).
bool covers(const SemigroupSystem& sys, const Cover& cover, const SetSample& z);

/// Candidate table and reference count for one (system, Z, delta).
class CoverProblem {
 public:
  CoverProblem(const SemigroupSystem& sys, const SetSample& z, double delta, CoverSettings settings = {});

  const SemigroupSystem& system() const { return sys_; }
  const SetSample& sample() const { return z_; }
  double delta() const { return delta_; }
  const CoverSettings& settings() const { return settings_; }
  /// Depth-0 cover count of the domain's reference lattice. Critical values
  /// are located where the cover sum crosses this count.
  double theta() const { return theta_; }
  double epsilon() const { return epsilon_; }

  /// Candidate atoms at depth n (one per distinct covered index range).
  const std::vector<Atom>& candidates(int n);

  /// Cover at uniform depth n minimizing the alpha = 0 sum.
  Cover uniform_cover(int n);
  /// Cover mixing the given depths, minimizing the sum at `alpha`.
  Cover mixed_cover(std::span<const int> depths, double alpha);

  /// Z-independent interval guaranteed to contain every critical value.
  std::pair<double, double> alpha_bracket() const;

  /// Weight rule of this problem for an atom of depth n at `center`.
  double log_weight_at(double center, int n, double radius) const;

 private:
  SemigroupSystem sys_;
  SetSample z_;
  double delta_;
  CoverSettings settings_;
  std::vector<double> lattice_;
  double theta_ = 1.0;
  double epsilon_ = 0.0;
  std::vector<std::pair<int, std::vector<Atom>>> cache_;
};

/// Critical value of a fixed cover: where its weighted sum equals theta.
/// Uniform depth N has the closed form alpha* = (1/N) log(Q_N / theta).
double critical_value(const Cover& cover, double theta);

/// Critical alpha of a mixed-depth sum: the point where the optimal mixed
/// cover sum crosses theta, found by bisection on a fixed bracket.
double critical_alpha(CoverProblem& problem, std::span<const int> depths, double tol = 1e-12);

struct DepthEstimate {
  int n = 0;
  double alpha_star = 0.0;
  std::size_t atom_count = 0;
  double total_weight = 0.0;  // Q_N, the alpha = 0 sum
};

struct CapacityEstimate {
  double delta = 0.0;
  double mesh = 0.0;
  double theta = 0.0;
  Variant variant = Variant::center;
  Strategy strategy = Strategy::sweep;
  std::vector<DepthEstimate> profile;
  std::size_t tail_begin = 0;
  double lower = 0.0;  // min over the schedule tail
  double upper = 0.0;  // max over the schedule tail
};

CapacityEstimate capacity_pressure(CoverProblem& problem, std::span<const int> depths,
                                   double tail_fraction = 0.25);

struct PesinEstimate {
  double value = 0.0;
  int n = 0;
  int max_depth = 0;
  double delta = 0.0;
  double mesh = 0.0;
  Variant variant = Variant::center;
  Strategy strategy = Strategy::sweep;
  std::size_t atom_count = 0;
  double total_weight = 0.0;  // sum at the critical alpha
  std::size_t refinements_accepted = 0;
  Cover cover;
};

/// Variable-depth estimate over depths N..N+refinement_budget.
PesinEstimate pesin_pressure(CoverProblem& problem, int n, int refinement_budget);
/// Same over an explicit depth set (smallest entry plays the role of N).
PesinEstimate pesin_pressure(CoverProblem& problem, std::span<const int> depths);

/// Depths whose smallest possible atom radius delta*exp(-N*beta) stays at
/// least `resolution_factor` sample meshes, with beta the largest log factor.
std::vector<int> valid_depths(const SemigroupSystem& sys, const SetSample& z, double delta,
                              std::span<const int> depths, double resolution_factor = 8.0);

/// Atoms moved by an isometry g that commutes with the generators; log
/// weights are recomputed for `target` (typically the conjugated system).
Cover map_cover(const Cover& cover, const std::function<double(double)>& g, CoverProblem& target);

}  // namespace semipress
