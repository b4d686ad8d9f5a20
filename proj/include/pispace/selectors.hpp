#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pispace/report.hpp"
#include "pispace/scheme.hpp"
#include "pispace/space.hpp"

namespace pispace {

/// A locally constant surjection f from the Baire space onto a finite space:
/// f(p) is looked up from p↾depth, with stems missing from the table sent to
/// the default point.
class PrefixMap {
 public:
  using Point = std::size_t;

  /// Throws ValidationError for stems of the wrong length, unknown points, or
  /// a map that misses a point.
  PrefixMap(std::shared_ptr<const FiniteSpaceModel> target, std::size_t depth,
            std::map<FinSeq, Point> table, Point fallback);

  const FiniteSpaceModel& target() const { return *target_; }
  const std::shared_ptr<const FiniteSpaceModel>& target_ptr() const { return target_; }
  std::size_t depth() const { return depth_; }
  const std::map<FinSeq, Point>& table() const { return table_; }
  Point fallback() const { return fallback_; }

  /// f on any stem of length >= depth.
  Point resolve(const FinSeq& stem) const;
  Point operator()(const BranchRule& p) const { return resolve(restrict(p, depth_)); }

  /// f[S_a].
  PointSet image(const FinSeq& a) const;
  /// f[f⁻¹[u] ∩ S_a], computed through the stem classes of the preimage.
  PointSet image_of_preimage(PointSet u, const FinSeq& a) const;

  /// {"depth", "entries": [{"stem", "point"}], "default", "points"}; points
  /// are written as labels.
  nlohmann::json to_json() const;
  /// With no target given, the target is the discrete space on "points".
  static PrefixMap from_json(const nlohmann::json& j,
                             std::shared_ptr<const FiniteSpaceModel> target = nullptr);

 private:
  std::shared_ptr<const FiniteSpaceModel> target_;
  std::size_t depth_;
  std::map<FinSeq, Point> table_;
  Point fallback_;
};

/// Visits every surjective PrefixMap onto the discrete space {0..k−1},
/// 1 <= k <= max_points, depth <= max_depth, whose table is a partial map
/// from stems over {0..alphabet−1}.
void for_each_prefix_map(std::size_t max_points, std::size_t max_depth, Nat alphabet,
                         const std::function<void(const PrefixMap&)>& visit);

/// Named maps used by the probes and the CLI.
std::vector<std::pair<std::string, PrefixMap>> preset_maps();

/// a ↦ f[S_a].
Scheme<FiniteSpaceModel> pushforward_scheme(const PrefixMap& f);

/// f[S_a] = V_a at every window node.
Report selector_identity_check(const PrefixMap& f, const Scheme<FiniteSpaceModel>& v,
                               const Window& w);

/// f[f⁻¹[u] ∩ S_a] = u ∩ f[S_a].
Report image_identity_check(const PrefixMap& f, PointSet u, const FinSeq& a);

/// f⁻¹[u] ∩ S_a.
struct SigmaBasic {
  PointSet u;
  FinSeq a;
  friend bool operator==(const SigmaBasic&, const SigmaBasic&) = default;
};

bool is_empty(const PrefixMap& f, const SigmaBasic& b);

/// The intersection of two basics, or nullopt when the stems are incomparable.
std::optional<SigmaBasic> sigma_basic_intersect(const SigmaBasic& b1, const SigmaBasic& b2);

/// First c = a⌢finseq(i), i < budget, with f[S_c] ⊆ u. Throws EmptySetError
/// for an empty basic.
std::optional<FinSeq> pi_space_probe(const PrefixMap& f, const SigmaBasic& b, Nat budget);

/// Stem-level fiber density: for every window node a and x ∈ f[S_a], some
/// a⌢finseq(i), i < budget, resolves to x.
Report fiber_density_check(const PrefixMap& f, const Window& w, Nat budget);

/// p ↦ the point of the fruit of p, read at depth `horizon`. The returned
/// function throws StrictnessError when that fruit is not a singleton.
std::function<std::size_t(const BranchRule&)> trivial_selector(Scheme<FiniteSpaceModel> v,
                                                               std::size_t horizon);

}  // namespace pispace
