#pragma once

// Linkage classes of a saturated set, i.e. the blocks of the generalized Schur algebra S(pi).

#include <vector>

#include "weylkit/weyl_modules.hpp"

namespace weylkit {

struct BlockPartition {
  /// The saturated set, ascending in the linear order.
  std::vector<Weight> weights;
  /// Each class ascending; classes ordered by their lowest member.
  std::vector<std::vector<Weight>> classes;

  /// Index into classes; throws std::out_of_range if mu is not in the set.
  std::size_t class_of(const Weight& mu) const;
  bool same_class(const Weight& a, const Weight& b) const { return class_of(a) == class_of(b); }
};

/// Blocks of S(pi) for pi = saturated_below(lam): mu and nu are linked when
/// L(nu) is a composition factor of Delta(mu), closed transitively.
BlockPartition blocks(const Weight& lam, const Workspace& ws);

/// Same for an arbitrary saturated set.
BlockPartition blocks(const std::vector<Weight>& saturated, const Workspace& ws);

}  // namespace weylkit
