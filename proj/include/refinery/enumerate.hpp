#pragma once

#include "refinery/refine.hpp"

namespace refinery {

/// One enumerated term, kept in both representations: the decorated tree with
/// cached indices (and forget values for IR codes) and the plain term sharing
/// its substructure.
struct PoolEntry {
  RefinedTermPtr rt;
  TermPtr t;
};

/// Per-size pools of enumerated terms; size = constructor count. Pools are
/// monotone in the bound: the pool at bound k is a prefix of the pool at k+1.
struct EnumerationPool {
  std::vector<std::vector<PoolEntry>> by_size;  // by_size[s], s in [1, bound]
  int bound = 0;

  size_t total() const;
  std::vector<PoolEntry> all() const;  // size-major, deterministic order
};

/// Bounded exhaustive enumeration. Existential variables whose recursive
/// index expression is exactly that variable are propagated from the chosen
/// subterm's index (never enumerated, so infinite index domains work); all
/// other existentials and all constant fields must have finite domains.
/// Throws InfiniteDomain naming the offending field otherwise.
EnumerationPool enumerate_terms(const FunctorCode& c, int bound);

/// Same machinery over a refined code; cached indices come out in rt->index.
EnumerationPool enumerate_refined(const RefinedSpec& rs, int bound);

/// IR enumeration: forget values are computed alongside into rt->forget.
EnumerationPool enumerate_refined(const RefinedIRSpec& irs, int bound);

}  // namespace refinery
