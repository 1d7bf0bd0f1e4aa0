#pragma once

#include "refinery/enumerate.hpp"

namespace refinery {

enum class VerifyMode { Total, Partial, Zygo };

/// Per-index classes of the global refinement oracle.
struct OracleClasses {
  struct Entry {
    TermPtr term;
    std::optional<Value> companion;  // fold delta (the d of a zygo), when any
  };
  std::map<Value, std::vector<Entry>> classes;
  size_t kept = 0;     // terms that received an index
  size_t dropped = 0;  // partial mode: terms whose totalized fold failed
};

/// Folds every enumerated term of c with `folded` (alpha, kappa-bar, or the
/// paired zygo algebra) and groups by index. Partial mode keeps only ok
/// results, indexing by the payload; zygo mode indexes by the second
/// projection and remembers the first. Over an already-indexed code the key
/// pairs the term's own index with the fold value. `workers` <= 0 selects the
/// serial reference path; any positive count gives identical classes.
OracleClasses global_oracle(const FunctorCode& c, const AlgebraSpec& folded, VerifyMode mode,
                            int bound, int workers = 0);

/// Serial / OpenMP fold of a whole pool; both paths produce identical output.
std::vector<Value> fold_pool(const FunctorCode& c, const AlgebraSpec& alg,
                             const std::vector<PoolEntry>& entries, int workers);

struct BijectionReport {
  struct Row {
    Value index;
    size_t count_refined = 0;
    size_t count_oracle = 0;
    bool match = false;
  };
  std::vector<Row> rows;
  std::vector<std::string> mismatches;  // smallest counterexamples, rendered
  bool pass = false;
  size_t refined_total = 0;
  size_t oracle_total = 0;

  std::string render() const;          // human-readable
  std::string render_machine() const;  // one record per index class
};

/// Thm 4.7 / 6.2 / 7.4 at a size bound: erase must restrict to a
/// size-preserving bijection between the refined enumeration and the oracle
/// class at every index; IR specs additionally need forget(rt) = fold delta.
BijectionReport check_refinement(const RefinedSpec& rs, const FunctorCode& c,
                                 const AlgebraSpec& alpha, int bound, int workers = 0);
BijectionReport check_refinement_partial(const RefinedSpec& rs, const FunctorCode& c,
                                         const AlgebraSpec& kappa, int bound, int workers = 0);
BijectionReport check_refinement_zygo(const RefinedIRSpec& irs, const FunctorCode& c,
                                      const ZygoPair& z, int bound, int workers = 0);

}  // namespace refinery
