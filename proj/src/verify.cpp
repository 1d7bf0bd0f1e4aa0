#include "refinery/verify.hpp"

#include <algorithm>
#include <functional>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace refinery {

std::vector<Value> fold_pool(const FunctorCode& c, const AlgebraSpec& alg,
                             const std::vector<PoolEntry>& entries, int workers) {
  std::vector<Value> out(entries.size());
  if (workers <= 0) {
    // Serial reference path, kept for testing and benchmarking.
    for (size_t i = 0; i < entries.size(); ++i) out[i] = fold(c, alg, *entries[i].t);
    return out;
  }
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers)
  for (long long i = 0; i < static_cast<long long>(entries.size()); ++i) {
    try {
      out[static_cast<size_t>(i)] = fold(c, alg, *entries[static_cast<size_t>(i)].t);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
#else
  for (size_t i = 0; i < entries.size(); ++i) out[i] = fold(c, alg, *entries[i].t);
#endif
  if (error) std::rethrow_exception(error);
  return out;
}

OracleClasses global_oracle(const FunctorCode& c, const AlgebraSpec& folded, VerifyMode mode,
                            int bound, int workers) {
  EnumerationPool pool = enumerate_terms(c, bound);
  std::vector<PoolEntry> entries = pool.all();
  std::vector<Value> folds = fold_pool(c, folded, entries, workers);

  OracleClasses out;
  for (size_t i = 0; i < entries.size(); ++i) {
    Value v = folds[i];
    std::optional<Value> companion;
    Value key = v;
    switch (mode) {
      case VerifyMode::Total:
        break;
      case VerifyMode::Partial:
        if (v.is_fail()) {
          ++out.dropped;
          continue;
        }
        key = v.payload();
        break;
      case VerifyMode::Zygo:
        companion = v.items().at(0);
        key = v.items().at(1);
        break;
    }
    if (c.indexed()) {
      // Refining an already-indexed type: the oracle key pairs the term's own
      // index with the fold value (dependent pair for a table carrier family,
      // plain pair for a constant one).
      Value own = entries[i].rt->index;
      key = folded.indexed ? Value::dep_pair(own, key) : Value::tuple({own, key});
    }
    out.classes[key].push_back({entries[i].t, companion});
    ++out.kept;
  }
  return out;
}

// ---- bijection checking ---------------------------------------------------------

namespace {

struct SortedTerms {
  // Terms sorted structurally; carries the source entry index.
  std::vector<std::pair<TermPtr, size_t>> items;
};

std::string describe(const Value& index, const Term& term, const char* side) {
  return std::string(side) + " @" + index.show() + ": " + show_term(term);
}

BijectionReport compare_classes(
    std::map<Value, std::vector<std::pair<TermPtr, const RefinedTerm*>>>& refined,
    OracleClasses& oracle) {
  BijectionReport report;
  std::set<Value> keys;
  for (auto& [k, _] : refined) keys.insert(k);
  for (auto& [k, _] : oracle.classes) keys.insert(k);

  auto term_less = [](const TermPtr& a, const TermPtr& b) { return term_compare(*a, *b) < 0; };

  for (auto& key : keys) {
    auto rit = refined.find(key);
    auto oit = oracle.classes.find(key);
    BijectionReport::Row row;
    row.index = key;
    row.count_refined = rit == refined.end() ? 0 : rit->second.size();
    row.count_oracle = oit == oracle.classes.end() ? 0 : oit->second.size();
    report.refined_total += row.count_refined;
    report.oracle_total += row.count_oracle;

    std::vector<TermPtr> erased, oracle_terms;
    if (rit != refined.end())
      for (auto& [t, _] : rit->second) erased.push_back(t);
    if (oit != oracle.classes.end())
      for (auto& e : oit->second) oracle_terms.push_back(e.term);
    std::sort(erased.begin(), erased.end(), term_less);
    std::sort(oracle_terms.begin(), oracle_terms.end(), term_less);

    row.match = erased.size() == oracle_terms.size();
    if (row.match) {
      for (size_t i = 0; i < erased.size(); ++i)
        if (!term_equal(*erased[i], *oracle_terms[i])) row.match = false;
      // erase must be injective on the class (no two refined terms sharing an
      // erasure).
      for (size_t i = 0; i + 1 < erased.size(); ++i)
        if (term_equal(*erased[i], *erased[i + 1])) row.match = false;
    }
    if (!row.match && report.mismatches.size() < 8) {
      // Smallest counterexample on the side that disagrees first.
      std::vector<TermPtr> only_refined, only_oracle;
      std::set_difference(erased.begin(), erased.end(), oracle_terms.begin(), oracle_terms.end(),
                          std::back_inserter(only_refined), term_less);
      std::set_difference(oracle_terms.begin(), oracle_terms.end(), erased.begin(), erased.end(),
                          std::back_inserter(only_oracle), term_less);
      auto smallest = [](std::vector<TermPtr>& v) {
        std::stable_sort(v.begin(), v.end(), [](const TermPtr& a, const TermPtr& b) {
          return term_size(*a) < term_size(*b);
        });
      };
      smallest(only_refined);
      smallest(only_oracle);
      if (!only_refined.empty())
        report.mismatches.push_back(describe(key, *only_refined.front(), "refined-only"));
      if (!only_oracle.empty())
        report.mismatches.push_back(describe(key, *only_oracle.front(), "oracle-only"));
      if (only_refined.empty() && only_oracle.empty())
        report.mismatches.push_back("erase is not injective at index " + key.show());
    }
    report.rows.push_back(std::move(row));
  }
  report.pass = true;
  for (auto& r : report.rows)
    if (!r.match) report.pass = false;
  return report;
}

std::map<Value, std::vector<std::pair<TermPtr, const RefinedTerm*>>> group_refined(
    const std::vector<PoolEntry>& entries, std::vector<TermPtr>& erased_storage,
    const std::function<TermPtr(const RefinedTerm&)>& erase_fn) {
  std::map<Value, std::vector<std::pair<TermPtr, const RefinedTerm*>>> out;
  for (auto& e : entries) {
    TermPtr t = erase_fn(*e.rt);
    // Erasure preserves the size measure by construction; guard it anyway.
    if (term_size(*t) != term_size(*e.rt))
      throw Error("erasure changed the term size of " + show_term(*e.rt));
    erased_storage.push_back(t);
    out[e.rt->index].push_back({t, e.rt.get()});
  }
  return out;
}

}  // namespace

BijectionReport check_refinement(const RefinedSpec& rs, const FunctorCode& c,
                                 const AlgebraSpec& alpha, int bound, int workers) {
  EnumerationPool pool = enumerate_refined(rs, bound);
  auto entries = pool.all();
  std::vector<TermPtr> storage;
  auto refined = group_refined(entries, storage, [&](const RefinedTerm& rt) { return erase(rs, rt); });
  OracleClasses oracle = global_oracle(c, alpha, VerifyMode::Total, bound, workers);
  return compare_classes(refined, oracle);
}

BijectionReport check_refinement_partial(const RefinedSpec& rs, const FunctorCode& c,
                                         const AlgebraSpec& kappa, int bound, int workers) {
  EnumerationPool pool = enumerate_refined(rs, bound);
  auto entries = pool.all();
  std::vector<TermPtr> storage;
  auto refined = group_refined(entries, storage, [&](const RefinedTerm& rt) { return erase(rs, rt); });
  AlgebraSpec bar = totalize(c, kappa);
  OracleClasses oracle = global_oracle(c, bar, VerifyMode::Partial, bound, workers);
  return compare_classes(refined, oracle);
}

BijectionReport check_refinement_zygo(const RefinedIRSpec& irs, const FunctorCode& c,
                                      const ZygoPair& z, int bound, int workers) {
  EnumerationPool pool = enumerate_refined(irs, bound);
  auto entries = pool.all();
  std::vector<TermPtr> storage;
  auto refined =
      group_refined(entries, storage, [&](const RefinedTerm& rt) { return erase(irs, rt); });
  AlgebraSpec paired = pair_algebra(c, z);
  OracleClasses oracle = global_oracle(c, paired, VerifyMode::Zygo, bound, workers);
  BijectionReport report = compare_classes(refined, oracle);

  // Forget cross-check: forget(rt) must equal the recorded fold delta of the
  // erased term.
  for (auto& [key, items] : refined) {
    auto oit = oracle.classes.find(key);
    if (oit == oracle.classes.end()) continue;
    for (auto& [t, rt] : items) {
      for (auto& entry : oit->second) {
        if (!term_equal(*entry.term, *t)) continue;
        if (!rt->forget || !entry.companion || *rt->forget != *entry.companion) {
          report.pass = false;
          report.mismatches.push_back("forget mismatch at index " + key.show() + ": " +
                                      show_term(*t));
        }
        break;
      }
    }
  }
  return report;
}

std::string BijectionReport::render() const {
  std::string out;
  for (auto& r : rows)
    out += "index " + r.index.show() + ": refined " + std::to_string(r.count_refined) +
           ", oracle " + std::to_string(r.count_oracle) + (r.match ? " ok" : " MISMATCH") + "\n";
  for (auto& m : mismatches) out += "counterexample: " + m + "\n";
  out += pass ? "PASS" : "FAIL";
  out += " (" + std::to_string(refined_total) + " refined terms, " +
         std::to_string(oracle_total) + " oracle terms, " + std::to_string(rows.size()) +
         " index classes)\n";
  return out;
}

std::string BijectionReport::render_machine() const {
  std::string out;
  for (auto& r : rows)
    out += r.index.show() + "\t" + std::to_string(r.count_refined) + "\t" +
           std::to_string(r.count_oracle) + "\t" + (r.match ? "ok" : "mismatch") + "\n";
  return out;
}

}  // namespace refinery
