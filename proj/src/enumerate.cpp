#include "refinery/enumerate.hpp"

namespace refinery {

size_t EnumerationPool::total() const {
  size_t n = 0;
  for (auto& level : by_size) n += level.size();
  return n;
}

std::vector<PoolEntry> EnumerationPool::all() const {
  std::vector<PoolEntry> out;
  for (auto& level : by_size) out.insert(out.end(), level.begin(), level.end());
  return out;
}

namespace {

struct IrClauses {
  const std::map<std::string, Clause>* forget_clauses = nullptr;
};

// Compositions of `total` into `parts` positive summands, lexicographic.
void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 0) {
    if (total == 0) emit(cur);
    return;
  }
  if (total < parts) return;
  for (int first = 1; first <= total - (parts - 1); ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, emit);
    cur.pop_back();
  }
}

EnumerationPool enumerate_code(const FunctorCode& c, int bound, const IrClauses& ir) {
  if (bound < 0) bound = 0;
  EnumerationPool pool;
  pool.bound = bound;
  pool.by_size.resize(bound + 1);

  for (int size = 1; size <= bound; ++size) {
    for (auto& ctor : c.constructors) {
      int m = static_cast<int>(ctor.rec_fields.size());
      if (m == 0 && size != 1) continue;
      if (m > 0 && size < m + 1) continue;

      // Which existentials are determined by a subterm's index.
      std::map<std::string, std::vector<int>> determined;  // exvar -> rec positions
      for (int k = 0; k < m; ++k) {
        const Expr& ie = ctor.rec_fields[k].index_expr;
        if (ie.kind() == ExprKind::Var) {
          for (auto& [n, _] : ctor.exvars)
            if (n == ie.str()) determined[n].push_back(k);
        }
      }

      // Free existentials and constant fields are enumerated; they must be
      // finite.
      struct Axis {
        std::string name;
        bool is_exvar;
        size_t slot;
        std::vector<Value> values;
      };
      std::vector<Axis> axes;
      for (size_t i = 0; i < ctor.exvars.size(); ++i) {
        auto& [n, d] = ctor.exvars[i];
        if (determined.count(n)) continue;
        if (!domain_is_finite(*d))
          throw InfiniteDomain("existential " + n + " of constructor " + ctor.name +
                               " has infinite domain " + d->show());
        axes.push_back({n, true, i, enumerate_domain(*d)});
      }
      for (size_t i = 0; i < ctor.const_fields.size(); ++i) {
        auto& [n, d] = ctor.const_fields[i];
        if (!domain_is_finite(*d))
          throw InfiniteDomain("field " + n + " of constructor " + ctor.name +
                               " has infinite domain " + d->show());
        axes.push_back({n, false, i, enumerate_domain(*d)});
      }
      bool dead_axis = false;
      for (auto& a : axes)
        if (a.values.empty()) dead_axis = true;
      if (dead_axis) continue;

      auto try_emit = [&](const std::vector<PoolEntry>& subs) {
        // Determined existentials from subterm indices.
        std::vector<Value> exvals(ctor.exvars.size());
        std::vector<bool> exset(ctor.exvars.size(), false);
        for (size_t i = 0; i < ctor.exvars.size(); ++i) {
          auto it = determined.find(ctor.exvars[i].first);
          if (it == determined.end()) continue;
          Value v = subs[it->second.front()].rt->index;
          for (int k : it->second)
            if (subs[k].rt->index != v) return;  // conflicting propagation
          if (!value_in_domain(v, ctor.exvars[i].second)) return;
          exvals[i] = v;
          exset[i] = true;
        }

        // Odometer over the free axes.
        std::vector<size_t> idx(axes.size(), 0);
        while (true) {
          std::vector<Value> consts(ctor.const_fields.size());
          for (size_t k = 0; k < axes.size(); ++k) {
            if (axes[k].is_exvar)
              exvals[axes[k].slot] = axes[k].values[idx[k]];
            else
              consts[axes[k].slot] = axes[k].values[idx[k]];
          }
          Env env;
          for (size_t i = 0; i < ctor.exvars.size(); ++i) env[ctor.exvars[i].first] = exvals[i];
          for (size_t i = 0; i < ctor.const_fields.size(); ++i)
            env[ctor.const_fields[i].first] = consts[i];
          for (int k = 0; k < m; ++k)
            if (subs[k].rt->forget)
              env[forget_env_key(ctor.rec_fields[k].name)] = *subs[k].rt->forget;

          bool viable = true;
          // Index constraints for non-propagated positions.
          for (int k = 0; k < m && viable; ++k) {
            const Expr& ie = ctor.rec_fields[k].index_expr;
            if (ie.kind() == ExprKind::Var && determined.count(ie.str())) continue;
            if (eval_expr(ie, env) != subs[k].rt->index) viable = false;
          }
          if (viable && ctor.guard && !eval_expr(*ctor.guard, env).as_bool()) viable = false;
          if (viable) {
            auto rt = std::make_shared<RefinedTerm>();
            rt->ctor = ctor.name;
            rt->exvars = exvals;
            rt->consts = consts;
            for (auto& s : subs) rt->subs.push_back(s.rt);
            rt->index = eval_expr(ctor.result_index, env);
            if (ir.forget_clauses) {
              Env fenv = env;
              for (int k = 0; k < m; ++k)
                fenv[ctor.rec_fields[k].name] = *subs[k].rt->forget;
              rt->forget = eval_expr(ir.forget_clauses->at(ctor.name).body, fenv);
            }
            std::vector<TermPtr> tsubs;
            for (auto& s : subs) tsubs.push_back(s.t);
            PoolEntry entry{rt, Term::make(ctor.name, exvals, consts, std::move(tsubs))};
            pool.by_size[size].push_back(std::move(entry));
          }

          size_t j = axes.size();
          bool done = axes.empty();
          while (j > 0) {
            --j;
            if (++idx[j] < axes[j].values.size()) break;
            idx[j] = 0;
            if (j == 0) done = true;
          }
          if (done) break;
        }
      };

      if (m == 0) {
        try_emit({});
        continue;
      }
      std::vector<int> cur;
      compositions(size - 1, m, cur, [&](const std::vector<int>& split) {
        // Odometer over subterm choices, rightmost fastest.
        std::vector<const std::vector<PoolEntry>*> pools;
        for (int k = 0; k < m; ++k) {
          pools.push_back(&pool.by_size[split[k]]);
          if (pools.back()->empty()) return;
        }
        std::vector<size_t> pick(m, 0);
        while (true) {
          std::vector<PoolEntry> subs;
          for (int k = 0; k < m; ++k) subs.push_back((*pools[k])[pick[k]]);
          try_emit(subs);
          int j = m;
          bool done = false;
          while (j > 0) {
            --j;
            if (++pick[j] < pools[j]->size()) break;
            pick[j] = 0;
            if (j == 0) done = true;
          }
          if (done) break;
        }
      });
    }
  }
  return pool;
}

}  // namespace

EnumerationPool enumerate_terms(const FunctorCode& c, int bound) {
  return enumerate_code(c, bound, {});
}

EnumerationPool enumerate_refined(const RefinedSpec& rs, int bound) {
  return enumerate_code(rs.code, bound, {});
}

EnumerationPool enumerate_refined(const RefinedIRSpec& irs, int bound) {
  IrClauses ir;
  ir.forget_clauses = &irs.forget_clauses;
  return enumerate_code(irs.data.code, bound, ir);
}

}  // namespace refinery
