#pragma once

#include <vector>

#include "refinery/algebra.hpp"

namespace refinery {

// Built-in miniature codes mirroring the shipped .rfn corpus. Constant-field
// domains are restricted to small finite sets so layer enumeration and
// bounded term enumeration stay at desk scale.

CodePtr sample_list_code();   // List = Nil | Cons(b: enum{a,b}, x: rec)
CodePtr sample_listq_code();  // ListQ = Nil | Cons(q: int[1..2], x: rec)
CodePtr sample_tree_code();   // Tree = Leaf(z: int[0..1]) | Node(l: rec, r: rec)
CodePtr sample_nat_code();    // Nat = zero | succ(x: rec)
CodePtr sample_ctree_code();  // CTree = Leaf | Br(c: enum{R,B}, l: rec, r: rec)
CodePtr sample_exp_code();    // Exp = IntConst | BoolConst | Add | If
CodePtr sample_wtexp_code();  // WTExp over Ty = enum{int, bool}

AlgebraSpec sample_lengthalg();   // List -> int
AlgebraSpec sample_sum_alg();     // Tree -> int
AlgebraSpec sample_natval();      // Nat -> int
ZygoPair sample_fact_zygo();      // gamma fact with delta natval
AlgebraSpec sample_tyinfer();     // partial, Exp -> Ty
AlgebraSpec sample_checkrb();     // partial, CTree -> (Colour, int)
AlgebraSpec sample_sumlength();   // ListQ -> (rational, int)
ZygoPair sample_avg_zygo();       // gamma avg with delta sumlength
AlgebraSpec sample_evalalg();     // indexed, WTExp -> family Ty {int -> int, bool -> bool}

DomainPtr sample_ty_domain();

/// Shapes used by the randomized lemma suite.
std::vector<std::pair<std::string, CodePtr>> sample_lemma_shapes();

}  // namespace refinery
