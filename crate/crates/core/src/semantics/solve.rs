//! Structure-directed witness proposals.
//!
//! Given a Δ₀ matrix and a set of unknown (target) variables, this walks the
//! conjunct structure looking for defining shapes from
//! [`crate::syntax::stdform`] — equations, memberships, pair and union
//! characterizations, separation sets, function application — and propagates
//! values until every target is assigned. Every proposal is later validated
//! by full evaluation in the search loop, so the solver only has to be
//! sound about *candidates*, never about truth.

use super::{eval_delta0, term_value, Env, Oracle};
use crate::hfs::HFSet;
use crate::syntax::stdform::{self, conjuncts, DefPattern};
use crate::syntax::{Formula, FormulaClass, Term};

/// Caps keeping degenerate propagation from exploding.
const MAX_ASSIGNMENTS: usize = 256;
const MAX_CANDIDATES_PER_TARGET: usize = 64;

/// Proposes assignments for `targets` that plausibly satisfy `matrix` under
/// `env`. Each returned vector lists values in target order. Proposals are
/// deduplicated and sorted by the packed canonical order.
pub fn solve_targets(
    matrix: &Formula,
    env: &Env,
    targets: &[String],
    oracle: &Oracle,
) -> Vec<Vec<HFSet>> {
    let mut out: Vec<Vec<HFSet>> = Vec::new();
    for branch in disjuncts(matrix) {
        solve_branch(branch, env, targets, oracle, &mut out);
        if out.len() > MAX_ASSIGNMENTS {
            break;
        }
    }
    // validate, dedupe, canonical order
    let mut ok: Vec<Vec<HFSet>> = Vec::new();
    for sol in out {
        let mut env2 = env.clone();
        for (t, v) in targets.iter().zip(sol.iter()) {
            env2.insert(t.clone(), v.clone());
        }
        if eval_delta0(matrix, &env2, oracle).unwrap_or(false) {
            ok.push(sol);
        }
    }
    ok.sort_by_key(|sol| HFSet::tuple(sol));
    ok.dedup();
    ok
}

fn disjuncts(phi: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    fn go<'a>(phi: &'a Formula, out: &mut Vec<&'a Formula>) {
        if let Formula::Or(a, b) = phi {
            go(a, out);
            go(b, out);
        } else {
            out.push(phi);
        }
    }
    go(phi, &mut out);
    out
}

fn solve_branch(
    branch: &Formula,
    env: &Env,
    targets: &[String],
    oracle: &Oracle,
    out: &mut Vec<Vec<HFSet>>,
) {
    let cs = conjuncts(branch);
    // worklist of partial assignments
    let mut partials: Vec<Env> = vec![Env::new()];
    let mut progress = true;
    while progress {
        progress = false;
        let unresolved: Vec<&String> = targets
            .iter()
            .filter(|t| partials.iter().any(|p| !p.contains_key(*t)))
            .collect();
        if unresolved.is_empty() {
            break;
        }
        for target in unresolved {
            let mut next: Vec<Env> = Vec::new();
            let mut advanced = false;
            for partial in &partials {
                if partial.contains_key(target) {
                    next.push(partial.clone());
                    continue;
                }
                let mut merged = env.clone();
                merged.extend(partial.clone());
                let cands = candidates_for(&cs, target, &merged, oracle);
                if cands.is_empty() {
                    next.push(partial.clone());
                } else {
                    advanced = true;
                    for c in cands.into_iter().take(MAX_CANDIDATES_PER_TARGET) {
                        let mut p2 = partial.clone();
                        p2.insert(target.clone(), c);
                        next.push(p2);
                        if next.len() > MAX_ASSIGNMENTS {
                            break;
                        }
                    }
                }
            }
            partials = next;
            partials.truncate(MAX_ASSIGNMENTS);
            if advanced {
                progress = true;
            }
        }
    }
    // fill any still-unassigned targets with small fallbacks
    let fallback: Vec<HFSet> = (0..8u64).map(HFSet::from_code).collect();
    for partial in partials {
        let mut sols: Vec<Env> = vec![partial];
        for target in targets {
            if sols.iter().all(|s| s.contains_key(target)) {
                continue;
            }
            let mut next = Vec::new();
            for s in &sols {
                if s.contains_key(target) {
                    next.push(s.clone());
                } else {
                    for f in &fallback {
                        let mut s2 = s.clone();
                        s2.insert(target.clone(), f.clone());
                        next.push(s2);
                    }
                }
            }
            sols = next;
            sols.truncate(MAX_ASSIGNMENTS);
        }
        for s in sols {
            out.push(targets.iter().map(|t| s[t].clone()).collect());
            if out.len() > MAX_ASSIGNMENTS {
                return;
            }
        }
    }
}

/// Candidate values for one target, scanning all conjuncts.
fn candidates_for(
    cs: &[&Formula],
    target: &str,
    env: &Env,
    oracle: &Oracle,
) -> Vec<HFSet> {
    let mut cands: Vec<HFSet> = Vec::new();
    // collect "t ∈ target" constraints into one minimal container first
    let mut must_contain: Vec<HFSet> = Vec::new();
    for c in cs {
        if let Formula::Mem(a, b) = c {
            if matches!(b, Term::Free(n) if n == target) {
                if let Ok(v) = term_value(a, env, &[]) {
                    must_contain.push(v);
                }
            }
        }
    }
    if !must_contain.is_empty() {
        cands.push(HFSet::from_vec(must_contain));
    }
    for c in cs {
        conjunct_candidates(c, target, env, oracle, &mut cands);
    }
    cands.sort();
    cands.dedup();
    cands
}

fn conjunct_candidates(
    conjunct: &Formula,
    target: &str,
    env: &Env,
    oracle: &Oracle,
    out: &mut Vec<HFSet>,
) {
    if !conjunct.free_vars().contains(target) {
        return;
    }
    if let Some(pat) = stdform::match_def(conjunct, target) {
        pattern_candidates(&pat, conjunct, target, env, oracle, out);
        return;
    }
    // look under a bounded ∃ with a known bound: instantiate and recurse
    if let Formula::ExistsIn(_, bound, body) = conjunct {
        if let Ok(bv) = term_value(bound, env, &[]) {
            for m in bv.iter() {
                let opened = body.opened(&Term::param(m.clone()));
                for inner in conjuncts(&opened) {
                    conjunct_candidates(inner, target, env, oracle, out);
                }
            }
        }
    }
    // or under a disjunction
    if let Formula::Or(a, b) = conjunct {
        conjunct_candidates(a, target, env, oracle, out);
        conjunct_candidates(b, target, env, oracle, out);
    }
    // fallback: a `fst_is(target, x)` with x known proposes the least pair
    // with that first component
    if let Some(x) = probe_pair_with_fst(conjunct, target, env) {
        out.push(HFSet::pair(x.clone(), x));
    }
    // function application: ∃p∈f p = ⟨x, target⟩ with f, x known
    if let Some((f, x)) = probe_fun_value(conjunct, target, env) {
        for p in f.iter() {
            if let Some((a, b)) = p.as_pair() {
                if *a == x {
                    out.push(b.clone());
                }
            }
        }
    }
    // rank-table constraint: propose the actual rank table over a root's
    // transitive closure (the root is read from a sibling pair_mem conjunct
    // by the caller through validation)
    if stdform::rank_table_ok(&Term::var(target)) == *conjunct {
        for v in env.values() {
            out.push(rank_table(v));
        }
    }
}

fn pattern_candidates(
    pat: &DefPattern,
    _conjunct: &Formula,
    _target: &str,
    env: &Env,
    oracle: &Oracle,
    out: &mut Vec<HFSet>,
) {
    let val = |t: &Term| term_value(t, env, &[]).ok();
    match pat {
        DefPattern::EqTerm(t) => {
            if let Some(v) = val(t) {
                out.push(v);
            }
        }
        DefPattern::MemOf(t) => {
            if let Some(v) = val(t) {
                out.extend(v.iter().cloned());
            }
        }
        DefPattern::Singleton(x) => {
            if let Some(v) = val(x) {
                out.push(HFSet::singleton(v));
            }
        }
        DefPattern::UPair(x, y) => {
            if let (Some(a), Some(b)) = (val(x), val(y)) {
                out.push(HFSet::from_vec(vec![a, b]));
            }
        }
        DefPattern::Succ(x) => {
            if let Some(v) = val(x) {
                out.push(v.insert(v.clone()));
            }
        }
        DefPattern::Union2(x, y) => {
            if let (Some(a), Some(b)) = (val(x), val(y)) {
                out.push(a.union(&b));
            }
        }
        DefPattern::BigUnion(a) => {
            if let Some(v) = val(a) {
                let mut u = HFSet::empty();
                for e in v.iter() {
                    u = u.union(e);
                }
                out.push(u);
            }
        }
        DefPattern::KPair(x, y) => {
            if let (Some(a), Some(b)) = (val(x), val(y)) {
                out.push(HFSet::pair(a, b));
            }
        }
        DefPattern::FstOf(p) => {
            if let Some(v) = val(p) {
                if v.is_pair() {
                    out.push(v.proj(0));
                }
            }
        }
        DefPattern::SndOf(p) => {
            if let Some(v) = val(p) {
                if v.is_pair() {
                    out.push(v.proj(1));
                }
            }
        }
        DefPattern::PairWithFst(x) => {
            if let Some(v) = val(x) {
                out.push(HFSet::pair(v.clone(), v));
            }
        }
        DefPattern::SepSet { dom, hole, matrix } => {
            if let Some(dv) = val(dom) {
                let mut elems = Vec::new();
                for u in dv.iter() {
                    let inst = matrix.substitute(hole, &Term::param(u.clone()));
                    if inst.classify() == FormulaClass::Delta0 {
                        if let Ok(true) = eval_delta0(&inst, env, oracle) {
                            elems.push(u.clone());
                        }
                    }
                }
                out.push(HFSet::from_vec(elems));
            }
        }
        DefPattern::RankTableFor(_) => {
            for v in env.values() {
                out.push(rank_table(v));
            }
        }
    }
}

/// `fst_is(target, x)` with x known: the target is a pair with first
/// component x; the canonical-least such pair is ⟨x, x⟩.
fn probe_pair_with_fst(conjunct: &Formula, target: &str, env: &Env) -> Option<HFSet> {
    if let Formula::ExistsIn(_, d, _) = conjunct {
        if matches!(d, Term::Free(n) if n == target) {
            // try to read off the x from the inner pair_with shape
            if let Formula::ExistsIn(_, _, body1) = conjunct {
                if let Formula::ExistsIn(_, _, body2) = body1.as_ref() {
                    if let Formula::ExistsIn(_, _, body3) = body2.as_ref() {
                        if let Formula::ExistsIn(_, _, body4) = body3.as_ref() {
                            let _ = body4;
                        }
                    }
                    let cs = conjuncts(body2);
                    if cs.len() == 6 {
                        if let Formula::Mem(x, _) = cs[0] {
                            if let Ok(v) = term_value(x, env, &[]) {
                                let t = Term::var(target);
                                if stdform::fst_is(&t, x) == *conjunct {
                                    return Some(v);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// `pair_mem(f, x, target)` with f and x known.
fn probe_fun_value(conjunct: &Formula, target: &str, env: &Env) -> Option<(HFSet, HFSet)> {
    if let Formula::ExistsIn(_, f, _body) = conjunct {
        if let Ok(fv) = term_value(f, env, &[]) {
            // match against pair_mem(f, x, target) for each entry's first comp
            for p in fv.iter() {
                if let Some((a, _)) = p.as_pair() {
                    let cand = stdform::pair_mem(
                        f,
                        &Term::param(a.clone()),
                        &Term::var(target),
                    );
                    if cand == *conjunct {
                        return Some((fv.clone(), a.clone()));
                    }
                }
            }
            // also: x given syntactically as a term
            if let Formula::ExistsIn(_, _, inner) = conjunct {
                let cs = conjuncts(inner);
                if cs.len() == 6 {
                    if let Formula::Mem(x, _) = cs[0] {
                        if let Ok(xv) = term_value(x, env, &[]) {
                            let cand = stdform::pair_mem(f, x, &Term::var(target));
                            if cand == *conjunct {
                                return Some((fv, xv));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// The rank table over the transitive closure of {x}: entries ⟨u, rank(u)⟩.
pub fn rank_table(x: &HFSet) -> HFSet {
    let mut entries = Vec::new();
    for u in x.transitive_closure() {
        entries.push(HFSet::pair(u.clone(), HFSet::von_neumann(u.rank())));
    }
    HFSet::from_vec(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::stdform as sf;
    use crate::syntax::Term;

    fn pv(n: usize) -> Term {
        Term::param(HFSet::von_neumann(n))
    }

    #[test]
    fn solves_equation() {
        let m = crate::syntax::eq(Term::var("b"), pv(3));
        let sols = solve_targets(&m, &Env::new(), &["b".into()], &Oracle::empty());
        assert_eq!(sols, vec![vec![HFSet::von_neumann(3)]]);
    }

    #[test]
    fn solves_successor_and_pair() {
        let m = crate::syntax::and(
            sf::succ_eq(&Term::var("b"), &pv(2)),
            sf::pair_with(&Term::var("d"), &Term::var("b"), &pv(0)),
        );
        let sols = solve_targets(
            &m,
            &Env::new(),
            &["b".into(), "d".into()],
            &Oracle::empty(),
        );
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0][0], HFSet::von_neumann(3));
        assert_eq!(
            sols[0][1],
            HFSet::pair(HFSet::von_neumann(3), HFSet::von_neumann(0))
        );
    }

    #[test]
    fn solves_separation() {
        // b = {u ∈ 4 : P(u)} under oracle {1, 3}
        let m = sf::sep_char(
            &Term::var("b"),
            &pv(4),
            "%hole",
            &crate::syntax::oracle(Term::var("%hole")),
        );
        let o = Oracle::finite(
            "odd",
            HFSet::from_vec(vec![HFSet::von_neumann(1), HFSet::von_neumann(3)]),
        );
        let sols = solve_targets(&m, &Env::new(), &["b".into()], &o);
        assert_eq!(sols.len(), 1);
        assert_eq!(
            sols[0][0],
            HFSet::from_vec(vec![HFSet::von_neumann(1), HFSet::von_neumann(3)])
        );
    }

    #[test]
    fn solves_least_pair_with_member_fst() {
        // ∃m∈a fst_is(d, m): propose ⟨m,m⟩ per member; the canonical-least
        // ends up first after sorting
        let a = HFSet::from_vec(vec![
            HFSet::empty(),
            HFSet::von_neumann(2),
            HFSet::singleton(HFSet::empty()),
        ]);
        let m = Formula::exists_in(
            "m",
            Term::param(a),
            sf::fst_is(&Term::var("d"), &Term::var("m")),
        );
        let sols = solve_targets(&m, &Env::new(), &["d".into()], &Oracle::empty());
        assert!(!sols.is_empty());
        assert_eq!(
            sols[0][0],
            HFSet::pair(HFSet::empty(), HFSet::empty()),
        );
    }

    #[test]
    fn rank_table_is_correct() {
        let x = HFSet::von_neumann(3);
        let t = rank_table(&x);
        // contains ⟨3, 3⟩ and ⟨0, 0⟩
        assert!(t.contains(&HFSet::pair(
            HFSet::von_neumann(3),
            HFSet::von_neumann(3)
        )));
        assert!(t.contains(&HFSet::pair(HFSet::empty(), HFSet::empty())));
    }
}
