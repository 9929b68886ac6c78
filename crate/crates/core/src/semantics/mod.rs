//! Decidable Δ₀ evaluation over HF structures ⟨X, ∈, A∩X⟩, `Sat` reflection,
//! fuelled Σ₁ witness search, definable-subset enumeration, and the finite
//! hierarchy levels.
//!
//! The evaluation universe is the hereditarily finite sets; every bounded
//! quantifier iterates over the elements of its (finite) bound, so Δ₀ truth
//! is decidable outright. The oracle interprets the predicate symbol `P`.

mod enumerate;
pub mod solve;

pub use enumerate::{check_level_properties, def_a, level, LevelReport};

use crate::hfs::HFSet;
use crate::syntax::{godel_decode, xvar, xvar_index, Formula, FormulaClass, Term};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub type Env = BTreeMap<String, HFSet>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("formula is not Δ₀")]
    NotDelta0,
    #[error("formula is not Σ₁ (or Δ₀)")]
    NotSigma1,
    #[error("not a valid Δ₀ formula code")]
    InvalidCode,
    #[error("free variables are not the canonical x1..xn block")]
    NonCanonicalVars,
    #[error("argument tuple does not match arity {0}")]
    ArityMismatch(usize),
    #[error("budget exceeded: {0}")]
    Budget(String),
}

/// A decidable membership test interpreting the predicate symbol `P`.
/// Queries must be deterministic: repeated queries agree.
#[derive(Clone)]
pub struct Oracle {
    name: String,
    kind: OracleKind,
}

#[derive(Clone)]
enum OracleKind {
    Finite(HFSet),
    Pred(Arc<dyn Fn(&HFSet) -> bool + Send + Sync>),
}

impl Oracle {
    pub fn empty() -> Oracle {
        Oracle::finite("empty", HFSet::empty())
    }

    /// Oracle backed by an explicit finite collection.
    pub fn finite(name: &str, elems: HFSet) -> Oracle {
        Oracle {
            name: name.to_string(),
            kind: OracleKind::Finite(elems),
        }
    }

    /// Oracle backed by a total decidable predicate closure.
    pub fn predicate(
        name: &str,
        pred: impl Fn(&HFSet) -> bool + Send + Sync + 'static,
    ) -> Oracle {
        Oracle {
            name: name.to_string(),
            kind: OracleKind::Pred(Arc::new(pred)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn query(&self, x: &HFSet) -> bool {
        match &self.kind {
            OracleKind::Finite(s) => s.contains(x),
            OracleKind::Pred(f) => f(x),
        }
    }

    /// The restriction A ∩ dom as an explicit finite oracle.
    pub fn restrict_to(&self, dom: &HFSet, name: &str) -> Oracle {
        let elems: Vec<HFSet> = dom.iter().filter(|e| self.query(e)).cloned().collect();
        Oracle::finite(name, HFSet::from_vec(elems))
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({})", self.name)
    }
}

pub(crate) fn term_value(
    t: &Term,
    env: &Env,
    stack: &[HFSet],
) -> Result<HFSet, SemanticsError> {
    match t {
        Term::Bound(i) => {
            let idx = stack
                .len()
                .checked_sub(1 + *i as usize)
                .ok_or_else(|| SemanticsError::Unbound(format!("?b{}", i)))?;
            Ok(stack[idx].clone())
        }
        Term::Free(n) => env
            .get(n)
            .cloned()
            .ok_or_else(|| SemanticsError::Unbound(n.clone())),
        Term::Param(c) => Ok(c.clone()),
    }
}

fn eval_rec(
    phi: &Formula,
    env: &Env,
    stack: &mut Vec<HFSet>,
    oracle: &Oracle,
) -> Result<bool, SemanticsError> {
    use Formula::*;
    match phi {
        Mem(a, b) => {
            let va = term_value(a, env, stack)?;
            let vb = term_value(b, env, stack)?;
            Ok(vb.contains(&va))
        }
        Eq(a, b) => Ok(term_value(a, env, stack)? == term_value(b, env, stack)?),
        Oracle(t) => {
            let v = term_value(t, env, stack)?;
            Ok(oracle.query(&v))
        }
        And(a, b) => Ok(eval_rec(a, env, stack, oracle)? && eval_rec(b, env, stack, oracle)?),
        Or(a, b) => Ok(eval_rec(a, env, stack, oracle)? || eval_rec(b, env, stack, oracle)?),
        Implies(a, b) => {
            Ok(!eval_rec(a, env, stack, oracle)? || eval_rec(b, env, stack, oracle)?)
        }
        Not(a) => Ok(!eval_rec(a, env, stack, oracle)?),
        ForallIn(_, t, body) => {
            let bound = term_value(t, env, stack)?;
            for e in bound.iter() {
                stack.push(e.clone());
                let r = eval_rec(body, env, stack, oracle);
                stack.pop();
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        ExistsIn(_, t, body) => {
            let bound = term_value(t, env, stack)?;
            for e in bound.iter() {
                stack.push(e.clone());
                let r = eval_rec(body, env, stack, oracle);
                stack.pop();
                if r? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Forall(..) | Exists(..) => Err(SemanticsError::NotDelta0),
    }
}

/// Classical truth of a Δ₀ formula; bounded quantifiers iterate over the
/// elements of the bound's value.
pub fn eval_delta0(phi: &Formula, env: &Env, oracle: &Oracle) -> Result<bool, SemanticsError> {
    if phi.classify() != FormulaClass::Delta0 {
        return Err(SemanticsError::NotDelta0);
    }
    eval_rec(phi, env, &mut Vec::new(), oracle)
}

/// Strict left-nested tuple split: for `n ≥ 2` every intermediate node must
/// actually be an ordered pair.
fn untuple_strict(args: &HFSet, n: usize) -> Result<Vec<HFSet>, SemanticsError> {
    match n {
        0 => {
            if args.is_empty() {
                Ok(Vec::new())
            } else {
                Err(SemanticsError::ArityMismatch(0))
            }
        }
        1 => Ok(vec![args.clone()]),
        _ => {
            let (init, last) = args.as_pair().ok_or(SemanticsError::ArityMismatch(n))?;
            let mut v = untuple_strict(init, n - 1)?;
            v.push(last.clone());
            Ok(v)
        }
    }
}

/// `Sat` reflection, implemented by decode-then-evaluate: decodes a Δ₀
/// formula code, reads its arity off the canonical free-variable block
/// x1..xn, splits `args` as an n-tuple and evaluates.
pub fn sat_reflect(code: &HFSet, args: &HFSet, oracle: &Oracle) -> Result<bool, SemanticsError> {
    let phi = godel_decode(code).ok_or(SemanticsError::InvalidCode)?;
    if phi.classify() != FormulaClass::Delta0 {
        return Err(SemanticsError::NotDelta0);
    }
    let mut n = 0usize;
    for v in phi.free_vars() {
        let i = xvar_index(&v).ok_or(SemanticsError::NonCanonicalVars)?;
        n = n.max(i);
    }
    let vals = untuple_strict(args, n)?;
    let mut env = Env::new();
    for (i, v) in vals.into_iter().enumerate() {
        env.insert(xvar(i + 1), v);
    }
    eval_delta0(&phi, &env, oracle)
}

/// `Sat` at a declared arity, with the total projection conventions of the
/// application relation: the argument tuple is split with non-pairs
/// projecting to ∅. Free variables must lie within x1..xn.
pub fn sat_with_arity(
    phi: &Formula,
    args: &HFSet,
    n: usize,
    oracle: &Oracle,
) -> Result<bool, SemanticsError> {
    for v in phi.free_vars() {
        match xvar_index(&v) {
            Some(i) if i <= n => {}
            _ => return Err(SemanticsError::NonCanonicalVars),
        }
    }
    let vals = args.untuple(n);
    let mut env = Env::new();
    for (i, v) in vals.into_iter().enumerate() {
        env.insert(xvar(i + 1), v);
    }
    eval_delta0(phi, &env, oracle)
}

// ---------- fuelled Σ₁ search ----------

/// Outcome of a fuelled witness search. `Exhausted` is not a refutation: it
/// only says no witness was found among the candidates examined, and records
/// through which raw Ackermann code the contiguous scan got.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { witness: HFSet, examined: u64 },
    Exhausted { examined: u64, codes_covered: u64 },
}

/// How many raw Ackermann codes go into the head tier of every search.
const HEAD_CODES: u64 = 1024;

/// The deterministic candidate sequence for least-witness search.
///
/// Three tiers, each ascending in the canonical order:
///   1. solver proposals (structure-directed candidates, validated later
///      like everything else),
///   2. a head: raw codes 0..=1024 merged with a one-step closure of the
///      context values (transitive closures, singletons, successors, unions
///      and Kuratowski pairs),
///   3. the remaining raw codes ascending.
///
/// Fuel counts candidates handed out. The sequence depends only on the
/// proposals and context, never on the fuel, so search results are stable
/// under fuel increase.
pub struct CandidateSeq {
    head: std::vec::IntoIter<HFSet>,
    emitted: BTreeSet<HFSet>,
    next_code: u64,
}

impl CandidateSeq {
    pub fn new(proposals: Vec<HFSet>, context: &[HFSet]) -> CandidateSeq {
        let mut head: Vec<HFSet> = Vec::new();
        let mut proposals = proposals;
        proposals.sort();
        proposals.dedup();
        head.extend(proposals.iter().cloned());
        let mut rest: Vec<HFSet> = (0..=HEAD_CODES).map(HFSet::from_code).collect();
        rest.extend(context_closure(context));
        rest.sort();
        rest.dedup();
        // proposals first, then the head tier in canonical order
        let mut seen: BTreeSet<HFSet> = proposals.into_iter().collect();
        for x in rest {
            if seen.insert(x.clone()) {
                head.push(x);
            }
        }
        CandidateSeq {
            head: head.into_iter(),
            emitted: seen,
            next_code: HEAD_CODES + 1,
        }
    }
}

impl Iterator for CandidateSeq {
    type Item = HFSet;
    fn next(&mut self) -> Option<HFSet> {
        if let Some(x) = self.head.next() {
            return Some(x);
        }
        loop {
            let x = HFSet::from_code(self.next_code);
            self.next_code += 1;
            if !self.emitted.contains(&x) {
                return Some(x);
            }
        }
    }
}

/// One closure layer over the context values: the values themselves, their
/// transitive closures, small naturals, then singletons, successors, pairwise
/// unions and Kuratowski pairs over a code-capped core.
fn context_closure(context: &[HFSet]) -> Vec<HFSet> {
    let mut c0: Vec<HFSet> = context.to_vec();
    for x in context {
        c0.extend(x.transitive_closure());
    }
    for n in 0..4 {
        c0.push(HFSet::von_neumann(n));
    }
    c0.sort();
    c0.dedup();
    c0.truncate(64);
    let mut out = c0.clone();
    for x in &c0 {
        out.push(HFSet::singleton(x.clone()));
        out.push(x.insert(x.clone()));
    }
    let small: Vec<HFSet> = c0.iter().take(16).cloned().collect();
    for x in &c0 {
        for y in &small {
            out.push(HFSet::pair(x.clone(), y.clone()));
            out.push(HFSet::pair(y.clone(), x.clone()));
            out.push(x.union(y));
        }
    }
    out
}

/// Least-witness search for a Δ₀ matrix over `targets` (packed left-nested
/// when there are several), scanning the candidate sequence in order and
/// validating each candidate by full evaluation.
pub fn least_witness(
    matrix: &Formula,
    targets: &[String],
    env: &Env,
    oracle: &Oracle,
    fuel: u64,
    extra_proposals: Vec<HFSet>,
) -> Result<SearchOutcome, SemanticsError> {
    let k = targets.len();
    let mut proposals = extra_proposals;
    proposals.extend(
        solve::solve_targets(matrix, env, targets, oracle)
            .into_iter()
            .map(|sol| HFSet::tuple(&sol)),
    );
    let mut context: Vec<HFSet> = env.values().cloned().collect();
    context.extend(matrix.params());
    let seq = CandidateSeq::new(proposals, &context);
    let mut codes_covered = 0u64;
    let mut examined = 0u64;
    for cand in seq.take(fuel as usize) {
        examined += 1;
        let parts = cand.untuple(k.max(1));
        let mut env2 = env.clone();
        for (name, v) in targets.iter().zip(parts.into_iter()) {
            env2.insert(name.clone(), v);
        }
        if eval_delta0(matrix, &env2, oracle)? {
            return Ok(SearchOutcome::Found {
                witness: cand,
                examined,
            });
        }
        if let Ok(code) = cand.ackermann_code_with(64) {
            let digits = code.to_u64_digits();
            let c = if digits.is_empty() { 0 } else { digits[0] };
            if c == codes_covered {
                codes_covered += 1;
            }
        }
    }
    Ok(SearchOutcome::Exhausted {
        examined,
        codes_covered,
    })
}

/// Fuelled witness search for a Σ₁ (or Δ₀) formula, in canonical candidate
/// order. A prefix ∃z₁…∃zₖ with k ≥ 2 searches for one packed witness
/// ⟨z₁,…,zₖ⟩ with the total projection conventions. `Found(w)` means the Δ₀
/// matrix holds at w; `Exhausted` is not a refutation.
pub fn search_sigma1(
    phi: &Formula,
    env: &Env,
    oracle: &Oracle,
    fuel: u64,
) -> Result<SearchOutcome, SemanticsError> {
    match phi.classify() {
        FormulaClass::Delta0 => {
            if eval_delta0(phi, env, oracle)? {
                Ok(SearchOutcome::Found {
                    witness: HFSet::empty(),
                    examined: 1,
                })
            } else {
                Ok(SearchOutcome::Exhausted {
                    examined: 1,
                    codes_covered: 0,
                })
            }
        }
        FormulaClass::Sigma1 => {
            let mut targets = Vec::new();
            let mut cur = phi.clone();
            while let Formula::Exists(_, body) = cur {
                let name = format!("%z{}", targets.len());
                let opened = body.opened(&Term::var(&name));
                targets.push(name);
                cur = opened;
            }
            least_witness(&cur, &targets, env, oracle, fuel, Vec::new())
        }
        _ => Err(SemanticsError::NotSigma1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn pf(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn ev(s: &str, oracle: &Oracle) -> bool {
        eval_delta0(&pf(s), &Env::new(), oracle).unwrap()
    }

    #[test]
    fn eval_examples() {
        let o = Oracle::empty();
        // ∀x∈2 (x=0 ∨ x=1)
        assert!(ev("(all-in x #2 (or (= x #0) (= x #1)))", &o));
        assert!(!ev("(mem #0 #0)", &o));
    }

    #[test]
    fn eval_oracle_lookup() {
        let phi = pf("(P x)");
        let mut env = Env::new();
        env.insert("x".into(), HFSet::empty());
        let with = Oracle::finite("with", HFSet::singleton(HFSet::empty()));
        let without = Oracle::empty();
        assert!(eval_delta0(&phi, &env, &with).unwrap());
        assert!(!eval_delta0(&phi, &env, &without).unwrap());
    }

    #[test]
    fn eval_errors() {
        let o = Oracle::empty();
        assert_eq!(
            eval_delta0(&pf("(mem x #0)"), &Env::new(), &o),
            Err(SemanticsError::Unbound("x".into()))
        );
        assert_eq!(
            eval_delta0(&pf("(ex z (mem z z))"), &Env::new(), &o),
            Err(SemanticsError::NotDelta0)
        );
    }

    #[test]
    fn sat_reflect_trivial() {
        let o = Oracle::empty();
        let code = crate::syntax::godel_number(&pf("(= x1 x1)"));
        assert!(sat_reflect(&code, &HFSet::empty(), &o).unwrap());
    }

    #[test]
    fn sat_reflect_oracle() {
        let code = crate::syntax::godel_number(&pf("(P x1)"));
        let one = HFSet::singleton(HFSet::empty());
        let o = Oracle::finite("o", HFSet::singleton(one.clone()));
        assert!(sat_reflect(&code, &one, &o).unwrap());
        assert!(!sat_reflect(&code, &HFSet::empty(), &o).unwrap());
    }

    #[test]
    fn sat_reflect_rejects_bad_codes() {
        let o = Oracle::empty();
        assert_eq!(
            sat_reflect(&HFSet::von_neumann(3), &HFSet::empty(), &o),
            Err(SemanticsError::InvalidCode)
        );
        // Σ₁ code rejected
        let code = crate::syntax::godel_number(&pf("(ex z (mem x1 z))"));
        assert_eq!(
            sat_reflect(&code, &HFSet::empty(), &o),
            Err(SemanticsError::NotDelta0)
        );
        // arity mismatch: two variables but a non-pair argument tuple
        let code = crate::syntax::godel_number(&pf("(mem x1 x2)"));
        assert_eq!(
            sat_reflect(&code, &HFSet::von_neumann(3), &o),
            Err(SemanticsError::ArityMismatch(2))
        );
    }

    #[test]
    fn search_finds_least_container() {
        let o = Oracle::empty();
        let phi = pf("(ex z (mem #{} z))");
        match search_sigma1(&phi, &Env::new(), &o, 10).unwrap() {
            SearchOutcome::Found { witness, .. } => {
                assert_eq!(witness, HFSet::singleton(HFSet::empty()))
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn search_unsatisfiable_exhausts() {
        let o = Oracle::empty();
        let phi = pf("(ex z (mem z z))");
        for fuel in [1u64, 64, 2048] {
            match search_sigma1(&phi, &Env::new(), &o, fuel).unwrap() {
                SearchOutcome::Exhausted { examined, .. } => assert!(examined <= fuel),
                other => panic!("{:?}", other),
            }
        }
    }

    #[test]
    fn search_fuel_monotone_witness_stable() {
        let o = Oracle::finite("o", HFSet::von_neumann(2));
        let phi = pf("(ex z (and (P z) (mem #{} z)))");
        let w1 = match search_sigma1(&phi, &Env::new(), &o, 50).unwrap() {
            SearchOutcome::Found { witness, .. } => witness,
            other => panic!("{:?}", other),
        };
        for fuel in [100u64, 1000, 10000] {
            match search_sigma1(&phi, &Env::new(), &o, fuel).unwrap() {
                SearchOutcome::Found { witness, .. } => assert_eq!(witness, w1),
                other => panic!("{:?}", other),
            }
        }
    }

    #[test]
    fn strict_tuples() {
        assert!(untuple_strict(&HFSet::von_neumann(3), 2).is_err());
        let t = HFSet::tuple(&[HFSet::empty(), HFSet::von_neumann(1), HFSet::von_neumann(2)]);
        let v = untuple_strict(&t, 3).unwrap();
        assert_eq!(v[2], HFSet::von_neumann(2));
    }
}
