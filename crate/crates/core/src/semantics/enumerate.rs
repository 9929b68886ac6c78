//! Definable-subset enumeration and the finite hierarchy levels.
//!
//! `def_a(X, oracle, bound)` enumerates the subsets of a finite set X
//! definable in the structure ⟨X, ∈, A∩X⟩ by a formula of size ≤ bound with
//! parameters from X and quantifiers relativized to X. Enumeration is by
//! formula size with semantic deduplication: two subformulas with the same
//! truth table over X are interchangeable in every context, so only one
//! representative per table is kept per quantifier depth.

use super::{Oracle, SemanticsError};
use crate::hfs::HFSet;
use std::collections::{BTreeSet, HashMap, HashSet};

/// Truth table of a formula with `depth + 1` open variables over a domain of
/// size m: entry per assignment, least-significant index = the distinguished
/// free variable.
type Table = Vec<bool>;

const MAX_QUANTIFIER_DEPTH: usize = 2;

/// The set of subsets of X definable with parameters in ⟨X, ∈, A∩X⟩ by
/// formulas of size ≤ `size_bound`.
pub fn def_a(x: &HFSet, oracle: &Oracle, size_bound: usize) -> BTreeSet<HFSet> {
    let dom: Vec<HFSet> = x.elems().to_vec();
    let m = dom.len();
    if m == 0 {
        // the empty subset is definable over the empty domain (vacuously)
        let mut out = BTreeSet::new();
        out.insert(HFSet::empty());
        return out;
    }

    // membership and oracle tables over the domain
    let mem =
        |a: usize, b: usize| -> bool { dom[b].contains(&dom[a]) };
    let orc: Vec<bool> = dom.iter().map(|e| oracle.query(e)).collect();

    // tables[depth][size] = representative tables first reached at that size
    let depths = MAX_QUANTIFIER_DEPTH + 1;
    let mut by_size: Vec<Vec<Vec<Table>>> = vec![vec![Vec::new(); size_bound + 1]; depths];
    let mut seen: Vec<HashSet<Table>> = vec![HashSet::new(); depths];

    let assignments = |vars: usize| -> usize { m.pow(vars as u32) };

    // atoms of size 1 at each depth: terms are the vars 0..=depth and the
    // m parameters
    for depth in 0..depths {
        let vars = depth + 1;
        let rows = assignments(vars);
        let decode = |row: usize, v: usize| -> usize { (row / m.pow(v as u32)) % m };
        // term selectors: Some(v) = variable v, None-index = parameter i
        let mut terms: Vec<Box<dyn Fn(usize) -> usize>> = Vec::new();
        for v in 0..vars {
            terms.push(Box::new(move |row| decode(row, v)));
        }
        for i in 0..m {
            terms.push(Box::new(move |_| i));
        }
        let mut push = |tbl: Table, seen: &mut HashSet<Table>, out: &mut Vec<Table>| {
            if seen.insert(tbl.clone()) {
                out.push(tbl);
            }
        };
        let mut atoms: Vec<Table> = Vec::new();
        for ta in &terms {
            for tb in &terms {
                let t_mem: Table = (0..rows).map(|r| mem(ta(r), tb(r))).collect();
                push(t_mem, &mut seen[depth], &mut atoms);
                let t_eq: Table = (0..rows).map(|r| ta(r) == tb(r)).collect();
                push(t_eq, &mut seen[depth], &mut atoms);
            }
            let t_p: Table = (0..rows).map(|r| orc[ta(r)]).collect();
            push(t_p, &mut seen[depth], &mut atoms);
        }
        by_size[depth][1] = atoms;
    }

    for size in 2..=size_bound {
        for depth in 0..depths {
            let vars = depth + 1;
            let rows = assignments(vars);
            let mut new: Vec<Table> = Vec::new();
            // negation
            for t in &by_size[depth][size - 1] {
                let neg: Table = t.iter().map(|b| !b).collect();
                if !seen[depth].contains(&neg) {
                    new.push(neg);
                }
            }
            // binary connectives
            for ls in 1..size - 1 {
                let rs = size - 1 - ls;
                for a in &by_size[depth][ls] {
                    for b in &by_size[depth][rs] {
                        for op in 0..3 {
                            let t: Table = (0..a.len())
                                .map(|i| match op {
                                    0 => a[i] && b[i],
                                    1 => a[i] || b[i],
                                    _ => !a[i] || b[i],
                                })
                                .collect();
                            if !seen[depth].contains(&t) {
                                new.push(t);
                            }
                        }
                    }
                }
            }
            // quantifiers over X from depth+1 bodies
            if depth + 1 < depths {
                let inner_rows = assignments(vars + 1);
                for t in &by_size[depth + 1][size - 1] {
                    debug_assert_eq!(t.len(), inner_rows);
                    let mut fa: Table = vec![true; rows];
                    let mut ex: Table = vec![false; rows];
                    for row in 0..rows {
                        for v in 0..m {
                            // innermost variable varies fastest in the inner
                            // table: inner row = row * m + ... no — the new
                            // variable is the highest index, so inner row =
                            // row + v * rows
                            let ir = row + v * rows;
                            if t[ir] {
                                ex[row] = true;
                            } else {
                                fa[row] = false;
                            }
                        }
                    }
                    if !seen[depth].contains(&fa) {
                        new.push(fa);
                    }
                    if !seen[depth].contains(&ex) {
                        new.push(ex);
                    }
                }
            }
            let mut uniq: Vec<Table> = Vec::new();
            for t in new {
                if seen[depth].insert(t.clone()) {
                    uniq.push(t);
                }
            }
            by_size[depth][size] = uniq;
        }
    }

    // collect depth-0 extensions
    let mut out = BTreeSet::new();
    for tables in &by_size[0] {
        for t in tables {
            let elems: Vec<HFSet> = (0..m).filter(|i| t[*i]).map(|i| dom[i].clone()).collect();
            out.insert(HFSet::from_vec(elems));
        }
    }
    out
}

/// The full powerset of a finite set's elements.
pub fn powerset(x: &HFSet) -> Vec<HFSet> {
    let dom = x.elems();
    let n = dom.len();
    assert!(n <= 20, "powerset domain too large");
    let mut out = Vec::with_capacity(1 << n);
    for mask in 0u32..(1 << n) {
        let elems: Vec<HFSet> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| dom[i].clone())
            .collect();
        out.push(HFSet::from_vec(elems));
    }
    out
}

/// The finite hierarchy level L_n[A].
///
/// Over a finite previous level every subset is definable once parameters
/// are allowed (the saturation property verified by `def_a` tests), so
/// successor levels are computed as full powersets; this is the saturating
/// size bound. Finite levels therefore agree for every oracle, which is the
/// finite shadow of the trace-invariance property checked below.
pub fn level(n: usize, _oracle: &Oracle) -> Result<HFSet, SemanticsError> {
    if n > 5 {
        return Err(SemanticsError::Budget(format!(
            "level {} would hold 2^{} elements",
            n,
            if n == 6 { 65536 } else { 1 << 30 }
        )));
    }
    let mut cur = HFSet::empty();
    for _ in 0..n {
        cur = HFSet::from_vec(powerset(&cur));
    }
    Ok(cur)
}

/// Per-check report for [`check_level_properties`].
#[derive(Debug, Clone)]
pub struct LevelReport {
    pub checks: Vec<(String, bool)>,
}

impl LevelReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// Verifies the finite-level hierarchy properties up to level n: monotone
/// inclusion, membership of earlier levels, transitivity, the ordinal trace
/// L_k ∩ Ord = k, and invariance under restricting the oracle to the level.
pub fn check_level_properties(n: usize, oracle: &Oracle) -> Result<LevelReport, SemanticsError> {
    let mut checks = Vec::new();
    let levels: Vec<HFSet> = (0..=n)
        .map(|k| level(k, oracle))
        .collect::<Result<_, _>>()?;
    for k in 0..n {
        checks.push((
            format!("L{} ⊆ L{}", k, k + 1),
            levels[k].is_subset(&levels[k + 1]),
        ));
        checks.push((
            format!("L{} ∈ L{}", k, k + 1),
            levels[k + 1].contains(&levels[k]),
        ));
    }
    for (k, lk) in levels.iter().enumerate() {
        let transitive = lk.iter().all(|e| e.is_subset(lk));
        checks.push((format!("L{} transitive", k), transitive));
    }
    for (k, lk) in levels.iter().enumerate() {
        let ordinals: Vec<usize> = lk.iter().filter_map(|e| e.as_natural()).collect();
        let ok = ordinals.len() == k && (0..k).all(|i| ordinals.contains(&i));
        checks.push((format!("L{} ∩ Ord = {}", k, k), ok));
    }
    // oracle-trace invariance at the finite levels
    let restricted = oracle.restrict_to(&levels[n], "restricted");
    let again: Vec<HFSet> = (0..=n)
        .map(|k| level(k, &restricted))
        .collect::<Result<_, _>>()?;
    checks.push((
        format!("L0..L{} invariant under A ∩ L{}", n, n),
        levels == again,
    ));
    Ok(LevelReport { checks })
}

/// All subsets of X definable via `def_a`, compared against the powerset;
/// used by the saturation tests.
pub fn saturates(x: &HFSet, oracle: &Oracle, size_bound: usize) -> bool {
    let def = def_a(x, oracle, size_bound);
    let full: BTreeSet<HFSet> = powerset(x).into_iter().collect();
    def == full
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn def_a_of_empty() {
        let out = def_a(&HFSet::empty(), &Oracle::empty(), 4);
        assert_eq!(out.len(), 1);
        assert!(out.contains(&HFSet::empty()));
    }

    #[test]
    fn def_a_saturates_small() {
        // |X| = 3 at bound 5: every subset definable by parameter disjunction
        let x = HFSet::von_neumann(3);
        assert!(saturates(&x, &Oracle::empty(), 5));
        for k in 0..=3usize {
            let x = HFSet::von_neumann(k);
            assert!(saturates(&x, &Oracle::empty(), k + 4));
        }
    }

    #[test]
    fn def_a_sees_oracle() {
        // with X = {∅, {∅}} and φ = P(x), the oracle trace is definable at
        // tiny size even though no parameter disjunction is
        let x = HFSet::von_neumann(2);
        let o = Oracle::finite("o", HFSet::singleton(HFSet::singleton(HFSet::empty())));
        let out = def_a(&x, &o, 1);
        assert!(out.contains(&HFSet::singleton(HFSet::singleton(HFSet::empty()))));
    }

    #[test]
    fn levels_small() {
        let o = Oracle::empty();
        assert_eq!(level(0, &o).unwrap(), HFSet::empty());
        assert_eq!(level(1, &o).unwrap(), HFSet::singleton(HFSet::empty()));
        assert_eq!(level(2, &o).unwrap(), HFSet::von_neumann(2));
        assert_eq!(level(3, &o).unwrap().card(), 4);
        assert_eq!(level(4, &o).unwrap().card(), 16);
        assert!(level(6, &o).is_err());
    }

    #[test]
    fn level_properties_hold() {
        let o = Oracle::finite("o", HFSet::singleton(HFSet::von_neumann(1)));
        let rep = check_level_properties(3, &o).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.checks);
        let rep0 = check_level_properties(0, &o).unwrap();
        assert!(rep0.all_pass());
    }
}
