//! Canonical hereditarily finite set values.
//!
//! Every [`HFSet`] is stored duplicate-free with its elements in ascending
//! canonical order, so extensionally equal sets are structurally identical.
//! The canonical order is the order induced by the Ackermann coding
//! `code(x) = Σ_{y ∈ x} 2^code(y)`; it can be decided structurally, without
//! ever materialising the (astronomically large) codes: compare the element
//! lists from the largest element downwards.

use num_bigint::BigUint;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Default cap on the bit-length of an Ackermann code, ~2^20 bits.
pub const DEFAULT_CODE_BITS: u64 = 1 << 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HfsError {
    #[error("ackermann code exceeds the configured budget of {budget} bits")]
    CodeBudgetExceeded { budget: u64 },
    #[error("set literal syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A hereditarily finite set in canonical form.
///
/// Elements are sorted ascending in the canonical well-order and contain no
/// duplicates; the representation is unique per extensional identity, so the
/// derived equality is extensional equality. Values are immutable and cheap
/// to clone.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HFSet {
    elems: Arc<Vec<HFSet>>,
}

impl HFSet {
    /// The empty set.
    pub fn empty() -> Self {
        HFSet {
            elems: Arc::new(Vec::new()),
        }
    }

    /// Builds a set from arbitrary (possibly duplicated, unsorted) elements.
    pub fn from_vec(mut elems: Vec<HFSet>) -> Self {
        elems.sort();
        elems.dedup();
        HFSet {
            elems: Arc::new(elems),
        }
    }

    /// Singleton {x}.
    pub fn singleton(x: HFSet) -> Self {
        HFSet {
            elems: Arc::new(vec![x]),
        }
    }

    pub fn elems(&self) -> &[HFSet] {
        &self.elems
    }

    pub fn card(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Membership in canonical order is a binary search.
    pub fn contains(&self, x: &HFSet) -> bool {
        self.elems.binary_search(x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, HFSet> {
        self.elems.iter()
    }

    /// x ∪ y.
    pub fn union(&self, other: &HFSet) -> HFSet {
        let mut v: Vec<HFSet> = self.elems.to_vec();
        v.extend(other.elems.iter().cloned());
        HFSet::from_vec(v)
    }

    /// x ∪ {y}.
    pub fn insert(&self, x: HFSet) -> HFSet {
        match self.elems.binary_search(&x) {
            Ok(_) => self.clone(),
            Err(i) => {
                let mut v = self.elems.to_vec();
                v.insert(i, x);
                HFSet {
                    elems: Arc::new(v),
                }
            }
        }
    }

    /// x ∩ y.
    pub fn intersect(&self, other: &HFSet) -> HFSet {
        let v: Vec<HFSet> = self
            .elems
            .iter()
            .filter(|e| other.contains(e))
            .cloned()
            .collect();
        // Already sorted and unique.
        HFSet { elems: Arc::new(v) }
    }

    /// x \ y.
    pub fn difference(&self, other: &HFSet) -> HFSet {
        let v: Vec<HFSet> = self
            .elems
            .iter()
            .filter(|e| !other.contains(e))
            .cloned()
            .collect();
        HFSet { elems: Arc::new(v) }
    }

    pub fn is_subset(&self, other: &HFSet) -> bool {
        self.elems.iter().all(|e| other.contains(e))
    }

    /// von Neumann rank: rank(∅) = 0, rank(x) = 1 + max rank of elements.
    pub fn rank(&self) -> usize {
        self.elems.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// Elements of the transitive closure of {self}, i.e. self plus every set
    /// hereditarily reachable through membership.
    pub fn transitive_closure(&self) -> Vec<HFSet> {
        let mut out: Vec<HFSet> = Vec::new();
        fn go(x: &HFSet, out: &mut Vec<HFSet>) {
            if out.binary_search(x).is_err() {
                for e in x.iter() {
                    go(e, out);
                }
                if let Err(i) = out.binary_search(x) {
                    out.insert(i, x.clone());
                }
            }
        }
        go(self, &mut out);
        out
    }

    // ---------- Ackermann coding ----------

    /// The Ackermann code Σ_{y∈x} 2^code(y), a bijection between HF sets and
    /// naturals. Fails if the code would exceed `budget` bits.
    pub fn ackermann_code_with(&self, budget: u64) -> Result<BigUint, HfsError> {
        let mut acc = BigUint::from(0u32);
        for e in self.iter() {
            let c = e.ackermann_code_with(budget)?;
            // 2^c has c+1 bits; it must fit the budget.
            if c >= BigUint::from(budget) {
                return Err(HfsError::CodeBudgetExceeded { budget });
            }
            let exp = c.to_u64_digits();
            let exp = if exp.is_empty() { 0 } else { exp[0] };
            acc += BigUint::from(1u32) << exp;
        }
        if acc.bits() > budget {
            return Err(HfsError::CodeBudgetExceeded { budget });
        }
        Ok(acc)
    }

    /// Ackermann code under the default budget.
    pub fn ackermann_code(&self) -> Result<BigUint, HfsError> {
        self.ackermann_code_with(DEFAULT_CODE_BITS)
    }

    /// Decodes an Ackermann code: the set whose elements are the decodings of
    /// the set bit positions.
    pub fn from_code(n: u64) -> HFSet {
        let mut v = Vec::new();
        for bit in 0..64 {
            if n & (1u64 << bit) != 0 {
                v.push(HFSet::from_code(bit));
            }
        }
        // Bit positions ascend, and from_code is monotone, so v is sorted.
        HFSet { elems: Arc::new(v) }
    }

    // ---------- pairing ----------

    /// Kuratowski pair ⟨a, b⟩ = {{a}, {a,b}}.
    pub fn pair(a: HFSet, b: HFSet) -> HFSet {
        let fst = HFSet::singleton(a.clone());
        let snd = HFSet::from_vec(vec![a, b]);
        HFSet::from_vec(vec![fst, snd])
    }

    /// Decomposes a Kuratowski pair, if this set is one.
    pub fn as_pair(&self) -> Option<(&HFSet, &HFSet)> {
        match self.elems() {
            [s] => match s.elems() {
                // {{a}} = ⟨a, a⟩
                [a] => Some((a, a)),
                _ => None,
            },
            [s, t] => {
                // one of s, t must be the singleton {a}, the other {a, b}
                fn test<'a>(sing: &'a HFSet, dbl: &'a HFSet) -> Option<(&'a HFSet, &'a HFSet)> {
                    match (sing.elems(), dbl.elems()) {
                        ([a], [b, c]) => {
                            if a == b {
                                Some((a, c))
                            } else if a == c {
                                Some((a, b))
                            } else {
                                None
                            }
                        }
                        _ => None,
                    }
                }
                test(s, t).or_else(|| test(t, s))
            }
            _ => None,
        }
    }

    pub fn is_pair(&self) -> bool {
        self.as_pair().is_some()
    }

    /// Projection with the total convention: non-pairs project to ∅.
    pub fn proj(&self, i: u8) -> HFSet {
        match self.as_pair() {
            Some((a, b)) => {
                if i == 0 {
                    a.clone()
                } else {
                    b.clone()
                }
            }
            None => HFSet::empty(),
        }
    }

    /// Left-nested n-tuple: ⟨a⟩ = a, ⟨a₁,…,aₙ,aₙ₊₁⟩ = ⟨⟨a₁,…,aₙ⟩,aₙ₊₁⟩.
    pub fn tuple(items: &[HFSet]) -> HFSet {
        match items {
            [] => HFSet::empty(),
            [x] => x.clone(),
            [init @ .., last] => HFSet::pair(HFSet::tuple(init), last.clone()),
        }
    }

    /// Splits a left-nested n-tuple into exactly `n` components, using the
    /// total projection convention at every non-pair step. Always succeeds.
    pub fn untuple(&self, n: usize) -> Vec<HFSet> {
        match n {
            0 => Vec::new(),
            1 => vec![self.clone()],
            _ => {
                let mut init = self.proj(0).untuple(n - 1);
                init.push(self.proj(1));
                init
            }
        }
    }

    // ---------- naturals ----------

    /// von Neumann natural: 0 = ∅, n+1 = n ∪ {n}.
    pub fn von_neumann(n: usize) -> HFSet {
        let mut cur = HFSet::empty();
        let mut elems: Vec<HFSet> = Vec::with_capacity(n);
        for _ in 0..n {
            elems.push(cur.clone());
            cur = HFSet {
                elems: Arc::new(elems.clone()),
            };
        }
        cur
    }

    /// Inverse of [`HFSet::von_neumann`]; `None` for non-naturals.
    pub fn as_natural(&self) -> Option<usize> {
        // n's elements in canonical order are exactly 0, 1, …, n-1.
        let n = self.card();
        for (i, e) in self.iter().enumerate() {
            if e.card() != i {
                return None;
            }
            if i > 0 && e.elems() != &self.elems()[..i] {
                return None;
            }
        }
        // Card-0 prefix check is vacuous; verify the first element is ∅.
        if n > 0 && !self.elems()[0].is_empty() {
            return None;
        }
        Some(n)
    }
}

impl PartialOrd for HFSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HFSet {
    /// The canonical well-order: Ackermann-code comparison, decided
    /// structurally. Both element lists are ascending, so comparing the
    /// largest elements first is exact: a sum of distinct powers of two is
    /// decided by the largest differing exponent.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.elems, &other.elems) {
            return Ordering::Equal;
        }
        let a = self.elems();
        let b = other.elems();
        let mut i = a.len();
        let mut j = b.len();
        loop {
            match (i, j) {
                (0, 0) => return Ordering::Equal,
                (0, _) => return Ordering::Less,
                (_, 0) => return Ordering::Greater,
                _ => {
                    match a[i - 1].cmp(&b[j - 1]) {
                        Ordering::Equal => {
                            i -= 1;
                            j -= 1;
                        }
                        ord => return ord,
                    }
                }
            }
        }
    }
}

/// Strict canonical order; agrees with Ackermann-code comparison.
pub fn canonical_less(a: &HFSet, b: &HFSet) -> bool {
    a.cmp(b) == Ordering::Less
}

// ---------- reserved symbolic constants ----------

/// The reserved constant standing for ω (the first infinite ordinal), which
/// cannot be materialised inside HF. Encoded as ⟨101, 0⟩; see the extraction
/// layer for how realizers that would have to enter its elements report a
/// symbolic-blocked outcome instead.
pub fn omega_hat() -> HFSet {
    HFSet::pair(HFSet::von_neumann(101), HFSet::von_neumann(0))
}

/// The reserved constant standing for the set of reals; encoded as ⟨101, 1⟩.
pub fn reals_hat() -> HFSet {
    HFSet::pair(HFSet::von_neumann(101), HFSet::von_neumann(1))
}

/// Whether a value is (or hereditarily contains) a reserved symbolic constant.
pub fn mentions_reserved(x: &HFSet) -> bool {
    if *x == omega_hat() || *x == reals_hat() {
        return true;
    }
    x.iter().any(mentions_reserved)
}

// ---------- printing ----------

impl fmt::Display for HFSet {
    /// Canonical printer. Von Neumann naturals print as decimals and
    /// Kuratowski pairs as `(a,b)`; everything else prints in braces with the
    /// elements in canonical order. The alternate form `{:#}` is sugar-free.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !f.alternate() {
            if let Some(n) = self.as_natural() {
                return write!(f, "{}", n);
            }
            if let Some((a, b)) = self.as_pair() {
                return write!(f, "({},{})", a, b);
            }
        }
        write!(f, "{{")?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if f.alternate() {
                write!(f, "{:#}", e)?;
            } else {
                write!(f, "{}", e)?;
            }
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

// ---------- parsing ----------

/// Parses a set literal: `{}` braces, `(a,b)` pair sugar, decimal naturals.
pub fn parse_hfs(text: &str) -> Result<HFSet, HfsError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let set = parse_set(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(HfsError::Parse {
            pos,
            msg: "trailing input after set literal".into(),
        });
    }
    Ok(set)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

pub(crate) fn parse_set(bytes: &[u8], pos: &mut usize) -> Result<HFSet, HfsError> {
    skip_ws(bytes, pos);
    let start = *pos;
    match bytes.get(*pos) {
        Some(b'{') => {
            *pos += 1;
            let mut elems = Vec::new();
            skip_ws(bytes, pos);
            if bytes.get(*pos) == Some(&b'}') {
                *pos += 1;
                return Ok(HFSet::empty());
            }
            loop {
                elems.push(parse_set(bytes, pos)?);
                skip_ws(bytes, pos);
                match bytes.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                    }
                    Some(b'}') => {
                        *pos += 1;
                        return Ok(HFSet::from_vec(elems));
                    }
                    _ => {
                        return Err(HfsError::Parse {
                            pos: *pos,
                            msg: "expected ',' or '}' in set literal".into(),
                        })
                    }
                }
            }
        }
        Some(b'(') => {
            *pos += 1;
            let a = parse_set(bytes, pos)?;
            skip_ws(bytes, pos);
            if bytes.get(*pos) != Some(&b',') {
                return Err(HfsError::Parse {
                    pos: *pos,
                    msg: "expected ',' in pair literal".into(),
                });
            }
            *pos += 1;
            let b = parse_set(bytes, pos)?;
            skip_ws(bytes, pos);
            if bytes.get(*pos) != Some(&b')') {
                return Err(HfsError::Parse {
                    pos: *pos,
                    msg: "expected ')' closing pair literal".into(),
                });
            }
            *pos += 1;
            Ok(HFSet::pair(a, b))
        }
        Some(c) if c.is_ascii_digit() => {
            let mut n: usize = 0;
            while let Some(c) = bytes.get(*pos) {
                if !c.is_ascii_digit() {
                    break;
                }
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add((c - b'0') as usize))
                    .ok_or(HfsError::Parse {
                        pos: start,
                        msg: "natural literal too large".into(),
                    })?;
                *pos += 1;
            }
            if n > 64 {
                return Err(HfsError::Parse {
                    pos: start,
                    msg: format!("natural literal {} too large (max 64)", n),
                });
            }
            Ok(HFSet::von_neumann(n))
        }
        _ => Err(HfsError::Parse {
            pos: *pos,
            msg: "expected '{', '(' or a decimal natural".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hf(s: &str) -> HFSet {
        parse_hfs(s).unwrap()
    }

    #[test]
    fn canonicalize_deduplicates() {
        let e = HFSet::empty();
        let x = HFSet::from_vec(vec![e.clone(), e.clone()]);
        assert_eq!(x, HFSet::singleton(e));
    }

    #[test]
    fn canonicalize_sorts_and_dedupes_to_two() {
        // {{∅}, ∅, {∅}} → {∅, {∅}} = von Neumann 2
        let e = HFSet::empty();
        let se = HFSet::singleton(e.clone());
        let x = HFSet::from_vec(vec![se.clone(), e.clone(), se.clone()]);
        assert_eq!(x, HFSet::von_neumann(2));
    }

    #[test]
    fn ackermann_small_codes() {
        assert_eq!(HFSet::empty().ackermann_code().unwrap(), BigUint::from(0u32));
        assert_eq!(
            HFSet::singleton(HFSet::empty()).ackermann_code().unwrap(),
            BigUint::from(1u32)
        );
        // {∅, {∅}} = 2^0 + 2^1 = 3
        assert_eq!(
            HFSet::von_neumann(2).ackermann_code().unwrap(),
            BigUint::from(3u32)
        );
    }

    #[test]
    fn code_roundtrip_and_order() {
        for n in 0..=255u64 {
            let x = HFSet::from_code(n);
            assert_eq!(x.ackermann_code().unwrap(), BigUint::from(n));
        }
        // order agrees with code order, exhaustively
        for a in 0..=255u64 {
            for b in 0..=255u64 {
                let (x, y) = (HFSet::from_code(a), HFSet::from_code(b));
                assert_eq!(canonical_less(&x, &y), a < b, "codes {} {}", a, b);
            }
        }
    }

    #[test]
    fn canonical_less_total_order() {
        // trichotomy over codes < 16, plus irreflexivity and transitivity
        let pool: Vec<HFSet> = (0..16).map(HFSet::from_code).collect();
        for x in &pool {
            assert!(!canonical_less(x, x));
            for y in &pool {
                let lt = canonical_less(x, y);
                let gt = canonical_less(y, x);
                let eq = x == y;
                assert_eq!(1, lt as u8 + gt as u8 + eq as u8);
                for z in &pool {
                    if canonical_less(x, y) && canonical_less(y, z) {
                        assert!(canonical_less(x, z));
                    }
                }
            }
        }
    }

    #[test]
    fn code_budget_overflow_reported() {
        // decode(63) has an element of code 63; the budget of 6 bits is blown
        let x = HFSet::from_code(1 << 10);
        assert_eq!(
            x.ackermann_code_with(8),
            Err(HfsError::CodeBudgetExceeded { budget: 8 })
        );
    }

    #[test]
    fn pair_projections() {
        let a = HFSet::singleton(HFSet::empty());
        let b = HFSet::empty();
        let p = HFSet::pair(a.clone(), b.clone());
        assert_eq!(p.proj(0), a);
        assert_eq!(p.proj(1), b);
        // non-pairs project to ∅
        assert_eq!(HFSet::empty().proj(1), HFSet::empty());
        assert_eq!(HFSet::von_neumann(3).proj(0), HFSet::empty());
    }

    #[test]
    fn pair_injective_over_small_codes() {
        let pool: Vec<HFSet> = (0..32).map(HFSet::from_code).collect();
        let mut seen = std::collections::BTreeMap::new();
        for (i, a) in pool.iter().enumerate() {
            for (j, b) in pool.iter().enumerate() {
                let p = HFSet::pair(a.clone(), b.clone());
                if let Some(prev) = seen.insert(p, (i, j)) {
                    panic!("pair collision: {:?} vs {:?}", prev, (i, j));
                }
            }
        }
    }

    #[test]
    fn pair_rank_bound() {
        for a in (0..32).map(HFSet::from_code) {
            for b in (0..32).map(HFSet::from_code) {
                let p = HFSet::pair(a.clone(), b.clone());
                assert!(p.rank() <= a.rank().max(b.rank()) + 2);
            }
        }
    }

    #[test]
    fn tuples_nest_left() {
        let a = hf("0");
        let b = hf("1");
        let c = hf("2");
        assert_eq!(
            HFSet::tuple(&[a.clone(), b.clone(), c.clone()]),
            HFSet::pair(HFSet::pair(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(HFSet::tuple(&[a.clone()]), a);
        let t = HFSet::tuple(&[a.clone(), b.clone(), c.clone()]);
        assert_eq!(t.untuple(3), vec![a, b, c]);
    }

    #[test]
    fn von_neumann_naturals() {
        assert_eq!(HFSet::von_neumann(2), hf("{{},{{}}}"));
        // {{∅}} is not transitive, hence not a natural
        assert_eq!(HFSet::singleton(HFSet::singleton(HFSet::empty())).as_natural(), None);
        for n in 0..8 {
            assert_eq!(HFSet::von_neumann(n).as_natural(), Some(n));
        }
    }

    #[test]
    fn parse_print_roundtrip() {
        for n in 0..=600u64 {
            let x = HFSet::from_code(n);
            assert_eq!(parse_hfs(&x.to_string()).unwrap(), x);
            assert_eq!(parse_hfs(&format!("{:#}", x)).unwrap(), x);
        }
    }

    #[test]
    fn display_sugar() {
        assert_eq!(hf("3").to_string(), "3");
        assert_eq!(hf("(1,0)").to_string(), "(1,0)");
        assert_eq!(format!("{:#}", hf("2")), "{{},{{}}}");
    }
}
