//! The first-order language of set theory with an extra unary predicate `P`.
//!
//! Formulas are built from membership and equality atoms plus `P`, the
//! propositional connectives, bounded quantifiers `∀x∈t` / `∃x∈t`, and
//! unbounded quantifiers. Variables are named at the surface but bound
//! de-Bruijn-style internally, so equality of formulas is α-equivalence and
//! substitution is capture-free by construction. Binder name hints are kept
//! for printing only and ignored by `Eq`/`Hash`.

use crate::hfs::{self, HFSet};
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("{0}")]
    Hfs(#[from] hfs::HfsError),
}

/// A term: a bound variable (de Bruijn index), a named free variable, or a
/// hereditarily finite parameter constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Bound(u32),
    Free(String),
    Param(HFSet),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Free(name.to_string())
    }
    pub fn param(x: HFSet) -> Term {
        Term::Param(x)
    }
}

/// Binder name hint, used only when printing.
#[derive(Debug, Clone, Default)]
pub struct Binder {
    pub hint: String,
}

impl Binder {
    fn new(hint: &str) -> Binder {
        Binder {
            hint: hint.to_string(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Formula {
    Mem(Term, Term),
    Eq(Term, Term),
    Oracle(Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    ForallIn(Binder, Term, Box<Formula>),
    ExistsIn(Binder, Term, Box<Formula>),
    Forall(Binder, Box<Formula>),
    Exists(Binder, Box<Formula>),
}

/// Quantifier complexity classes. Δ₀ formulas are reported `Delta0` even
/// though they are trivially also Σ₁ and Π₁; callers may coerce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaClass {
    Delta0,
    Sigma1,
    Pi1,
    General,
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormulaClass::Delta0 => "delta0",
            FormulaClass::Sigma1 => "sigma1",
            FormulaClass::Pi1 => "pi1",
            FormulaClass::General => "general",
        };
        write!(f, "{}", s)
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        use Formula::*;
        match (self, other) {
            (Mem(a, b), Mem(c, d)) | (Eq(a, b), Eq(c, d)) => a == c && b == d,
            (Oracle(a), Oracle(b)) => a == b,
            (And(a, b), And(c, d)) | (Or(a, b), Or(c, d)) | (Implies(a, b), Implies(c, d)) => {
                a == c && b == d
            }
            (Not(a), Not(b)) => a == b,
            (ForallIn(_, t, a), ForallIn(_, u, b)) | (ExistsIn(_, t, a), ExistsIn(_, u, b)) => {
                t == u && a == b
            }
            (Forall(_, a), Forall(_, b)) | (Exists(_, a), Exists(_, b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        use Formula::*;
        match self {
            Mem(a, b) => {
                0u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Eq(a, b) => {
                1u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Oracle(a) => {
                2u8.hash(state);
                a.hash(state);
            }
            And(a, b) => {
                3u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Or(a, b) => {
                4u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Implies(a, b) => {
                5u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Not(a) => {
                6u8.hash(state);
                a.hash(state);
            }
            ForallIn(_, t, a) => {
                7u8.hash(state);
                t.hash(state);
                a.hash(state);
            }
            ExistsIn(_, t, a) => {
                8u8.hash(state);
                t.hash(state);
                a.hash(state);
            }
            Forall(_, a) => {
                9u8.hash(state);
                a.hash(state);
            }
            Exists(_, a) => {
                10u8.hash(state);
                a.hash(state);
            }
        }
    }
}

// ---------- constructors ----------

/// The canonical refutable Δ₀ sentence 0 ∈ 0, used as absurdity.
pub fn absurd() -> Formula {
    Formula::Mem(Term::param(HFSet::empty()), Term::param(HFSet::empty()))
}

/// The canonical true Δ₀ sentence 0 = 0.
pub fn truth() -> Formula {
    Formula::Eq(Term::param(HFSet::empty()), Term::param(HFSet::empty()))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Formula::And(Box::new(a), Box::new(b))
}
pub fn or(a: Formula, b: Formula) -> Formula {
    Formula::Or(Box::new(a), Box::new(b))
}
pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}
pub fn not(a: Formula) -> Formula {
    Formula::Not(Box::new(a))
}
pub fn mem(a: Term, b: Term) -> Formula {
    Formula::Mem(a, b)
}
pub fn eq(a: Term, b: Term) -> Formula {
    Formula::Eq(a, b)
}
pub fn oracle(a: Term) -> Formula {
    Formula::Oracle(a)
}

/// Right-fold of a conjunction list; the empty conjunction is `truth()`.
pub fn and_all(mut fs: Vec<Formula>) -> Formula {
    match fs.len() {
        0 => truth(),
        1 => fs.pop().unwrap(),
        _ => {
            let rest = fs.split_off(1);
            and(fs.pop().unwrap(), and_all(rest))
        }
    }
}

/// Right-fold of a disjunction list; the empty disjunction is `absurd()`.
pub fn or_all(mut fs: Vec<Formula>) -> Formula {
    match fs.len() {
        0 => absurd(),
        1 => fs.pop().unwrap(),
        _ => {
            let rest = fs.split_off(1);
            or(fs.pop().unwrap(), or_all(rest))
        }
    }
}

impl Formula {
    /// ∀`name` φ — closes the free variable `name` in `body`.
    pub fn forall(name: &str, body: Formula) -> Formula {
        Formula::Forall(Binder::new(name), Box::new(body.abstracted(name)))
    }

    /// ∃`name` φ.
    pub fn exists(name: &str, body: Formula) -> Formula {
        Formula::Exists(Binder::new(name), Box::new(body.abstracted(name)))
    }

    /// ∀`name` ∈ `bound` φ. The bound is evaluated outside the new scope.
    pub fn forall_in(name: &str, bound: Term, body: Formula) -> Formula {
        Formula::ForallIn(Binder::new(name), bound, Box::new(body.abstracted(name)))
    }

    /// ∃`name` ∈ `bound` φ.
    pub fn exists_in(name: &str, bound: Term, body: Formula) -> Formula {
        Formula::ExistsIn(Binder::new(name), bound, Box::new(body.abstracted(name)))
    }

    fn map_terms(&self, f: &mut impl FnMut(&Term, u32) -> Term, depth: u32) -> Formula {
        use Formula::*;
        match self {
            Mem(a, b) => Mem(f(a, depth), f(b, depth)),
            Eq(a, b) => Eq(f(a, depth), f(b, depth)),
            Oracle(a) => Oracle(f(a, depth)),
            And(a, b) => And(
                Box::new(a.map_terms(f, depth)),
                Box::new(b.map_terms(f, depth)),
            ),
            Or(a, b) => Or(
                Box::new(a.map_terms(f, depth)),
                Box::new(b.map_terms(f, depth)),
            ),
            Implies(a, b) => Implies(
                Box::new(a.map_terms(f, depth)),
                Box::new(b.map_terms(f, depth)),
            ),
            Not(a) => Not(Box::new(a.map_terms(f, depth))),
            ForallIn(h, t, a) => {
                ForallIn(h.clone(), f(t, depth), Box::new(a.map_terms(f, depth + 1)))
            }
            ExistsIn(h, t, a) => {
                ExistsIn(h.clone(), f(t, depth), Box::new(a.map_terms(f, depth + 1)))
            }
            Forall(h, a) => Forall(h.clone(), Box::new(a.map_terms(f, depth + 1))),
            Exists(h, a) => Exists(h.clone(), Box::new(a.map_terms(f, depth + 1))),
        }
    }

    /// Replaces `Free(name)` by the index bound directly above this formula.
    fn abstracted(&self, name: &str) -> Formula {
        self.map_terms(
            &mut |t, depth| match t {
                Term::Free(n) if n == name => Term::Bound(depth),
                other => other.clone(),
            },
            0,
        )
    }

    /// Opens the outermost binder scope: replaces its variable by `t` and
    /// shifts deeper indices down.
    pub fn opened(&self, t: &Term) -> Formula {
        self.map_terms(
            &mut |term, depth| match term {
                Term::Bound(i) => {
                    if *i == depth {
                        t.clone()
                    } else if *i > depth {
                        Term::Bound(*i - 1)
                    } else {
                        term.clone()
                    }
                }
                other => other.clone(),
            },
            0,
        )
    }

    /// Capture-avoiding substitution of a free variable by a variable or
    /// parameter term.
    pub fn substitute(&self, name: &str, t: &Term) -> Formula {
        self.map_terms(
            &mut |term, _| match term {
                Term::Free(n) if n == name => t.clone(),
                other => other.clone(),
            },
            0,
        )
    }

    /// The set of free variable names.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t, _| {
            if let Term::Free(n) = t {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn visit_terms(&self, f: &mut impl FnMut(&Term, u32)) {
        fn go(phi: &Formula, f: &mut impl FnMut(&Term, u32), depth: u32) {
            use Formula::*;
            match phi {
                Mem(a, b) | Eq(a, b) => {
                    f(a, depth);
                    f(b, depth);
                }
                Oracle(a) => f(a, depth),
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    go(a, f, depth);
                    go(b, f, depth);
                }
                Not(a) => go(a, f, depth),
                ForallIn(_, t, a) | ExistsIn(_, t, a) => {
                    f(t, depth);
                    go(a, f, depth + 1);
                }
                Forall(_, a) | Exists(_, a) => go(a, f, depth + 1),
            }
        }
        go(self, f, 0)
    }

    /// All parameter constants occurring in the formula.
    pub fn params(&self) -> Vec<HFSet> {
        let mut out = Vec::new();
        self.visit_terms(&mut |t, _| {
            if let Term::Param(c) = t {
                out.push(c.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    /// Node count, with atoms counting 1.
    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            Mem(..) | Eq(..) | Oracle(..) => 1,
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.size() + b.size(),
            Not(a) => 1 + a.size(),
            ForallIn(_, _, a) | ExistsIn(_, _, a) | Forall(_, a) | Exists(_, a) => 1 + a.size(),
        }
    }

    fn has_unbounded(&self) -> bool {
        use Formula::*;
        match self {
            Mem(..) | Eq(..) | Oracle(..) => false,
            And(a, b) | Or(a, b) | Implies(a, b) => a.has_unbounded() || b.has_unbounded(),
            Not(a) => a.has_unbounded(),
            ForallIn(_, _, a) | ExistsIn(_, _, a) => a.has_unbounded(),
            Forall(..) | Exists(..) => true,
        }
    }

    /// Δ₀ iff no unbounded quantifier occurs; Σ₁ iff a non-empty prefix of
    /// unbounded ∃ sits over a Δ₀ matrix; Π₁ dually; `General` otherwise.
    pub fn classify(&self) -> FormulaClass {
        if !self.has_unbounded() {
            return FormulaClass::Delta0;
        }
        let mut cur = self;
        let mut ex = 0usize;
        while let Formula::Exists(_, body) = cur {
            cur = body;
            ex += 1;
        }
        if ex > 0 && !cur.has_unbounded() {
            return FormulaClass::Sigma1;
        }
        let mut cur = self;
        let mut fa = 0usize;
        while let Formula::Forall(_, body) = cur {
            cur = body;
            fa += 1;
        }
        if fa > 0 && !cur.has_unbounded() {
            return FormulaClass::Pi1;
        }
        FormulaClass::General
    }

    /// Rewrites `¬φ` to `φ → 0∈0` everywhere. The kernel and the
    /// realizability checker work on this normal form.
    pub fn expand_not(&self) -> Formula {
        use Formula::*;
        match self {
            Not(a) => implies(a.expand_not(), absurd()),
            Mem(..) | Eq(..) | Oracle(..) => self.clone(),
            And(a, b) => and(a.expand_not(), b.expand_not()),
            Or(a, b) => or(a.expand_not(), b.expand_not()),
            Implies(a, b) => implies(a.expand_not(), b.expand_not()),
            ForallIn(h, t, a) => ForallIn(h.clone(), t.clone(), Box::new(a.expand_not())),
            ExistsIn(h, t, a) => ExistsIn(h.clone(), t.clone(), Box::new(a.expand_not())),
            Forall(h, a) => Forall(h.clone(), Box::new(a.expand_not())),
            Exists(h, a) => Exists(h.clone(), Box::new(a.expand_not())),
        }
    }

    /// Whether the formula is a sentence (no free variables, no dangling
    /// indices).
    pub fn is_closed(&self) -> bool {
        let mut closed = true;
        self.visit_terms(&mut |t, depth| match t {
            Term::Free(_) => closed = false,
            Term::Bound(i) => {
                if *i >= depth {
                    closed = false;
                }
            }
            Term::Param(_) => {}
        });
        closed
    }
}

/// The canonical machine variable name `x1`, `x2`, …
pub fn xvar(i: usize) -> String {
    format!("x{}", i)
}

/// If `name` is a canonical machine variable `x{i}` with `i ≥ 1`, returns `i`.
pub fn xvar_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

// ---------- Gödel numbering ----------

fn tag(n: usize) -> HFSet {
    HFSet::von_neumann(n)
}

fn str_code(s: &str) -> HFSet {
    let bytes: Vec<HFSet> = s.bytes().map(|b| HFSet::from_code(b as u64)).collect();
    HFSet::pair(HFSet::von_neumann(bytes.len()), HFSet::tuple(&bytes))
}

fn str_decode(x: &HFSet) -> Option<String> {
    let (len, body) = x.as_pair()?;
    let n = len.as_natural()?;
    if n == 0 {
        return if body.is_empty() {
            Some(String::new())
        } else {
            None
        };
    }
    let parts = body.untuple(n);
    let mut bytes = Vec::with_capacity(n);
    for part in parts {
        let code = part.ackermann_code().ok()?;
        let digits = code.to_u64_digits();
        let b = if digits.is_empty() { 0 } else { digits[0] };
        if b > 255 {
            return None;
        }
        bytes.push(b as u8);
    }
    String::from_utf8(bytes).ok()
}

fn term_code(t: &Term) -> HFSet {
    match t {
        Term::Bound(i) => HFSet::pair(tag(0), HFSet::von_neumann(*i as usize)),
        Term::Free(n) => HFSet::pair(tag(1), str_code(n)),
        Term::Param(c) => HFSet::pair(tag(2), c.clone()),
    }
}

fn term_decode(x: &HFSet) -> Option<Term> {
    let (t, payload) = x.as_pair()?;
    match t.as_natural()? {
        0 => Some(Term::Bound(payload.as_natural()? as u32)),
        1 => Some(Term::Free(str_decode(payload)?)),
        2 => Some(Term::Param(payload.clone())),
        _ => None,
    }
}

/// Structural Gödel numbering into HF: `pair(tag, payload)` per node, built
/// solely from pairing and von Neumann naturals, so every code is itself a
/// hereditarily finite set.
pub fn godel_number(phi: &Formula) -> HFSet {
    use Formula::*;
    match phi {
        Mem(a, b) => HFSet::pair(tag(0), HFSet::pair(term_code(a), term_code(b))),
        Eq(a, b) => HFSet::pair(tag(1), HFSet::pair(term_code(a), term_code(b))),
        Oracle(a) => HFSet::pair(tag(2), term_code(a)),
        And(a, b) => HFSet::pair(tag(3), HFSet::pair(godel_number(a), godel_number(b))),
        Or(a, b) => HFSet::pair(tag(4), HFSet::pair(godel_number(a), godel_number(b))),
        Implies(a, b) => HFSet::pair(tag(5), HFSet::pair(godel_number(a), godel_number(b))),
        Not(a) => HFSet::pair(tag(6), godel_number(a)),
        ForallIn(_, t, a) => HFSet::pair(tag(7), HFSet::pair(term_code(t), godel_number(a))),
        ExistsIn(_, t, a) => HFSet::pair(tag(8), HFSet::pair(term_code(t), godel_number(a))),
        Forall(_, a) => HFSet::pair(tag(9), godel_number(a)),
        Exists(_, a) => HFSet::pair(tag(10), godel_number(a)),
    }
}

/// Inverse of [`godel_number`] on its image; `None` elsewhere. Binder hints
/// are synthesised when printing (the coding never stores them).
pub fn godel_decode(x: &HFSet) -> Option<Formula> {
    use Formula::*;
    let (t, payload) = x.as_pair()?;
    let b = Binder::new("");
    match t.as_natural()? {
        0 => {
            let (a, bb) = payload.as_pair()?;
            Some(Mem(term_decode(a)?, term_decode(bb)?))
        }
        1 => {
            let (a, bb) = payload.as_pair()?;
            Some(Eq(term_decode(a)?, term_decode(bb)?))
        }
        2 => Some(Oracle(term_decode(payload)?)),
        3 => {
            let (a, bb) = payload.as_pair()?;
            Some(and(godel_decode(a)?, godel_decode(bb)?))
        }
        4 => {
            let (a, bb) = payload.as_pair()?;
            Some(or(godel_decode(a)?, godel_decode(bb)?))
        }
        5 => {
            let (a, bb) = payload.as_pair()?;
            Some(implies(godel_decode(a)?, godel_decode(bb)?))
        }
        6 => Some(not(godel_decode(payload)?)),
        7 => {
            let (tm, body) = payload.as_pair()?;
            Some(ForallIn(b, term_decode(tm)?, Box::new(godel_decode(body)?)))
        }
        8 => {
            let (tm, body) = payload.as_pair()?;
            Some(ExistsIn(b, term_decode(tm)?, Box::new(godel_decode(body)?)))
        }
        9 => Some(Forall(b, Box::new(godel_decode(payload)?))),
        10 => Some(Exists(b, Box::new(godel_decode(payload)?))),
        _ => None,
    }
}

// ---------- printing ----------

struct Printer<'a> {
    out: &'a mut String,
    scope: Vec<String>,
}

impl<'a> Printer<'a> {
    fn fresh_name(&self, hint: &str, body: &Formula) -> String {
        // Names the binder must not collide with: free variables of the body
        // and outer binder names that the body actually references.
        let mut taken: BTreeSet<String> = body.free_vars();
        body.visit_terms(&mut |t, depth| {
            if let Term::Bound(i) = t {
                if *i > depth {
                    let outer = (*i - depth - 1) as usize;
                    if outer < self.scope.len() {
                        taken.insert(self.scope[self.scope.len() - 1 - outer].clone());
                    }
                }
            }
        });
        let base = if hint.is_empty() || !is_symbol(hint) {
            "x"
        } else {
            hint
        };
        if !taken.contains(base) {
            return base.to_string();
        }
        for k in 1.. {
            let cand = format!("{}{}", base, k);
            if !taken.contains(&cand) {
                return cand;
            }
        }
        unreachable!()
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Bound(i) => {
                let idx = self.scope.len() as i64 - 1 - *i as i64;
                if idx >= 0 {
                    let name = self.scope[idx as usize].clone();
                    self.out.push_str(&name);
                } else {
                    // dangling index; print a placeholder that will not parse
                    self.out.push_str(&format!("?b{}", i));
                }
            }
            Term::Free(n) => self.out.push_str(n),
            Term::Param(c) => {
                self.out.push('#');
                self.out.push_str(&format!("{:#}", c));
            }
        }
    }

    fn binder(&mut self, kw: &str, hint: &str, bound: Option<&Term>, body: &Formula) {
        let name = self.fresh_name(hint, body);
        self.out.push('(');
        self.out.push_str(kw);
        self.out.push(' ');
        self.out.push_str(&name);
        if let Some(b) = bound {
            self.out.push(' ');
            self.term(b);
        }
        self.out.push(' ');
        self.scope.push(name);
        self.formula(body);
        self.scope.pop();
        self.out.push(')');
    }

    fn binary(&mut self, kw: &str, a: &Formula, b: &Formula) {
        self.out.push('(');
        self.out.push_str(kw);
        self.out.push(' ');
        self.formula(a);
        self.out.push(' ');
        self.formula(b);
        self.out.push(')');
    }

    fn formula(&mut self, phi: &Formula) {
        use Formula::*;
        match phi {
            Mem(a, b) => {
                self.out.push_str("(mem ");
                self.term(a);
                self.out.push(' ');
                self.term(b);
                self.out.push(')');
            }
            Eq(a, b) => {
                self.out.push_str("(= ");
                self.term(a);
                self.out.push(' ');
                self.term(b);
                self.out.push(')');
            }
            Oracle(a) => {
                self.out.push_str("(P ");
                self.term(a);
                self.out.push(')');
            }
            And(a, b) => self.binary("and", a, b),
            Or(a, b) => self.binary("or", a, b),
            Implies(a, b) => self.binary("->", a, b),
            Not(a) => {
                self.out.push_str("(not ");
                self.formula(a);
                self.out.push(')');
            }
            ForallIn(h, t, a) => self.binder("all-in", &h.hint, Some(t), a),
            ExistsIn(h, t, a) => self.binder("ex-in", &h.hint, Some(t), a),
            Forall(h, a) => self.binder("all", &h.hint, None, a),
            Exists(h, a) => self.binder("ex", &h.hint, None, a),
        }
    }
}

/// Prints a formula in the s-expression surface syntax.
pub fn print_formula(phi: &Formula) -> String {
    let mut out = String::new();
    let mut p = Printer {
        out: &mut out,
        scope: Vec::new(),
    };
    p.formula(phi);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_formula(self))
    }
}

// ---------- parsing ----------

fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    scope: Vec<String>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b';' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), SyntaxError> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn symbol(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos];
            if c.is_ascii_alphanumeric() || c == b'_' || c == b'-' || c == b'>' || c == b'=' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected a symbol");
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'#') => {
                self.pos += 1;
                let set = hfs::parse_set(self.bytes, &mut self.pos).map_err(SyntaxError::Hfs)?;
                Ok(Term::Param(set))
            }
            _ => {
                let name = self.symbol()?;
                if !is_symbol(&name) {
                    return self.err(&format!("'{}' is not a valid variable name", name));
                }
                // innermost binder wins
                for (i, n) in self.scope.iter().rev().enumerate() {
                    if *n == name {
                        return Ok(Term::Bound(i as u32));
                    }
                }
                Ok(Term::Free(name))
            }
        }
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        self.expect(b'(')?;
        let head = self.symbol()?;
        let phi = match head.as_str() {
            "mem" => {
                let a = self.term()?;
                let b = self.term()?;
                Formula::Mem(a, b)
            }
            "=" => {
                let a = self.term()?;
                let b = self.term()?;
                Formula::Eq(a, b)
            }
            "P" => Formula::Oracle(self.term()?),
            "and" | "or" | "->" => {
                let a = self.formula()?;
                let b = self.formula()?;
                match head.as_str() {
                    "and" => and(a, b),
                    "or" => or(a, b),
                    _ => implies(a, b),
                }
            }
            "not" => not(self.formula()?),
            "all" | "ex" => {
                let v = self.symbol()?;
                if !is_symbol(&v) {
                    return self.err("expected a variable name after quantifier");
                }
                self.scope.push(v.clone());
                let body = self.formula()?;
                self.scope.pop();
                if head == "all" {
                    Formula::Forall(Binder::new(&v), Box::new(body))
                } else {
                    Formula::Exists(Binder::new(&v), Box::new(body))
                }
            }
            "all-in" | "ex-in" => {
                let v = self.symbol()?;
                if !is_symbol(&v) {
                    return self.err("expected a variable name after bounded quantifier");
                }
                let bound = self.term()?;
                self.scope.push(v.clone());
                let body = self.formula()?;
                self.scope.pop();
                if head == "all-in" {
                    Formula::ForallIn(Binder::new(&v), bound, Box::new(body))
                } else {
                    Formula::ExistsIn(Binder::new(&v), bound, Box::new(body))
                }
            }
            other => return self.err(&format!("unknown form '{}'", other)),
        };
        self.expect(b')')?;
        Ok(phi)
    }
}

/// Parses a formula from the s-expression surface syntax.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        scope: Vec::new(),
    };
    let phi = p.formula()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.err("trailing input after formula");
    }
    Ok(phi)
}

pub mod stdform;

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parse_bounded_forall() {
        let phi = pf("(all-in x a (or (= x #0) (mem x a)))");
        match &phi {
            Formula::ForallIn(_, Term::Free(a), body) => {
                assert_eq!(a, "a");
                match body.as_ref() {
                    Formula::Or(l, r) => {
                        assert_eq!(**l, eq(Term::Bound(0), Term::param(HFSet::empty())));
                        assert_eq!(**r, mem(Term::Bound(0), Term::var("a")));
                    }
                    _ => panic!("bad body"),
                }
            }
            _ => panic!("bad parse"),
        }
    }

    #[test]
    fn parse_exists() {
        let phi = pf("(ex z (mem z z))");
        assert_eq!(
            phi,
            Formula::exists("z", mem(Term::var("z"), Term::var("z")))
        );
    }

    #[test]
    fn print_parse_roundtrip() {
        for s in [
            "(all-in x a (or (= x #{}) (mem x a)))",
            "(ex z (mem z z))",
            "(-> (P y) (not (mem y #{{},{{}}})))",
            "(ex w (all-in u w (ex-in v u (= v w))))",
        ] {
            let phi = pf(s);
            assert_eq!(print_formula(&phi), s);
            assert_eq!(pf(&print_formula(&phi)), phi);
        }
    }

    #[test]
    fn classify_examples() {
        // ∀x∈a ∃y∈x P(y) is Δ₀
        assert_eq!(
            pf("(all-in x a (ex-in y x (P y)))").classify(),
            FormulaClass::Delta0
        );
        // ∃z ∀x∈z x=x is Σ₁
        assert_eq!(
            pf("(ex z (all-in x z (= x x)))").classify(),
            FormulaClass::Sigma1
        );
        // ∀z ∃w z∈w is General
        assert_eq!(
            pf("(all z (ex w (mem z w)))").classify(),
            FormulaClass::General
        );
        assert_eq!(
            pf("(all z (all-in x z (mem x z)))").classify(),
            FormulaClass::Pi1
        );
    }

    #[test]
    fn delta0_subformulas_stay_delta0() {
        fn subformulas(phi: &Formula, out: &mut Vec<Formula>) {
            use Formula::*;
            out.push(phi.clone());
            match phi {
                And(a, b) | Or(a, b) | Implies(a, b) => {
                    subformulas(a, out);
                    subformulas(b, out);
                }
                Not(a) | ForallIn(_, _, a) | ExistsIn(_, _, a) | Forall(_, a) | Exists(_, a) => {
                    subformulas(a, out)
                }
                _ => {}
            }
        }
        let phi = pf("(and (all-in x a (P x)) (not (ex-in y a (= y #1))))");
        assert_eq!(phi.classify(), FormulaClass::Delta0);
        let mut subs = Vec::new();
        subformulas(&phi, &mut subs);
        for s in subs {
            assert_eq!(s.classify(), FormulaClass::Delta0);
        }
    }

    #[test]
    fn substitution_basics() {
        let phi = pf("(mem x y)");
        assert_eq!(
            phi.substitute("x", &Term::param(HFSet::empty())),
            pf("(mem #{} y)")
        );
        // bound occurrences are untouched
        let phi = pf("(all x (mem x y))");
        assert_eq!(phi.substitute("x", &Term::param(HFSet::empty())), phi);
    }

    #[test]
    fn substitution_avoids_capture() {
        // substitute(∃y x∈y, x := y) must not capture the inserted y
        let phi = pf("(ex y (mem x y))");
        let sub = phi.substitute("x", &Term::var("y"));
        assert_eq!(
            sub,
            Formula::Exists(
                Binder::new("y"),
                Box::new(mem(Term::var("y"), Term::Bound(0)))
            )
        );
        let printed = print_formula(&sub);
        assert_eq!(pf(&printed), sub);
        assert_ne!(printed, "(ex y (mem y y))");
    }

    #[test]
    fn substitution_commutes_for_distinct_vars() {
        let phi = pf("(and (mem x y) (ex z (or (mem x z) (P y))))");
        let c = Term::param(HFSet::von_neumann(1));
        let d = Term::param(HFSet::von_neumann(2));
        let ab = phi.substitute("x", &c).substitute("y", &d);
        let ba = phi.substitute("y", &d).substitute("x", &c);
        assert_eq!(ab, ba);
    }

    #[test]
    fn free_vars_after_substitution() {
        let phi = pf("(and (mem x y) (P x))");
        let sub = phi.substitute("x", &Term::param(HFSet::empty()));
        let fv = sub.free_vars();
        assert!(!fv.contains("x"));
        assert!(fv.contains("y"));
    }

    #[test]
    fn godel_roundtrip() {
        for s in [
            "(= x1 x1)",
            "(all-in x a (ex-in y x (P y)))",
            "(-> (mem x1 #2) (or (= x1 #{}) (not (P x1))))",
            "(ex z (all-in x z (= x x)))",
        ] {
            let phi = pf(s);
            let code = godel_number(&phi);
            assert_eq!(godel_decode(&code), Some(phi));
        }
    }

    #[test]
    fn godel_code_is_a_pair() {
        let phi = pf("(= x1 x1)");
        assert!(godel_number(&phi).is_pair());
    }

    #[test]
    fn godel_injective_on_small_fragment() {
        let params = [HFSet::empty(), HFSet::singleton(HFSet::empty())];
        let terms: Vec<Term> = params
            .iter()
            .map(|p| Term::param(p.clone()))
            .chain([Term::var("x1")])
            .collect();
        let mut atoms = Vec::new();
        for a in &terms {
            for b in &terms {
                atoms.push(mem(a.clone(), b.clone()));
                atoms.push(eq(a.clone(), b.clone()));
            }
            atoms.push(oracle(a.clone()));
        }
        let mut all: Vec<Formula> = atoms.clone();
        for a in &atoms {
            all.push(not(a.clone()));
            all.push(Formula::forall("y", a.clone()));
            all.push(Formula::exists_in("y", Term::var("x1"), a.clone()));
            for b in &atoms {
                all.push(and(a.clone(), b.clone()));
                all.push(or(a.clone(), b.clone()));
                all.push(implies(a.clone(), b.clone()));
            }
        }
        let mut seen = std::collections::HashMap::new();
        for phi in &all {
            let code = godel_number(phi);
            if let Some(prev) = seen.insert(code, phi.clone()) {
                assert_eq!(prev, *phi, "distinct formulas share a code");
            }
        }
    }

    #[test]
    fn expand_not_form() {
        let phi = pf("(not (P x))");
        assert_eq!(phi.expand_not(), pf("(-> (P x) (mem #{} #{}))"));
    }

    #[test]
    fn parse_error_positions() {
        let err = parse_formula("(mem x").unwrap_err();
        match err {
            SyntaxError::Parse { pos, .. } => assert_eq!(pos, 6),
            _ => panic!(),
        }
        assert!(parse_formula("(frob x y)").is_err());
    }
}
