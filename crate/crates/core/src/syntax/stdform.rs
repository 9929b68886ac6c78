//! A library of standard Δ₀ formula shapes over the Kuratowski coding:
//! pair-hood, projections, singletons, successor, unions, separation
//! characterizations, function-hood. The witness solver recognizes these
//! exact shapes, so everything that wants solver support (the machine, the
//! extractor, the axiom schemas) builds through here rather than by hand.
//!
//! All builders take [`Term`]s for the participating sets and close their own
//! internal bound variables, so the returned formulas are Δ₀ in the inputs.

use super::{and, and_all, eq, mem, not, or, Formula, Term};

/// Internal fresh names; the parser cannot produce `%`-prefixed symbols, so
/// these never collide with user variables.
pub struct Fresh(usize);

impl Fresh {
    pub fn new() -> Fresh {
        Fresh(0)
    }
    pub fn name(&mut self) -> String {
        let n = format!("%{}", self.0);
        self.0 += 1;
        n
    }
}

impl Default for Fresh {
    fn default() -> Self {
        Fresh::new()
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

/// t = ∅ : ∀w∈t ⊥.
pub fn empty_eq(t: &Term) -> Formula {
    let mut f = Fresh::new();
    let w = f.name();
    Formula::forall_in(&w, t.clone(), super::absurd())
}

/// a ⊆ b : ∀w∈a w∈b.
pub fn subset_of(a: &Term, b: &Term) -> Formula {
    let mut f = Fresh::new();
    let w = f.name();
    Formula::forall_in(&w, a.clone(), mem(v(&w), b.clone()))
}

/// s = {x} : x∈s ∧ ∀w∈s w=x.
pub fn sing_eq(s: &Term, x: &Term) -> Formula {
    let mut f = Fresh::new();
    let w = f.name();
    and(
        mem(x.clone(), s.clone()),
        Formula::forall_in(&w, s.clone(), eq(v(&w), x.clone())),
    )
}

/// z = {x, y} : x∈z ∧ y∈z ∧ ∀w∈z (w=x ∨ w=y).
pub fn upair_eq(z: &Term, x: &Term, y: &Term) -> Formula {
    let mut f = Fresh::new();
    let w = f.name();
    and_all(vec![
        mem(x.clone(), z.clone()),
        mem(y.clone(), z.clone()),
        Formula::forall_in(
            &w,
            z.clone(),
            or(eq(v(&w), x.clone()), eq(v(&w), y.clone())),
        ),
    ])
}

/// y = x ∪ {x} : x∈y ∧ ∀w∈x w∈y ∧ ∀w∈y (w∈x ∨ w=x).
pub fn succ_eq(y: &Term, x: &Term) -> Formula {
    let mut f = Fresh::new();
    let w1 = f.name();
    let w2 = f.name();
    and_all(vec![
        mem(x.clone(), y.clone()),
        Formula::forall_in(&w1, x.clone(), mem(v(&w1), y.clone())),
        Formula::forall_in(
            &w2,
            y.clone(),
            or(mem(v(&w2), x.clone()), eq(v(&w2), x.clone())),
        ),
    ])
}

/// z = x ∪ y.
pub fn union2_eq(z: &Term, x: &Term, y: &Term) -> Formula {
    let mut f = Fresh::new();
    let w1 = f.name();
    let w2 = f.name();
    let w3 = f.name();
    and_all(vec![
        Formula::forall_in(&w1, x.clone(), mem(v(&w1), z.clone())),
        Formula::forall_in(&w2, y.clone(), mem(v(&w2), z.clone())),
        Formula::forall_in(
            &w3,
            z.clone(),
            or(mem(v(&w3), x.clone()), mem(v(&w3), y.clone())),
        ),
    ])
}

/// z = ∪a : ∀y∈a ∀w∈y w∈z ∧ ∀w∈z ∃y∈a w∈y.
pub fn bigunion_eq(z: &Term, a: &Term) -> Formula {
    let mut f = Fresh::new();
    let y1 = f.name();
    let w1 = f.name();
    let w2 = f.name();
    let y2 = f.name();
    and(
        Formula::forall_in(
            &y1,
            a.clone(),
            Formula::forall_in(&w1, v(&y1), mem(v(&w1), z.clone())),
        ),
        Formula::forall_in(
            &w2,
            z.clone(),
            Formula::exists_in(&y2, a.clone(), mem(v(&w2), v(&y2))),
        ),
    )
}

/// d = ⟨x, y⟩ (Kuratowski): ∃s∈d ∃t∈d [s = {x} ∧ t = {x,y} ∧ ∀w∈d (w=s ∨ w=t)].
pub fn pair_with(d: &Term, x: &Term, y: &Term) -> Formula {
    let mut f = Fresh::new();
    let s = f.name();
    let t = f.name();
    let w = f.name();
    let body = and_all(vec![
        sing_eq(&v(&s), x),
        upair_eq(&v(&t), x, y),
        Formula::forall_in(&w, d.clone(), or(eq(v(&w), v(&s)), eq(v(&w), v(&t)))),
    ]);
    Formula::exists_in(&s, d.clone(), Formula::exists_in(&t, d.clone(), body))
}

/// d is an ordered pair.
pub fn is_pair(d: &Term) -> Formula {
    let mut f = Fresh::new();
    let s = f.name();
    let x = f.name();
    let t = f.name();
    let y = f.name();
    Formula::exists_in(
        &s,
        d.clone(),
        Formula::exists_in(
            &x,
            v(&s),
            Formula::exists_in(
                &t,
                d.clone(),
                Formula::exists_in(&y, v(&t), pair_with(d, &v(&x), &v(&y))),
            ),
        ),
    )
}

/// fst(d) = x, for pairs: ∃t∈d ∃y∈t d = ⟨x, y⟩.
pub fn fst_is(d: &Term, x: &Term) -> Formula {
    let mut f = Fresh::new();
    let t = f.name();
    let y = f.name();
    Formula::exists_in(
        &t,
        d.clone(),
        Formula::exists_in(&y, v(&t), pair_with(d, x, &v(&y))),
    )
}

/// snd(d) = y, for pairs: ∃s∈d ∃x∈s d = ⟨x, y⟩.
pub fn snd_is(d: &Term, y: &Term) -> Formula {
    let mut f = Fresh::new();
    let s = f.name();
    let x = f.name();
    Formula::exists_in(
        &s,
        d.clone(),
        Formula::exists_in(&x, v(&s), pair_with(d, &v(&x), y)),
    )
}

/// ⟨x, y⟩ ∈ f : ∃p∈f p = ⟨x, y⟩.
pub fn pair_mem(f_: &Term, x: &Term, y: &Term) -> Formula {
    let mut f = Fresh::new();
    let p = f.name();
    Formula::exists_in(&p, f_.clone(), pair_with(&v(&p), x, y))
}

/// x = {u ∈ a : m(u)} where `matrix` has the distinguished free variable
/// `hole` standing for u.
pub fn sep_char(x: &Term, a: &Term, hole: &str, matrix: &Formula) -> Formula {
    let mut f = Fresh::new();
    let u1 = f.name();
    let u2 = f.name();
    and(
        Formula::forall_in(
            &u1,
            x.clone(),
            and(
                mem(v(&u1), a.clone()),
                matrix.substitute(hole, &v(&u1)),
            ),
        ),
        Formula::forall_in(
            &u2,
            a.clone(),
            Formula::Implies(
                Box::new(matrix.substitute(hole, &v(&u2))),
                Box::new(mem(v(&u2), x.clone())),
            ),
        ),
    )
}

/// f is a function: every member is a pair, and first components determine
/// second components.
pub fn is_fun(f_: &Term) -> Formula {
    let mut fr = Fresh::new();
    let p = fr.name();
    let q = fr.name();
    let s = fr.name();
    let x = fr.name();
    let t = fr.name();
    let y = fr.name();
    let s2 = fr.name();
    let x2 = fr.name();
    let t2 = fr.name();
    let y2 = fr.name();
    let all_pairs = Formula::forall_in(&p, f_.clone(), is_pair(&v(&p)));
    // ∀p,q∈f: destructure both; equal firsts force equal seconds
    let sv_body = Formula::exists_in(
        &s,
        v(&p),
        Formula::exists_in(
            &x,
            v(&s),
            Formula::exists_in(
                &t,
                v(&p),
                Formula::exists_in(
                    &y,
                    v(&t),
                    and(
                        pair_with(&v(&p), &v(&x), &v(&y)),
                        Formula::exists_in(
                            &s2,
                            v(&q),
                            Formula::exists_in(
                                &x2,
                                v(&s2),
                                Formula::exists_in(
                                    &t2,
                                    v(&q),
                                    Formula::exists_in(
                                        &y2,
                                        v(&t2),
                                        and(
                                            pair_with(&v(&q), &v(&x2), &v(&y2)),
                                            Formula::Implies(
                                                Box::new(eq(v(&x), v(&x2))),
                                                Box::new(eq(v(&y), v(&y2))),
                                            ),
                                        ),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    let single_valued =
        Formula::forall_in(&p, f_.clone(), Formula::forall_in(&q, f_.clone(), sv_body));
    and(all_pairs, single_valued)
}

/// dom(f) = a : every member of f has its first component in a, and every
/// element of a is a first component.
pub fn dom_eq(f_: &Term, a: &Term) -> Formula {
    let mut fr = Fresh::new();
    let p = fr.name();
    let x1 = fr.name();
    let x2 = fr.name();
    let p2 = fr.name();
    and(
        Formula::forall_in(
            &p,
            f_.clone(),
            Formula::exists_in(&x1, a.clone(), fst_is(&v(&p), &v(&x1))),
        ),
        Formula::forall_in(
            &x2,
            a.clone(),
            Formula::exists_in(&p2, f_.clone(), fst_is(&v(&p2), &v(&x2))),
        ),
    )
}

/// w is a rank table: a function whose entries ⟨u, r⟩ satisfy
/// r = strict sup of the table values over u's elements, with u's elements
/// all in the table's domain.
pub fn rank_table_ok(w: &Term) -> Formula {
    let mut fr = Fresh::new();
    let p = fr.name();
    let s = fr.name();
    let u = fr.name();
    let t = fr.name();
    let r = fr.name();
    let e = fr.name();
    let q = fr.name();
    let s2 = fr.name();
    let e2 = fr.name();
    let t2 = fr.name();
    let r2 = fr.name();
    let z = fr.name();
    let e3 = fr.name();
    let q3 = fr.name();
    let s3 = fr.name();
    let e4 = fr.name();
    let t3 = fr.name();
    let r3 = fr.name();

    // for entry ⟨u, r⟩: ∀e∈u ∃q∈w (q = ⟨e, r'⟩ ∧ r' ∈ r)
    let covers = Formula::forall_in(
        &e,
        v(&u),
        Formula::exists_in(
            &q,
            w.clone(),
            Formula::exists_in(
                &s2,
                v(&q),
                Formula::exists_in(
                    &e2,
                    v(&s2),
                    Formula::exists_in(
                        &t2,
                        v(&q),
                        Formula::exists_in(
                            &r2,
                            v(&t2),
                            and_all(vec![
                                pair_with(&v(&q), &v(&e2), &v(&r2)),
                                eq(v(&e2), v(&e)),
                                mem(v(&r2), v(&r)),
                            ]),
                        ),
                    ),
                ),
            ),
        ),
    );
    // and r is no larger: ∀z∈r ∃e∈u ∃q∈w (q = ⟨e, r'⟩ ∧ (z ∈ r' ∨ z = r'))
    let tight = Formula::forall_in(
        &z,
        v(&r),
        Formula::exists_in(
            &e3,
            v(&u),
            Formula::exists_in(
                &q3,
                w.clone(),
                Formula::exists_in(
                    &s3,
                    v(&q3),
                    Formula::exists_in(
                        &e4,
                        v(&s3),
                        Formula::exists_in(
                            &t3,
                            v(&q3),
                            Formula::exists_in(
                                &r3,
                                v(&t3),
                                and_all(vec![
                                    pair_with(&v(&q3), &v(&e4), &v(&r3)),
                                    eq(v(&e4), v(&e3)),
                                    or(mem(v(&z), v(&r3)), eq(v(&z), v(&r3))),
                                ]),
                            ),
                        ),
                    ),
                ),
            ),
        ),
    );
    let entry_ok = Formula::exists_in(
        &s,
        v(&p),
        Formula::exists_in(
            &u,
            v(&s),
            Formula::exists_in(
                &t,
                v(&p),
                Formula::exists_in(
                    &r,
                    v(&t),
                    and_all(vec![pair_with(&v(&p), &v(&u), &v(&r)), covers, tight]),
                ),
            ),
        ),
    );
    and(
        is_fun(w),
        Formula::forall_in(&p, w.clone(), entry_ok),
    )
}

// ---------- recognizers ----------

/// A conjunct shape the witness solver can act on directly, for a target
/// variable occurring free in it.
#[derive(Debug, Clone, PartialEq)]
pub enum DefPattern {
    /// target = t
    EqTerm(Term),
    /// target ∈ t
    MemOf(Term),
    /// target = {x}
    Singleton(Term),
    /// target = {x, y}
    UPair(Term, Term),
    /// target = x ∪ {x}
    Succ(Term),
    /// target = x ∪ y
    Union2(Term, Term),
    /// target = ∪ a
    BigUnion(Term),
    /// target = ⟨x, y⟩
    KPair(Term, Term),
    /// fst(p) = target for a known p
    FstOf(Term),
    /// snd(p) = target for a known p
    SndOf(Term),
    /// p is a pair whose first component is x; target is p
    PairWithFst(Term),
    /// target = {u ∈ dom : matrix(u)} with `hole` the name of u in matrix
    SepSet {
        dom: Term,
        hole: String,
        matrix: Formula,
    },
    /// target is a rank table that must cover x
    RankTableFor(Term),
}

/// Splits a right-folded conjunction into its conjunct units.
pub fn conjuncts(phi: &Formula) -> Vec<&Formula> {
    let mut out = Vec::new();
    fn go<'a>(phi: &'a Formula, out: &mut Vec<&'a Formula>) {
        if let Formula::And(a, b) = phi {
            go(a, out);
            go(b, out);
        } else {
            out.push(phi);
        }
    }
    go(phi, &mut out);
    out
}

fn tv(target: &str) -> Term {
    Term::var(target)
}

/// Whether a term mentions the target variable (as a free name).
fn mentions(t: &Term, target: &str) -> bool {
    matches!(t, Term::Free(n) if n == target)
}

fn formula_mentions(phi: &Formula, target: &str) -> bool {
    phi.free_vars().contains(target)
}

/// Tries to read a single conjunct as a defining pattern for `target`.
/// Matching is by structural equality against the builder output, so any
/// formula produced by this module (even after a Gödel round-trip) is
/// recognized.
pub fn match_def(conjunct: &Formula, target: &str) -> Option<DefPattern> {
    // target = t / t = target
    if let Formula::Eq(a, b) = conjunct {
        if mentions(a, target) && !mentions(b, target) {
            return Some(DefPattern::EqTerm(b.clone()));
        }
        if mentions(b, target) && !mentions(a, target) {
            return Some(DefPattern::EqTerm(a.clone()));
        }
    }
    // target ∈ t
    if let Formula::Mem(a, b) = conjunct {
        if mentions(a, target) && !mentions(b, target) {
            return Some(DefPattern::MemOf(b.clone()));
        }
    }
    let t = tv(target);
    // shape probes: rebuild the candidate pattern with extracted arguments
    // and compare structurally.
    if let Some(p) = probe_sing(conjunct, &t) {
        return Some(p);
    }
    if let Some(p) = probe_upair(conjunct, &t) {
        return Some(p);
    }
    if let Some(p) = probe_succ_union(conjunct, &t) {
        return Some(p);
    }
    if let Some(p) = probe_bigunion(conjunct, &t) {
        return Some(p);
    }
    if let Some(p) = probe_pairs(conjunct, &t, target) {
        return Some(p);
    }
    if let Some(p) = probe_sep(conjunct, &t, target) {
        return Some(p);
    }
    if let Some(p) = probe_rank(conjunct, &t) {
        return Some(p);
    }
    None
}

fn probe_sing(conjunct: &Formula, t: &Term) -> Option<DefPattern> {
    // sing_eq(target, x): And(Mem(x, target), ForallIn(_, target, Eq(B0, x)))
    if let Formula::And(a, b) = conjunct {
        if let (Formula::Mem(x, s), Formula::ForallIn(_, s2, _)) = (a.as_ref(), b.as_ref()) {
            if s == t && s2 == t {
                let cand = sing_eq(t, x);
                if cand == *conjunct {
                    return Some(DefPattern::Singleton(x.clone()));
                }
            }
        }
    }
    None
}

fn probe_upair(conjunct: &Formula, t: &Term) -> Option<DefPattern> {
    // upair_eq(target, x, y) right-folded: And(Mem(x,z), And(Mem(y,z), ∀…))
    if let Formula::And(a, rest) = conjunct {
        if let Formula::Mem(x, z1) = a.as_ref() {
            if let Formula::And(b, _) = rest.as_ref() {
                if let Formula::Mem(y, z2) = b.as_ref() {
                    if z1 == t && z2 == t && upair_eq(t, x, y) == *conjunct {
                        return Some(DefPattern::UPair(x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    None
}

fn probe_succ_union(conjunct: &Formula, t: &Term) -> Option<DefPattern> {
    // succ_eq(target, x): And(Mem(x, y), …)
    if let Formula::And(a, _) = conjunct {
        if let Formula::Mem(x, y) = a.as_ref() {
            if y == t && succ_eq(t, x) == *conjunct {
                return Some(DefPattern::Succ(x.clone()));
            }
        }
        // union2_eq(target, x, y): And(ForallIn(_, x, Mem(B0, z)), And(ForallIn(_, y, …), …))
        if let Formula::ForallIn(_, x, _) = a.as_ref() {
            if let Formula::And(_, rest) = conjunct {
                if let Formula::And(second, _) = rest.as_ref() {
                    if let Formula::ForallIn(_, y, _) = second.as_ref() {
                        if union2_eq(t, x, y) == *conjunct {
                            return Some(DefPattern::Union2(x.clone(), y.clone()));
                        }
                    }
                }
            }
        }
    }
    None
}

fn probe_bigunion(conjunct: &Formula, t: &Term) -> Option<DefPattern> {
    if let Formula::And(a, _) = conjunct {
        if let Formula::ForallIn(_, src, _) = a.as_ref() {
            if bigunion_eq(t, src) == *conjunct {
                return Some(DefPattern::BigUnion(src.clone()));
            }
        }
    }
    None
}

fn probe_pairs(conjunct: &Formula, t: &Term, target: &str) -> Option<DefPattern> {
    // pair_with(target, x, y): ExistsIn(_, target, ExistsIn(_, target-shifted, …))
    if let Formula::ExistsIn(_, d, _) = conjunct {
        if d == t {
            // probe target = ⟨x,y⟩ by extracting x, y from the body
            if let Some((x, y)) = extract_pair_args(conjunct) {
                if !formula_mentions_term(&x, target) && !formula_mentions_term(&y, target)
                    && pair_with(t, &x, &y) == *conjunct
                {
                    return Some(DefPattern::KPair(x, y));
                }
            }
        }
        // fst_is(p, target): ExistsIn(_, p, ExistsIn(_, B0, pair_with(p, target, B0)))
        if !mentions(d, target) {
            if fst_is(d, t) == *conjunct {
                return Some(DefPattern::FstOf(d.clone()));
            }
            if snd_is(d, t) == *conjunct {
                return Some(DefPattern::SndOf(d.clone()));
            }
        }
    }
    None
}

fn formula_mentions_term(t: &Term, target: &str) -> bool {
    mentions(t, target)
}

/// For a `pair_with(d, x, y)` shape, recovers (x, y) if they are closed terms
/// (parameters or free variables other than binders). The fully flattened
/// conjunct list of the body is
/// `[x∈s, ∀w∈s w=x, x∈t, y∈t, ∀w∈t (w=x∨w=y), ∀w∈d (w=s∨w=t)]`.
fn extract_pair_args(conjunct: &Formula) -> Option<(Term, Term)> {
    if let Formula::ExistsIn(_, _, body1) = conjunct {
        if let Formula::ExistsIn(_, _, body2) = body1.as_ref() {
            let cs = conjuncts(body2);
            if cs.len() == 6 {
                if let (Formula::Mem(x, _), Formula::Mem(y, _)) = (cs[0], cs[3]) {
                    if closed_term(x) && closed_term(y) {
                        return Some((x.clone(), y.clone()));
                    }
                }
            }
        }
    }
    None
}

fn closed_term(t: &Term) -> bool {
    !matches!(t, Term::Bound(_))
}

fn probe_sep(conjunct: &Formula, t: &Term, target: &str) -> Option<DefPattern> {
    // sep_char(target, a, hole, m):
    // And(ForallIn(_, target, And(Mem(B0, a), m[B0])), ForallIn(_, a, Implies(m[B0], Mem(B0, target))))
    if let Formula::And(l, r) = conjunct {
        if let (Formula::ForallIn(_, x1, body1), Formula::ForallIn(_, a2, _)) =
            (l.as_ref(), r.as_ref())
        {
            if x1 == t && !mentions(a2, target) {
                if let Formula::And(memc, matrix_b0) = body1.as_ref() {
                    if let Formula::Mem(Term::Bound(0), a1) = memc.as_ref() {
                        if a1 == a2 {
                            // recover the matrix with a named hole
                            let hole = "%hole".to_string();
                            let matrix = unbind_level(matrix_b0, 0, &hole)?;
                            if sep_char(t, a1, &hole, &matrix) == *conjunct {
                                return Some(DefPattern::SepSet {
                                    dom: a1.clone(),
                                    hole,
                                    matrix,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn probe_rank(conjunct: &Formula, t: &Term) -> Option<DefPattern> {
    if rank_table_ok(t) == *conjunct {
        // The caller pairs this with a pair_mem constraint naming the root.
        return Some(DefPattern::RankTableFor(t.clone()));
    }
    None
}

/// Replaces `Bound(level + depth)` with a free variable, failing if the
/// resulting formula would still reference that binder level in a bound
/// position the caller did not expect. Deeper levels are left untouched.
pub fn unbind_level(phi: &Formula, level: u32, name: &str) -> Option<Formula> {
    let mut ok = true;
    let out = map_terms_pub(phi, &mut |term, depth| match term {
        Term::Bound(i) => {
            if *i == depth + level {
                Term::Free(name.to_string())
            } else if *i > depth + level {
                // reference to an even-outer binder: shift down since the
                // caller is stripping `level`'s binder
                Term::Bound(*i - 1)
            } else {
                term.clone()
            }
        }
        other => {
            let _ = &mut ok;
            other.clone()
        }
    });
    Some(out)
}

fn map_terms_pub(phi: &Formula, f: &mut impl FnMut(&Term, u32) -> Term) -> Formula {
    // re-expose Formula::map_terms through the public seam
    use Formula::*;
    fn go(phi: &Formula, f: &mut impl FnMut(&Term, u32) -> Term, depth: u32) -> Formula {
        match phi {
            Mem(a, b) => Mem(f(a, depth), f(b, depth)),
            Eq(a, b) => Eq(f(a, depth), f(b, depth)),
            Oracle(a) => Oracle(f(a, depth)),
            And(a, b) => And(Box::new(go(a, f, depth)), Box::new(go(b, f, depth))),
            Or(a, b) => Or(Box::new(go(a, f, depth)), Box::new(go(b, f, depth))),
            Implies(a, b) => Implies(Box::new(go(a, f, depth)), Box::new(go(b, f, depth))),
            Not(a) => Not(Box::new(go(a, f, depth))),
            ForallIn(h, t, a) => ForallIn(h.clone(), f(t, depth), Box::new(go(a, f, depth + 1))),
            ExistsIn(h, t, a) => ExistsIn(h.clone(), f(t, depth), Box::new(go(a, f, depth + 1))),
            Forall(h, a) => Forall(h.clone(), Box::new(go(a, f, depth + 1))),
            Exists(h, a) => Exists(h.clone(), Box::new(go(a, f, depth + 1))),
        }
    }
    go(phi, f, 0)
}

/// Negated pair-hood, used by the machine's non-pair fallback branch.
pub fn not_pair(d: &Term) -> Formula {
    not(is_pair(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfs::HFSet;
    use crate::syntax::{godel_decode, godel_number};

    fn p(x: usize) -> Term {
        Term::param(HFSet::von_neumann(x))
    }

    #[test]
    fn patterns_survive_godel_roundtrip() {
        let shapes = vec![
            sing_eq(&Term::var("d"), &p(1)),
            upair_eq(&Term::var("d"), &p(0), &p(2)),
            succ_eq(&Term::var("d"), &p(1)),
            union2_eq(&Term::var("d"), &p(1), &p(2)),
            pair_with(&Term::var("d"), &p(0), &p(1)),
            fst_is(&Term::var("p"), &Term::var("d")),
            is_fun(&Term::var("f")),
        ];
        for s in shapes {
            let rt = godel_decode(&godel_number(&s)).unwrap();
            assert_eq!(rt, s);
        }
    }

    #[test]
    fn match_def_recognizes_builders() {
        let d = "d";
        assert_eq!(
            match_def(&sing_eq(&Term::var(d), &p(1)), d),
            Some(DefPattern::Singleton(p(1)))
        );
        assert_eq!(
            match_def(&upair_eq(&Term::var(d), &p(0), &p(1)), d),
            Some(DefPattern::UPair(p(0), p(1)))
        );
        assert_eq!(
            match_def(&succ_eq(&Term::var(d), &p(2)), d),
            Some(DefPattern::Succ(p(2)))
        );
        assert_eq!(
            match_def(&union2_eq(&Term::var(d), &p(1), &p(2)), d),
            Some(DefPattern::Union2(p(1), p(2)))
        );
        assert_eq!(
            match_def(&bigunion_eq(&Term::var(d), &p(3)), d),
            Some(DefPattern::BigUnion(p(3)))
        );
        assert_eq!(
            match_def(&pair_with(&Term::var(d), &p(0), &p(1)), d),
            Some(DefPattern::KPair(p(0), p(1)))
        );
        assert_eq!(
            match_def(&fst_is(&p(5), &Term::var(d)), d),
            Some(DefPattern::FstOf(p(5)))
        );
        assert_eq!(
            match_def(&snd_is(&p(5), &Term::var(d)), d),
            Some(DefPattern::SndOf(p(5)))
        );
        assert_eq!(
            match_def(&crate::syntax::eq(Term::var(d), p(7)), d),
            Some(DefPattern::EqTerm(p(7)))
        );
        assert_eq!(
            match_def(&crate::syntax::mem(Term::var(d), p(7)), d),
            Some(DefPattern::MemOf(p(7)))
        );
    }

    #[test]
    fn match_sep_pattern() {
        let m = crate::syntax::oracle(Term::var("%hole"));
        let c = sep_char(&Term::var("d"), &p(3), "%hole", &m);
        match match_def(&c, "d") {
            Some(DefPattern::SepSet { dom, matrix, hole }) => {
                assert_eq!(dom, p(3));
                assert_eq!(matrix.substitute(&hole, &p(0)), crate::syntax::oracle(p(0)));
            }
            other => panic!("bad match: {:?}", other),
        }
    }
}
