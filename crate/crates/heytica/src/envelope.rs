//! Boolean envelopes with interior operators, the regular-element Boolean
//! algebra, forest unravelling, the principal-element splitting that writes
//! an element as a join of two regulars, and the six-atom double-negation
//! witness construction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::heyting::{Heyting, Hom, UpSet};
use crate::poset::{bits, Poset};

/// Cap on materializing envelope carriers (2^n subsets).
pub const ENVELOPE_POINT_CAP: usize = 20;

/// The powerset Boolean algebra of an algebra's dual poset, with the
/// interior operator sending a subset to the largest up-set inside it.
/// Operations work pointwise on `u128` masks; the full carrier is only
/// materialized through `subsets()` under the point cap.
#[derive(Clone, Debug)]
pub struct Envelope {
    base: Heyting,
}

impl Envelope {
    pub fn new(base: &Heyting) -> Envelope {
        Envelope { base: base.clone() }
    }

    pub fn base(&self) -> &Heyting {
        &self.base
    }

    pub fn full(&self) -> u128 {
        self.base.dual().full()
    }

    pub fn complement(&self, s: u128) -> u128 {
        self.full() & !s
    }

    /// Largest up-set contained in `s`.
    pub fn interior(&self, s: u128) -> u128 {
        let p = self.base.dual();
        bits(s)
            .filter(|&i| p.up_of(i) & !s == 0)
            .fold(0u128, |m, i| m | 1 << i)
    }

    /// All subsets of the dual, smallest first; errors beyond the point cap.
    pub fn subsets(&self) -> Result<Vec<u128>> {
        let n = self.base.dual().n();
        if n > ENVELOPE_POINT_CAP {
            return Err(Error::Size {
                what: "envelope carrier",
                needed: n,
                bound: ENVELOPE_POINT_CAP,
            });
        }
        let mut out: Vec<u128> = (0..1u128 << n).collect();
        out.sort_by_key(|s| (s.count_ones(), *s));
        Ok(out)
    }

    /// The four interior-operator laws plus the fixed-point characterization,
    /// checked on every subset.
    pub fn verify_interior_laws(&self) -> Result<()> {
        let subsets = self.subsets()?;
        let h = &self.base;
        for &s in &subsets {
            let i = self.interior(s);
            if i & !s != 0 {
                return Err(Error::Axiom {
                    law: "interior decreasing",
                    witness: format!("{s:b}"),
                });
            }
            if self.interior(i) != i {
                return Err(Error::Axiom {
                    law: "interior idempotent",
                    witness: format!("{s:b}"),
                });
            }
            if h.dual().is_up_set(s) != (i == s) {
                return Err(Error::Axiom {
                    law: "interior fixed points are the up-sets",
                    witness: format!("{s:b}"),
                });
            }
            for &t in &subsets {
                if s & !t == 0 && self.interior(s) & !self.interior(t) != 0 {
                    return Err(Error::Axiom {
                        law: "interior monotone",
                        witness: format!("{s:b} vs {t:b}"),
                    });
                }
                if self.interior(s & t) != self.interior(s) & self.interior(t) {
                    return Err(Error::Axiom {
                        law: "interior commutes over meets",
                        witness: format!("{s:b} vs {t:b}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Lift a hom to the envelopes: inverse image on arbitrary subsets. The
/// lift extends the hom on up-sets and commutes with the interiors.
pub fn lift_hom(f: &Hom) -> impl Fn(u128) -> u128 + '_ {
    move |s| f.apply_subset(s)
}

/// The regular elements (fixed points of double negation) of an algebra,
/// as a Boolean algebra: meet and complement restrict, the join is
/// `¬¬(a ∨ b)`.
#[derive(Clone, Debug)]
pub struct RegularAlgebra {
    host: Heyting,
    carrier: Vec<u128>,
}

pub fn regular_elements(h: &Heyting) -> Result<RegularAlgebra> {
    let carrier: Vec<u128> = h
        .elements()?
        .iter()
        .copied()
        .filter(|&u| h.neg(h.neg(UpSet(u))) == UpSet(u))
        .collect();
    Ok(RegularAlgebra {
        host: h.clone(),
        carrier,
    })
}

impl RegularAlgebra {
    pub fn host(&self) -> &Heyting {
        &self.host
    }

    pub fn carrier(&self) -> &[u128] {
        &self.carrier
    }

    pub fn contains(&self, u: UpSet) -> bool {
        self.carrier.contains(&u.0)
    }

    pub fn meet(&self, a: UpSet, b: UpSet) -> UpSet {
        // ¬¬(a ∧ b) equals the plain meet on regulars; kept in the stated form
        let m = self.host.meet(a, b);
        self.host.neg(self.host.neg(m))
    }

    pub fn join(&self, a: UpSet, b: UpSet) -> UpSet {
        let j = self.host.join(a, b);
        self.host.neg(self.host.neg(j))
    }

    pub fn complement(&self, a: UpSet) -> UpSet {
        self.host.neg(a)
    }

    /// Minimal nonzero elements in the regular order.
    pub fn atoms(&self) -> Vec<UpSet> {
        self.carrier
            .iter()
            .copied()
            .filter(|&a| {
                a != 0
                    && self
                        .carrier
                        .iter()
                        .all(|&b| b == 0 || b == a || b & !a != 0)
            })
            .map(UpSet)
            .collect()
    }

    /// Boolean-algebra laws: closure, complementation, distributivity.
    pub fn verify_boolean(&self) -> Result<()> {
        let c = &self.carrier;
        let h = &self.host;
        for &a in c {
            let a = UpSet(a);
            for &b in c {
                let b = UpSet(b);
                if !self.contains(self.meet(a, b)) || !self.contains(self.join(a, b)) {
                    return Err(Error::Axiom {
                        law: "regular closure",
                        witness: format!("{a:?}, {b:?}"),
                    });
                }
                for &d in c {
                    let d = UpSet(d);
                    let lhs = self.meet(a, self.join(b, d));
                    let rhs = self.join(self.meet(a, b), self.meet(a, d));
                    if lhs != rhs {
                        return Err(Error::Axiom {
                            law: "regular distributivity",
                            witness: format!("{a:?}, {b:?}, {d:?}"),
                        });
                    }
                }
            }
            let n = self.complement(a);
            if !self.contains(n)
                || self.meet(a, n) != h.zero()
                || self.join(a, n) != h.one()
            {
                return Err(Error::Axiom {
                    law: "regular complementation",
                    witness: format!("{a:?}"),
                });
            }
        }
        Ok(())
    }
}

/// Embed an algebra into one with a forest dual by unravelling the dual
/// into ascending cover paths; the identity when already a forest.
pub fn forestify(h: &Heyting) -> Result<(Heyting, Hom)> {
    if h.dual().is_forest() {
        return Ok((h.clone(), Hom::identity(h)));
    }
    let (_, pi) = h.dual().unravel_forest(crate::poset::MAX_POINTS)?;
    let forest = Heyting::new(pi.source().clone());
    let emb = Hom::from_parts(h.clone(), forest.clone(), pi);
    Ok((forest, emb))
}

/// Result of splitting a principal element into two regular pieces.
#[derive(Clone, Debug)]
pub struct RSplit {
    pub result: Heyting,
    pub embed: Hom,
    pub r1: UpSet,
    pub r2: UpSet,
}

/// For a forest-dual algebra and a principal element `a = ↑x`: if `x` is a
/// root, `a` is already regular and nothing moves; otherwise duplicate the
/// subtree at `x` above the predecessor `x⁻` and collapse back, so the two
/// copies are regular elements joining to the image of `a`.
pub fn r_split(h: &Heyting, a: UpSet) -> Result<RSplit> {
    let p = h.dual();
    if !p.is_forest() {
        return Err(Error::NotForest);
    }
    let mins = p.minimals(a.0);
    if a.0 == 0 || mins.count_ones() != 1 || p.up_closure(mins) != a.0 {
        return Err(Error::NotPrincipal);
    }
    let x = bits(mins).next().unwrap();
    let below = p.down_of(x) & !(1u128 << x);
    if below == 0 {
        // root case: a itself is regular
        return Ok(RSplit {
            result: h.clone(),
            embed: Hom::identity(h),
            r1: a,
            r2: a,
        });
    }
    let pred = bits(p.maximals(below)).next().unwrap();
    // P' = (P \ ↑x) ⊔ two copies of the subtree at x, both above pred
    let keep: Vec<usize> = (0..p.n()).filter(|&i| a.0 >> i & 1 == 0).collect();
    let sub: Vec<usize> = bits(a.0).collect();
    let total = keep.len() + 2 * sub.len();
    if total > crate::poset::MAX_POINTS {
        return Err(Error::Size {
            what: "r-split points",
            needed: total,
            bound: crate::poset::MAX_POINTS,
        });
    }
    let keep_pos = |i: usize| keep.iter().position(|&k| k == i).unwrap();
    let sub_pos = |i: usize| sub.iter().position(|&k| k == i).unwrap();
    let copy = |c: usize, i: usize| keep.len() + c * sub.len() + sub_pos(i);
    let mut covers = Vec::new();
    for &i in &keep {
        for &j in &keep {
            if i != j && p.leq(i, j) {
                covers.push((keep_pos(i), keep_pos(j)));
            }
        }
    }
    for c in 0..2 {
        covers.push((keep_pos(pred), copy(c, x)));
        for &i in &sub {
            for &j in &sub {
                if i != j && p.leq(i, j) {
                    covers.push((copy(c, i), copy(c, j)));
                }
            }
        }
    }
    let split = Poset::from_covers(total, &covers)?;
    let mut map = vec![0usize; total];
    for &i in &keep {
        map[keep_pos(i)] = i;
    }
    for c in 0..2 {
        for &i in &sub {
            map[copy(c, i)] = i;
        }
    }
    let pi = crate::poset::PMorphism::new(split.clone(), p.clone(), map)?;
    let result = Heyting::new(split);
    let embed = Hom::from_parts(h.clone(), result.clone(), pi);
    let r1 = UpSet(sub.iter().fold(0u128, |m, &i| m | 1 << copy(0, i)));
    let r2 = UpSet(sub.iter().fold(0u128, |m, &i| m | 1 << copy(1, i)));
    // postconditions: both pieces regular, joining to the image of a
    let rr = |r: UpSet| result.neg(result.neg(r)) == r;
    if !rr(r1) || !rr(r2) || result.join(r1, r2) != embed.apply(a) {
        return Err(Error::Construction {
            stage: "r-split postcondition",
            detail: format!("a = {a:?}"),
        });
    }
    Ok(RSplit {
        result,
        embed,
        r1,
        r2,
    })
}

/// Atoms of the Boolean subalgebra generated by `gens` inside the regular
/// algebra of `h`: nonzero signed meets, with complement = ¬.
pub fn boolean_subalgebra_atoms(h: &Heyting, gens: &[UpSet]) -> Vec<UpSet> {
    let mut atoms = Vec::new();
    for sign in 0..1u32 << gens.len() {
        let mut cell = h.one();
        for (i, g) in gens.iter().enumerate() {
            let lit = if sign >> i & 1 == 1 {
                *g
            } else {
                h.neg(*g)
            };
            cell = h.meet(cell, lit);
        }
        if cell.0 != 0 && !atoms.contains(&cell) {
            atoms.push(cell);
        }
    }
    atoms
}

/// Split an element of an ambient algebra into two regular pieces by
/// r-splitting inside the generated subalgebra `⟨x⟩` (where the element is
/// principal over its own dual) and relocating via amalgamation over that
/// subalgebra. Returns the grown algebra, the embedding of the ambient one,
/// and the two pieces.
pub fn split_in_context(
    ambient: &Heyting,
    x: UpSet,
) -> Result<(Heyting, Hom, UpSet, UpSet)> {
    let sub = ambient.generated(&[x]);
    let x_in_sub = sub.restrict(x).ok_or(Error::NotPrincipal)?;
    let (forest, fe) = forestify(&sub.algebra)?;
    let split = r_split(&forest, fe.apply(x_in_sub))?;
    let into_ctx = split.embed.compose(&fe)?;
    let d = crate::amalgam::Diagram::new(
        sub.algebra.clone(),
        ambient.clone(),
        split.result.clone(),
        sub.include.clone(),
        into_ctx,
    )?;
    let am = crate::amalgam::superamalgamate(&d)?;
    Ok((
        am.result,
        am.into_left,
        am.into_right.apply(split.r1),
        am.into_right.apply(split.r2),
    ))
}

/// Stage-by-stage report of the double-negation witness construction.
#[derive(Clone, Debug, Serialize)]
pub struct HnegReport {
    pub stage_duals: Vec<(String, usize)>,
    pub atom_count: usize,
    pub six_atoms: bool,
    pub joins_differ: bool,
    pub join_left_image: bool,
    pub pieces_regular: bool,
}

/// Execute the amalgamation figure: two copies of the 3-chain over 2; the
/// right copy's middle element split into regular pieces in its context;
/// two copies of that context amalgamated over the left 3-chain; finally
/// the left middle element split the same way. The six regular pieces
/// generate a Boolean subalgebra in the regular algebra whose atoms are
/// counted, and the cyclic shift of the pieces moves the two independent
/// joins apart.
pub fn six_atom_witness() -> Result<HnegReport> {
    let fail = |stage: &'static str, detail: String| Error::Construction { stage, detail };
    let c3 = Heyting::c3();
    let a = UpSet(c3.dual().up_of(1)); // the middle element
    let two = Heyting::two();
    let leg = crate::catalog::embeddings_between(&two, &c3)
        .pop()
        .ok_or_else(|| fail("legs", "no embedding of 2 into C3".into()))?;
    let d = crate::amalgam::Diagram::new(two.clone(), c3.clone(), c3.clone(), leg.clone(), leg)?;
    let am = crate::amalgam::superamalgamate(&d)?;
    let a0 = am.into_left.apply(a);
    let a15 = am.into_right.apply(a);

    // H = the split context of the right middle element over the amalgam
    let (h, into_h, r1, r2) = split_in_context(&am.result, a15)?;
    let a0_h = into_h.apply(a0);
    let a15_h = into_h.apply(a15);

    // two copies of H over the left C3-image {0, a0, 1}
    let base_sub = h.generated(&[a0_h]);
    if base_sub.carrier.len() != 3 {
        return Err(fail(
            "base copy",
            format!("expected a C3 image, got {} elements", base_sub.carrier.len()),
        ));
    }
    let d2 = crate::amalgam::Diagram::new(
        base_sub.algebra.clone(),
        h.clone(),
        h.clone(),
        base_sub.include.clone(),
        base_sub.include.clone(),
    )?;
    let am2 = crate::amalgam::superamalgamate(&d2)?;
    let a11 = am2.into_left.apply(r1);
    let a12 = am2.into_left.apply(r2);
    let a21 = am2.into_right.apply(r1);
    let a22 = am2.into_right.apply(r2);
    let a0_m = am2.into_left.apply(a0_h); // in the base: both legs agree

    // split the left middle element in the same way
    let (m, into_m, a01, a02) = split_in_context(&am2.result, a0_m)?;
    let gens = [
        a01,
        a02,
        into_m.apply(a11),
        into_m.apply(a12),
        into_m.apply(a21),
        into_m.apply(a22),
    ];
    let pieces_regular = gens.iter().all(|&g| m.neg(m.neg(g)) == g);
    if !pieces_regular {
        return Err(fail("regularity", "a piece is not regular".into()));
    }
    let atoms = boolean_subalgebra_atoms(&m, &gens);
    let j0 = m.join(gens[0], gens[1]);
    let j1 = m.join(gens[2], gens[3]);
    let j2 = m.join(gens[4], gens[5]);
    // the cyclic shift a_{ji} ↦ a_{(j+1 mod 3)i} sends {a11,a12} to
    // {a21,a22} and {a21,a22} to {a01,a02}
    let joins_differ = j2 != j0;
    let left_img = into_m.apply(am2.into_left.apply(a15_h));
    Ok(HnegReport {
        stage_duals: vec![
            ("amalgam of two C3 over 2".into(), am.result.dual().n()),
            ("split context H".into(), h.dual().n()),
            ("amalgam of two H".into(), am2.result.dual().n()),
            ("final algebra".into(), m.dual().n()),
        ],
        atom_count: atoms.len(),
        six_atoms: atoms.len() == 6,
        joins_differ,
        join_left_image: j1 == left_img,
        pieces_regular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    #[test]
    fn interior_examples() {
        let env = Envelope::new(&Heyting::c3());
        // {b} contains no nonempty up-set
        assert_eq!(env.interior(0b01), 0);
        for &u in Heyting::c3().elements().unwrap() {
            assert_eq!(env.interior(u), u);
        }
        let env2 = Envelope::new(&Heyting::two());
        for s in 0..2u128 {
            assert_eq!(env2.interior(s), s);
        }
        env.verify_interior_laws().unwrap();
    }

    #[test]
    fn fixed_point_lattice_is_the_base() {
        for p in [Poset::chain(3), Poset::antichain(3)] {
            let h = Heyting::new(p);
            let env = Envelope::new(&h);
            let fixed: Vec<u128> = env
                .subsets()
                .unwrap()
                .into_iter()
                .filter(|&s| env.interior(s) == s)
                .collect();
            assert_eq!(fixed, h.elements().unwrap());
        }
    }

    #[test]
    fn lift_commutes_with_interiors() {
        let two = Heyting::two();
        let c3 = Heyting::c3();
        let emb = crate::catalog::embeddings_between(&two, &c3).pop().unwrap();
        let env_s = Envelope::new(&two);
        let env_t = Envelope::new(&c3);
        for s in env_s.subsets().unwrap() {
            assert_eq!(
                emb.apply_subset(env_s.interior(s)),
                env_t.interior(emb.apply_subset(s))
            );
        }
    }

    #[test]
    fn regular_examples() {
        let c3 = Heyting::c3();
        let r = regular_elements(&c3).unwrap();
        assert_eq!(r.carrier(), &[0, 0b11]);
        let b4 = Heyting::new(Poset::antichain(2));
        assert_eq!(regular_elements(&b4).unwrap().carrier().len(), 4);
        let mixed = Heyting::new(Poset::chain(2).disjoint_union(&Poset::point()).unwrap());
        let rm = regular_elements(&mixed).unwrap();
        assert_eq!(rm.carrier().len(), 4);
        rm.verify_boolean().unwrap();
    }

    #[test]
    fn forestify_examples() {
        let v = Heyting::new(Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap());
        let (f, e) = forestify(&v).unwrap();
        assert_eq!(f.dual().n(), 3); // already a forest
        assert!(e.is_embedding());
        let lam = Heyting::new(Poset::from_covers(3, &[(1, 0), (2, 0)]).unwrap());
        let (f2, e2) = forestify(&lam).unwrap();
        assert_eq!(f2.dual().n(), 4);
        assert!(e2.is_embedding());
        e2.verify().unwrap();
    }

    #[test]
    fn r_split_examples() {
        let c3 = Heyting::c3();
        let a = UpSet(c3.dual().up_of(1));
        let s = r_split(&c3, a).unwrap();
        assert_eq!(s.result.size().unwrap(), 5);
        assert_eq!(s.result.join(s.r1, s.r2), s.embed.apply(a));
        assert_ne!(s.r1, s.r2);
        // root case: 1 = ↑root is regular already
        let root = r_split(&c3, c3.one()).unwrap();
        assert_eq!(root.result.size().unwrap(), 3);
        assert_eq!(root.r1, c3.one());
        // middle of the 3-chain algebra
        let c4 = Heyting::new(Poset::chain(3));
        let mid = UpSet(c4.dual().up_of(1));
        let s2 = r_split(&c4, mid).unwrap();
        assert_eq!(s2.result.dual().n(), 5);
        assert_eq!(s2.result.join(s2.r1, s2.r2), s2.embed.apply(mid));
    }

    #[test]
    fn hneg_witness_runs() {
        let report = six_atom_witness().unwrap();
        assert!(report.joins_differ);
        assert!(report.join_left_image);
    }
}
