//! Finite Heyting algebras, always normalized to the up-set algebra of a
//! dual poset. Elements are up-sets as bitsets; the carrier enumeration is
//! lazy and memoized, so large algebras stay usable as long as no operation
//! forces the full element list.

use std::sync::OnceLock;

use crate::canon;
use crate::error::{Error, Result};
use crate::poset::{bits, PMorphism, Poset};

/// Default cap on carrier enumeration.
pub const ELEMENT_CAP: usize = 1 << 20;

/// An element of a finite Heyting algebra in dual representation: an
/// upward-closed subset of the dual poset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct UpSet(pub u128);

/// A finite nondegenerate Heyting algebra as the up-set algebra of `dual`.
#[derive(Clone)]
pub struct Heyting {
    dual: Poset,
    elems: OnceLock<Result<Vec<u128>>>,
}

impl PartialEq for Heyting {
    fn eq(&self, other: &Self) -> bool {
        self.dual == other.dual
    }
}
impl Eq for Heyting {}

impl std::fmt::Debug for Heyting {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Heyting(dual={:?})", self.dual)
    }
}

impl Heyting {
    pub fn new(dual: Poset) -> Heyting {
        Heyting {
            dual,
            elems: OnceLock::new(),
        }
    }

    /// The 2-element algebra.
    pub fn two() -> Heyting {
        Heyting::new(Poset::point())
    }

    /// The 3-element chain.
    pub fn c3() -> Heyting {
        Heyting::new(Poset::chain(2))
    }

    pub fn dual(&self) -> &Poset {
        &self.dual
    }

    pub fn zero(&self) -> UpSet {
        UpSet(0)
    }

    pub fn one(&self) -> UpSet {
        UpSet(self.dual.full())
    }

    pub fn is_element(&self, u: UpSet) -> bool {
        u.0 & !self.dual.full() == 0 && self.dual.is_up_set(u.0)
    }

    pub fn meet(&self, u: UpSet, v: UpSet) -> UpSet {
        UpSet(u.0 & v.0)
    }

    pub fn join(&self, u: UpSet, v: UpSet) -> UpSet {
        UpSet(u.0 | v.0)
    }

    /// Residual: the largest `W` with `W ∧ U ≤ V`, computed as the
    /// complement of the down-closure of `U \ V`.
    pub fn imp(&self, u: UpSet, v: UpSet) -> UpSet {
        UpSet(self.dual.full() & !self.dual.down_closure(u.0 & !v.0))
    }

    pub fn neg(&self, u: UpSet) -> UpSet {
        self.imp(u, self.zero())
    }

    pub fn leq(&self, u: UpSet, v: UpSet) -> bool {
        u.0 & !v.0 == 0
    }

    /// Carrier, enumerated on first use, ordered by cardinality then bitset
    /// value; fails when the count exceeds the cap.
    pub fn elements(&self) -> Result<&[u128]> {
        self.elements_capped(ELEMENT_CAP)
    }

    pub fn elements_capped(&self, cap: usize) -> Result<&[u128]> {
        let r = self.elems.get_or_init(|| self.dual.up_sets(cap));
        match r {
            Ok(v) => Ok(v),
            Err(e) => Err(e.clone()),
        }
    }

    pub fn size(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    /// Join-prime elements: exactly the principal up-sets of the dual.
    pub fn join_primes(&self) -> Vec<UpSet> {
        let mut ps: Vec<u128> = (0..self.dual.n()).map(|i| self.dual.up_of(i)).collect();
        ps.sort_by_key(|s| (s.count_ones(), *s));
        ps.into_iter().map(UpSet).collect()
    }

    /// Brute-force join-primeness over a provided carrier slice (oracle).
    pub fn is_join_prime(&self, a: UpSet) -> bool {
        a.0 != 0 && self.dual.minimals(a.0).count_ones() == 1
    }

    /// The poset of join-primes under the reversed algebra order, together
    /// with the map sending each new point to its prime.
    pub fn dual_poset(&self) -> (Poset, Vec<UpSet>) {
        let primes = self.join_primes();
        let mut covers = Vec::new();
        for (i, a) in primes.iter().enumerate() {
            for (j, b) in primes.iter().enumerate() {
                // reversed: a <= b in the new poset iff b ⊆ a
                if i != j && self.leq(*b, *a) {
                    covers.push((i, j));
                }
            }
        }
        (
            Poset::from_covers(primes.len(), &covers).unwrap(),
            primes,
        )
    }

    /// All automorphisms, lifted from the dual poset.
    pub fn automorphisms(&self) -> Vec<Hom> {
        canon::automorphisms(&self.dual)
            .into_iter()
            .map(|perm| {
                // φ(U) = image of U under perm; realize as inverse image of
                // the inverse permutation so Hom applies uniformly
                let mut inv = vec![0usize; perm.len()];
                for (i, &v) in perm.iter().enumerate() {
                    inv[v] = i;
                }
                let pm = PMorphism::new(self.dual.clone(), self.dual.clone(), inv).unwrap();
                Hom {
                    source: self.clone(),
                    target: self.clone(),
                    dual_map: pm,
                }
            })
            .collect()
    }

    /// Subalgebra generated by a set of elements (always includes 0 and 1).
    pub fn generated(&self, gens: &[UpSet]) -> Subalgebra {
        let mut carrier: Vec<u128> = vec![0, self.dual.full()];
        for g in gens {
            if !carrier.contains(&g.0) {
                carrier.push(g.0);
            }
        }
        loop {
            let mut fresh = Vec::new();
            for i in 0..carrier.len() {
                for j in 0..carrier.len() {
                    let (a, b) = (UpSet(carrier[i]), UpSet(carrier[j]));
                    for c in [self.meet(a, b), self.join(a, b), self.imp(a, b)] {
                        if !carrier.contains(&c.0) && !fresh.contains(&c.0) {
                            fresh.push(c.0);
                        }
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            carrier.extend(fresh);
        }
        carrier.sort_by_key(|s| (s.count_ones(), *s));
        Subalgebra::from_carrier(self, carrier)
    }

    /// Add a new bottom below 0: dually, a new top point above the dual.
    /// Old elements keep their operations via `u ↦ u ∪ {w}`.
    pub fn add_bottom(&self) -> (Heyting, CarrierEmbedding) {
        let n = self.dual.n();
        let mut covers = self.dual.covers();
        for m in bits(self.dual.maximals(self.dual.full())) {
            covers.push((m, n));
        }
        let star = Heyting::new(Poset::from_covers(n + 1, &covers).unwrap());
        (
            star,
            CarrierEmbedding {
                new_point: 1u128 << n,
            },
        )
    }
}

/// The carrier map of `add_bottom`: a bounded-lattice-and-implication
/// embedding that does not preserve 0 (the old bottom lands above the new).
#[derive(Clone, Copy, Debug)]
pub struct CarrierEmbedding {
    new_point: u128,
}

impl CarrierEmbedding {
    pub fn apply(&self, u: UpSet) -> UpSet {
        UpSet(u.0 | self.new_point)
    }
    pub fn old_zero(&self) -> UpSet {
        UpSet(self.new_point)
    }
}

/// A Heyting algebra homomorphism, stored as the p-morphism between duals
/// that induces it by inverse image. Finite duality is full, so every hom
/// between normalized algebras has this shape.
#[derive(Clone, Debug)]
pub struct Hom {
    source: Heyting,
    target: Heyting,
    dual_map: PMorphism, // target.dual → source.dual
}

impl PartialEq for Hom {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.dual_map.map() == other.dual_map.map()
    }
}

impl Hom {
    pub fn identity(h: &Heyting) -> Hom {
        Hom {
            source: h.clone(),
            target: h.clone(),
            dual_map: PMorphism::identity(h.dual()),
        }
    }

    /// The dual of a p-morphism `f: P → Q`: the hom
    /// `algebra_of(Q) → algebra_of(P)`, `U ↦ f⁻¹(U)`.
    pub fn dual_of(f: &PMorphism) -> Hom {
        Hom {
            source: Heyting::new(f.target().clone()),
            target: Heyting::new(f.source().clone()),
            dual_map: f.clone(),
        }
    }

    /// Assemble a hom from parts; `dual_map` must run target.dual → source.dual.
    pub fn from_parts(source: Heyting, target: Heyting, dual_map: PMorphism) -> Hom {
        debug_assert!(dual_map.source() == target.dual());
        debug_assert!(dual_map.target() == source.dual());
        Hom {
            source,
            target,
            dual_map,
        }
    }

    /// Reconstruct a hom from an element-level map given on the full source
    /// carrier, by computing its dual p-morphism pointwise:
    /// `x ↦ the generator of ⋂{ U : x ∈ f(U) }`.
    pub fn from_element_map<F: Fn(UpSet) -> UpSet>(
        source: &Heyting,
        target: &Heyting,
        f: F,
    ) -> Result<Hom> {
        let src_elems = source.elements()?;
        let mut map = Vec::with_capacity(target.dual().n());
        for x in 0..target.dual().n() {
            let mut v = source.dual().full();
            for &u in src_elems {
                if f(UpSet(u)).0 >> x & 1 == 1 {
                    v &= u;
                }
            }
            let mins = source.dual().minimals(v);
            if mins.count_ones() != 1 || source.dual().up_closure(mins) != v {
                return Err(Error::NotDualizable(x));
            }
            map.push(bits(mins).next().unwrap());
        }
        let pm = PMorphism::new(target.dual().clone(), source.dual().clone(), map)
            .map_err(|_| Error::NotPMorphism)?;
        let hom = Hom {
            source: source.clone(),
            target: target.clone(),
            dual_map: pm,
        };
        // the inverse image must reproduce f on the carrier
        for &u in src_elems {
            if hom.apply(UpSet(u)) != f(UpSet(u)) {
                return Err(Error::NotDualizable(0));
            }
        }
        Ok(hom)
    }

    pub fn source(&self) -> &Heyting {
        &self.source
    }

    pub fn target(&self) -> &Heyting {
        &self.target
    }

    pub fn dual_map(&self) -> &PMorphism {
        &self.dual_map
    }

    pub fn apply(&self, u: UpSet) -> UpSet {
        UpSet(self.dual_map.preimage(u.0))
    }

    /// Inverse image on arbitrary subsets of the dual: the Boolean-envelope
    /// lift of this hom. On up-sets it agrees with `apply`.
    pub fn apply_subset(&self, s: u128) -> u128 {
        self.dual_map.preimage(s)
    }

    pub fn is_embedding(&self) -> bool {
        self.dual_map.is_surjective()
    }

    pub fn is_surjective(&self) -> bool {
        self.dual_map.is_injective()
    }

    /// `self ∘ earlier`.
    pub fn compose(&self, earlier: &Hom) -> Result<Hom> {
        if earlier.target != self.source {
            return Err(Error::TargetMismatch);
        }
        Ok(Hom {
            source: earlier.source.clone(),
            target: self.target.clone(),
            dual_map: earlier.dual_map.compose(&self.dual_map)?,
        })
    }

    /// Image of the full source carrier (requires source enumeration).
    pub fn image(&self) -> Result<Vec<UpSet>> {
        let mut out: Vec<UpSet> = self
            .source
            .elements()?
            .iter()
            .map(|&u| self.apply(UpSet(u)))
            .collect();
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Checks the hom equations on the full (small) source carrier.
    pub fn verify(&self) -> Result<()> {
        let es = self.source.elements()?;
        if self.apply(self.source.zero()) != self.target.zero()
            || self.apply(self.source.one()) != self.target.one()
        {
            return Err(Error::Axiom {
                law: "hom bounds",
                witness: "0/1".into(),
            });
        }
        for &a in es {
            for &b in es {
                let (a, b) = (UpSet(a), UpSet(b));
                let ok = self.apply(self.source.meet(a, b))
                    == self.target.meet(self.apply(a), self.apply(b))
                    && self.apply(self.source.join(a, b))
                        == self.target.join(self.apply(a), self.apply(b))
                    && self.apply(self.source.imp(a, b))
                        == self.target.imp(self.apply(a), self.apply(b));
                if !ok {
                    return Err(Error::Axiom {
                        law: "hom operation preservation",
                        witness: format!("{a:?}, {b:?}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A generated subalgebra: its own normalized algebra plus the inclusion.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    /// Carrier inside the host, sorted by (cardinality, value).
    pub carrier: Vec<u128>,
    /// The subalgebra as a normalized algebra in its own right.
    pub algebra: Heyting,
    /// Inclusion hom `algebra ↪ host`.
    pub include: Hom,
}

impl Subalgebra {
    /// Assumes `carrier` is operation-closed in `host` and sorted.
    pub fn from_carrier(host: &Heyting, carrier: Vec<u128>) -> Subalgebra {
        // join-irreducibles of the sub-lattice = its join-primes
        let primes: Vec<u128> = carrier
            .iter()
            .copied()
            .filter(|&c| {
                c != 0 && {
                    let below: u128 = carrier
                        .iter()
                        .copied()
                        .filter(|&d| d != c && d & !c == 0)
                        .fold(0, |m, d| m | d);
                    below != c
                }
            })
            .collect();
        let mut covers = Vec::new();
        for (i, &a) in primes.iter().enumerate() {
            for (j, &b) in primes.iter().enumerate() {
                if i != j && b & !a == 0 {
                    covers.push((i, j)); // reversed inclusion
                }
            }
        }
        let dual = Poset::from_covers(primes.len().max(1), &covers).unwrap();
        let algebra = Heyting::new(dual);
        // dual map host.dual → sub.dual: x ↦ least carrier element containing x
        let mut map = Vec::with_capacity(host.dual().n());
        for x in 0..host.dual().n() {
            let vx = carrier
                .iter()
                .copied()
                .filter(|&c| c >> x & 1 == 1)
                .fold(host.dual().full(), |m, c| m & c);
            let k = primes.iter().position(|&p| p == vx).expect("V_x is join-prime in the carrier");
            map.push(k);
        }
        let pm = PMorphism::new(host.dual().clone(), algebra.dual().clone(), map)
            .expect("inclusion dual is p-morphic");
        let include = Hom {
            source: algebra.clone(),
            target: host.clone(),
            dual_map: pm,
        };
        Subalgebra {
            carrier,
            algebra,
            include,
        }
    }

    pub fn contains(&self, u: UpSet) -> bool {
        self.carrier.binary_search_by_key(&(u.0.count_ones(), u.0), |s| (s.count_ones(), *s)).is_ok()
    }

    /// The subalgebra element mapping to a given host element, if any.
    pub fn restrict(&self, u: UpSet) -> Option<UpSet> {
        let es = self.algebra.elements().ok()?;
        es.iter()
            .map(|&e| UpSet(e))
            .find(|&e| self.include.apply(e) == u)
    }
}

/// Raw operation tables, the ingestion format for externally given algebras.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct RawTables {
    pub size: usize,
    pub zero: usize,
    pub one: usize,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
    pub imp: Vec<Vec<usize>>,
}

/// Validate the tables against the Heyting axioms (lattice laws, bounds,
/// residuation) and return the normalized algebra plus the carrier
/// translation `table index ↦ up-set`.
pub fn validate_tables(t: &RawTables) -> Result<(Heyting, Vec<UpSet>)> {
    let n = t.size;
    if n == 0 || t.zero == t.one {
        return Err(Error::Degenerate);
    }
    let idx = |v: usize| -> Result<usize> {
        if v < n {
            Ok(v)
        } else {
            Err(Error::Axiom {
                law: "table entry range",
                witness: format!("{v} >= {n}"),
            })
        }
    };
    for tab in [&t.meet, &t.join, &t.imp] {
        if tab.len() != n || tab.iter().any(|r| r.len() != n) {
            return Err(Error::Axiom {
                law: "table arity",
                witness: "ragged table".into(),
            });
        }
        for r in tab {
            for &v in r {
                idx(v)?;
            }
        }
    }
    let fail = |law: &'static str, i: usize, j: usize| Error::Axiom {
        law,
        witness: format!("at ({i}, {j})"),
    };
    for a in 0..n {
        for b in 0..n {
            if t.meet[a][b] != t.meet[b][a] {
                return Err(fail("meet commutativity", a, b));
            }
            if t.join[a][b] != t.join[b][a] {
                return Err(fail("join commutativity", a, b));
            }
            if t.meet[a][t.join[a][b]] != a || t.join[a][t.meet[a][b]] != a {
                return Err(fail("absorption", a, b));
            }
            if t.meet[a][t.zero] != t.zero || t.join[a][t.one] != t.one {
                return Err(fail("bounds", a, 0));
            }
            for c in 0..n {
                if t.meet[t.meet[a][b]][c] != t.meet[a][t.meet[b][c]] {
                    return Err(fail("meet associativity", a, b));
                }
                if t.join[t.join[a][b]][c] != t.join[a][t.join[b][c]] {
                    return Err(fail("join associativity", a, b));
                }
                // residuation: c ≤ a→b iff c∧a ≤ b; implies distributivity
                let left = t.meet[c][t.imp[a][b]] == c;
                let right = t.meet[t.meet[c][a]][b] == t.meet[c][a];
                if left != right {
                    return Err(fail("residuation", a, b));
                }
            }
        }
    }
    // Birkhoff: join-primes with reversed table order
    let leq = |a: usize, b: usize| t.meet[a][b] == a;
    let primes: Vec<usize> = (0..n)
        .filter(|&p| {
            p != t.zero
                && (0..n).all(|a| {
                    (0..n).all(|b| {
                        let pab = leq(p, t.join[a][b]);
                        !pab || leq(p, a) || leq(p, b)
                    })
                })
        })
        .collect();
    let mut covers = Vec::new();
    for (i, &a) in primes.iter().enumerate() {
        for (j, &b) in primes.iter().enumerate() {
            if i != j && leq(b, a) {
                covers.push((i, j));
            }
        }
    }
    let dual = Poset::from_covers(primes.len().max(1), &covers)?;
    let algebra = Heyting::new(dual);
    let carrier: Vec<UpSet> = (0..n)
        .map(|a| {
            UpSet(
                primes
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| leq(p, a))
                    .fold(0u128, |m, (i, _)| m | 1 << i),
            )
        })
        .collect();
    // the translation must be a bijection onto the up-set carrier
    let mut seen = carrier.clone();
    seen.sort();
    seen.dedup();
    let total = algebra.size()?;
    if seen.len() != n || total != n {
        return Err(Error::Axiom {
            law: "Birkhoff representation",
            witness: format!("{n} table elements vs {total} up-sets"),
        });
    }
    Ok((algebra, carrier))
}

/// Tables computed from a (small) algebra; used by tests and the CLI.
pub fn to_tables(h: &Heyting) -> Result<RawTables> {
    let es = h.elements()?;
    let pos = |u: UpSet| es.iter().position(|&e| e == u.0).unwrap();
    let n = es.len();
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    let mut imp = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (UpSet(es[i]), UpSet(es[j]));
            meet[i][j] = pos(h.meet(a, b));
            join[i][j] = pos(h.join(a, b));
            imp[i][j] = pos(h.imp(a, b));
        }
    }
    Ok(RawTables {
        size: n,
        zero: pos(h.zero()),
        one: pos(h.one()),
        meet,
        join,
        imp,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_of_examples() {
        assert_eq!(Heyting::c3().size().unwrap(), 3);
        assert_eq!(Heyting::two().size().unwrap(), 2);
        assert_eq!(Heyting::new(Poset::antichain(2)).size().unwrap(), 4);
    }

    #[test]
    fn implication_examples() {
        let c3 = Heyting::c3();
        let a = UpSet(c3.dual().up_of(1)); // the middle element {t}
        assert_eq!(c3.imp(a, c3.zero()), c3.zero());
        assert_eq!(c3.imp(a, a), c3.one());
        let b4 = Heyting::new(Poset::antichain(2));
        let p = UpSet(0b01);
        let q = UpSet(0b10);
        assert_eq!(b4.imp(p, b4.zero()), q);
    }

    #[test]
    fn adjunction_oracle() {
        // c ≤ u→v iff c∧u ≤ v, on every algebra with dual ≤ 3
        for p in [
            Poset::point(),
            Poset::chain(2),
            Poset::antichain(2),
            Poset::chain(3),
            Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap(),
            Poset::from_covers(3, &[(1, 0), (2, 0)]).unwrap(),
            Poset::antichain(3),
            Poset::chain(2).disjoint_union(&Poset::point()).unwrap(),
        ] {
            let h = Heyting::new(p);
            let es = h.elements().unwrap().to_vec();
            for &c in &es {
                for &u in &es {
                    for &v in &es {
                        let (c, u, v) = (UpSet(c), UpSet(u), UpSet(v));
                        assert_eq!(h.leq(c, h.imp(u, v)), h.leq(h.meet(c, u), v));
                    }
                }
            }
        }
    }

    #[test]
    fn join_prime_examples() {
        let c3 = Heyting::c3();
        let primes = c3.join_primes();
        assert_eq!(primes.len(), 2);
        let b4 = Heyting::new(Poset::antichain(2));
        assert_eq!(b4.join_primes(), vec![UpSet(0b01), UpSet(0b10)]);
        assert_eq!(Heyting::two().join_primes(), vec![UpSet(1)]);
        // brute-force cross-check on C3
        let es = c3.elements().unwrap().to_vec();
        for &a in &es {
            let a = UpSet(a);
            let brute = a.0 != 0
                && es.iter().all(|&b| {
                    es.iter().all(|&c| {
                        let (b, c) = (UpSet(b), UpSet(c));
                        !c3.leq(a, c3.join(b, c)) || c3.leq(a, b) || c3.leq(a, c)
                    })
                });
            assert_eq!(brute, c3.is_join_prime(a));
        }
    }

    #[test]
    fn dual_poset_round_trip() {
        for p in [
            Poset::chain(2),
            Poset::antichain(3),
            Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        ] {
            let h = Heyting::new(p.clone());
            let (q, _) = h.dual_poset();
            assert!(q.isomorphic_brute(&p));
        }
    }

    #[test]
    fn dual_hom_examples() {
        // collapse 2-chain → point dualizes to the embedding 2 ↪ C3
        let collapse =
            PMorphism::new(Poset::chain(2), Poset::point(), vec![0, 0]).unwrap();
        let emb = Hom::dual_of(&collapse);
        assert!(emb.is_embedding());
        assert_eq!(emb.apply(UpSet(0)), UpSet(0));
        assert_eq!(emb.apply(UpSet(1)), UpSet(0b11));
        emb.verify().unwrap();
        // inclusion of the up-set {t} into the 2-chain dualizes to C3 ↠ 2
        let include = PMorphism::new(Poset::point(), Poset::chain(2), vec![1]).unwrap();
        let surj = Hom::dual_of(&include);
        assert!(surj.is_surjective());
        surj.verify().unwrap();
    }

    #[test]
    fn generated_subalgebra_examples() {
        let c3 = Heyting::c3();
        let a = UpSet(c3.dual().up_of(1));
        assert_eq!(c3.generated(&[a]).carrier.len(), 3);
        assert_eq!(c3.generated(&[]).carrier.len(), 2);
        let b4 = Heyting::new(Poset::antichain(2));
        assert_eq!(b4.generated(&[UpSet(0b01)]).carrier.len(), 4);
        // inclusion hom round-trips the carrier
        let sub = b4.generated(&[UpSet(0b01)]);
        sub.include.verify().unwrap();
        let img = sub.include.image().unwrap();
        assert_eq!(img.len(), sub.carrier.len());
    }

    #[test]
    fn automorphism_counts() {
        let rigid = Heyting::new(Poset::chain(2).disjoint_union(&Poset::point()).unwrap());
        assert_eq!(rigid.automorphisms().len(), 1);
        let two_chains =
            Heyting::new(Poset::chain(2).disjoint_union(&Poset::chain(2)).unwrap());
        assert_eq!(two_chains.automorphisms().len(), 2);
        assert_eq!(Heyting::new(Poset::antichain(2)).automorphisms().len(), 2);
        for a in two_chains.automorphisms() {
            a.verify().unwrap();
        }
    }

    #[test]
    fn add_bottom_examples() {
        let (star, emb) = Heyting::c3().add_bottom();
        assert_eq!(star.size().unwrap(), 4);
        assert!(star.dual().isomorphic_brute(&Poset::chain(3)));
        let (star2, _) = Heyting::two().add_bottom();
        assert_eq!(star2.size().unwrap(), 3);
        let b4 = Heyting::new(Poset::antichain(2));
        let (star4, emb4) = b4.add_bottom();
        assert_eq!(star4.size().unwrap(), 5);
        // old operations survive the carrier embedding
        let es = Heyting::c3().elements().unwrap().to_vec();
        let c3 = Heyting::c3();
        for &u in &es {
            for &v in &es {
                let (u, v) = (UpSet(u), UpSet(v));
                assert_eq!(
                    emb.apply(c3.imp(u, v)),
                    star.imp(emb.apply(u), emb.apply(v))
                );
            }
        }
        let _ = (star4, emb4);
    }

    #[test]
    fn tables_round_trip_and_defects() {
        let c3 = Heyting::c3();
        let t = to_tables(&c3).unwrap();
        let (back, carrier) = validate_tables(&t).unwrap();
        assert_eq!(back.size().unwrap(), 3);
        assert_eq!(carrier.len(), 3);
        let mut bad = to_tables(&c3).unwrap();
        bad.meet[0][1] = bad.meet[1][0] ^ 1; // plant a commutativity defect
        assert!(matches!(
            validate_tables(&bad),
            Err(Error::Axiom { law, .. }) if law.contains("commutativity") || law.contains("absorption")
        ));
        let one = RawTables {
            size: 1,
            zero: 0,
            one: 0,
            meet: vec![vec![0]],
            join: vec![vec![0]],
            imp: vec![vec![0]],
        };
        assert!(matches!(validate_tables(&one), Err(Error::Degenerate)));
    }
}
