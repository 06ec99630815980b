//! Natural (anti-lexicographic) orderings on finite Heyting algebras,
//! admissibility, order extension along embeddings, ordered amalgamation,
//! and the two order-theoretic witnesses: the non-amenability conditions
//! and the order-forgetfulness counterexample.

use serde::Serialize;

use crate::amalgam::{superamalgamate, Amalgam, Diagram};
use crate::error::{Error, Result};
use crate::heyting::{Heyting, Hom, UpSet};
use crate::poset::{first_linear_extension, linear_extensions_of, Poset};

/// The set of join-primes at or below an element, as indices into the
/// algebra's prime list. Every element is the join of its support.
pub fn prime_support(h: &Heyting, primes: &[UpSet], b: UpSet) -> u128 {
    let mut s = 0u128;
    for (i, &p) in primes.iter().enumerate() {
        if h.leq(p, b) {
            s |= 1 << i;
        }
    }
    s
}

/// A total order on an algebra induced by a linear order on its
/// join-primes via the anti-lexicographic rule: `a` comes before `a'` iff
/// the largest prime separating their supports lies under `a'`.
#[derive(Clone, Debug)]
pub struct NaturalOrder {
    algebra: Heyting,
    primes: Vec<UpSet>,
    /// prime list indices, ascending in the linear order
    prime_order: Vec<usize>,
}

impl NaturalOrder {
    pub fn algebra(&self) -> &Heyting {
        &self.algebra
    }

    pub fn primes(&self) -> &[UpSet] {
        &self.primes
    }

    pub fn prime_order(&self) -> &[usize] {
        &self.prime_order
    }

    fn rank(&self, prime_idx: usize) -> usize {
        self.prime_order
            .iter()
            .position(|&p| p == prime_idx)
            .unwrap()
    }

    /// Strict comparison by the anti-lexicographic rule.
    pub fn before(&self, a: UpSet, b: UpSet) -> bool {
        if a == b {
            return false;
        }
        let sa = prime_support(&self.algebra, &self.primes, a);
        let sb = prime_support(&self.algebra, &self.primes, b);
        let diff = sa ^ sb;
        let top = crate::poset::bits(diff)
            .max_by_key(|&i| self.rank(i))
            .expect("supports are injective");
        sb >> top & 1 == 1
    }

    /// All elements, ascending; verifies totality and antisymmetry.
    pub fn sorted_elements(&self) -> Result<Vec<UpSet>> {
        let mut es: Vec<UpSet> = self.algebra.elements()?.iter().map(|&u| UpSet(u)).collect();
        for &a in &es {
            for &b in &es {
                if a != b && self.before(a, b) == self.before(b, a) {
                    return Err(Error::Axiom {
                        law: "anti-lexicographic totality",
                        witness: format!("{a:?}, {b:?}"),
                    });
                }
            }
        }
        es.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if self.before(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        Ok(es)
    }
}

/// Build the natural order from a linear order on the primes (indices into
/// `h.join_primes()`, ascending); the order must extend the algebra order
/// on the primes.
pub fn natural_order(h: &Heyting, prime_order: &[usize]) -> Result<NaturalOrder> {
    let primes = h.join_primes();
    let rank = |i: usize| prime_order.iter().position(|&p| p == i);
    for i in 0..primes.len() {
        for j in 0..primes.len() {
            if i != j && h.leq(primes[i], primes[j]) {
                let (ri, rj) = (rank(i), rank(j));
                if ri.is_none() || rj.is_none() || ri >= rj {
                    return Err(Error::NotExtension);
                }
            }
        }
    }
    if prime_order.len() != primes.len() {
        return Err(Error::NotExtension);
    }
    Ok(NaturalOrder {
        algebra: h.clone(),
        primes,
        prime_order: prime_order.to_vec(),
    })
}

/// One natural order per linear extension of the induced order on primes,
/// in deterministic order.
pub fn all_natural_orders(h: &Heyting) -> Vec<NaturalOrder> {
    let primes = h.join_primes();
    let lt = |i: usize, j: usize| i != j && h.leq(primes[i], primes[j]);
    linear_extensions_of(primes.len(), lt)
        .into_iter()
        .map(|ext| natural_order(h, &ext).expect("extensions are admissible"))
        .collect()
}

/// Transport an admissible order along an embedding: the target primes get
/// the relation generated by their own algebra order plus the pulled-back
/// source order, extended linearly (deterministic first extension). The
/// restriction of the result to the image reproduces the input order.
pub fn extend_order(e: &Hom, o1: &NaturalOrder) -> Result<NaturalOrder> {
    let h2 = e.target();
    let primes2 = h2.join_primes();
    let pi = e.dual_map(); // dual(target) ↠ dual(source)
    let primes1 = o1.primes.clone();
    // prime of target at dual point x maps to source prime at pi(x)
    let point_of = |p: &UpSet, h: &Heyting| -> usize {
        crate::poset::bits(h.dual().minimals(p.0)).next().unwrap()
    };
    let src_prime_of = |p2: &UpSet| -> usize {
        let x = point_of(p2, h2);
        let y = pi.apply(x);
        primes1
            .iter()
            .position(|&q| q.0 == e.source().dual().up_of(y))
            .unwrap()
    };
    let lt = |i: usize, j: usize| {
        if i == j {
            return false;
        }
        if h2.leq(primes2[i], primes2[j]) {
            return true;
        }
        let (si, sj) = (src_prime_of(&primes2[i]), src_prime_of(&primes2[j]));
        si != sj && o1.rank(si) < o1.rank(sj)
    };
    let ext = first_linear_extension(primes2.len(), lt)?;
    natural_order(h2, &ext)
}

/// Superamalgamate and order the result so both restrictions are the
/// inputs: the product of the two prime orders (a partial order containing
/// the required dual comparabilities) is extended linearly.
pub fn ordered_amalgamate(
    d: &Diagram,
    o1: &NaturalOrder,
    o2: &NaturalOrder,
) -> Result<(Amalgam, NaturalOrder)> {
    let am = superamalgamate(d)?;
    let h = &am.result;
    let primes = h.join_primes();
    // each amalgam prime is a pair of leg primes through the projections
    let pr1 = am.into_left.dual_map();
    let pr2 = am.into_right.dual_map();
    let leg_primes = |p: &UpSet| -> (usize, usize) {
        let x = crate::poset::bits(h.dual().minimals(p.0)).next().unwrap();
        let i1 = o1
            .primes
            .iter()
            .position(|&q| q.0 == d.left.dual().up_of(pr1.apply(x)))
            .unwrap();
        let i2 = o2
            .primes
            .iter()
            .position(|&q| q.0 == d.right.dual().up_of(pr2.apply(x)))
            .unwrap();
        (i1, i2)
    };
    let pairs: Vec<(usize, usize)> = primes.iter().map(leg_primes).collect();
    let lt = |i: usize, j: usize| {
        if i == j {
            return false;
        }
        let (a1, a2) = pairs[i];
        let (b1, b2) = pairs[j];
        (a1 == b1 || o1.rank(a1) < o1.rank(b1)) && (a2 == b2 || o2.rank(a2) < o2.rank(b2))
    };
    let ext = first_linear_extension(primes.len(), lt)?;
    let no = natural_order(h, &ext)?;
    Ok((am, no))
}

/// The restriction of an order on the target to the image of an embedding,
/// compared against the transport of an order on the source.
pub fn restricts_to(e: &Hom, big: &NaturalOrder, small: &NaturalOrder) -> Result<bool> {
    let es = e.source().elements()?;
    for &a in es {
        for &b in es {
            let (a, b) = (UpSet(a), UpSet(b));
            if a != b && small.before(a, b) != big.before(e.apply(a), e.apply(b)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verdicts for the non-amenability witness: the two-atom Boolean algebra
/// against the three-atom one, with the order-dependent embeddings.
#[derive(Clone, Debug, Serialize)]
pub struct KptReport {
    pub orders_on_a: usize,
    pub orders_on_b: usize,
    /// (i): some admissible order on B embeds neither designated map.
    pub condition_i: bool,
    /// index of the witnessing order on B (the one extending z < y < x)
    pub witness_order: usize,
    /// (ii): for the two distinct orders on A some order on B breaks one.
    pub condition_ii: bool,
    /// (i) is about that specific order: some other order admits one map.
    pub some_order_embeds: bool,
    pub per_order_embeds: Vec<(bool, bool)>,
}

pub fn kpt_witness() -> Result<KptReport> {
    let a = Heyting::new(Poset::antichain(2));
    let b = Heyting::new(Poset::antichain(3));
    let (x, y, z) = (UpSet(0b001), UpSet(0b010), UpSet(0b100));
    let atom_a = UpSet(0b01);
    let atom_b = UpSet(0b10);
    // designated embeddings: for a < b send (a, b) ↦ (x, y∨z); for b < a
    // send (a, b) ↦ (y, x∨z)
    let emb = |im_a: UpSet, im_b: UpSet| -> Result<Hom> {
        Hom::from_element_map(&a, &b, |u| match u {
            u if u == a.zero() => b.zero(),
            u if u == a.one() => b.one(),
            u if u == atom_a => im_a,
            _ => im_b,
        })
    };
    let iota1 = emb(x, b.join(y, z))?;
    let iota2 = emb(y, b.join(x, z))?;
    let orders_a = all_natural_orders(&a);
    let orders_b = all_natural_orders(&b);
    // the order on A designating each map: ι1 for a before b, ι2 otherwise
    let designated: Vec<(&NaturalOrder, &Hom)> = orders_a
        .iter()
        .map(|o| {
            if o.before(atom_a, atom_b) {
                (o, &iota1)
            } else {
                (o, &iota2)
            }
        })
        .collect();
    let embeds = |o_a: &NaturalOrder, e: &Hom, o_b: &NaturalOrder| -> Result<bool> {
        let es = a.elements()?;
        for &u in es {
            for &v in es {
                let (u, v) = (UpSet(u), UpSet(v));
                if u != v && o_a.before(u, v) != o_b.before(e.apply(u), e.apply(v)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    let mut per_order = Vec::new();
    for o_b in &orders_b {
        let e1 = embeds(designated[0].0, designated[0].1, o_b)?;
        let e2 = embeds(designated[1].0, designated[1].1, o_b)?;
        per_order.push((e1, e2));
    }
    // the witnessing order extends z < y < x on the primes
    let witness_order = orders_b
        .iter()
        .position(|o| o.before(z, y) && o.before(y, x))
        .expect("all prime orders are admissible on an antichain");
    let (w1, w2) = per_order[witness_order];
    let condition_i = !w1 && !w2;
    let condition_ii = per_order.iter().any(|&(e1, e2)| !e1 || !e2);
    let some_order_embeds = per_order.iter().any(|&(e1, e2)| e1 || e2);
    Ok(KptReport {
        orders_on_a: orders_a.len(),
        orders_on_b: orders_b.len(),
        condition_i,
        witness_order,
        condition_ii,
        some_order_embeds,
        per_order_embeds: per_order,
    })
}

/// Verdicts for the order-forgetfulness counterexample: a rigid algebra
/// inside one with a swapping automorphism, where two admissible orders
/// restrict differently.
#[derive(Clone, Debug, Serialize)]
pub struct ForgetfulReport {
    pub sub_automorphisms: usize,
    pub big_automorphisms: usize,
    pub restrictions_differ: bool,
    pub swapped_pair_witness: bool,
}

pub fn order_forgetful_counterexample() -> Result<ForgetfulReport> {
    // two 2-chains, collapsing one of them to a point
    let two_chains = Poset::chain(2).disjoint_union(&Poset::chain(2))?;
    let collapsed = Poset::chain(2).disjoint_union(&Poset::point())?;
    let pi = crate::poset::PMorphism::new(two_chains.clone(), collapsed, vec![0, 1, 2, 2])?;
    let emb = Hom::dual_of(&pi);
    let h = emb.source().clone();
    let h_big = emb.target().clone();
    let sub_autos = h.automorphisms().len();
    let big_autos = h_big.automorphisms();
    // the two full columns
    let a_col = UpSet(h_big.dual().up_of(0));
    let b_col = UpSet(h_big.dual().up_of(2));
    let swap = big_autos
        .iter()
        .find(|f| f.apply(a_col) == b_col)
        .ok_or_else(|| Error::Construction {
            stage: "swapping automorphism",
            detail: "no automorphism exchanges the chains".into(),
        })?;
    // an admissible order with the first column before the second
    let order = all_natural_orders(&h_big)
        .into_iter()
        .find(|o| o.before(a_col, b_col))
        .ok_or_else(|| Error::Construction {
            stage: "admissible order",
            detail: "no order puts the first chain first".into(),
        })?;
    // both columns lie in the embedded image
    let img = emb.image()?;
    if !img.contains(&a_col) || !img.contains(&b_col) {
        return Err(Error::Construction {
            stage: "image check",
            detail: "columns missing from the embedded copy".into(),
        });
    }
    // compare the restriction of the order with the restriction of its
    // conjugate under the swap, on image pairs
    let mut differ = false;
    for &u in &img {
        for &v in &img {
            if u != v && order.before(u, v) != order.before(swap.apply(u), swap.apply(v)) {
                differ = true;
            }
        }
    }
    let swapped_pair_witness =
        order.before(a_col, b_col) != order.before(swap.apply(a_col), swap.apply(b_col));
    Ok(ForgetfulReport {
        sub_automorphisms: sub_autos,
        big_automorphisms: big_autos.len(),
        restrictions_differ: differ,
        swapped_pair_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::embeddings_between;

    #[test]
    fn natural_order_examples() {
        let b4 = Heyting::new(Poset::antichain(2));
        let o = natural_order(&b4, &[0, 1]).unwrap();
        let sorted = o.sorted_elements().unwrap();
        assert_eq!(
            sorted,
            vec![UpSet(0), UpSet(0b01), UpSet(0b10), UpSet(0b11)]
        );
        let c3 = Heyting::c3();
        let orders = all_natural_orders(&c3);
        assert_eq!(orders.len(), 1);
        let sorted = orders[0].sorted_elements().unwrap();
        assert_eq!(sorted, vec![UpSet(0), UpSet(0b10), UpSet(0b11)]);
        let two = Heyting::two();
        assert_eq!(
            all_natural_orders(&two)[0].sorted_elements().unwrap(),
            vec![UpSet(0), UpSet(1)]
        );
    }

    #[test]
    fn admissible_counts() {
        let b8 = Heyting::new(Poset::antichain(3));
        assert_eq!(all_natural_orders(&b8).len(), 6);
        assert_eq!(all_natural_orders(&Heyting::new(Poset::chain(3))).len(), 1);
        assert_eq!(all_natural_orders(&Heyting::new(Poset::antichain(2))).len(), 2);
    }

    #[test]
    fn extend_order_examples() {
        let two = Heyting::two();
        let c3 = Heyting::c3();
        let e = embeddings_between(&two, &c3).pop().unwrap();
        let o1 = all_natural_orders(&two).pop().unwrap();
        let o2 = extend_order(&e, &o1).unwrap();
        assert!(restricts_to(&e, &o2, &o1).unwrap());
        // identity embedding returns the same order
        let id = Hom::identity(&c3);
        let oc = all_natural_orders(&c3).pop().unwrap();
        let oc2 = extend_order(&id, &oc).unwrap();
        assert_eq!(oc.prime_order(), oc2.prime_order());
        // an embedding with a non-total prime fiber
        let mixed = Heyting::new(
            Poset::chain(2).disjoint_union(&Poset::point()).unwrap(),
        );
        for e in embeddings_between(&c3, &mixed) {
            let o = extend_order(&e, &oc).unwrap();
            assert!(restricts_to(&e, &o, &oc).unwrap());
        }
    }

    #[test]
    fn ordered_amalgam_restricts() {
        let two = Heyting::two();
        let c3 = Heyting::c3();
        let leg = embeddings_between(&two, &c3).pop().unwrap();
        let d = Diagram::new(two, c3.clone(), c3.clone(), leg.clone(), leg).unwrap();
        let o = all_natural_orders(&c3).pop().unwrap();
        let (am, big) = ordered_amalgamate(&d, &o, &o).unwrap();
        assert!(restricts_to(&am.into_left, &big, &o).unwrap());
        assert!(restricts_to(&am.into_right, &big, &o).unwrap());
    }

    #[test]
    fn kpt_conditions_hold() {
        let r = kpt_witness().unwrap();
        assert_eq!(r.orders_on_a, 2);
        assert_eq!(r.orders_on_b, 6);
        assert!(r.condition_i);
        assert!(r.condition_ii);
        assert!(r.some_order_embeds);
    }

    #[test]
    fn forgetful_counterexample_holds() {
        let r = order_forgetful_counterexample().unwrap();
        assert_eq!(r.sub_automorphisms, 1);
        assert_eq!(r.big_automorphisms, 2);
        assert!(r.restrictions_differ);
        assert!(r.swapped_pair_witness);
    }
}
