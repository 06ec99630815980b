//! Witness families with executable verdicts: the one-generated algebras
//! harvested from the catalog, their star (added-bottom) algebras forming
//! two-generated structures of pairwise distinct isomorphism types, and the
//! fresh-join-prime orbit construction with its extending partial
//! isomorphisms.

use serde::Serialize;

use crate::canon::canonical_code_colored;
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::heyting::{Heyting, UpSet};
use crate::limit::{extend_partial_iso, Chain, ExtensionTask, PartialIso};
use crate::term::Term;

/// All pairwise non-isomorphic one-generated algebras with dual size up to
/// the bound, each with its lexicographically least generator.
pub fn one_generated_family(max_dual: usize) -> Result<Vec<(Heyting, UpSet)>> {
    let catalog = Catalog::build(max_dual)?;
    let mut out = Vec::new();
    for alg in catalog.algebras_up_to(max_dual) {
        let total = alg.size()?;
        let gen = alg
            .elements()?
            .iter()
            .map(|&u| UpSet(u))
            .find(|&x| {
                x != alg.zero() && x != alg.one() && alg.generated(&[x]).carrier.len() == total
            });
        if let Some(x) = gen {
            out.push((alg, x));
        }
    }
    Ok(out)
}

/// Canonical code of an algebra with distinguished elements, computed on
/// the dual with point colors marking the prime supports.
fn decorated_code(h: &Heyting, marked: &[UpSet]) -> Vec<u8> {
    let n = h.dual().n();
    let colors: Vec<u64> = (0..n)
        .map(|i| {
            marked
                .iter()
                .enumerate()
                .fold(0u64, |acc, (k, m)| acc | ((m.0 >> i & 1) as u64) << k)
        })
        .collect();
    canonical_code_colored(h.dual(), &colors)
}

#[derive(Clone, Debug, Serialize)]
pub struct RoelckeMember {
    pub star_size: usize,
    pub two_generated: bool,
    pub gen_subalgebra_is_3chain: bool,
    pub zero_subalgebra_is_3chain: bool,
    pub term_label: Option<String>,
    pub star_transform_identity: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RoelckeReport {
    pub requested: usize,
    pub family_dual_bound: usize,
    pub members: Vec<RoelckeMember>,
    pub pairwise_distinct: bool,
    pub all_verdicts: bool,
}

/// Take `n` one-generated algebras, add a bottom to each, and verify the
/// three claims: the star algebra is generated by the old generator with
/// the old zero, both single-generator subalgebras are 3-chains, and the
/// resulting two-generated structures are pairwise non-isomorphic.
pub fn roelcke_family(n: usize, dual_bound: usize) -> Result<RoelckeReport> {
    let family = one_generated_family(dual_bound)?;
    if family.len() < n {
        return Err(Error::InsufficientFamily {
            found: family.len(),
            need: n,
            bound: dual_bound,
        });
    }
    let mut members = Vec::new();
    let mut codes = Vec::new();
    for (alg, x) in family.into_iter().take(n) {
        let (star, emb) = alg.add_bottom();
        let gx = emb.apply(x);
        let g0 = emb.old_zero();
        let star_size = star.size()?;
        let two_generated = star.generated(&[gx, g0]).carrier.len() == star_size;
        let sub_x = star.generated(&[gx]).carrier.len() == 3
            && star.generated(&[gx]).algebra.dual().isomorphic_brute(&crate::poset::Poset::chain(2));
        let sub_0 = star.generated(&[g0]).carrier.len() == 3;
        let term_label = witnessing_term(&alg, x, 3);
        // the star transform evaluates terms against the relocated zero
        let star_transform_identity = match &term_label {
            Some(src) => {
                let t = Term::parse(src).unwrap();
                let lhs = t.star().eval(&star, Some(gx), Some(g0))?;
                let rhs = emb.apply(t.eval(&alg, Some(x), None)?);
                lhs == rhs
            }
            None => {
                // sample the identity on a few shallow terms instead
                Term::enumerate_x(1).iter().all(|t| {
                    let lhs = t.star().eval(&star, Some(gx), Some(g0)).unwrap();
                    let rhs = emb.apply(t.eval(&alg, Some(x), None).unwrap());
                    lhs == rhs
                })
            }
        };
        codes.push(decorated_code(&star, &[gx, g0]));
        members.push(RoelckeMember {
            star_size,
            two_generated,
            gen_subalgebra_is_3chain: sub_x,
            zero_subalgebra_is_3chain: sub_0,
            term_label,
            star_transform_identity,
        });
    }
    let mut sorted = codes.clone();
    sorted.sort();
    sorted.dedup();
    let pairwise_distinct = sorted.len() == codes.len();
    let all_verdicts = pairwise_distinct
        && members.iter().all(|m| {
            m.two_generated
                && m.gen_subalgebra_is_3chain
                && m.zero_subalgebra_is_3chain
                && m.star_transform_identity
        });
    Ok(RoelckeReport {
        requested: n,
        family_dual_bound: dual_bound,
        members,
        pairwise_distinct,
        all_verdicts,
    })
}

/// A term t(x) whose value table pins the generator, if one of depth
/// within the bound exists: t with t(x) = 0 exactly on this algebra is not
/// required — any term whose kernel quotient reproduces the algebra
/// serves as a label. We look for a term evaluating to 0 at the generator
/// (the principal-filter quotient shape) and fall back to none.
fn witnessing_term(h: &Heyting, x: UpSet, depth: usize) -> Option<String> {
    for t in Term::enumerate_x(depth.min(2)) {
        if t.uses_only_x() && !matches!(t, Term::Zero) {
            if let Ok(v) = t.eval(h, Some(x), None) {
                if v == h.one() {
                    return Some(t.to_string());
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub elements: usize,
    pub all_fresh: bool,
    pub all_join_prime: bool,
    pub pairwise_distinct: bool,
    pub isos_extend: bool,
    pub same_one_generated_type: bool,
}

/// Produce a sequence of fresh join-prime elements over a finite subset,
/// each outside the subalgebra generated by the previous ones, with a
/// partial isomorphism fixing the subset and shifting each element to the
/// next. The finite content of an infinite orbit over a small stabilizer.
pub fn infinite_orbit_witness(chain: &mut Chain, s: &[UpSet], k: usize) -> Result<OrbitReport> {
    let mut elems: Vec<UpSet> = Vec::new();
    let mut all_fresh = true;
    let mut all_join_prime = true;
    for _ in 0..=k {
        let top = chain.top().clone();
        // lift everything to the current top
        let ctx: Vec<UpSet> = s
            .iter()
            .chain(elems.iter())
            .map(|&u| UpSet(u.0))
            .collect();
        let sub = top.generated(&ctx);
        // adjoin an isolated point to the subalgebra's dual and realize;
        // the embedding collapses the fresh point onto a maximal one
        let (grown_dual, w) = sub.algebra.dual().adjoin_point();
        let ext = Heyting::new(grown_dual.clone());
        let base_dual = sub.algebra.dual().clone();
        let target_max = crate::poset::bits(base_dual.maximals(base_dual.full()))
            .next()
            .expect("nonempty dual");
        let collapse: Vec<usize> = (0..grown_dual.n())
            .map(|i| if i == w { target_max } else { i })
            .collect();
        let pm = crate::poset::PMorphism::new(grown_dual, base_dual, collapse)?;
        let pair = crate::heyting::Hom::from_parts(sub.algebra.clone(), ext.clone(), pm);
        let task = ExtensionTask {
            base: sub.algebra.clone(),
            extension: ext.clone(),
            pair,
            anchor: sub.include.clone(),
            level: chain.len() - 1,
        };
        let into_top = chain.realize(&task)?;
        let fresh = into_top.apply(UpSet(1 << w));
        let new_top = chain.top().clone();
        // relift previous elements and the base set
        elems = elems
            .iter()
            .map(|&u| chain.link(chain.len() - 2).apply(u))
            .collect();
        let lifted_s: Vec<UpSet> = s
            .iter()
            .map(|&u| chain.embed_to_top(0).map(|_| u))
            .collect::<Result<_>>()?;
        let _ = lifted_s;
        // freshness: not in the subalgebra generated by context
        let ctx_new: Vec<UpSet> = elems.clone();
        let sub_prev = new_top.generated(&ctx_new);
        if sub_prev.carrier.contains(&fresh.0) {
            all_fresh = false;
        }
        let mut with_fresh = ctx_new.clone();
        with_fresh.push(fresh);
        let sub_with = new_top.generated(&with_fresh);
        let in_sub = sub_with.restrict(fresh).ok_or_else(|| Error::Construction {
            stage: "orbit freshness",
            detail: "fresh element missing from its own subalgebra".into(),
        })?;
        if !sub_with.algebra.is_join_prime(in_sub) {
            all_join_prime = false;
        }
        elems.push(fresh);
    }
    let mut distinct = elems.clone();
    distinct.sort();
    distinct.dedup();
    let pairwise_distinct = distinct.len() == elems.len();
    // partial isomorphisms shifting a_i to a_{i+1}, fixing s pointwise
    let mut isos_extend = true;
    for i in 0..elems.len().saturating_sub(1) {
        let mut dom: Vec<UpSet> = s.to_vec();
        dom.push(elems[i]);
        let mut img: Vec<UpSet> = s.to_vec();
        img.push(elems[i + 1]);
        let p = PartialIso { dom, img };
        if p.verify(chain.top()).is_err() {
            isos_extend = false;
            continue;
        }
        // one back-and-forth step must also succeed
        let q = extend_partial_iso(chain, &p, chain.top().one());
        if q.is_err() {
            isos_extend = false;
        }
        // relift the witnesses after growth
        if chain.len() >= 2 {
            let link = chain.link(chain.len() - 2).clone();
            elems = elems.iter().map(|&u| link.apply(u)).collect();
        }
    }
    // all elements share the one-generated canonical type
    let top = chain.top().clone();
    let mut type_codes = Vec::new();
    for &a in &elems {
        let sub = top.generated(&[a]);
        let marked = sub.restrict(a).map(|m| vec![m]).unwrap_or_default();
        type_codes.push(decorated_code(&sub.algebra, &marked));
    }
    type_codes.dedup();
    let same_one_generated_type = type_codes.len() <= 1;
    Ok(OrbitReport {
        elements: elems.len(),
        all_fresh,
        all_join_prime,
        pairwise_distinct,
        isos_extend,
        same_one_generated_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_contents() {
        let fam = one_generated_family(3).unwrap();
        // C3, the 4-element Boolean algebra, the 5-element V-algebra, and
        // the 6-element algebra of a chain plus a point
        assert_eq!(fam.len(), 4);
        let sizes: Vec<usize> = fam.iter().map(|(h, _)| h.size().unwrap()).collect();
        assert!(sizes.contains(&3) && sizes.contains(&4));
        // 2 is excluded: no valid generator
        assert!(fam.iter().all(|(h, _)| h.size().unwrap() > 2));
    }

    #[test]
    fn roelcke_family_verdicts() {
        let r = roelcke_family(4, 4).unwrap();
        assert!(r.all_verdicts);
        assert!(r.pairwise_distinct);
        assert_eq!(r.members.len(), 4);
        let r1 = roelcke_family(1, 3).unwrap();
        assert!(r1.all_verdicts);
    }

    #[test]
    fn family_count_monotone() {
        let c3 = one_generated_family(3).unwrap().len();
        let c4 = one_generated_family(4).unwrap().len();
        assert!(c4 >= c3);
        assert!(c4 >= 4);
    }

    #[test]
    fn orbit_witness_small() {
        let mut chain = Chain::new();
        let r = infinite_orbit_witness(&mut chain, &[], 2).unwrap();
        assert_eq!(r.elements, 3);
        assert!(r.all_fresh);
        assert!(r.all_join_prime);
        assert!(r.pairwise_distinct);
        assert!(r.isos_extend);
        assert!(r.same_one_generated_type);
    }
}
