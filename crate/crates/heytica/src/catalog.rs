//! Enumeration of finite posets up to isomorphism (the substrate for the
//! age of finite nontrivial Heyting algebras), embedding enumeration, and
//! a line-oriented persistence format.

use std::collections::HashSet;
use std::path::Path;

use crate::canon::canonical_code;
use crate::error::{Error, Result};
use crate::heyting::{Heyting, Hom, UpSet};
use crate::poset::{bits, is_pmorphism, PMorphism, Poset};

pub const MAX_CATALOG_SIZE: usize = 7;

/// One canonical representative per isomorphism class, per size.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    by_size: Vec<Vec<Poset>>,
}

/// Grow posets one element at a time: every class on n+1 points restricts
/// to a class on n points, so extending each representative by one point
/// with an (up-set, down-set) attachment covers everything; canonical-form
/// rejection keeps one representative per class.
pub fn enumerate_posets(n: usize) -> Result<Vec<Poset>> {
    if n == 0 || n > MAX_CATALOG_SIZE {
        return Err(Error::Size {
            what: "catalog poset size",
            needed: n,
            bound: MAX_CATALOG_SIZE,
        });
    }
    let mut current = vec![Poset::point()];
    for k in 1..n {
        let mut next = Vec::new();
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        for p in &current {
            for ext in extensions(p, k) {
                let code = canonical_code(&ext);
                if seen.insert(code) {
                    next.push(ext);
                }
            }
        }
        next.sort_by_key(canonical_code);
        current = next;
    }
    current.sort_by_key(canonical_code);
    Ok(current)
}

fn extensions(p: &Poset, k: usize) -> Vec<Poset> {
    // attach point k with up-set U (everything above it) and down-set D:
    // U up-closed, D down-closed, disjoint, and D x U inside the old order
    let mut out = Vec::new();
    let full = p.full();
    for u in 0..=full {
        if !p.is_up_set(u) {
            continue;
        }
        for d in 0..=full {
            if d & u != 0 || p.down_closure(d) != d {
                continue;
            }
            let ok = bits(d).all(|a| bits(u).all(|b| p.leq(a, b)));
            if !ok {
                continue;
            }
            let mut covers = p.covers();
            for b in bits(u) {
                covers.push((k, b));
            }
            for a in bits(d) {
                covers.push((a, k));
            }
            out.push(Poset::from_covers(k + 1, &covers).unwrap());
        }
    }
    out
}

impl Catalog {
    pub fn build(max_size: usize) -> Result<Catalog> {
        let mut by_size = Vec::new();
        for n in 1..=max_size {
            by_size.push(enumerate_posets(n)?);
        }
        Ok(Catalog { by_size })
    }

    pub fn max_size(&self) -> usize {
        self.by_size.len()
    }

    pub fn of_size(&self, n: usize) -> &[Poset] {
        &self.by_size[n - 1]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_size.iter().map(Vec::len).collect()
    }

    pub fn all(&self) -> impl Iterator<Item = &Poset> {
        self.by_size.iter().flatten()
    }

    /// All algebras with dual size up to `n`, in canonical order.
    pub fn algebras_up_to(&self, n: usize) -> Vec<Heyting> {
        self.by_size[..n.min(self.by_size.len())]
            .iter()
            .flatten()
            .map(|p| Heyting::new(p.clone()))
            .collect()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        for posets in &self.by_size {
            for p in posets {
                let covers: Vec<String> = p
                    .covers()
                    .iter()
                    .map(|(a, b)| format!("{a}-{b}"))
                    .collect();
                out.push_str(&format!("{};{}\n", p.n(), covers.join(",")));
            }
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Catalog> {
        let text = std::fs::read_to_string(path)?;
        let mut by_size: Vec<Vec<Poset>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let bad = |detail: String| Error::Format {
                line: lineno + 1,
                detail,
            };
            let (n_str, cover_str) = line
                .split_once(';')
                .ok_or_else(|| bad("missing ';'".into()))?;
            let n: usize = n_str
                .parse()
                .map_err(|_| bad(format!("bad size {n_str}")))?;
            let mut covers = Vec::new();
            for c in cover_str.split(',').filter(|c| !c.is_empty()) {
                let (a, b) = c
                    .split_once('-')
                    .ok_or_else(|| bad(format!("bad cover {c}")))?;
                let a: usize = a.parse().map_err(|_| bad(format!("bad index {a}")))?;
                let b: usize = b.parse().map_err(|_| bad(format!("bad index {b}")))?;
                covers.push((a, b));
            }
            let p = Poset::from_covers(n, &covers)
                .map_err(|e| bad(format!("invalid poset: {e}")))?;
            while by_size.len() < n {
                by_size.push(Vec::new());
            }
            by_size[n - 1].push(p);
        }
        Ok(Catalog { by_size })
    }
}

/// All surjective p-morphisms from `source` onto `target`.
pub fn surjective_pmorphisms(source: &Poset, target: &Poset) -> Vec<PMorphism> {
    let mut out = Vec::new();
    let mut map = vec![usize::MAX; source.n()];
    surj_rec(source, target, &mut map, 0, &mut out);
    out
}

fn surj_rec(
    source: &Poset,
    target: &Poset,
    map: &mut Vec<usize>,
    i: usize,
    out: &mut Vec<PMorphism>,
) {
    if i == source.n() {
        if is_pmorphism(map, source, target) {
            let covered = map.iter().fold(0u128, |m, &v| m | 1 << v);
            if covered == target.full() {
                out.push(PMorphism::new(source.clone(), target.clone(), map.clone()).unwrap());
            }
        }
        return;
    }
    for v in 0..target.n() {
        // monotonicity against already-assigned points prunes early
        let ok = (0..i).all(|j| {
            (!source.leq(j, i) || target.leq(map[j], v))
                && (!source.leq(i, j) || target.leq(v, map[j]))
        });
        if ok {
            map[i] = v;
            surj_rec(source, target, map, i + 1, out);
            map[i] = usize::MAX;
        }
    }
}

/// All Heyting embeddings A ↪ B, enumerated through duality as the
/// surjective p-morphisms dual(B) ↠ dual(A).
pub fn embeddings_between(a: &Heyting, b: &Heyting) -> Vec<Hom> {
    surjective_pmorphisms(b.dual(), a.dual())
        .into_iter()
        .map(|pm| {
            let mut h = Hom::dual_of(&pm);
            // keep the caller's algebra values (duals are equal by construction)
            h = Hom::from_parts(a.clone(), b.clone(), h.dual_map().clone());
            h
        })
        .collect()
}

/// Direct injective-hom search on element tables, independent of duality;
/// the cross-validation oracle for `embeddings_between`.
pub fn injective_homs_direct(a: &Heyting, b: &Heyting) -> Result<Vec<Vec<UpSet>>> {
    let ea = a.elements()?.to_vec();
    let eb = b.elements()?.to_vec();
    let mut out = Vec::new();
    let mut map: Vec<Option<UpSet>> = vec![None; ea.len()];
    hom_rec(a, b, &ea, &eb, &mut map, 0, &mut out);
    Ok(out)
}

fn hom_rec(
    a: &Heyting,
    b: &Heyting,
    ea: &[u128],
    eb: &[u128],
    map: &mut Vec<Option<UpSet>>,
    i: usize,
    out: &mut Vec<Vec<UpSet>>,
) {
    if i == ea.len() {
        // full verification of all operation equations
        let f = |u: UpSet| map[ea.iter().position(|&e| e == u.0).unwrap()].unwrap();
        for &x in ea {
            for &y in ea {
                let (x, y) = (UpSet(x), UpSet(y));
                if f(a.meet(x, y)) != b.meet(f(x), f(y))
                    || f(a.join(x, y)) != b.join(f(x), f(y))
                    || f(a.imp(x, y)) != b.imp(f(x), f(y))
                {
                    return;
                }
            }
        }
        out.push(map.iter().map(|m| m.unwrap()).collect());
        return;
    }
    let u = UpSet(ea[i]);
    'cand: for &cand in eb {
        let cand = UpSet(cand);
        if u == a.zero() && cand != b.zero() {
            continue;
        }
        if u == a.one() && cand != b.one() {
            continue;
        }
        for j in 0..i {
            let w = map[j].unwrap();
            if w == cand {
                continue 'cand; // injectivity
            }
            // order preservation both ways prunes most branches early
            let v = UpSet(ea[j]);
            if a.leq(u, v) != b.leq(cand, w) || a.leq(v, u) != b.leq(w, cand) {
                continue 'cand;
            }
        }
        map[i] = Some(cand);
        hom_rec(a, b, ea, eb, map, i + 1, out);
        map[i] = None;
    }
}

/// Independent classifier: partition a list of posets into isomorphism
/// classes by exhaustive permutation search (no canonical codes involved).
pub fn classify_brute(posets: &[Poset]) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in posets.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if posets[class[0]].isomorphic_brute(p) {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    classes
}

/// Labeled-poset generator via unconstrained extension (no canonical
/// pruning); feeds the independent count oracle.
pub fn labeled_extension_posets(n: usize) -> Vec<Poset> {
    let mut current = vec![Poset::point()];
    for k in 1..n {
        let mut next = Vec::new();
        for p in &current {
            next.extend(extensions(p, k));
        }
        current = next;
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_up_to_five() {
        let c = Catalog::build(5).unwrap();
        assert_eq!(c.counts(), vec![1, 2, 5, 16, 63]);
    }

    #[test]
    fn embeddings_examples() {
        let two = Heyting::two();
        let c3 = Heyting::c3();
        assert_eq!(embeddings_between(&two, &c3).len(), 1);
        assert_eq!(embeddings_between(&c3, &c3).len(), 1);
        // C3 into the 6-element grid amalgam: four embeddings
        let grid = Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let g = Heyting::new(grid);
        assert_eq!(embeddings_between(&c3, &g).len(), 4);
        // cross-check against the direct search
        assert_eq!(injective_homs_direct(&c3, &g).unwrap().len(), 4);
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("catalog.txt");
        let c = Catalog::build(4).unwrap();
        c.save(&path).unwrap();
        let d = Catalog::load(&path).unwrap();
        assert_eq!(c.counts(), d.counts());
        for (a, b) in c.all().zip(d.all()) {
            assert_eq!(canonical_code(a), canonical_code(b));
        }
        // byte-identical re-save
        let path2 = dir.path().join("catalog2.txt");
        d.save(&path2).unwrap();
        assert_eq!(
            std::fs::read(&path).unwrap(),
            std::fs::read(&path2).unwrap()
        );
        // malformed line errors with its number
        std::fs::write(&path, "2;0-1\n3;garbage\n").unwrap();
        assert!(matches!(
            Catalog::load(&path),
            Err(Error::Format { line: 2, .. })
        ));
    }
}
