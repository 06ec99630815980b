//! Finite posets on dense integer indices with the order stored as a closed
//! boolean matrix (one `u128` row per element), plus the surgeries every
//! dual-side construction needs: point splitting, adjoined points, fibered
//! products, forest unravelling.

use crate::error::{Error, Result};

/// Hard cap on poset size; rows are single `u128` words.
pub const MAX_POINTS: usize = 128;

/// Iterate the set bits of a mask.
pub fn bits(mask: u128) -> impl Iterator<Item = usize> {
    (0..MAX_POINTS).filter(move |i| mask >> i & 1 == 1)
}

/// A finite partial order. `up[i]` is the bitset `{ j : i <= j }` (reflexive).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    up: Vec<u128>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}, covers={:?})", self.n, self.covers())
    }
}

impl Poset {
    /// Build from a cover (or any generating) relation; returns the
    /// reflexive-transitive closure, rejecting cycles.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        if n == 0 || n > MAX_POINTS {
            return Err(Error::Size {
                what: "poset points",
                needed: n.max(1),
                bound: MAX_POINTS,
            });
        }
        let mut up = vec![0u128; n];
        for i in 0..n {
            up[i] |= 1 << i;
        }
        for &(a, b) in covers {
            if a >= n {
                return Err(Error::BadElement(a, n));
            }
            if b >= n {
                return Err(Error::BadElement(b, n));
            }
            up[a] |= 1 << b;
        }
        // transitive closure by iterating row unions to a fixpoint
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                let mut row = up[i];
                for j in bits(up[i]) {
                    row |= up[j];
                }
                if row != up[i] {
                    up[i] = row;
                    changed = true;
                }
            }
        }
        for i in 0..n {
            for j in bits(up[i]) {
                if j != i && up[j] >> i & 1 == 1 {
                    return Err(Error::Cycle(i, j));
                }
            }
        }
        Ok(Poset { n, up })
    }

    pub fn point() -> Poset {
        Poset::from_covers(1, &[]).unwrap()
    }

    pub fn chain(n: usize) -> Poset {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(n, &covers).unwrap()
    }

    pub fn antichain(n: usize) -> Poset {
        Poset::from_covers(n, &[]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> u128 {
        if self.n == MAX_POINTS {
            !0
        } else {
            (1u128 << self.n) - 1
        }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    /// The principal up-set of `i` as a bitset.
    pub fn up_of(&self, i: usize) -> u128 {
        self.up[i]
    }

    pub fn strict_up_of(&self, i: usize) -> u128 {
        self.up[i] & !(1u128 << i)
    }

    pub fn down_of(&self, i: usize) -> u128 {
        let mut d = 0u128;
        for j in 0..self.n {
            if self.leq(j, i) {
                d |= 1 << j;
            }
        }
        d
    }

    pub fn up_closure(&self, s: u128) -> u128 {
        let mut r = 0u128;
        for i in bits(s) {
            r |= self.up[i];
        }
        r
    }

    pub fn down_closure(&self, s: u128) -> u128 {
        let mut r = 0u128;
        for j in 0..self.n {
            if self.up[j] & s != 0 {
                r |= 1 << j;
            }
        }
        r
    }

    pub fn is_up_set(&self, s: u128) -> bool {
        self.up_closure(s) == s
    }

    /// Minimal elements of a subset.
    pub fn minimals(&self, s: u128) -> u128 {
        let mut r = 0u128;
        for i in bits(s) {
            if self.down_of(i) & s == 1 << i {
                r |= 1 << i;
            }
        }
        r
    }

    pub fn maximals(&self, s: u128) -> u128 {
        let mut r = 0u128;
        for i in bits(s) {
            if self.up[i] & s == 1 << i {
                r |= 1 << i;
            }
        }
        r
    }

    /// Cover pairs (i, j) with i < j and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in bits(self.strict_up_of(i)) {
                let between = self.strict_up_of(i) & self.down_of(j) & !(1u128 << j);
                if between == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Height of an element: longest chain strictly below it.
    pub fn height(&self, i: usize) -> usize {
        let mut h = vec![usize::MAX; self.n];
        self.height_rec(i, &mut h)
    }

    fn height_rec(&self, i: usize, memo: &mut [usize]) -> usize {
        if memo[i] != usize::MAX {
            return memo[i];
        }
        let below = self.down_of(i) & !(1u128 << i);
        let h = bits(below)
            .map(|j| self.height_rec(j, memo) + 1)
            .max()
            .unwrap_or(0);
        memo[i] = h;
        h
    }

    /// All up-sets, ordered by cardinality then bitset value. Errors out
    /// when the count exceeds `cap`.
    pub fn up_sets(&self, cap: usize) -> Result<Vec<u128>> {
        // process points tops-first (ascending strict-up count is a valid
        // topological order) so each inclusion decision is local
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| self.strict_up_of(i).count_ones());
        // a point may be included only when everything strictly above it is in
        let mut out = vec![0u128];
        for &p in &order {
            let above = self.strict_up_of(p);
            let mut next = Vec::with_capacity(out.len() * 2);
            for &s in &out {
                next.push(s);
                if s & above == above {
                    next.push(s | 1 << p);
                }
            }
            if next.len() > cap {
                return Err(Error::Size {
                    what: "up-set enumeration",
                    needed: next.len(),
                    bound: cap,
                });
            }
            out = next;
        }
        out.sort_by_key(|s| (s.count_ones(), *s));
        Ok(out)
    }

    /// Every total order extending this poset, as index sequences from
    /// bottom to top, in lexicographically increasing order.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        linear_extensions_of(self.n, |i, j| i != j && self.leq(i, j))
    }

    pub fn disjoint_union(&self, other: &Poset) -> Result<Poset> {
        let n = self.n + other.n;
        let mut covers = self.covers();
        for (a, b) in other.covers() {
            covers.push((a + self.n, b + self.n));
        }
        Poset::from_covers(n, &covers)
    }

    /// Adjoin a fresh point incomparable to everything; returns its index.
    pub fn adjoin_point(&self) -> (Poset, usize) {
        let p = self.disjoint_union(&Poset::point()).unwrap();
        (p, self.n)
    }

    /// Replace `w` by a 2-chain `w1 < w2`: `w1` keeps index `w` and inherits
    /// the strict lower bounds, `w2` gets index `n` and the strict upper
    /// bounds. Returns the collapse p-morphism back onto `self`.
    pub fn split_point(&self, w: usize) -> Result<(Poset, PMorphism)> {
        if w >= self.n {
            return Err(Error::BadElement(w, self.n));
        }
        let mut covers = Vec::new();
        for (a, b) in self.covers() {
            if a == w {
                covers.push((self.n, b)); // upper bounds hang off w2
            } else if b == w {
                covers.push((a, w));
            } else {
                covers.push((a, b));
            }
        }
        covers.push((w, self.n));
        let split = Poset::from_covers(self.n + 1, &covers)?;
        let mut map: Vec<usize> = (0..self.n).collect();
        map.push(w);
        let pi = PMorphism::new(split, self.clone(), map)?;
        Ok((pi.source().clone(), pi))
    }

    /// Replace `w` by two incomparable copies, both inheriting all strict
    /// bounds. The collapse is p-morphic; dually it breaks the join-prime
    /// at `w` into a proper join.
    pub fn double_point(&self, w: usize) -> Result<(Poset, PMorphism)> {
        if w >= self.n {
            return Err(Error::BadElement(w, self.n));
        }
        let mut covers = self.covers();
        for (a, b) in self.covers() {
            if a == w {
                covers.push((self.n, b));
            } else if b == w {
                covers.push((a, self.n));
            }
        }
        let doubled = Poset::from_covers(self.n + 1, &covers)?;
        let mut map: Vec<usize> = (0..self.n).collect();
        map.push(w);
        let pi = PMorphism::new(doubled, self.clone(), map)?;
        Ok((pi.source().clone(), pi))
    }

    /// The sub-poset induced on a subset; second component maps new indices
    /// back to the old ones.
    pub fn induced(&self, s: u128) -> (Poset, Vec<usize>) {
        let keep: Vec<usize> = bits(s).collect();
        let pos = |x: usize| keep.iter().position(|&k| k == x).unwrap();
        let mut covers = Vec::new();
        for (i, &a) in keep.iter().enumerate() {
            for &b in &keep {
                if a != b && self.leq(a, b) {
                    covers.push((i, pos(b)));
                }
            }
        }
        (Poset::from_covers(keep.len(), &covers).unwrap(), keep)
    }

    pub fn relabel(&self, perm: &[usize]) -> Poset {
        // perm[i] = new index of old point i
        let mut covers = Vec::new();
        for (a, b) in self.covers() {
            covers.push((perm[a], perm[b]));
        }
        Poset::from_covers(self.n, &covers).unwrap()
    }

    /// A forest: every principal down-set is a chain.
    pub fn is_forest(&self) -> bool {
        (0..self.n).all(|i| {
            let d: Vec<usize> = bits(self.down_of(i)).collect();
            d.iter()
                .all(|&a| d.iter().all(|&b| self.leq(a, b) || self.leq(b, a)))
        })
    }

    /// Unravel into the forest of ascending cover paths from minimal points,
    /// ordered by path prefix, with the endpoint map back onto `self`.
    /// Identity-shaped when the poset is already a forest.
    pub fn unravel_forest(&self, cap: usize) -> Result<(Poset, PMorphism)> {
        let cover_ups: Vec<Vec<usize>> = (0..self.n)
            .map(|i| {
                self.covers()
                    .iter()
                    .filter(|&&(a, _)| a == i)
                    .map(|&(_, b)| b)
                    .collect()
            })
            .collect();
        let mut paths: Vec<Vec<usize>> = Vec::new();
        let mut frontier: Vec<Vec<usize>> = bits(self.minimals(self.full()))
            .map(|r| vec![r])
            .collect();
        while let Some(p) = frontier.pop() {
            for &nxt in &cover_ups[*p.last().unwrap()] {
                let mut q = p.clone();
                q.push(nxt);
                frontier.push(q);
            }
            paths.push(p);
            if paths.len() + frontier.len() > cap {
                return Err(Error::Size {
                    what: "forest unravelling",
                    needed: paths.len() + frontier.len(),
                    bound: cap,
                });
            }
        }
        paths.sort();
        let mut covers = Vec::new();
        for (i, p) in paths.iter().enumerate() {
            for (j, q) in paths.iter().enumerate() {
                if p.len() + 1 == q.len() && q.starts_with(p) {
                    covers.push((i, j));
                }
            }
        }
        let forest = Poset::from_covers(paths.len(), &covers)?;
        let map: Vec<usize> = paths.iter().map(|p| *p.last().unwrap()).collect();
        let pi = PMorphism::new(forest, self.clone(), map)?;
        Ok((pi.source().clone(), pi))
    }

    /// Exhaustive isomorphism search; the independent oracle used by tests
    /// and by catalog cross-checks.
    pub fn isomorphic_brute(&self, other: &Poset) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut perm: Vec<usize> = Vec::new();
        let mut used = vec![false; self.n];
        self.iso_rec(other, &mut perm, &mut used)
    }

    fn iso_rec(&self, other: &Poset, perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = perm.len();
        if i == self.n {
            return true;
        }
        for j in 0..self.n {
            if used[j] {
                continue;
            }
            let ok = (0..i).all(|k| {
                self.leq(k, i) == other.leq(perm[k], j) && self.leq(i, k) == other.leq(j, perm[k])
            });
            if ok {
                used[j] = true;
                perm.push(j);
                if self.iso_rec(other, perm, used) {
                    return true;
                }
                perm.pop();
                used[j] = false;
            }
        }
        false
    }
}

/// All total orders extending an arbitrary strict relation, bottom to top.
/// Empty result means the relation has a cycle (callers translate that to
/// `CycleError` when it matters).
pub fn linear_extensions_of<F: Fn(usize, usize) -> bool>(n: usize, lt: F) -> Vec<Vec<usize>> {
    let mut preds: Vec<u128> = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && lt(j, i) {
                preds[i] |= 1 << j;
            }
        }
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    let mut placed = 0u128;
    ext_rec(n, &preds, &mut acc, &mut placed, &mut out);
    out
}

fn ext_rec(n: usize, preds: &[u128], acc: &mut Vec<usize>, placed: &mut u128, out: &mut Vec<Vec<usize>>) {
    if acc.len() == n {
        out.push(acc.clone());
        return;
    }
    for i in 0..n {
        if *placed >> i & 1 == 0 && preds[i] & !*placed == 0 {
            *placed |= 1 << i;
            acc.push(i);
            ext_rec(n, preds, acc, placed, out);
            acc.pop();
            *placed &= !(1u128 << i);
        }
    }
}

/// First linear extension in the deterministic (smallest-index-first) order.
pub fn first_linear_extension<F: Fn(usize, usize) -> bool>(n: usize, lt: F) -> Result<Vec<usize>> {
    let mut preds: Vec<u128> = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && lt(j, i) {
                preds[i] |= 1 << j;
            }
        }
    }
    let mut placed = 0u128;
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n).find(|&i| placed >> i & 1 == 0 && preds[i] & !placed == 0);
        match next {
            Some(i) => {
                placed |= 1 << i;
                order.push(i);
            }
            None => return Err(Error::Cycle(0, 0)),
        }
    }
    Ok(order)
}

/// A monotone map with the back condition: the image of each principal
/// up-set is the principal up-set of the image point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    source: Poset,
    target: Poset,
    map: Vec<usize>,
}

/// The raw p-morphism test on an unchecked assignment.
pub fn is_pmorphism(map: &[usize], source: &Poset, target: &Poset) -> bool {
    if map.len() != source.n() || map.iter().any(|&v| v >= target.n()) {
        return false;
    }
    (0..source.n()).all(|u| {
        let mut img = 0u128;
        for w in bits(source.up_of(u)) {
            img |= 1 << map[w];
        }
        img == target.up_of(map[u])
    })
}

impl PMorphism {
    pub fn new(source: Poset, target: Poset, map: Vec<usize>) -> Result<PMorphism> {
        if !is_pmorphism(&map, &source, &target) {
            return Err(Error::NotPMorphism);
        }
        Ok(PMorphism { source, target, map })
    }

    pub fn identity(p: &Poset) -> PMorphism {
        PMorphism {
            source: p.clone(),
            target: p.clone(),
            map: (0..p.n()).collect(),
        }
    }

    pub fn source(&self) -> &Poset {
        &self.source
    }

    pub fn target(&self) -> &Poset {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Inverse image of a target subset; on up-sets this is the dual
    /// Heyting homomorphism.
    pub fn preimage(&self, s: u128) -> u128 {
        let mut r = 0u128;
        for (i, &v) in self.map.iter().enumerate() {
            if s >> v & 1 == 1 {
                r |= 1 << i;
            }
        }
        r
    }

    pub fn image_mask(&self) -> u128 {
        self.map.iter().fold(0u128, |m, &v| m | 1 << v)
    }

    pub fn is_surjective(&self) -> bool {
        self.image_mask() == self.target.full()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u128;
        for &v in &self.map {
            if seen >> v & 1 == 1 {
                return false;
            }
            seen |= 1 << v;
        }
        true
    }

    /// `self` after `earlier`: (self ∘ earlier): earlier.source → self.target.
    pub fn compose(&self, earlier: &PMorphism) -> Result<PMorphism> {
        if earlier.target != self.source {
            return Err(Error::TargetMismatch);
        }
        let map = earlier.map.iter().map(|&i| self.map[i]).collect();
        PMorphism::new(earlier.source.clone(), self.target.clone(), map)
    }
}

/// Pullback of two surjective p-morphisms onto a common base: the sub-poset
/// of the product order on compatible pairs, with its two projections.
pub fn fibered_product(
    f: &PMorphism,
    g: &PMorphism,
) -> Result<(Poset, PMorphism, PMorphism)> {
    if f.target() != g.target() {
        return Err(Error::TargetMismatch);
    }
    if !f.is_surjective() || !g.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let (p1, p2) = (f.source(), g.source());
    let mut pts: Vec<(usize, usize)> = Vec::new();
    for a in 0..p1.n() {
        for b in 0..p2.n() {
            if f.apply(a) == g.apply(b) {
                pts.push((a, b));
            }
        }
    }
    if pts.len() > MAX_POINTS {
        return Err(Error::Size {
            what: "fibered product points",
            needed: pts.len(),
            bound: MAX_POINTS,
        });
    }
    let mut covers = Vec::new();
    for (i, &(a, b)) in pts.iter().enumerate() {
        for (j, &(c, d)) in pts.iter().enumerate() {
            if i != j && p1.leq(a, c) && p2.leq(b, d) {
                covers.push((i, j));
            }
        }
    }
    let q = Poset::from_covers(pts.len().max(1), &covers)?;
    if pts.is_empty() {
        return Err(Error::Degenerate);
    }
    let m1: Vec<usize> = pts.iter().map(|&(a, _)| a).collect();
    let m2: Vec<usize> = pts.iter().map(|&(_, b)| b).collect();
    let pr1 = PMorphism::new(q.clone(), p1.clone(), m1)?;
    let pr2 = PMorphism::new(q, p2.clone(), m2)?;
    Ok((pr1.source().clone(), pr1, pr2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mk_poset_basics() {
        let p = Poset::from_covers(1, &[]).unwrap();
        assert_eq!(p.n(), 1);
        let c = Poset::from_covers(2, &[(0, 1)]).unwrap();
        assert!(c.leq(0, 1) && !c.leq(1, 0));
        assert!(matches!(
            Poset::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::Cycle(..))
        ));
        assert!(matches!(
            Poset::from_covers(3, &[(0, 5)]),
            Err(Error::BadElement(5, 3))
        ));
    }

    #[test]
    fn up_set_counts() {
        assert_eq!(Poset::chain(2).up_sets(1 << 20).unwrap().len(), 3);
        assert_eq!(Poset::antichain(2).up_sets(1 << 20).unwrap().len(), 4);
        let mixed = Poset::chain(2).disjoint_union(&Poset::point()).unwrap();
        assert_eq!(mixed.up_sets(1 << 20).unwrap().len(), 6);
        assert!(Poset::antichain(8).up_sets(100).is_err());
    }

    #[test]
    fn up_sets_brute_force_cross_check() {
        // oracle: filter all subsets for upward closure
        for p in [
            Poset::chain(3),
            Poset::antichain(3),
            Poset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
        ] {
            let mut brute: Vec<u128> = (0..1u128 << p.n()).filter(|&s| p.is_up_set(s)).collect();
            brute.sort_by_key(|s| (s.count_ones(), *s));
            assert_eq!(p.up_sets(1 << 20).unwrap(), brute);
        }
    }

    #[test]
    fn pmorphism_examples() {
        let chain = Poset::chain(2);
        let pt = Poset::point();
        assert!(is_pmorphism(&[0, 1], &chain, &chain));
        assert!(is_pmorphism(&[0, 0], &chain, &pt));
        // 2-antichain onto 2-chain, both to bottom: back condition fails
        assert!(!is_pmorphism(&[0, 0], &Poset::antichain(2), &chain));
    }

    #[test]
    fn split_point_examples() {
        let chain = Poset::chain(2);
        let (p, pi) = chain.split_point(0).unwrap();
        assert_eq!(p.n(), 3);
        assert!(p.isomorphic_brute(&Poset::chain(3)));
        assert!(is_pmorphism(pi.map(), pi.source(), pi.target()));
        let (p2, _) = chain.split_point(1).unwrap();
        assert!(p2.isomorphic_brute(&Poset::chain(3)));
        // isolated point becomes a 2-chain, rest untouched
        let mixed = Poset::chain(2).disjoint_union(&Poset::point()).unwrap();
        let (p3, pi3) = mixed.split_point(2).unwrap();
        assert!(p3.isomorphic_brute(&Poset::chain(2).disjoint_union(&Poset::chain(2)).unwrap()));
        assert!(pi3.is_surjective());
    }

    #[test]
    fn fibered_product_examples() {
        let chain = Poset::chain(2);
        let pt = Poset::point();
        let collapse = PMorphism::new(chain.clone(), pt.clone(), vec![0, 0]).unwrap();
        let (q, pr1, pr2) = fibered_product(&collapse, &collapse).unwrap();
        assert_eq!(q.n(), 4); // 2x2 grid
        assert!(pr1.is_surjective() && pr2.is_surjective());
        // pullback along the identity is the other leg
        let id = PMorphism::identity(&chain);
        let (q2, _, _) = fibered_product(&id, &id).unwrap();
        assert!(q2.isomorphic_brute(&chain));
    }

    #[test]
    fn linear_extension_counts() {
        assert_eq!(Poset::chain(2).linear_extensions().len(), 1);
        assert_eq!(Poset::antichain(2).linear_extensions().len(), 2);
        assert_eq!(Poset::antichain(3).linear_extensions().len(), 6);
        assert!(first_linear_extension(2, |i, j| i != j).is_err()); // cycle
    }

    #[test]
    fn unravel_examples() {
        // already a forest: same shape back
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let (f, pi) = v.unravel_forest(128).unwrap();
        assert!(f.isomorphic_brute(&v));
        assert!(pi.is_surjective());
        // shared top duplicates into two chains
        let lam = Poset::from_covers(3, &[(1, 0), (2, 0)]).unwrap();
        let (f2, pi2) = lam.unravel_forest(128).unwrap();
        assert_eq!(f2.n(), 4);
        assert!(f2.is_forest());
        assert!(pi2.is_surjective());
    }
}
