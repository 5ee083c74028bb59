//! Permutations of `{0..n-1}` and permutation groups held as a base and
//! strong generating set built by deterministic Schreier–Sims.

use std::fmt;

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};

/// A bijection on `{0..n-1}` stored as its image list: `images[i] = π(i)`.
///
/// Acting on a vector places entry `i` at position `π(i)`, which is the row
/// vector product `v * P` with `P[i][π(i)] = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Validation(format!("{images:?} is not a permutation of 0..{n}")));
            }
        }
        Ok(Permutation { images })
    }

    /// Builds from disjoint cycles over 0-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                let b = cycle[(i + 1) % cycle.len()];
                if a >= n || b >= n || std::mem::replace(&mut touched[a], true) {
                    return Err(Error::Validation(format!("bad cycle {cycle:?} on {n} points")));
                }
                images[a] = b;
            }
        }
        Permutation::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Smallest point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, x)| i != *x).map(|(i, _)| i)
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::Shape(format!("compose on {} and {} points", self.len(), other.len())));
        }
        Ok(self.then(other))
    }

    // Unchecked compose for hot paths where sizes are known to agree.
    pub(crate) fn then(&self, other: &Permutation) -> Permutation {
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// Moves entry `i` of `v` to position `π(i)`.
    pub fn apply<T: Clone>(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.len() {
            return Err(Error::Shape(format!("apply {}-point permutation to length {}", self.len(), v.len())));
        }
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.images[i]] = x.clone();
        }
        Ok(out)
    }

    /// Smallest `k ≥ 1` with `self^k = identity`.
    pub fn order(&self) -> u64 {
        let mut seen = vec![false; self.len()];
        let mut acc: u64 = 1;
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            acc = lcm(acc, len);
        }
        acc
    }

    /// Single line of space-separated images.
    pub fn to_text(&self) -> String {
        self.images.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }

    pub fn from_text(line: &str) -> Result<Permutation> {
        let images = line
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad image {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "()");
        }
        let mut seen = vec![false; self.len()];
        for start in 0..self.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.images[x];
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Generator-set file: a line `n <count>` followed by one permutation per line.
pub fn generators_to_text(n: usize, gens: &[Permutation]) -> String {
    let mut s = format!("{n} {}\n", gens.len());
    for g in gens {
        s.push_str(&g.to_text());
        s.push('\n');
    }
    s
}

pub fn generators_from_text(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty generator file".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [n, count] = nums[..] else {
        return Err(Error::Parse(format!("header {header:?} is not 'n count'")));
    };
    let gens = lines.map(Permutation::from_text).collect::<Result<Vec<_>>>()?;
    if gens.len() != count {
        return Err(Error::Parse(format!("expected {count} generators, found {}", gens.len())));
    }
    if let Some(g) = gens.iter().find(|g| g.len() != n) {
        return Err(Error::Parse(format!("generator on {} points, header says {n}", g.len())));
    }
    Ok((n, gens))
}

/// One level of the stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// Orbit points in discovery order; `orbit[0] == point`.
    orbit: Vec<usize>,
    /// `reps[x]` maps `point` to `x` for every orbit point `x`.
    reps: Vec<Option<Permutation>>,
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct Bsgs {
    n: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

impl Bsgs {
    /// Runs deterministic Schreier–Sims on `generators`.
    ///
    /// Base points are chosen as the smallest point moved by the generator
    /// that needs a new level.
    pub fn schreier_sims(n: usize, generators: &[Permutation]) -> Result<Bsgs> {
        for g in generators {
            if g.len() != n {
                return Err(Error::Validation(format!("generator {g:?} is not on {n} points")));
            }
        }
        let mut bsgs = Bsgs { n, strong: Vec::new(), levels: Vec::new() };
        for g in generators {
            if g.is_identity() || bsgs.strong.contains(g) {
                continue;
            }
            if bsgs.levels.iter().all(|l| g.image(l.point) == l.point) {
                let p = g.first_moved().expect("non-identity");
                bsgs.levels.push(Level { point: p, orbit: vec![], reps: vec![] });
            }
            bsgs.strong.push(g.clone());
        }
        for i in 0..bsgs.levels.len() {
            bsgs.rebuild_level(i);
        }

        let mut i = bsgs.levels.len();
        while i > 0 {
            let level = i - 1;
            match bsgs.find_missing(level) {
                None => i -= 1,
                Some((residue, depth)) => {
                    if depth == bsgs.levels.len() {
                        let p = residue.first_moved().expect("non-identity residue");
                        bsgs.levels.push(Level { point: p, orbit: vec![], reps: vec![] });
                    }
                    bsgs.strong.push(residue);
                    for l in level + 1..=depth {
                        bsgs.rebuild_level(l);
                    }
                    i = depth + 1;
                }
            }
        }
        Ok(bsgs)
    }

    /// Strong generators that fix all base points before `level`.
    fn level_generators(&self, level: usize) -> impl Iterator<Item = &Permutation> {
        let fixed: Vec<usize> = self.levels[..level].iter().map(|l| l.point).collect();
        self.strong.iter().filter(move |g| fixed.iter().all(|&b| g.image(b) == b))
    }

    fn rebuild_level(&mut self, level: usize) {
        let point = self.levels[level].point;
        let gens: Vec<Permutation> = self.level_generators(level).cloned().collect();
        let mut reps: Vec<Option<Permutation>> = vec![None; self.n];
        reps[point] = Some(Permutation::identity(self.n));
        let mut orbit = vec![point];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for s in &gens {
                let y = s.image(x);
                if reps[y].is_none() {
                    reps[y] = Some(reps[x].as_ref().expect("orbit point").then(s));
                    orbit.push(y);
                }
            }
        }
        self.levels[level].orbit = orbit;
        self.levels[level].reps = reps;
    }

    /// Checks every Schreier generator of `level` against the chain below it.
    /// Returns the first non-trivial residue and the depth where sifting stopped.
    fn find_missing(&self, level: usize) -> Option<(Permutation, usize)> {
        let lv = &self.levels[level];
        let gens: Vec<&Permutation> = self.level_generators(level).collect();
        for &x in &lv.orbit {
            let ux = lv.reps[x].as_ref().expect("orbit point");
            for s in &gens {
                let y = s.image(x);
                let uy = lv.reps[y].as_ref().expect("orbit closed");
                let schreier = ux.then(s).then(&uy.inverse());
                let (residue, depth) = self.sift_from(schreier, level + 1);
                if !residue.is_identity() {
                    return Some((residue, depth));
                }
            }
        }
        None
    }

    fn sift_from(&self, mut g: Permutation, start: usize) -> (Permutation, usize) {
        for (i, lv) in self.levels.iter().enumerate().skip(start) {
            let y = g.image(lv.point);
            match &lv.reps[y] {
                None => return (g, i),
                Some(u) => g = g.then(&u.inverse()),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Orbit sizes of the stabilizer chain, one per base point.
    pub fn transversal_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Orbit point → coset representative for one level.
    pub fn transversal(&self, level: usize) -> Vec<(usize, &Permutation)> {
        let lv = &self.levels[level];
        lv.orbit.iter().map(|&x| (x, lv.reps[x].as_ref().expect("orbit point"))).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Order as `u128` when it fits.
    pub fn order_u128(&self) -> Option<u128> {
        self.levels.iter().try_fold(1u128, |acc, l| acc.checked_mul(l.orbit.len() as u128))
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        if p.len() != self.n {
            return false;
        }
        let (residue, depth) = self.sift_from(p.clone(), 0);
        depth == self.levels.len() && residue.is_identity()
    }

    /// Exactly uniform element: one uniformly chosen representative per level.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> Permutation {
        let mut g = Permutation::identity(self.n);
        for lv in self.levels.iter().rev() {
            let x = lv.orbit[rng.random_range(0..lv.orbit.len())];
            g = g.then(lv.reps[x].as_ref().expect("orbit point"));
        }
        g
    }

    /// All elements, each once. The identity comes first and the top level's
    /// representative varies fastest.
    pub fn enumerate(&self, limit: usize) -> Result<Vec<Permutation>> {
        match self.order_u128() {
            Some(o) if o <= limit as u128 => Ok(self.elements().collect()),
            _ => Err(Error::Capacity(format!("group order {} exceeds limit {limit}", self.order()))),
        }
    }

    /// Lazy version of [`Bsgs::enumerate`] without a size limit.
    pub fn elements(&self) -> Elements<'_> {
        Elements { group: self, digits: vec![0; self.levels.len()], done: false }
    }
}

/// Iterator over group elements as products of transversal representatives.
pub struct Elements<'a> {
    group: &'a Bsgs,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Elements<'_> {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        let levels = &self.group.levels;
        let mut g = Permutation::identity(self.group.n);
        for (lv, &d) in levels.iter().zip(&self.digits).rev() {
            g = g.then(lv.reps[lv.orbit[d]].as_ref().expect("orbit point"));
        }
        self.done = true;
        for (d, lv) in self.digits.iter_mut().zip(levels) {
            *d += 1;
            if *d < lv.orbit.len() {
                self.done = false;
                break;
            }
            *d = 0;
        }
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::{BTreeSet, HashMap};

    fn perm(images: &[usize]) -> Permutation {
        Permutation::from_images(images.to_vec()).unwrap()
    }

    /// Breadth-first closure of the generators, for small groups.
    fn closure(n: usize, gens: &[Permutation]) -> BTreeSet<Permutation> {
        let mut seen = BTreeSet::from([Permutation::identity(n)]);
        let mut queue = vec![Permutation::identity(n)];
        while let Some(g) = queue.pop() {
            for s in gens {
                let h = g.then(s);
                if seen.insert(h.clone()) {
                    queue.push(h);
                }
            }
        }
        seen
    }

    fn s4() -> Vec<Permutation> {
        vec![perm(&[1, 0, 2, 3]), perm(&[1, 2, 3, 0])]
    }

    fn s3() -> Vec<Permutation> {
        vec![perm(&[1, 0, 2]), perm(&[1, 2, 0])]
    }

    /// 0-based permutation matrix with `P[i][π(i)] = 1`.
    fn matrix(p: &Permutation) -> Vec<Vec<u8>> {
        let n = p.len();
        (0..n).map(|i| (0..n).map(|j| (p.image(i) == j) as u8).collect()).collect()
    }

    fn mat_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
        let n = a.len();
        (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|t| a[i][t] & b[t][j]).fold(0, |x, y| x ^ y)).collect())
            .collect()
    }

    #[test]
    fn compose_matches_matrix_product() {
        let p1 = Permutation::from_cycles(8, &[&[0, 3], &[1, 4], &[2, 5]]).unwrap();
        let p2 = Permutation::from_cycles(8, &[&[0, 1]]).unwrap();
        let c = p1.compose(&p2).unwrap();
        assert_eq!(matrix(&c), mat_mul(&matrix(&p1), &matrix(&p2)));
        let v: Vec<u32> = (10..18).collect();
        assert_eq!(c.apply(&v).unwrap(), p2.apply(&p1.apply(&v).unwrap()).unwrap());
    }

    #[test]
    fn compose_identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut images: Vec<usize> = (0..24).collect();
        images.shuffle(&mut rng);
        let p = perm(&images);
        assert_eq!(p.compose(&Permutation::identity(24)).unwrap(), p);
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(Permutation::identity(5).inverse().is_identity());
        let swap = Permutation::from_cycles(8, &[&[0, 1]]).unwrap();
        assert_eq!(swap.inverse(), swap);
        assert!(matches!(p.compose(&Permutation::identity(3)), Err(Error::Shape(_))));
    }

    #[test]
    fn apply_roundtrip_and_errors() {
        let p = perm(&[2, 0, 1]);
        let v = vec![0.5, -1.0, 3.0];
        assert_eq!(p.apply(&v).unwrap(), vec![-1.0, 3.0, 0.5]);
        assert_eq!(p.apply(&p.inverse().apply(&v).unwrap()).unwrap(), v);
        assert_eq!(Permutation::identity(3).apply(&v).unwrap(), v);
        assert!(p.apply(&[1u8, 0]).is_err());
    }

    #[test]
    fn validation() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Bsgs::schreier_sims(4, &[Permutation::identity(3)]).is_err());
    }

    #[test]
    fn trivial_group() {
        let g = Bsgs::schreier_sims(5, &[]).unwrap();
        assert_eq!(g.order(), BigUint::from(1u32));
        assert!(g.contains(&Permutation::identity(5)));
        assert_eq!(g.enumerate(10).unwrap(), vec![Permutation::identity(5)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(g.sample_uniform(&mut rng).is_identity());
    }

    #[test]
    fn symmetric_group_s4() {
        let g = Bsgs::schreier_sims(4, &s4()).unwrap();
        assert_eq!(closure(4, &s4()).len(), 24);
        assert_eq!(g.order(), BigUint::from(24u32));
        for p in &s4() {
            assert!(g.contains(p));
        }
    }

    #[test]
    fn membership_matches_enumeration_on_subgroup() {
        // ⟨(0 1 2 3)⟩ is cyclic of order 4 inside S4.
        let gens = vec![perm(&[1, 2, 3, 0])];
        let g = Bsgs::schreier_sims(4, &gens).unwrap();
        let members = closure(4, &gens);
        let all = closure(4, &s4());
        for p in &all {
            assert_eq!(g.contains(p), members.contains(p), "{p:?}");
        }
    }

    #[test]
    fn enumerate_s3_is_closed() {
        let g = Bsgs::schreier_sims(3, &s3()).unwrap();
        let elems = g.enumerate(100).unwrap();
        assert_eq!(elems.len(), 6);
        assert!(elems[0].is_identity());
        let set: BTreeSet<_> = elems.iter().cloned().collect();
        assert_eq!(set.len(), 6);
        for a in &elems {
            for b in &elems {
                assert!(set.contains(&a.then(b)));
            }
        }
        assert!(matches!(g.enumerate(5), Err(Error::Capacity(_))));
    }

    #[test]
    fn sampling_s3_is_uniform() {
        let g = Bsgs::schreier_sims(3, &s3()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut counts: HashMap<Permutation, usize> = HashMap::new();
        for _ in 0..6000 {
            let s = g.sample_uniform(&mut rng);
            assert!(g.contains(&s));
            *counts.entry(s).or_default() += 1;
        }
        assert_eq!(counts.len(), 6);
        let chi2: f64 = counts.values().map(|&c| (c as f64 - 1000.0).powi(2) / 1000.0).sum();
        // chi-square, 5 degrees of freedom, upper 0.001 quantile
        assert!(chi2 < 20.515, "chi2 = {chi2}");
    }

    #[test]
    fn transversal_invariants() {
        let g = Bsgs::schreier_sims(4, &s4()).unwrap();
        let base = g.base();
        for (lvl, &b) in base.iter().enumerate() {
            for (x, u) in g.transversal(lvl) {
                assert_eq!(u.image(b), x);
            }
            for s in g.level_generators(lvl) {
                assert!(base[..lvl].iter().all(|&p| s.image(p) == p));
            }
        }
        let product: usize = g.transversal_sizes().iter().product();
        assert_eq!(BigUint::from(product), g.order());
    }

    #[test]
    fn text_formats() {
        let p = perm(&[2, 0, 1]);
        assert_eq!(p.to_text(), "2 0 1");
        assert_eq!(Permutation::from_text("2 0 1").unwrap(), p);
        let text = generators_to_text(3, &s3());
        assert_eq!(generators_from_text(&text).unwrap(), (3, s3()));
        assert!(generators_from_text("3 2\n1 0 2\n").is_err());
    }

    fn random_generators(seed: u64, n: usize, count: usize) -> Vec<Permutation> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                // Products of a few transpositions keep most groups small enough to close.
                let mut images: Vec<usize> = (0..n).collect();
                let a = rng.random_range(0..n);
                let b = rng.random_range(0..n);
                images.swap(a, b);
                perm(&images)
            })
            .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn enumeration_matches_closure(seed: u64, n in 2usize..=7, count in 1usize..=3) {
            let gens = random_generators(seed, n, count);
            let g = Bsgs::schreier_sims(n, &gens).unwrap();
            let elems: BTreeSet<_> = g.enumerate(10_000).unwrap().into_iter().collect();
            prop_assert_eq!(elems, closure(n, &gens));
        }

        #[test]
        fn order_ignores_generator_order(seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut gens = vec![perm(&[1, 2, 3, 4, 5, 6, 0, 7]), perm(&[1, 0, 2, 3, 4, 5, 6, 7]), perm(&[0, 1, 2, 3, 4, 5, 7, 6])];
            let before = Bsgs::schreier_sims(8, &gens).unwrap().order();
            gens.shuffle(&mut rng);
            prop_assert_eq!(Bsgs::schreier_sims(8, &gens).unwrap().order(), before);
        }

        #[test]
        fn closure_under_products_and_inverses(seed: u64) {
            let gens = vec![perm(&[1, 2, 3, 4, 5, 6, 7, 8, 0]), perm(&[0, 2, 1, 3, 4, 5, 6, 7, 8])];
            let g = Bsgs::schreier_sims(9, &gens).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100 {
                let a = g.sample_uniform(&mut rng);
                let b = g.sample_uniform(&mut rng);
                prop_assert!(g.contains(&a.then(&b)));
                prop_assert!(g.contains(&a.inverse()));
            }
        }
    }
}
