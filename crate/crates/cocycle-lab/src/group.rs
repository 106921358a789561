//! Finite groups as Cayley tables, plus truncated free-group word balls.
//!
//! The identity always sits at index 0; builders relabel to enforce this so
//! that trace extraction is a plain lookup at coefficient 0.
//!
//! ```
//! use cocycle_lab::group::{build_cyclic, build_heisenberg_mod, WordBall};
//!
//! let z6 = build_cyclic(6)?;
//! assert_eq!(z6.mul(5, 5), 4);
//!
//! // the finite Heisenberg surrogate is nonabelian already at n = 2
//! let h2 = build_heisenberg_mod(2, 5040)?;
//! assert_eq!(h2.order(), 8);
//! assert!(!h2.is_abelian());
//!
//! // reduced words of length <= 2 over two generators: 1 + 4 + 12
//! let ball = WordBall::build(2, 2, 1 << 20)?;
//! assert_eq!(ball.len(), 17);
//! # Ok::<(), cocycle_lab::Error>(())
//! ```

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Default cap on the order of constructed groups.
pub const DEFAULT_ORDER_CAP: usize = 5040;

/// Above this order the associativity check samples triples instead of
/// enumerating all of them.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
const ASSOC_SAMPLES: usize = 100_000;
const ASSOC_SEED: u64 = 0x5eed_a550;

/// A finite group presented by its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Option<Vec<String>>,
}

pub type GroupRef = Arc<FiniteGroup>;

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl FiniteGroup {
    /// Builds from a raw multiplication table and validates every invariant.
    pub fn from_table(order: usize, mul: Vec<usize>, labels: Option<Vec<String>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidParameter("group order must be positive".into()));
        }
        if mul.len() != order * order {
            return Err(Error::Validation(format!(
                "mul table has {} entries, expected {}",
                mul.len(),
                order * order
            )));
        }
        if let Some(ref l) = labels {
            if l.len() != order {
                return Err(Error::Validation("labels length != order".into()));
            }
        }
        let mut inv = vec![usize::MAX; order];
        for g in 0..order {
            for h in 0..order {
                if mul[g * order + h] == 0 {
                    inv[g] = h;
                }
            }
        }
        let group = FiniteGroup { order, mul, inv, labels };
        group.validate()?;
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Latin square, identity, inverses and associativity.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        let mut seen = vec![false; n];
        for g in 0..n {
            // row
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..n {
                let p = self.mul(g, h);
                if p >= n || seen[p] {
                    return Err(Error::Validation(format!("row {g} is not a permutation")));
                }
                seen[p] = true;
            }
            // column
            seen.iter_mut().for_each(|s| *s = false);
            for h in 0..n {
                let p = self.mul(h, g);
                if p >= n || seen[p] {
                    return Err(Error::Validation(format!("column {g} is not a permutation")));
                }
                seen[p] = true;
            }
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(Error::Validation("index 0 is not the identity".into()));
            }
            if self.inv[g] == usize::MAX
                || self.mul(g, self.inv[g]) != 0
                || self.mul(self.inv[g], g) != 0
            {
                return Err(Error::Validation(format!("element {g} has no two-sided inverse")));
            }
        }
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                            return Err(Error::Validation(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = Rng::seed_from(ASSOC_SEED);
            for _ in 0..ASSOC_SAMPLES {
                let a = rng.below(n);
                let b = rng.below(n);
                let c = rng.below(n);
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(Error::Validation(format!(
                        "associativity fails at sampled ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(j: GroupJson) -> Result<Self> {
        let g = FiniteGroup::from_table(j.order, j.mul, j.labels)?;
        if g.inv != j.inv {
            return Err(Error::Validation("stored inverse table is inconsistent".into()));
        }
        Ok(g)
    }
}

/// Wire format: `{order, mul (row-major), inv, labels}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub order: usize,
    pub mul: Vec<usize>,
    pub inv: Vec<usize>,
    pub labels: Option<Vec<String>>,
}

/// Z_n with `mul[a,b] = (a+b) mod n`.
pub fn build_cyclic(n: usize) -> Result<GroupRef> {
    if n == 0 {
        return Err(Error::InvalidParameter("cyclic group needs n >= 1".into()));
    }
    let mul: Vec<usize> = (0..n * n).map(|i| (i / n + i % n) % n).collect();
    let labels = (0..n).map(|k| k.to_string()).collect();
    Ok(Arc::new(FiniteGroup::from_table(n, mul, Some(labels))?))
}

/// Dihedral group of order 2n: words `r^j s^e` with `s r s = r^-1`.
pub fn build_dihedral(n: usize, cap: usize) -> Result<GroupRef> {
    if n == 0 {
        return Err(Error::InvalidParameter("dihedral group needs n >= 1".into()));
    }
    let order = 2 * n;
    if order > cap {
        return Err(Error::ResourceLimit(format!("dihedral order {order} exceeds cap {cap}")));
    }
    let idx = |r: usize, s: usize| s * n + r;
    let mut mul = vec![0usize; order * order];
    for r1 in 0..n {
        for s1 in 0..2 {
            for r2 in 0..n {
                for s2 in 0..2 {
                    // r^{r1} s^{s1} r^{r2} s^{s2} = r^{r1 + (-1)^{s1} r2} s^{s1+s2}
                    let r = if s1 == 0 { (r1 + r2) % n } else { (r1 + n - r2 % n) % n };
                    let s = (s1 + s2) % 2;
                    mul[idx(r1, s1) * order + idx(r2, s2)] = idx(r, s);
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| {
            let (s, r) = (i / n, i % n);
            match (r, s) {
                (0, 0) => "e".into(),
                (r, 0) => format!("r{r}"),
                (0, _) => "s".into(),
                (r, _) => format!("r{r}s"),
            }
        })
        .collect();
    Ok(Arc::new(FiniteGroup::from_table(order, mul, Some(labels))?))
}

/// Symmetric group S_n, permutations in lexicographic order (identity first).
pub fn build_symmetric(n: usize, cap: usize) -> Result<GroupRef> {
    if n == 0 {
        return Err(Error::InvalidParameter("symmetric group needs n >= 1".into()));
    }
    let mut order = 1usize;
    for k in 2..=n {
        order = order.saturating_mul(k);
        if order > cap {
            return Err(Error::ResourceLimit(format!("S_{n} order exceeds cap {cap}")));
        }
    }
    let mut perms: Vec<Vec<usize>> = Vec::with_capacity(order);
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        perms.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    let index: HashMap<Vec<usize>, usize> =
        perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let mut mul = vec![0usize; order * order];
    for (i, p) in perms.iter().enumerate() {
        for (j, q) in perms.iter().enumerate() {
            // composition: apply q first, then p
            let comp: Vec<usize> = (0..n).map(|x| p[q[x]]).collect();
            mul[i * order + j] = index[&comp];
        }
    }
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
        .collect();
    Ok(Arc::new(FiniteGroup::from_table(order, mul, Some(labels))?))
}

/// Direct product of two groups, index `(a, b) -> a * |G2| + b`.
pub fn build_product(g1: &GroupRef, g2: &GroupRef, cap: usize) -> Result<GroupRef> {
    let (n1, n2) = (g1.order(), g2.order());
    let order = n1
        .checked_mul(n2)
        .ok_or_else(|| Error::ResourceLimit("product order overflow".into()))?;
    if order > cap {
        return Err(Error::ResourceLimit(format!("product order {order} exceeds cap {cap}")));
    }
    let idx = |a: usize, b: usize| a * n2 + b;
    let mut mul = vec![0usize; order * order];
    for a1 in 0..n1 {
        for b1 in 0..n2 {
            for a2 in 0..n1 {
                for b2 in 0..n2 {
                    mul[idx(a1, b1) * order + idx(a2, b2)] = idx(g1.mul(a1, a2), g2.mul(b1, b2));
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| format!("({},{})", g1.label(i / n2), g2.label(i % n2)))
        .collect();
    Ok(Arc::new(FiniteGroup::from_table(order, mul, Some(labels))?))
}

/// Finite Heisenberg surrogate: triples over Z_n with
/// `(a,b,c)(a',b',c') = (a + a' + b c' mod n, b + b', c + c')`.
pub fn build_heisenberg_mod(n: usize, cap: usize) -> Result<GroupRef> {
    if n == 0 {
        return Err(Error::InvalidParameter("heisenberg_mod needs n >= 1".into()));
    }
    let order = n
        .checked_mul(n)
        .and_then(|m| m.checked_mul(n))
        .ok_or_else(|| Error::ResourceLimit("heisenberg order overflow".into()))?;
    if order > cap {
        return Err(Error::ResourceLimit(format!(
            "heisenberg_mod order {order} exceeds cap {cap}"
        )));
    }
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let mut mul = vec![0usize; order * order];
    for a1 in 0..n {
        for b1 in 0..n {
            for c1 in 0..n {
                for a2 in 0..n {
                    for b2 in 0..n {
                        for c2 in 0..n {
                            let a = (a1 + a2 + b1 * c2) % n;
                            mul[idx(a1, b1, c1) * order + idx(a2, b2, c2)] =
                                idx(a, (b1 + b2) % n, (c1 + c2) % n);
                        }
                    }
                }
            }
        }
    }
    let labels = (0..order)
        .map(|i| format!("({},{},{})", i / (n * n), (i / n) % n, i % n))
        .collect();
    Ok(Arc::new(FiniteGroup::from_table(order, mul, Some(labels))?))
}

/// Heisenberg coordinates for element index `g` of [`build_heisenberg_mod`].
pub fn heisenberg_coords(n: usize, g: usize) -> (usize, usize, usize) {
    (g / (n * n), (g / n) % n, g % n)
}

/// Named builder selector mirroring the CLI configuration surface.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Symmetric { n: usize },
    Product { factors: Vec<GroupSpec> },
    HeisenbergMod { n: usize },
    Json { path: String },
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupRef> {
        self.build_capped(DEFAULT_ORDER_CAP)
    }

    pub fn build_capped(&self, cap: usize) -> Result<GroupRef> {
        match self {
            GroupSpec::Cyclic { n } => build_cyclic(*n),
            GroupSpec::Dihedral { n } => build_dihedral(*n, cap),
            GroupSpec::Symmetric { n } => build_symmetric(*n, cap),
            GroupSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::InvalidParameter("product needs >= 1 factor".into()));
                }
                let mut acc = factors[0].build_capped(cap)?;
                for f in &factors[1..] {
                    acc = build_product(&acc, &f.build_capped(cap)?, cap)?;
                }
                Ok(acc)
            }
            GroupSpec::HeisenbergMod { n } => build_heisenberg_mod(*n, cap),
            GroupSpec::Json { path } => {
                let text = std::fs::read_to_string(path)?;
                let j: GroupJson = serde_json::from_str(&text)?;
                Ok(Arc::new(FiniteGroup::from_json(j)?))
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupSpec::Cyclic { n } => format!("Z{n}"),
            GroupSpec::Dihedral { n } => format!("D{n}"),
            GroupSpec::Symmetric { n } => format!("S{n}"),
            GroupSpec::Product { factors } => factors
                .iter()
                .map(|f| f.describe())
                .collect::<Vec<_>>()
                .join("x"),
            GroupSpec::HeisenbergMod { n } => format!("H{n}"),
            GroupSpec::Json { path } => format!("json:{path}"),
        }
    }
}

/// Checks that `phi: G -> H` (as an index map) is a homomorphism with
/// `phi(e) = e`.
pub fn validate_homomorphism(g: &FiniteGroup, h: &FiniteGroup, phi: &[usize]) -> Result<()> {
    if phi.len() != g.order() {
        return Err(Error::Validation("homomorphism table length != |G|".into()));
    }
    if phi.iter().any(|&x| x >= h.order()) {
        return Err(Error::Validation("homomorphism image out of range".into()));
    }
    if phi[0] != 0 {
        return Err(Error::Validation("homomorphism must send identity to identity".into()));
    }
    for a in 0..g.order() {
        for b in 0..g.order() {
            if phi[g.mul(a, b)] != h.mul(phi[a], phi[b]) {
                return Err(Error::Validation(format!(
                    "homomorphism fails at ({a},{b})"
                )));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Truncated free-group word balls
// ---------------------------------------------------------------------------

/// A letter is a signed generator: `+j` for `a_j`, `-j` for `a_j^{-1}`
/// (`j` starting at 1).
pub type Letter = i32;

/// All reduced words of length <= R in the free group on `k` generators.
///
/// Index 0 is the empty word. Multiplication is partial: it is defined only
/// when the reduced product stays inside the ball.
#[derive(Debug, Clone)]
pub struct WordBall {
    generators: usize,
    radius: usize,
    words: Vec<Vec<Letter>>,
    index: HashMap<Vec<Letter>, usize>,
    inv: Vec<usize>,
}

pub type WordBallRef = Arc<WordBall>;

/// Free reduction of a letter sequence (stack based).
pub fn reduce_word(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        debug_assert!(l != 0);
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Number of reduced words of length <= radius: `1 + sum_j 2k (2k-1)^{j-1}`.
pub fn ball_size(k: usize, radius: usize) -> usize {
    let mut total = 1usize;
    let mut layer = 2 * k;
    for _ in 1..=radius {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * k - 1);
    }
    total
}

impl WordBall {
    pub fn build(k: usize, radius: usize, cap: usize) -> Result<WordBallRef> {
        if k == 0 {
            return Err(Error::InvalidParameter("word ball needs k >= 1 generators".into()));
        }
        let predicted = ball_size(k, radius);
        if predicted > cap {
            return Err(Error::ResourceLimit(format!(
                "word ball size {predicted} exceeds cap {cap}"
            )));
        }
        let mut words: Vec<Vec<Letter>> = vec![vec![]];
        let mut frontier: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 1..=radius {
            let mut next = Vec::new();
            for w in &frontier {
                for j in 1..=(k as Letter) {
                    for l in [j, -j] {
                        if w.last() == Some(&-l) {
                            continue;
                        }
                        let mut nw = w.clone();
                        nw.push(l);
                        next.push(nw);
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        debug_assert_eq!(words.len(), predicted);
        let index: HashMap<Vec<Letter>, usize> =
            words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let inv: Vec<usize> = words
            .iter()
            .map(|w| {
                let iw: Vec<Letter> = w.iter().rev().map(|l| -l).collect();
                index[&iw]
            })
            .collect();
        Ok(Arc::new(WordBall { generators: k, radius, words, index, inv }))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn word(&self, g: usize) -> &[Letter] {
        &self.words[g]
    }

    /// Word length |g|.
    pub fn word_len(&self, g: usize) -> usize {
        self.words[g].len()
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    /// Partial product: `Some(gh)` when the reduced product stays in the ball.
    pub fn mul(&self, g: usize, h: usize) -> Option<usize> {
        let mut cat = self.words[g].clone();
        cat.extend_from_slice(&self.words[h]);
        let red = reduce_word(&cat);
        self.index.get(&red).copied()
    }

    pub fn index_of(&self, word: &[Letter]) -> Option<usize> {
        self.index.get(word).copied()
    }

    /// Length of the longest common prefix of the reduced words g and h;
    /// this is `|min(g,h)|`, the Gromov product with respect to word length.
    pub fn common_prefix_len(&self, g: usize, h: usize) -> usize {
        self.words[g]
            .iter()
            .zip(&self.words[h])
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Whether `p` indexes a prefix of `g` (including `g` itself).
    pub fn is_prefix(&self, p: usize, g: usize) -> bool {
        let pw = &self.words[p];
        let gw = &self.words[g];
        pw.len() <= gw.len() && gw[..pw.len()] == pw[..]
    }
}
