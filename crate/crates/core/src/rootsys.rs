//! Simply laced Dynkin diagrams, weights and Weyl group words.
//!
//! Weights are integer vectors in the fundamental-weight basis, so the pairing
//! `(λ, α_ι)` is just coordinate `ι` of `λ`. Simple roots are the columns of
//! the Cartan matrix. Vertices are labelled `1..=rank` everywhere in the public
//! API.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex label, `1..=rank`.
pub type Vertex = usize;

/// A word in the simple reflections, read left to right as a product.
pub type WeylWord = Vec<Vertex>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    A,
    D,
    E,
}

/// A simply laced Dynkin diagram together with a diagram automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DynkinDiagram {
    kind: Kind,
    rank: usize,
    nbrs: Vec<Vec<Vertex>>,
    sigma: Vec<Vertex>,
}

impl DynkinDiagram {
    /// The diagram of type `kind` and rank `rank` with trivial automorphism.
    ///
    /// Numbering: `A_n` is the path `1..n`; `D_n` is the path `1..n-1` with
    /// `n` attached to `n-2`; `E_n` is the path `1..5` with `6` attached to
    /// `3`, then `7` attached to `5` and `8` attached to `7`.
    pub fn new(kind: Kind, rank: usize) -> Result<Self> {
        let ok = match kind {
            Kind::A => rank >= 1,
            Kind::D => rank >= 4,
            Kind::E => (6..=8).contains(&rank),
        };
        if !ok {
            return Err(Error::InvalidDiagram(format!("{kind:?}{rank}")));
        }
        let mut edges = Vec::new();
        match kind {
            Kind::A => edges.extend((1..rank).map(|i| (i, i + 1))),
            Kind::D => {
                edges.extend((1..rank - 1).map(|i| (i, i + 1)));
                edges.push((rank - 2, rank));
            }
            Kind::E => {
                edges.extend([(1, 2), (2, 3), (3, 4), (4, 5), (3, 6)]);
                if rank >= 7 {
                    edges.push((5, 7));
                }
                if rank == 8 {
                    edges.push((7, 8));
                }
            }
        }
        let mut nbrs = vec![Vec::new(); rank];
        for (a, b) in edges {
            nbrs[a - 1].push(b);
            nbrs[b - 1].push(a);
        }
        for n in &mut nbrs {
            n.sort_unstable();
        }
        Ok(DynkinDiagram {
            kind,
            rank,
            nbrs,
            sigma: (1..=rank).collect(),
        })
    }

    /// Replace the automorphism. `sigma[v-1]` is the image of `v`.
    pub fn with_sigma(mut self, sigma: Vec<Vertex>) -> Result<Self> {
        let n = self.rank;
        if sigma.len() != n {
            return Err(Error::InvalidDiagram(
                "automorphism has wrong length".into(),
            ));
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            if s == 0 || s > n || seen[s - 1] {
                return Err(Error::InvalidDiagram(
                    "automorphism is not a permutation".into(),
                ));
            }
            seen[s - 1] = true;
        }
        for a in 1..=n {
            for b in 1..=n {
                if self.adjacent(a, b) != self.adjacent(sigma[a - 1], sigma[b - 1]) {
                    return Err(Error::InvalidDiagram(format!(
                        "permutation does not preserve the edge {{{a},{b}}}"
                    )));
                }
            }
        }
        self.sigma = sigma;
        Ok(self)
    }

    /// The diagram with the automorphism of order `order` used for folding.
    /// For `D4` with order 3 this is `1 -> 3 -> 4 -> 1`.
    pub fn folded(kind: Kind, rank: usize, order: usize) -> Result<Self> {
        let d = Self::new(kind, rank)?;
        let bad =
            || Error::InvalidDiagram(format!("{kind:?}{rank} has no folding of order {order}"));
        let sigma: Vec<Vertex> = match (kind, order) {
            (_, 1) => return Ok(d),
            (Kind::A, 2) if rank % 2 == 1 && rank >= 3 => {
                (1..=rank).map(|i| rank + 1 - i).collect()
            }
            (Kind::D, 2) => {
                let mut s: Vec<Vertex> = (1..=rank).collect();
                s.swap(rank - 2, rank - 1);
                s
            }
            (Kind::E, 2) if rank == 6 => vec![5, 4, 3, 2, 1, 6],
            (Kind::D, 3) if rank == 4 => vec![3, 2, 4, 1],
            _ => return Err(bad()),
        };
        d.with_sigma(sigma)
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.rank
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v == 0 || v > self.rank {
            Err(Error::BadVertex(v))
        } else {
            Ok(())
        }
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.nbrs[v - 1]
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.nbrs[a - 1].binary_search(&b).is_ok()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::new();
        for a in self.vertices() {
            for &b in self.neighbors(a) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn sigma(&self, v: Vertex) -> Vertex {
        self.sigma[v - 1]
    }

    pub fn sigma_perm(&self) -> &[Vertex] {
        &self.sigma
    }

    pub fn sigma_pow(&self, v: Vertex, k: usize) -> Vertex {
        (0..k).fold(v, |x, _| self.sigma(x))
    }

    /// Order of the automorphism.
    pub fn sigma_order(&self) -> usize {
        let mut k = 1;
        while self.vertices().any(|v| self.sigma_pow(v, k) != v) {
            k += 1;
        }
        k
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for a in 1..=n {
            c[a - 1][a - 1] = 2;
            for &b in self.neighbors(a) {
                c[a - 1][b - 1] = -1;
            }
        }
        c
    }

    /// The folded type obtained from this diagram and its automorphism.
    pub fn folded_type(&self) -> Result<FoldedType> {
        let r = self.sigma_order();
        let n = self.rank;
        let (family, rank) = match (self.kind, r) {
            (Kind::A, 1) => (Family::A, n),
            (Kind::D, 1) => (Family::D, n),
            (Kind::E, 1) => (Family::E, n),
            (Kind::A, 2) => (Family::B, n.div_ceil(2)),
            (Kind::D, 2) => (Family::C, n - 1),
            (Kind::E, 2) => (Family::F, 4),
            (Kind::D, 3) => (Family::G, 2),
            _ => return Err(Error::InvalidDiagram(format!("{self} is not a folding"))),
        };
        Ok(FoldedType { family, rank })
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.rank)?;
        match self.sigma_order() {
            1 => Ok(()),
            3 if self.sigma(1) == 4 => write!(f, "^3'"),
            r => write!(f, "^{r}"),
        }
    }
}

impl FromStr for DynkinDiagram {
    type Err = Error;

    /// Parses `A3`, `D5`, `E6`, `A5^2`, `D5^2`, `E6^2`, `D4^3` and `D4^3'`
    /// (the latter selects the square of the order-3 automorphism).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised diagram '{s}'"));
        let s = s.trim();
        let (body, fold) = match s.split_once('^') {
            Some((b, f)) => (b, Some(f)),
            None => (s, None),
        };
        let mut chars = body.chars();
        let kind = match chars.next().ok_or_else(bad)? {
            'A' | 'a' => Kind::A,
            'D' | 'd' => Kind::D,
            'E' | 'e' => Kind::E,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        match fold {
            None => DynkinDiagram::new(kind, rank),
            Some("2") => DynkinDiagram::folded(kind, rank, 2),
            Some("3") => DynkinDiagram::folded(kind, rank, 3),
            Some("3'") if kind == Kind::D && rank == 4 => {
                DynkinDiagram::new(kind, rank)?.with_sigma(vec![4, 2, 1, 3])
            }
            Some(_) => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// A finite type, possibly non simply laced, realised by folding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoldedType {
    pub family: Family,
    pub rank: usize,
}

impl FoldedType {
    /// The unfolded diagram with its automorphism: `B_n = (A_{2n-1}, ∨)`,
    /// `C_n = (D_{n+1}, ∨)`, `F_4 = (E_6, ∨)`, `G_2 = (D_4, σ̃)`.
    pub fn diagram(&self) -> Result<DynkinDiagram> {
        let n = self.rank;
        match self.family {
            Family::A => DynkinDiagram::new(Kind::A, n),
            Family::D => DynkinDiagram::new(Kind::D, n),
            Family::E => DynkinDiagram::new(Kind::E, n),
            Family::B if n >= 2 => DynkinDiagram::folded(Kind::A, 2 * n - 1, 2),
            Family::C if n >= 3 => DynkinDiagram::folded(Kind::D, n + 1, 2),
            Family::F if n == 4 => DynkinDiagram::folded(Kind::E, 6, 2),
            Family::G if n == 2 => DynkinDiagram::folded(Kind::D, 4, 3),
            _ => Err(Error::InvalidDiagram(format!("{self}"))),
        }
    }

    /// Order of the automorphism.
    pub fn r(&self) -> i64 {
        match self.family {
            Family::B | Family::C | Family::F => 2,
            Family::G => 3,
            _ => 1,
        }
    }

    /// Dual Coxeter number.
    pub fn h_dual(&self) -> i64 {
        let n = self.rank as i64;
        match self.family {
            Family::A => n + 1,
            Family::D => 2 * n - 2,
            Family::E => match n {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Family::B => 2 * n - 1,
            Family::C => n + 1,
            Family::F => 9,
            Family::G => 4,
        }
    }

    /// Number of positive roots of the unfolded diagram.
    pub fn n_positive(&self) -> i64 {
        let n = self.rank as i64;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::B => n * (2 * n - 1),
            Family::C => n * (n + 1),
            Family::F => 36,
            Family::G => 12,
        }
    }
}

impl fmt::Display for FoldedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for FoldedType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised type '{s}'"));
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)?.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return Err(bad()),
        };
        let rank = chars.as_str().parse().map_err(|_| bad())?;
        let t = FoldedType { family, rank };
        t.diagram()?;
        Ok(t)
    }
}

/// An integral weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![0; n])
    }

    /// The fundamental weight `ϖ_v`.
    pub fn fundamental(n: usize, v: Vertex) -> Self {
        let mut w = vec![0; n];
        w[v - 1] = 1;
        Weight(w)
    }

    /// `(λ, α_v)`, a literal coordinate read.
    pub fn pair_simple(&self, v: Vertex) -> i64 {
        self.0[v - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Weight(self.0.iter().map(|x| x * k).collect())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// Result of evaluating the roots `β_k = s_{i_1}…s_{i_{k-1}}(α_{i_k})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaRoots {
    pub reduced: bool,
    pub roots: Vec<Weight>,
    /// 1-based position of the first non-positive `β_k`.
    pub first_failure: Option<usize>,
}

/// A diagram with its cached root data: Cartan matrix and inverse, a longest
/// element word, the involution `ι ↦ ι*` and the positive roots.
#[derive(Clone, Debug)]
pub struct RootSystem {
    diagram: DynkinDiagram,
    cartan: Vec<Vec<i64>>,
    // det(C) * C^{-1}, an integer matrix
    adj: Vec<Vec<i64>>,
    det: i64,
    w0: WeylWord,
    star: Vec<Vertex>,
    positive: Vec<Weight>,
    pos_index: HashMap<Weight, usize>,
}

impl RootSystem {
    pub fn new(diagram: DynkinDiagram) -> Self {
        let cartan = diagram.cartan();
        let (adj, det) = integer_inverse(&cartan);
        let mut rs = RootSystem {
            diagram,
            cartan,
            adj,
            det,
            w0: Vec::new(),
            star: Vec::new(),
            positive: Vec::new(),
            pos_index: HashMap::new(),
        };
        let n = rs.rank();
        // greedy: append the smallest letter that keeps the word reduced
        let mut w0 = Vec::new();
        loop {
            let next = (1..=n).find(|&v| rs.is_positive(&rs.apply_word(&w0, &rs.simple_root(v))));
            match next {
                Some(v) => w0.push(v),
                None => break,
            }
        }
        let star = (1..=n)
            .map(|v| {
                let img = -&rs.apply_word(&w0, &rs.simple_root(v));
                (1..=n)
                    .find(|&u| rs.simple_root(u) == img)
                    .expect("w0 maps simple roots to negative simple roots")
            })
            .collect();
        let positive = rs.beta_roots(&w0).roots;
        rs.pos_index = positive
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k))
            .collect();
        rs.positive = positive;
        rs.w0 = w0;
        rs.star = star;
        rs
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(RootSystem::new(s.parse()?))
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn rank(&self) -> usize {
        self.diagram.rank()
    }

    /// Number of positive roots, the length of the longest element.
    pub fn n_pos(&self) -> usize {
        self.positive.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_root(&self, v: Vertex) -> Weight {
        Weight(self.cartan.iter().map(|row| row[v - 1]).collect())
    }

    pub fn fundamental(&self, v: Vertex) -> Weight {
        Weight::fundamental(self.rank(), v)
    }

    /// Coordinates in the simple-root basis, if `λ` lies in the root lattice.
    pub fn root_coords(&self, l: &Weight) -> Option<Vec<i64>> {
        self.adj
            .iter()
            .map(|row| {
                let s: i64 = row.iter().zip(&l.0).map(|(a, b)| a * b).sum();
                (s % self.det == 0).then_some(s / self.det)
            })
            .collect()
    }

    pub fn from_root_coords(&self, c: &[i64]) -> Weight {
        Weight(
            self.cartan
                .iter()
                .map(|row| row.iter().zip(c).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// The symmetric form, normalised by `(ϖ_ι, α_ȷ) = δ_ιȷ`.
    pub fn form(&self, l: &Weight, m: &Weight) -> Ratio<i64> {
        let mut s = 0i64;
        for (i, row) in self.adj.iter().enumerate() {
            let t: i64 = row.iter().zip(&m.0).map(|(a, b)| a * b).sum();
            s += l.0[i] * t;
        }
        Ratio::new(s, self.det)
    }

    /// The form when at least one argument is in the root lattice.
    pub fn form_int(&self, l: &Weight, m: &Weight) -> i64 {
        let f = self.form(l, m);
        assert!(f.is_integer(), "form value {f} is not integral");
        f.to_integer()
    }

    pub fn reflect(&self, v: Vertex, l: &Weight) -> Weight {
        let c = l.0[v - 1];
        if c == 0 {
            return l.clone();
        }
        let mut out = l.0.clone();
        for (x, row) in out.iter_mut().zip(&self.cartan) {
            *x -= c * row[v - 1];
        }
        Weight(out)
    }

    /// `s_{i_1}(s_{i_2}(…s_{i_t}(λ)))`.
    pub fn apply_word(&self, w: &[Vertex], l: &Weight) -> Weight {
        w.iter()
            .rev()
            .fold(l.clone(), |acc, &v| self.reflect(v, &acc))
    }

    /// A root is positive iff all its simple-root coordinates are nonnegative.
    pub fn is_positive(&self, l: &Weight) -> bool {
        match self.root_coords(l) {
            Some(c) => c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x > 0),
            None => false,
        }
    }

    pub fn is_positive_root(&self, l: &Weight) -> bool {
        self.pos_index.contains_key(l)
    }

    pub fn is_root(&self, l: &Weight) -> bool {
        self.is_positive_root(l) || self.is_positive_root(&-l)
    }

    /// Position of a positive root in [`RootSystem::positive_roots`].
    pub fn positive_index(&self, l: &Weight) -> Option<usize> {
        self.pos_index.get(l).copied()
    }

    pub fn beta_roots(&self, w: &[Vertex]) -> BetaRoots {
        let mut roots = Vec::with_capacity(w.len());
        let mut first_failure = None;
        for k in 0..w.len() {
            let b = self.apply_word(&w[..k], &self.simple_root(w[k]));
            if first_failure.is_none() && !self.is_positive(&b) {
                first_failure = Some(k + 1);
            }
            roots.push(b);
        }
        BetaRoots {
            reduced: first_failure.is_none(),
            roots,
            first_failure,
        }
    }

    /// Length of the Weyl group element of `w`, counted as the number of
    /// positive roots sent to negative roots. Independent of `beta_roots`.
    pub fn inversion_count(&self, w: &[Vertex]) -> usize {
        self.positive
            .iter()
            .filter(|b| !self.is_positive(&self.apply_word(w, b)))
            .count()
    }

    /// The greedy smallest-letter reduced word for `w0`.
    pub fn longest_word(&self) -> &[Vertex] {
        &self.w0
    }

    pub fn star(&self, v: Vertex) -> Vertex {
        self.star[v - 1]
    }

    pub fn star_perm(&self) -> &[Vertex] {
        &self.star
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive
    }
}

fn integer_inverse(c: &[Vec<i64>]) -> (Vec<Vec<i64>>, i64) {
    let n = c.len();
    let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
        .map(|i| {
            let mut row: Vec<Ratio<i64>> = c[i].iter().map(|&x| Ratio::from_integer(x)).collect();
            row.extend((0..n).map(|j| Ratio::from_integer((i == j) as i64)));
            row
        })
        .collect();
    let mut det = Ratio::from_integer(1);
    for col in 0..n {
        let p = (col..n)
            .find(|&r| m[r][col] != Ratio::from_integer(0))
            .expect("Cartan matrix is invertible");
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let piv = m[col][col];
        det *= piv;
        for x in m[col].iter_mut() {
            *x /= piv;
        }
        for r in 0..n {
            if r != col && m[r][col] != Ratio::from_integer(0) {
                let f = m[r][col];
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    let det = det.to_integer();
    let adj = m
        .iter()
        .map(|row| row[n..].iter().map(|x| (x * det).to_integer()).collect())
        .collect();
    (adj, det)
}

/// An integer matrix acting on weights (column vectors in the
/// fundamental-weight basis). Composition `a.then(b)` is not provided on
/// purpose: `a.compose(b)` is always `a ∘ b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    n: usize,
    m: Vec<Vec<i64>>,
}

impl LatticeMap {
    pub fn identity(n: usize) -> Self {
        LatticeMap {
            n,
            m: (0..n)
                .map(|i| (0..n).map(|j| (i == j) as i64).collect())
                .collect(),
        }
    }

    pub fn reflection(rs: &RootSystem, v: Vertex) -> Self {
        let n = rs.rank();
        let a = rs.simple_root(v);
        let mut m = Self::identity(n);
        for r in 0..n {
            m.m[r][v - 1] -= a.0[r];
        }
        m
    }

    /// The automorphism acting by `ϖ_ι ↦ ϖ_{σ(ι)}`.
    pub fn sigma(d: &DynkinDiagram) -> Self {
        let n = d.rank();
        let mut m = vec![vec![0; n]; n];
        for i in 1..=n {
            m[d.sigma(i) - 1][i - 1] = 1;
        }
        LatticeMap { n, m }
    }

    /// `s_{w_1} ∘ … ∘ s_{w_t}`.
    pub fn word(rs: &RootSystem, w: &[Vertex]) -> Self {
        w.iter().fold(Self::identity(rs.rank()), |acc, &v| {
            acc.compose(&Self::reflection(rs, v))
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        let n = self.n;
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            for k in 0..n {
                let a = self.m[i][k];
                if a != 0 {
                    for j in 0..n {
                        m[i][j] += a * other.m[k][j];
                    }
                }
            }
        }
        LatticeMap { n, m }
    }

    pub fn apply(&self, l: &Weight) -> Weight {
        Weight(
            self.m
                .iter()
                .map(|row| row.iter().zip(&l.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn neg(&self) -> LatticeMap {
        LatticeMap {
            n: self.n,
            m: self
                .m
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Multiplicative order, searched up to `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return Some(k);
            }
            p = p.compose(self);
        }
        None
    }

    /// `self^k` for a nonnegative `k`.
    pub fn pow(&self, k: u64) -> LatticeMap {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cartan_a2() {
        let d: DynkinDiagram = "A2".parse().unwrap();
        assert_eq!(d.cartan(), vec![vec![2, -1], vec![-1, 2]]);
    }

    #[test]
    fn form_reads_coordinates() {
        let rs = RootSystem::parse("A3").unwrap();
        assert_eq!(
            rs.form(&rs.fundamental(1), &rs.simple_root(1)),
            Ratio::from_integer(1)
        );
        assert_eq!(
            rs.form(&rs.fundamental(1), &rs.simple_root(2)),
            Ratio::from_integer(0)
        );
        let rs = RootSystem::parse("A2").unwrap();
        assert_eq!(rs.form_int(&rs.simple_root(1), &rs.simple_root(2)), -1);
    }

    #[test]
    fn reflections_in_a2() {
        let rs = RootSystem::parse("A2").unwrap();
        let a1 = rs.simple_root(1);
        let a2 = rs.simple_root(2);
        assert_eq!(rs.reflect(1, &a1), -&a1);
        assert_eq!(rs.reflect(1, &a2), &a1 + &a2);
    }

    #[test]
    fn word_action_in_a5() {
        let rs = RootSystem::parse("A5").unwrap();
        let out = rs.apply_word(&[5, 4, 3, 2, 5], &rs.simple_root(3));
        assert_eq!(out, rs.simple_root(2));
    }

    #[test]
    fn longest_element_lengths() {
        for (s, n) in [
            ("A3", 6),
            ("D4", 12),
            ("A5", 15),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
        ] {
            let rs = RootSystem::parse(s).unwrap();
            assert_eq!(rs.longest_word().len(), n, "{s}");
            assert_eq!(rs.n_pos(), n);
        }
        let rs = RootSystem::parse("A3").unwrap();
        assert_eq!(rs.star_perm(), &[3, 2, 1]);
        assert_eq!(RootSystem::parse("A5").unwrap().star(3), 3);
    }

    #[test]
    fn star_in_d_and_e() {
        // D_n with n odd swaps the two branch leaves, E6 flips the long arms
        assert_eq!(
            RootSystem::parse("D5").unwrap().star_perm(),
            &[1, 2, 3, 5, 4]
        );
        assert_eq!(RootSystem::parse("D4").unwrap().star_perm(), &[1, 2, 3, 4]);
        assert_eq!(
            RootSystem::parse("E6").unwrap().star_perm(),
            &[5, 4, 3, 2, 1, 6]
        );
        assert_eq!(
            RootSystem::parse("E7").unwrap().star_perm(),
            &[1, 2, 3, 4, 5, 6, 7]
        );
    }

    #[test]
    fn not_reduced() {
        let rs = RootSystem::parse("A2").unwrap();
        let b = rs.beta_roots(&[1, 1]);
        assert!(!b.reduced);
        assert_eq!(b.first_failure, Some(2));
    }

    #[test]
    fn diagram_strings_round_trip() {
        for s in [
            "A1", "A3", "D5", "E6", "A5^2", "D5^2", "E6^2", "D4^3", "D4^3'",
        ] {
            let d: DynkinDiagram = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("A4^2".parse::<DynkinDiagram>().is_err());
        assert!("E9".parse::<DynkinDiagram>().is_err());
        assert!("D3".parse::<DynkinDiagram>().is_err());
    }

    #[test]
    fn folded_table() {
        for s in [
            "A3", "D5", "E6", "E7", "E8", "B2", "B3", "B4", "C3", "C4", "F4", "G2",
        ] {
            let t: FoldedType = s.parse().unwrap();
            let d = t.diagram().unwrap();
            let orbits = d
                .vertices()
                .filter(|&v| (0..d.sigma_order()).all(|k| d.sigma_pow(v, k) >= v))
                .count() as i64;
            assert_eq!(orbits * t.r() * t.h_dual(), 2 * t.n_positive(), "{s}");
            assert_eq!(d.folded_type().unwrap(), t);
            assert_eq!(RootSystem::new(d).n_pos() as i64, t.n_positive());
        }
    }

    #[test]
    fn sigma_lattice_map() {
        let d: DynkinDiagram = "A5^2".parse().unwrap();
        let s = LatticeMap::sigma(&d);
        assert_eq!(
            s.apply(&Weight::fundamental(5, 1)),
            Weight::fundamental(5, 5)
        );
        assert_eq!(s.order(10), Some(2));
    }
}
