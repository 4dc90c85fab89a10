//! Commutation classes of reduced words for the longest element, their
//! combinatorial AR quivers and the (windowed) repetition quivers.
//!
//! Indices of the doubly infinite word are `i64`. The positive roots of the
//! canonical representative sit at indices `1..=N`; index `s + tN` carries
//! the coordinate `((-1)^t β_s, -t)`. Arrows always go from a larger index
//! to a smaller one, so a higher index means a lower level.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{DynkinDiagram, RootSystem, Vertex, Weight};

/// A vertex of the repetition quiver: a root (either sign) and a level, with
/// `(-1)^level · root` positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coord {
    pub root: Weight,
    pub level: i64,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?},{})", self.root.0, self.level)
    }
}

/// The greedy lexicographic heap normal form: repeatedly emit the smallest
/// letter whose first occurrence commutes to the front.
pub fn heap_normal_form(d: &DynkinDiagram, w: &[Vertex]) -> Vec<Vertex> {
    let mut rest = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    while !rest.is_empty() {
        let mut best: Option<(Vertex, usize)> = None;
        for p in 0..rest.len() {
            let a = rest[p];
            if best.is_some_and(|(v, _)| a >= v) {
                continue;
            }
            if rest[..p].iter().all(|&b| b != a && !d.adjacent(a, b)) {
                best = Some((a, p));
            }
        }
        let (_, p) = best.expect("the first letter is always free");
        out.push(rest.remove(p));
    }
    out
}

/// A commutation class of reduced words for `w0`, stored through its
/// canonical representative.
#[derive(Clone, Debug)]
pub struct CommClass {
    rs: Arc<RootSystem>,
    canon: Vec<Vertex>,
    roots: Vec<Weight>,
    index_of_root: HashMap<Weight, usize>,
    // occ[v-1]: indices in 1..=2N carrying the letter v, ascending
    occ: Vec<Vec<i64>>,
}

impl PartialEq for CommClass {
    fn eq(&self, o: &Self) -> bool {
        self.rs.diagram() == o.rs.diagram() && self.canon == o.canon
    }
}

impl Eq for CommClass {}

impl std::hash::Hash for CommClass {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.canon.hash(h);
    }
}

impl CommClass {
    /// The class of `word`, which must be a reduced word for `w0`.
    pub fn new(rs: &Arc<RootSystem>, word: &[Vertex]) -> Result<Self> {
        for &v in word {
            rs.diagram().check_vertex(v)?;
        }
        let b = rs.beta_roots(word);
        if let Some(k) = b.first_failure {
            return Err(Error::NotReduced(k));
        }
        if word.len() != rs.n_pos() {
            return Err(Error::NotLongest {
                got: word.len(),
                expected: rs.n_pos(),
            });
        }
        let canon = heap_normal_form(rs.diagram(), word);
        let roots = rs.beta_roots(&canon).roots;
        let index_of_root = roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k + 1))
            .collect();
        let n = canon.len() as i64;
        let mut occ = vec![Vec::new(); rs.rank()];
        for k in 1..=2 * n {
            let s = ((k - 1) % n) as usize;
            let v = if k <= n { canon[s] } else { rs.star(canon[s]) };
            occ[v - 1].push(k);
        }
        Ok(CommClass {
            rs: rs.clone(),
            canon,
            roots,
            index_of_root,
            occ,
        })
    }

    /// The class of the deterministic longest word of the root system.
    pub fn standard(rs: &Arc<RootSystem>) -> Self {
        Self::new(rs, rs.longest_word()).expect("the longest word is reduced")
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        self.rs.diagram()
    }

    /// `N`, the number of positive roots.
    pub fn n(&self) -> i64 {
        self.canon.len() as i64
    }

    pub fn canon(&self) -> &[Vertex] {
        &self.canon
    }

    /// `β_1, …, β_N` of the canonical representative.
    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    fn split(&self, k: i64) -> (usize, i64) {
        let n = self.n();
        let s = (k - 1).rem_euclid(n) + 1;
        (s as usize, (k - s) / n)
    }

    /// The letter at index `k` of the infinite word (`i_{k+N} = i_k*`).
    pub fn letter(&self, k: i64) -> Vertex {
        let (s, t) = self.split(k);
        let v = self.canon[s - 1];
        if t.rem_euclid(2) == 0 {
            v
        } else {
            self.rs.star(v)
        }
    }

    /// The signed root at index `k`.
    pub fn root_at(&self, k: i64) -> Weight {
        let (s, t) = self.split(k);
        let b = &self.roots[s - 1];
        if t.rem_euclid(2) == 0 {
            b.clone()
        } else {
            -b
        }
    }

    pub fn coord(&self, k: i64) -> Coord {
        let (_, t) = self.split(k);
        Coord {
            root: self.root_at(k),
            level: -t,
        }
    }

    pub fn index_of(&self, x: &Coord) -> Result<i64> {
        let t = -x.level;
        let pos = if t.rem_euclid(2) == 0 {
            x.root.clone()
        } else {
            -&x.root
        };
        let s = *self.index_of_root.get(&pos).ok_or(Error::NotInRepetition)?;
        Ok(s as i64 + t * self.n())
    }

    /// Index in `1..=N` of a positive root.
    pub fn index_of_root(&self, a: &Weight) -> Option<i64> {
        self.index_of_root.get(a).map(|&k| k as i64)
    }

    /// The residue of a root; `res(-α) = res(α)*`.
    pub fn residue(&self, a: &Weight) -> Option<Vertex> {
        if let Some(&k) = self.index_of_root.get(a) {
            return Some(self.canon[k - 1]);
        }
        self.index_of_root
            .get(&-a)
            .map(|&k| self.rs.star(self.canon[k - 1]))
    }

    /// Index of the `m`-th occurrence of letter `v`, counted from the
    /// injective index of `v` (`m = 0`). Negative `m` counts backwards.
    pub fn occurrence(&self, v: Vertex, m: i64) -> i64 {
        let l = &self.occ[v - 1];
        let len = l.len() as i64;
        l[m.rem_euclid(len) as usize] + 2 * self.n() * m.div_euclid(len)
    }

    /// Inverse of [`CommClass::occurrence`] for the letter at index `k`.
    pub fn occurrence_number(&self, k: i64) -> i64 {
        let v = self.letter(k);
        let period = 2 * self.n();
        let q = (k - 1).div_euclid(period);
        let r = k - period * q;
        let l = &self.occ[v - 1];
        let pos = l.binary_search(&r).expect("letter occurs at its own index") as i64;
        pos + q * l.len() as i64
    }

    /// Largest index `< k` carrying letter `v`.
    pub fn occ_before(&self, v: Vertex, k: i64) -> i64 {
        let period = 2 * self.n();
        let q = (k - 1).div_euclid(period);
        let r = k - period * q;
        let l = &self.occ[v - 1];
        match l.iter().rev().find(|&&x| x < r) {
            Some(&x) => x + period * q,
            None => l[l.len() - 1] + period * (q - 1),
        }
    }

    /// Smallest index `> k` carrying letter `v`.
    pub fn occ_after(&self, v: Vertex, k: i64) -> i64 {
        let period = 2 * self.n();
        let q = (k - 1).div_euclid(period);
        let r = k - period * q;
        let l = &self.occ[v - 1];
        match l.iter().find(|&&x| x > r) {
            Some(&x) => x + period * q,
            None => l[0] + period * (q + 1),
        }
    }

    /// `k⁺`: the next index with the same letter.
    pub fn next_same(&self, k: i64) -> i64 {
        self.occ_after(self.letter(k), k)
    }

    pub fn prev_same(&self, k: i64) -> i64 {
        self.occ_before(self.letter(k), k)
    }

    /// Targets of the arrows leaving index `k` (all smaller than `k`).
    pub fn arrows_from(&self, k: i64) -> Vec<i64> {
        let v = self.letter(k);
        let floor = self.prev_same(k);
        let mut out: Vec<i64> = self
            .diagram()
            .neighbors(v)
            .iter()
            .map(|&u| self.occ_before(u, k))
            .filter(|&l| l > floor)
            .collect();
        out.sort_unstable();
        out
    }

    /// Sources of the arrows entering index `k` (all larger than `k`).
    pub fn arrows_into(&self, k: i64) -> Vec<i64> {
        let v = self.letter(k);
        let ceil = self.next_same(k);
        let mut out: Vec<i64> = self
            .diagram()
            .neighbors(v)
            .iter()
            .map(|&u| self.occ_after(u, k))
            .filter(|&m| m < ceil)
            .collect();
        out.sort_unstable();
        out
    }

    /// All arrows of the repetition quiver incident to `k`, as
    /// `(source, target)` pairs.
    pub fn rep_quiver_arrows(&self, k: i64) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = self.arrows_into(k).into_iter().map(|m| (m, k)).collect();
        out.extend(self.arrows_from(k).into_iter().map(|l| (k, l)));
        out
    }

    /// Arrows `(k, l)` of the repetition quiver with both ends in `[lo, hi]`.
    pub fn window_arrows(&self, lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for k in lo..=hi {
            for l in self.arrows_from(k) {
                if l >= lo {
                    out.push((k, l));
                }
            }
        }
        out
    }

    /// The combinatorial AR quiver on indices `1..=N`.
    pub fn ar_quiver(&self) -> Vec<(i64, i64)> {
        self.window_arrows(1, self.n())
    }

    /// Is there a (possibly trivial) path from index `a` to index `b`?
    pub fn reachable(&self, a: i64, b: i64) -> bool {
        if a < b {
            return false;
        }
        let mut seen = HashSet::from([a]);
        let mut queue = VecDeque::from([a]);
        while let Some(k) = queue.pop_front() {
            if k == b {
                return true;
            }
            for l in self.arrows_from(k) {
                if l >= b && seen.insert(l) {
                    queue.push_back(l);
                }
            }
        }
        false
    }

    /// `α ⪯ β`: there is a path from `β` to `α` in the AR quiver.
    pub fn leq(&self, a: &Weight, b: &Weight) -> Result<bool> {
        let ia = self.index_of_root(a).ok_or(Error::NotInRepetition)?;
        let ib = self.index_of_root(b).ok_or(Error::NotInRepetition)?;
        Ok(self.reachable(ib, ia))
    }

    /// Index of the injective vertex for `v`: the first occurrence of `v`.
    pub fn injective_index(&self, v: Vertex) -> i64 {
        self.occ[v - 1][0]
    }

    /// Index of the projective vertex for `v`: the last occurrence of `v*`
    /// in `1..=N`.
    pub fn projective_index(&self, v: Vertex) -> i64 {
        let s = self.rs.star(v);
        *self.occ[s - 1]
            .iter()
            .filter(|&&k| k <= self.n())
            .max()
            .expect("every letter occurs")
    }

    /// Some representative starts with `v`.
    pub fn is_source(&self, v: Vertex) -> bool {
        let p = self
            .canon
            .iter()
            .position(|&x| x == v)
            .expect("every letter occurs");
        self.canon[..p]
            .iter()
            .all(|&b| !self.diagram().adjacent(v, b))
    }

    /// Some representative ends with `v*`.
    pub fn is_sink(&self, v: Vertex) -> bool {
        let s = self.rs.star(v);
        let p = self
            .canon
            .iter()
            .rposition(|&x| x == s)
            .expect("every letter occurs");
        self.canon[p + 1..]
            .iter()
            .all(|&b| !self.diagram().adjacent(s, b))
    }

    /// `r_v[i]`: rotate a representative starting with `v` to
    /// `(j_2, …, j_N, v*)`.
    pub fn reflect(&self, v: Vertex) -> Result<CommClass> {
        if !self.is_source(v) {
            return Err(Error::NotSource(v));
        }
        let mut w = self.canon.clone();
        let p = w.iter().position(|&x| x == v).unwrap();
        w.remove(p);
        w.push(self.rs.star(v));
        CommClass::new(&self.rs, &w)
    }

    /// Inverse of [`CommClass::reflect`]; `v` must be a sink.
    pub fn reflect_inv(&self, v: Vertex) -> Result<CommClass> {
        if !self.is_sink(v) {
            return Err(Error::NotSink(v));
        }
        let s = self.rs.star(v);
        let mut w = self.canon.clone();
        let p = w.iter().rposition(|&x| x == s).unwrap();
        w.remove(p);
        w.insert(0, v);
        CommClass::new(&self.rs, &w)
    }

    /// The mesh ending at index `k`.
    pub fn mesh_at(&self, k: i64) -> Result<Mesh> {
        if self.rs.rank() == 1 {
            return Err(Error::RankOne);
        }
        let kp = self.next_same(k);
        let forward = self.reach_set(kp, k, true);
        let backward = self.reach_set(k, kp, false);
        let vertices: Vec<i64> = forward.intersection(&backward).copied().collect();
        let v = self.letter(k);
        let mut abutters: Vec<i64> = vertices
            .iter()
            .copied()
            .filter(|&m| self.diagram().adjacent(v, self.letter(m)))
            .collect();
        abutters.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Mesh {
            sink: k,
            source: kp,
            abutters,
            vertices,
        })
    }

    // indices reachable from `start` staying within [min(start,bound), max]
    fn reach_set(&self, start: i64, bound: i64, down: bool) -> BTreeSet<i64> {
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let next = if down {
                self.arrows_from(k)
            } else {
                self.arrows_into(k)
            };
            for l in next {
                let inside = if down { l >= bound } else { l <= bound };
                if inside && seen.insert(l) {
                    queue.push_back(l);
                }
            }
        }
        seen
    }

    /// `w[X]` through the compatible reading of `X` by ascending index (any
    /// path runs from a larger index to a smaller one).
    pub fn w_of_subset(&self, xs: &[i64]) -> Vec<Vertex> {
        let mut v = xs.to_vec();
        v.sort_unstable();
        v.dedup();
        v.into_iter().map(|k| self.letter(k)).collect()
    }

    /// `ρ_v(π(β̂_k))`: the `α_v`-coefficient of the signed root at `k`.
    pub fn frieze_value(&self, v: Vertex, k: i64) -> i64 {
        self.rs
            .root_coords(&self.root_at(k))
            .expect("roots lie in the root lattice")[v - 1]
    }

    /// The basis frieze `ρ_v ∘ π` on `len` indices starting at `start`.
    pub fn frieze_basis(&self, v: Vertex, start: i64, len: usize) -> Frieze {
        Frieze {
            start,
            values: (0..len as i64)
                .map(|j| self.frieze_value(v, start + j))
                .collect(),
        }
    }

    /// Checks `f(x) + f(s(x)) = Σ f(abutters)` at every mesh inside the
    /// window of `f`. The window must cover at least `2N` indices.
    pub fn is_additive_frieze(&self, f: &Frieze) -> Result<bool> {
        if self.rs.rank() == 1 {
            return Err(Error::RankOne);
        }
        let need = 2 * self.n() as usize;
        if f.values.len() < need {
            return Err(Error::WindowTooSmall {
                got: f.values.len(),
                need,
            });
        }
        let end = f.start + f.values.len() as i64;
        for k in f.start..end {
            if self.next_same(k) >= end {
                continue;
            }
            let m = self.mesh_at(k)?;
            let lhs = f.at(m.sink) + f.at(m.source);
            let rhs: i64 = m.abutters.iter().map(|&x| f.at(x)).sum();
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Vertices ordered by injective index, and the matrix
    /// `M[a][b] = ρ_{v_a}(π(I_{v_b}))`.
    pub fn injective_matrix(&self) -> (Vec<Vertex>, Vec<Vec<i64>>) {
        let mut vs: Vec<Vertex> = self.diagram().vertices().collect();
        vs.sort_by_key(|&v| self.injective_index(v));
        let m = vs
            .iter()
            .map(|&a| {
                vs.iter()
                    .map(|&b| self.frieze_value(a, self.injective_index(b)))
                    .collect()
            })
            .collect();
        (vs, m)
    }
}

/// A mesh of the repetition quiver, by indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mesh {
    /// `x`, the end of the mesh.
    pub sink: i64,
    /// `s(x)`, the start of the mesh.
    pub source: i64,
    /// Abutters in anti-compatible order (descending index).
    pub abutters: Vec<i64>,
    /// All vertices on paths from `source` to `sink`, ascending.
    pub vertices: Vec<i64>,
}

/// An integer function on a window of consecutive indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frieze {
    pub start: i64,
    pub values: Vec<i64>,
}

impl Frieze {
    pub fn at(&self, k: i64) -> i64 {
        self.values[(k - self.start) as usize]
    }
}

/// The reflection isomorphism of repetition quivers induced by a source `v`:
/// `(α, k) ↦ (s_v α, k)`, or level `k + 1` when `α = ±α_v`.
pub fn reflect_coord(rs: &RootSystem, v: Vertex, x: &Coord) -> Coord {
    let a = rs.simple_root(v);
    let level = if x.root == a || x.root == -&a {
        x.level + 1
    } else {
        x.level
    };
    Coord {
        root: rs.reflect(v, &x.root),
        level,
    }
}

/// A uniformly chosen reduced word extension at each step, run until the
/// longest element is reached.
pub fn random_longest_word<R: Rng + ?Sized>(rs: &RootSystem, rng: &mut R) -> Vec<Vertex> {
    let mut w = Vec::with_capacity(rs.n_pos());
    loop {
        let ok: Vec<Vertex> = rs
            .diagram()
            .vertices()
            .filter(|&v| rs.is_positive(&rs.apply_word(&w, &rs.simple_root(v))))
            .collect();
        if ok.is_empty() {
            return w;
        }
        w.push(ok[rng.gen_range(0..ok.len())]);
    }
}

/// Every representative of the class of `w`, by search over commutation
/// moves. `None` if there are more than `limit`.
pub fn enumerate_class(d: &DynkinDiagram, w: &[Vertex], limit: usize) -> Option<Vec<Vec<Vertex>>> {
    let mut seen: HashSet<Vec<Vertex>> = HashSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    let mut out = Vec::new();
    while let Some(x) = queue.pop_front() {
        for p in 0..x.len().saturating_sub(1) {
            let (a, b) = (x[p], x[p + 1]);
            if a != b && !d.adjacent(a, b) {
                let mut y = x.clone();
                y.swap(p, p + 1);
                if seen.insert(y.clone()) {
                    if seen.len() > limit {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        out.push(x);
    }
    out.sort();
    Some(out)
}

/// Every reduced word for `w0`, or `None` beyond `limit`.
pub fn all_longest_words(rs: &RootSystem, limit: usize) -> Option<Vec<Vec<Vertex>>> {
    fn go(rs: &RootSystem, w: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>, limit: usize) -> bool {
        let ok: Vec<Vertex> = rs
            .diagram()
            .vertices()
            .filter(|&v| rs.is_positive(&rs.apply_word(w, &rs.simple_root(v))))
            .collect();
        if ok.is_empty() {
            out.push(w.clone());
            return out.len() <= limit;
        }
        for v in ok {
            w.push(v);
            let cont = go(rs, w, out, limit);
            w.pop();
            if !cont {
                return false;
            }
        }
        true
    }
    let mut out = Vec::new();
    go(rs, &mut Vec::new(), &mut out, limit).then_some(out)
}

/// All commutation classes of `w0`, via the full word list.
pub fn all_classes(rs: &Arc<RootSystem>, limit: usize) -> Option<Vec<CommClass>> {
    let words = all_longest_words(rs, limit)?;
    let mut canons: Vec<Vec<Vertex>> = words
        .iter()
        .map(|w| heap_normal_form(rs.diagram(), w))
        .collect();
    canons.sort();
    canons.dedup();
    Some(
        canons
            .iter()
            .map(|w| CommClass::new(rs, w).expect("reduced"))
            .collect(),
    )
}
