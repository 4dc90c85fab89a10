//! The repetition category and the c-derived category of a commutation
//! class, computed through coordinates and layer modules.
//!
//! Objects are identified with indices of the infinite word (see
//! [`CommClass`]). A module for the object at index `a` is materialized in
//! the window `(i_{m+1}, …, i_{m+N})` for any `m` with `a − m ∈ 1..=N`; the
//! shifted word is again a reduced word for `w0`. Morphisms in the
//! c-derived category are computed in a window containing both ends.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use serde::Serialize;

use crate::commclass::{CommClass, Coord};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::preproj::{hom_basis, hom_dim, hom_to_simple, Orientation, QuiverRep};
use crate::qdatum::{FoldedVertex, HatVertex, QDatum};
use crate::rootsys::{Vertex, Weight};

/// An indecomposable object of the repetition category.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndObject {
    pub index: i64,
    pub coord: Coord,
}

/// The terms of the Euler form `⟨M, N⟩ = Σ (−1)^k dim Ext^k(M, N)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerValue {
    /// `dim Ext^0 = dim Hom`.
    pub hom: usize,
    /// Nonzero `(k, dim Ext^k)` for `k ≠ 0`.
    pub ext: Vec<(i64, usize)>,
    pub euler: i64,
}

/// The category attached to a commutation class, with a shared module
/// cache.
#[derive(Debug)]
pub struct Category {
    cls: CommClass,
    orient: Orientation,
    // (m mod 2N, local position) -> layer module of the window at m
    cache: RwLock<HashMap<(i64, usize), Arc<QuiverRep>>>,
}

impl Clone for Category {
    fn clone(&self) -> Self {
        Category::new(self.cls.clone())
    }
}

impl Category {
    pub fn new(cls: CommClass) -> Self {
        let orient = Orientation::base(cls.diagram());
        Category {
            cls,
            orient,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn class(&self) -> &CommClass {
        &self.cls
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orient
    }

    pub fn n(&self) -> i64 {
        self.cls.n()
    }

    pub fn object(&self, index: i64) -> IndObject {
        IndObject {
            index,
            coord: self.cls.coord(index),
        }
    }

    pub fn object_at(&self, x: &Coord) -> Result<IndObject> {
        Ok(self.object(self.cls.index_of(x)?))
    }

    /// Objects of `C([i])`, by index `1..=N`.
    pub fn level_zero(&self) -> Vec<IndObject> {
        (1..=self.n()).map(|k| self.object(k)).collect()
    }

    /// The word `(i_{m+1}, …, i_{m+N})`.
    pub fn window_word(&self, m: i64) -> Vec<Vertex> {
        (m + 1..=m + self.n()).map(|k| self.cls.letter(k)).collect()
    }

    /// The `k`-th layer module (1-based) of the window at `m`.
    pub fn layer_module(&self, m: i64, k: usize) -> Result<Arc<QuiverRep>> {
        let n = self.n();
        if k == 0 || k as i64 > n {
            return Err(Error::Precondition(format!(
                "local position {k} outside 1..={n}"
            )));
        }
        let key = (m.rem_euclid(2 * n), k);
        if let Some(r) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        let d = self.cls.diagram();
        let rep = if k == 1 {
            QuiverRep::simple(d, self.cls.letter(m + 1))
        } else {
            self.layer_module(m + 1, k - 1)?
                .reflect(&self.orient, self.cls.letter(m + 1))?
        };
        let rep = Arc::new(rep);
        self.cache
            .write()
            .expect("cache lock")
            .entry(key)
            .or_insert_with(|| rep.clone());
        Ok(rep)
    }

    /// The module of the object at `index`, materialized in the window of
    /// its own level, so that level-0 objects are the layer modules of the
    /// canonical word.
    pub fn module(&self, index: i64) -> Result<Arc<QuiverRep>> {
        let n = self.n();
        let m = n * (index - 1).div_euclid(n);
        self.layer_module(m, (index - m) as usize)
    }

    /// `dim Hom_D(M_a, M_b)`. Nonzero only if `0 ≤ a − b ≤ N − 1`; then it
    /// is computed in the window starting at `b`, where `M_b` is simple.
    pub fn hom(&self, a: i64, b: i64) -> usize {
        let delta = a - b;
        if !(0..self.n()).contains(&delta) {
            return 0;
        }
        let m = self
            .layer_module(b - 1, delta as usize + 1)
            .expect("local position in range");
        hom_to_simple(self.cls.diagram(), &m, self.cls.letter(b))
    }

    /// [`Category::hom`] by a full intertwiner computation between both
    /// materialized modules, in the window at `b − 1 − shift`.
    pub fn hom_full(&self, a: i64, b: i64, shift: i64) -> usize {
        let delta = a - b;
        if !(0..self.n()).contains(&delta) {
            return 0;
        }
        let m = b - 1 - shift;
        if a - m > self.n() || shift < 0 {
            return 0;
        }
        let ma = self.layer_module(m, (a - m) as usize).expect("in window");
        let mb = self.layer_module(m, (b - m) as usize).expect("in window");
        hom_dim(self.cls.diagram(), &ma, &mb)
    }

    /// `dim Ext^k(M_a, M_b) = dim Hom_D(M_a, Σ^k M_b)`. The suspension
    /// raises the level by one, which lowers the index by `N`.
    pub fn ext(&self, a: i64, b: i64, k: i64) -> usize {
        self.hom(a, b - k * self.n())
    }

    /// The Euler form. Exactly one `k` has `a − b + kN ∈ [0, N−1]`, so at
    /// most one term is nonzero.
    pub fn euler(&self, a: i64, b: i64) -> EulerValue {
        let n = self.n();
        let delta = (a - b).rem_euclid(n);
        let k = (delta - (a - b)) / n;
        let dim = self.ext(a, b, k);
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let (hom, ext) = if k == 0 {
            (dim, vec![])
        } else {
            (0, if dim > 0 { vec![(k, dim)] } else { vec![] })
        };
        EulerValue {
            hom,
            ext,
            euler: sign * dim as i64,
        }
    }

    /// The signed class `(−1)^level · root` is just the root of the
    /// coordinate, since coordinates already carry the sign.
    pub fn class_of(&self, a: i64) -> Weight {
        self.cls.root_at(a)
    }

    /// Symmetrized Euler form against the root-lattice form.
    pub fn symmetrization_holds(&self, a: i64, b: i64) -> bool {
        let lhs = self.euler(a, b).euler + self.euler(b, a).euler;
        lhs == self
            .cls
            .root_system()
            .form_int(&self.class_of(a), &self.class_of(b))
    }

    fn check_level_zero(&self, a: i64) -> Result<()> {
        if (1..=self.n()).contains(&a) {
            Ok(())
        } else {
            Err(Error::NotDegreeZero)
        }
    }

    /// Projectivity by coordinates (last occurrence of the letter in
    /// `1..=N`) and by the vanishing of `Ext^1(M, −)` on `C([i])`. The two
    /// tests must agree.
    pub fn is_projective(&self, a: i64) -> Result<bool> {
        self.check_level_zero(a)?;
        let by_coord = self.cls.next_same(a) > self.n();
        let by_ext = (1..=self.n()).all(|x| self.ext(a, x, 1) == 0);
        if by_coord != by_ext {
            return Err(Error::Inconsistent(format!("projectivity of index {a}")));
        }
        Ok(by_coord)
    }

    /// Injectivity by coordinates (first occurrence) and by the vanishing
    /// of `Ext^1(−, M)` on `C([i])`.
    pub fn is_injective(&self, a: i64) -> Result<bool> {
        self.check_level_zero(a)?;
        let by_coord = self.cls.prev_same(a) < 1;
        let by_ext = (1..=self.n()).all(|x| self.ext(x, a, 1) == 0);
        if by_coord != by_ext {
            return Err(Error::Inconsistent(format!("injectivity of index {a}")));
        }
        Ok(by_coord)
    }

    /// Arrow multiplicities `dim rad/rad²` between the objects of `C([i])`.
    pub fn gabriel_quiver(&self) -> Result<GabrielQuiver> {
        let n = self.n();
        let d = self.cls.diagram();
        let mods: Vec<Arc<QuiverRep>> = (1..=n).map(|k| self.module(k)).collect::<Result<_>>()?;
        let mut basis = BTreeMap::new();
        for a in 1..=n {
            if hom_dim(d, &mods[a as usize - 1], &mods[a as usize - 1]) != 1 {
                return Err(Error::Inconsistent(format!(
                    "layer module {a} is not a brick"
                )));
            }
            for b in 1..a {
                let hb = hom_basis(d, &mods[a as usize - 1], &mods[b as usize - 1]);
                if !hb.is_empty() {
                    basis.insert((a, b), hb);
                }
            }
        }
        let mut arrows = Vec::new();
        for (&(a, b), hab) in &basis {
            let mut rows = Vec::new();
            for c in b + 1..a {
                let (Some(f), Some(g)) = (basis.get(&(a, c)), basis.get(&(c, b))) else {
                    continue;
                };
                for fi in f {
                    for gi in g {
                        rows.push(gi.after(fi).flatten());
                    }
                }
            }
            let cols = hab[0].flatten().len();
            let rad2 = if rows.is_empty() {
                0
            } else {
                Matrix::from_rows(rows, cols).rank()
            };
            if hab.len() > rad2 {
                arrows.push((a, b, hab.len() - rad2));
            }
        }
        Ok(GabrielQuiver::new(arrows))
    }

    /// Checks the triangles attached to the mesh ending at index `x`.
    pub fn verify_mesh_triangles(&self, x: i64) -> Result<MeshReport> {
        let mesh = self.cls.mesh_at(x)?;
        let rs = self.cls.root_system();
        let mut y = self.class_of(mesh.source);
        let mut ys = vec![Some(mesh.source)];
        let mut witnesses = true;
        for (step, &xk) in mesh.abutters.iter().enumerate() {
            let yk = ys[step];
            if let Some(yk) = yk {
                witnesses &= self.hom(yk, xk) >= 1;
            }
            y = &y - &self.class_of(xk);
            let next = (x + 1..=x + self.n()).find(|&k| self.class_of(k) == y);
            if let (Some(a), Some(b)) = (next, yk) {
                witnesses &= self.hom(a, b) >= 1;
            }
            ys.push(next);
        }
        let lhs = &self.class_of(mesh.sink) + &self.class_of(mesh.source);
        let rhs = mesh
            .abutters
            .iter()
            .fold(Weight::zero(rs.rank()), |s, &k| &s + &self.class_of(k));
        let telescopes = y == -&self.class_of(x) && ys.last() == Some(&Some(x + self.n()));
        Ok(MeshReport {
            sink: mesh.sink,
            source: mesh.source,
            abutters: mesh.abutters,
            ys,
            additive: lhs == rhs,
            telescopes,
            witnesses,
        })
    }
}

/// The Gabriel quiver of `C([i])` with arrows `(a, b, multiplicity)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GabrielQuiver {
    pub arrows: Vec<(i64, i64, usize)>,
}

impl GabrielQuiver {
    fn new(mut arrows: Vec<(i64, i64, usize)>) -> Self {
        arrows.sort_unstable();
        GabrielQuiver { arrows }
    }

    /// Arrows that are not parallel to a path of length at least two.
    pub fn without_superfluous(&self) -> Vec<(i64, i64)> {
        let mut succ: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for &(a, b, _) in &self.arrows {
            succ.entry(a).or_default().push(b);
        }
        let long_path = |a: i64, b: i64| {
            // targets reachable from a in at least two steps
            let mut seen = BTreeSet::new();
            let mut stack: Vec<i64> = succ
                .get(&a)
                .into_iter()
                .flatten()
                .flat_map(|m| succ.get(m).into_iter().flatten())
                .copied()
                .collect();
            while let Some(k) = stack.pop() {
                if seen.insert(k) {
                    stack.extend(succ.get(&k).into_iter().flatten().copied());
                }
            }
            seen.contains(&b)
        };
        let mut out: Vec<(i64, i64)> = self
            .arrows
            .iter()
            .filter(|&&(a, b, _)| !long_path(a, b))
            .map(|&(a, b, _)| (a, b))
            .collect();
        out.sort_unstable();
        out
    }
}

/// Outcome of [`Category::verify_mesh_triangles`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeshReport {
    pub sink: i64,
    pub source: i64,
    pub abutters: Vec<i64>,
    /// Indices of `Y_1, …, Y_{t+1}` in `[x+1, x+N]`, when their class is a
    /// root found there.
    pub ys: Vec<Option<i64>>,
    /// `π(x) + π(s(x)) = Σ π(abutters)`.
    pub additive: bool,
    /// `[Y_{t+1}] = −[x]`, located at `x + N`.
    pub telescopes: bool,
    /// Nonzero Hom for each located `Y_k → X_k` and `Y_{k+1} → Y_k`.
    pub witnesses: bool,
}

impl MeshReport {
    pub fn ok(&self) -> bool {
        self.additive && self.telescopes && self.witnesses
    }
}

/// The c-derived category of a Q-datum, addressed by vertices of the
/// twisted repetition quiver.
#[derive(Clone, Debug)]
pub struct QCategory {
    q: QDatum,
    cat: Category,
}

impl QCategory {
    pub fn new(q: QDatum) -> Self {
        let cat = Category::new(q.class().clone());
        QCategory { q, cat }
    }

    pub fn qdatum(&self) -> &QDatum {
        &self.q
    }

    pub fn category(&self) -> &Category {
        &self.cat
    }

    pub fn index(&self, x: HatVertex) -> Result<i64> {
        self.q.index_of(x)
    }

    /// `H_Q(i, p)`.
    pub fn h(&self, y: FoldedVertex) -> Result<HatVertex> {
        self.q.unfold(y).ok_or(Error::Parity(y.orbit, y.p))
    }

    pub fn hom(&self, x: HatVertex, y: HatVertex) -> Result<usize> {
        Ok(self.cat.hom(self.index(x)?, self.index(y)?))
    }

    pub fn euler(&self, x: HatVertex, y: HatVertex) -> Result<i64> {
        Ok(self.cat.euler(self.index(x)?, self.index(y)?).euler)
    }

    /// `τ_Q` on objects.
    pub fn tau_obj(&self, x: HatVertex) -> Result<HatVertex> {
        self.q.check_hat(x)?;
        Ok(self.q.tau_vertex(x))
    }

    /// `S_Q = Σ ∘ τ_Q^r` on objects.
    pub fn serre(&self, x: HatVertex) -> Result<HatVertex> {
        self.q.check_hat(x)?;
        Ok(self.q.serre_vertex(x))
    }

    /// `(dim Hom(M, N), dim Hom(N, S_Q M))` for `M` of full orbit.
    pub fn serre_duality(&self, m: HatVertex, n: HatVertex) -> Result<(usize, usize)> {
        if self.q.d(m.v) != self.q.r() {
            return Err(Error::Precondition(format!(
                "residue {} of M does not have a full orbit",
                m.v
            )));
        }
        Ok((self.hom(m, n)?, self.hom(n, self.serre(m)?)?))
    }

    /// `(dim Hom(M, N), dim Hom(N, S'_Q M))` for type B with both residues
    /// of trivial orbit.
    pub fn serre_prime_duality(&self, m: HatVertex, n: HatVertex) -> Result<(usize, usize)> {
        if self.q.folded_type().family != crate::rootsys::Family::B
            || self.q.d(m.v) != 1
            || self.q.d(n.v) != 1
        {
            return Err(Error::Precondition(
                "S'_Q duality needs type B and residues with d = 1".into(),
            ));
        }
        self.q.check_hat(m)?;
        Ok((self.hom(m, n)?, self.hom(n, self.q.serre_prime_vertex(m))?))
    }

    /// Objects of `C(Q)` as vertices of `Γ_Q`, in compatible order.
    pub fn gamma_objects(&self) -> Vec<HatVertex> {
        self.q.gamma_vertices()
    }

    /// All vertices of the twisted repetition quiver whose index lies in
    /// `[lo, hi]`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<HatVertex> {
        (lo..=hi).map(|k| self.q.vertex_of_index(k)).collect()
    }
}
