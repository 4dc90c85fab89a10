//! Q-data `(Δ, σ, ξ)`: validation, sources and sinks, the twisted
//! repetition quiver, twisted AR quivers, the generalized twisted Coxeter
//! element and the maps `φ` and `ψ`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::commclass::{CommClass, Coord};
use crate::error::{Error, Result};
use crate::rootsys::{
    DynkinDiagram, Family, FoldedType, Kind, LatticeMap, RootSystem, Vertex, Weight,
};

/// A vertex `(ι, p)` of the twisted repetition quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HatVertex {
    pub v: Vertex,
    pub p: i64,
}

impl HatVertex {
    pub fn new(v: Vertex, p: i64) -> Self {
        HatVertex { v, p }
    }
}

impl fmt::Display for HatVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.v, self.p)
    }
}

/// A vertex `(i, p)` of `Î`, where `i` is a σ-orbit named by its smallest
/// member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FoldedVertex {
    pub orbit: Vertex,
    pub p: i64,
}

/// Orbit bookkeeping for a diagram with automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitData {
    /// Orbits sorted by their smallest member; each orbit sorted.
    pub orbits: Vec<Vec<Vertex>>,
    /// `d` per vertex (the size of its orbit).
    pub d: Vec<i64>,
    pub r: i64,
    pub h_dual: i64,
    /// Weighted distance `d^σ`, edges weighted by `min(d_a, d_b)`.
    pub distance: Vec<Vec<i64>>,
    pub folded: FoldedType,
}

impl OrbitData {
    pub fn new(d: &DynkinDiagram) -> Result<Self> {
        let folded = d.folded_type()?;
        let n = d.rank();
        let mut seen = vec![false; n + 1];
        let mut orbits = Vec::new();
        for v in d.vertices() {
            if !seen[v] {
                let mut o = vec![v];
                seen[v] = true;
                let mut x = d.sigma(v);
                while x != v {
                    seen[x] = true;
                    o.push(x);
                    x = d.sigma(x);
                }
                o.sort_unstable();
                orbits.push(o);
            }
        }
        let mut dv = vec![0i64; n];
        for o in &orbits {
            for &v in o {
                dv[v - 1] = o.len() as i64;
            }
        }
        let distance = weighted_distances(d, &dv);
        Ok(OrbitData {
            orbits,
            d: dv,
            r: folded.r(),
            h_dual: folded.h_dual(),
            distance,
            folded,
        })
    }

    pub fn orbit_of(&self, v: Vertex) -> Vertex {
        self.orbits
            .iter()
            .find(|o| o.contains(&v))
            .expect("every vertex lies in an orbit")[0]
    }

    pub fn orbit_members(&self, orbit: Vertex) -> &[Vertex] {
        self.orbits
            .iter()
            .find(|o| o[0] == orbit)
            .map(|o| o.as_slice())
            .unwrap_or(&[])
    }

    pub fn d_of(&self, v: Vertex) -> i64 {
        self.d[v - 1]
    }

    pub fn n_orbits(&self) -> usize {
        self.orbits.len()
    }
}

fn weighted_distances(d: &DynkinDiagram, dv: &[i64]) -> Vec<Vec<i64>> {
    let n = d.rank();
    let inf = i64::MAX / 4;
    let mut m = vec![vec![inf; n]; n];
    for v in 0..n {
        m[v][v] = 0;
    }
    for (a, b) in d.edges() {
        let w = dv[a - 1].min(dv[b - 1]);
        m[a - 1][b - 1] = w;
        m[b - 1][a - 1] = w;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if m[i][k] + m[k][j] < m[i][j] {
                    m[i][j] = m[i][k] + m[k][j];
                }
            }
        }
    }
    m
}

/// Outcome of checking the local conditions on a height function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub ok: bool,
    pub failures: Vec<String>,
}

/// Checks the two local conditions of a height function.
pub fn validate(d: &DynkinDiagram, xi: &[i64]) -> Result<Validation> {
    if xi.len() != d.rank() {
        return Err(Error::InvalidHeight(format!(
            "expected {} values, got {}",
            d.rank(),
            xi.len()
        )));
    }
    let od = OrbitData::new(d)?;
    let x = |v: Vertex| xi[v - 1];
    let mut failures = Vec::new();
    for (a, b) in d.edges() {
        let (da, db) = (od.d_of(a), od.d_of(b));
        if da == db && (x(a) - x(b)).abs() != da {
            failures.push(format!(
                "condition (1) fails at vertices {a},{b}: |ξ_{a}-ξ_{b}| = {} but must be {da}",
                (x(a) - x(b)).abs()
            ));
        }
    }
    let r = od.r;
    for o in &od.orbits {
        if o.len() != 1 || r == 1 {
            continue;
        }
        let i = o[0];
        for other in &od.orbits {
            if other.len() as i64 != r || !other.iter().any(|&j| d.adjacent(i, j)) {
                continue;
            }
            let good = other
                .iter()
                .filter(|&&j| {
                    (x(i) - x(j)).abs() == 1
                        && (1..r as usize).all(|k| x(d.sigma_pow(j, k)) == x(j) - 2 * k as i64)
                })
                .count();
            if good != 1 {
                failures.push(format!(
                    "condition (2) fails at vertex {i} and orbit {other:?}: {good} members satisfy it, exactly one is required"
                ));
            }
        }
    }
    Ok(Validation {
        ok: failures.is_empty(),
        failures,
    })
}

/// The Q-datum file format: `{"diagram":"A5^2","xi":{"1":2,...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDatumFile {
    pub diagram: String,
    pub xi: BTreeMap<String, i64>,
}

/// A validated Q-datum with its cached twisted Coxeter element and class.
#[derive(Clone, Debug)]
pub struct QDatum {
    rs: Arc<RootSystem>,
    xi: Vec<i64>,
    od: Arc<OrbitData>,
    // τ^0, …, τ^{rh-1}
    tau_pows: Vec<LatticeMap>,
    class: CommClass,
}

impl PartialEq for QDatum {
    fn eq(&self, o: &Self) -> bool {
        self.rs.diagram() == o.rs.diagram() && self.xi == o.xi
    }
}

impl Eq for QDatum {}

impl QDatum {
    pub fn new(rs: &Arc<RootSystem>, xi: Vec<i64>) -> Result<Self> {
        let v = validate(rs.diagram(), &xi)?;
        if !v.ok {
            return Err(Error::InvalidHeight(v.failures.join("; ")));
        }
        let od = Arc::new(OrbitData::new(rs.diagram())?);
        Self::build(rs.clone(), xi, od)
    }

    pub fn from_diagram(d: DynkinDiagram, xi: Vec<i64>) -> Result<Self> {
        Self::new(&Arc::new(RootSystem::new(d)), xi)
    }

    fn build(rs: Arc<RootSystem>, xi: Vec<i64>, od: Arc<OrbitData>) -> Result<Self> {
        let word = source_word(&rs, &od, &xi);
        let class = CommClass::new(&rs, &word)?;
        let mut q = QDatum {
            rs,
            xi,
            od,
            tau_pows: Vec::new(),
            class,
        };
        let tau = q.compute_tau();
        let period = (q.od.r * q.od.h_dual) as usize;
        let mut pows = Vec::with_capacity(period);
        let mut p = LatticeMap::identity(q.rs.rank());
        for _ in 0..period {
            pows.push(p.clone());
            p = p.compose(&tau);
        }
        if !p.is_identity() {
            return Err(Error::Inconsistent(format!(
                "τ does not have order dividing {period}"
            )));
        }
        q.tau_pows = pows;
        Ok(q)
    }

    /// Parses the JSON file format.
    pub fn from_json(s: &str) -> Result<Self> {
        let f: QDatumFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let d: DynkinDiagram = f.diagram.parse()?;
        let mut xi = vec![None; d.rank()];
        for (k, &val) in &f.xi {
            let v: Vertex = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex key '{k}'")))?;
            d.check_vertex(v)?;
            xi[v - 1] = Some(val);
        }
        let xi: Vec<i64> = xi
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                x.ok_or_else(|| Error::Parse(format!("missing height for vertex {}", i + 1)))
            })
            .collect::<Result<_>>()?;
        Self::from_diagram(d, xi)
    }

    pub fn to_file(&self) -> QDatumFile {
        QDatumFile {
            diagram: self.rs.diagram().to_string(),
            xi: self
                .xi
                .iter()
                .enumerate()
                .map(|(i, &x)| ((i + 1).to_string(), x))
                .collect(),
        }
    }

    /// A fixed Q-datum for each folded type.
    pub fn standard(ty: FoldedType) -> Result<Self> {
        Self::standard_for(ty.diagram()?)
    }

    /// A fixed Q-datum on the given diagram with automorphism.
    pub fn standard_for(d: DynkinDiagram) -> Result<Self> {
        let od = OrbitData::new(&d)?;
        let n = d.rank();
        let xi: Vec<i64> = match (d.kind(), od.r) {
            (_, 1) => (1..=n).map(|v| -od.distance[v - 1][0]).collect(),
            (Kind::A, 2) => {
                let m = n.div_ceil(2);
                (1..=n)
                    .map(|v| -od.distance[v - 1][m - 1] - if v > m { 2 } else { 0 })
                    .collect()
            }
            (Kind::D, 2) => (1..=n)
                .map(|k| if k < n { k as i64 } else { n as i64 - 3 })
                .collect(),
            (Kind::E, 2) => vec![-3, -1, 0, -3, -5, 1],
            (Kind::D, 3) => {
                // chain σ(1), σ²(1) below the vertex 1 next to the fixed one
                let mut xi = vec![0i64; 4];
                xi[0] = -1;
                xi[d.sigma(1) - 1] = -3;
                xi[d.sigma_pow(1, 2) - 1] = -5;
                xi
            }
            _ => return Err(Error::InvalidDiagram(d.to_string())),
        };
        Self::from_diagram(d, xi)
    }

    pub fn root_system(&self) -> &Arc<RootSystem> {
        &self.rs
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        self.rs.diagram()
    }

    pub fn xi(&self) -> &[i64] {
        &self.xi
    }

    pub fn xi_of(&self, v: Vertex) -> i64 {
        self.xi[v - 1]
    }

    pub fn orbit_data(&self) -> &OrbitData {
        &self.od
    }

    pub fn d(&self, v: Vertex) -> i64 {
        self.od.d_of(v)
    }

    pub fn r(&self) -> i64 {
        self.od.r
    }

    pub fn h_dual(&self) -> i64 {
        self.od.h_dual
    }

    /// `r·h^∨`, the order of `τ`.
    pub fn rh(&self) -> i64 {
        self.od.r * self.od.h_dual
    }

    /// The class `[Q]` of source sequences.
    pub fn class(&self) -> &CommClass {
        &self.class
    }

    pub fn star(&self, v: Vertex) -> Vertex {
        self.rs.star(v)
    }

    pub fn is_source(&self, v: Vertex) -> bool {
        self.diagram()
            .neighbors(v)
            .iter()
            .all(|&j| self.xi_of(v) > self.xi_of(j))
    }

    pub fn is_sink(&self, v: Vertex) -> bool {
        self.diagram()
            .neighbors(v)
            .iter()
            .all(|&j| self.xi_of(v) + 2 * self.d(v) < self.xi_of(j) + 2 * self.d(j))
    }

    pub fn sources(&self) -> Vec<Vertex> {
        self.diagram()
            .vertices()
            .filter(|&v| self.is_source(v))
            .collect()
    }

    pub fn sinks(&self) -> Vec<Vertex> {
        self.diagram()
            .vertices()
            .filter(|&v| self.is_sink(v))
            .collect()
    }

    /// `s_ι Q`; `ι` must be a source.
    pub fn reflect(&self, v: Vertex) -> Result<QDatum> {
        self.diagram().check_vertex(v)?;
        if !self.is_source(v) {
            return Err(Error::NotSource(v));
        }
        let mut xi = self.xi.clone();
        xi[v - 1] -= 2 * self.d(v);
        Self::build(self.rs.clone(), xi, self.od.clone())
    }

    /// `s_ι⁻¹ Q`; `ι` must be a sink.
    pub fn reflect_inv(&self, v: Vertex) -> Result<QDatum> {
        self.diagram().check_vertex(v)?;
        if !self.is_sink(v) {
            return Err(Error::NotSink(v));
        }
        let mut xi = self.xi.clone();
        xi[v - 1] += 2 * self.d(v);
        Self::build(self.rs.clone(), xi, self.od.clone())
    }

    /// Does `(ι, p)` satisfy the parity condition?
    pub fn in_hat(&self, x: HatVertex) -> bool {
        x.v >= 1
            && x.v <= self.rs.rank()
            && (x.p - self.xi_of(x.v)).rem_euclid(2 * self.d(x.v)) == 0
    }

    pub fn check_hat(&self, x: HatVertex) -> Result<()> {
        self.diagram().check_vertex(x.v)?;
        if self.in_hat(x) {
            Ok(())
        } else {
            Err(Error::Parity(x.v, x.p))
        }
    }

    /// Targets of the arrows of the twisted repetition quiver leaving `x`.
    pub fn hat_arrows_from(&self, x: HatVertex) -> Vec<HatVertex> {
        self.diagram()
            .neighbors(x.v)
            .iter()
            .map(|&j| HatVertex::new(j, x.p + self.d(x.v).min(self.d(j))))
            .filter(|&y| self.in_hat(y))
            .collect()
    }

    /// Sources of the arrows entering `x`.
    pub fn hat_arrows_into(&self, x: HatVertex) -> Vec<HatVertex> {
        self.diagram()
            .neighbors(x.v)
            .iter()
            .map(|&j| HatVertex::new(j, x.p - self.d(x.v).min(self.d(j))))
            .filter(|&y| self.in_hat(y))
            .collect()
    }

    /// Is `x` a vertex of the twisted AR quiver?
    pub fn in_gamma(&self, x: HatVertex) -> bool {
        self.in_hat(x) && self.xi_of(self.star(x.v)) - self.rh() < x.p && x.p <= self.xi_of(x.v)
    }

    /// Vertices of the twisted AR quiver in the compatible reading: height
    /// descending, ties by ascending vertex.
    pub fn gamma_vertices(&self) -> Vec<HatVertex> {
        let mut out = Vec::new();
        for v in self.diagram().vertices() {
            let top = self.xi_of(v);
            let bottom = self.xi_of(self.star(v)) - self.rh();
            let mut p = top;
            while p > bottom {
                out.push(HatVertex::new(v, p));
                p -= 2 * self.d(v);
            }
        }
        sort_compatible(&mut out);
        out
    }

    pub fn gamma_arrows(&self) -> Vec<(HatVertex, HatVertex)> {
        let vs = self.gamma_vertices();
        let mut out = Vec::new();
        for &x in &vs {
            for y in self.hat_arrows_from(x) {
                if self.in_gamma(y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Injective vertex `(ι, ξ_ι)`.
    pub fn injective_vertex(&self, v: Vertex) -> HatVertex {
        HatVertex::new(v, self.xi_of(v))
    }

    /// Projective vertex `(ι*, ξ_ι − rh^∨ + 2d_ι)`.
    pub fn projective_vertex(&self, v: Vertex) -> HatVertex {
        HatVertex::new(self.star(v), self.xi_of(v) - self.rh() + 2 * self.d(v))
    }

    /// `w[X]` for a finite set of vertices of the twisted repetition quiver.
    pub fn w_of(&self, xs: &[HatVertex]) -> Vec<Vertex> {
        let mut v = xs.to_vec();
        sort_compatible(&mut v);
        v.dedup();
        v.into_iter().map(|x| x.v).collect()
    }

    /// The member of the orbit of `v` with the largest height.
    pub fn orbit_top(&self, v: Vertex) -> Vertex {
        let o = self.od.orbit_members(self.od.orbit_of(v));
        *o.iter()
            .max_by_key(|&&u| (self.xi_of(u), std::cmp::Reverse(u)))
            .expect("orbits are nonempty")
    }

    /// `X° = {(i°, ξ_{i°})}`.
    pub fn x_circ(&self) -> Vec<HatVertex> {
        let mut v: Vec<HatVertex> = self
            .od
            .orbits
            .iter()
            .map(|o| self.injective_vertex(self.orbit_top(o[0])))
            .collect();
        sort_compatible(&mut v);
        v
    }

    /// `X' = {(σ(i°), p) : ξ_{σ(i°)} < p ≤ ξ_{i°} − 2}`.
    pub fn x_prime(&self) -> Vec<HatVertex> {
        let mut out = Vec::new();
        for o in &self.od.orbits {
            let top = self.orbit_top(o[0]);
            let s = self.diagram().sigma(top);
            let mut p = self.xi_of(top) - 2;
            while p > self.xi_of(s) {
                let x = HatVertex::new(s, p);
                if self.in_hat(x) {
                    out.push(x);
                }
                p -= 1;
            }
        }
        sort_compatible(&mut out);
        out
    }

    /// `τ° = w[X°]σ`.
    pub fn tau_circ(&self) -> LatticeMap {
        LatticeMap::word(&self.rs, &self.w_of(&self.x_circ()))
            .compose(&LatticeMap::sigma(self.diagram()))
    }

    /// `τ_Q` as a word `w[X']⁻¹ w[X°] σ w[X']`, e.g. `s1 s5 s4 s3 σ s1`.
    /// The `σ` is omitted when it is trivial.
    pub fn tau_word(&self) -> String {
        let (w, wc) = self.tau_factors();
        let s = |v: &Vertex| format!("s{v}");
        let mut parts: Vec<String> = w.iter().rev().map(s).collect();
        parts.extend(wc.iter().map(s));
        if self.r() > 1 {
            parts.push("σ".into());
        }
        parts.extend(w.iter().map(s));
        parts.join(" ")
    }

    fn compute_tau(&self) -> LatticeMap {
        let w = self.w_of(&self.x_prime());
        let winv: Vec<Vertex> = w.iter().rev().copied().collect();
        LatticeMap::word(&self.rs, &winv)
            .compose(&self.tau_circ())
            .compose(&LatticeMap::word(&self.rs, &w))
    }

    /// The twisted Coxeter element `τ_Q` as a matrix on the weight lattice.
    pub fn tau(&self) -> &LatticeMap {
        &self.tau_pows[1 % self.tau_pows.len()]
    }

    /// `τ^k` for any integer `k`.
    pub fn tau_pow(&self, k: i64) -> &LatticeMap {
        &self.tau_pows[k.rem_euclid(self.tau_pows.len() as i64) as usize]
    }

    /// A word `(w', τ°-word)` with `τ = w'^{-1} w[X°] σ w'`, for display.
    pub fn tau_factors(&self) -> (Vec<Vertex>, Vec<Vertex>) {
        (self.w_of(&self.x_prime()), self.w_of(&self.x_circ()))
    }

    /// `γ_ι = (1 − τ^{d_ι}) ϖ_ι`.
    pub fn gamma(&self, v: Vertex) -> Weight {
        let w = self.rs.fundamental(v);
        &w - &self.tau_pow(self.d(v)).apply(&w)
    }

    /// `ψ(ι, p) = τ^{(ξ_ι − p)/2} γ_ι`.
    pub fn psi(&self, x: HatVertex) -> Result<Weight> {
        self.check_hat(x)?;
        Ok(self
            .tau_pow((self.xi_of(x.v) - x.p) / 2)
            .apply(&self.gamma(x.v)))
    }

    /// `φ(ι, p)` through the level-tracking recursion from `(ι, ξ_ι)`.
    pub fn phi_recursive(&self, x: HatVertex) -> Result<Coord> {
        self.check_hat(x)?;
        let d = self.d(x.v);
        let mut a = self.gamma(x.v);
        let mut level = 0i64;
        let mut p = self.xi_of(x.v);
        let up = self.tau_pow(-d);
        let down = self.tau_pow(d);
        while p != x.p {
            let (m, step) = if x.p > p { (up, 1) } else { (down, -1) };
            a = m.apply(&a);
            let signed = if level.rem_euclid(2) == 0 {
                a.clone()
            } else {
                -&a
            };
            if !self.rs.is_positive(&signed) {
                level += step;
            }
            p += 2 * d * step;
        }
        Ok(Coord { root: a, level })
    }

    /// Index in the infinite word of `[Q]` of `(ι, p)`.
    pub fn index_of(&self, x: HatVertex) -> Result<i64> {
        self.check_hat(x)?;
        let m = (self.xi_of(x.v) - x.p) / (2 * self.d(x.v));
        Ok(self.class.occurrence(x.v, m))
    }

    /// Inverse of [`QDatum::index_of`].
    pub fn vertex_of_index(&self, k: i64) -> HatVertex {
        let v = self.class.letter(k);
        let m = self.class.occurrence_number(k);
        HatVertex::new(v, self.xi_of(v) - 2 * self.d(v) * m)
    }

    /// `φ(ι, p)` through `[Q]`.
    pub fn phi(&self, x: HatVertex) -> Result<Coord> {
        Ok(self.class.coord(self.index_of(x)?))
    }

    /// Vertices of the mesh ending at `x`, computed in the twisted
    /// repetition quiver, and its abutters (ascending height, ties by
    /// descending vertex).
    pub fn mesh(&self, x: HatVertex) -> Result<(HatVertex, Vec<HatVertex>, Vec<HatVertex>)> {
        self.check_hat(x)?;
        if self.rs.rank() == 1 {
            return Err(Error::RankOne);
        }
        let s = HatVertex::new(x.v, x.p - 2 * self.d(x.v));
        let fwd = hat_reach(s, |y| self.hat_arrows_from(y), |y| y.p <= x.p);
        let bwd = hat_reach(x, |y| self.hat_arrows_into(y), |y| y.p >= s.p);
        let mut vertices: Vec<HatVertex> = fwd.intersection(&bwd).copied().collect();
        sort_compatible(&mut vertices);
        let mut ab: Vec<HatVertex> = vertices
            .iter()
            .copied()
            .filter(|y| self.diagram().adjacent(y.v, x.v))
            .collect();
        sort_compatible(&mut ab);
        ab.reverse();
        Ok((s, ab, vertices))
    }

    /// `ψ(ι,p) + ψ(ι,p−2d) = Σ ψ(abutters)`.
    pub fn g_additive_check(&self, x: HatVertex) -> Result<bool> {
        let (s, ab, _) = self.mesh(x)?;
        let lhs = &self.psi(x)? + &self.psi(s)?;
        let mut rhs = Weight::zero(self.rs.rank());
        for y in ab {
            rhs = &rhs + &self.psi(y)?;
        }
        Ok(lhs == rhs)
    }

    /// `τ` on coordinates: `(ι, p) ↦ (σι, p − 2)`.
    pub fn tau_vertex(&self, x: HatVertex) -> HatVertex {
        HatVertex::new(self.diagram().sigma(x.v), x.p - 2)
    }

    pub fn tau_vertex_inv(&self, x: HatVertex) -> HatVertex {
        let r = self.r() as usize;
        HatVertex::new(self.diagram().sigma_pow(x.v, r - 1), x.p + 2)
    }

    /// The shift: `(ι, p) ↦ (ι*, p + rh^∨)`.
    pub fn shift_vertex(&self, x: HatVertex) -> HatVertex {
        HatVertex::new(self.star(x.v), x.p + self.rh())
    }

    /// `S_Q = Σ ∘ τ^r`.
    pub fn serre_vertex(&self, x: HatVertex) -> HatVertex {
        HatVertex::new(self.star(x.v), x.p - 2 * self.r() + self.rh())
    }

    /// `S'_Q = Σ ∘ τ`.
    pub fn serre_prime_vertex(&self, x: HatVertex) -> HatVertex {
        self.shift_vertex(self.tau_vertex(x))
    }

    /// Folding map `(ι, p) ↦ (ῑ, p)`.
    pub fn fold(&self, x: HatVertex) -> FoldedVertex {
        FoldedVertex {
            orbit: self.od.orbit_of(x.v),
            p: x.p,
        }
    }

    /// Inverse of the folding map, if `(i, p) ∈ Î`.
    pub fn unfold(&self, y: FoldedVertex) -> Option<HatVertex> {
        self.od
            .orbit_members(y.orbit)
            .iter()
            .map(|&v| HatVertex::new(v, y.p))
            .find(|&x| self.in_hat(x))
    }

    /// Residues of the compatible reading of the twisted AR quiver.
    pub fn reading_word(&self) -> Vec<Vertex> {
        self.gamma_vertices().iter().map(|x| x.v).collect()
    }

    /// A random Q-datum of the same parity reached by `steps` random
    /// source or sink reflections.
    pub fn random_walk<R: Rng + ?Sized>(&self, rng: &mut R, steps: usize) -> QDatum {
        let mut q = self.clone();
        for _ in 0..steps {
            let src = q.sources();
            let snk = q.sinks();
            let pick_src = if snk.is_empty() {
                true
            } else if src.is_empty() {
                false
            } else {
                rng.gen_bool(0.5)
            };
            q = if pick_src {
                q.reflect(src[rng.gen_range(0..src.len())])
                    .expect("chosen among sources")
            } else {
                q.reflect_inv(snk[rng.gen_range(0..snk.len())])
                    .expect("chosen among sinks")
            };
        }
        q
    }

    /// Folded type of the datum.
    pub fn folded_type(&self) -> FoldedType {
        self.od.folded
    }

    /// Is the datum of a folded (non simply laced) type?
    pub fn is_twisted(&self) -> bool {
        !matches!(self.od.folded.family, Family::A | Family::D | Family::E)
    }
}

/// Sorts into the compatible reading: height descending, then vertex.
pub fn sort_compatible(v: &mut [HatVertex]) {
    v.sort_by(|a, b| b.p.cmp(&a.p).then(a.v.cmp(&b.v)));
}

fn hat_reach(
    start: HatVertex,
    next: impl Fn(HatVertex) -> Vec<HatVertex>,
    inside: impl Fn(HatVertex) -> bool,
) -> BTreeSet<HatVertex> {
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for y in next(x) {
            if inside(y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Greedy source sequence of length `len`: always the smallest source whose
/// current top vertex still lies in the twisted AR quiver of the original
/// datum (otherwise the sequence leaves `[Q]` and stops being reduced).
fn source_word(rs: &RootSystem, od: &OrbitData, xi: &[i64]) -> Vec<Vertex> {
    let d = rs.diagram();
    let rh = od.r * od.h_dual;
    let floor: Vec<i64> = d.vertices().map(|v| xi[rs.star(v) - 1] - rh).collect();
    let mut xi = xi.to_vec();
    let mut out = Vec::with_capacity(rs.n_pos());
    for _ in 0..rs.n_pos() {
        let v = d
            .vertices()
            .find(|&v| {
                xi[v - 1] > floor[v - 1] && d.neighbors(v).iter().all(|&j| xi[v - 1] > xi[j - 1])
            })
            .expect("a source remains inside the twisted AR quiver");
        xi[v - 1] -= 2 * od.d_of(v);
        out.push(v);
    }
    out
}

/// The commutation class `[Q]`, built by greedy source emission.
pub fn class_of(q: &QDatum) -> CommClass {
    q.class().clone()
}

/// Residue-preserving isomorphism `Γ_Q → Υ_[Q]`, as the map from each
/// vertex of `Γ_Q` to its index in `1..=N`. Fails if the arrows disagree.
pub fn gamma_to_upsilon(q: &QDatum) -> Result<HashMap<HatVertex, i64>> {
    let mut map = HashMap::new();
    let n = q.class().n();
    for x in q.gamma_vertices() {
        let k = q.index_of(x)?;
        if !(1..=n).contains(&k) || q.class().letter(k) != x.v {
            return Err(Error::Inconsistent(format!("{x} maps to index {k}")));
        }
        map.insert(x, k);
    }
    let mut mapped: Vec<(i64, i64)> = q
        .gamma_arrows()
        .iter()
        .map(|(a, b)| (map[a], map[b]))
        .collect();
    mapped.sort_unstable();
    let mut ar = q.class().ar_quiver();
    ar.sort_unstable();
    if mapped != ar || map.len() as i64 != n {
        return Err(Error::Inconsistent(
            "twisted AR quiver and combinatorial AR quiver differ".into(),
        ));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b3(xi: Vec<i64>) -> Result<QDatum> {
        QDatum::from_diagram("A5^2".parse().unwrap(), xi)
    }

    #[test]
    fn b3_validity() {
        b3(vec![2, 4, 5, 6, 8]).unwrap();
        assert!(b3(vec![2, 4, 7, 6, 8]).is_ok());
        assert!(b3(vec![6, 4, 5, 6, 8]).is_ok());
        match b3(vec![2, 4, 5, 6, 7]) {
            Err(Error::InvalidHeight(m)) => {
                assert!(m.contains("condition (1) fails at vertices 4,5"), "{m}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn b3_sources_sinks_and_reflections() {
        let q2 = b3(vec![2, 4, 5, 6, 8]).unwrap();
        assert_eq!(q2.sources(), vec![5]);
        assert_eq!(q2.sinks(), vec![1, 3]);
        let q1 = b3(vec![6, 4, 5, 6, 8]).unwrap();
        assert_eq!(q1.reflect(1).unwrap(), q2);
        let q3 = b3(vec![2, 4, 7, 6, 8]).unwrap();
        assert_eq!(q3.reflect(3).unwrap(), q2);
        assert_eq!(q2.reflect_inv(3).unwrap(), q3);
        assert!(matches!(q2.reflect(1), Err(Error::NotSource(1))));
    }

    #[test]
    fn b3_tau() {
        let q = b3(vec![2, 4, 5, 6, 8]).unwrap();
        assert_eq!(q.tau_word(), "s1 s5 s4 s3 σ s1");
        let (wp, wc) = q.tau_factors();
        assert_eq!(wp, vec![1]);
        assert_eq!(wc, vec![5, 4, 3]);
        let rs = q.root_system();
        let expected = LatticeMap::word(rs, &[1, 5, 4, 3])
            .compose(&LatticeMap::sigma(q.diagram()))
            .compose(&LatticeMap::reflection(rs, 1));
        assert_eq!(q.tau(), &expected);
        assert_eq!(q.tau().order(100), Some(10));
        assert_eq!(q.tau_pow(5), &LatticeMap::identity(5).neg());
    }

    #[test]
    fn b3_psi_phi_and_projectives() {
        let q = b3(vec![2, 4, 5, 6, 8]).unwrap();
        let rs = q.root_system().clone();
        assert_eq!(q.psi(HatVertex::new(3, 3)).unwrap(), rs.simple_root(2));
        assert_eq!(q.projective_vertex(3), HatVertex::new(3, -3));
        let proj: Vec<HatVertex> = (1..=5).map(|v| q.projective_vertex(v)).collect();
        assert_eq!(
            proj,
            vec![
                HatVertex::new(5, -4),
                HatVertex::new(4, -2),
                HatVertex::new(3, -3),
                HatVertex::new(2, 0),
                HatVertex::new(1, 2)
            ]
        );
        assert_eq!(q.gamma_vertices().len(), 15);
        assert!(matches!(
            q.psi(HatVertex::new(3, 4)),
            Err(Error::Parity(3, 4))
        ));
    }

    #[test]
    fn b3_class_contains_the_source_sequence_word() {
        let q = b3(vec![2, 4, 5, 6, 8]).unwrap();
        let w = [5, 4, 3, 2, 5, 3, 1, 4, 3, 2, 5, 3, 4, 3, 5];
        assert_eq!(q.class(), &CommClass::new(q.root_system(), &w).unwrap());
        gamma_to_upsilon(&q).unwrap();
    }

    #[test]
    fn b3_mesh() {
        let q = b3(vec![2, 4, 5, 6, 8]).unwrap();
        let (s, ab, _) = q.mesh(HatVertex::new(4, 6)).unwrap();
        assert_eq!(s, HatVertex::new(4, 2));
        let set: BTreeSet<HatVertex> = ab.into_iter().collect();
        assert_eq!(
            set,
            BTreeSet::from([
                HatVertex::new(5, 4),
                HatVertex::new(3, 3),
                HatVertex::new(3, 5)
            ])
        );
        assert!(q.g_additive_check(HatVertex::new(4, 6)).unwrap());
    }

    #[test]
    fn standard_data_are_valid() {
        for s in [
            "A1", "A4", "D5", "E6", "E7", "B2", "B3", "B4", "C3", "C4", "F4", "G2",
        ] {
            let ty: FoldedType = s.parse().unwrap();
            let q = QDatum::standard(ty).unwrap();
            assert_eq!(q.class().n(), ty.n_positive(), "{s}");
        }
        let g = QDatum::standard_for("D4^3'".parse().unwrap()).unwrap();
        assert_eq!(g.xi(), &[-1, 0, -5, -3]);
        let b = QDatum::standard("B3".parse().unwrap()).unwrap();
        assert_eq!(b.xi(), &[-3, -1, 0, -3, -5]);
    }

    #[test]
    fn json_round_trip() {
        let s = r#"{"diagram":"A5^2","xi":{"1":2,"2":4,"3":5,"4":6,"5":8}}"#;
        let q = QDatum::from_json(s).unwrap();
        assert_eq!(q.xi(), &[2, 4, 5, 6, 8]);
        let back = serde_json::to_string(&q.to_file()).unwrap();
        assert_eq!(QDatum::from_json(&back).unwrap(), q);
    }
}
