//! Quantum Cartan matrices, their exact inverse as Laurent series, and the
//! two closed formulas for its coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::cats::QCategory;
use crate::error::{Error, Result};
use crate::qdatum::{FoldedVertex, OrbitData, QDatum};
use crate::rootsys::{Family, FoldedType, Vertex};

/// A Laurent polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LaurentPoly {
    pub coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: i64, e: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    fn add_term(&mut self, e: i64, c: i64) {
        let v = self.coeffs.entry(e).or_insert(0);
        *v += c;
        if *v == 0 {
            self.coeffs.remove(&e);
        }
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.coeffs.get(&e).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = self.clone();
        for (&e, &c) in &o.coeffs {
            p.add_term(e, c);
        }
        p
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut p = Self::zero();
        for (&e1, &c1) in &self.coeffs {
            for (&e2, &c2) in &o.coeffs {
                p.add_term(e1 + e2, c1 * c2);
            }
        }
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.abs();
            let body = match (a, e) {
                (_, 0) => a.to_string(),
                (1, 1) => "q".into(),
                (1, _) => format!("q^{e}"),
                (_, 1) => format!("{a}q"),
                _ => format!("{a}q^{e}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// The folded Cartan data: orbits in the order of their smallest vertex,
/// their sizes `d_i`, and adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedCartan {
    pub ty: FoldedType,
    /// Smallest vertex of each orbit, indexed by orbit id `0..n`.
    pub reps: Vec<Vertex>,
    pub d: Vec<i64>,
    pub adjacent: Vec<Vec<bool>>,
}

impl FoldedCartan {
    pub fn new(ty: FoldedType) -> Result<Self> {
        let diag = ty.diagram()?;
        let od = OrbitData::new(&diag)?;
        let reps: Vec<Vertex> = od.orbits.iter().map(|o| o[0]).collect();
        let d: Vec<i64> = od.orbits.iter().map(|o| o.len() as i64).collect();
        let n = reps.len();
        let mut adjacent = vec![vec![false; n]; n];
        for (a, b) in diag.edges() {
            let (i, j) = (
                od.orbits.iter().position(|o| o.contains(&a)),
                od.orbits.iter().position(|o| o.contains(&b)),
            );
            let (i, j) = (i.expect("orbit"), j.expect("orbit"));
            if i != j {
                adjacent[i][j] = true;
                adjacent[j][i] = true;
            }
        }
        Ok(FoldedCartan {
            ty,
            reps,
            d,
            adjacent,
        })
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// The orbit id of a vertex representative.
    pub fn id_of_rep(&self, rep: Vertex) -> Option<usize> {
        self.reps.iter().position(|&r| r == rep)
    }

    /// `c_ij` of the Cartan matrix of `g`.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        if i == j {
            2
        } else if self.adjacent[i][j] {
            -Integer::div_ceil(&self.d[j], &self.d[i])
        } else {
            0
        }
    }
}

/// `C(q)`: diagonal `q^{d_i} + q^{-d_i}`, off-diagonal
/// `(q^{c_ij} − q^{-c_ij}) / (q − q^{-1})`.
pub fn quantum_cartan(fc: &FoldedCartan) -> Vec<Vec<LaurentPoly>> {
    let n = fc.rank();
    let mut m = vec![vec![LaurentPoly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = if i == j {
                LaurentPoly::monomial(1, fc.d[i]).add(&LaurentPoly::monomial(1, -fc.d[i]))
            } else {
                let c = fc.cartan_entry(i, j);
                let mut p = LaurentPoly::zero();
                let a = c.abs();
                for t in 0..a {
                    p.add_term(a - 1 - 2 * t, c.signum());
                }
                p
            };
        }
    }
    m
}

// Dense integer polynomials, index = degree.
type Poly = Vec<BigInt>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn psub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(out)
}

// Exact division; panics when `b` does not divide `a`, which Bareiss rules
// out.
fn pdiv_exact(a: &Poly, b: &Poly) -> Poly {
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() < b.len() {
        assert!(rem.is_empty(), "inexact polynomial division");
        return vec![];
    }
    let mut q = vec![BigInt::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db];
        if c.is_zero() {
            continue;
        }
        let (t, r) = c.div_rem(lead);
        assert!(r.is_zero(), "inexact polynomial division");
        for (i, y) in b.iter().enumerate() {
            rem[k + i] -= &t * y;
        }
        q[k] = t;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact polynomial division");
    trim(q)
}

// Fraction-free determinant.
fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut sign = 1;
    let mut prev: Poly = vec![BigInt::one()];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_empty()) else {
                return vec![];
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = psub(&pmul(&m[i][j], &m[k][k]), &pmul(&m[i][k], &m[k][j]));
                m[i][j] = pdiv_exact(&num, &prev);
            }
            m[i][k] = vec![];
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        d.into_iter().map(|x| -x).collect()
    } else {
        d
    }
}

fn minor(m: &[Vec<Poly>], skip_r: usize, skip_c: usize) -> Vec<Vec<Poly>> {
    m.iter()
        .enumerate()
        .filter(|&(r, _)| r != skip_r)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != skip_c)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Coefficients `c̃_ij(u)` for `u ∈ [-U, U]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LaurentTable {
    pub i: usize,
    pub j: usize,
    pub u_min: i64,
    pub u_max: i64,
    pub values: Vec<i64>,
}

impl LaurentTable {
    /// The coefficient at `u`, or `None` outside the computed window.
    pub fn get(&self, u: i64) -> Option<i64> {
        (self.u_min..=self.u_max)
            .contains(&u)
            .then(|| self.values[(u - self.u_min) as usize])
    }
}

/// The inverse of `C(q)` in `Q((q))`, expanded on `[-U, U]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseSeries {
    pub u: i64,
    pub tables: Vec<Vec<LaurentTable>>,
}

impl InverseSeries {
    pub fn get(&self, i: usize, j: usize, u: i64) -> Option<i64> {
        self.tables[i][j].get(u)
    }
}

/// Inverts `C(q)` exactly: clear negative powers, take the adjugate and
/// determinant over `Z[q]` by fraction-free elimination, then expand each
/// quotient around `q = 0`.
pub fn invert_series(c: &[Vec<LaurentPoly>], u: i64) -> Result<InverseSeries> {
    if u < 1 {
        return Err(Error::Precondition(
            "the truncation U must be at least 1".into(),
        ));
    }
    let n = c.len();
    let shift = c
        .iter()
        .flatten()
        .filter_map(LaurentPoly::min_degree)
        .min()
        .unwrap_or(0)
        .min(0)
        .abs();
    // P = q^shift C, a polynomial matrix; C^{-1} = q^shift adj(P) / det(P)
    let p: Vec<Vec<Poly>> = c
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let top = x.max_degree().map_or(0, |d| d + shift);
                    let mut v = vec![BigInt::zero(); top as usize + 1];
                    for (&e, &k) in &x.coeffs {
                        v[(e + shift) as usize] = BigInt::from(k);
                    }
                    trim(v)
                })
                .collect()
        })
        .collect();
    let det = bareiss_det(p.clone());
    if det.is_empty() {
        return Err(Error::Inconsistent("singular quantum Cartan matrix".into()));
    }
    let val = det.iter().position(|x| !x.is_zero()).expect("nonzero") as i64;
    let unit: Vec<BigRational> = det[val as usize..]
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    // series of 1/unit up to the order needed
    let order = (u - (shift - val) + 1).max(1) as usize;
    let mut inv = vec![BigRational::zero(); order];
    inv[0] = unit[0].recip();
    for k in 1..order {
        let mut s = BigRational::zero();
        for t in 1..=k.min(unit.len() - 1) {
            s += &unit[t] * &inv[k - t];
        }
        inv[k] = -s * &inv[0];
    }
    let mut tables = vec![Vec::with_capacity(n); n];
    for (i, row) in tables.iter_mut().enumerate() {
        for j in 0..n {
            // adj(P)_ij = (-1)^{i+j} det(minor_{ji})
            let mut a = bareiss_det(minor(&p, j, i));
            if (i + j) % 2 == 1 {
                a = a.into_iter().map(|x| -x).collect();
            }
            let mut values = Vec::with_capacity(2 * u as usize + 1);
            for e in -u..=u {
                // coefficient of q^e in q^{shift - val} a(q) / unit(q)
                let k = e - (shift - val);
                let mut s = BigRational::zero();
                if k >= 0 {
                    for (t, x) in a.iter().enumerate().take(k as usize + 1) {
                        s += BigRational::from_integer(x.clone()) * &inv[k as usize - t];
                    }
                }
                if !s.is_integer() {
                    return Err(Error::Inconsistent(format!(
                        "non-integral coefficient in entry ({i},{j})"
                    )));
                }
                values.push(
                    s.to_integer()
                        .to_i64()
                        .ok_or_else(|| Error::Inconsistent("coefficient overflow".into()))?,
                );
            }
            row.push(LaurentTable {
                i,
                j,
                u_min: -u,
                u_max: u,
                values,
            });
        }
    }
    Ok(InverseSeries { u, tables })
}

/// Checks `C(q) · C̃(q) = I` on every exponent whose coefficient is
/// determined by the window.
pub fn check_inverse(c: &[Vec<LaurentPoly>], s: &InverseSeries) -> bool {
    let n = c.len();
    let spread = c
        .iter()
        .flatten()
        .filter_map(|p| p.max_degree().map(|d| d.max(-p.min_degree().unwrap_or(0))))
        .max()
        .unwrap_or(0);
    for i in 0..n {
        for j in 0..n {
            for e in -s.u + spread..=s.u - spread {
                let mut acc = 0i64;
                for (k, ck) in c[i].iter().enumerate() {
                    for (&d, &x) in &ck.coeffs {
                        acc += x * s.get(k, j, e - d).expect("inside the window");
                    }
                }
                if acc != (i == j && e == 0) as i64 {
                    return false;
                }
            }
        }
    }
    true
}

/// `c̃_ij(u)` by the closed formula in a Q-datum:
/// `(ϖ_ι, τ^{(u + ξ_ȷ − ξ_ι − d_i)/2} γ_ȷ)` for `u ≥ 0` with the right
/// parity, else 0. Every choice of `ι ∈ i`, `ȷ ∈ j` is evaluated and must
/// agree.
pub fn ctilde_fo(q: &QDatum, fc: &FoldedCartan, i: usize, j: usize, u: i64) -> Result<i64> {
    if u < 0 {
        return Ok(0);
    }
    let od = q.orbit_data();
    let di = fc.d[i];
    let rs = q.root_system();
    let mut out = None;
    for &a in od.orbit_members(fc.reps[i]) {
        for &b in od.orbit_members(fc.reps[j]) {
            let t = u + q.xi_of(b) - q.xi_of(a) - di;
            let v = if t.rem_euclid(2) != 0 {
                0
            } else {
                rs.form_int(&rs.fundamental(a), &q.tau_pow(t / 2).apply(&q.gamma(b)))
            };
            match out {
                None => out = Some(v),
                Some(w) if w != v => {
                    return Err(Error::Inconsistent(format!(
                        "c̃_{i}{j}({u}) depends on the chosen vertices"
                    )))
                }
                _ => {}
            }
        }
    }
    Ok(out.expect("orbits are nonempty"))
}

/// Is the categorical formula available for the orbit pair?
pub fn cat_admissible(fc: &FoldedCartan, i: usize, j: usize) -> bool {
    let r = fc.ty.r();
    fc.d[i].max(fc.d[j]) == r || (fc.ty.family == Family::B && fc.d[i] == 1 && fc.d[j] == 1)
}

/// `c̃_ij(p − s + d_i) = ⟨H(j,s), ⊕_{k < ⌈d_j/d_i⌉} τ^k H(i,p)⟩`.
pub fn ctilde_cat(
    qc: &QCategory,
    fc: &FoldedCartan,
    (i, p): (usize, i64),
    (j, s): (usize, i64),
) -> Result<i64> {
    if !cat_admissible(fc, i, j) {
        return Err(Error::Precondition(format!(
            "orbit pair ({i},{j}) is outside the formula's range"
        )));
    }
    if p - s + fc.d[i] < 0 {
        return Err(Error::Precondition(
            "p − s + d_i must be nonnegative".into(),
        ));
    }
    let m = qc.h(FoldedVertex {
        orbit: fc.reps[i],
        p,
    })?;
    let n = qc.h(FoldedVertex {
        orbit: fc.reps[j],
        p: s,
    })?;
    let mut x = m;
    let mut total = 0;
    for _ in 0..Integer::div_ceil(&fc.d[j], &fc.d[i]) {
        total += qc.euler(n, x)?;
        x = qc.tau_obj(x)?;
    }
    Ok(total)
}

/// The categorical value at `u` for orbits `(i, j)`, choosing `s` from the
/// injective height of `j`. `None` when no `(i, p) ∈ Î` realizes `u`.
pub fn ctilde_cat_at(
    qc: &QCategory,
    fc: &FoldedCartan,
    i: usize,
    j: usize,
    u: i64,
) -> Result<Option<i64>> {
    let q = qc.qdatum();
    let s = q.xi_of(fc.reps[j]);
    let p = u + s - fc.d[i];
    if qc
        .qdatum()
        .unfold(FoldedVertex {
            orbit: fc.reps[i],
            p,
        })
        .is_none()
    {
        return Ok(None);
    }
    ctilde_cat(qc, fc, (i, p), (j, s)).map(Some)
}

/// `𝒩(i,p; j,s)` from the oracle table.
pub fn pairing_n(
    s: &InverseSeries,
    fc: &FoldedCartan,
    (i, p): (usize, i64),
    (j, t): (usize, i64),
) -> Result<i64> {
    let di = fc.d[i];
    let get = |u: i64| {
        s.get(i, j, u).ok_or(Error::WindowTooSmall {
            got: s.u as usize,
            need: u.unsigned_abs() as usize,
        })
    };
    Ok(get(p - t - di)? - get(p - t + di)? - get(t - p - di)? + get(t - p + di)?)
}

/// `⟨H(i,p), H(j,s)⟩ + ⟨H(j,s), H(i,p)⟩`.
pub fn pairing_euler(
    qc: &QCategory,
    fc: &FoldedCartan,
    (i, p): (usize, i64),
    (j, s): (usize, i64),
) -> Result<i64> {
    let a = qc.h(FoldedVertex {
        orbit: fc.reps[i],
        p,
    })?;
    let b = qc.h(FoldedVertex {
        orbit: fc.reps[j],
        p: s,
    })?;
    Ok(qc.euler(a, b)? + qc.euler(b, a)?)
}

/// One row of the three-way comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QcmRow {
    pub i: usize,
    pub j: usize,
    pub u: i64,
    pub oracle: i64,
    pub fo: i64,
    pub cat: Option<i64>,
}

impl QcmRow {
    pub fn agree(&self) -> bool {
        self.oracle == self.fo && self.cat.is_none_or(|c| c == self.oracle)
    }
}

/// The three-way table over `u ∈ [0, u_max]` for all orbit pairs. Rows
/// where the categorical formula does not apply carry `cat = None`.
pub fn three_way(q: &QDatum, u_max: i64) -> Result<Vec<QcmRow>> {
    let fc = FoldedCartan::new(q.folded_type())?;
    let series = invert_series(&quantum_cartan(&fc), u_max.max(1))?;
    let qc = QCategory::new(q.clone());
    let mut rows = Vec::new();
    for i in 0..fc.rank() {
        for j in 0..fc.rank() {
            for u in 0..=u_max {
                let oracle = series.get(i, j, u).expect("inside window");
                let fo = ctilde_fo(q, &fc, i, j, u)?;
                let cat = if cat_admissible(&fc, i, j) {
                    ctilde_cat_at(&qc, &fc, i, j, u)?
                } else {
                    None
                };
                rows.push(QcmRow {
                    i: i + 1,
                    j: j + 1,
                    u,
                    oracle,
                    fo,
                    cat,
                });
            }
        }
    }
    Ok(rows)
}

/// The default truncation `2rh^∨ + 10`.
pub fn default_truncation(ty: FoldedType) -> i64 {
    2 * ty.r() * ty.h_dual() + 10
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fc(s: &str) -> FoldedCartan {
        FoldedCartan::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn cartan_entries() {
        let g = quantum_cartan(&fc("G2"));
        assert_eq!(g[0][1], LaurentPoly::monomial(-1, 0));
        assert_eq!(g[1][0].to_string(), "-q^2-1-q^-2");
        let b = quantum_cartan(&fc("B2"));
        assert_eq!(b[0][0].to_string(), "q^2+q^-2");
        assert_eq!(b[1][1].to_string(), "q+q^-1");
        assert_eq!(quantum_cartan(&fc("A1"))[0][0].to_string(), "q+q^-1");
    }

    #[test]
    fn a1_series() {
        let c = quantum_cartan(&fc("A1"));
        let s = invert_series(&c, 7).unwrap();
        assert_eq!(
            (s.get(0, 0, 1), s.get(0, 0, 3), s.get(0, 0, 5)),
            (Some(1), Some(-1), Some(1))
        );
        assert_eq!(s.get(0, 0, 0), Some(0));
        assert_eq!(s.get(0, 0, -1), Some(0));
        assert_eq!(s.get(0, 0, 8), None);
        assert!(check_inverse(&c, &s));
    }

    #[test]
    fn polynomial_division() {
        let a: Poly = vec![BigInt::from(-1), BigInt::zero(), BigInt::one()];
        let b: Poly = vec![BigInt::one(), BigInt::one()];
        assert_eq!(pdiv_exact(&a, &b), vec![BigInt::from(-1), BigInt::one()]);
    }

    #[test]
    fn b3_three_way() {
        let q = QDatum::standard("B3".parse().unwrap()).unwrap();
        let rows = three_way(&q, 20).unwrap();
        let bad: Vec<&QcmRow> = rows.iter().filter(|r| !r.agree()).collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert!(rows.iter().any(|r| r.cat.is_some()));
    }
}
