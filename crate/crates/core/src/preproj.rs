//! Representations of the double quiver satisfying the preprojective
//! relations, the reflection functors and layer modules.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Q};
use crate::rootsys::{DynkinDiagram, Kind, RootSystem, Vertex, Weight};

/// An orientation of the diagram. Arrows in the orientation carry the sign
/// `+1` in the preprojective relations, their reverses `-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    diagram: DynkinDiagram,
    arrows: BTreeSet<(Vertex, Vertex)>,
}

impl Orientation {
    /// The fixed σ-stable base orientation: type A points towards the
    /// middle, type D along the chain into the branch vertex, type E into
    /// the vertex 3.
    pub fn base(d: &DynkinDiagram) -> Self {
        let n = d.rank();
        let mut arrows = BTreeSet::new();
        for (a, b) in d.edges() {
            let (lo, hi) = (a.min(b), a.max(b));
            let forward = match d.kind() {
                Kind::A => 2 * lo < n + 1,
                Kind::D => hi < n - 1,
                Kind::E => hi <= 3,
            };
            arrows.insert(if forward { (lo, hi) } else { (hi, lo) });
        }
        Orientation {
            diagram: d.clone(),
            arrows,
        }
    }

    /// A custom orientation; every edge must appear exactly once.
    pub fn new(d: &DynkinDiagram, arrows: &[(Vertex, Vertex)]) -> Result<Self> {
        let set: BTreeSet<(Vertex, Vertex)> = arrows.iter().copied().collect();
        for (a, b) in d.edges() {
            if set.contains(&(a, b)) == set.contains(&(b, a)) {
                return Err(Error::Precondition(format!(
                    "edge {{{a},{b}}} needs exactly one direction"
                )));
            }
        }
        if set.len() != d.edges().len() || set.iter().any(|&(a, b)| !d.adjacent(a, b)) {
            return Err(Error::Precondition(
                "arrows must be the edges of the diagram".into(),
            ));
        }
        Ok(Orientation {
            diagram: d.clone(),
            arrows: set,
        })
    }

    pub fn diagram(&self) -> &DynkinDiagram {
        &self.diagram
    }

    pub fn arrows(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.arrows.iter().copied()
    }

    /// `ε` of the doubled arrow `j → i`.
    pub fn eps(&self, j: Vertex, i: Vertex) -> i64 {
        if self.arrows.contains(&(j, i)) {
            1
        } else {
            -1
        }
    }

    pub fn is_sigma_stable(&self) -> bool {
        let d = &self.diagram;
        self.arrows
            .iter()
            .all(|&(a, b)| self.arrows.contains(&(d.sigma(a), d.sigma(b))))
    }
}

/// A finite-dimensional representation of the double quiver: one matrix
/// `M(j) → M(i)` for every ordered pair of adjacent vertices `(j, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverRep {
    dims: Vec<usize>,
    maps: BTreeMap<(Vertex, Vertex), Matrix>,
}

impl QuiverRep {
    pub fn zero(d: &DynkinDiagram) -> Self {
        Self::with_dims(d, vec![0; d.rank()])
    }

    fn with_dims(d: &DynkinDiagram, dims: Vec<usize>) -> Self {
        let mut maps = BTreeMap::new();
        for (a, b) in d.edges() {
            maps.insert((a, b), Matrix::zeros(dims[b - 1], dims[a - 1]));
            maps.insert((b, a), Matrix::zeros(dims[a - 1], dims[b - 1]));
        }
        QuiverRep { dims, maps }
    }

    /// The simple representation at `v`.
    pub fn simple(d: &DynkinDiagram, v: Vertex) -> Self {
        let mut dims = vec![0; d.rank()];
        dims[v - 1] = 1;
        Self::with_dims(d, dims)
    }

    /// Builds a representation from explicit matrices; missing arrows are
    /// zero. Shapes are checked.
    pub fn from_maps(
        d: &DynkinDiagram,
        dims: Vec<usize>,
        maps: BTreeMap<(Vertex, Vertex), Matrix>,
    ) -> Result<Self> {
        if dims.len() != d.rank() {
            return Err(Error::Precondition(
                "one dimension per vertex is required".into(),
            ));
        }
        let mut rep = Self::with_dims(d, dims);
        for ((j, i), m) in maps {
            let slot = rep
                .maps
                .get_mut(&(j, i))
                .ok_or_else(|| Error::Precondition(format!("no arrow {j}->{i}")))?;
            if (m.rows(), m.cols()) != (slot.rows(), slot.cols()) {
                return Err(Error::Precondition(format!(
                    "map {j}->{i} has the wrong shape"
                )));
            }
            *slot = m;
        }
        Ok(rep)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: Vertex) -> usize {
        self.dims[v - 1]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// The map `M(j) → M(i)`.
    pub fn map(&self, j: Vertex, i: Vertex) -> &Matrix {
        &self.maps[&(j, i)]
    }

    /// The dimension vector as an element of the root lattice.
    pub fn dim_vector(&self, rs: &RootSystem) -> Weight {
        let c: Vec<i64> = self.dims.iter().map(|&x| x as i64).collect();
        rs.from_root_coords(&c)
    }

    /// Checks `Σ_{j→i} ε(j→i) M_{j→i} M_{i→j} = 0` at every vertex.
    pub fn check_relations(&self, o: &Orientation) -> bool {
        let d = o.diagram();
        d.vertices().all(|i| {
            let mut acc = Matrix::zeros(self.dim(i), self.dim(i));
            for &j in d.neighbors(i) {
                let t = self.map(j, i).mul(self.map(i, j));
                acc = acc.add(&t.scale(&crate::linalg::q(o.eps(j, i))));
            }
            acc.is_zero()
        })
    }

    /// `(ε(j→i) M_{j→i})_j : ⊕ M(j) → M(i)`, neighbours in ascending order.
    fn gather(&self, o: &Orientation, i: Vertex) -> Matrix {
        let d = o.diagram();
        let blocks: Vec<Matrix> = d
            .neighbors(i)
            .iter()
            .map(|&j| self.map(j, i).scale(&crate::linalg::q(o.eps(j, i))))
            .collect();
        Matrix::hcat(&blocks, self.dim(i))
    }

    /// `(M_{i→j})_j : M(i) → ⊕ M(j)`.
    fn scatter(&self, o: &Orientation, i: Vertex) -> Matrix {
        let blocks: Vec<Matrix> = o
            .diagram()
            .neighbors(i)
            .iter()
            .map(|&j| self.map(i, j).clone())
            .collect();
        Matrix::vcat(&blocks, self.dim(i))
    }

    fn offsets(&self, d: &DynkinDiagram, i: Vertex) -> Vec<(Vertex, usize, usize)> {
        let mut off = 0;
        d.neighbors(i)
            .iter()
            .map(|&j| {
                let r = (j, off, off + self.dim(j));
                off += self.dim(j);
                r
            })
            .collect()
    }

    /// The reflection functor `Σ_i`. The gather map at `i` must be
    /// surjective.
    pub fn reflect(&self, o: &Orientation, i: Vertex) -> Result<QuiverRep> {
        let d = o.diagram();
        d.check_vertex(i)?;
        let m_in = self.gather(o, i);
        if m_in.rank() != self.dim(i) {
            return Err(Error::NotSurjective(i));
        }
        let m_out = self.scatter(o, i);
        let ker = m_in.kernel();
        let k = ker.dim();
        let mut out = self.clone();
        out.dims[i - 1] = k;
        for (j, lo, hi) in self.offsets(d, i) {
            let into = m_out.mul(self.map(j, i));
            out.maps.insert((j, i), ker.coords(&into));
            out.maps.insert((i, j), ker.basis.row_block(lo, hi));
        }
        Ok(out)
    }

    /// The dual reflection: `M(i)` becomes the cokernel of the scatter map,
    /// which must be injective.
    pub fn coreflect(&self, o: &Orientation, i: Vertex) -> Result<QuiverRep> {
        let d = o.diagram();
        d.check_vertex(i)?;
        let m_out = self.scatter(o, i);
        if m_out.rank() != self.dim(i) {
            return Err(Error::Precondition(format!(
                "scatter map at {i} is not injective"
            )));
        }
        let m_in = self.gather(o, i);
        // rows of p span the left null space of m_out; p restricted to the
        // free columns is the identity, which gives a right inverse
        let left = transpose(&m_out).kernel();
        let p = transpose(&left.basis);
        let c = left.dim();
        let total = m_out.rows();
        let mut right = Matrix::zeros(total, c);
        for (k, &f) in left.free.iter().enumerate() {
            right[(f, k)] = Q::one();
        }
        let g = m_out.mul(&m_in).mul(&right);
        let mut out = self.clone();
        out.dims[i - 1] = c;
        for (j, lo, hi) in self.offsets(d, i) {
            out.maps.insert(
                (j, i),
                p.col_block(lo, hi).scale(&crate::linalg::q(o.eps(j, i))),
            );
            out.maps.insert((i, j), g.row_block(lo, hi));
        }
        Ok(out)
    }

    /// Relabels vertices along `σ`.
    pub fn sigma_relabel(&self, d: &DynkinDiagram) -> QuiverRep {
        let mut dims = vec![0; self.dims.len()];
        for v in d.vertices() {
            dims[d.sigma(v) - 1] = self.dims[v - 1];
        }
        let maps = self
            .maps
            .iter()
            .map(|(&(a, b), m)| ((d.sigma(a), d.sigma(b)), m.clone()))
            .collect();
        QuiverRep { dims, maps }
    }

    pub fn direct_sum(&self, other: &QuiverRep) -> QuiverRep {
        let dims: Vec<usize> = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a + b)
            .collect();
        let mut maps = BTreeMap::new();
        for (&(j, i), a) in &self.maps {
            let b = &other.maps[&(j, i)];
            let top = Matrix::hcat(&[a.clone(), Matrix::zeros(a.rows(), b.cols())], a.rows());
            let bot = Matrix::hcat(&[Matrix::zeros(b.rows(), a.cols()), b.clone()], b.rows());
            maps.insert((j, i), Matrix::vcat(&[top, bot], a.cols() + b.cols()));
        }
        QuiverRep { dims, maps }
    }

    /// The JSON interchange form.
    pub fn to_json(&self, o: &Orientation) -> Value {
        let mut maps = serde_json::Map::new();
        for (s, t) in o.arrows() {
            maps.insert(format!("a({s},{t})"), json!(self.map(s, t).to_strings()));
            maps.insert(
                format!("astar({s},{t})"),
                json!(self.map(t, s).to_strings()),
            );
        }
        json!({ "dims": self.dims, "maps": maps })
    }
}

fn transpose(m: &Matrix) -> Matrix {
    let mut t = Matrix::zeros(m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            t[(j, i)] = m[(i, j)].clone();
        }
    }
    t
}

/// A morphism of representations: one matrix `M(v) → N(v)` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism(pub Vec<Matrix>);

impl Morphism {
    /// `self ∘ first`.
    pub fn after(&self, first: &Morphism) -> Morphism {
        Morphism(self.0.iter().zip(&first.0).map(|(g, f)| g.mul(f)).collect())
    }

    /// All entries, vertex by vertex, row by row.
    pub fn flatten(&self) -> Vec<Q> {
        self.0
            .iter()
            .flat_map(|m| (0..m.rows()).flat_map(move |r| m.row(r).to_vec()))
            .collect()
    }
}

// The linear system `f_i M_{j→i} = N_{j→i} f_j` in the entries of the
// f_v, with f_v[r][k] at off[v-1] + r * dim M(v) + k.
fn hom_system(d: &DynkinDiagram, m: &QuiverRep, n: &QuiverRep) -> (Vec<usize>, Matrix) {
    let mut off = vec![0usize; d.rank() + 1];
    for v in d.vertices() {
        off[v] = off[v - 1] + n.dim(v) * m.dim(v);
    }
    let unknowns = off[d.rank()];
    let idx = |v: Vertex, r: usize, k: usize| off[v - 1] + r * m.dim(v) + k;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for i in d.vertices() {
        for &j in d.neighbors(i) {
            let ma = m.map(j, i);
            let na = n.map(j, i);
            for r in 0..n.dim(i) {
                for c in 0..m.dim(j) {
                    let mut row = vec![Q::zero(); unknowns];
                    for k in 0..m.dim(i) {
                        row[idx(i, r, k)] += &ma[(k, c)];
                    }
                    for k in 0..n.dim(j) {
                        row[idx(j, k, c)] -= &na[(r, k)];
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    (off, Matrix::from_rows(rows, unknowns))
}

/// Dimension of the space of intertwiners `M → N`.
pub fn hom_dim(d: &DynkinDiagram, m: &QuiverRep, n: &QuiverRep) -> usize {
    let (off, sys) = hom_system(d, m, n);
    off[d.rank()] - sys.rank()
}

/// A basis of the intertwiners `M → N`.
pub fn hom_basis(d: &DynkinDiagram, m: &QuiverRep, n: &QuiverRep) -> Vec<Morphism> {
    let (off, sys) = hom_system(d, m, n);
    let ker = sys.kernel();
    (0..ker.dim())
        .map(|c| {
            Morphism(
                d.vertices()
                    .map(|v| {
                        let mut f = Matrix::zeros(n.dim(v), m.dim(v));
                        for r in 0..n.dim(v) {
                            for k in 0..m.dim(v) {
                                f[(r, k)] = ker.basis[(off[v - 1] + r * m.dim(v) + k, c)].clone();
                            }
                        }
                        f
                    })
                    .collect(),
            )
        })
        .collect()
}

/// `dim Hom(M, S_t)`: the codimension of the image of all arrows into `t`.
pub fn hom_to_simple(d: &DynkinDiagram, m: &QuiverRep, t: Vertex) -> usize {
    let blocks: Vec<Matrix> = d
        .neighbors(t)
        .iter()
        .map(|&j| m.map(j, t).clone())
        .collect();
    m.dim(t) - Matrix::hcat(&blocks, m.dim(t)).rank()
}

/// `dim Hom(S_t, M)`: the dimension of the common kernel of all arrows
/// out of `t`.
pub fn hom_from_simple(d: &DynkinDiagram, t: Vertex, m: &QuiverRep) -> usize {
    let blocks: Vec<Matrix> = d
        .neighbors(t)
        .iter()
        .map(|&j| m.map(t, j).clone())
        .collect();
    m.dim(t) - Matrix::vcat(&blocks, m.dim(t)).rank()
}

/// The layer module `Σ_{w_1} ⋯ Σ_{w_{k-1}}(S_{w_k})` (1-based `k`).
pub fn layer(o: &Orientation, word: &[Vertex], k: usize) -> Result<QuiverRep> {
    if k == 0 || k > word.len() {
        return Err(Error::Precondition(format!(
            "layer index {k} outside 1..={}",
            word.len()
        )));
    }
    let d = o.diagram();
    let mut m = QuiverRep::simple(d, word[k - 1]);
    for &v in word[..k - 1].iter().rev() {
        m = m.reflect(o, v)?;
    }
    Ok(m)
}

/// All layer modules of a word, in order.
pub fn layers(o: &Orientation, word: &[Vertex]) -> Result<Vec<QuiverRep>> {
    (1..=word.len()).map(|k| layer(o, word, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn setup(s: &str) -> (Arc<RootSystem>, Orientation) {
        let rs = Arc::new(RootSystem::parse(s).unwrap());
        let o = Orientation::base(rs.diagram());
        (rs, o)
    }

    #[test]
    fn base_orientations_are_sigma_stable() {
        for s in ["A3", "A5^2", "D4^3", "D4^3'", "D5^2", "E6^2", "E7", "E8"] {
            let d: DynkinDiagram = s.parse().unwrap();
            assert!(Orientation::base(&d).is_sigma_stable(), "{s}");
        }
        let d: DynkinDiagram = "D4".parse().unwrap();
        let o = Orientation::base(&d);
        assert_eq!(o.arrows().collect::<Vec<_>>(), vec![(1, 2), (3, 2), (4, 2)]);
    }

    #[test]
    fn simples() {
        let (rs, o) = setup("A3");
        let d = rs.diagram();
        for i in 1..=3 {
            let s = QuiverRep::simple(d, i);
            assert_eq!(s.dim_vector(&rs), rs.simple_root(i));
            assert!(s.check_relations(&o));
            for j in 1..=3 {
                assert_eq!(hom_dim(d, &s, &QuiverRep::simple(d, j)), (i == j) as usize);
            }
        }
        assert!(QuiverRep::zero(d).check_relations(&o));
    }

    #[test]
    fn reflection_of_a_neighbouring_simple() {
        let (rs, o) = setup("A3");
        let d = rs.diagram();
        let m = QuiverRep::simple(d, 2).reflect(&o, 1).unwrap();
        assert_eq!(m.dims(), &[1, 1, 0]);
        assert_eq!(m.map(1, 2).rank(), 1);
        assert!(m.map(2, 1).is_zero());
        assert!(m.check_relations(&o));
        assert_eq!(
            QuiverRep::simple(d, 1).reflect(&o, 1),
            Err(Error::NotSurjective(1))
        );
        let far = QuiverRep::simple(d, 3);
        assert_eq!(far.reflect(&o, 1).unwrap(), far);
    }

    #[test]
    fn layers_have_beta_dimension_vectors() {
        let (rs, o) = setup("A3");
        let w = [3, 2, 1, 2, 3, 2];
        let b = rs.beta_roots(&w).roots;
        for (k, m) in layers(&o, &w).unwrap().iter().enumerate() {
            assert_eq!(m.dim_vector(&rs), b[k]);
            assert!(m.check_relations(&o));
            assert_eq!(hom_dim(rs.diagram(), m, m), 1);
        }
        assert_eq!(
            layer(&o, &w, 1).unwrap(),
            QuiverRep::simple(rs.diagram(), 3)
        );
    }

    #[test]
    fn simple_hom_shortcuts_agree() {
        let (rs, o) = setup("D4");
        let d = rs.diagram();
        let w = rs.longest_word().to_vec();
        for m in layers(&o, &w).unwrap() {
            for t in d.vertices() {
                let s = QuiverRep::simple(d, t);
                assert_eq!(hom_to_simple(d, &m, t), hom_dim(d, &m, &s));
                assert_eq!(hom_from_simple(d, t, &m), hom_dim(d, &s, &m));
            }
        }
    }

    #[test]
    fn coreflection_undoes_reflection() {
        let (rs, o) = setup("A4");
        let d = rs.diagram();
        let m = layer(&o, &[2, 1, 3, 2], 4).unwrap();
        let r = m.reflect(&o, 4).unwrap();
        let back = r.coreflect(&o, 4).unwrap();
        assert_eq!(back.dims(), m.dims());
        assert!(back.check_relations(&o));
        assert_eq!(hom_dim(d, &back, &m), 1);
        assert_eq!(hom_dim(d, &m, &back), 1);
    }

    #[test]
    fn json_shape() {
        let (rs, o) = setup("A2");
        let m = QuiverRep::simple(rs.diagram(), 2).reflect(&o, 1).unwrap();
        let v = m.to_json(&o);
        assert_eq!(v["dims"], json!([1, 1]));
        assert!(v["maps"]["a(1,2)"].is_array());
        assert!(v["maps"]["astar(1,2)"].is_array());
    }
}
