//! JSON and DOT export of quivers on coordinates.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::commclass::CommClass;
use crate::error::Result;
use crate::qdatum::QDatum;
use crate::rootsys::Vertex;

/// A vertex of an exported quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuiverVertex {
    pub index: i64,
    pub root: Vec<i64>,
    pub level: i64,
    pub residue: Vertex,
    /// Horizontal position: larger columns are drawn further right.
    #[serde(skip)]
    pub column: i64,
    #[serde(skip)]
    pub label: String,
}

/// A finite quiver with arrows given as positions in `vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub vertices: Vec<QuiverVertex>,
    pub arrows: Vec<(usize, usize)>,
}

fn root_label(cls: &CommClass, k: i64) -> String {
    let rs = cls.root_system();
    let c = rs
        .root_coords(&cls.root_at(k))
        .expect("roots lie in the root lattice");
    let sign = if c.iter().any(|&x| x < 0) { "-" } else { "" };
    let body: Vec<String> = c.iter().map(|x| x.abs().to_string()).collect();
    format!("{sign}{}", body.join(""))
}

impl Quiver {
    /// The repetition quiver on the index window `[lo, hi]`. Indices are
    /// drawn right to left so that arrows point left.
    pub fn from_window(cls: &CommClass, lo: i64, hi: i64) -> Quiver {
        let rs = cls.root_system();
        let vertices = (lo..=hi)
            .map(|k| {
                let x = cls.coord(k);
                QuiverVertex {
                    index: k,
                    root: rs.root_coords(&x.root).expect("root lattice"),
                    level: x.level,
                    residue: cls.letter(k),
                    column: hi - k,
                    label: format!("{} @{}", root_label(cls, k), x.level),
                }
            })
            .collect();
        let arrows = cls
            .window_arrows(lo, hi)
            .into_iter()
            .map(|(a, b)| ((a - lo) as usize, (b - lo) as usize))
            .collect();
        Quiver { vertices, arrows }
    }

    /// The combinatorial AR quiver of the class.
    pub fn ar_quiver(cls: &CommClass) -> Quiver {
        Self::from_window(cls, 1, cls.n())
    }

    /// `Γ_Q` drawn by height, with the roots of `[Q]`.
    pub fn gamma(q: &QDatum) -> Result<Quiver> {
        let cls = q.class();
        let rs = q.root_system();
        let verts = q.gamma_vertices();
        let mut vertices = Vec::with_capacity(verts.len());
        for &x in &verts {
            let k = q.index_of(x)?;
            let c = cls.coord(k);
            vertices.push(QuiverVertex {
                index: k,
                root: rs.root_coords(&c.root).expect("root lattice"),
                level: c.level,
                residue: x.v,
                column: x.p,
                label: format!("{x} {}", root_label(cls, k)),
            });
        }
        let pos = |x| {
            verts
                .iter()
                .position(|&y| y == x)
                .expect("arrow ends lie in the quiver")
        };
        let arrows = q
            .gamma_arrows()
            .into_iter()
            .map(|(a, b)| (pos(a), pos(b)))
            .collect();
        Ok(Quiver { vertices, arrows })
    }

    /// A quiver on the level-0 indices with the given arrows.
    pub fn on_level_zero(cls: &CommClass, arrows: &[(i64, i64)]) -> Quiver {
        let mut q = Self::ar_quiver(cls);
        q.arrows = arrows
            .iter()
            .map(|&(a, b)| ((a - 1) as usize, (b - 1) as usize))
            .collect();
        q
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices.iter().map(|v| json!({
                "index": v.index,
                "root": v.root,
                "level": v.level,
                "residue": v.residue,
            })).collect::<Vec<_>>(),
            "arrows": self.arrows,
        })
    }

    /// DOT with one row per residue and columns by position.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        writeln!(s, "digraph {name} {{").unwrap();
        writeln!(s, "  node [shape=plaintext];").unwrap();
        for (n, v) in self.vertices.iter().enumerate() {
            writeln!(
                s,
                "  v{n} [label=\"{}\", pos=\"{},{}!\"];",
                v.label,
                v.column,
                -(v.residue as i64)
            )
            .unwrap();
        }
        let mut residues: Vec<Vertex> = self.vertices.iter().map(|v| v.residue).collect();
        residues.sort_unstable();
        residues.dedup();
        for r in residues {
            let members: Vec<String> = self
                .vertices
                .iter()
                .enumerate()
                .filter(|(_, v)| v.residue == r)
                .map(|(n, _)| format!("v{n}"))
                .collect();
            writeln!(s, "  {{ rank=same; {} }}", members.join("; ")).unwrap();
        }
        for &(a, b) in &self.arrows {
            writeln!(s, "  v{a} -> v{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;
    use std::sync::Arc;

    #[test]
    fn a3_ar_quiver_export() {
        let rs = Arc::new(RootSystem::parse("A3").unwrap());
        let c = CommClass::new(&rs, &[3, 2, 1, 2, 3, 2]).unwrap();
        let q = Quiver::ar_quiver(&c);
        assert_eq!(q.vertices.len(), 6);
        let j = q.to_json();
        assert_eq!(j["vertices"][0]["root"], json!([0, 0, 1]));
        assert_eq!(j["vertices"][0]["residue"], json!(3));
        let dot = q.to_dot("ar");
        assert!(dot.starts_with("digraph ar {"));
        assert_eq!(dot.matches(" -> ").count(), q.arrows.len());
    }
}
