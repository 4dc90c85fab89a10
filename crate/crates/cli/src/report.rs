//! Rendering of command results as text, JSON, DOT or TSV.

use std::fmt::Write;

use anyhow::{bail, Result};
use serde_json::{json, Value};

use arcat::check::{run_all, Scope};
use arcat::qcm::{default_truncation, three_way};
use arcat::{Category, CommClass, QDatum, Quiver};

use crate::input::Input;
use crate::{Format, Output, Window};

fn unsupported(cmd: &str, fmt: Format) -> anyhow::Error {
    anyhow::anyhow!("{cmd} has no {fmt:?} output")
}

fn json_out(v: Value) -> Result<Output> {
    Ok(Output::ok(serde_json::to_string_pretty(&v)? + "\n"))
}

/// Columns padded for reading (text) or joined by tabs (TSV).
fn table(head: &[&str], rows: &[Vec<String>], fmt: Format) -> String {
    let mut s = String::new();
    if fmt == Format::Tsv {
        writeln!(s, "{}", head.join("\t")).unwrap();
        for r in rows {
            writeln!(s, "{}", r.join("\t")).unwrap();
        }
        return s;
    }
    let mut w: Vec<usize> = head.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            w[i] = w[i].max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&w)
            .map(|(c, &n)| format!("{c:<n$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    writeln!(s, "{}", line(head.to_vec())).unwrap();
    for r in rows {
        writeln!(s, "{}", line(r.iter().map(String::as_str).collect())).unwrap();
    }
    s
}

fn compact(v: &[i64]) -> String {
    let body: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("[{}]", body.join(","))
}

fn root(cls: &CommClass, k: i64) -> Vec<i64> {
    cls.root_system()
        .root_coords(&cls.root_at(k))
        .expect("roots lie in the root lattice")
}

fn label(input: &Input, k: i64) -> String {
    match input.datum() {
        Some(q) => q.vertex_of_index(k).to_string(),
        None => k.to_string(),
    }
}

fn window(w: Window, lo: i64, hi: i64) -> Result<(i64, i64)> {
    let (lo, hi) = (w.lo.unwrap_or(lo), w.hi.unwrap_or(hi));
    if lo > hi {
        bail!("empty window [{lo}, {hi}]");
    }
    Ok((lo, hi))
}

pub fn class(c: &CommClass, fmt: Format) -> Result<Output> {
    let rs = c.root_system();
    let n = c.n();
    let ends = |f: &dyn Fn(usize) -> i64| -> Vec<(usize, i64)> {
        rs.diagram().vertices().map(|v| (v, f(v))).collect()
    };
    let inj = ends(&|v| c.injective_index(v));
    let proj = ends(&|v| c.projective_index(v));
    match fmt {
        Format::Dot => Ok(Output::ok(Quiver::ar_quiver(c).to_dot("ar"))),
        Format::Json => {
            let ends_json = |e: &[(usize, i64)]| -> Vec<Value> {
                e.iter()
                    .map(|&(v, k)| json!({"vertex": v, "index": k, "root": root(c, k)}))
                    .collect()
            };
            json_out(json!({
                "diagram": rs.diagram().to_string(),
                "canon": c.canon(),
                "residues": (1..=n).map(|k| c.letter(k)).collect::<Vec<_>>(),
                "roots": (1..=n).map(|k| root(c, k)).collect::<Vec<_>>(),
                "injectives": ends_json(&inj),
                "projectives": ends_json(&proj),
                "quiver": Quiver::ar_quiver(c).to_json(),
            }))
        }
        Format::Text | Format::Tsv => {
            let rows: Vec<Vec<String>> = (1..=n)
                .map(|k| {
                    let v = c.letter(k);
                    let mut role = Vec::new();
                    if c.injective_index(v) == k {
                        role.push("injective");
                    }
                    if c.projective_index(rs.star(v)) == k {
                        role.push("projective");
                    }
                    vec![
                        k.to_string(),
                        v.to_string(),
                        compact(&root(c, k)),
                        role.join(","),
                    ]
                })
                .collect();
            let t = table(&["index", "residue", "root", "role"], &rows, fmt);
            if fmt == Format::Tsv {
                return Ok(Output::ok(t));
            }
            let mut s = String::new();
            writeln!(s, "diagram {}, N = {n}", rs.diagram()).unwrap();
            let canon: Vec<String> = c.canon().iter().map(|v| v.to_string()).collect();
            writeln!(s, "canonical word: {}", canon.join(" ")).unwrap();
            s.push_str(&t);
            let arrows: Vec<String> = c
                .ar_quiver()
                .iter()
                .map(|(a, b)| format!("{a}->{b}"))
                .collect();
            writeln!(s, "arrows: {}", arrows.join(" ")).unwrap();
            Ok(Output::ok(s))
        }
    }
}

pub fn qdatum(q: &QDatum, fmt: Format) -> Result<Output> {
    let rs = q.root_system();
    let cat = Category::new(q.class().clone());
    let gamma: Vec<(String, Vec<i64>)> = rs
        .diagram()
        .vertices()
        .map(|v| {
            (
                format!("γ_{v}"),
                rs.root_coords(&q.gamma(v)).expect("γ is a root"),
            )
        })
        .collect();
    let mut rows = Vec::new();
    for x in q.gamma_vertices() {
        let k = q.index_of(x)?;
        let psi = rs.root_coords(&q.psi(x)?).expect("ψ is a root");
        let dims: Vec<i64> = cat.module(k)?.dims().iter().map(|&d| d as i64).collect();
        rows.push((x, k, psi, dims));
    }
    let order = q.tau().order(4 * q.rh() as usize);
    match fmt {
        Format::Dot => Ok(Output::ok(Quiver::gamma(q)?.to_dot("gamma"))),
        Format::Json => json_out(json!({
            "diagram": q.diagram().to_string(),
            "type": q.folded_type().to_string(),
            "r": q.r(),
            "h_dual": q.h_dual(),
            "xi": q.xi(),
            "sources": q.sources(),
            "sinks": q.sinks(),
            "class": q.class().canon(),
            "gamma": gamma.iter().map(|(_, c)| c).collect::<Vec<_>>(),
            "tau_word": q.tau_word(),
            "tau_matrix": q.tau().rows(),
            "tau_order": order,
            "objects": rows.iter().map(|(x, k, psi, dims)| json!({
                "vertex": [x.v, x.p], "index": k, "psi": psi, "dims": dims,
            })).collect::<Vec<_>>(),
            "quiver": Quiver::gamma(q)?.to_json(),
        })),
        Format::Text | Format::Tsv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|(x, k, psi, dims)| {
                    vec![x.to_string(), k.to_string(), compact(psi), compact(dims)]
                })
                .collect();
            let t = table(&["vertex", "index", "psi", "dims"], &body, fmt);
            if fmt == Format::Tsv {
                return Ok(Output::ok(t));
            }
            let mut s = String::new();
            writeln!(s, "diagram {} (type {})", q.diagram(), q.folded_type()).unwrap();
            writeln!(s, "r = {}, h^∨ = {}, rh^∨ = {}", q.r(), q.h_dual(), q.rh()).unwrap();
            writeln!(s, "xi = {}", compact(q.xi())).unwrap();
            writeln!(s, "sources {:?}, sinks {:?}", q.sources(), q.sinks()).unwrap();
            let canon: Vec<String> = q.class().canon().iter().map(|v| v.to_string()).collect();
            writeln!(s, "class: {}", canon.join(" ")).unwrap();
            for (name, c) in &gamma {
                writeln!(s, "{name} = {}", compact(c)).unwrap();
            }
            writeln!(s, "tau = {}", q.tau_word()).unwrap();
            for r in q.tau().rows() {
                writeln!(s, "  {}", compact(r)).unwrap();
            }
            match order {
                Some(o) => writeln!(s, "tau order {o}").unwrap(),
                None => writeln!(s, "tau order unknown").unwrap(),
            }
            s.push_str(&t);
            Ok(Output::ok(s))
        }
    }
}

pub fn objects(input: &Input, w: Window, fmt: Format) -> Result<Output> {
    let cat = Category::new(input.class().clone());
    let (lo, hi) = window(w, 1, cat.n())?;
    let mut rows = Vec::new();
    let mut js = Vec::new();
    for k in lo..=hi {
        let x = cat.object(k);
        let m = cat.module(k)?;
        let dims: Vec<i64> = m.dims().iter().map(|&d| d as i64).collect();
        let r = root(input.class(), k);
        if fmt == Format::Json {
            js.push(json!({
                "index": k, "label": label(input, k), "root": r, "level": x.coord.level,
                "residue": input.class().letter(k), "module": m.to_json(cat.orientation()),
            }));
        }
        rows.push(vec![
            k.to_string(),
            label(input, k),
            x.coord.level.to_string(),
            input.class().letter(k).to_string(),
            compact(&r),
            compact(&dims),
        ]);
    }
    match fmt {
        Format::Json => json_out(Value::Array(js)),
        Format::Dot => Err(unsupported("objects", fmt)),
        _ => Ok(Output::ok(table(
            &["index", "label", "level", "residue", "root", "dims"],
            &rows,
            fmt,
        ))),
    }
}

pub fn euler(input: &Input, w: Window, fmt: Format) -> Result<Output> {
    let cat = Category::new(input.class().clone());
    let (lo, hi) = window(w, 1, cat.n())?;
    let ks: Vec<i64> = (lo..=hi).collect();
    let matrix: Vec<Vec<i64>> = ks
        .iter()
        .map(|&a| ks.iter().map(|&b| cat.euler(a, b).euler).collect())
        .collect();
    let labels: Vec<String> = ks.iter().map(|&k| label(input, k)).collect();
    match fmt {
        Format::Json => json_out(json!({
            "objects": ks.iter().map(|&k| json!({
                "index": k, "label": label(input, k), "coord": cat.object(k).coord,
            })).collect::<Vec<_>>(),
            "matrix": matrix,
        })),
        Format::Dot => Err(unsupported("euler", fmt)),
        _ => {
            let mut head = vec!["<M,N>"];
            head.extend(labels.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = matrix
                .iter()
                .zip(&labels)
                .map(|(r, l)| {
                    std::iter::once(l.clone())
                        .chain(r.iter().map(i64::to_string))
                        .collect()
                })
                .collect();
            Ok(Output::ok(table(&head, &rows, fmt)))
        }
    }
}

pub fn mesh(input: &Input, w: Window, fmt: Format) -> Result<Output> {
    let cat = Category::new(input.class().clone());
    let n = cat.n();
    let (lo, hi) = window(w, 1 - n, n)?;
    let mut ok = true;
    let mut rows = Vec::new();
    let mut js = Vec::new();
    for k in lo..=hi {
        let rep = cat.verify_mesh_triangles(k)?;
        let g = match input.datum() {
            Some(q) => Some(q.g_additive_check(q.vertex_of_index(k))?),
            None => None,
        };
        ok &= rep.ok() && g != Some(false);
        let ab: Vec<String> = rep.abutters.iter().map(|&a| label(input, a)).collect();
        rows.push(vec![
            label(input, k),
            label(input, rep.source),
            ab.join(","),
            rep.additive.to_string(),
            rep.telescopes.to_string(),
            rep.witnesses.to_string(),
            g.map_or("-".into(), |b| b.to_string()),
        ]);
        js.push(json!({"report": rep, "g_additive": g}));
    }
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&js)? + "\n",
        Format::Dot => return Err(unsupported("mesh", fmt)),
        _ => {
            let head = [
                "sink",
                "source",
                "abutters",
                "additive",
                "telescopes",
                "witnesses",
                "g_additive",
            ];
            table(&head, &rows, fmt)
        }
    };
    Ok(Output { body, ok })
}

pub fn frieze(input: &Input, w: Window, fmt: Format) -> Result<Output> {
    let c = input.class();
    let n = c.n();
    let (lo, hi) = window(w, 1 - n, 2 * n)?;
    let len = (hi - lo + 1) as usize;
    let vs: Vec<usize> = c.diagram().vertices().collect();
    let fs: Vec<_> = vs.iter().map(|&v| c.frieze_basis(v, lo, len)).collect();
    let mut additive = Vec::new();
    for f in &fs {
        additive.push(if len as i64 >= 2 * n {
            Some(c.is_additive_frieze(f)?)
        } else {
            None
        });
    }
    let anti = fs
        .iter()
        .all(|f| (lo..=hi - n).all(|k| f.at(k + n) == -f.at(k)));
    let (order, m) = c.injective_matrix();
    let unitri = m.iter().enumerate().all(|(a, r)| {
        r.iter()
            .enumerate()
            .all(|(b, &x)| if a == b { x == 1 } else { a < b || x == 0 })
    });
    let ok = anti && unitri && additive.iter().all(|a| *a != Some(false));
    let body = match fmt {
        Format::Json => {
            let v = json!({
                "start": lo,
                "friezes": vs.iter().zip(&fs).map(|(v, f)| json!({"vertex": v, "values": f.values})).collect::<Vec<_>>(),
                "additive": additive,
                "anti_periodic": anti,
                "injective_order": order,
                "injective_matrix": m,
                "unitriangular": unitri,
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Dot => return Err(unsupported("frieze", fmt)),
        _ => {
            let names: Vec<String> = vs.iter().map(|v| format!("rho_{v}")).collect();
            let mut head = vec!["index", "residue"];
            head.extend(names.iter().map(String::as_str));
            let rows: Vec<Vec<String>> = (lo..=hi)
                .map(|k| {
                    let mut r = vec![label(input, k), c.letter(k).to_string()];
                    r.extend(fs.iter().map(|f| f.at(k).to_string()));
                    r
                })
                .collect();
            let mut s = table(&head, &rows, fmt);
            if fmt == Format::Text {
                let add: Vec<String> = vs
                    .iter()
                    .zip(&additive)
                    .map(|(v, a)| format!("{v}:{}", a.map_or("-".into(), |b| b.to_string())))
                    .collect();
                writeln!(s, "additive {}", add.join(" ")).unwrap();
                writeln!(s, "anti-periodic {anti}").unwrap();
                writeln!(
                    s,
                    "injective matrix unitriangular {unitri} (order {order:?})"
                )
                .unwrap();
            }
            s
        }
    };
    Ok(Output { body, ok })
}

pub fn qcm(q: &QDatum, u: Option<i64>, fmt: Format) -> Result<Output> {
    let u = u.unwrap_or_else(|| default_truncation(q.folded_type()));
    if u < 0 {
        bail!("--U must be nonnegative");
    }
    let rows = three_way(q, u)?;
    let ok = rows.iter().all(|r| r.agree());
    let body = match fmt {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|r| {
                    json!({
                        "i": r.i, "j": r.j, "u": r.u, "ctilde_oracle": r.oracle,
                        "ctilde_FO": r.fo, "ctilde_cat": r.cat, "agree": r.agree(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Dot => return Err(unsupported("qcm", fmt)),
        _ => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.i.to_string(),
                        r.j.to_string(),
                        r.u.to_string(),
                        r.oracle.to_string(),
                        r.fo.to_string(),
                        r.cat.map_or("-".into(), |c| c.to_string()),
                        r.agree().to_string(),
                    ]
                })
                .collect();
            let head = [
                "i",
                "j",
                "u",
                "ctilde_oracle",
                "ctilde_FO",
                "ctilde_cat",
                "agree",
            ];
            table(&head, &body, Format::Tsv)
        }
    };
    Ok(Output { body, ok })
}

pub fn check(scope: Scope, seed: u64, fmt: Format) -> Result<Output> {
    let reports = run_all(scope, seed);
    let ok = reports.iter().all(|r| r.passed());
    let body = match fmt {
        Format::Json => {
            serde_json::to_string_pretty(&json!({"seed": seed, "suites": reports}))? + "\n"
        }
        Format::Dot => return Err(unsupported("check", fmt)),
        _ => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| match &r.failure {
                    None => vec![
                        r.scope.to_string(),
                        "pass".into(),
                        r.cases.to_string(),
                        String::new(),
                    ],
                    Some(e) => vec![r.scope.to_string(), "FAIL".into(), "-".into(), e.clone()],
                })
                .collect();
            let mut s = table(&["suite", "status", "cases", "counterexample"], &rows, fmt);
            if fmt == Format::Text {
                let passed = reports.iter().filter(|r| r.passed()).count();
                writeln!(s, "{passed}/{} suites passed (seed {seed})", reports.len()).unwrap();
            }
            s
        }
    };
    Ok(Output { body, ok })
}
