//! Subcommands, generic over the scalar field.

use std::sync::Arc;

use anyhow::{bail, Result};
use serde_json::{json, Value};
use soergel::coxeter::{CoxeterSystem, Enumeration, GroupTable};
use soergel::hecke::{HeckeAlgebra, KlCoords, LaurentPoly};
use soergel::hodge::{check_hard_lefschetz, check_hodge_riemann, default_zeta_grid, normalize_form, zeta_sweep, LefschetzDatum};
use soergel::rouquier::concentration_check;
use soergel::soergel::SoergelContext;
use soergel::Scalar;

use crate::config::{format_word, parse_word, parse_zeta_grid, GroupSource};

/// Groups larger than this get module checks capped at [`DEFAULT_MODULE_CAP`].
pub const LARGE_GROUP: usize = 48;
pub const DEFAULT_MODULE_CAP: usize = 8;
/// Default bound on `l(ws)` for zeta sweeps in large groups.
pub const DEFAULT_SWEEP_CAP: usize = 7;

pub struct Output {
    pub json: Value,
    pub tsv: String,
    pub passed: bool,
}

#[derive(Clone, Debug)]
pub struct Settings {
    pub max_length: Option<usize>,
    pub seed: u64,
    pub zeta_grid: Option<String>,
}

pub struct Group<F: Scalar> {
    pub name: String,
    pub sys: Arc<CoxeterSystem<F>>,
    pub enumeration: Enumeration<F>,
    pub table: Arc<GroupTable>,
    pub hecke: HeckeAlgebra,
    pub finite: bool,
    pub settings: Settings,
}

const ELEMENT_CAP: usize = 200_000;

impl<F: Scalar> Group<F> {
    pub fn load(source: &GroupSource, settings: Settings) -> Result<Group<F>> {
        let sys: CoxeterSystem<F> = match source {
            GroupSource::Preset(p) => p.build()?,
            GroupSource::File(f) => CoxeterSystem::build(f.coxeter_matrix()?, f.realization()?)?,
        };
        let finite = sys.is_finite();
        if !finite && settings.max_length.is_none() {
            bail!("infinite group needs --max-length");
        }
        let bound = if finite { None } else { settings.max_length };
        let enumeration = sys.enumerate(bound, ELEMENT_CAP)?;
        let table = Arc::new(enumeration.table.clone());
        let hecke = HeckeAlgebra::new(table.clone());
        Ok(Group { name: source.name(), sys: Arc::new(sys), enumeration, table, hecke, finite, settings })
    }

    pub fn word(&self, w: usize) -> String {
        format_word(self.table.word(w))
    }

    /// Elements of length at most `max_length` (and `cap`), in table order.
    pub fn elements(&self, cap: Option<usize>) -> Vec<usize> {
        let bound = match (self.settings.max_length, cap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        (0..self.table.len()).filter(|&w| bound.is_none_or(|b| self.table.length(w) <= b)).collect()
    }

    /// Length bound for module level checks.
    pub fn module_cap(&self) -> Option<usize> {
        match self.settings.max_length {
            Some(l) => Some(l),
            None if self.table.len() > LARGE_GROUP => Some(DEFAULT_MODULE_CAP),
            None => None,
        }
    }

    /// Length bound on `ws` for zeta sweeps.
    pub fn sweep_cap(&self) -> Option<usize> {
        match self.settings.max_length {
            Some(l) => Some(l),
            None if self.table.len() > LARGE_GROUP => Some(DEFAULT_SWEEP_CAP),
            None => None,
        }
    }

    pub fn context(&self) -> Result<SoergelContext<F>> {
        if !self.finite {
            bail!("module level computations need a finite group");
        }
        Ok(SoergelContext::new(self.sys.clone(), self.table.clone(), self.settings.seed)?)
    }

    pub fn zeta_grid(&self) -> Result<Vec<F>> {
        match &self.settings.zeta_grid {
            Some(g) => parse_zeta_grid(g),
            None => Ok(default_zeta_grid()),
        }
    }

    pub fn parse_word(&self, text: &str) -> Result<Vec<usize>> {
        parse_word(text, self.sys.rank())
    }

    pub fn coords_json(&self, c: &KlCoords) -> Value {
        Value::Array(c.iter().map(|(&z, p)| json!({ "w": self.word(z), "poly": p.to_sparse() })).collect())
    }
}

pub fn is_nonneg_poly(p: &LaurentPoly) -> bool {
    p.is_polynomial() && p.has_nonnegative_coeffs()
}

fn table_output(header: &str, rows: Vec<Vec<String>>, keys: &[&str], passed: bool, extra: Value) -> Output {
    let mut tsv = String::from(header);
    tsv.push('\n');
    for r in &rows {
        tsv.push_str(&r.join("\t"));
        tsv.push('\n');
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| Value::Object(keys.iter().zip(r).map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect()))
        .collect();
    let mut json = json!({ "rows": json_rows, "passed": passed });
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Output { json, tsv, passed }
}

pub fn kl<F: Scalar>(g: &Group<F>) -> Output {
    let mut rows = Vec::new();
    let mut passed = true;
    for w in g.elements(None) {
        for (y, p) in g.hecke.kl_basis_element(w).terms() {
            passed &= is_nonneg_poly(p);
            rows.push(vec![g.word(y), g.word(w), p.to_sparse()]);
        }
    }
    table_output("y\tw\tpoly", rows, &["y", "w", "poly"], passed, json!({ "group": g.name }))
}

pub fn inverse_kl<F: Scalar>(g: &Group<F>) -> Output {
    let mut rows = Vec::new();
    let mut passed = true;
    for w in g.elements(None) {
        for (y, p) in g.hecke.inverse_kl(w) {
            let sign = if (g.table.length(w) - g.table.length(y)).is_multiple_of(2) { 1 } else { -1 };
            passed &= is_nonneg_poly(&p.scale(sign));
            rows.push(vec![g.word(y), g.word(w), p.to_sparse()]);
        }
    }
    table_output("y\tw\tpoly", rows, &["y", "w", "poly"], passed, json!({ "group": g.name }))
}

/// `(x, y, mu_{x,y})` for every pair inside the length range.
pub fn mu_products<F: Scalar>(g: &Group<F>) -> Vec<(usize, usize, KlCoords)> {
    let elems = g.elements(None);
    let mut out = Vec::new();
    for &x in &elems {
        let table = g.hecke.mu_table(x);
        for &y in &elems {
            if let Some(c) = &table[y] {
                out.push((x, y, c.clone()));
            }
        }
    }
    out
}

pub fn mu<F: Scalar>(g: &Group<F>) -> Output {
    let mut rows = Vec::new();
    let mut passed = true;
    for (x, y, c) in mu_products(g) {
        for (z, p) in c {
            passed &= p.has_nonnegative_coeffs();
            rows.push(vec![g.word(x), g.word(y), g.word(z), p.to_sparse()]);
        }
    }
    table_output("x\ty\tz\tpoly", rows, &["x", "y", "z", "poly"], passed, json!({ "group": g.name }))
}

pub fn unimodality<F: Scalar>(g: &Group<F>) -> Output {
    let mut rows = Vec::new();
    let mut passed = true;
    for (x, y, c) in mu_products(g) {
        let r = g.hecke.unimodality_from(x, y, &c);
        passed &= r.passed();
        for (z, d) in &r.decompositions {
            let parts = d.parts.iter().map(|(m, k)| format!("[{m}]x{k}")).collect::<Vec<_>>().join(" ");
            rows.push(vec![g.word(x), g.word(y), g.word(*z), d.poly.to_sparse(), parts, d.ok.to_string()]);
        }
    }
    table_output(
        "x\ty\tz\tpoly\tquantum\tok",
        rows,
        &["x", "y", "z", "poly", "quantum", "ok"],
        passed,
        json!({ "group": g.name }),
    )
}

pub fn decompose<F: Scalar>(g: &Group<F>, word: &str) -> Result<Output> {
    let word = g.parse_word(word)?;
    let ctx = g.context()?;
    let (json, passed) = match ctx.decomposition_report(&g.hecke, &word) {
        Ok(r) => {
            let summands: Vec<Value> = r
                .summands
                .iter()
                .map(|s| json!({ "label": format_word(&s.label_word), "shift": s.shift, "graded_dims": s.graded_dims }))
                .collect();
            let json = json!({
                "word": format_word(&word),
                "summands": summands,
                "observed": g.coords_json(&r.observed),
                "predicted": g.coords_json(&r.predicted),
                "match": r.matches,
                "idempotents_complete": r.idempotents_complete,
            });
            (json, r.passed())
        }
        Err(e) => (json!({ "word": format_word(&word), "error": e.to_string(), "match": false }), false),
    };
    let mut tsv = String::from("label\tshift\tgraded_dims\n");
    for s in json["summands"].as_array().into_iter().flatten() {
        tsv.push_str(&format!("{}\t{}\t{}\n", s["label"].as_str().unwrap_or(""), s["shift"], s["graded_dims"]));
    }
    tsv.push_str(&format!("match\t{passed}\n"));
    Ok(Output { json, tsv, passed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verify {
    HardLefschetz,
    HodgeRiemann,
    Sweep,
}

/// Hard Lefschetz or Hodge–Riemann for the extracted `B_w` of one element.
pub fn verify_element<F: Scalar>(g: &Group<F>, ctx: &SoergelContext<F>, w: usize, which: Verify) -> Value {
    let rho = &g.sys.realization().rho;
    let summand = match ctx.extract(w) {
        Ok(s) => s,
        Err(e) => return json!({ "w": g.word(w), "verdict": false, "failure_witness": e.to_string() }),
    };
    let datum = LefschetzDatum::from_module(&summand.module, rho);
    match which {
        Verify::HardLefschetz => {
            let r = check_hard_lefschetz(&datum);
            let witness = (!r.passed()).then(|| {
                r.failures.iter().map(|f| json!({ "i": f.i, "rank": f.rank, "dim_low": f.dim_low, "dim_high": f.dim_high })).collect::<Vec<_>>()
            });
            json!({ "w": g.word(w), "degrees": datum.dims, "verdict": r.passed(), "failure_witness": witness })
        }
        Verify::HodgeRiemann => match normalize_form(&datum) {
            Ok((nd, sign)) => {
                let r = check_hodge_riemann(&nd);
                let bad: Vec<_> = r.entries.iter().filter(|e| !e.passed).collect();
                json!({
                    "w": g.word(w),
                    "degrees": nd.dims,
                    "normalization_sign": sign,
                    "verdict": r.passed(),
                    "signatures": r.entries,
                    "failure_witness": (!bad.is_empty()).then_some(bad),
                })
            }
            Err(e) => json!({ "w": g.word(w), "verdict": false, "failure_witness": e.to_string() }),
        },
        Verify::Sweep => unreachable!("sweeps run per pair"),
    }
}

/// `(w, s)` with `ws > w` and `l(ws)` inside the sweep range.
pub fn sweep_pairs<F: Scalar>(g: &Group<F>) -> Vec<(usize, usize)> {
    let cap = g.sweep_cap();
    let mut out = Vec::new();
    for w in 0..g.table.len() {
        for s in 0..g.sys.rank() {
            let Some(ws) = g.table.right_mult(w, s) else { continue };
            if g.table.length(ws) > g.table.length(w) && cap.is_none_or(|c| g.table.length(ws) <= c) {
                out.push((w, s));
            }
        }
    }
    out
}

pub fn sweep_pair<F: Scalar>(g: &Group<F>, ctx: &SoergelContext<F>, w: usize, s: usize, grid: &[F]) -> (Value, bool) {
    match zeta_sweep(ctx, w, s, grid) {
        Ok(r) => {
            let passed = r.passed();
            let mut v = serde_json::to_value(&r).unwrap_or(Value::Null);
            v["w"] = Value::String(g.word(w));
            v["verdict"] = Value::Bool(passed);
            (v, passed)
        }
        Err(e) => (json!({ "w": g.word(w), "s": s, "verdict": false, "failure_witness": e.to_string() }), false),
    }
}

pub fn verify<F: Scalar>(g: &Group<F>, which: Verify, element: Option<&str>) -> Result<Output> {
    let ctx = g.context()?;
    let only = element.map(|e| -> Result<usize> {
        let word = g.parse_word(e)?;
        g.table.element_of_word(&word).ok_or_else(|| anyhow::anyhow!("word {e} is outside the enumerated range"))
    });
    let only = only.transpose()?;
    let mut reports = Vec::new();
    if which == Verify::Sweep {
        let grid = g.zeta_grid()?;
        for (w, s) in sweep_pairs(g) {
            if only.is_some_and(|o| o != w) {
                continue;
            }
            reports.push(sweep_pair(g, &ctx, w, s, &grid).0);
        }
    } else {
        let elems = match only {
            Some(w) => vec![w],
            None => g.elements(g.module_cap()),
        };
        for w in elems {
            reports.push(verify_element(g, &ctx, w, which));
        }
    }
    let passed = reports.iter().all(|r| r["verdict"] == Value::Bool(true));
    let mut tsv = String::from("w\ts\tverdict\n");
    for r in &reports {
        let s = r.get("s").map_or(String::new(), |s| s.to_string());
        tsv.push_str(&format!("{}\t{}\t{}\n", r["w"].as_str().unwrap_or(""), s, r["verdict"]));
    }
    let json = json!({ "group": g.name, "reports": reports, "passed": passed });
    Ok(Output { json, tsv, passed })
}

pub fn rouquier<F: Scalar>(g: &Group<F>, word: &str) -> Result<Output> {
    let word = g.parse_word(word)?;
    let r = concentration_check(&g.sys, &g.table, &word)?;
    let passed = r.passed();
    let mut tsv = String::from("cohomological_degree\tinternal_degree\tdim\n");
    for (k, h) in r.homology.iter().enumerate() {
        for (n, d) in h {
            tsv.push_str(&format!("{k}\t{n}\t{d}\n"));
        }
    }
    let mut json = serde_json::to_value(&r)?;
    json["word"] = Value::String(format_word(&word));
    json["passed"] = Value::Bool(passed);
    Ok(Output { json, tsv, passed })
}
