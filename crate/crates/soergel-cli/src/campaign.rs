//! Full verification campaigns.

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};
use soergel::field::scalar_string;
use soergel::rouquier::{concentration_check, sliding_identity_check};
use soergel::soergel::SoergelContext;
use soergel::Scalar;

use crate::config::{format_word, Check, ALL_CHECKS};
use crate::run::{is_nonneg_poly, mu_products, sweep_pair, sweep_pairs, verify_element, Group, Output, Verify};

/// Rouquier complexes have `2^l` terms; words longer than this are skipped.
pub const ROUQUIER_CAP: usize = 6;
const MAX_WITNESSES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub checked: usize,
    pub failed: usize,
    /// Cases left out, with `reason` saying why.
    pub skipped: usize,
    pub reason: Option<String>,
    pub witnesses: Vec<Value>,
}

impl CheckResult {
    fn new(name: &str) -> Self {
        CheckResult { name: name.into(), status: Status::Pass, checked: 0, failed: 0, skipped: 0, reason: None, witnesses: Vec::new() }
    }

    fn skipped(name: &str, reason: &str) -> Self {
        CheckResult { status: Status::Skipped, reason: Some(reason.into()), ..CheckResult::new(name) }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(witness());
            }
        }
    }

    fn skip(&mut self, n: usize, reason: String) {
        if n > 0 {
            self.skipped += n;
            self.reason = Some(reason);
        }
    }

    fn finish(mut self) -> Self {
        self.status = if self.failed > 0 {
            Status::Fail
        } else if self.checked == 0 {
            Status::Skipped
        } else {
            Status::Pass
        };
        if self.status == Status::Skipped && self.reason.is_none() {
            self.reason = Some("nothing in range".into());
        }
        self
    }
}

fn coxeter_checks<F: Scalar>(g: &Group<F>) -> Vec<CheckResult> {
    let real = g.sys.realization();
    let mut faithful = CheckResult::new("coxeter.reflection_faithful");
    let r = g.sys.check_reflection_faithful(&g.enumeration);
    faithful.checked = g.table.len().saturating_sub(1);
    if !r.faithful {
        faithful.record(false, || json!("distinct elements share a matrix"));
    }
    faithful.failed += r.violations.len();
    faithful.witnesses.extend(r.violations.iter().take(MAX_WITNESSES).map(|w| json!(format_word(w))));

    let mut rho = CheckResult::new("coxeter.rho_positivity");
    let mut parity = CheckResult::new("coxeter.length_parity");
    for w in 0..g.table.len() {
        // w(rho) = s_1(s_2(... s_n(rho)))
        let wrho = g.table.word(w).iter().rev().fold(real.rho.clone(), |xi, &s| real.reflect_form(s, &xi));
        for s in 0..g.sys.rank() {
            if let Some(sw) = g.table.left_mult(s, w) {
                let up = g.table.length(sw) > g.table.length(w);
                rho.record((real.coroot_pairing(&wrho, s).sign() > 0) == up, || json!({ "w": g.word(w), "s": s }));
            }
            if let Some(ws) = g.table.right_mult(w, s) {
                let (a, b) = (g.table.length(w), g.table.length(ws));
                parity.record(a.abs_diff(b) == 1, || json!({ "w": g.word(w), "s": s }));
            }
        }
    }
    vec![faithful.finish(), rho.finish(), parity.finish()]
}

fn hecke_checks<F: Scalar>(g: &Group<F>) -> Vec<CheckResult> {
    let mut kl = CheckResult::new("hecke.kl_positivity");
    let mut inv = CheckResult::new("hecke.inverse_kl_signs");
    for w in g.elements(None) {
        for (y, p) in g.hecke.kl_basis_element(w).terms() {
            kl.record(is_nonneg_poly(p), || json!({ "y": g.word(y), "w": g.word(w), "poly": p.to_sparse() }));
        }
        for (y, p) in g.hecke.inverse_kl(w) {
            let sign = if (g.table.length(w) - g.table.length(y)).is_multiple_of(2) { 1 } else { -1 };
            inv.record(is_nonneg_poly(&p.scale(sign)), || json!({ "y": g.word(y), "w": g.word(w), "poly": p.to_sparse() }));
        }
    }
    let mut mu = CheckResult::new("hecke.mu_positivity");
    let mut uni = CheckResult::new("hecke.unimodality");
    for (x, y, c) in mu_products(g) {
        for (&z, p) in &c {
            mu.record(p.has_nonnegative_coeffs(), || json!({ "x": g.word(x), "y": g.word(y), "z": g.word(z), "poly": p.to_sparse() }));
        }
        let r = g.hecke.unimodality_from(x, y, &c);
        for (&z, d) in &r.decompositions {
            uni.record(d.ok, || json!({ "x": g.word(x), "y": g.word(y), "z": g.word(z), "poly": d.poly.to_sparse() }));
        }
    }
    vec![kl.finish(), mu.finish(), uni.finish(), inv.finish()]
}

fn capped<F: Scalar>(g: &Group<F>, cap: Option<usize>, check: &mut CheckResult) -> Vec<usize> {
    let elems = g.elements(cap);
    let all = g.elements(None).len();
    if let Some(c) = cap {
        check.skip(all - elems.len(), format!("module checks capped at length {c}"));
    }
    elems
}

fn soergel_checks<F: Scalar>(g: &Group<F>, ctx: &SoergelContext<F>) -> Vec<CheckResult> {
    let mut c = CheckResult::new("soergel.decomposition");
    for w in capped(g, g.module_cap(), &mut c) {
        let word = g.table.word(w);
        match ctx.decomposition_report(&g.hecke, word) {
            Ok(r) => c.record(r.passed(), || {
                json!({
                    "word": format_word(word),
                    "observed": g.coords_json(&r.observed),
                    "predicted": g.coords_json(&r.predicted),
                    "idempotents_complete": r.idempotents_complete,
                })
            }),
            Err(e) => c.record(false, || json!({ "word": format_word(word), "error": e.to_string() })),
        }
    }
    vec![c.finish()]
}

fn hodge_checks<F: Scalar>(g: &Group<F>, ctx: &SoergelContext<F>) -> Vec<CheckResult> {
    let mut hl = CheckResult::new("hodge.hard_lefschetz");
    let mut hr = CheckResult::new("hodge.hodge_riemann");
    let elems = capped(g, g.module_cap(), &mut hl);
    hr.skipped = hl.skipped;
    hr.reason = hl.reason.clone();
    for w in elems {
        for (which, check) in [(Verify::HardLefschetz, &mut hl), (Verify::HodgeRiemann, &mut hr)] {
            let v = verify_element(g, ctx, w, which);
            check.record(v["verdict"] == Value::Bool(true), || v.clone());
        }
    }
    vec![hl.finish(), hr.finish()]
}

fn sweep_checks<F: Scalar>(g: &Group<F>, ctx: &SoergelContext<F>, grid: &[F]) -> Vec<CheckResult> {
    let mut c = CheckResult::new("hodge.zeta_sweep");
    let pairs = sweep_pairs(g);
    if let Some(cap) = g.sweep_cap() {
        let total = (0..g.table.len())
            .flat_map(|w| (0..g.sys.rank()).map(move |s| (w, s)))
            .filter(|&(w, s)| g.table.right_mult(w, s).is_some_and(|ws| g.table.length(ws) > g.table.length(w)))
            .count();
        c.skip(total - pairs.len(), format!("zeta sweeps capped at length {cap}"));
    }
    for (w, s) in pairs {
        let (v, ok) = sweep_pair(g, ctx, w, s, grid);
        c.record(ok, || v);
    }
    vec![c.finish()]
}

fn rouquier_checks<F: Scalar>(g: &Group<F>) -> Vec<CheckResult> {
    let mut conc = CheckResult::new("rouquier.concentration");
    let mut same = CheckResult::new("rouquier.word_independence");
    let cap = g.module_cap().map_or(ROUQUIER_CAP, |c| c.min(ROUQUIER_CAP));
    let elems = g.elements(Some(cap));
    let skipped = g.elements(None).len() - elems.len();
    conc.skip(skipped, format!("complexes capped at length {cap}"));
    same.skip(skipped, format!("complexes capped at length {cap}"));
    for w in elems {
        let mut first = None;
        let mut agree = true;
        for word in g.table.reduced_words(w) {
            match concentration_check(&g.sys, &g.table, &word) {
                Ok(r) => {
                    conc.record(r.passed(), || json!({ "word": format_word(&word), "homology": r.homology }));
                    match &first {
                        None => first = Some(r.homology),
                        Some(h) => agree &= *h == r.homology,
                    }
                }
                Err(e) => conc.record(false, || json!({ "word": format_word(&word), "error": e.to_string() })),
            }
        }
        same.record(agree, || json!(g.word(w)));
    }
    let mut slide = CheckResult::new("rouquier.sliding_identity");
    for s in 0..g.sys.rank() {
        let r = sliding_identity_check(&g.sys, s, &g.sys.realization().rho);
        slide.record(r.holds, || json!({ "s": s }));
    }
    vec![conc.finish(), same.finish(), slide.finish()]
}

pub fn run_campaign<F: Scalar>(g: &Group<F>, checks: &[Check]) -> Result<Output> {
    let grid = g.zeta_grid()?;
    let ctx = if g.finite { Some(g.context()?) } else { None };
    let mut results = Vec::new();
    for check in ALL_CHECKS {
        let module_level = matches!(check, Check::Soergel | Check::Hodge | Check::Sweep | Check::Rouquier);
        let reason = if module_level && !g.finite {
            Some("infinite group")
        } else if !checks.contains(&check) {
            Some("not selected")
        } else {
            None
        };
        if let Some(reason) = reason {
            let name = match check {
                Check::Coxeter => "coxeter",
                Check::Hecke => "hecke",
                Check::Soergel => "soergel",
                Check::Hodge => "hodge",
                Check::Sweep => "hodge.zeta_sweep",
                Check::Rouquier => "rouquier",
            };
            results.push(CheckResult::skipped(name, reason));
            continue;
        }
        match (check, &ctx) {
            (Check::Coxeter, _) => results.extend(coxeter_checks(g)),
            (Check::Hecke, _) => results.extend(hecke_checks(g)),
            (Check::Soergel, Some(ctx)) => results.extend(soergel_checks(g, ctx)),
            (Check::Hodge, Some(ctx)) => results.extend(hodge_checks(g, ctx)),
            (Check::Sweep, Some(ctx)) => results.extend(sweep_checks(g, ctx, &grid)),
            (Check::Rouquier, _) => results.extend(rouquier_checks(g)),
            _ => unreachable!("module checks on infinite groups were skipped above"),
        }
    }
    let passed = results.iter().all(|r| r.status != Status::Fail);
    let mut tsv = String::from("check\tstatus\tchecked\tfailed\tskipped\treason\n");
    for r in &results {
        let status = serde_json::to_value(r.status)?;
        tsv.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\n",
            r.name,
            status.as_str().unwrap_or(""),
            r.checked,
            r.failed,
            r.skipped,
            r.reason.as_deref().unwrap_or("")
        ));
    }
    let json = json!({
        "group": g.name,
        "field": F::field_name(),
        "seed": g.settings.seed,
        "max_length": g.settings.max_length,
        "module_length_cap": g.module_cap(),
        "sweep_length_cap": g.sweep_cap(),
        "elements": g.table.len(),
        "finite": g.finite,
        "zeta_grid": grid.iter().map(scalar_string).collect::<Vec<_>>(),
        "checks": results,
        "passed": passed,
    });
    Ok(Output { json, tsv, passed })
}
