//! Hard Lefschetz and Hodge–Riemann checks on graded spaces with a degree +2
//! operator and a graded symmetric form, and the deformed operators `L_zeta`
//! on `B_w B_s`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::field::{scalar_string, Scalar};
use crate::graded::{dim_at, fitting_split, hom_space, Dims, GradedMap, GradedModule};
use crate::linalg::Matrix;
pub use crate::linalg::{signature, Signature};
use crate::soergel::{
    build_bs, last_slot_action, last_slot_comultiplication, last_slot_multiplication, SoergelContext, SoergelError,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HodgeError {
    #[error(transparent)]
    Soergel(#[from] SoergelError),
    #[error("element {w} times generator {s} is not longer than {w}")]
    NotAnExtension { w: usize, s: usize },
    #[error("lowest degree piece has dimension {0}, expected 1")]
    LowestDegreeNotLine(usize),
    #[error("the form vanishes on the lowest degree against L^top")]
    DegenerateNormalization,
    #[error("no idempotent lifting B_w (x) id for element {w} and generator {s}")]
    NoLift { w: usize, s: usize },
}

/// A graded space with a degree +2 operator and a graded form; `form[k]`
/// pairs degree `k` (rows) with degree `-k` (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzDatum<F> {
    pub dims: Dims,
    pub l: GradedMap<F>,
    pub form: BTreeMap<i32, Matrix<F>>,
}

impl<F: Scalar> LefschetzDatum<F> {
    pub fn new(dims: Dims, l: GradedMap<F>, form: BTreeMap<i32, Matrix<F>>) -> Self {
        assert_eq!(l.shift, 2);
        LefschetzDatum { dims, l, form }
    }

    /// The module with `L` the action of the form `xi`.
    pub fn from_module(m: &GradedModule<F>, xi: &[F]) -> Self {
        LefschetzDatum { dims: m.dims.clone(), l: m.action(xi), form: m.form.clone() }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.iter().find(|(_, &n)| n > 0).map(|(&k, _)| k)
    }

    /// All degrees have the same parity.
    pub fn is_parity_pure(&self) -> bool {
        let mut it = self.dims.iter().filter(|(_, &n)| n > 0).map(|(&k, _)| k.rem_euclid(2));
        match it.next() {
            Some(p) => it.all(|q| q == p),
            None => true,
        }
    }

    pub fn is_self_adjoint(&self) -> bool {
        self.as_module().is_self_adjoint(&self.l)
    }

    pub fn form_is_symmetric(&self) -> bool {
        self.as_module().form_is_symmetric()
    }

    fn as_module(&self) -> GradedModule<F> {
        GradedModule { dims: self.dims.clone(), actions: vec![self.l.clone()], form: self.form.clone() }
    }

    /// `L^j` restricted to degree `k`.
    pub fn l_power(&self, k: i32, j: usize) -> Matrix<F> {
        let mut out = Matrix::identity(dim_at(&self.dims, k));
        for t in 0..j as i32 {
            let from = k + 2 * t;
            let b = self.l.block_or_zero(from, dim_at(&self.dims, from + 2), dim_at(&self.dims, from));
            out = b.mul(&out);
        }
        out
    }

    /// `(x, y) -> <x, L^i y>` on degree `-i`.
    pub fn lefschetz_form(&self, i: usize) -> Matrix<F> {
        let k = -(i as i32);
        let n = dim_at(&self.dims, k);
        match self.form.get(&k) {
            Some(g) if n > 0 => g.mul(&self.l_power(k, i)),
            _ => Matrix::zeros(n, n),
        }
    }

    pub fn scale_form(&self, c: &F) -> Self {
        LefschetzDatum {
            dims: self.dims.clone(),
            l: self.l.clone(),
            form: self.form.iter().map(|(&k, g)| (k, g.scale(c))).collect(),
        }
    }

    /// Signatures of the Lefschetz forms on every nonpositive degree.
    pub fn lefschetz_signatures(&self) -> BTreeMap<i32, Signature> {
        self.dims
            .iter()
            .filter(|(&k, &n)| k <= 0 && n > 0)
            .map(|(&k, _)| (k, signature(&self.lefschetz_form((-k) as usize))))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzFailure {
    pub i: usize,
    pub rank: usize,
    pub dim_low: usize,
    pub dim_high: usize,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HardLefschetzReport {
    pub failures: Vec<LefschetzFailure>,
}

impl HardLefschetzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn check_hard_lefschetz<F: Scalar>(d: &LefschetzDatum<F>) -> HardLefschetzReport {
    let mut degrees: Vec<usize> = d.dims.iter().filter(|(_, &n)| n > 0).map(|(&k, _)| k.unsigned_abs() as usize).collect();
    degrees.sort();
    degrees.dedup();
    let mut failures = Vec::new();
    for i in degrees {
        let (lo, hi) = (dim_at(&d.dims, -(i as i32)), dim_at(&d.dims, i as i32));
        let rank = if lo == 0 || hi == 0 { 0 } else { d.l_power(-(i as i32), i).rank() };
        if rank != lo || lo != hi {
            failures.push(LefschetzFailure { i, rank, dim_low: lo, dim_high: hi });
        }
    }
    HardLefschetzReport { failures }
}

/// Basis (as columns) of the kernel of `L^(i+1)` on degree `-i`.
pub fn primitives<F: Scalar>(d: &LefschetzDatum<F>, i: usize) -> Matrix<F> {
    let k = -(i as i32);
    let n = dim_at(&d.dims, k);
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let p = d.l_power(k, i + 1);
    if p.rows() == 0 {
        return Matrix::identity(n);
    }
    p.kernel()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeRiemannEntry {
    pub degree: i32,
    pub primitive_dim: usize,
    pub expected_sign: i8,
    pub signature: Signature,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HodgeRiemannReport {
    pub entries: Vec<HodgeRiemannEntry>,
}

impl HodgeRiemannReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// On the primitives of degree `min + i` (`i` even, `min + i <= 0`) the form
/// `<x, L^(-min-i) y>` must be `(-1)^(i/2)`-definite.
pub fn check_hodge_riemann<F: Scalar>(d: &LefschetzDatum<F>) -> HodgeRiemannReport {
    let Some(min) = d.min_degree() else {
        return HodgeRiemannReport::default();
    };
    let mut entries = Vec::new();
    let mut i = 0;
    while min + i <= 0 {
        let k = min + i;
        let j = (-k) as usize;
        let p = primitives(d, j);
        let expected_sign = if (i / 2) % 2 == 0 { 1 } else { -1 };
        let signature = if p.cols() == 0 {
            Signature { plus: 0, minus: 0, zero: 0 }
        } else {
            let gram = p.transpose().mul(&d.lefschetz_form(j)).mul(&p);
            signature(&gram)
        };
        entries.push(HodgeRiemannEntry {
            degree: k,
            primitive_dim: p.cols(),
            expected_sign,
            passed: signature.is_definite(expected_sign),
            signature,
        });
        i += 2;
    }
    HodgeRiemannReport { entries }
}

/// Scale the form by the sign making `<c, L^top c>` positive on the
/// one-dimensional lowest degree. Returns the datum and the sign used.
pub fn normalize_form<F: Scalar>(d: &LefschetzDatum<F>) -> Result<(LefschetzDatum<F>, i8), HodgeError> {
    let Some(min) = d.min_degree() else {
        return Ok((d.clone(), 1));
    };
    let n = dim_at(&d.dims, min);
    if n != 1 {
        return Err(HodgeError::LowestDegreeNotLine(n));
    }
    let value = d.lefschetz_form((-min) as usize)[(0, 0)].clone();
    match value.sign() {
        0 => Err(HodgeError::DegenerateNormalization),
        1 => Ok((d.clone(), 1)),
        _ => Ok((d.scale_form(&-F::one()), -1)),
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WeakLefschetzReport {
    pub hypothesis_violations: Vec<String>,
    /// Degrees `-i` where `L'^i` fails to be injective.
    pub conclusion_failures: Vec<i32>,
}

impl WeakLefschetzReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypothesis_violations.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.hypotheses_hold() && self.conclusion_failures.is_empty()
    }
}

/// Given `phi: V' -> V(1)` intertwining the operators, injective in degrees
/// `<= -1`, with `<phi x, phi y> = <x, L' y>` and `V` satisfying Hodge–Riemann,
/// `L'^i : V'^{-i} -> V'^i` is injective for all `i`. Checks the hypotheses and
/// then the conclusion.
pub fn weak_lefschetz_probe<F: Scalar>(
    v: &LefschetzDatum<F>,
    vp: &LefschetzDatum<F>,
    phi: &GradedMap<F>,
) -> WeakLefschetzReport {
    let mut report = WeakLefschetzReport::default();
    let bad = &mut report.hypothesis_violations;
    if !check_hodge_riemann(v).passed() {
        bad.push("V does not satisfy Hodge-Riemann".into());
    }
    if phi.shift != 1 {
        bad.push(format!("phi has degree {}, expected 1", phi.shift));
    }
    for (&k, &n) in vp.dims.iter().filter(|(&k, _)| k <= -1) {
        let b = phi.block_or_zero(k, dim_at(&v.dims, k + 1), n);
        if b.rank() < n {
            bad.push(format!("phi is not injective in degree {k}"));
        }
    }
    let lhs = phi.compose(&vp.l);
    let rhs = v.l.compose(phi);
    if !lhs.sub(&rhs).is_zero() {
        bad.push("phi does not intertwine the operators".into());
    }
    for (&a, &n) in &vp.dims {
        let b = -a - 2;
        let m = dim_at(&vp.dims, b);
        if n == 0 || m == 0 {
            continue;
        }
        let pa = phi.block_or_zero(a, dim_at(&v.dims, a + 1), n);
        let pb = phi.block_or_zero(b, dim_at(&v.dims, b + 1), m);
        let g = v.form.get(&(a + 1)).cloned().unwrap_or_else(|| Matrix::zeros(dim_at(&v.dims, a + 1), dim_at(&v.dims, b + 1)));
        let left = pa.transpose().mul(&g).mul(&pb);
        let gp = vp.form.get(&a).cloned().unwrap_or_else(|| Matrix::zeros(n, dim_at(&vp.dims, -a)));
        let lb = vp.l.block_or_zero(b, dim_at(&vp.dims, -a), m);
        if left != gp.mul(&lb) {
            bad.push(format!("form compatibility fails in degree {a}"));
        }
    }
    for (&k, &n) in &vp.dims {
        if k > 0 || n == 0 {
            continue;
        }
        if vp.l_power(k, (-k) as usize).rank() < n {
            report.conclusion_failures.push(k);
        }
    }
    report
}

/// `B_w B_s` realized inside `BS(word of w, s)` with both pieces of the
/// deformed operator, ready to be combined for any `zeta`.
#[derive(Clone, Debug)]
pub struct DeformedFamily<F> {
    pub w: usize,
    pub s: usize,
    pub dims: Dims,
    /// Left multiplication by `rho` on the whole product.
    pub l_rho: GradedMap<F>,
    /// Multiplication by `rho` through the last factor only.
    pub r_rho: GradedMap<F>,
    pub form: BTreeMap<i32, Matrix<F>>,
    /// Whether the lifted idempotent could be chosen self-adjoint.
    pub self_adjoint_lift: bool,
}

impl<F: Scalar> DeformedFamily<F> {
    pub fn datum(&self, zeta: &F) -> LefschetzDatum<F> {
        let mut l = self.l_rho.clone();
        l.add_scaled(zeta, &self.r_rho);
        LefschetzDatum { dims: self.dims.clone(), l, form: self.form.clone() }
    }
}

/// Entries of `E^T G - G E` over all degrees, linear in `E`.
fn adjoint_defect<F: Scalar>(m: &GradedModule<F>, e: &GradedMap<F>) -> Vec<F> {
    let mut out = Vec::new();
    for (&k, &n) in &m.dims {
        let Some(g) = m.form.get(&k) else { continue };
        let nm = dim_at(&m.dims, -k);
        let ek = e.block_or_zero(k, n, n);
        let em = e.block_or_zero(-k, nm, nm);
        let d = ek.transpose().mul(g).sub(&g.mul(&em));
        for i in 0..d.rows() {
            out.extend(d.row(i));
        }
    }
    out
}

/// The image of `e_w (x) id` in `BS(word, s)`, as a family in `zeta`.
///
/// The idempotent is found as a degree-0 endomorphism `E` with
/// `(id (x) m_s) E = e_w (id (x) m_s)`, `E (id (x) delta_s) = (id (x) delta_s) e_w`,
/// commuting with the last-slot action (and self-adjoint when possible), then
/// made idempotent by `E -> 3E^2 - 2E^3`.
pub fn deformed_family<F: Scalar>(ctx: &SoergelContext<F>, w: usize, s: usize) -> Result<DeformedFamily<F>, HodgeError> {
    let table = ctx.table();
    let sys = ctx.system();
    if s >= table.rank() {
        return Err(SoergelError::BadLetter(s).into());
    }
    match table.right_mult(w, s) {
        Some(ws) if table.length(ws) > table.length(w) => {}
        _ => return Err(HodgeError::NotAnExtension { w, s }),
    }
    let word = table.word(w).to_vec();
    let mut ext = word.clone();
    ext.push(s);
    let big = build_bs(sys, &ext)?.module;
    let small = build_bs(sys, &word)?.module;
    let ebar = ctx.orthogonal_idempotent(w)?;
    let rho = sys.realization().rho.clone();
    let mult = last_slot_multiplication::<F>(&word);
    let comult = last_slot_comultiplication::<F>(&word);
    let r = last_slot_action(sys, &word, s, &rho);
    let basis = hom_space(&big, &big, 0);

    let target_mult = ebar.compose(&mult).flatten(&big.dims, &small.dims);
    let target_comult = comult.compose(&ebar).flatten(&small.dims, &big.dims);
    let mut columns = Vec::with_capacity(basis.len());
    let mut adjoint_columns = Vec::with_capacity(basis.len());
    for b in &basis {
        let mut col = mult.compose(b).flatten(&big.dims, &small.dims);
        col.extend(b.compose(&comult).flatten(&small.dims, &big.dims));
        col.extend(b.compose(&r).sub(&r.compose(b)).flatten(&big.dims, &big.dims));
        columns.push(col);
        adjoint_columns.push(adjoint_defect(&big, b));
    }
    let plain_rows = columns[0].len();
    let mut rhs = target_mult;
    rhs.extend(target_comult);
    rhs.resize(plain_rows, F::zero());

    let solve = |with_adjoint: bool| -> Option<Vec<F>> {
        let cols: Vec<Vec<F>> = columns
            .iter()
            .zip(&adjoint_columns)
            .map(|(c, a)| {
                let mut c = c.clone();
                if with_adjoint {
                    c.extend(a.iter().cloned());
                }
                c
            })
            .collect();
        let mut b = rhs.clone();
        if with_adjoint {
            b.resize(plain_rows + adjoint_columns.first().map_or(0, |a| a.len()), F::zero());
        }
        let a = Matrix::from_columns(&cols, b.len());
        let x = a.solve(&Matrix::from_columns(&[b.clone()], b.len()))?;
        Some((0..cols.len()).map(|i| x[(i, 0)].clone()).collect())
    };
    let (coeffs, self_adjoint_lift) = match solve(true) {
        Some(c) => (c, true),
        None => (solve(false).ok_or(HodgeError::NoLift { w, s })?, false),
    };
    let mut e = GradedMap::zero(0);
    for (c, b) in coeffs.iter().zip(&basis) {
        if !c.is_zero() {
            e.add_scaled(c, b);
        }
    }
    let three = F::from_i64(3);
    let two = F::from_i64(2);
    for _ in 0..64 {
        let e2 = e.compose(&e);
        if e2 == e {
            break;
        }
        e = e2.scale(&three).sub(&e2.compose(&e).scale(&two));
    }
    if e.compose(&e) != e {
        return Err(HodgeError::NoLift { w, s });
    }
    let [(incl, proj, dims), _] = fitting_split(&big.dims, &e);
    let sub = big.restrict(&incl, &proj, dims.clone());
    let (_, sign) = normalize_form(&LefschetzDatum::from_module(&ctx.extract(w)?.module, &rho))?;
    let form = sub.form.iter().map(|(&k, g)| (k, if sign < 0 { g.scale(&-F::one()) } else { g.clone() })).collect();
    Ok(DeformedFamily {
        w,
        s,
        dims,
        l_rho: proj.compose(&big.action(&rho).compose(&incl)),
        r_rho: proj.compose(&r.compose(&incl)),
        form,
        self_adjoint_lift,
    })
}

pub fn deformed_operator<F: Scalar>(
    ctx: &SoergelContext<F>,
    w: usize,
    s: usize,
    zeta: &F,
) -> Result<LefschetzDatum<F>, HodgeError> {
    Ok(deformed_family(ctx, w, s)?.datum(zeta))
}

/// `{0, 1/4, 1/2, 1, 2, 4, 8, 2^10}`.
pub fn default_zeta_grid<F: Scalar>() -> Vec<F> {
    [(0, 1), (1, 4), (1, 2), (1, 1), (2, 1), (4, 1), (8, 1), (1024, 1)].iter().map(|&(n, d)| F::from_frac(n, d)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub zeta: String,
    pub hard_lefschetz: bool,
    pub hodge_riemann: bool,
    pub signatures: BTreeMap<i32, Signature>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub w: usize,
    pub s: usize,
    pub dims: Dims,
    pub self_adjoint_lift: bool,
    pub points: Vec<SweepPoint>,
    /// Lefschetz signatures agree across all points where hard Lefschetz holds.
    pub signatures_stable: bool,
    /// Smallest grid value at which Hodge–Riemann holds.
    pub smallest_passing: Option<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.signatures_stable && self.points.iter().all(|p| p.hard_lefschetz && p.hodge_riemann)
    }
}

pub fn zeta_sweep<F: Scalar>(ctx: &SoergelContext<F>, w: usize, s: usize, grid: &[F]) -> Result<SweepReport, HodgeError> {
    let family = deformed_family(ctx, w, s)?;
    let mut points = Vec::new();
    let mut smallest: Option<&F> = None;
    for z in grid {
        let d = family.datum(z);
        let hl = check_hard_lefschetz(&d).passed();
        let hr = check_hodge_riemann(&d).passed();
        if hr && smallest.is_none_or(|m| z < m) {
            smallest = Some(z);
        }
        points.push(SweepPoint { zeta: scalar_string(z), hard_lefschetz: hl, hodge_riemann: hr, signatures: d.lefschetz_signatures() });
    }
    let mut stable_sigs = points.iter().filter(|p| p.hard_lefschetz).map(|p| &p.signatures);
    let signatures_stable = match stable_sigs.next() {
        Some(first) => stable_sigs.all(|s| s == first),
        None => true,
    };
    Ok(SweepReport {
        w,
        s,
        dims: family.dims.clone(),
        self_adjoint_lift: family.self_adjoint_lift,
        points,
        signatures_stable,
        smallest_passing: smallest.map(scalar_string),
    })
}
