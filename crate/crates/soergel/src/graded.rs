//! Finite-dimensional graded modules over `R`, stored degree by degree.
//!
//! A module is a list of graded pieces together with the action of each basis
//! linear form (a degree +2 map) and, optionally, a graded bilinear form pairing
//! degree `k` with degree `-k`. Maps are stored as blocks keyed by source degree.

use std::collections::BTreeMap;

use rand::Rng;

use crate::field::Scalar;
use crate::linalg::{EchelonBasis, Matrix};

/// Graded dimensions, only nonzero pieces.
pub type Dims = BTreeMap<i32, usize>;

pub fn dim_at(d: &Dims, k: i32) -> usize {
    d.get(&k).copied().unwrap_or(0)
}

/// `M(k)`: degree `n` of the result is degree `n + k` of `M`.
pub fn shift_dims(d: &Dims, k: i32) -> Dims {
    d.iter().map(|(&n, &m)| (n - k, m)).collect()
}

pub fn total_dim(d: &Dims) -> usize {
    d.values().sum()
}

/// Graded linear map of fixed degree `shift`; `blocks[k]` sends degree `k` to
/// degree `k + shift`. Missing blocks are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<F> {
    pub shift: i32,
    pub blocks: BTreeMap<i32, Matrix<F>>,
}

impl<F: Scalar> GradedMap<F> {
    pub fn zero(shift: i32) -> Self {
        GradedMap { shift, blocks: BTreeMap::new() }
    }

    pub fn identity(dims: &Dims) -> Self {
        GradedMap { shift: 0, blocks: dims.iter().map(|(&k, &n)| (k, Matrix::identity(n))).collect() }
    }

    pub fn block(&self, k: i32) -> Option<&Matrix<F>> {
        self.blocks.get(&k)
    }

    /// Block at source degree `k` with the given shape, zero-filled if absent.
    pub fn block_or_zero(&self, k: i32, rows: usize, cols: usize) -> Matrix<F> {
        match self.blocks.get(&k) {
            Some(b) => b.clone(),
            None => Matrix::zeros(rows, cols),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(|b| b.is_zero())
    }

    /// `self o rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut blocks = BTreeMap::new();
        for (&k, b) in &rhs.blocks {
            if let Some(a) = self.blocks.get(&(k + rhs.shift)) {
                blocks.insert(k, a.mul(b));
            }
        }
        GradedMap { shift: self.shift + rhs.shift, blocks }
    }

    pub fn add_scaled(&mut self, c: &F, o: &Self) {
        assert_eq!(self.shift, o.shift);
        if c.is_zero() {
            return;
        }
        for (&k, b) in &o.blocks {
            match self.blocks.get_mut(&k) {
                Some(a) => a.add_scaled(c, b),
                None => {
                    self.blocks.insert(k, b.scale(c));
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&F::one(), o);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&-F::one(), o);
        r
    }

    pub fn scale(&self, c: &F) -> Self {
        GradedMap { shift: self.shift, blocks: self.blocks.iter().map(|(&k, b)| (k, b.scale(c))).collect() }
    }

    /// Same matrices, with source and target both regraded by `M -> M(k)`.
    pub fn regrade(&self, k: i32) -> Self {
        GradedMap { shift: self.shift, blocks: self.blocks.iter().map(|(&n, b)| (n - k, b.clone())).collect() }
    }

    /// `id_{B_s} (x) self` on `B_s (x) N -> B_s (x) N'`.
    pub fn tensor_left(&self, src: &Dims, tgt: &Dims) -> Self {
        let out_src = prepend_dims(src);
        let out_tgt = prepend_dims(tgt);
        let mut blocks = BTreeMap::new();
        for (&k, &n) in &out_src {
            let m = dim_at(&out_tgt, k + self.shift);
            if m == 0 {
                continue;
            }
            let mut b = Matrix::zeros(m, n);
            let (se, te) = (dim_at(src, k + 1), dim_at(tgt, k + 1 + self.shift));
            if let Some(f) = self.blocks.get(&(k + 1)) {
                b.set_block(0, 0, f);
            }
            if let Some(f) = self.blocks.get(&(k - 1)) {
                b.set_block(te, se, f);
            }
            blocks.insert(k, b);
        }
        GradedMap { shift: self.shift, blocks }
    }

    /// Every block is square and invertible and covers all of `dims`.
    pub fn is_invertible_on(&self, dims: &Dims) -> bool {
        self.shift == 0
            && dims.iter().all(|(&k, &n)| self.blocks.get(&k).is_some_and(|b| b.rows() == n && b.cols() == n && b.rank() == n))
    }

    pub fn inverse_on(&self, dims: &Dims) -> Option<Self> {
        let mut blocks = BTreeMap::new();
        for (&k, &n) in dims {
            let b = self.blocks.get(&k)?;
            if b.rows() != n {
                return None;
            }
            blocks.insert(k, b.inverse()?);
        }
        Some(GradedMap { shift: 0, blocks })
    }

    /// Sum of the traces of the diagonal blocks (degree-0 maps only).
    pub fn trace(&self) -> F {
        assert_eq!(self.shift, 0);
        self.blocks.values().fold(F::zero(), |acc, b| acc + b.trace())
    }

    /// All entries, block by block, for linear-dependence tests.
    pub fn flatten(&self, src: &Dims, tgt: &Dims) -> Vec<F> {
        let mut out = Vec::new();
        for (&k, &n) in src {
            let m = dim_at(tgt, k + self.shift);
            let b = self.block_or_zero(k, m, n);
            for i in 0..m {
                for j in 0..n {
                    out.push(b[(i, j)].clone());
                }
            }
        }
        out
    }
}

/// Pieces of `B_s (x) N`: degree `k` is `c_e (x) N^{k+1}` followed by `c_s (x) N^{k-1}`.
pub fn prepend_dims(d: &Dims) -> Dims {
    let mut out = Dims::new();
    for (&k, &n) in d {
        *out.entry(k - 1).or_insert(0) += n;
        *out.entry(k + 1).or_insert(0) += n;
    }
    out
}

/// Graded `R`-module with the action of the basis forms and an optional form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule<F> {
    pub dims: Dims,
    /// Left multiplication by the `i`-th coordinate form on `V`.
    pub actions: Vec<GradedMap<F>>,
    /// `form[k]` pairs degree `k` (rows) with degree `-k` (columns).
    pub form: BTreeMap<i32, Matrix<F>>,
}

impl<F: Scalar> GradedModule<F> {
    /// The one-dimensional module `R / R^{>0}` in degree 0, with form 1.
    pub fn trivial(nvars: usize) -> Self {
        GradedModule {
            dims: Dims::from([(0, 1)]),
            actions: vec![GradedMap::zero(2); nvars],
            form: BTreeMap::from([(0, Matrix::identity(1))]),
        }
    }

    pub fn nvars(&self) -> usize {
        self.actions.len()
    }

    pub fn dim(&self) -> usize {
        total_dim(&self.dims)
    }

    pub fn dim_at(&self, k: i32) -> usize {
        dim_at(&self.dims, k)
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.dims.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.dims.keys().next_back().copied()
    }

    /// Multiplication by the linear form with coordinates `xi`.
    pub fn action(&self, xi: &[F]) -> GradedMap<F> {
        let mut out = GradedMap::zero(2);
        for (c, a) in xi.iter().zip(&self.actions) {
            out.add_scaled(c, a);
        }
        out
    }

    /// `B_s (x) self`. `coroot` is `alpha_s^vee`, `root` is `alpha_s`.
    ///
    /// `xi . (c_e (x) m) = c_e (x) s(xi) m + <xi, alpha_s^vee> c_s (x) m` and
    /// `xi . (c_s (x) m) = c_s (x) xi m`.
    pub fn prepend(&self, root: &[F], coroot: &[F]) -> Self {
        let dims = prepend_dims(&self.dims);
        let l_alpha = self.action(root);
        let mut actions = Vec::with_capacity(self.nvars());
        for i in 0..self.nvars() {
            // s(x_i) = x_i - <x_i, alpha_s^vee> alpha_s
            let mut twisted = self.actions[i].clone();
            twisted.add_scaled(&-coroot[i].clone(), &l_alpha);
            let mut blocks = BTreeMap::new();
            for (&k, &n) in &dims {
                let m = dim_at(&dims, k + 2);
                if m == 0 {
                    continue;
                }
                let mut b = Matrix::zeros(m, n);
                let (se, te) = (self.dim_at(k + 1), self.dim_at(k + 3));
                if let Some(t) = twisted.blocks.get(&(k + 1)) {
                    b.set_block(0, 0, t);
                }
                // c_e (x) N^{k+1} -> c_s (x) N^{k+1}
                for j in 0..se {
                    b[(te + j, j)] = coroot[i].clone();
                }
                if let Some(t) = self.actions[i].blocks.get(&(k - 1)) {
                    b.set_block(te, se, t);
                }
                blocks.insert(k, b);
            }
            actions.push(GradedMap { shift: 2, blocks });
        }
        // <e,e> = 0, <e,s> = G, <s,s>(m, m') = G(alpha_s m, m')
        let mut form = BTreeMap::new();
        for (&k, &n) in &dims {
            let m = dim_at(&dims, -k);
            if m == 0 {
                continue;
            }
            let mut g = Matrix::zeros(n, m);
            let (re, ce) = (self.dim_at(k + 1), self.dim_at(-k + 1));
            if let Some(b) = self.form.get(&(k + 1)) {
                g.set_block(0, ce, b);
            }
            if let Some(b) = self.form.get(&(k - 1)) {
                g.set_block(re, 0, b);
            }
            if let (Some(la), Some(b)) = (l_alpha.blocks.get(&(k - 1)), self.form.get(&(k + 1))) {
                g.set_block(re, ce, &la.transpose().mul(b));
            }
            form.insert(k, g);
        }
        GradedModule { dims, actions, form }
    }

    /// Submodule through `incl`, with actions `proj . L . incl` and the
    /// restricted form.
    pub fn restrict(&self, incl: &GradedMap<F>, proj: &GradedMap<F>, dims: Dims) -> Self {
        let actions = self.actions.iter().map(|a| prune(proj.compose(&a.compose(incl)), &dims)).collect();
        let mut form = BTreeMap::new();
        for &k in dims.keys() {
            if let (Some(ik), Some(im), Some(g)) = (incl.blocks.get(&k), incl.blocks.get(&(-k)), self.form.get(&k)) {
                form.insert(k, ik.transpose().mul(g).mul(im));
            }
        }
        GradedModule { dims, actions, form }
    }

    /// `M(k)`.
    pub fn shifted(&self, k: i32) -> Self {
        if k == 0 {
            return self.clone();
        }
        GradedModule {
            dims: shift_dims(&self.dims, k),
            actions: self.actions.iter().map(|a| a.regrade(k)).collect(),
            // the form pairs n + k with -n - k, so it no longer matches -n unless k = 0
            form: BTreeMap::new(),
        }
    }

    pub fn scale_form(&mut self, c: &F) {
        for g in self.form.values_mut() {
            *g = g.scale(c);
        }
    }

    /// Value of the form on two vectors of degrees `k` and `-k`.
    pub fn pair(&self, k: i32, x: &[F], y: &[F]) -> F {
        match self.form.get(&k) {
            Some(g) => {
                let gy = g.mul_vec(y);
                x.iter().zip(&gy).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b)
            }
            None => F::zero(),
        }
    }

    /// `L_i L_j = L_j L_i` for all pairs.
    pub fn actions_commute(&self) -> bool {
        for i in 0..self.nvars() {
            for j in 0..i {
                let a = self.actions[i].compose(&self.actions[j]);
                let b = self.actions[j].compose(&self.actions[i]);
                if !a.sub(&b).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// `<L x, y> = <x, L y>` for every action.
    pub fn actions_self_adjoint(&self) -> bool {
        self.actions.iter().all(|a| self.is_self_adjoint(a))
    }

    pub fn is_self_adjoint(&self, l: &GradedMap<F>) -> bool {
        let d = l.shift;
        for &k in self.dims.keys() {
            // x in degree k, y in degree -k-d
            let lhs = match (l.blocks.get(&k), self.form.get(&(k + d))) {
                (Some(lk), Some(g)) => Some(lk.transpose().mul(g)),
                _ => None,
            };
            let rhs = match (self.form.get(&k), l.blocks.get(&(-k - d))) {
                (Some(g), Some(lm)) => Some(g.mul(lm)),
                _ => None,
            };
            let ok = match (lhs, rhs) {
                (Some(a), Some(b)) => a == b,
                (Some(a), None) | (None, Some(a)) => a.is_zero(),
                (None, None) => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// `form[k]` is the transpose of `form[-k]`.
    pub fn form_is_symmetric(&self) -> bool {
        self.form.iter().all(|(&k, g)| self.form.get(&(-k)).is_some_and(|h| h.transpose() == *g))
    }
}

/// Drop blocks whose source or target piece is missing from `dims`.
fn prune<F: Scalar>(mut m: GradedMap<F>, dims: &Dims) -> GradedMap<F> {
    let shift = m.shift;
    m.blocks.retain(|&k, b| dim_at(dims, k) > 0 && dim_at(dims, k + shift) > 0 && b.rows() > 0 && b.cols() > 0);
    m
}

/// Basis of the degree-`d` maps `M -> N` commuting with every action.
///
/// A map is determined by its values on homogeneous generators (a complement
/// of `sum_i L_i M^{k-2}` in each `M^k`); unknowns are introduced degree by
/// degree and eliminated as soon as the commutation constraints appear.
pub fn hom_space<F: Scalar>(m: &GradedModule<F>, n: &GradedModule<F>, d: i32) -> Vec<GradedMap<F>> {
    assert_eq!(m.nvars(), n.nvars());
    let (Some(lo), Some(hi)) = (m.min_degree(), m.max_degree()) else {
        return Vec::new();
    };
    let nact = m.nvars();
    // slices[k].1[u]: value of the map on M^k when the parameter is the unit
    // vector e_u; missing entries are zero of shape slices[k].0
    let mut slices: BTreeMap<i32, ((usize, usize), Vec<Matrix<F>>)> = BTreeMap::new();
    let mut nparams = 0usize;
    let mut k = lo;
    while k <= hi + 2 {
        let dm = m.dim_at(k);
        let dn = n.dim_at(k + d);
        let dprev = m.dim_at(k - 2);
        let prev_dn = n.dim_at(k - 2 + d);
        let prev = |u: usize, slices: &BTreeMap<i32, ((usize, usize), Vec<Matrix<F>>)>| -> Matrix<F> {
            slices.get(&(k - 2)).and_then(|v| v.1.get(u)).cloned().unwrap_or_else(|| Matrix::zeros(prev_dn, dprev))
        };
        // L^N f_{k-2} for each action and each parameter
        let ln_prev: Vec<Vec<Matrix<F>>> = (0..nact)
            .map(|i| {
                (0..nparams)
                    .map(|u| match n.actions[i].blocks.get(&(k - 2 + d)) {
                        Some(l) if dprev > 0 => l.mul(&prev(u, &slices)),
                        _ => Matrix::zeros(dn, dprev),
                    })
                    .collect()
            })
            .collect();

        if dm > 0 {
            let mut ech = EchelonBasis::new(dm);
            let mut chosen: Vec<(usize, usize, Vec<F>)> = Vec::new();
            if dprev > 0 {
                for i in 0..nact {
                    if let Some(l) = m.actions[i].blocks.get(&(k - 2)) {
                        for j in 0..dprev {
                            let v = l.column(j);
                            if ech.insert(v.clone()) {
                                chosen.push((i, j, v));
                            }
                        }
                    }
                }
            }
            let mut gens = Vec::new();
            for p in 0..dm {
                let mut e = vec![F::zero(); dm];
                e[p] = F::one();
                if ech.insert(e) {
                    gens.push(p);
                }
            }
            let mut cols: Vec<Vec<F>> = chosen.iter().map(|(_, _, v)| v.clone()).collect();
            for &p in &gens {
                let mut e = vec![F::zero(); dm];
                e[p] = F::one();
                cols.push(e);
            }
            let basis = Matrix::from_columns(&cols, dm);
            let basis_inv = basis.inverse().expect("chosen vectors form a basis");
            let new_params = gens.len() * dn;
            let total = nparams + new_params;
            let mut here = Vec::with_capacity(total);
            for u in 0..total {
                let mut vals = Matrix::zeros(dn, dm);
                if u < nparams {
                    for (c, (i, j, _)) in chosen.iter().enumerate() {
                        let src = &ln_prev[*i][u];
                        for r in 0..dn {
                            vals[(r, c)] = src[(r, *j)].clone();
                        }
                    }
                } else if dn > 0 {
                    let v = u - nparams;
                    let (g, r) = (v / dn, v % dn);
                    vals[(r, chosen.len() + g)] = F::one();
                }
                here.push(vals.mul(&basis_inv));
            }
            slices.insert(k, ((dn, dm), here));
            nparams = total;
        }

        // constraints f_k L_i - L_i f_{k-2} = 0 on M^{k-2}
        if dprev > 0 && dn > 0 && nparams > 0 {
            let mut rows: Vec<Vec<F>> = Vec::new();
            for i in 0..nact {
                let lm = m.actions[i].blocks.get(&(k - 2));
                for j in 0..dprev {
                    for r in 0..dn {
                        let mut row = Vec::with_capacity(nparams);
                        for u in 0..nparams {
                            let mut x = match (lm, slices.get(&k).and_then(|v| v.1.get(u))) {
                                (Some(l), Some(f)) => {
                                    let mut acc = F::zero();
                                    for t in 0..l.rows() {
                                        if !l[(t, j)].is_zero() && !f[(r, t)].is_zero() {
                                            acc += f[(r, t)].clone() * &l[(t, j)];
                                        }
                                    }
                                    acc
                                }
                                _ => F::zero(),
                            };
                            if let Some(p) = ln_prev[i].get(u) {
                                x -= p[(r, j)].clone();
                            }
                            row.push(x);
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
            if !rows.is_empty() {
                let c = Matrix::from_rows(rows);
                let kern = c.kernel();
                let newp = kern.cols();
                for ((r, cc), v) in slices.values_mut() {
                    let (r, cc) = (*r, *cc);
                    let mut out = Vec::with_capacity(newp);
                    for q in 0..newp {
                        let mut acc = Matrix::zeros(r, cc);
                        for (u, s) in v.iter().enumerate() {
                            let coef = &kern[(u, q)];
                            if !coef.is_zero() {
                                acc.add_scaled(coef, s);
                            }
                        }
                        out.push(acc);
                    }
                    *v = out;
                }
                nparams = newp;
            }
        }
        k += 2;
    }
    (0..nparams)
        .map(|u| {
            let blocks = slices
                .iter()
                .filter_map(|(&k, v)| {
                    let b = v.1.get(u)?;
                    (b.rows() > 0 && b.cols() > 0).then(|| (k, b.clone()))
                })
                .collect();
            GradedMap { shift: d, blocks }
        })
        .collect()
}

/// Random combination of maps with small integer coefficients.
pub fn random_combination<F: Scalar, G: Rng>(basis: &[GradedMap<F>], shift: i32, rng: &mut G) -> GradedMap<F> {
    let mut out = GradedMap::zero(shift);
    for b in basis {
        let c: i64 = rng.gen_range(-5..=5);
        out.add_scaled(&F::from_i64(c), b);
    }
    out
}

/// `x^n` for a degree-0 map, blockwise.
pub fn power<F: Scalar>(x: &GradedMap<F>, n: usize) -> GradedMap<F> {
    GradedMap { shift: 0, blocks: x.blocks.iter().map(|(&k, b)| (k, b.pow(n))).collect() }
}

/// Fitting decomposition `M = ker(a^N) + im(a^N)` of a degree-0 endomorphism:
/// returns `(incl, proj, dims)` for the image part and then the kernel part.
#[allow(clippy::type_complexity)]
pub fn fitting_split<F: Scalar>(
    dims: &Dims,
    a: &GradedMap<F>,
) -> [(GradedMap<F>, GradedMap<F>, Dims); 2] {
    let mut parts: [(GradedMap<F>, GradedMap<F>, Dims); 2] =
        [(GradedMap::zero(0), GradedMap::zero(0), Dims::new()), (GradedMap::zero(0), GradedMap::zero(0), Dims::new())];
    for (&k, &n) in dims {
        let b = a.block_or_zero(k, n, n).pow(n);
        let im = b.column_basis();
        let ker = b.kernel();
        let r = im.cols();
        let p = im.hstack(&ker);
        let pinv = p.inverse().expect("Fitting decomposition is direct");
        let rows_im: Vec<usize> = (0..r).collect();
        let rows_ker: Vec<usize> = (r..n).collect();
        let all: Vec<usize> = (0..n).collect();
        if r > 0 {
            parts[0].0.blocks.insert(k, im);
            parts[0].1.blocks.insert(k, pinv.submatrix(&rows_im, &all));
            parts[0].2.insert(k, r);
        }
        if r < n {
            parts[1].0.blocks.insert(k, ker);
            parts[1].1.blocks.insert(k, pinv.submatrix(&rows_ker, &all));
            parts[1].2.insert(k, n - r);
        }
    }
    parts
}

/// Dense univariate polynomials, coefficient of `x^i` at index `i`.
pub mod upoly {
    use crate::field::Scalar;

    pub fn trim<F: Scalar>(mut p: Vec<F>) -> Vec<F> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn derivative<F: Scalar>(p: &[F]) -> Vec<F> {
        trim(p.iter().enumerate().skip(1).map(|(i, c)| c.clone() * &F::from_i64(i as i64)).collect())
    }

    /// `(quotient, remainder)`.
    pub fn divrem<F: Scalar>(a: &[F], b: &[F]) -> (Vec<F>, Vec<F>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead = b[db].inv();
        let mut q = vec![F::zero(); r.len().saturating_sub(db).max(1)];
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let c = r[r.len() - 1].clone() * &lead;
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] -= c.clone() * bc;
            }
            q[shift] = c;
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn monic<F: Scalar>(p: Vec<F>) -> Vec<F> {
        let p = trim(p);
        match p.last() {
            Some(l) => {
                let inv = l.inv();
                p.iter().map(|c| c.clone() * &inv).collect()
            }
            None => p,
        }
    }

    pub fn gcd<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let (_, r) = divrem(&a, &b);
            a = b;
            b = r;
        }
        monic(a)
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree<F: Scalar>(p: &[F]) -> Vec<F> {
        let g = gcd(p, &derivative(p));
        monic(divrem(p, &g).0)
    }

    /// Roots in the field of a polynomial of degree at most 2.
    pub fn small_roots<F: Scalar>(p: &[F]) -> Option<Vec<F>> {
        let p = monic(p.to_vec());
        match p.len() {
            2 => Some(vec![-p[0].clone()]),
            3 => {
                let (c, b) = (p[0].clone(), p[1].clone());
                let disc = b.clone() * &b - F::from_i64(4) * c;
                let r = disc.sqrt_exact()?;
                let half = F::from_frac(1, 2);
                Some(vec![(-b.clone() + &r) * &half, (-b - r) * half])
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, Q5};

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn prepend_dims_of_two_letters() {
        let d = prepend_dims(&prepend_dims(&Dims::from([(0, 1)])));
        assert_eq!(d, Dims::from([(-2, 1), (0, 2), (2, 1)]));
    }

    #[test]
    fn hom_space_of_trivial_module() {
        let t = GradedModule::<Rational>::trivial(2);
        assert_eq!(hom_space(&t, &t, 0).len(), 1);
        assert!(hom_space(&t, &t, 2).is_empty());
    }

    #[test]
    fn fitting_of_projection() {
        let dims = Dims::from([(0, 2)]);
        let a = GradedMap { shift: 0, blocks: BTreeMap::from([(0, Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(0)]]))]) };
        let [im, ker] = fitting_split(&dims, &a);
        assert_eq!(im.2, Dims::from([(0, 1)]));
        assert_eq!(ker.2, Dims::from([(0, 1)]));
        assert_eq!(im.1.compose(&im.0), GradedMap::identity(&im.2));
    }

    #[test]
    fn univariate_helpers() {
        // (x - 1)^2 (x + 2)
        let p = vec![q(2), q(-3), q(0), q(1)];
        let sf = upoly::squarefree(&p);
        assert_eq!(sf, vec![q(-2), q(1), q(1)]);
        let mut roots = upoly::small_roots(&sf).unwrap();
        roots.sort();
        assert_eq!(roots, vec![q(-2), q(1)]);
        // x^2 - x - 1 has roots (1 +- sqrt5)/2 in Q(sqrt5) only
        let g = vec![q(-1), q(-1), q(1)];
        assert!(upoly::small_roots(&g).is_none());
        let g5: Vec<Q5> = g.iter().map(|c| Q5::from_rational(c.clone())).collect();
        assert_eq!(upoly::small_roots(&g5).unwrap().len(), 2);
    }
}
