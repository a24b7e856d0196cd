//! Rouquier complexes `F_s1 (x) ... (x) F_sn` after augmentation, with
//! `F_s = [B_s -> R(1)]` in cohomological degrees 0 and 1.
//!
//! The term in cohomological degree `k` is the sum over `k`-element sets `J`
//! of positions of `BS(word minus J)(k)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coxeter::{CoxeterSystem, GroupTable};
use crate::field::Scalar;
use crate::graded::{dim_at, prepend_dims, Dims, GradedMap, GradedModule};
use crate::hecke::{HeckeAlgebra, HeckeElement, LaurentPoly};
use crate::linalg::Matrix;
use crate::polyalg::{act_generator, demazure, root_poly, GradedPolynomial};
use crate::soergel::{build_bs, push_polynomial, SoergelError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignConvention {
    /// `(-1)^(number of deleted positions to the left)` on each deletion.
    Koszul,
    /// `(-1)^(number of deleted positions to the right)`.
    ReverseKoszul,
    /// Every deletion with sign `+1`. This is not a complex in general; it is
    /// only used to compare ranks of differentials.
    AllPlus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexTerm {
    pub deleted: Vec<usize>,
    pub subword: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ModuleComplex<F> {
    pub word: Vec<usize>,
    pub terms: Vec<Vec<ComplexTerm>>,
    /// Direct sum of the terms in each cohomological degree (no form).
    pub spaces: Vec<GradedModule<F>>,
    /// `d^k : spaces[k] -> spaces[k+1]`, degree 0.
    pub differentials: Vec<GradedMap<F>>,
}

/// `id (x) m_s (x) id` deleting position `p` of `BS(word)`, as a map of
/// degree +1 into `BS(word minus p)`.
pub fn deletion_map<F: Scalar>(sys: &CoxeterSystem<F>, word: &[usize], p: usize) -> GradedMap<F> {
    let real = sys.realization();
    let after = build_bs(sys, &word[p + 1..]).expect("letters were checked").module;
    let s = word[p];
    let l_alpha = after.action(&real.roots[s]);
    let mut src = prepend_dims(&after.dims);
    let mut tgt = after.dims.clone();
    let mut blocks = BTreeMap::new();
    for (&k, &n) in &src {
        // c_e (x) x -> x and c_s (x) x -> alpha_s x
        let m = dim_at(&tgt, k + 1);
        if m == 0 {
            continue;
        }
        let se = dim_at(&after.dims, k + 1);
        let mut b = Matrix::zeros(m, n);
        for i in 0..se {
            b[(i, i)] = F::one();
        }
        if let Some(la) = l_alpha.blocks.get(&(k - 1)) {
            b.set_block(0, se, la);
        }
        blocks.insert(k, b);
    }
    let mut map = GradedMap { shift: 1, blocks };
    for _ in word[..p].iter() {
        map = map.tensor_left(&src, &tgt);
        src = prepend_dims(&src);
        tgt = prepend_dims(&tgt);
    }
    map
}

fn direct_sum<F: Scalar>(parts: &[GradedModule<F>], nvars: usize) -> (GradedModule<F>, Vec<BTreeMap<i32, usize>>) {
    let mut dims = Dims::new();
    let mut offsets = Vec::with_capacity(parts.len());
    for p in parts {
        let mut off = BTreeMap::new();
        for (&k, &n) in &p.dims {
            let slot = dims.entry(k).or_insert(0);
            off.insert(k, *slot);
            *slot += n;
        }
        offsets.push(off);
    }
    let mut actions = Vec::with_capacity(nvars);
    for i in 0..nvars {
        let mut blocks = BTreeMap::new();
        for (&k, &n) in &dims {
            let m = dim_at(&dims, k + 2);
            if m == 0 {
                continue;
            }
            let mut b = Matrix::zeros(m, n);
            for (p, off) in parts.iter().zip(&offsets) {
                if let (Some(a), Some(&c), Some(&r)) = (p.actions[i].blocks.get(&k), off.get(&k), off.get(&(k + 2))) {
                    b.set_block(r, c, a);
                }
            }
            blocks.insert(k, b);
        }
        actions.push(GradedMap { shift: 2, blocks });
    }
    (GradedModule { dims, actions, form: BTreeMap::new() }, offsets)
}

pub fn build_complex<F: Scalar>(sys: &CoxeterSystem<F>, word: &[usize]) -> Result<ModuleComplex<F>, SoergelError> {
    build_complex_with(sys, word, SignConvention::Koszul)
}

pub fn build_complex_with<F: Scalar>(
    sys: &CoxeterSystem<F>,
    word: &[usize],
    signs: SignConvention,
) -> Result<ModuleComplex<F>, SoergelError> {
    let n = word.len();
    let nv = sys.dim();
    let mut terms: Vec<Vec<ComplexTerm>> = vec![Vec::new(); n + 1];
    for m in 0..1usize << n {
        let deleted: Vec<usize> = (0..n).filter(|&j| (m >> j) & 1 == 1).collect();
        let subword = (0..n).filter(|&j| (m >> j) & 1 == 0).map(|j| word[j]).collect();
        terms[deleted.len()].push(ComplexTerm { deleted, subword });
    }
    for ts in &mut terms {
        ts.sort_by(|a, b| a.deleted.cmp(&b.deleted));
    }
    let mut spaces = Vec::with_capacity(n + 1);
    let mut offsets = Vec::with_capacity(n + 1);
    for (k, ts) in terms.iter().enumerate() {
        let parts: Vec<GradedModule<F>> =
            ts.iter().map(|t| build_bs(sys, &t.subword).map(|b| b.module.shifted(k as i32))).collect::<Result<_, _>>()?;
        let (sum, off) = direct_sum(&parts, nv);
        spaces.push(sum);
        offsets.push(off);
    }
    let mut differentials = Vec::with_capacity(n);
    for k in 0..n {
        let (src, tgt) = (&spaces[k].dims, &spaces[k + 1].dims);
        let mut blocks: BTreeMap<i32, Matrix<F>> = src
            .iter()
            .filter(|(&d, _)| dim_at(tgt, d) > 0)
            .map(|(&d, &c)| (d, Matrix::zeros(dim_at(tgt, d), c)))
            .collect();
        for (ti, t) in terms[k].iter().enumerate() {
            for j in (0..n).filter(|j| !t.deleted.contains(j)) {
                let before = t.deleted.iter().filter(|&&i| i < j).count();
                let after = t.deleted.len() - before;
                let sign = match signs {
                    SignConvention::Koszul if before % 2 == 1 => -F::one(),
                    SignConvention::ReverseKoszul if after % 2 == 1 => -F::one(),
                    _ => F::one(),
                };
                let mut target = t.deleted.clone();
                target.push(j);
                target.sort();
                let ui = terms[k + 1].iter().position(|u| u.deleted == target).expect("every subset is a term");
                let p = j - before;
                let del = deletion_map(sys, &t.subword, p);
                for (&d, b) in &del.blocks {
                    // unshifted source degree d is degree d - k of the term
                    let deg = d - k as i32;
                    let (Some(&c0), Some(&r0)) = (offsets[k][ti].get(&deg), offsets[k + 1][ui].get(&deg)) else {
                        continue;
                    };
                    if let Some(block) = blocks.get_mut(&deg) {
                        block.set_block(r0, c0, &b.scale(&sign));
                    }
                }
            }
        }
        differentials.push(GradedMap { shift: 0, blocks });
    }
    Ok(ModuleComplex { word: word.to_vec(), terms, spaces, differentials })
}

impl<F: Scalar> ModuleComplex<F> {
    /// `d^{k+1} d^k = 0` for all `k`.
    pub fn is_complex(&self) -> bool {
        self.differentials.windows(2).all(|w| w[1].compose(&w[0]).is_zero())
    }

    /// Every differential commutes with the action of every coordinate form.
    pub fn differentials_are_module_maps(&self) -> bool {
        self.differentials.iter().enumerate().all(|(k, d)| {
            (0..self.spaces[k].nvars())
                .all(|i| d.compose(&self.spaces[k].actions[i]).sub(&self.spaces[k + 1].actions[i].compose(d)).is_zero())
        })
    }

    /// `sum_k (-1)^k sum_n dim C^k_n v^n`.
    pub fn euler_characteristic(&self) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (k, sp) in self.spaces.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            for (&n, &d) in &sp.dims {
                out.add_term(n, sign * d as i64);
            }
        }
        out
    }
}

/// Rank of each differential in each internal degree.
pub fn differential_ranks<F: Scalar>(c: &ModuleComplex<F>) -> Vec<BTreeMap<i32, usize>> {
    c.differentials.iter().map(|d| d.blocks.iter().map(|(&n, b)| (n, b.rank())).collect()).collect()
}

/// Graded dimensions of the cohomology in each cohomological degree.
pub fn homology<F: Scalar>(c: &ModuleComplex<F>) -> Vec<Dims> {
    let rank_of = |k: usize, n: i32| -> usize {
        c.differentials.get(k).and_then(|d| d.blocks.get(&n)).map_or(0, |b| b.rank())
    };
    let mut out = Vec::with_capacity(c.spaces.len());
    for (k, sp) in c.spaces.iter().enumerate() {
        let mut h = Dims::new();
        for (&n, &d) in &sp.dims {
            let incoming = if k == 0 { 0 } else { rank_of(k - 1, n) };
            let dim = d - rank_of(k, n) - incoming;
            if dim > 0 {
                h.insert(n, dim);
            }
        }
        out.push(h);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport {
    pub word: Vec<usize>,
    pub reduced: bool,
    pub homology: Vec<Dims>,
    /// Internal degree where the only cohomology should sit, for reduced words.
    pub expected_degree: Option<i32>,
    pub is_complex: bool,
    pub concentrated: Option<bool>,
}

impl ConcentrationReport {
    pub fn passed(&self) -> bool {
        self.is_complex && self.concentrated != Some(false)
    }
}

/// Cohomology of the complex of `word`; for reduced words it must be one
/// dimensional, in cohomological degree 0 and internal degree `l(w)`.
pub fn concentration_check<F: Scalar>(
    sys: &CoxeterSystem<F>,
    table: &GroupTable,
    word: &[usize],
) -> Result<ConcentrationReport, SoergelError> {
    let c = build_complex(sys, word)?;
    let h = homology(&c);
    let reduced = table.element_of_word(word).is_some() && table.is_reduced(word);
    let expected_degree = reduced.then_some(word.len() as i32);
    let concentrated = expected_degree.map(|d| {
        h.iter().enumerate().all(|(k, hk)| if k == 0 { *hk == Dims::from([(d, 1)]) } else { hk.is_empty() })
    });
    Ok(ConcentrationReport { word: word.to_vec(), reduced, homology: h, expected_degree, is_complex: c.is_complex(), concentrated })
}

/// `prod_i H_{s_i}` with `H_y` sent to `v^{-l(y)}`.
pub fn hecke_euler_characteristic(hecke: &HeckeAlgebra, word: &[usize]) -> LaurentPoly {
    let table = hecke.table();
    let mut prod = HeckeElement::basis(GroupTable::IDENTITY);
    for &s in word {
        prod = hecke.mul_generator(&prod, s);
    }
    let mut out = LaurentPoly::zero();
    for (y, p) in prod.terms() {
        out = &out + &p.shift(-(table.length(y) as i32));
    }
    out
}

/// A 2x2 matrix of right coefficients on the basis `(c_e, c_s)` of `B_s`:
/// `m[eta][eps]` is the coefficient of `c_eta` in the image of `c_eps`.
pub type BsMatrix<F> = [[GradedPolynomial<F>; 2]; 2];

#[derive(Clone, Debug)]
pub struct SlidingReport<F: Scalar> {
    pub s: usize,
    /// `xi B_s - B_s s(xi)` on `B_s`.
    pub lhs: BsMatrix<F>,
    /// `<xi, alpha_s^vee> delta_s m_s`.
    pub rhs: BsMatrix<F>,
    pub holds: bool,
    /// Both sides after augmenting the right coefficients.
    pub augmented_holds: bool,
}

/// `xi B_s - B_s s(xi) = <xi, alpha_s^vee> delta_s m_s` as endomorphisms of `B_s`.
pub fn sliding_identity_check<F: Scalar>(sys: &CoxeterSystem<F>, s: usize, xi: &[F]) -> SlidingReport<F> {
    let nv = sys.dim();
    let zero = || GradedPolynomial::zero(nv);
    let f = GradedPolynomial::linear(xi);
    let sf = act_generator(sys, s, &f);
    let mut lhs: BsMatrix<F> = [[zero(), zero()], [zero(), zero()]];
    for eps in 0..2u8 {
        for (eta, r) in push_polynomial(sys, &[s], &f, &[eps]) {
            let slot = &mut lhs[eta[0] as usize][eps as usize];
            *slot = slot.add(&r);
        }
        let slot = &mut lhs[eps as usize][eps as usize];
        *slot = slot.sub(&sf);
    }
    // m_s(r (x) r') = r r': c_e -> 1, c_s -> (alpha_s + alpha_s)/2; delta_s(r) = c_s r
    let alpha = root_poly(sys, s);
    let m_images = [GradedPolynomial::one(nv), alpha.add(&alpha).scale(&F::from_frac(1, 2))];
    let c = demazure(sys, s, &f).expect("roots are nonzero").augment();
    let rhs: BsMatrix<F> = [[zero(), zero()], [m_images[0].scale(&c), m_images[1].scale(&c)]];
    let holds = lhs == rhs;
    let augmented_holds = (0..2).all(|i| (0..2).all(|j| lhs[i][j].augment() == rhs[i][j].augment()));
    SlidingReport { s, lhs, rhs, holds, augmented_holds }
}
