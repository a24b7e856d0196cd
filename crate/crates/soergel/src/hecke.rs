//! Hecke algebra in the standard basis, the bar involution and the
//! Kazhdan–Lusztig basis.
//!
//! Everything here works on a [`GroupTable`], so it is independent of the
//! scalar field of the realization. Truncated tables of infinite groups are
//! fine as long as a computation stays below the enumerated length.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock};

use crate::coxeter::GroupTable;

/// Laurent polynomial in `v` with integer coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn monomial(exp: i32, coef: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef);
        p
    }

    /// `v^{-1} - v`, the constant of the quadratic relation.
    pub fn quadratic() -> Self {
        Self::from_terms([(-1, 1), (1, -1)])
    }

    /// Quantum integer `[m] = v^{1-m} + v^{3-m} + ... + v^{m-1}`.
    pub fn quantum(m: u32) -> Self {
        let m = m as i32;
        Self::from_terms((0..m).map(|k| (1 - m + 2 * k, 1)))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i32, coef: i64) {
        if coef == 0 {
            return;
        }
        let slot = self.0.entry(exp).or_insert(0);
        *slot += coef;
        if *slot == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    /// `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    pub fn shift(&self, by: i32) -> Self {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + by, c)).collect())
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, c * k)).collect())
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.0.values().all(|&c| c > 0)
    }

    /// No negative powers of `v`.
    pub fn is_polynomial(&self) -> bool {
        self.min_degree().is_none_or(|d| d >= 0)
    }

    /// Value at `v = 1`.
    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    /// Sparse `exp:coef` pairs joined by commas; `0` for the zero polynomial.
    pub fn to_sparse(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.0.iter().map(|(e, c)| format!("{e}:{c}")).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.0 {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, abs) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => write!(f, "v")?,
                (1, a) => write!(f, "{a}v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, a) => write!(f, "{a}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, o: &LaurentPoly) {
        for (&e, &c) in &o.0 {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, o: &LaurentPoly) {
        for (&e, &c) in &o.0 {
            self.add_term(e, -c);
        }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &o.0 {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

/// Element of the Hecke algebra in standard coordinates `sum_w p_w H_w`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct HeckeElement(BTreeMap<usize, LaurentPoly>);

impl HeckeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `H_w`.
    pub fn basis(w: usize) -> Self {
        Self::term(w, LaurentPoly::one())
    }

    pub fn term(w: usize, p: LaurentPoly) -> Self {
        let mut h = Self::zero();
        h.add_term(w, &p);
        h
    }

    pub fn add_term(&mut self, w: usize, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.0.entry(w).or_default();
        *slot += p;
        if slot.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, w: usize) -> LaurentPoly {
        self.0.get(&w).cloned().unwrap_or_default()
    }

    pub fn get(&self, w: usize) -> Option<&LaurentPoly> {
        self.0.get(&w)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &LaurentPoly)> + '_ {
        self.0.iter().map(|(&w, p)| (w, p))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiply every coordinate by a Laurent polynomial.
    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut h = Self::zero();
        for (&w, q) in &self.0 {
            h.add_term(w, &(q * p));
        }
        h
    }

    pub fn add_scaled(&mut self, p: &LaurentPoly, o: &HeckeElement) {
        for (&w, q) in &o.0 {
            self.add_term(w, &(q * p));
        }
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter().map(|(w, p)| (format!("H{w}"), p))).finish()
    }
}

impl AddAssign<&HeckeElement> for HeckeElement {
    fn add_assign(&mut self, o: &HeckeElement) {
        for (&w, p) in &o.0 {
            self.add_term(w, p);
        }
    }
}

impl SubAssign<&HeckeElement> for HeckeElement {
    fn sub_assign(&mut self, o: &HeckeElement) {
        for (&w, p) in &o.0 {
            self.add_term(w, &-p);
        }
    }
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, o: &HeckeElement) -> HeckeElement {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, o: &HeckeElement) -> HeckeElement {
        let mut r = self.clone();
        r -= o;
        r
    }
}

/// Coordinates in the Kazhdan–Lusztig basis.
pub type KlCoords = BTreeMap<usize, LaurentPoly>;

/// Decomposition of one structure constant into quantum integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumDecomposition {
    pub poly: LaurentPoly,
    /// `(m, multiplicity)` pairs, largest `m` first.
    pub parts: Vec<(u32, i64)>,
    pub ok: bool,
}

/// Outcome of [`HeckeAlgebra::unimodality_check`].
#[derive(Clone, Debug)]
pub struct UnimodalityReport {
    pub x: usize,
    pub y: usize,
    pub decompositions: BTreeMap<usize, QuantumDecomposition>,
}

impl UnimodalityReport {
    pub fn passed(&self) -> bool {
        self.decompositions.values().all(|d| d.ok)
    }

    pub fn failures(&self) -> Vec<usize> {
        self.decompositions.iter().filter(|(_, d)| !d.ok).map(|(&z, _)| z).collect()
    }
}

/// Greedy decomposition into quantum integers `[m]` with the multiplicities read
/// off the top coefficient.
pub fn quantum_decompose(p: &LaurentPoly) -> QuantumDecomposition {
    let mut rest = p.clone();
    let mut parts = Vec::new();
    let mut ok = true;
    while let Some(top) = rest.max_degree() {
        let c = rest.coeff(top);
        if top < 0 || c < 0 {
            ok = false;
            break;
        }
        let m = top as u32 + 1;
        parts.push((m, c));
        rest -= &LaurentPoly::quantum(m).scale(c);
    }
    QuantumDecomposition { poly: p.clone(), parts, ok }
}

/// The Hecke algebra of an enumerated group, with memoized KL basis.
pub struct HeckeAlgebra {
    table: Arc<GroupTable>,
    kl: Vec<OnceLock<HeckeElement>>,
    bar_basis: Vec<OnceLock<HeckeElement>>,
}

impl fmt::Debug for HeckeAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HeckeAlgebra").field("elements", &self.table.len()).finish()
    }
}

impl HeckeAlgebra {
    pub fn new(table: impl Into<Arc<GroupTable>>) -> Self {
        let table = table.into();
        let n = table.len();
        HeckeAlgebra {
            table,
            kl: (0..n).map(|_| OnceLock::new()).collect(),
            bar_basis: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn table_arc(&self) -> Arc<GroupTable> {
        self.table.clone()
    }

    fn right(&self, w: usize, s: usize) -> usize {
        self.table.right_mult(w, s).unwrap_or_else(|| {
            panic!("product of element {w} with generator {s} leaves the enumerated range")
        })
    }

    /// `a * H_s`.
    pub fn mul_generator(&self, a: &HeckeElement, s: usize) -> HeckeElement {
        let q = LaurentPoly::quadratic();
        let mut out = HeckeElement::zero();
        for (w, p) in a.terms() {
            let ws = self.right(w, s);
            out.add_term(ws, p);
            if self.table.length(ws) < self.table.length(w) {
                out.add_term(w, &(p * &q));
            }
        }
        out
    }

    /// `a * (H_s + v) = a * H̲_s`.
    pub fn mul_kl_generator(&self, a: &HeckeElement, s: usize) -> HeckeElement {
        let mut out = self.mul_generator(a, s);
        out.add_scaled(&LaurentPoly::v(), a);
        out
    }

    /// Product in the standard basis; the right factor is expanded letter by
    /// letter along canonical reduced words.
    pub fn std_mult(&self, a: &HeckeElement, b: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, p) in b.terms() {
            let mut acc = a.scale(p);
            for &s in self.table.word(w) {
                acc = self.mul_generator(&acc, s);
            }
            out += &acc;
        }
        out
    }

    /// `d(H_w)`, memoized.
    fn bar_of_basis(&self, w: usize) -> &HeckeElement {
        self.bar_basis[w].get_or_init(|| {
            let word = self.table.word(w);
            let Some((&s, _)) = word.split_last() else {
                return HeckeElement::basis(w);
            };
            let prev = self.table.right_mult(w, s).expect("descent stays in the table");
            // d(H_s) = H_s + v - v^{-1}
            let prev_bar = self.bar_of_basis(prev);
            let mut out = self.mul_generator(prev_bar, s);
            out.add_scaled(&(-&LaurentPoly::quadratic()), prev_bar);
            out
        })
    }

    /// The bar involution `d`.
    pub fn bar(&self, a: &HeckeElement) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (w, p) in a.terms() {
            out.add_scaled(&p.bar(), self.bar_of_basis(w));
        }
        out
    }

    /// `H̲_w`, computed by multiply-and-correct along the last letter of the
    /// canonical word.
    pub fn kl_basis_element(&self, w: usize) -> &HeckeElement {
        self.kl[w].get_or_init(|| {
            let word = self.table.word(w);
            let Some((&s, _)) = word.split_last() else {
                return HeckeElement::basis(w);
            };
            let y = self.table.right_mult(w, s).expect("descent stays in the table");
            let mut cur = self.mul_kl_generator(self.kl_basis_element(y), s);
            self.correct_constant_terms(&mut cur, w);
            cur
        })
    }

    /// Subtract multiples of lower KL elements until every coordinate below
    /// `top` lies in `v Z[v]`.
    fn correct_constant_terms(&self, cur: &mut HeckeElement, top: usize) {
        let mut below: Vec<usize> = cur.support().filter(|&z| z != top).collect();
        below.sort_by_key(|&z| std::cmp::Reverse(self.table.length(z)));
        for z in below {
            let c = cur.coeff(z).coeff(0);
            if c != 0 {
                let corr = self.kl_basis_element(z).clone();
                cur.add_scaled(&LaurentPoly::monomial(0, -c), &corr);
            }
        }
        debug_assert!(cur.terms().all(|(z, p)| z == top || p.min_degree().is_some_and(|d| d >= 1)));
    }

    /// `h_{y,w}`.
    pub fn kl_poly(&self, y: usize, w: usize) -> LaurentPoly {
        self.kl_basis_element(w).coeff(y)
    }

    /// `mu(y, w)`: coefficient of `v` in `h_{y,w}`.
    pub fn w_graph_mu(&self, y: usize, w: usize) -> i64 {
        if y == w {
            return 0;
        }
        self.kl_poly(y, w).coeff(1)
    }

    /// Expansion of an arbitrary element in the KL basis, by peeling off
    /// leading terms of maximal length.
    pub fn kl_expand(&self, a: &HeckeElement) -> KlCoords {
        let mut rest = a.clone();
        let mut out = KlCoords::new();
        while let Some(z) = rest.support().max_by_key(|&z| (self.table.length(z), z)) {
            let p = rest.coeff(z);
            rest.add_scaled(&-&p, self.kl_basis_element(z));
            out.insert(z, p);
        }
        out
    }

    /// `sum_z coords[z] H̲_z` in standard coordinates.
    pub fn from_kl_coords(&self, coords: &KlCoords) -> HeckeElement {
        let mut out = HeckeElement::zero();
        for (&z, p) in coords {
            out.add_scaled(p, self.kl_basis_element(z));
        }
        out
    }

    /// Structure constants `mu_{x,y}^z` of `H̲_x H̲_y`.
    pub fn mu(&self, x: usize, y: usize) -> KlCoords {
        let prod = self.std_mult(self.kl_basis_element(x), self.kl_basis_element(y));
        self.kl_expand(&prod)
    }

    /// Right multiplication by `H̲_s` in KL coordinates:
    /// `H̲_z H̲_s = (v + v^{-1}) H̲_z` if `zs < z`, else
    /// `H̲_{zs} + sum_{u < z, us < u} mu(u, z) H̲_u`.
    pub fn kl_coords_mul_generator(&self, a: &KlCoords, s: usize) -> KlCoords {
        let mut out = KlCoords::new();
        let mut add = |z: usize, p: &LaurentPoly| {
            let slot = out.entry(z).or_default();
            *slot += p;
            if slot.is_zero() {
                out.remove(&z);
            }
        };
        let two = LaurentPoly::quantum(2);
        for (&z, p) in a {
            let zs = self.right(z, s);
            if self.table.length(zs) < self.table.length(z) {
                add(z, &(p * &two));
                continue;
            }
            add(zs, p);
            for (u, h) in self.kl_basis_element(z).terms() {
                if u == z || !self.table.is_right_descent(u, s) {
                    continue;
                }
                let m = h.coeff(1);
                if m != 0 {
                    add(u, &p.scale(m));
                }
            }
        }
        out
    }

    /// All products `H̲_x H̲_y` for a fixed `x`, in KL coordinates, for every `y`
    /// with `l(x) + l(y)` inside the enumerated range. Uses the recursion
    /// `H̲_x H̲_y = H̲_x H̲_{y'} H̲_s - sum_z mu(z, y') H̲_x H̲_z` for `y = y's`.
    pub fn mu_table(&self, x: usize) -> Vec<Option<KlCoords>> {
        let n = self.table.len();
        let bound = self.table.max_length().map(|m| m.saturating_sub(self.table.length(x)));
        let mut out: Vec<Option<KlCoords>> = vec![None; n];
        // BFS order lists elements by nondecreasing length
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| self.table.length(y));
        for y in order {
            if bound.is_some_and(|b| self.table.length(y) > b) {
                continue;
            }
            let word = self.table.word(y);
            let coords = match word.split_last() {
                None => KlCoords::from([(x, LaurentPoly::one())]),
                Some((&s, _)) => {
                    let yp = self.table.right_mult(y, s).unwrap();
                    let mut acc = self.kl_coords_mul_generator(out[yp].as_ref().unwrap(), s);
                    for (z, h) in self.kl_basis_element(yp).terms() {
                        if z == yp || !self.table.is_right_descent(z, s) {
                            continue;
                        }
                        let m = h.coeff(1);
                        if m == 0 {
                            continue;
                        }
                        for (&u, p) in out[z].as_ref().unwrap() {
                            let slot = acc.entry(u).or_default();
                            *slot -= &p.scale(m);
                            if slot.is_zero() {
                                acc.remove(&u);
                            }
                        }
                    }
                    acc
                }
            };
            out[y] = Some(coords);
        }
        out
    }

    /// `g_{y,w}` with `H_w = sum_y g_{y,w} H̲_y`.
    pub fn inverse_kl(&self, w: usize) -> KlCoords {
        self.kl_expand(&HeckeElement::basis(w))
    }

    /// Bilinear form with `(H_x, H_y) = delta_{xy}`.
    pub fn pairing(&self, a: &HeckeElement, b: &HeckeElement) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (w, p) in a.terms() {
            if let Some(q) = b.get(w) {
                out += &(p * q);
            }
        }
        out
    }

    /// Predicted graded dimension of `Hom(B_x, B_y)`: `(d(H̲_x), H̲_y)`.
    pub fn hom_formula(&self, x: usize, y: usize) -> LaurentPoly {
        self.pairing(&self.bar(self.kl_basis_element(x)), self.kl_basis_element(y))
    }

    /// `H̲_{s_1} ... H̲_{s_n}` in standard coordinates.
    pub fn bs_character(&self, word: &[usize]) -> HeckeElement {
        word.iter().fold(HeckeElement::basis(GroupTable::IDENTITY), |acc, &s| self.mul_kl_generator(&acc, s))
    }

    /// KL-basis multiplicities of the Bott–Samelson character of `word`.
    pub fn predicted_multiplicities(&self, word: &[usize]) -> KlCoords {
        self.kl_expand(&self.bs_character(word))
    }

    /// Quantum-integer decomposition of every `mu_{x,y}^z`.
    pub fn unimodality_check(&self, x: usize, y: usize) -> UnimodalityReport {
        self.unimodality_from(x, y, &self.mu(x, y))
    }

    pub fn unimodality_from(&self, x: usize, y: usize, mu: &KlCoords) -> UnimodalityReport {
        let decompositions = mu.iter().map(|(&z, p)| (z, quantum_decompose(p))).collect();
        UnimodalityReport { x, y, decompositions }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{CoxeterSystem, Preset, RealizationChoice};
    use crate::field::Rational;
    use proptest::prelude::*;

    fn algebra(p: Preset) -> HeckeAlgebra {
        let sys = CoxeterSystem::<Rational>::build(p.coxeter_matrix(), RealizationChoice::Cartan(p.cartan_matrix().unwrap()))
            .unwrap();
        HeckeAlgebra::new(sys.enumerate(None, 10_000).unwrap().table)
    }

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn quadratic_relation() {
        let h = algebra(Preset::A(2));
        let s = h.table().find(&[0]).unwrap();
        let sq = h.std_mult(&HeckeElement::basis(s), &HeckeElement::basis(s));
        let mut expect = HeckeElement::basis(0);
        expect.add_term(s, &lp(&[(-1, 1), (1, -1)]));
        assert_eq!(sq, expect);
    }

    #[test]
    fn identity_is_neutral_and_lengths_add() {
        let h = algebra(Preset::A(2));
        let t = h.table();
        for w in 0..t.len() {
            assert_eq!(h.std_mult(&HeckeElement::basis(0), &HeckeElement::basis(w)), HeckeElement::basis(w));
        }
        let (s, tt, st) = (t.find(&[0]).unwrap(), t.find(&[1]).unwrap(), t.find(&[0, 1]).unwrap());
        assert_eq!(h.std_mult(&HeckeElement::basis(s), &HeckeElement::basis(tt)), HeckeElement::basis(st));
    }

    #[test]
    fn bar_of_generator() {
        let h = algebra(Preset::A(2));
        let s = h.table().find(&[0]).unwrap();
        let mut expect = HeckeElement::basis(s);
        expect.add_term(0, &lp(&[(1, 1), (-1, -1)]));
        assert_eq!(h.bar(&HeckeElement::basis(s)), expect);
        assert_eq!(h.bar(&HeckeElement::basis(0)), HeckeElement::basis(0));
    }

    #[test]
    fn small_kl_elements() {
        let h = algebra(Preset::A(2));
        let t = h.table();
        let s = t.find(&[0]).unwrap();
        let mut hs = HeckeElement::basis(s);
        hs.add_term(0, &LaurentPoly::v());
        assert_eq!(h.kl_basis_element(s), &hs);
        assert_eq!(h.kl_basis_element(0), &HeckeElement::basis(0));
        let w0 = t.find(&[0, 1, 0]).unwrap();
        for y in 0..t.len() {
            assert_eq!(h.kl_poly(y, w0), LaurentPoly::monomial(3 - t.length(y) as i32, 1));
        }
    }

    #[test]
    fn mu_of_generator_squared() {
        let h = algebra(Preset::A(2));
        let s = h.table().find(&[0]).unwrap();
        let mu = h.mu(s, s);
        assert_eq!(mu.len(), 1);
        assert_eq!(mu[&s], LaurentPoly::quantum(2));
        assert_eq!(h.mu(0, s), KlCoords::from([(s, LaurentPoly::one())]));
    }

    #[test]
    fn length_additive_mu_is_integral() {
        let h = algebra(Preset::B(3));
        let t = h.table();
        for x in 0..t.len() {
            for s in 0..t.rank() {
                if t.is_right_descent(x, s) {
                    continue;
                }
                let gs = t.find(&[s]).unwrap();
                for p in h.mu(x, gs).values() {
                    assert!(p.min_degree() == Some(0) && p.max_degree() == Some(0), "{p}");
                }
            }
        }
    }

    #[test]
    fn inverse_kl_of_generator() {
        let h = algebra(Preset::A(2));
        let s = h.table().find(&[0]).unwrap();
        let g = h.inverse_kl(s);
        assert_eq!(g[&s], LaurentPoly::one());
        assert_eq!(g[&0], lp(&[(1, -1)]));
    }

    #[test]
    fn pairing_and_hom_formula() {
        let h = algebra(Preset::B(2));
        let t = h.table();
        let s = t.find(&[0]).unwrap();
        assert_eq!(h.pairing(&HeckeElement::basis(s), &HeckeElement::basis(s)), LaurentPoly::one());
        for x in 0..t.len() {
            for y in 0..t.len() {
                let f = h.hom_formula(x, y);
                assert!(f.is_polynomial());
                assert_eq!(f.coeff(0), i64::from(x == y));
            }
        }
    }

    #[test]
    fn bs_characters() {
        let h = algebra(Preset::A(2));
        let s = h.table().find(&[0]).unwrap();
        assert_eq!(h.bs_character(&[]), HeckeElement::basis(0));
        assert_eq!(h.predicted_multiplicities(&[0]), KlCoords::from([(s, LaurentPoly::one())]));
        assert_eq!(h.predicted_multiplicities(&[0, 0]), KlCoords::from([(s, LaurentPoly::quantum(2))]));
        let sts = h.table().find(&[0, 1, 0]).unwrap();
        assert_eq!(
            h.predicted_multiplicities(&[0, 1, 0]),
            KlCoords::from([(s, LaurentPoly::one()), (sts, LaurentPoly::one())])
        );
    }

    #[test]
    fn quantum_decomposition() {
        let d = quantum_decompose(&LaurentPoly::quantum(2));
        assert!(d.ok);
        assert_eq!(d.parts, vec![(2, 1)]);
        let z = quantum_decompose(&LaurentPoly::zero());
        assert!(z.ok && z.parts.is_empty());
        assert!(!quantum_decompose(&lp(&[(-1, 1), (1, 2)])).ok);
        let mixed = &LaurentPoly::quantum(3).scale(2) + &LaurentPoly::quantum(1);
        assert_eq!(quantum_decompose(&mixed).parts, vec![(3, 2), (1, 1)]);
    }

    #[test]
    fn fast_mu_table_matches_back_substitution() {
        for p in [Preset::A(3), Preset::B(2), Preset::I2(6)] {
            let h = algebra(p);
            for x in 0..h.table().len() {
                let table = h.mu_table(x);
                for (y, fast) in table.iter().enumerate() {
                    assert_eq!(fast.as_ref().unwrap(), &h.mu(x, y), "{p:?} x={x} y={y}");
                }
            }
        }
    }

    #[test]
    fn truncated_affine_kl() {
        let sys =
            CoxeterSystem::<Rational>::build(Preset::ATilde(1).coxeter_matrix(), RealizationChoice::Cartan(Preset::ATilde(1).cartan_matrix().unwrap()))
                .unwrap();
        let h = HeckeAlgebra::new(sys.enumerate(Some(6), 1000).unwrap().table);
        let t = h.table();
        for w in 0..t.len() {
            for (y, p) in h.kl_basis_element(w).terms() {
                // infinite dihedral: h_{y,w} = v^{l(w)-l(y)}
                assert_eq!(p, &LaurentPoly::monomial((t.length(w) - t.length(y)) as i32, 1));
            }
        }
        let table = h.mu_table(t.find(&[0, 1]).unwrap());
        assert!(table.iter().filter(|c| c.is_some()).count() < t.len());
    }

    fn arb_element(n: usize) -> impl Strategy<Value = HeckeElement> {
        proptest::collection::vec((0..n, -2i32..3, -3i64..4), 0..5).prop_map(|terms| {
            let mut h = HeckeElement::zero();
            for (w, e, c) in terms {
                h.add_term(w, &LaurentPoly::monomial(e, c));
            }
            h
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bar_is_an_involutive_ring_map(a in arb_element(8), b in arb_element(8)) {
            let h = algebra(Preset::B(2));
            prop_assert_eq!(h.bar(&h.bar(&a)), a.clone());
            prop_assert_eq!(h.bar(&h.std_mult(&a, &b)), h.std_mult(&h.bar(&a), &h.bar(&b)));
        }

        #[test]
        fn std_mult_is_associative(a in arb_element(6), b in arb_element(6), c in arb_element(6)) {
            let h = algebra(Preset::A(2));
            prop_assert_eq!(h.std_mult(&h.std_mult(&a, &b), &c), h.std_mult(&a, &h.std_mult(&b, &c)));
        }
    }
}
