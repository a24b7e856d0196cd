//! The graded polynomial ring `R = Sym(V*)`, with linear forms in degree 2.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::field::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not divisible by the root of generator {0}")]
    NotDivisible(usize),
    #[error("root of generator {0} is zero")]
    ZeroRoot(usize),
}

/// Sparse polynomial in `nvars` variables (the dual basis of `V`).
///
/// Monomials are exponent vectors; the map order is lexicographic, which the
/// division routine relies on. Display uses graded-lex order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedPolynomial<F> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, F>,
}

impl<F: Scalar> GradedPolynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        GradedPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, F::one());
        p
    }

    /// The linear form with the given coordinates.
    pub fn linear(form: &[F]) -> Self {
        let n = form.len();
        let mut p = Self::zero(n);
        for (i, c) in form.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: F) {
        debug_assert_eq!(exp.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &F)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, exp: &[u32]) -> F {
        self.terms.get(exp).cloned().unwrap_or_else(F::zero)
    }

    /// Largest polynomial degree of a monomial, `None` for zero.
    pub fn poly_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Graded degree (twice the polynomial degree) if homogeneous.
    pub fn graded_degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(2 * first as i32)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, k: &F) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            r.add_term(e.clone(), c.clone() * k);
        }
        r
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.clone() * c2);
            }
        }
        r
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Substitute `x_i -> images[i]`.
    pub fn substitute(&self, images: &[Self]) -> Self {
        let mut powers: Vec<Vec<Self>> = images.iter().map(|p| vec![Self::one(self.nvars), p.clone()]).collect();
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut term = Self::constant(self.nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            r = r.add(&term);
        }
        r
    }

    /// Exact division by a nonzero linear form, `None` if not divisible.
    pub fn div_linear(&self, form: &[F]) -> Option<Self> {
        // lex-leading variable of the divisor
        let j = form.iter().position(|c| !c.is_zero())?;
        let lead = form[j].inv();
        let divisor = Self::linear(form);
        let mut rest = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e[j] == 0 {
                return None;
            }
            let mut qe = e;
            qe[j] -= 1;
            let mut t = Self::zero(self.nvars);
            t.add_term(qe, c * &lead);
            rest = rest.sub(&t.mul(&divisor));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Constant term: the augmentation `R -> k`.
    pub fn augment(&self) -> F {
        self.coeff(&vec![0; self.nvars])
    }

    /// Random polynomial of degree at most `max_degree` with small integer coefficients.
    pub fn random<G: Rng>(nvars: usize, max_degree: u32, terms: usize, rng: &mut G) -> Self {
        let mut p = Self::zero(nvars);
        for _ in 0..terms {
            let total = rng.gen_range(0..=max_degree);
            let mut e = vec![0u32; nvars];
            for _ in 0..total {
                e[rng.gen_range(0..nvars)] += 1;
            }
            p.add_term(e, F::from_i64(rng.gen_range(-4..=4)));
        }
        p
    }
}

impl<F: Scalar> fmt::Display for GradedPolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        // graded lex, largest first
        keys.sort_by(|a, b| (b.iter().sum::<u32>(), *b).cmp(&(a.iter().sum::<u32>(), *a)));
        let parts: Vec<String> = keys
            .into_iter()
            .map(|e| {
                let mut s = format!("{}", self.terms[e]);
                for (i, &k) in e.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => s.push_str(&format!("*x{}", i + 1)),
                        k => s.push_str(&format!("*x{}^{k}", i + 1)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: Scalar> fmt::Debug for GradedPolynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `w(f) = f o w^{-1}`.
pub fn act<F: Scalar>(w: &GroupElement<F>, f: &GradedPolynomial<F>) -> GradedPolynomial<F> {
    let n = f.nvars();
    let images: Vec<GradedPolynomial<F>> = (0..n).map(|i| GradedPolynomial::linear(&w.inv.row(i))).collect();
    f.substitute(&images)
}

/// Action of the simple reflection `s`.
pub fn act_generator<F: Scalar>(sys: &CoxeterSystem<F>, s: usize, f: &GradedPolynomial<F>) -> GradedPolynomial<F> {
    act(sys.generator(s), f)
}

/// Demazure operator `(f - s f) / alpha_s`.
pub fn demazure<F: Scalar>(
    sys: &CoxeterSystem<F>,
    s: usize,
    f: &GradedPolynomial<F>,
) -> Result<GradedPolynomial<F>, PolyError> {
    let root = &sys.realization().roots[s];
    if root.iter().all(|c| c.is_zero()) {
        return Err(PolyError::ZeroRoot(s));
    }
    f.sub(&act_generator(sys, s, f)).div_linear(root).ok_or(PolyError::NotDivisible(s))
}

pub fn augment<F: Scalar>(f: &GradedPolynomial<F>) -> F {
    f.augment()
}

/// `alpha_s` as a polynomial.
pub fn root_poly<F: Scalar>(sys: &CoxeterSystem<F>, s: usize) -> GradedPolynomial<F> {
    GradedPolynomial::linear(&sys.realization().roots[s])
}

/// `rho` as a polynomial.
pub fn rho_poly<F: Scalar>(sys: &CoxeterSystem<F>) -> GradedPolynomial<F> {
    GradedPolynomial::linear(&sys.realization().rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{Enumeration, Preset, RealizationChoice};
    use std::sync::OnceLock;
    use crate::field::{Rational, Q5};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a2() -> CoxeterSystem<Rational> {
        CoxeterSystem::build(Preset::A(2).coxeter_matrix(), RealizationChoice::Cartan(Preset::A(2).cartan_matrix().unwrap()))
            .unwrap()
    }

    fn h3() -> &'static (CoxeterSystem<Q5>, Enumeration<Q5>) {
        static H3: OnceLock<(CoxeterSystem<Q5>, Enumeration<Q5>)> = OnceLock::new();
        H3.get_or_init(|| {
            let sys = CoxeterSystem::build(Preset::H3.coxeter_matrix(), RealizationChoice::Geometric).unwrap();
            let en = sys.enumerate(None, 1000).unwrap();
            (sys, en)
        })
    }

    #[test]
    fn reflection_negates_its_root() {
        let sys = a2();
        let a = root_poly(&sys, 0);
        assert_eq!(act_generator(&sys, 0, &a), a.scale(&Rational::from_i64(-1)));
        assert_eq!(act(&sys.identity(), &a), a);
    }

    #[test]
    fn demazure_examples() {
        let sys = a2();
        let a = root_poly(&sys, 0);
        assert_eq!(demazure(&sys, 0, &a).unwrap(), GradedPolynomial::constant(2, Rational::from_i64(2)));
        assert!(demazure(&sys, 0, &a.mul(&a)).unwrap().is_zero());
        let rho = rho_poly(&sys);
        let d = demazure(&sys, 0, &rho).unwrap();
        assert_eq!(d, GradedPolynomial::constant(2, sys.realization().rho_coroot(0)));
        assert!(d.augment() > Rational::from_i64(0));
    }

    #[test]
    fn augmentation() {
        let sys = a2();
        assert_eq!(GradedPolynomial::<Rational>::one(2).augment(), Rational::from_i64(1));
        assert_eq!(root_poly(&sys, 1).augment(), Rational::from_i64(0));
    }

    #[test]
    fn degrees_are_doubled() {
        let sys = a2();
        let a = root_poly(&sys, 0);
        assert_eq!(a.graded_degree(), Some(2));
        assert_eq!(a.mul(&a).mul(&a).graded_degree(), Some(6));
    }

    #[test]
    fn division_detects_non_multiples() {
        let x = GradedPolynomial::<Rational>::variable(2, 1);
        assert!(x.div_linear(&[Rational::from_i64(1), Rational::from_i64(0)]).is_none());
    }

    fn poly(seed: u64, nvars: usize) -> GradedPolynomial<Rational> {
        GradedPolynomial::random(nvars, 3, 4, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn twisted_leibniz(a in any::<u64>(), b in any::<u64>(), s in 0usize..2) {
            let sys = a2();
            let (f, g) = (poly(a, 2), poly(b, 2));
            let lhs = demazure(&sys, s, &f.mul(&g)).unwrap();
            let rhs = demazure(&sys, s, &f).unwrap().mul(&g).add(&act_generator(&sys, s, &f).mul(&demazure(&sys, s, &g).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn demazure_squares_to_zero(a in any::<u64>(), s in 0usize..2) {
            let sys = a2();
            let f = poly(a, 2);
            prop_assert!(demazure(&sys, s, &demazure(&sys, s, &f).unwrap()).unwrap().is_zero());
        }

        #[test]
        fn demazure_is_invariant_linear(a in any::<u64>(), b in any::<u64>(), s in 0usize..2) {
            let sys = a2();
            let f = poly(a, 2);
            let g0 = poly(b, 2);
            let g = g0.add(&act_generator(&sys, s, &g0));
            prop_assert_eq!(demazure(&sys, s, &g.mul(&f)).unwrap(), g.mul(&demazure(&sys, s, &f).unwrap()));
        }

        #[test]
        fn action_is_multiplicative_and_a_group_action(a in any::<u64>(), b in any::<u64>(), w1 in 0usize..120, w2 in 0usize..120) {
            let (_, en) = h3();
            let mut rng = ChaCha8Rng::seed_from_u64(a ^ b);
            let f = GradedPolynomial::<Q5>::random(3, 2, 3, &mut rng);
            let g = GradedPolynomial::<Q5>::random(3, 2, 3, &mut rng);
            let (x, y) = (en.element(w1), en.element(w2));
            prop_assert_eq!(act(x, &f.mul(&g)), act(x, &f).mul(&act(x, &g)));
            prop_assert_eq!(act(x, &act(y, &f)), act(&x.mul(y), &f));
        }
    }
}
