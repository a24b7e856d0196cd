//! Coxeter systems with an exact realization: element arithmetic, lengths,
//! reduced words, Bruhat order and reflections.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::field::Scalar;
use crate::linalg::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("invalid Coxeter matrix: {0}")]
    InvalidMatrix(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("invalid realization: {0}")]
    InvalidRealization(String),
    #[error("rho-positivity violated: {0}")]
    RhoPositivity(String),
    #[error("generator order check failed for ({s},{t}): {detail}")]
    GeneratorOrder { s: usize, t: usize, detail: String },
    #[error("element cap of {0} exceeded during enumeration")]
    ElementCap(usize),
    #[error("infinite group requires a finite length bound")]
    UnboundedInfinite,
    #[error("descent stripping did not terminate within {0} steps")]
    StripBound(usize),
}

/// Symmetric matrix of orders `m[s][t]`; `None` stands for infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    entries: Vec<Vec<Option<u32>>>,
}

impl CoxeterMatrix {
    pub fn new(entries: Vec<Vec<Option<u32>>>) -> Result<Self, CoxeterError> {
        let n = entries.len();
        if n == 0 {
            return Err(CoxeterError::InvalidMatrix("rank must be positive".into()));
        }
        for (s, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::InvalidMatrix(format!("row {s} has length {}", row.len())));
            }
            if row[s] != Some(1) {
                return Err(CoxeterError::InvalidMatrix(format!("m[{s}][{s}] must be 1")));
            }
            for t in 0..n {
                if entries[t][s] != row[t] {
                    return Err(CoxeterError::InvalidMatrix(format!("m[{s}][{t}] != m[{t}][{s}]")));
                }
                if s != t && matches!(row[t], Some(m) if m < 2) {
                    return Err(CoxeterError::InvalidMatrix(format!("m[{s}][{t}] must be >= 2")));
                }
            }
        }
        Ok(CoxeterMatrix { entries })
    }

    /// Entries given as integers, with 0 meaning infinity.
    pub fn from_ints(rows: &[Vec<u32>]) -> Result<Self, CoxeterError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&m| if m == 0 { None } else { Some(m) }).collect()).collect())
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn m(&self, s: usize, t: usize) -> Option<u32> {
        self.entries[s][t]
    }

    pub fn dihedral(m: Option<u32>) -> Result<Self, CoxeterError> {
        Self::new(vec![vec![Some(1), m], vec![m, Some(1)]])
    }

    /// Linear diagram with the given bond orders between consecutive nodes.
    pub fn linear(bonds: &[u32]) -> Result<Self, CoxeterError> {
        let n = bonds.len() + 1;
        let mut e = vec![vec![Some(2); n]; n];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = Some(1);
        }
        for (i, &b) in bonds.iter().enumerate() {
            e[i][i + 1] = Some(b);
            e[i + 1][i] = Some(b);
        }
        Self::new(e)
    }

    /// The radicand of the quadratic field needed by the geometric realization.
    pub fn geometric_radicand(&self) -> Result<i64, CoxeterError> {
        let mut need = 0;
        for s in 0..self.rank() {
            for t in 0..s {
                let d = match self.m(s, t) {
                    None | Some(2) | Some(3) => 0,
                    Some(4) => 2,
                    Some(5) => 5,
                    Some(6) => 3,
                    Some(m) => {
                        return Err(CoxeterError::UnsupportedField(format!(
                            "geometric realization with m = {m} needs an explicit realization"
                        )))
                    }
                };
                if d != 0 && need != 0 && d != need {
                    return Err(CoxeterError::UnsupportedField(format!(
                        "orders need both sqrt{need} and sqrt{d}"
                    )));
                }
                if d != 0 {
                    need = d;
                }
            }
        }
        Ok(need)
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|r| r.iter().map(|m| m.map_or("inf".to_string(), |m| m.to_string())).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

#[derive(Clone, Debug)]
pub enum RealizationChoice<F> {
    /// `<e_t, e_s^vee> = -2 cos(pi / m_st)`
    Geometric,
    /// Integer generalized Cartan matrix, `cartan[s][t] = <alpha_t, alpha_s^vee>`.
    Cartan(Vec<Vec<i64>>),
    /// Roots as linear forms and coroots as vectors, in coordinates of a common `V`.
    Explicit { roots: Vec<Vec<F>>, coroots: Vec<Vec<F>>, rho: Option<Vec<F>> },
}

/// Roots, coroots and `rho`, all in coordinates: vectors of `V` and forms on `V`
/// are both stored as coordinate vectors, forms against the dual basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization<F> {
    pub dim: usize,
    pub roots: Vec<Vec<F>>,
    pub coroots: Vec<Vec<F>>,
    pub rho: Vec<F>,
}

pub fn pair<F: Scalar>(form: &[F], vector: &[F]) -> F {
    form.iter().zip(vector).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b)
}

impl<F: Scalar> Realization<F> {
    /// `<alpha_t, alpha_s^vee>`
    pub fn cartan_entry(&self, s: usize, t: usize) -> F {
        pair(&self.roots[t], &self.coroots[s])
    }

    /// `<rho, alpha_s^vee>`
    pub fn rho_coroot(&self, s: usize) -> F {
        pair(&self.rho, &self.coroots[s])
    }

    /// `<xi, alpha_s^vee>` for a form `xi`.
    pub fn coroot_pairing(&self, xi: &[F], s: usize) -> F {
        pair(xi, &self.coroots[s])
    }

    /// `s(xi) = xi - <xi, alpha_s^vee> alpha_s` on forms.
    pub fn reflect_form(&self, s: usize, xi: &[F]) -> Vec<F> {
        let c = self.coroot_pairing(xi, s);
        xi.iter().zip(&self.roots[s]).map(|(x, a)| x.clone() - c.clone() * a).collect()
    }

    /// Matrix of `s` acting on `V`: `v - <alpha_s, v> alpha_s^vee`.
    pub fn reflection_matrix(&self, s: usize) -> Matrix<F> {
        let mut m = Matrix::identity(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = self.coroots[s][i].clone() * &self.roots[s][j];
                m[(i, j)] -= d;
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement<F> {
    pub mat: Matrix<F>,
    pub inv: Matrix<F>,
}

impl<F: Scalar> GroupElement<F> {
    pub fn identity(dim: usize) -> Self {
        GroupElement { mat: Matrix::identity(dim), inv: Matrix::identity(dim) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GroupElement { mat: self.mat.mul(&o.mat), inv: o.inv.mul(&self.inv) }
    }

    pub fn inverse(&self) -> Self {
        GroupElement { mat: self.inv.clone(), inv: self.mat.clone() }
    }
}

#[derive(Clone, Debug)]
pub struct CoxeterSystem<F> {
    matrix: CoxeterMatrix,
    realization: Realization<F>,
    gens: Vec<GroupElement<F>>,
    strip_bound: usize,
}

fn geometric_entry<F: Scalar>(m: Option<u32>) -> Result<F, CoxeterError> {
    let missing = |d: i64| CoxeterError::UnsupportedField(format!("m = {m:?} needs sqrt{d}, field is {}", F::field_name()));
    let need = |d: i64| -> Result<F, CoxeterError> {
        if F::radicand() == d {
            F::radical().ok_or_else(|| missing(d))
        } else {
            Err(missing(d))
        }
    };
    Ok(match m {
        None => F::from_i64(-2),
        Some(2) => F::zero(),
        Some(3) => F::from_i64(-1),
        Some(4) => -need(2)?,
        Some(5) => -(F::one() + need(5)?) * F::from_frac(1, 2),
        Some(6) => -need(3)?,
        Some(m) => return Err(CoxeterError::UnsupportedField(format!("geometric entry for m = {m}"))),
    })
}

fn order_from_cartan_product(p: i64) -> Option<u32> {
    match p {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    }
}

impl<F: Scalar> CoxeterSystem<F> {
    pub fn build(matrix: CoxeterMatrix, choice: RealizationChoice<F>) -> Result<Self, CoxeterError> {
        let n = matrix.rank();
        let (roots, coroots, rho) = match choice {
            RealizationChoice::Geometric => {
                let mut roots = vec![vec![F::zero(); n]; n];
                for (t, root) in roots.iter_mut().enumerate() {
                    for s in 0..n {
                        root[s] = if s == t { F::from_i64(2) } else { geometric_entry::<F>(matrix.m(s, t))? };
                    }
                }
                (roots, unit_vectors::<F>(n), None)
            }
            RealizationChoice::Cartan(c) => {
                if c.len() != n || c.iter().any(|r| r.len() != n) {
                    return Err(CoxeterError::InvalidRealization("Cartan matrix has the wrong shape".into()));
                }
                for s in 0..n {
                    if c[s][s] != 2 {
                        return Err(CoxeterError::InvalidRealization(format!("cartan[{s}][{s}] must be 2")));
                    }
                    for t in 0..n {
                        if s == t {
                            continue;
                        }
                        if c[s][t] > 0 || ((c[s][t] == 0) != (c[t][s] == 0)) {
                            return Err(CoxeterError::InvalidRealization(format!("bad off-diagonal pair at ({s},{t})")));
                        }
                        if order_from_cartan_product(c[s][t] * c[t][s]) != matrix.m(s, t) {
                            return Err(CoxeterError::InvalidRealization(format!(
                                "cartan entries at ({s},{t}) do not give m = {:?}",
                                matrix.m(s, t)
                            )));
                        }
                    }
                }
                let roots = (0..n).map(|t| (0..n).map(|s| F::from_i64(c[s][t])).collect()).collect();
                (roots, unit_vectors::<F>(n), None)
            }
            RealizationChoice::Explicit { roots, coroots, rho } => (roots, coroots, rho),
        };
        let dim = coroots.first().map_or(0, |c| c.len());
        if roots.len() != n || coroots.len() != n || roots.iter().chain(&coroots).any(|v| v.len() != dim) || dim == 0 {
            return Err(CoxeterError::InvalidRealization("roots/coroots have inconsistent shapes".into()));
        }
        let rho = match rho {
            Some(r) if r.len() == dim => r,
            Some(_) => return Err(CoxeterError::InvalidRealization("rho has the wrong length".into())),
            None => default_rho(&coroots, dim)?,
        };
        let realization = Realization { dim, roots, coroots, rho };
        for s in 0..n {
            if realization.cartan_entry(s, s) != F::from_i64(2) {
                return Err(CoxeterError::InvalidRealization(format!("<alpha_{s}, alpha_{s}^vee> != 2")));
            }
            if realization.rho_coroot(s).sign() <= 0 {
                return Err(CoxeterError::RhoPositivity(format!("<rho, alpha_{s}^vee> is not positive")));
            }
        }
        let gens: Vec<GroupElement<F>> = (0..n)
            .map(|s| {
                let m = realization.reflection_matrix(s);
                GroupElement { mat: m.clone(), inv: m }
            })
            .collect();
        let system = CoxeterSystem { matrix, realization, gens, strip_bound: 10_000 };
        system.check_generator_orders()?;
        Ok(system)
    }

    fn check_generator_orders(&self) -> Result<(), CoxeterError> {
        let n = self.rank();
        let id = Matrix::identity(self.realization.dim);
        for s in 0..n {
            for t in 0..s {
                let st = self.gens[s].mat.mul(&self.gens[t].mat);
                let bound = self.matrix.m(s, t).map_or(24, |m| m as usize);
                let mut p = st.clone();
                for k in 1..=bound {
                    let is_id = p == id;
                    if is_id && Some(k as u32) != self.matrix.m(s, t) {
                        return Err(CoxeterError::GeneratorOrder { s, t, detail: format!("(st)^{k} = 1") });
                    }
                    if !is_id && Some(k as u32) == self.matrix.m(s, t) {
                        return Err(CoxeterError::GeneratorOrder { s, t, detail: format!("(st)^{k} != 1") });
                    }
                    p = p.mul(&st);
                }
                if self.matrix.m(s, t).is_none() {
                    // infinite order forces <a_s,a_t^v><a_t,a_s^v> >= 4
                    let prod = self.realization.cartan_entry(s, t) * self.realization.cartan_entry(t, s);
                    if prod < F::from_i64(4) {
                        return Err(CoxeterError::GeneratorOrder { s, t, detail: "pairing product < 4".into() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn dim(&self) -> usize {
        self.realization.dim
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn realization(&self) -> &Realization<F> {
        &self.realization
    }

    pub fn generator(&self, s: usize) -> &GroupElement<F> {
        &self.gens[s]
    }

    pub fn identity(&self) -> GroupElement<F> {
        GroupElement::identity(self.dim())
    }

    pub fn is_finite(&self) -> bool {
        // a Coxeter group is finite iff its cosine form is positive definite
        let n = self.rank();
        if (0..n).any(|s| (0..n).any(|t| self.matrix.m(s, t).is_none())) {
            return false;
        }
        let b: Vec<Vec<f64>> = (0..n)
            .map(|s| (0..n).map(|t| -(std::f64::consts::PI / self.matrix.m(s, t).unwrap() as f64).cos()).collect())
            .collect();
        cosine_form_definite(&b)
    }

    pub fn word_element(&self, word: &[usize]) -> GroupElement<F> {
        word.iter().fold(self.identity(), |acc, &s| acc.mul(&self.gens[s]))
    }

    /// `s` is a left descent of `w` iff `<w(rho), alpha_s^vee> < 0`.
    pub fn is_left_descent(&self, s: usize, w: &GroupElement<F>) -> bool {
        // w(rho) = rho o w^{-1}
        let v = w.inv.mul_vec(&self.realization.coroots[s]);
        pair(&self.realization.rho, &v).sign() < 0
    }

    pub fn is_right_descent(&self, w: &GroupElement<F>, s: usize) -> bool {
        let v = w.mat.mul_vec(&self.realization.coroots[s]);
        pair(&self.realization.rho, &v).sign() < 0
    }

    /// Strips the smallest left descent until the identity is reached; the
    /// result is the lexicographically smallest reduced word.
    pub fn reduced_word(&self, w: &GroupElement<F>) -> Result<Vec<usize>, CoxeterError> {
        let mut word = Vec::new();
        let mut cur = w.clone();
        let id = self.identity();
        while cur != id {
            if word.len() > self.strip_bound {
                return Err(CoxeterError::StripBound(self.strip_bound));
            }
            let s = (0..self.rank())
                .find(|&s| self.is_left_descent(s, &cur))
                .ok_or_else(|| CoxeterError::RhoPositivity("non-identity element without descents".into()))?;
            cur = self.gens[s].mul(&cur);
            word.push(s);
        }
        Ok(word)
    }

    pub fn length(&self, w: &GroupElement<F>) -> Result<usize, CoxeterError> {
        self.reduced_word(w).map(|w| w.len())
    }

    /// Breadth-first enumeration by right multiplication, deduplicated by matrix.
    pub fn enumerate(&self, max_length: Option<usize>, cap: usize) -> Result<Enumeration<F>, CoxeterError> {
        let finite = self.is_finite();
        if !finite && max_length.is_none() {
            return Err(CoxeterError::UnboundedInfinite);
        }
        let n = self.rank();
        let mut elements = vec![self.identity()];
        let mut index: HashMap<Matrix<F>, usize> = HashMap::new();
        index.insert(elements[0].mat.clone(), 0);
        let mut lengths = vec![0usize];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut queue = VecDeque::from([0usize]);
        while let Some(w) = queue.pop_front() {
            if max_length.is_some_and(|m| lengths[w] >= m) {
                continue;
            }
            for s in 0..n {
                if self.is_right_descent(&elements[w], s) {
                    continue;
                }
                let ws = elements[w].mul(&self.gens[s]);
                if index.contains_key(&ws.mat) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(CoxeterError::ElementCap(cap));
                }
                let id = elements.len();
                index.insert(ws.mat.clone(), id);
                lengths.push(lengths[w] + 1);
                elements.push(ws);
                words.push(vec![]);
                queue.push_back(id);
            }
        }
        // canonical (lexicographically smallest) reduced words
        for (i, w) in elements.iter().enumerate() {
            words[i] = self.reduced_word(w)?;
        }
        let lookup = |m: &Matrix<F>| index.get(m).copied();
        let mut right = vec![vec![None; n]; elements.len()];
        let mut left = vec![vec![None; n]; elements.len()];
        let mut inverse = vec![None; elements.len()];
        for (i, w) in elements.iter().enumerate() {
            for s in 0..n {
                right[i][s] = lookup(&w.mat.mul(&self.gens[s].mat));
                left[i][s] = lookup(&self.gens[s].mat.mul(&w.mat));
            }
            inverse[i] = lookup(&w.inv);
        }
        let table = GroupTable { rank: n, lengths, right, left, inverse, words, max_length: if finite { None } else { max_length } };
        Ok(Enumeration { elements, index, table })
    }

    /// Reflections `w s w^{-1}` among the enumerated elements.
    pub fn reflections(&self, en: &Enumeration<F>) -> HashSet<usize> {
        let mut out = HashSet::new();
        for w in &en.elements {
            for s in 0..self.rank() {
                let t = w.mul(&self.gens[s]).mul(&w.inverse());
                if let Some(&i) = en.index.get(&t.mat) {
                    out.insert(i);
                }
            }
        }
        out
    }

    /// Elements `x != e` where "fixes a hyperplane" and "is a reflection" disagree.
    pub fn check_reflection_faithful(&self, en: &Enumeration<F>) -> ReflectionReport {
        let refl = self.reflections(en);
        let id = Matrix::identity(self.dim());
        let mut violations = Vec::new();
        for (i, w) in en.elements.iter().enumerate().skip(1) {
            let fixed = self.dim() - w.mat.sub(&id).rank();
            let hyperplane = fixed + 1 == self.dim();
            if hyperplane != refl.contains(&i) {
                violations.push(en.table.word(i).to_vec());
            }
        }
        let distinct = en.index.len() == en.elements.len();
        ReflectionReport { reflections: refl.len(), violations, faithful: distinct }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ReflectionReport {
    pub reflections: usize,
    pub violations: Vec<Vec<usize>>,
    pub faithful: bool,
}

impl ReflectionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.faithful
    }
}

fn unit_vectors<F: Scalar>(n: usize) -> Vec<Vec<F>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

fn default_rho<F: Scalar>(coroots: &[Vec<F>], dim: usize) -> Result<Vec<F>, CoxeterError> {
    // rows: coroots; solve coroots * rho = (1, ..., 1)
    let a = Matrix::from_rows(coroots.to_vec());
    let b = Matrix::from_columns(&[vec![F::one(); coroots.len()]], coroots.len());
    let x = a
        .solve(&b)
        .ok_or_else(|| CoxeterError::RhoPositivity("no form with <rho, alpha_s^vee> = 1 for all s".into()))?;
    Ok((0..dim).map(|i| x[(i, 0)].clone()).collect())
}

/// Cholesky test on the cosine form; finite groups have a comfortably definite one.
fn cosine_form_definite(b: &[Vec<f64>]) -> bool {
    let n = b.len();
    let mut l = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = b[i][j];
            for k in 0..j {
                sum -= l[i][k] * l[j][k];
            }
            if i == j {
                if sum <= 1e-9 {
                    return false;
                }
                l[i][i] = sum.sqrt();
            } else {
                l[i][j] = sum / l[j][j];
            }
        }
    }
    true
}

/// Field-free multiplication tables of an enumerated (possibly truncated) group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    rank: usize,
    lengths: Vec<usize>,
    right: Vec<Vec<Option<usize>>>,
    left: Vec<Vec<Option<usize>>>,
    inverse: Vec<Option<usize>>,
    words: Vec<Vec<usize>>,
    max_length: Option<usize>,
}

impl GroupTable {
    pub const IDENTITY: usize = 0;

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// `None` when the table holds the whole (finite) group.
    pub fn max_length(&self) -> Option<usize> {
        self.max_length
    }

    pub fn is_complete(&self) -> bool {
        self.max_length.is_none()
    }

    pub fn length(&self, w: usize) -> usize {
        self.lengths[w]
    }

    pub fn word(&self, w: usize) -> &[usize] {
        &self.words[w]
    }

    pub fn right_mult(&self, w: usize, s: usize) -> Option<usize> {
        self.right[w][s]
    }

    pub fn left_mult(&self, s: usize, w: usize) -> Option<usize> {
        self.left[w][s]
    }

    pub fn inverse(&self, w: usize) -> Option<usize> {
        self.inverse[w]
    }

    pub fn is_right_descent(&self, w: usize, s: usize) -> bool {
        self.right[w][s].is_some_and(|ws| self.lengths[ws] < self.lengths[w])
    }

    pub fn is_left_descent(&self, s: usize, w: usize) -> bool {
        self.left[w][s].is_some_and(|sw| self.lengths[sw] < self.lengths[w])
    }

    pub fn longest_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn elements_up_to(&self, len: usize) -> Vec<usize> {
        (0..self.len()).filter(|&w| self.lengths[w] <= len).collect()
    }

    /// Element of a word, if it stays inside the table.
    pub fn element_of_word(&self, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(Self::IDENTITY, |w, &s| self.right[w][s])
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        self.element_of_word(word).is_some_and(|w| self.lengths[w] == word.len())
    }

    /// Look up an element by its canonical word or any word.
    pub fn find(&self, word: &[usize]) -> Option<usize> {
        self.element_of_word(word)
    }

    /// Bruhat order by the lifting property along left descents of `y`.
    pub fn bruhat_leq(&self, x: usize, y: usize) -> bool {
        let (mut x, mut y) = (x, y);
        loop {
            if self.lengths[x] > self.lengths[y] {
                return false;
            }
            if y == Self::IDENTITY {
                return x == Self::IDENTITY;
            }
            let s = self.words[y][0];
            y = self.left[y][s].expect("left descent stays in the table");
            if self.is_left_descent(s, x) {
                x = self.left[x][s].unwrap();
            }
        }
    }

    /// All reduced words of `w`, in lexicographic order.
    pub fn reduced_words(&self, w: usize) -> Vec<Vec<usize>> {
        if w == Self::IDENTITY {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for s in 0..self.rank {
            if self.is_left_descent(s, w) {
                let sw = self.left[w][s].unwrap();
                for mut tail in self.reduced_words(sw) {
                    tail.insert(0, s);
                    out.push(tail);
                }
            }
        }
        out
    }

    /// `sum_w v^{l(w)}` as a coefficient list.
    pub fn length_distribution(&self) -> Vec<usize> {
        let mut out = vec![0; self.longest_length() + 1];
        for &l in &self.lengths {
            out[l] += 1;
        }
        out
    }
}

/// Enumerated elements with their matrices, plus the derived tables.
#[derive(Clone, Debug)]
pub struct Enumeration<F> {
    pub elements: Vec<GroupElement<F>>,
    pub index: HashMap<Matrix<F>, usize>,
    pub table: GroupTable,
}

impl<F: Scalar> Enumeration<F> {
    pub fn element(&self, w: usize) -> &GroupElement<F> {
        &self.elements[w]
    }

    pub fn position(&self, w: &GroupElement<F>) -> Option<usize> {
        self.index.get(&w.mat).copied()
    }
}

/// Named presets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    A(usize),
    B(usize),
    I2(u32),
    H3,
    ATilde(usize),
}

impl Preset {
    pub fn parse(name: &str) -> Option<Preset> {
        let n = name.trim();
        let lower = n.to_ascii_lowercase();
        if lower == "h3" {
            return Some(Preset::H3);
        }
        if let Some(rest) = lower.strip_prefix("atilde") {
            return rest.parse().ok().filter(|&k| k >= 1).map(Preset::ATilde);
        }
        if let Some(rest) = lower.strip_prefix("i2(").and_then(|r| r.strip_suffix(')')) {
            return rest.parse().ok().filter(|&m| m >= 2).map(Preset::I2);
        }
        if let Some(rest) = lower.strip_prefix("i2_") {
            return rest.parse().ok().filter(|&m| m >= 2).map(Preset::I2);
        }
        if let Some(rest) = lower.strip_prefix('a') {
            return rest.parse().ok().filter(|&k| k >= 1).map(Preset::A);
        }
        if let Some(rest) = lower.strip_prefix('b') {
            return rest.parse().ok().filter(|&k| k >= 2).map(Preset::B);
        }
        None
    }

    pub fn name(&self) -> String {
        match self {
            Preset::A(n) => format!("A{n}"),
            Preset::B(n) => format!("B{n}"),
            Preset::I2(m) => format!("I2({m})"),
            Preset::H3 => "H3".into(),
            Preset::ATilde(n) => format!("Atilde{n}"),
        }
    }

    pub fn coxeter_matrix(&self) -> CoxeterMatrix {
        match *self {
            Preset::A(n) => CoxeterMatrix::linear(&vec![3; n - 1]).unwrap(),
            Preset::B(n) => {
                let mut bonds = vec![3; n - 1];
                bonds[n - 2] = 4;
                CoxeterMatrix::linear(&bonds).unwrap()
            }
            Preset::I2(m) => CoxeterMatrix::dihedral(Some(m)).unwrap(),
            Preset::H3 => CoxeterMatrix::linear(&[5, 3]).unwrap(),
            Preset::ATilde(1) => CoxeterMatrix::dihedral(None).unwrap(),
            Preset::ATilde(n) => {
                let k = n + 1;
                let mut e = vec![vec![Some(2); k]; k];
                for i in 0..k {
                    e[i][i] = Some(1);
                    let j = (i + 1) % k;
                    e[i][j] = Some(3);
                    e[j][i] = Some(3);
                }
                CoxeterMatrix::new(e).unwrap()
            }
        }
    }

    /// Integer Cartan matrix when one exists; `None` means the geometric realization.
    pub fn cartan_matrix(&self) -> Option<Vec<Vec<i64>>> {
        let cm = self.coxeter_matrix();
        let n = cm.rank();
        let mut c = vec![vec![0i64; n]; n];
        for s in 0..n {
            c[s][s] = 2;
            for t in 0..n {
                if s == t {
                    continue;
                }
                c[s][t] = match cm.m(s, t) {
                    Some(2) => 0,
                    Some(3) => -1,
                    Some(4) if s < t => -1,
                    Some(4) => -2,
                    Some(6) if s < t => -1,
                    Some(6) => -3,
                    None => -2,
                    Some(_) => return None,
                };
            }
        }
        Some(c)
    }

    pub fn radicand(&self) -> i64 {
        match self.cartan_matrix() {
            Some(_) => 0,
            None => self.coxeter_matrix().geometric_radicand().unwrap_or(-1),
        }
    }

    /// Cartan realization when there is one, geometric otherwise.
    pub fn build<F: Scalar>(&self) -> Result<CoxeterSystem<F>, CoxeterError> {
        let choice = match self.cartan_matrix() {
            Some(c) => RealizationChoice::Cartan(c),
            None => RealizationChoice::Geometric,
        };
        CoxeterSystem::build(self.coxeter_matrix(), choice)
    }
}
