//! Linear codes over chain rings: submodules of `R^n`.
//!
//! Every code carries a normal form computed at construction. Pivots are
//! chosen by minimal γ-valuation (leftmost column on ties) and scaled to be
//! exactly `γ^i`; all other rows are cleared below each pivot and reduced
//! modulo `γ^i` above it. The resulting form is canonical for the span, so
//! code equality is equality of normal forms.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::group::CoordinatePermutation;
use crate::ring::{ChainRing, Elem};

pub type Codeword = Vec<Elem>;

/// Default cap on enumerated codewords.
pub const DISTANCE_BUDGET: u64 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Pivot {
    pub column: usize,
    pub valuation: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    /// `type_vector[i]` is the number of rows with pivot `γ^i`.
    pub type_vector: Vec<usize>,
    pub pivots: Vec<Pivot>,
    pub rows: Vec<Codeword>,
}

/// `x -= t * y`
#[inline]
fn sub_multiple(ring: &ChainRing, x: &mut [Elem], t: Elem, y: &[Elem]) {
    for (a, &b) in x.iter_mut().zip(y) {
        if !b.is_zero() {
            *a = ring.sub(*a, ring.mul(t, b));
        }
    }
}

pub fn hamming_weight(x: &[Elem]) -> usize {
    x.iter().filter(|a| !a.is_zero()).count()
}

/// Euclidean inner product.
pub fn dot(ring: &ChainRing, x: &[Elem], y: &[Elem]) -> Elem {
    x.iter()
        .zip(y)
        .fold(Elem::ZERO, |acc, (&a, &b)| ring.add(acc, ring.mul(a, b)))
}

/// Computes the normal form of the span of `rows` (all of length `n`).
pub fn normalize(ring: &ChainRing, n: usize, rows: &[Codeword]) -> NormalForm {
    let v = ring.v();
    let mut pending: Vec<Codeword> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut done: Vec<Codeword> = Vec::new();
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, row) in pending.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let val = ring.valuation(x);
                if best.is_none_or(|(bv, bc, _)| (val, c) < (bv, bc)) {
                    best = Some((val, c, ri));
                }
            }
        }
        let Some((val, col, ri)) = best else { break };
        let mut row = pending.swap_remove(ri);
        let unit = ring.div_gamma_pow(row[col], val);
        let inv = ring
            .inverse(unit)
            .expect("quotient by the valuation is a unit");
        if inv != ring.one() {
            for x in row.iter_mut() {
                *x = ring.mul(*x, inv);
            }
        }
        debug_assert_eq!(row[col], ring.gamma_pow(val));
        for other in pending.iter_mut() {
            let x = other[col];
            if !x.is_zero() {
                let t = ring.div_gamma_pow(x, val);
                sub_multiple(ring, other, t, &row);
            }
        }
        pending.retain(|r| r.iter().any(|x| !x.is_zero()));
        for prev in done.iter_mut() {
            let t =
                ring.div_gamma_pow(ring.sub(prev[col], ring.rem_gamma_pow(prev[col], val)), val);
            if !t.is_zero() {
                sub_multiple(ring, prev, t, &row);
            }
        }
        done.push(row);
        pivots.push(Pivot {
            column: col,
            valuation: val,
        });
    }
    let mut type_vector = vec![0; v as usize];
    for p in &pivots {
        type_vector[p.valuation as usize] += 1;
    }
    debug_assert!(done.iter().all(|r| r.len() == n));
    NormalForm {
        type_vector,
        pivots,
        rows: done,
    }
}

/// An `R`-submodule of `R^n`.
#[derive(Clone)]
pub struct LinearCode {
    ring: ChainRing,
    n: usize,
    generators: Vec<Codeword>,
    normal: NormalForm,
}

/// Codes over the residue field are ordinary linear codes over a `v = 1`
/// chain ring.
pub type ResidueCode = LinearCode;

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        codes_equal(self, other)
    }
}

impl Eq for LinearCode {}

impl Hash for LinearCode {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.normal.rows.hash(state);
    }
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LinearCode")
            .field("ring", &self.ring.name())
            .field("n", &self.n)
            .field("type", &self.normal.type_vector)
            .field(
                "rows",
                &self
                    .normal
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|x| x.0).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Set equality of spans.
pub fn codes_equal(a: &LinearCode, b: &LinearCode) -> bool {
    a.ring == b.ring && a.n == b.n && a.normal.rows == b.normal.rows
}

impl LinearCode {
    pub fn new(ring: &ChainRing, n: usize, rows: Vec<Codeword>) -> Result<Self> {
        for row in &rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(x) = row.iter().find(|&&x| !ring.contains(x)) {
                return Err(Error::Encoding(format!(
                    "code {} outside ring {}",
                    x.0,
                    ring.name()
                )));
            }
        }
        let normal = normalize(ring, n, &rows);
        Ok(LinearCode {
            ring: ring.clone(),
            n,
            generators: rows,
            normal,
        })
    }

    pub(crate) fn from_trusted(ring: &ChainRing, n: usize, rows: Vec<Codeword>) -> Self {
        let normal = normalize(ring, n, &rows);
        LinearCode {
            ring: ring.clone(),
            n,
            generators: rows,
            normal,
        }
    }

    pub fn zero(ring: &ChainRing, n: usize) -> Self {
        Self::from_trusted(ring, n, Vec::new())
    }

    pub fn full(ring: &ChainRing, n: usize) -> Self {
        Self::gamma_power_space(ring, n, 0)
    }

    /// `γ^i R^n`.
    pub fn gamma_power_space(ring: &ChainRing, n: usize, i: u32) -> Self {
        let g = ring.gamma_pow(i);
        let rows = (0..n)
            .map(|k| {
                let mut r = vec![Elem::ZERO; n];
                r[k] = g;
                r
            })
            .collect();
        Self::from_trusted(ring, n, rows)
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    /// Code length `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// The rows the code was constructed from.
    pub fn generators(&self) -> &[Codeword] {
        &self.generators
    }

    pub fn normal_form(&self) -> &NormalForm {
        &self.normal
    }

    /// Normal-form rows.
    pub fn rows(&self) -> &[Codeword] {
        &self.normal.rows
    }

    pub fn type_vector(&self) -> &[usize] {
        &self.normal.type_vector
    }

    /// `e` with `|C| = q^e`, i.e. `Σ (v - i) k_i`.
    pub fn log_q_cardinality(&self) -> usize {
        let v = self.ring.v() as usize;
        self.normal
            .type_vector
            .iter()
            .enumerate()
            .map(|(i, &k)| (v - i) * k)
            .sum()
    }

    /// `|C|`, or `None` on overflow.
    pub fn cardinality(&self) -> Option<u128> {
        (self.ring.q() as u128).checked_pow(self.log_q_cardinality() as u32)
    }

    /// `"q^e"`.
    pub fn cardinality_string(&self) -> String {
        format!("{}^{}", self.ring.q(), self.log_q_cardinality())
    }

    pub fn is_free(&self) -> bool {
        self.normal.type_vector.iter().skip(1).all(|&k| k == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.normal.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.log_q_cardinality() == self.n * self.ring.v() as usize
    }

    fn check_compatible(&self, other: &LinearCode) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// Coefficients `t` with `x = Σ t_r row_r`, or `None` if `x ∉ C`.
    pub fn coordinates(&self, x: &[Elem]) -> Option<Vec<Elem>> {
        if x.len() != self.n {
            return None;
        }
        let mut rest = x.to_vec();
        let mut coeffs = Vec::with_capacity(self.normal.rows.len());
        for (piv, row) in self.normal.pivots.iter().zip(&self.normal.rows) {
            let a = rest[piv.column];
            if a.is_zero() {
                coeffs.push(Elem::ZERO);
                continue;
            }
            if self.ring.valuation(a) < piv.valuation {
                return None;
            }
            let t = self.ring.div_gamma_pow(a, piv.valuation);
            sub_multiple(&self.ring, &mut rest, t, row);
            coeffs.push(t);
        }
        rest.iter().all(|a| a.is_zero()).then_some(coeffs)
    }

    pub fn contains(&self, x: &[Elem]) -> bool {
        self.coordinates(x).is_some()
    }

    /// `C ⊆ other`.
    pub fn is_subcode_of(&self, other: &LinearCode) -> bool {
        self.ring == other.ring
            && self.n == other.n
            && self.rows().iter().all(|r| other.contains(r))
    }

    /// Euclidean dual, by column operations that diagonalise the normal form.
    pub fn dual(&self) -> LinearCode {
        let ring = &self.ring;
        let n = self.n;
        let v = ring.v();
        let mut g = self.normal.rows.clone();
        // q_cols[j] is column j of the accumulated column transform
        let mut q_cols: Vec<Codeword> = (0..n)
            .map(|j| {
                let mut c = vec![Elem::ZERO; n];
                c[j] = ring.one();
                c
            })
            .collect();
        let mut is_pivot = vec![false; n];
        for (r, piv) in self.normal.pivots.iter().enumerate() {
            let c = piv.column;
            is_pivot[c] = true;
            for j in 0..n {
                let x = g[r][j];
                if j == c || x.is_zero() {
                    continue;
                }
                let t = ring.div_gamma_pow(x, piv.valuation);
                g[r][j] = Elem::ZERO;
                let pivot_col = q_cols[c].clone();
                sub_multiple(ring, &mut q_cols[j], t, &pivot_col);
            }
        }
        let mut gens: Vec<Codeword> = Vec::new();
        for j in (0..n).filter(|&j| !is_pivot[j]) {
            gens.push(q_cols[j].clone());
        }
        for piv in &self.normal.pivots {
            if piv.valuation > 0 {
                let s = v - piv.valuation;
                gens.push(
                    q_cols[piv.column]
                        .iter()
                        .map(|&x| ring.mul_gamma_pow(x, s))
                        .collect(),
                );
            }
        }
        Self::from_trusted(ring, n, gens)
    }

    pub fn sum(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        let rows = self
            .normal
            .rows
            .iter()
            .chain(&other.normal.rows)
            .cloned()
            .collect();
        Ok(Self::from_trusted(&self.ring, self.n, rows))
    }

    /// `C ∩ D = (C⊥ + D⊥)⊥`.
    pub fn intersect(&self, other: &LinearCode) -> Result<LinearCode> {
        self.check_compatible(other)?;
        Ok(self.dual().sum(&other.dual())?.dual())
    }

    /// `rC`.
    pub fn scale(&self, r: Elem) -> LinearCode {
        let rows = self
            .normal
            .rows
            .iter()
            .map(|row| row.iter().map(|&x| self.ring.mul(r, x)).collect())
            .collect();
        Self::from_trusted(&self.ring, self.n, rows)
    }

    /// `γ^i C`.
    pub fn gamma_multiple(&self, i: u32) -> LinearCode {
        self.scale(self.ring.gamma_pow(i))
    }

    /// `(C : γ^i) = {x : γ^i x ∈ C}`, computed as `(γ^i C⊥)⊥`.
    pub fn colon_gamma(&self, i: u32) -> Result<LinearCode> {
        let v = self.ring.v();
        if i > v {
            return Err(Error::OutOfRange {
                what: "colon exponent",
                value: i as usize,
                max: v as usize,
            });
        }
        Ok(self.dual().gamma_multiple(i).dual())
    }

    /// φ(C) over the residue field.
    pub fn project(&self) -> ResidueCode {
        let field = self.ring.residue_field();
        let rows = self
            .normal
            .rows
            .iter()
            .map(|row| row.iter().map(|&x| self.ring.project(x)).collect())
            .collect();
        Self::from_trusted(&field, self.n, rows)
    }

    pub fn permute(&self, perm: &CoordinatePermutation) -> Result<LinearCode> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let rows = self.normal.rows.iter().map(|r| perm.apply(r)).collect();
        Ok(Self::from_trusted(&self.ring, self.n, rows))
    }

    /// Visits every codeword once; `visit` returns `false` to stop early.
    /// Fails if `|C|` exceeds `budget`.
    pub fn for_each_codeword(
        &self,
        budget: u64,
        mut visit: impl FnMut(&[Elem]) -> bool,
    ) -> Result<()> {
        let total = self.cardinality().unwrap_or(u128::MAX);
        if total > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget: budget as u128,
            });
        }
        let ring = &self.ring;
        let v = ring.v();
        let multiples: Vec<Vec<Codeword>> = self
            .normal
            .pivots
            .iter()
            .zip(&self.normal.rows)
            .map(|(piv, row)| {
                ring.representatives_mod_gamma_pow(v - piv.valuation)
                    .map(|a| row.iter().map(|&x| ring.mul(a, x)).collect())
                    .collect()
            })
            .collect();
        let mut stack = vec![vec![Elem::ZERO; self.n]; multiples.len() + 1];
        walk(ring, &multiples, 0, &mut stack, &mut visit);
        Ok(())
    }

    pub fn codewords(&self, budget: u64) -> Result<Vec<Codeword>> {
        let mut out = Vec::new();
        self.for_each_codeword(budget, |w| {
            out.push(w.to_vec());
            true
        })?;
        Ok(out)
    }

    /// Minimum Hamming weight by enumerating every codeword of `C`.
    pub fn min_distance_exhaustive(&self, budget: u64) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroCode);
        }
        let mut best = self.n;
        self.for_each_codeword(budget, |w| {
            let wt = hamming_weight(w);
            if wt > 0 && wt < best {
                best = wt;
            }
            best > 1
        })?;
        Ok(best)
    }

    /// Minimum distance. Free codes are searched through φ(C), which has
    /// only `q^{k_0}` words and the same minimum distance.
    pub fn min_distance_with_budget(&self, budget: u64) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroCode);
        }
        if self.ring.v() > 1 && self.is_free() {
            self.project().min_distance_exhaustive(budget)
        } else {
            self.min_distance_exhaustive(budget)
        }
    }

    pub fn min_distance(&self) -> Result<usize> {
        self.min_distance_with_budget(DISTANCE_BUDGET)
    }

    /// Number of codewords of each Hamming weight `0..=n`.
    pub fn weight_distribution(&self, budget: u64) -> Result<Vec<u64>> {
        let mut dist = vec![0u64; self.n + 1];
        self.for_each_codeword(budget, |w| {
            dist[hamming_weight(w)] += 1;
            true
        })?;
        Ok(dist)
    }
}

fn walk(
    ring: &ChainRing,
    multiples: &[Vec<Codeword>],
    level: usize,
    stack: &mut [Codeword],
    visit: &mut dyn FnMut(&[Elem]) -> bool,
) -> bool {
    if level == multiples.len() {
        return visit(&stack[level]);
    }
    for m in &multiples[level] {
        let (lo, hi) = stack.split_at_mut(level + 1);
        let (prev, next) = (&lo[level], &mut hi[0]);
        for ((out, &a), &b) in next.iter_mut().zip(prev).zip(m) {
            *out = ring.add(a, b);
        }
        if !walk(ring, multiples, level + 1, stack, visit) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> ChainRing {
        ChainRing::zpv(2, 2).unwrap()
    }

    fn code(ring: &ChainRing, rows: &[&[u32]]) -> LinearCode {
        let n = rows.first().map_or(0, |r| r.len());
        LinearCode::new(
            ring,
            n,
            rows.iter()
                .map(|r| r.iter().map(|&x| Elem(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn w(xs: &[u32]) -> Vec<Elem> {
        xs.iter().map(|&x| Elem(x)).collect()
    }

    #[test]
    fn normalize_examples() {
        let r = z4();
        let c = code(&r, &[&[2, 1, 1], &[1, 2, 1], &[1, 1, 2]]);
        assert_eq!(c.type_vector(), [2, 0]);
        assert_eq!(c.cardinality(), Some(16));
        let c = code(&r, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(c.type_vector(), [3, 0]);
        assert_eq!(c.cardinality(), Some(64));
        let c = code(&r, &[&[2, 2]]);
        assert_eq!(c.type_vector(), [0, 1]);
        assert_eq!(c.cardinality(), Some(2));
        let z = LinearCode::new(&r, 3, vec![]).unwrap();
        assert_eq!(z.type_vector(), [0, 0]);
        assert_eq!(z.cardinality(), Some(1));
    }

    #[test]
    fn normal_form_is_a_fixed_point() {
        let r = z4();
        let c = code(&r, &[&[2, 1, 1], &[1, 2, 1], &[3, 3, 2], &[2, 0, 2]]);
        let again = normalize(&r, 3, c.rows());
        assert_eq!(&again, c.normal_form());
    }

    #[test]
    fn cardinality_and_freeness() {
        let r = z4();
        let c = code(&r, &[&[1, 1, 1]]);
        assert_eq!((c.cardinality(), c.is_free()), (Some(4), true));
        let c = code(&r, &[&[2, 2]]);
        assert_eq!((c.cardinality(), c.is_free()), (Some(2), false));
        let z = LinearCode::zero(&r, 4);
        assert_eq!((z.cardinality(), z.is_free()), (Some(1), true));
        assert_eq!(c.cardinality_string(), "2^1");
    }

    #[test]
    fn dual_examples() {
        let r = z4();
        let c = code(&r, &[&[1, 1, 1]]);
        let d = c.dual();
        assert_eq!(d.cardinality(), Some(16));
        for x in d.codewords(1 << 10).unwrap() {
            assert_eq!(r.add(r.add(x[0], x[1]), x[2]), Elem::ZERO);
        }
        assert!(LinearCode::full(&r, 3).dual().is_zero());
        let dd = code(&r, &[&[2, 1, 1], &[1, 2, 1]]);
        assert_eq!(dd.dual(), c);
        assert_eq!(LinearCode::zero(&r, 2).dual(), LinearCode::full(&r, 2));
    }

    #[test]
    fn sum_and_intersection_examples() {
        let r = z4();
        let c = code(&r, &[&[1, 1, 1]]);
        let d = code(&r, &[&[2, 1, 1], &[1, 2, 1]]);
        assert!(c.sum(&d).unwrap().is_full());
        assert_eq!(c.intersect(&c).unwrap(), c);
        assert!(c.intersect(&d).unwrap().is_zero());
        let other = LinearCode::zero(&r, 2);
        assert!(matches!(c.sum(&other), Err(Error::LengthMismatch { .. })));
        let f2 = ChainRing::zpv(2, 1).unwrap();
        assert_eq!(
            c.sum(&LinearCode::zero(&f2, 3)).unwrap_err(),
            Error::RingMismatch
        );
    }

    #[test]
    fn membership_examples() {
        let r = z4();
        let c = code(&r, &[&[1, 1, 1]]);
        assert!(c.contains(&w(&[2, 2, 2])));
        assert!(c.contains(&w(&[0, 0, 0])));
        assert!(!c.contains(&w(&[1, 0, 0])));
        assert!(!c.contains(&w(&[1, 1])));
        assert_eq!(c.coordinates(&w(&[3, 3, 3])), Some(w(&[3])));
    }

    #[test]
    fn projection_examples() {
        let r = z4();
        let p = code(&r, &[&[1, 1, 1]]).project();
        assert_eq!(p.ring().size(), 2);
        assert_eq!(p.codewords(16).unwrap().len(), 2);
        assert!(p.contains(&w(&[1, 1, 1])));
        assert!(LinearCode::zero(&r, 3).project().is_zero());
        assert!(code(&r, &[&[2, 2]]).project().is_zero());
    }

    #[test]
    fn colon_examples() {
        let r = z4();
        let c = code(&r, &[&[1, 1, 1]]);
        let c1 = c.colon_gamma(1).unwrap();
        assert_eq!(c1.cardinality(), Some(16));
        assert_eq!(c1, c.sum(&LinearCode::gamma_power_space(&r, 3, 1)).unwrap());
        assert_eq!(c.colon_gamma(0).unwrap(), c);
        assert!(c.colon_gamma(2).unwrap().is_full());
        assert!(matches!(c.colon_gamma(3), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn distance_examples() {
        let r = z4();
        assert_eq!(code(&r, &[&[1, 1, 1]]).min_distance(), Ok(3));
        assert_eq!(LinearCode::full(&r, 3).min_distance(), Ok(1));
        assert_eq!(LinearCode::zero(&r, 3).min_distance(), Err(Error::ZeroCode));
        let big = LinearCode::full(&r, 13);
        assert!(matches!(
            big.min_distance_exhaustive(1 << 20),
            Err(Error::BudgetExceeded { .. })
        ));
        assert_eq!(big.min_distance(), Ok(1));
    }

    #[test]
    fn permutation_examples() {
        let r = z4();
        let tau = CoordinatePermutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(
            code(&r, &[&[1, 2, 3]]).permute(&tau).unwrap(),
            code(&r, &[&[1, 3, 2]])
        );
        let c = code(&r, &[&[2, 1, 1]]);
        assert_eq!(c.permute(&CoordinatePermutation::identity(3)).unwrap(), c);
        assert_eq!(code(&r, &[&[1, 1, 1]]), code(&r, &[&[3, 3, 3]]));
        assert!(c.permute(&CoordinatePermutation::identity(2)).is_err());
    }

    #[test]
    fn weight_distribution_of_repetition_code() {
        let r = z4();
        assert_eq!(
            code(&r, &[&[1, 1, 1]]).weight_distribution(100).unwrap(),
            vec![1, 0, 0, 3]
        );
    }
}
