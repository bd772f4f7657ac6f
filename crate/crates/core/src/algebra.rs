//! The group algebra `R[G]`, identified with `R^n` through the group's
//! canonical element order.

use std::sync::Arc;

use crate::code::{Codeword, LinearCode};
use crate::error::{Error, Result};
use crate::group::{CoordinatePermutation, GroupTable};
use crate::ring::{ChainRing, Elem};

/// Default cap on candidates in the central idempotent search.
pub const IDEMPOTENT_BUDGET: u64 = 1 << 20;

/// Coefficient vector `(α_g)` of `Σ α_g g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement(pub Vec<Elem>);

impl AlgebraElement {
    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }
}

/// A central idempotent of `R[G]` together with its image in `F_q[G]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralIdempotent {
    pub element: AlgebraElement,
    pub residue_image: AlgebraElement,
}

#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    ring: ChainRing,
    group: Arc<GroupTable>,
    classes: Vec<Vec<usize>>,
}

impl PartialEq for GroupAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && *self.group == *other.group
    }
}

impl GroupAlgebra {
    pub fn new(ring: &ChainRing, group: Arc<GroupTable>) -> Self {
        let classes = group.conjugacy_classes();
        GroupAlgebra {
            ring: ring.clone(),
            group,
            classes,
        }
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<GroupTable> {
        self.group.clone()
    }

    /// `n = |G|`.
    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn name(&self) -> String {
        format!("{}[{}]", self.ring.name(), self.group.name())
    }

    /// `log_2 |R[G]|`, as a float for budget comparisons.
    pub fn log2_size(&self) -> f64 {
        self.order() as f64 * (self.ring.size() as f64).log2()
    }

    pub fn residue_algebra(&self) -> GroupAlgebra {
        GroupAlgebra {
            ring: self.ring.residue_field(),
            group: self.group.clone(),
            classes: self.classes.clone(),
        }
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.0.len() != self.order() {
            return Err(Error::LengthMismatch {
                expected: self.order(),
                got: x.0.len(),
            });
        }
        if x.0.iter().any(|&a| !self.ring.contains(a)) {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement(vec![Elem::ZERO; self.order()])
    }

    /// The multiplicative identity: indicator of the group identity.
    pub fn one(&self) -> AlgebraElement {
        self.basis(self.group.identity())
    }

    pub fn basis(&self, g: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.0[g] = self.ring.one();
        x
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(
            x.0.iter()
                .zip(&y.0)
                .map(|(&a, &b)| self.ring.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(
            x.0.iter()
                .zip(&y.0)
                .map(|(&a, &b)| self.ring.sub(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, r: Elem, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(x.0.iter().map(|&a| self.ring.mul(r, a)).collect())
    }

    /// Convolution: `(xy)_h = Σ_{g g' = h} x_g y_{g'}`.
    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(&x.0, &y.0))
    }

    pub(crate) fn mul_unchecked(&self, x: &[Elem], y: &[Elem]) -> AlgebraElement {
        let n = self.order();
        let mut out = vec![Elem::ZERO; n];
        for (g, &a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (h, &b) in y.iter().enumerate() {
                if !b.is_zero() {
                    let k = self.group.mul(g, h);
                    out[k] = self.ring.add(out[k], self.ring.mul(a, b));
                }
            }
        }
        AlgebraElement(out)
    }

    /// `g · x`.
    pub fn left_translate(&self, g: usize, x: &[Elem]) -> Codeword {
        let mut out = vec![Elem::ZERO; x.len()];
        for (h, &a) in x.iter().enumerate() {
            out[self.group.mul(g, h)] = a;
        }
        out
    }

    /// `x · g`.
    pub fn right_translate(&self, x: &[Elem], g: usize) -> Codeword {
        let mut out = vec![Elem::ZERO; x.len()];
        for (h, &a) in x.iter().enumerate() {
            out[self.group.mul(h, g)] = a;
        }
        out
    }

    /// φ applied coefficientwise.
    pub fn project(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(x.0.iter().map(|&a| self.ring.project(a)).collect())
    }

    /// Canonical coefficientwise lift from `F_q[G]`.
    pub fn lift(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(x.0.iter().map(|&a| self.ring.lift(a)).collect())
    }

    pub fn is_central(&self, x: &AlgebraElement) -> bool {
        (0..self.order()).all(|g| self.left_translate(g, &x.0) == self.right_translate(&x.0, g))
    }

    pub fn is_idempotent(&self, x: &AlgebraElement) -> bool {
        self.mul_unchecked(&x.0, &x.0) == *x
    }

    /// Class sums, one per conjugacy class: a basis of the center.
    pub fn center_basis(&self) -> Vec<AlgebraElement> {
        self.classes
            .iter()
            .map(|class| {
                let mut x = self.zero();
                for &g in class {
                    x.0[g] = self.ring.one();
                }
                x
            })
            .collect()
    }

    /// `Σ_k a_k K_k` for class-sum coordinates `a`.
    pub fn from_class_coordinates(&self, a: &[Elem]) -> AlgebraElement {
        let mut x = self.zero();
        for (class, &c) in self.classes.iter().zip(a) {
            for &g in class {
                x.0[g] = c;
            }
        }
        x
    }

    /// Every central idempotent of this algebra, by exhaustive search over
    /// the span of the class sums. Sorted by coefficient vector.
    pub fn central_idempotents(&self, budget: u64) -> Result<Vec<AlgebraElement>> {
        let c = self.classes.len();
        let size = self.ring.size() as u128;
        let needed = size.checked_pow(c as u32).unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed,
                budget: budget as u128,
            });
        }
        // structure constants: K_k K_l = Σ_m lambda[k][l][m] K_m
        let sums = self.center_basis();
        let reps: Vec<usize> = self.classes.iter().map(|cl| cl[0]).collect();
        let lambda: Vec<Vec<Vec<Elem>>> = sums
            .iter()
            .map(|a| {
                sums.iter()
                    .map(|b| {
                        let prod = self.mul_unchecked(&a.0, &b.0);
                        reps.iter().map(|&r| prod.0[r]).collect()
                    })
                    .collect()
            })
            .collect();
        let ring = &self.ring;
        let mut found = Vec::new();
        let mut a = vec![Elem::ZERO; c];
        let mut square = vec![Elem::ZERO; c];
        loop {
            square.iter_mut().for_each(|s| *s = Elem::ZERO);
            for k in 0..c {
                if a[k].is_zero() {
                    continue;
                }
                for l in 0..c {
                    if a[l].is_zero() {
                        continue;
                    }
                    let coef = ring.mul(a[k], a[l]);
                    for m in 0..c {
                        square[m] = ring.add(square[m], ring.mul(coef, lambda[k][l][m]));
                    }
                }
            }
            if square == a {
                found.push(self.from_class_coordinates(&a));
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == c {
                    found.sort();
                    return Ok(found);
                }
                let next = a[pos].0 + 1;
                if next < ring.size() {
                    a[pos] = Elem(next);
                    break;
                }
                a[pos] = Elem::ZERO;
                pos += 1;
            }
        }
    }

    /// Central idempotents of `F_q[G]`.
    pub fn residue_central_idempotents(&self, budget: u64) -> Result<Vec<AlgebraElement>> {
        self.residue_algebra().central_idempotents(budget)
    }

    /// Iterates `e ← 3e² − 2e³` from `initial`, `⌈log₂ v⌉ + 1` times.
    pub fn hensel_lift_from(&self, initial: &AlgebraElement) -> AlgebraElement {
        let v = self.ring.v();
        let rounds = (u32::BITS - (v - 1).leading_zeros()) + 1;
        let three = self.ring.scalar(3);
        let two = self.ring.scalar(2);
        let mut e = initial.clone();
        for _ in 0..rounds {
            let e2 = self.mul_unchecked(&e.0, &e.0);
            let e3 = self.mul_unchecked(&e2.0, &e.0);
            e = self.sub(&self.scale(three, &e2), &self.scale(two, &e3));
        }
        e
    }

    /// Lifts a central idempotent of `F_q[G]` to the unique central idempotent
    /// of `R[G]` above it.
    pub fn hensel_lift_idempotent(&self, e0: &AlgebraElement) -> Result<CentralIdempotent> {
        let residue = self.residue_algebra();
        residue.check(e0)?;
        if !residue.is_idempotent(e0) || !residue.is_central(e0) {
            return Err(Error::NotIdempotent);
        }
        let element = self.hensel_lift_from(&self.lift(e0));
        debug_assert!(self.is_idempotent(&element));
        Ok(CentralIdempotent {
            element,
            residue_image: e0.clone(),
        })
    }

    /// The code `xR[G]`, spanned by the right translates of `x`.
    pub fn right_principal_code(&self, x: &AlgebraElement) -> LinearCode {
        let rows = (0..self.order())
            .map(|g| self.right_translate(&x.0, g))
            .collect();
        LinearCode::from_trusted(&self.ring, self.order(), rows)
    }

    fn closure(&self, gens: Vec<Codeword>, left: bool) -> LinearCode {
        let n = self.order();
        let mut code = LinearCode::from_trusted(&self.ring, n, gens);
        loop {
            let mut rows = code.rows().to_vec();
            for row in code.rows() {
                for g in 0..n {
                    if left {
                        rows.push(self.left_translate(g, row));
                    }
                    rows.push(self.right_translate(row, g));
                }
            }
            let next = LinearCode::from_trusted(&self.ring, n, rows);
            if next.log_q_cardinality() == code.log_q_cardinality() {
                return next;
            }
            code = next;
        }
    }

    /// The smallest two-sided ideal containing `gens`.
    pub fn ideal_from_generators(&self, gens: &[AlgebraElement]) -> Result<LinearCode> {
        for g in gens {
            self.check(g)?;
        }
        Ok(self.closure(gens.iter().map(|g| g.0.clone()).collect(), true))
    }

    /// The smallest right ideal containing `gens`.
    pub fn right_ideal_from_generators(&self, gens: &[AlgebraElement]) -> Result<LinearCode> {
        for g in gens {
            self.check(g)?;
        }
        Ok(self.closure(gens.iter().map(|g| g.0.clone()).collect(), false))
    }

    fn code_fits(&self, code: &LinearCode) -> bool {
        code.len() == self.order() && *code.ring() == self.ring
    }

    pub fn is_right_ideal(&self, code: &LinearCode) -> bool {
        self.code_fits(code)
            && code
                .rows()
                .iter()
                .all(|row| (0..self.order()).all(|g| code.contains(&self.right_translate(row, g))))
    }

    pub fn is_left_ideal(&self, code: &LinearCode) -> bool {
        self.code_fits(code)
            && code
                .rows()
                .iter()
                .all(|row| (0..self.order()).all(|g| code.contains(&self.left_translate(g, row))))
    }

    pub fn is_two_sided_ideal(&self, code: &LinearCode) -> bool {
        self.is_left_ideal(code) && self.is_right_ideal(code)
    }

    /// Applies a coordinate permutation to an algebra element.
    pub fn transport(&self, perm: &CoordinatePermutation, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement(perm.apply(&x.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(ring: ChainRing, group: GroupTable) -> GroupAlgebra {
        GroupAlgebra::new(&ring, Arc::new(group))
    }

    fn z4_c3() -> GroupAlgebra {
        alg(
            ChainRing::zpv(2, 2).unwrap(),
            GroupTable::cyclic(3).unwrap(),
        )
    }

    fn el(xs: &[u32]) -> AlgebraElement {
        AlgebraElement(xs.iter().map(|&x| Elem(x)).collect())
    }

    #[test]
    fn convolution_examples() {
        let a = z4_c3();
        let s = el(&[1, 1, 1]);
        assert_eq!(a.mul(&s, &s).unwrap(), el(&[3, 3, 3]));
        let x = el(&[1, 2, 3]);
        assert_eq!(a.mul(&x, &a.one()).unwrap(), x);
        assert!(a.mul(&x, &el(&[1, 2])).is_err());

        let f2s3 = alg(
            ChainRing::zpv(2, 1).unwrap(),
            GroupTable::symmetric(3).unwrap(),
        );
        // z = (123) + (132) at indices 3 and 4
        let z = el(&[0, 0, 0, 1, 1, 0]);
        assert_eq!(f2s3.mul(&z, &z).unwrap(), z);
    }

    #[test]
    fn ideal_generation_examples() {
        let a = z4_c3();
        let c = a.ideal_from_generators(&[el(&[1, 1, 1])]).unwrap();
        assert_eq!(c.cardinality(), Some(4));
        assert_eq!(c.rows(), [vec![Elem(1); 3]]);
        assert!(a.ideal_from_generators(&[a.one()]).unwrap().is_full());
        assert!(a.ideal_from_generators(&[a.zero()]).unwrap().is_zero());
    }

    #[test]
    fn two_sided_ideal_examples() {
        let a = z4_c3();
        let ring = a.ring().clone();
        let rep = LinearCode::new(&ring, 3, vec![vec![Elem(1); 3]]).unwrap();
        assert!(a.is_two_sided_ideal(&rep));
        let unit = LinearCode::new(&ring, 3, vec![vec![Elem(1), Elem(0), Elem(0)]]).unwrap();
        assert!(!a.is_two_sided_ideal(&unit));
        assert!(a.is_two_sided_ideal(&LinearCode::zero(&ring, 3)));
    }

    #[test]
    fn center_basis_examples() {
        assert_eq!(z4_c3().center_basis().len(), 3);
        let s3 = alg(
            ChainRing::zpv(2, 2).unwrap(),
            GroupTable::symmetric(3).unwrap(),
        );
        let basis = s3.center_basis();
        assert_eq!(
            basis,
            vec![
                el(&[1, 0, 0, 0, 0, 0]),
                el(&[0, 1, 1, 0, 0, 1]),
                el(&[0, 0, 0, 1, 1, 0])
            ]
        );
        assert!(basis.iter().all(|b| s3.is_central(b)));
        let q8 = alg(ChainRing::zpv(2, 2).unwrap(), GroupTable::quaternion8());
        assert_eq!(q8.center_basis().len(), 5);
    }

    #[test]
    fn residue_idempotent_examples() {
        let f2c3 = alg(
            ChainRing::zpv(2, 1).unwrap(),
            GroupTable::cyclic(3).unwrap(),
        );
        let ids = f2c3.central_idempotents(IDEMPOTENT_BUDGET).unwrap();
        assert_eq!(
            ids,
            vec![
                el(&[0, 0, 0]),
                el(&[0, 1, 1]),
                el(&[1, 0, 0]),
                el(&[1, 1, 1])
            ]
        );

        let f2s3 = alg(
            ChainRing::zpv(2, 1).unwrap(),
            GroupTable::symmetric(3).unwrap(),
        );
        let ids = f2s3.central_idempotents(IDEMPOTENT_BUDGET).unwrap();
        let z = el(&[0, 0, 0, 1, 1, 0]);
        let one_plus_z = el(&[1, 0, 0, 1, 1, 0]);
        assert_eq!(ids.len(), 4);
        assert!(ids.contains(&z) && ids.contains(&one_plus_z));

        let f3c3 = alg(
            ChainRing::zpv(3, 1).unwrap(),
            GroupTable::cyclic(3).unwrap(),
        );
        assert_eq!(
            f3c3.central_idempotents(IDEMPOTENT_BUDGET).unwrap().len(),
            2
        );

        assert!(matches!(
            f2s3.central_idempotents(4),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn hensel_lift_examples() {
        let a = z4_c3();
        let e = a.hensel_lift_idempotent(&el(&[1, 1, 1])).unwrap();
        assert_eq!(e.element, el(&[3, 3, 3]));
        assert_eq!(
            a.hensel_lift_idempotent(&el(&[0, 0, 0])).unwrap().element,
            a.zero()
        );
        assert_eq!(
            a.hensel_lift_idempotent(&el(&[1, 0, 0])).unwrap().element,
            a.one()
        );

        let s3 = alg(
            ChainRing::zpv(2, 2).unwrap(),
            GroupTable::symmetric(3).unwrap(),
        );
        let e = s3.hensel_lift_idempotent(&el(&[0, 0, 0, 1, 1, 0])).unwrap();
        assert_eq!(e.element, el(&[2, 0, 0, 1, 1, 0]));
        assert!(s3.is_idempotent(&e.element) && s3.is_central(&e.element));

        assert_eq!(
            a.hensel_lift_idempotent(&el(&[1, 1, 0])),
            Err(Error::NotIdempotent)
        );
    }
}
