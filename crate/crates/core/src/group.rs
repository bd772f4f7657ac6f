//! Finite groups stored extensionally as Cayley tables.
//!
//! Element orderings per constructor:
//! - `cyclic(n)`: `g^0, g^1, ..., g^{n-1}`
//! - `dihedral(n)` (order `2n`): `r^0..r^{n-1}` then `r^0 s..r^{n-1} s`
//! - `symmetric(n)`: permutations of `{1..n}` in lexicographic one-line
//!   notation; `(στ)(x) = σ(τ(x))`
//! - `quaternion8`: `1, -1, i, -i, j, -j, k, -k`
//! - `direct_product(A, B)`: index `a·|B| + b`

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Orders above this get sampled rather than exhaustive associativity checks.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 64;
const ASSOC_SAMPLES: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Cyclic,
    Dihedral,
    Symmetric,
    Quaternion8,
    Product,
    Table,
}

/// JSON descriptor of a group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDescriptor {
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<GroupDescriptor>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl GroupDescriptor {
    fn simple(kind: GroupKind, n: Option<usize>) -> Self {
        GroupDescriptor {
            kind,
            n,
            factors: None,
            table: None,
            labels: None,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        Self::simple(GroupKind::Cyclic, Some(n))
    }
    pub fn dihedral(n: usize) -> Self {
        Self::simple(GroupKind::Dihedral, Some(n))
    }
    pub fn symmetric(n: usize) -> Self {
        Self::simple(GroupKind::Symmetric, Some(n))
    }
    pub fn quaternion8() -> Self {
        Self::simple(GroupKind::Quaternion8, None)
    }
    pub fn product(factors: Vec<GroupDescriptor>) -> Self {
        GroupDescriptor {
            factors: Some(factors),
            ..Self::simple(GroupKind::Product, None)
        }
    }

    /// Parses `C3`, `D4` (order 8), `S3`, `Q8`, and products like `C2xC2`.
    pub fn parse_name(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split(['x', 'X', '*']).collect();
        if parts.len() > 1 {
            let factors = parts
                .into_iter()
                .map(Self::parse_name)
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::product(factors));
        }
        let bad = || Error::Parse(format!("unrecognised group name {name:?}"));
        if name == "Q8" {
            return Ok(Self::quaternion8());
        }
        let (head, num) = name.split_at(1.min(name.len()));
        let n: usize = num.parse().map_err(|_| bad())?;
        match head {
            "C" => Ok(Self::cyclic(n)),
            "D" => Ok(Self::dihedral(n)),
            "S" => Ok(Self::symmetric(n)),
            _ => Err(bad()),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            GroupKind::Cyclic => format!("C{}", self.n.unwrap_or(0)),
            GroupKind::Dihedral => format!("D{}", self.n.unwrap_or(0)),
            GroupKind::Symmetric => format!("S{}", self.n.unwrap_or(0)),
            GroupKind::Quaternion8 => "Q8".to_string(),
            GroupKind::Product => self
                .factors
                .iter()
                .flatten()
                .map(|f| f.name())
                .collect::<Vec<_>>()
                .join("x"),
            GroupKind::Table => format!("T{}", self.table.as_ref().map_or(0, |t| t.len())),
        }
    }
}

/// A validated finite group. Index 0 is always the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    labels: Vec<String>,
    descriptor: GroupDescriptor,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupTable({}, order {})", self.name(), self.n)
    }
}

impl GroupTable {
    fn build(
        n: usize,
        table: Vec<usize>,
        labels: Vec<String>,
        descriptor: GroupDescriptor,
    ) -> Self {
        let inverse = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| table[i * n + j] == 0)
                    .expect("latin square")
            })
            .collect();
        GroupTable {
            n,
            table,
            inverse,
            labels,
            descriptor,
        }
    }

    /// Validates a raw multiplication table: identity at index 0, Latin
    /// square, associativity.
    pub fn from_table(raw: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let n = raw.len();
        let invalid = |msg: String| Err(Error::InvalidTable(msg));
        if n == 0 {
            return invalid("empty table".into());
        }
        if raw.iter().any(|row| row.len() != n) {
            return invalid("table is not square".into());
        }
        if raw.iter().flatten().any(|&x| x >= n) {
            return invalid("entry out of range".into());
        }
        for i in 0..n {
            if raw[0][i] != i || raw[i][0] != i {
                return invalid("index 0 is not the identity".into());
            }
        }
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut row_seen[raw[i][j]], true)
                    || std::mem::replace(&mut col_seen[raw[j][i]], true)
                {
                    return invalid(format!("row or column {i} is not a permutation"));
                }
            }
        }
        let flat: Vec<usize> = raw.iter().flatten().copied().collect();
        let assoc = |a: usize, b: usize, c: usize| {
            flat[flat[a * n + b] * n + c] == flat[a * n + flat[b * n + c]]
        };
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return invalid(format!("not associative at ({a}, {b}, {c})"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..ASSOC_SAMPLES {
                let (a, b, c) = (
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                    rng.gen_range(0..n),
                );
                if !assoc(a, b, c) {
                    return invalid(format!("not associative at ({a}, {b}, {c})"));
                }
            }
        }
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return invalid(format!("{} labels for {} elements", l.len(), n));
            }
            None => (0..n).map(|i| format!("e{i}")).collect(),
        };
        let descriptor = GroupDescriptor {
            kind: GroupKind::Table,
            n: None,
            factors: None,
            table: Some(raw),
            labels: Some(labels.clone()),
        };
        Ok(Self::build(n, flat, labels, descriptor))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let labels = (0..n)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            })
            .collect();
        Ok(Self::build(n, table, labels, GroupDescriptor::cyclic(n)))
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral group needs n >= 1".into()));
        }
        let order = 2 * n;
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                let (i, s) = (a % n, a >= n);
                let (j, t) = (b % n, b >= n);
                // r^i s^s · r^j s^t = r^{i ± j} s^{s xor t}
                let k = if s { (i + n - j) % n } else { (i + j) % n };
                table[a * order + b] = k + if s != t { n } else { 0 };
            }
        }
        let rot = |i: usize| match i {
            0 => "1".to_string(),
            1 => "r".to_string(),
            _ => format!("r^{i}"),
        };
        let labels = (0..order)
            .map(|a| match (a % n, a >= n) {
                (i, false) => rot(i),
                (0, true) => "s".to_string(),
                (i, true) => format!("{}s", rot(i)),
            })
            .collect();
        Ok(Self::build(
            order,
            table,
            labels,
            GroupDescriptor::dihedral(n),
        ))
    }

    /// Symmetric group on `n <= 5` points.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=5).contains(&n) {
            return Err(Error::InvalidGroup(format!(
                "symmetric({n}) unsupported, need 1..=5"
            )));
        }
        let perms = lexicographic_permutations(n);
        let order = perms.len();
        let index = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let mut table = vec![0; order * order];
        for (a, sigma) in perms.iter().enumerate() {
            for (b, tau) in perms.iter().enumerate() {
                let comp: Vec<usize> = tau.iter().map(|&x| sigma[x]).collect();
                table[a * order + b] = index(&comp);
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Ok(Self::build(
            order,
            table,
            labels,
            GroupDescriptor::symmetric(n),
        ))
    }

    pub fn quaternion8() -> Self {
        // unit k encoded as (basis, sign) with basis 0..4 = 1, i, j, k
        const BASIS: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let mut table = vec![0; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (x, sx) = (a / 2, a % 2 == 1);
                let (y, sy) = (b / 2, b % 2 == 1);
                let (z, sz) = BASIS[x][y];
                table[a * 8 + b] = 2 * z + usize::from(sx ^ sy ^ sz);
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .map(String::from)
            .to_vec();
        Self::build(8, table, labels, GroupDescriptor::quaternion8())
    }

    pub fn direct_product(a: &GroupTable, b: &GroupTable) -> Self {
        let (na, nb) = (a.n, b.n);
        let n = na * nb;
        let mut table = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                table[x * n + y] = a.mul(xa, ya) * nb + b.mul(xb, yb);
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb]))
            .collect();
        let mut factors = match &a.descriptor {
            GroupDescriptor {
                kind: GroupKind::Product,
                factors: Some(f),
                ..
            } => f.clone(),
            d => vec![d.clone()],
        };
        factors.push(b.descriptor.clone());
        Self::build(n, table, labels, GroupDescriptor::product(factors))
    }

    pub fn from_descriptor(desc: &GroupDescriptor) -> Result<Self> {
        let need_n = || {
            desc.n
                .ok_or_else(|| Error::InvalidGroup(format!("{:?} needs n", desc.kind)))
        };
        match desc.kind {
            GroupKind::Cyclic => Self::cyclic(need_n()?),
            GroupKind::Dihedral => Self::dihedral(need_n()?),
            GroupKind::Symmetric => Self::symmetric(need_n()?),
            GroupKind::Quaternion8 => Ok(Self::quaternion8()),
            GroupKind::Product => {
                let factors = desc
                    .factors
                    .as_ref()
                    .filter(|f| !f.is_empty())
                    .ok_or_else(|| Error::InvalidGroup("product needs factors".into()))?;
                let mut acc = Self::from_descriptor(&factors[0])?;
                for f in &factors[1..] {
                    acc = Self::direct_product(&acc, &Self::from_descriptor(f)?);
                }
                Ok(acc)
            }
            GroupKind::Table => {
                let raw = desc
                    .table
                    .clone()
                    .ok_or_else(|| Error::InvalidGroup("table missing".into()))?;
                Self::from_table(raw, desc.labels.clone())
            }
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn name(&self) -> String {
        self.descriptor.name()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Conjugacy classes, each sorted, ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut classes = Vec::new();
        for x in 0..self.n {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.n)
                .map(|g| self.mul(self.mul(g, x), self.inv(g)))
                .collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// τ: the coordinate permutation `g ↦ g⁻¹`.
    pub fn inversion_permutation(&self) -> CoordinatePermutation {
        CoordinatePermutation {
            image: self.inverse.clone(),
        }
    }

    /// Permutation induced by the cyclic automorphism `g^i ↦ g^{ik}`.
    /// Only meaningful for `cyclic` groups; errors unless `gcd(k, n) = 1`.
    pub fn cyclic_power_map(&self, k: usize) -> Result<CoordinatePermutation> {
        if self.descriptor.kind != GroupKind::Cyclic {
            return Err(Error::InvalidGroup(
                "power automorphism requires a cyclic group".into(),
            ));
        }
        CoordinatePermutation::new((0..self.n).map(|i| i * k % self.n).collect())
    }
}

/// Shared handle used by algebra code.
pub type SharedGroup = Arc<GroupTable>;

fn lexicographic_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next permutation
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

fn cycle_notation(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = vec![start + 1];
        seen[start] = true;
        let mut x = perm[start];
        while x != start {
            seen[x] = true;
            cycle.push(x + 1);
            x = perm[x];
        }
        out.push('(');
        out.push_str(&cycle.iter().map(|c| c.to_string()).collect::<String>());
        out.push(')');
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// A bijection of coordinates: coordinate `i` moves to `image[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordinatePermutation {
    image: Vec<usize>,
}

impl CoordinatePermutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &i in &image {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidGroup(format!(
                    "{image:?} is not a permutation"
                )));
            }
        }
        Ok(CoordinatePermutation { image })
    }

    pub fn identity(n: usize) -> Self {
        CoordinatePermutation {
            image: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CoordinatePermutation) -> CoordinatePermutation {
        CoordinatePermutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }

    pub fn inverse(&self) -> CoordinatePermutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        CoordinatePermutation { image: inv }
    }

    /// Moves entry `i` of `x` to position `image[i]`.
    pub fn apply<T: Copy + Default>(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); x.len()];
        for (i, &val) in x.iter().enumerate() {
            out[self.image[i]] = val;
        }
        out
    }
}
