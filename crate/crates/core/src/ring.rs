//! Finite chain rings `Z_{p^v}` and `F_{p^m}[u]/(u^v)`.
//!
//! Elements are stored as a single canonical integer code. For `Z_{p^v}` the
//! code is the residue in `[0, p^v)`. For `F_q[u]/(u^v)` it is the base-`p`
//! number whose digit at position `j*m + k` is the coefficient of `x^k u^j`,
//! where `x` generates the residue field over `F_p`.
//!
//! In both families the code of `γ^i · a` is `a · q^i mod q^v`, the valuation
//! of `a` is the `q`-adic valuation of its code, and the projection to the
//! residue field is `code mod q`. Only addition and multiplication differ.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rings up to this order get precomputed operation tables.
const TABLE_LIMIT: u32 = 256;
/// Largest supported ring order.
const MAX_ORDER: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    Zpv,
    FqU,
}

/// Canonical code of an element of some [`ChainRing`].
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Arithmetic in `F_{p^m}` on base-`p` digit codes.
#[derive(Debug)]
struct FieldArith {
    p: u32,
    m: u32,
    q: u32,
    /// Monic, little-endian, length `m + 1`.
    modulus: Vec<u32>,
    mul_table: Option<Vec<u32>>,
}

impl FieldArith {
    fn new(p: u32, m: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(m);
        let mut field = FieldArith {
            p,
            m,
            q,
            modulus,
            mul_table: None,
        };
        if m > 1 && q <= TABLE_LIMIT {
            let mut table = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = field.mul_direct(a, b);
                }
            }
            field.mul_table = Some(table);
        }
        field
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            (a + b) % self.p
        } else {
            digit_add(a, b, self.p, self.m)
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            ((a as u64 * b as u64) % self.p as u64) as u32
        } else if let Some(t) = &self.mul_table {
            t[(a * self.q + b) as usize]
        } else {
            self.mul_direct(a, b)
        }
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let m = self.m as usize;
        let da = digits(a, self.p, m);
        let db = digits(b, self.p, m);
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // reduce by the monic modulus from the top down
        for k in (m..2 * m).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (t, &f) in self.modulus[..m].iter().enumerate() {
                let idx = k - m + t;
                prod[idx] = (prod[idx] + (p - c) * f as u64) % p;
            }
        }
        from_digits(prod[..m].iter().map(|&d| d as u32), self.p)
    }

    fn pow(&self, mut a: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    fn inverse(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.q as u64 - 2))
        }
    }
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(a % p);
        a /= p;
    }
    out
}

fn from_digits(ds: impl DoubleEndedIterator<Item = u32>, p: u32) -> u32 {
    ds.rev().fold(0, |acc, d| acc * p + d)
}

fn digit_add(mut a: u32, mut b: u32, p: u32, len: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..len {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn digit_neg(mut a: u32, p: u32, len: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..len {
        out += ((p - a % p) % p) * scale;
        a /= p;
        scale *= p;
    }
    out
}

/// Polynomial `f` (little-endian, monic of degree `m`) irreducible over `F_p`,
/// by trial division against every monic polynomial of degree `1..=m/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut g = digits(low as u32, p, deg);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    let p = p as u64;
    for k in (dg..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (t, &gc) in g.iter().enumerate() {
            let idx = k - dg + t;
            r[idx] = (r[idx] + (p - c) * gc as u64 % p) % p;
        }
    }
    r.truncate(dg);
    r.into_iter().map(|c| c as u32).collect()
}

/// Lexicographically first monic irreducible polynomial of degree `m` over `F_p`.
pub fn default_modulus(p: u32, m: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if m == 0 {
        return Err(Error::InvalidDegree(m));
    }
    if m == 1 {
        return Ok(vec![0, 1]);
    }
    let count = (p as u64)
        .checked_pow(m)
        .ok_or(Error::RingTooLarge(u128::MAX))?;
    if count > MAX_ORDER {
        return Err(Error::RingTooLarge(count as u128));
    }
    for low in 0..count {
        let mut f = digits(low as u32, p, m as usize);
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, p) {
            return Ok(f);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// JSON descriptor of a chain ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDescriptor {
    pub family: Family,
    pub p: u32,
    #[serde(default = "one")]
    pub m: u32,
    pub v: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

impl RingDescriptor {
    pub fn zpv(p: u32, v: u32) -> Self {
        RingDescriptor {
            family: Family::Zpv,
            p,
            m: 1,
            v,
            modulus: None,
        }
    }

    pub fn fqu(p: u32, m: u32, v: u32, modulus: Option<Vec<u32>>) -> Self {
        RingDescriptor {
            family: Family::FqU,
            p,
            m,
            v,
            modulus,
        }
    }

    /// Parses short names: `Z4`, `Z9`, `F3` (prime field), `F4` (with the
    /// default modulus), `F2u2` for `F_2[u]/(u^2)`, `F4u2`, ...
    pub fn parse_name(name: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised ring name {name:?}"));
        let prime_power = |n: u64| -> Option<(u32, u32)> {
            if n < 2 {
                return None;
            }
            let p = (2..=n).find(|d| n % d == 0)?;
            let mut e = 0;
            let mut rest = n;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            (rest == 1).then_some((p as u32, e))
        };
        if let Some(rest) = name.strip_prefix('Z') {
            let n: u64 = rest.parse().map_err(|_| bad())?;
            let (p, v) = prime_power(n).ok_or_else(bad)?;
            return Ok(RingDescriptor::zpv(p, v));
        }
        if let Some(rest) = name.strip_prefix('F') {
            let (q_str, v) = match rest.split_once('u') {
                Some((q, v)) => (q, v.parse::<u32>().map_err(|_| bad())?),
                None => (rest, 1),
            };
            let q: u64 = q_str.parse().map_err(|_| bad())?;
            let (p, m) = prime_power(q).ok_or_else(bad)?;
            if v == 1 && m == 1 && !rest.contains('u') {
                return Ok(RingDescriptor::zpv(p, 1));
            }
            let modulus = if m > 1 {
                Some(default_modulus(p, m)?)
            } else {
                None
            };
            return Ok(RingDescriptor::fqu(p, m, v, modulus));
        }
        Err(bad())
    }
}

#[derive(Debug)]
struct RingInner {
    family: Family,
    p: u32,
    m: u32,
    v: u32,
    q: u32,
    size: u32,
    modulus: Vec<u32>,
    field: FieldArith,
    /// q^0, ..., q^v
    q_pows: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    inv_table: Option<Vec<u32>>,
    residue: OnceLock<ChainRing>,
}

/// A validated finite chain ring. Cheap to clone; immutable.
#[derive(Clone)]
pub struct ChainRing {
    inner: Arc<RingInner>,
}

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainRing({})", self.name())
    }
}

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.family == other.inner.family
                && self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.v == other.inner.v
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for ChainRing {}

impl fmt::Display for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl ChainRing {
    /// Builds and validates a ring from its descriptor.
    pub fn new(desc: &RingDescriptor) -> Result<Self> {
        let RingDescriptor {
            family, p, m, v, ..
        } = *desc;
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if v < 1 {
            return Err(Error::InvalidNilpotency(v));
        }
        if m < 1 {
            return Err(Error::InvalidDegree(m));
        }
        if family == Family::Zpv && m != 1 {
            return Err(Error::ZpvExtension(m));
        }
        let order = (p as u128).checked_pow(m * v).unwrap_or(u128::MAX);
        if order > MAX_ORDER as u128 {
            return Err(Error::RingTooLarge(order));
        }
        let modulus = match (&desc.modulus, m) {
            (None, 1) => vec![0, 1],
            (None, _) => return Err(Error::MissingModulus),
            (Some(f), _) => {
                let ok = f.len() == m as usize + 1
                    && f[m as usize] == 1
                    && f.iter().all(|&c| c < p)
                    && is_irreducible(f, p);
                if !ok {
                    return Err(Error::ReducibleModulus(f.clone(), m, p));
                }
                f.clone()
            }
        };
        let q = p.pow(m);
        let size = order as u32;
        let q_pows = (0..=v).map(|i| q.pow(i)).collect();
        let mut inner = RingInner {
            family,
            p,
            m,
            v,
            q,
            size,
            modulus: modulus.clone(),
            field: FieldArith::new(p, m, modulus),
            q_pows,
            add_table: None,
            mul_table: None,
            inv_table: None,
            residue: OnceLock::new(),
        };
        if size <= TABLE_LIMIT {
            let n = size as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..size {
                for b in 0..size {
                    add[a as usize * n + b as usize] = inner.add_direct(a, b);
                    mul[a as usize * n + b as usize] = inner.mul_direct(a, b);
                }
            }
            let mut inv = vec![0; n];
            for a in 0..n {
                if let Some(b) = (0..n).find(|&b| mul[a * n + b] == 1) {
                    inv[a] = b as u32;
                }
            }
            inner.add_table = Some(add);
            inner.mul_table = Some(mul);
            inner.inv_table = Some(inv);
        }
        Ok(ChainRing {
            inner: Arc::new(inner),
        })
    }

    /// `Z_{p^v}`.
    pub fn zpv(p: u32, v: u32) -> Result<Self> {
        Self::new(&RingDescriptor::zpv(p, v))
    }

    /// `F_{p^m}[u]/(u^v)`; `modulus` may be omitted when `m == 1`.
    pub fn fqu(p: u32, m: u32, v: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        Self::new(&RingDescriptor::fqu(p, m, v, modulus))
    }

    pub fn descriptor(&self) -> RingDescriptor {
        let i = &self.inner;
        RingDescriptor {
            family: i.family,
            p: i.p,
            m: i.m,
            v: i.v,
            modulus: (i.family == Family::FqU && i.m > 1).then(|| i.modulus.clone()),
        }
    }

    pub fn name(&self) -> String {
        let i = &self.inner;
        match i.family {
            Family::Zpv if i.v == 1 => format!("F{}", i.p),
            Family::Zpv => format!("Z{}", i.size),
            Family::FqU if i.v == 1 => format!("F{}", i.q),
            Family::FqU => format!("F{}[u]/(u^{})", i.q, i.v),
        }
    }

    pub fn family(&self) -> Family {
        self.inner.family
    }
    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn m(&self) -> u32 {
        self.inner.m
    }
    /// Nilpotency index of γ.
    pub fn v(&self) -> u32 {
        self.inner.v
    }
    /// Order of the residue field.
    pub fn q(&self) -> u32 {
        self.inner.q
    }
    /// `|R| = q^v`.
    pub fn size(&self) -> u32 {
        self.inner.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }
    pub fn is_field(&self) -> bool {
        self.inner.v == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.inner.size).map(Elem)
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }
    pub fn one(&self) -> Elem {
        Elem(1 % self.inner.size)
    }
    pub fn gamma(&self) -> Elem {
        self.gamma_pow(1)
    }
    pub fn gamma_pow(&self, i: u32) -> Elem {
        if i >= self.inner.v {
            Elem::ZERO
        } else {
            Elem(self.inner.q_pows[i as usize])
        }
    }

    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.inner.size
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.add_table {
            Some(t) => Elem(t[(a.0 * self.inner.size + b.0) as usize]),
            None => Elem(self.inner.add_direct(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let i = &self.inner;
        Elem(match i.family {
            Family::Zpv => (i.size - a.0) % i.size,
            Family::FqU => digit_neg(a.0, i.p, i.m * i.v),
        })
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.inner.mul_table {
            Some(t) => Elem(t[(a.0 * self.inner.size + b.0) as usize]),
            None => Elem(self.inner.mul_direct(a.0, b.0)),
        }
    }

    pub fn pow(&self, mut a: Elem, mut e: u64) -> Elem {
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// `n · a` for an integer `n`.
    pub fn scalar(&self, n: u64) -> Elem {
        let i = &self.inner;
        match i.family {
            Family::Zpv => Elem((n % i.size as u64) as u32),
            Family::FqU => Elem((n % i.p as u64) as u32),
        }
    }

    /// Largest `i` with `a ∈ γ^i R`; `valuation(0) = v`.
    #[inline]
    pub fn valuation(&self, a: Elem) -> u32 {
        if a.0 == 0 {
            return self.inner.v;
        }
        let q = self.inner.q;
        let mut x = a.0;
        let mut i = 0;
        while x % q == 0 {
            x /= q;
            i += 1;
        }
        i
    }

    #[inline]
    pub fn is_unit(&self, a: Elem) -> bool {
        a.0 % self.inner.q != 0
    }

    pub fn inverse(&self, a: Elem) -> Result<Elem> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        if let Some(t) = &self.inner.inv_table {
            return Ok(Elem(t[a.0 as usize]));
        }
        // invert the residue, then Newton: b <- b(2 - ab)
        let r = self
            .inner
            .field
            .inverse(self.project(a).0)
            .ok_or(Error::NonUnit)?;
        let mut b = self.lift(Elem(r));
        let two = self.scalar(2);
        while self.mul(a, b) != self.one() {
            b = self.mul(b, self.sub(two, self.mul(a, b)));
        }
        Ok(b)
    }

    /// `γ^i · a`.
    #[inline]
    pub fn mul_gamma_pow(&self, a: Elem, i: u32) -> Elem {
        if i >= self.inner.v {
            return Elem::ZERO;
        }
        let shifted = a.0 as u64 * self.inner.q_pows[i as usize] as u64;
        Elem((shifted % self.inner.size as u64) as u32)
    }

    /// The canonical `t` with `γ^i · t = a`; requires `valuation(a) >= i`.
    #[inline]
    pub fn div_gamma_pow(&self, a: Elem, i: u32) -> Elem {
        debug_assert!(self.valuation(a) >= i);
        Elem(a.0 / self.inner.q_pows[i.min(self.inner.v) as usize])
    }

    /// The canonical representative of `a` modulo `γ^i R`.
    #[inline]
    pub fn rem_gamma_pow(&self, a: Elem, i: u32) -> Elem {
        Elem(a.0 % self.inner.q_pows[i.min(self.inner.v) as usize])
    }

    /// Canonical representatives of `R / γ^k R`.
    pub fn representatives_mod_gamma_pow(&self, k: u32) -> impl Iterator<Item = Elem> {
        (0..self.inner.q_pows[k.min(self.inner.v) as usize]).map(Elem)
    }

    /// The residue field `R/γR`, itself a chain ring with `v = 1`.
    pub fn residue_field(&self) -> ChainRing {
        if self.inner.v == 1 {
            return self.clone();
        }
        self.inner
            .residue
            .get_or_init(|| {
                let i = &self.inner;
                let desc = RingDescriptor {
                    family: i.family,
                    p: i.p,
                    m: i.m,
                    v: 1,
                    modulus: (i.m > 1).then(|| i.modulus.clone()),
                };
                ChainRing::new(&desc).expect("residue field of a valid ring is valid")
            })
            .clone()
    }

    /// The projection φ onto the residue field.
    #[inline]
    pub fn project(&self, a: Elem) -> Elem {
        Elem(a.0 % self.inner.q)
    }

    /// Canonical lift of a residue element: all higher γ-digits zero.
    #[inline]
    pub fn lift(&self, x: Elem) -> Elem {
        debug_assert!(x.0 < self.inner.q);
        x
    }

    pub fn element(&self, a: Elem) -> Result<RingElement> {
        if !self.contains(a) {
            return Err(Error::Encoding(format!(
                "code {} outside ring {}",
                a.0,
                self.name()
            )));
        }
        Ok(RingElement {
            ring: self.clone(),
            value: a,
        })
    }

    pub fn random(&self, rng: &mut impl rand::Rng) -> Elem {
        Elem(rng.gen_range(0..self.inner.size))
    }
}

impl RingInner {
    fn add_direct(&self, a: u32, b: u32) -> u32 {
        match self.family {
            Family::Zpv => ((a as u64 + b as u64) % self.size as u64) as u32,
            Family::FqU => digit_add(a, b, self.p, self.m * self.v),
        }
    }

    fn mul_direct(&self, a: u32, b: u32) -> u32 {
        match self.family {
            Family::Zpv => ((a as u64 * b as u64) % self.size as u64) as u32,
            Family::FqU => {
                let v = self.v as usize;
                let q = self.q;
                let da = digits(a, q, v);
                let db = digits(b, q, v);
                let mut out = vec![0u32; v];
                for (i, &x) in da.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in db.iter().enumerate().take(v - i) {
                        out[i + j] = self.field.add(out[i + j], self.field.mul(x, y));
                    }
                }
                from_digits(out.into_iter(), q)
            }
        }
    }
}

/// A ring element bundled with its ring; arithmetic checks ring agreement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    ring: ChainRing,
    value: Elem,
}

impl RingElement {
    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    fn same_ring(&self, other: &RingElement) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn wrap(&self, value: Elem) -> RingElement {
        RingElement {
            ring: self.ring.clone(),
            value,
        }
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(self.wrap(self.ring.add(self.value, other.value)))
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        self.same_ring(other)?;
        Ok(self.wrap(self.ring.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> RingElement {
        self.wrap(self.ring.neg(self.value))
    }

    pub fn inverse(&self) -> Result<RingElement> {
        Ok(self.wrap(self.ring.inverse(self.value)?))
    }

    pub fn valuation(&self) -> u32 {
        self.ring.valuation(self.value)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.value)
    }

    /// φ(a).
    pub fn project(&self) -> ResidueElement {
        ResidueElement {
            field: self.ring.residue_field(),
            value: self.ring.project(self.value),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.encode(self.value))
    }
}

/// Element of the residue field `F_q = R/γR`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueElement {
    field: ChainRing,
    value: Elem,
}

impl ResidueElement {
    pub fn new(field: &ChainRing, value: Elem) -> Result<Self> {
        if !field.is_field() || !field.contains(value) {
            return Err(Error::Encoding(format!(
                "{} is not an element of a residue field",
                value
            )));
        }
        Ok(ResidueElement {
            field: field.clone(),
            value,
        })
    }

    pub fn field(&self) -> &ChainRing {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    /// Canonical lift into `ring`, whose residue field must be this field.
    pub fn lift(&self, ring: &ChainRing) -> Result<RingElement> {
        if ring.residue_field() != self.field {
            return Err(Error::RingMismatch);
        }
        ring.element(ring.lift(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> ChainRing {
        ChainRing::zpv(2, 2).unwrap()
    }

    fn f2u(v: u32) -> ChainRing {
        ChainRing::fqu(2, 1, v, None).unwrap()
    }

    #[test]
    fn construct_examples() {
        let r = z4();
        assert_eq!((r.size(), r.q(), r.gamma()), (4, 2, Elem(2)));
        let r = f2u(3);
        assert_eq!((r.size(), r.q(), r.gamma()), (8, 2, Elem(2)));
        assert_eq!(ChainRing::zpv(6, 1).unwrap_err(), Error::NotPrime(6));
        assert_eq!(
            ChainRing::zpv(2, 0).unwrap_err(),
            Error::InvalidNilpotency(0)
        );
        assert!(matches!(
            ChainRing::new(&RingDescriptor {
                family: Family::Zpv,
                p: 2,
                m: 2,
                v: 2,
                modulus: None
            }),
            Err(Error::ZpvExtension(2))
        ));
        assert_eq!(
            ChainRing::fqu(2, 2, 2, None).unwrap_err(),
            Error::MissingModulus
        );
        // x^2 + 1 = (x + 1)^2 over F2
        assert!(matches!(
            ChainRing::fqu(2, 2, 2, Some(vec![1, 0, 1])),
            Err(Error::ReducibleModulus(..))
        ));
        assert!(ChainRing::fqu(2, 2, 2, Some(vec![1, 1, 1])).is_ok());
    }

    #[test]
    fn arithmetic_examples() {
        let r = z4();
        assert_eq!(r.mul(Elem(3), Elem(3)), Elem(1));
        let r = f2u(2);
        // 1 + u has code 3
        assert_eq!(r.mul(Elem(3), Elem(3)), Elem(1));
        let r = ChainRing::zpv(3, 2).unwrap();
        assert_eq!(r.mul(Elem(3), Elem(3)), Elem(0));
    }

    #[test]
    fn inverse_examples() {
        let r = z4();
        assert_eq!(r.inverse(Elem(3)), Ok(Elem(3)));
        assert_eq!(r.inverse(Elem(2)), Err(Error::NonUnit));
        assert_eq!(f2u(2).inverse(Elem(3)), Ok(Elem(3)));
    }

    #[test]
    fn valuation_examples() {
        let r = z4();
        assert_eq!(r.valuation(Elem(2)), 1);
        assert_eq!(r.valuation(Elem(0)), 2);
        // u^2 in F2[u]/(u^3) has code 4
        assert_eq!(f2u(3).valuation(Elem(4)), 2);
    }

    #[test]
    fn projection_examples() {
        let r = z4();
        assert_eq!(r.project(Elem(3)), Elem(1));
        assert_eq!(r.project(Elem(2)), Elem(0));
        assert_eq!(f2u(2).project(Elem(3)), Elem(1));
        assert_eq!(r.lift(Elem(1)), Elem(1));
        assert_eq!(r.lift(Elem(0)), Elem(0));
        assert_eq!(f2u(3).lift(Elem(1)), Elem(1));
    }

    #[test]
    fn large_ring_without_tables() {
        // F9[u]/(u^3): 729 elements, direct arithmetic path
        let r = ChainRing::fqu(3, 2, 3, Some(default_modulus(3, 2).unwrap())).unwrap();
        assert_eq!(r.size(), 729);
        let units = r.elements().filter(|&a| r.is_unit(a)).count();
        assert_eq!(units, 729 - 81);
        for a in r.elements().filter(|&a| r.is_unit(a)).step_by(7) {
            assert_eq!(r.mul(a, r.inverse(a).unwrap()), r.one());
        }
        let z = ChainRing::zpv(5, 5).unwrap();
        assert_eq!(z.mul(Elem(7), z.inverse(Elem(7)).unwrap()), Elem(1));
    }

    #[test]
    fn checked_elements() {
        let a = z4().element(Elem(3)).unwrap();
        let b = f2u(2).element(Elem(3)).unwrap();
        assert_eq!(a.add(&b), Err(Error::RingMismatch));
        assert_eq!(a.mul(&a).unwrap().value(), Elem(1));
        assert_eq!(a.project().value(), Elem(1));
        assert_eq!(a.project().lift(&z4()).unwrap().value(), Elem(1));
        assert!(z4().element(Elem(4)).is_err());
    }

    #[test]
    fn names() {
        for (name, expect) in [
            ("Z4", RingDescriptor::zpv(2, 2)),
            ("Z9", RingDescriptor::zpv(3, 2)),
            ("F3", RingDescriptor::zpv(3, 1)),
            ("F2u2", RingDescriptor::fqu(2, 1, 2, None)),
            ("F4u2", RingDescriptor::fqu(2, 2, 2, Some(vec![1, 1, 1]))),
        ] {
            assert_eq!(RingDescriptor::parse_name(name).unwrap(), expect);
        }
        assert!(RingDescriptor::parse_name("Z6").is_err());
        assert!(RingDescriptor::parse_name("Q").is_err());
    }
}
