//! Arithmetic in GF(2^n) for `1 <= n <= 20`.
//!
//! Elements are polynomial residues packed into a `u32` (bit `i` is the
//! coefficient of `x^i`). The same bit pattern is used as the coordinate
//! vector of the element in F_2^n, so vectorial functions and field maps
//! share one encoding.

use std::fmt;
use std::ops::{Add, AddAssign};
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::linalg::BitMatrix;

pub const MAX_FIELD_DEGREE: u32 = 20;

/// Log/antilog tables are built up to this degree (2 x 256 KiB at n = 16).
const TABLE_MAX_DEGREE: u32 = 16;

/// An element of GF(2^n). Addition is XOR; multiplication needs a [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

struct Tables {
    /// exp[i] = g^i for 0 <= i < 2(2^n - 1)
    exp: Vec<u32>,
    /// log[a] for a != 0
    log: Vec<u32>,
}

/// Precomputed data for the trace bilinear form `(a, x) -> tr(a x)`.
struct TraceDual {
    /// bit j set iff tr(x^j) = 1
    trace_mask: u32,
    /// form_of_basis[j] is the coordinate vector w with tr(x^j * y) = w . y
    form_of_basis: Vec<u32>,
    /// inverse of the form map, as a matrix acting on coordinate vectors
    element_of_form: BitMatrix,
}

/// A concrete representation of GF(2^n): the degree plus an irreducible modulus.
#[derive(Clone)]
pub struct FieldCtx {
    n: u32,
    modulus: u64,
    tables: Option<Arc<Tables>>,
    dual: Arc<TraceDual>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Remainder of `a` modulo `b` in F_2[x].
pub fn poly_mod(mut a: u64, b: u64) -> u64 {
    debug_assert!(b != 0);
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

pub fn poly_degree(p: u64) -> Option<u32> {
    (p != 0).then(|| 63 - p.leading_zeros())
}

/// Irreducibility over F_2 by trial division with every polynomial of
/// degree `1..=deg/2`.
///
/// Polynomials with zero constant term are treated as reducible for every
/// degree, so that `x` is never chosen as a modulus for GF(2).
pub fn is_irreducible(p: u64) -> bool {
    let Some(d) = poly_degree(p) else { return false };
    if d == 0 || p & 1 == 0 {
        return false;
    }
    for dd in 1..=d / 2 {
        for q in (1u64 << dd)..(1u64 << (dd + 1)) {
            if poly_mod(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

/// The lexicographically smallest irreducible polynomial of degree `n`.
pub fn smallest_irreducible(n: u32) -> u64 {
    ((1u64 << n)..(1u64 << (n + 1)))
        .find(|&p| is_irreducible(p))
        .expect("an irreducible polynomial exists in every degree")
}

/// Parse a modulus written as a hexadecimal bitmask, e.g. `0x11B`.
pub fn parse_modulus_hex(s: &str) -> Result<u64> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    u64::from_str_radix(t, 16).map_err(|e| Error::Parse(format!("bad modulus {s:?}: {e}")))
}

pub fn format_modulus_hex(m: u64) -> String {
    format!("0x{m:X}")
}

#[inline]
fn clmul_reduce(a: u32, b: u32, n: u32, modulus: u64) -> u32 {
    let mut acc: u64 = 0;
    let mut bb = b;
    let mut shifted = a as u64;
    while bb != 0 {
        if bb & 1 == 1 {
            acc ^= shifted;
        }
        shifted <<= 1;
        bb >>= 1;
    }
    let mut i = 2 * n;
    while i > n {
        i -= 1;
        if (acc >> i) & 1 == 1 {
            acc ^= modulus << (i - n);
        }
    }
    acc as u32
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v % p == 0 {
            out.push(p);
            while v % p == 0 {
                v /= p;
            }
        }
        p += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

impl FieldCtx {
    /// Build a context. Without an explicit modulus, the lexicographically
    /// smallest irreducible polynomial of degree `n` is used.
    pub fn new(n: u32, modulus: Option<u64>) -> Result<Self> {
        if !(1..=MAX_FIELD_DEGREE).contains(&n) {
            return Err(invalid!("field degree {n} outside 1..={MAX_FIELD_DEGREE}"));
        }
        let modulus = match modulus {
            None => smallest_irreducible(n),
            Some(m) => {
                if poly_degree(m) != Some(n) {
                    return Err(invalid!(
                        "modulus {} does not have degree {n}",
                        format_modulus_hex(m)
                    ));
                }
                if !is_irreducible(m) {
                    return Err(invalid!("modulus {} is reducible", format_modulus_hex(m)));
                }
                m
            }
        };
        let mut ctx = FieldCtx {
            n,
            modulus,
            tables: None,
            dual: Arc::new(TraceDual {
                trace_mask: 0,
                form_of_basis: Vec::new(),
                element_of_form: BitMatrix::identity(0),
            }),
        };
        if n <= TABLE_MAX_DEGREE {
            ctx.tables = Some(Arc::new(ctx.build_tables()));
        }
        ctx.dual = Arc::new(ctx.build_dual());
        Ok(ctx)
    }

    pub fn with_default_modulus(n: u32) -> Result<Self> {
        Self::new(n, None)
    }

    fn build_tables(&self) -> Tables {
        let order = (1u64 << self.n) - 1;
        let factors = prime_factors(order);
        let g = (1..=(order as u32))
            .find(|&g| {
                factors
                    .iter()
                    .all(|&p| self.pow_slow(g, order / p) != 1)
            })
            .expect("multiplicative group is cyclic");
        let len = order as usize;
        let mut exp = vec![0u32; 2 * len.max(1)];
        let mut log = vec![0u32; 1usize << self.n];
        let mut v = 1u32;
        for i in 0..len {
            exp[i] = v;
            log[v as usize] = i as u32;
            v = clmul_reduce(v, g, self.n, self.modulus);
        }
        for i in len..2 * len {
            exp[i] = exp[i - len];
        }
        Tables { exp, log }
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = clmul_reduce(acc, base, self.n, self.modulus);
            }
            base = clmul_reduce(base, base, self.n, self.modulus);
            e >>= 1;
        }
        acc
    }

    fn build_dual(&self) -> TraceDual {
        let n = self.n;
        let trace_of = |a: u32| -> u32 {
            let mut s = 0u32;
            let mut t = a;
            for _ in 0..n {
                s ^= t;
                t = clmul_reduce(t, t, n, self.modulus);
            }
            debug_assert!(s <= 1);
            s
        };
        let trace_mask = (0..n).fold(0u32, |acc, j| acc | (trace_of(1 << j) << j));
        let form_of_basis: Vec<u32> = (0..n)
            .map(|j| {
                (0..n).fold(0u32, |acc, i| {
                    let prod = clmul_reduce(1 << j, 1 << i, n, self.modulus);
                    acc | (((prod & trace_mask).count_ones() & 1) << i)
                })
            })
            .collect();
        let forward = BitMatrix::from_columns(&form_of_basis, n);
        let element_of_form = forward
            .inverse()
            .expect("the trace form is non-degenerate");
        TraceDual { trace_mask, form_of_basis, element_of_form }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of field elements, `2^n`.
    pub fn size(&self) -> u32 {
        1 << self.n
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.size()).map(FieldElement)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.size()
    }

    /// A generator of the multiplicative group, when tables are available.
    pub fn primitive_element(&self) -> Option<FieldElement> {
        self.tables.as_ref().map(|t| FieldElement(t.exp[1 % t.exp.len()]))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.0, b.0))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => clmul_reduce(a, b, self.n, self.modulus),
        }
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// `a^(2^i)`.
    pub fn frobenius(&self, a: FieldElement, i: u32) -> FieldElement {
        let mut v = a;
        for _ in 0..(i % self.n) {
            v = self.square(v);
        }
        v
    }

    /// `a^e` by square-and-multiply, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        if let Some(t) = &self.tables {
            let order = (1u64 << self.n) - 1;
            let idx = (t.log[a.0 as usize] as u64 * (e % order)) % order;
            return FieldElement(t.exp[idx as usize]);
        }
        FieldElement(self.pow_slow(a.0, e))
    }

    /// Multiplicative inverse with the convention `inv(0) = 0`.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        if a.is_zero() {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let order = (1u32 << self.n) - 1;
                let l = t.log[a.0 as usize];
                FieldElement(t.exp[((order - l) % order) as usize])
            }
            None => FieldElement(self.pow_slow(a.0, (1u64 << self.n) - 2)),
        }
    }

    /// Absolute trace `a + a^2 + ... + a^(2^(n-1))`, as 0 or 1.
    #[inline]
    pub fn trace(&self, a: FieldElement) -> u32 {
        (a.0 & self.dual.trace_mask).count_ones() & 1
    }

    /// Coordinate vector `w` with `tr(a x) = w . x` for every `x`.
    pub fn trace_form(&self, a: FieldElement) -> u32 {
        (0..self.n)
            .filter(|&j| (a.0 >> j) & 1 == 1)
            .fold(0, |acc, j| acc ^ self.dual.form_of_basis[j as usize])
    }

    /// The unique `a` with `tr(a x) = w . x` for every `x`.
    pub fn element_of_form(&self, w: u32) -> FieldElement {
        FieldElement(self.dual.element_of_form.apply(w))
    }

    /// Evaluate the polynomial with F_2 coefficients `p` (bitmask) at `a`.
    pub fn eval_f2_poly(&self, p: u64, a: FieldElement) -> FieldElement {
        let Some(d) = poly_degree(p) else { return FieldElement::ZERO };
        let mut acc = FieldElement::ZERO;
        for i in (0..=d).rev() {
            acc = self.mul(acc, a);
            if (p >> i) & 1 == 1 {
                acc += FieldElement::ONE;
            }
        }
        acc
    }
}

/// A field homomorphism GF(2^n) -> GF(2^(n u)) fixed by the image of the
/// class of `x`, which must be a root of the source modulus.
#[derive(Debug, Clone)]
pub struct Embedding {
    src: FieldCtx,
    dst: FieldCtx,
    image_of_generator: FieldElement,
    basis_images: Vec<u32>,
}

impl Embedding {
    /// Embed using the smallest root of the source modulus found by
    /// exhaustive search in the destination field.
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Self> {
        if dst.n() % src.n() != 0 {
            return Err(invalid!(
                "GF(2^{}) is not a subfield of GF(2^{})",
                src.n(),
                dst.n()
            ));
        }
        let root = dst
            .elements()
            .find(|&g| dst.eval_f2_poly(src.modulus(), g).is_zero())
            .ok_or_else(|| Error::Consistency("source modulus has no root in destination".into()))?;
        Self::with_root(src, dst, root)
    }

    pub fn with_root(src: &FieldCtx, dst: &FieldCtx, root: FieldElement) -> Result<Self> {
        if !dst.contains(root) || !dst.eval_f2_poly(src.modulus(), root).is_zero() {
            return Err(invalid!("{root} is not a root of the source modulus"));
        }
        let mut basis_images = Vec::with_capacity(src.n() as usize);
        let mut p = FieldElement::ONE;
        for _ in 0..src.n() {
            basis_images.push(p.0);
            p = dst.mul(p, root);
        }
        Ok(Embedding { src: src.clone(), dst: dst.clone(), image_of_generator: root, basis_images })
    }

    pub fn src(&self) -> &FieldCtx {
        &self.src
    }

    pub fn dst(&self) -> &FieldCtx {
        &self.dst
    }

    pub fn image_of_generator(&self) -> FieldElement {
        self.image_of_generator
    }

    pub fn embed(&self, a: FieldElement) -> FieldElement {
        debug_assert!(self.src.contains(a));
        FieldElement(
            self.basis_images
                .iter()
                .enumerate()
                .filter(|(i, _)| (a.0 >> i) & 1 == 1)
                .fold(0, |acc, (_, &b)| acc ^ b),
        )
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Checks on one tuple that F_2-linear independence in GF(2^n) coincides
/// with GF(2^u)-linear independence after embedding into GF(2^(n u)).
///
/// Returns `Ok(true)` when both notions agree. Dependence over GF(2^u) is
/// decided by trying every non-zero coefficient vector.
pub fn verify_lin_indep_transfer(n: u32, u: u32, tuple: &[FieldElement]) -> Result<bool> {
    if u == 0 || n == 0 || gcd(n, u) != 1 {
        return Err(invalid!("gcd({n}, {u}) must be 1"));
    }
    if tuple.len() > n as usize {
        return Err(invalid!("tuple length {} exceeds n = {n}", tuple.len()));
    }
    if n * u > MAX_FIELD_DEGREE {
        return Err(invalid!("extension degree n*u = {} exceeds {MAX_FIELD_DEGREE}", n * u));
    }
    let src = FieldCtx::with_default_modulus(n)?;
    if let Some(bad) = tuple.iter().find(|a| !src.contains(**a)) {
        return Err(invalid!("{bad} is not an element of GF(2^{n})"));
    }
    let dst = FieldCtx::with_default_modulus(n * u)?;
    let emb = Embedding::new(&src, &dst)?;
    let images: Vec<FieldElement> = tuple.iter().map(|&a| emb.embed(a)).collect();

    let f2_independent =
        crate::linalg::is_independent(&tuple.iter().map(|a| a.0).collect::<Vec<_>>());

    // the subfield GF(2^u) inside GF(2^(n u))
    let subfield: Vec<FieldElement> =
        dst.elements().filter(|&y| dst.frobenius(y, u) == y).collect();
    debug_assert_eq!(subfield.len(), 1 << u);

    let t = images.len();
    let q = subfield.len();
    let total = q.pow(t as u32);
    let mut dependent = false;
    for code in 1..total {
        let mut c = code;
        let mut acc = FieldElement::ZERO;
        for img in &images {
            acc += dst.mul(subfield[c % q], *img);
            c /= q;
        }
        if acc.is_zero() {
            dependent = true;
            break;
        }
    }
    Ok(f2_independent == !dependent)
}
