//! (n,m)-functions as truth tables, with conversions to the multivariate ANF
//! and (for m = n) the univariate polynomial over GF(2^n).
//!
//! Output values are packed into `u32` bitmasks: bit `i` of `table[x]` is the
//! `i`-th coordinate function evaluated at `x`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{is_independent, BitMatrix};

/// Table-based functions are limited to this many input bits.
pub const MAX_INPUT_BITS: u32 = 24;
pub const MAX_OUTPUT_BITS: u32 = 32;

/// Algebraic degree; the identically zero function has degree `NegInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInf,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::NegInf => None,
            Degree::Finite(d) => Some(d),
        }
    }

    /// `self - k`, saturating into `NegInf` below zero.
    pub fn minus(self, k: u32) -> Degree {
        match self {
            Degree::Finite(d) if d >= k => Degree::Finite(d - k),
            _ => Degree::NegInf,
        }
    }

    pub fn plus(self, k: u32) -> Degree {
        match self {
            Degree::Finite(d) => Degree::Finite(d + k),
            Degree::NegInf => Degree::NegInf,
        }
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInf, Degree::NegInf) => Ordering::Equal,
            (Degree::NegInf, _) => Ordering::Less,
            (_, Degree::NegInf) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Degree::NegInf => s.serialize_str("-inf"),
            Degree::Finite(d) => s.serialize_u32(*d),
        }
    }
}

/// In-place binary Moebius transform over the first `n` index bits. It is an
/// involution and maps truth tables to ANF coefficient tables and back.
pub fn moebius_in_place(buf: &mut [u32], n: u32) {
    debug_assert_eq!(buf.len(), 1usize << n);
    for i in 0..n {
        let step = 1usize << i;
        let mut base = 0;
        while base < buf.len() {
            for j in base..base + step {
                buf[j + step] ^= buf[j];
            }
            base += 2 * step;
        }
    }
}

/// Degree of a dense ANF coefficient table.
pub fn dense_anf_degree(coeffs: &[u32]) -> Degree {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, _)| i.count_ones())
        .max()
        .map_or(Degree::NegInf, Degree::Finite)
}

/// Degree of the function given by a truth table, consuming the buffer as
/// scratch space.
pub fn table_degree_in_place(buf: &mut [u32], n: u32) -> Degree {
    moebius_in_place(buf, n);
    dense_anf_degree(buf)
}

/// A vectorial Boolean function F_2^n -> F_2^m held as a truth table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorialFunction {
    n: u32,
    m: u32,
    table: Vec<u32>,
}

/// Multivariate ANF: monomial mask -> non-zero coefficient in F_2^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnfForm {
    pub n: u32,
    pub m: u32,
    pub coeffs: BTreeMap<u32, u32>,
}

/// Univariate polynomial `sum c_j x^j`, `0 <= j <= 2^n - 1`, over GF(2^n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateForm {
    pub ctx: FieldCtx,
    pub coeffs: Vec<FieldElement>,
}

pub(crate) fn output_mask(m: u32) -> u32 {
    if m >= 32 {
        u32::MAX
    } else {
        (1u32 << m) - 1
    }
}

impl VectorialFunction {
    pub fn new(n: u32, m: u32, table: Vec<u32>) -> Result<Self> {
        if n > MAX_INPUT_BITS {
            return Err(invalid!("n = {n} exceeds {MAX_INPUT_BITS} input bits"));
        }
        if m == 0 || m > MAX_OUTPUT_BITS {
            return Err(invalid!("m = {m} outside 1..={MAX_OUTPUT_BITS}"));
        }
        if table.len() != 1usize << n {
            return Err(invalid!("table has {} entries, expected 2^{n}", table.len()));
        }
        let mask = output_mask(m);
        if let Some(v) = table.iter().find(|&&v| v & !mask != 0) {
            return Err(invalid!("output value {v:#x} does not fit in {m} bits"));
        }
        Ok(VectorialFunction { n, m, table })
    }

    pub(crate) fn from_raw(n: u32, m: u32, table: Vec<u32>) -> Self {
        debug_assert_eq!(table.len(), 1usize << n);
        VectorialFunction { n, m, table }
    }

    pub fn from_fn(n: u32, m: u32, f: impl Fn(u32) -> u32) -> Result<Self> {
        let mask = output_mask(m);
        Self::new(n, m, (0..1u32 << n).map(|x| f(x) & mask).collect())
    }

    /// The power function `x -> x^d` over the given field.
    pub fn power(ctx: &FieldCtx, d: u64) -> Self {
        let table = ctx.elements().map(|x| ctx.pow(x, d).value()).collect();
        VectorialFunction { n: ctx.n(), m: ctx.n(), table }
    }

    /// The multiplicative inverse `x -> x^(2^n - 2)` with `0 -> 0`.
    pub fn inverse(ctx: &FieldCtx) -> Self {
        let table = ctx.elements().map(|x| ctx.inv(x).value()).collect();
        VectorialFunction { n: ctx.n(), m: ctx.n(), table }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&v| v == self.table[0])
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&v| v == 0)
    }

    /// Dense ANF coefficient table, indexed by monomial mask.
    pub fn anf_dense(&self) -> Vec<u32> {
        let mut buf = self.table.clone();
        moebius_in_place(&mut buf, self.n);
        buf
    }

    pub fn from_anf_dense(n: u32, m: u32, coeffs: &[u32]) -> Result<Self> {
        let mut buf = coeffs.to_vec();
        if buf.len() != 1usize << n {
            return Err(invalid!("ANF table has {} entries, expected 2^{n}", buf.len()));
        }
        moebius_in_place(&mut buf, n);
        Self::new(n, m, buf)
    }

    pub fn to_anf(&self) -> AnfForm {
        let coeffs = self
            .anf_dense()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, c)| (i as u32, c))
            .collect();
        AnfForm { n: self.n, m: self.m, coeffs }
    }

    /// Algebraic degree: the largest monomial weight in the ANF.
    pub fn degree(&self) -> Degree {
        let mut buf = self.table.clone();
        table_degree_in_place(&mut buf, self.n)
    }

    pub fn coordinate(&self, i: u32) -> VectorialFunction {
        VectorialFunction { n: self.n, m: 1, table: self.table.iter().map(|v| (v >> i) & 1).collect() }
    }

    /// `D_a F(x) = F(x + a) + F(x)`.
    pub fn derivative(&self, a: u32) -> Result<VectorialFunction> {
        if a == 0 {
            return Err(invalid!("derivative direction must be non-zero"));
        }
        if a >> self.n != 0 {
            return Err(invalid!("direction {a:#x} is not a vector of F_2^{}", self.n));
        }
        Ok(self.derivative_unchecked(a))
    }

    fn derivative_unchecked(&self, a: u32) -> VectorialFunction {
        let table = (0..self.table.len())
            .map(|x| self.table[x] ^ self.table[x ^ a as usize])
            .collect();
        VectorialFunction { n: self.n, m: self.m, table }
    }

    /// Iterated derivative along linearly independent directions.
    pub fn higher_derivative(&self, dirs: &[u32]) -> Result<VectorialFunction> {
        if dirs.iter().any(|&a| a == 0 || a >> self.n != 0) || !is_independent(dirs) {
            return Err(invalid!("derivative directions must be linearly independent vectors"));
        }
        let mut g = self.clone();
        for &a in dirs {
            g = g.derivative_unchecked(a);
        }
        Ok(g)
    }

    /// Non-zero `a` with `deg(D_a F) < deg(F) - 1`. Together with zero they
    /// form a linear space.
    pub fn fast_points(&self) -> Result<Vec<u32>> {
        let r = match self.degree() {
            Degree::Finite(r) if r >= 1 => r,
            _ => return Err(invalid!("fast points are defined for non-constant functions only")),
        };
        let bound = Degree::Finite(r - 1);
        Ok((1..1u32 << self.n)
            .filter(|&a| self.derivative_unchecked(a).degree() < bound)
            .collect())
    }

    /// The ANF restricted to monomials of weight exactly `r`.
    pub fn homogeneous_part(&self, r: u32) -> VectorialFunction {
        let mut coeffs = self.anf_dense();
        for (i, c) in coeffs.iter_mut().enumerate() {
            if (i as u32).count_ones() != r {
                *c = 0;
            }
        }
        moebius_in_place(&mut coeffs, self.n);
        VectorialFunction { n: self.n, m: self.m, table: coeffs }
    }

    /// True when every monomial of the ANF has the same weight. The zero
    /// function counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        let mut weights = self
            .anf_dense()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0)
            .map(|(i, _)| i.count_ones());
        match weights.next() {
            None => true,
            Some(w) => weights.all(|v| v == w),
        }
    }

    /// Monomial-wise complement `x^I -> x^([n] \ I)` of a homogeneous function.
    pub fn complement(&self) -> Result<VectorialFunction> {
        if !self.is_homogeneous() {
            return Err(invalid!("complement is defined for homogeneous functions only"));
        }
        let full = (1usize << self.n) - 1;
        let anf = self.anf_dense();
        let mut out = vec![0u32; anf.len()];
        for (i, c) in anf.into_iter().enumerate() {
            out[full ^ i] = c;
        }
        moebius_in_place(&mut out, self.n);
        Ok(VectorialFunction { n: self.n, m: self.m, table: out })
    }

    /// `x -> N F(M x + a) + b`.
    pub fn affine_transform(
        &self,
        inner: &BitMatrix,
        inner_shift: u32,
        outer: &BitMatrix,
        outer_shift: u32,
    ) -> Result<VectorialFunction> {
        if inner.dim() != self.n || outer.dim() != self.m {
            return Err(invalid!("transform dimensions do not match an ({}, {})-function", self.n, self.m));
        }
        if !inner.is_invertible() || !outer.is_invertible() {
            return Err(invalid!("affine transform requires invertible matrices"));
        }
        if inner_shift >> self.n != 0 || outer_shift & !output_mask(self.m) != 0 {
            return Err(invalid!("translation vector out of range"));
        }
        Ok(self.compose_linear_unchecked(inner, inner_shift, outer, outer_shift))
    }

    pub(crate) fn compose_linear_unchecked(
        &self,
        inner: &BitMatrix,
        inner_shift: u32,
        outer: &BitMatrix,
        outer_shift: u32,
    ) -> VectorialFunction {
        let table = (0..1u32 << self.n)
            .map(|x| outer.apply(self.eval(inner.apply(x) ^ inner_shift)) ^ outer_shift)
            .collect();
        VectorialFunction { n: self.n, m: self.m, table }
    }

    /// Pointwise sum of two functions with equal shape.
    pub fn add(&self, other: &VectorialFunction) -> Result<VectorialFunction> {
        if self.n != other.n || self.m != other.m {
            return Err(invalid!("cannot add functions of different shapes"));
        }
        let table = self.table.iter().zip(&other.table).map(|(a, b)| a ^ b).collect();
        Ok(VectorialFunction { n: self.n, m: self.m, table })
    }

    /// Unique interpolating polynomial over `ctx` (requires `n = m = ctx.n`).
    pub fn to_univariate(&self, ctx: &FieldCtx) -> Result<UnivariateForm> {
        if self.n != self.m || self.n != ctx.n() {
            return Err(invalid!(
                "univariate form needs n = m = {}, got ({}, {})",
                ctx.n(),
                self.n,
                self.m
            ));
        }
        let q = ctx.size() as usize;
        let mut coeffs = vec![FieldElement::ZERO; q];
        let f = |x: FieldElement| FieldElement(self.eval(x.value()));
        coeffs[0] = f(FieldElement::ZERO);
        if q == 2 {
            // GF(2): F(x) = F(0) + (F(0) + F(1)) x
            coeffs[1] = f(FieldElement::ZERO) + f(FieldElement::ONE);
            return Ok(UnivariateForm { ctx: ctx.clone(), coeffs });
        }
        // c_j = sum_{x != 0} F(x) x^(-j) for 1 <= j <= q - 2, and
        // c_{q-1} = F(0) + sum_{x != 0} F(x)
        let mut top = f(FieldElement::ZERO);
        for x in 1..q as u32 {
            top += f(FieldElement(x));
        }
        coeffs[q - 1] = top;
        let nonzero: Vec<(FieldElement, FieldElement)> = (1..q as u32)
            .map(|x| (FieldElement(x), f(FieldElement(x))))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let inverses: Vec<FieldElement> =
            nonzero.iter().map(|(x, _)| ctx.inv(*x)).collect();
        let mut powers: Vec<FieldElement> = vec![FieldElement::ONE; nonzero.len()];
        for c in coeffs.iter_mut().take(q - 1).skip(1) {
            let mut acc = FieldElement::ZERO;
            for ((_, v), (p, xi)) in nonzero.iter().zip(powers.iter_mut().zip(&inverses)) {
                *p = ctx.mul(*p, *xi);
                acc += ctx.mul(*v, *p);
            }
            *c = acc;
        }
        Ok(UnivariateForm { ctx: ctx.clone(), coeffs })
    }
}

impl AnfForm {
    pub fn degree(&self) -> Degree {
        self.coeffs
            .keys()
            .map(|k| k.count_ones())
            .max()
            .map_or(Degree::NegInf, Degree::Finite)
    }

    pub fn to_table(&self) -> Result<VectorialFunction> {
        let mut dense = vec![0u32; 1usize << self.n];
        for (&mask, &c) in &self.coeffs {
            if mask >> self.n != 0 {
                return Err(invalid!("monomial {mask:#x} uses variables beyond x_{}", self.n));
            }
            if c == 0 {
                return Err(invalid!("ANF coefficient for {mask:#x} is zero"));
            }
            dense[mask as usize] = c;
        }
        VectorialFunction::from_anf_dense(self.n, self.m, &dense)
    }
}

impl UnivariateForm {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FieldElement>) -> Result<Self> {
        if coeffs.len() != ctx.size() as usize {
            return Err(invalid!("expected {} coefficients, got {}", ctx.size(), coeffs.len()));
        }
        if coeffs.iter().any(|c| !ctx.contains(*c)) {
            return Err(invalid!("coefficient outside GF(2^{})", ctx.n()));
        }
        Ok(UnivariateForm { ctx: ctx.clone(), coeffs })
    }

    /// The monomial `c x^j`.
    pub fn monomial(ctx: &FieldCtx, j: usize, c: FieldElement) -> Result<Self> {
        let mut coeffs = vec![FieldElement::ZERO; ctx.size() as usize];
        *coeffs
            .get_mut(j)
            .ok_or_else(|| invalid!("exponent {j} exceeds 2^{} - 1", ctx.n()))? = c;
        Self::new(ctx, coeffs)
    }

    /// `max{ w_H(j) : c_j != 0 }`.
    pub fn degree(&self) -> Degree {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| j.count_ones())
            .max()
            .map_or(Degree::NegInf, Degree::Finite)
    }

    pub fn to_table(&self) -> VectorialFunction {
        let ctx = &self.ctx;
        let terms: Vec<(u64, FieldElement)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u64, *c))
            .collect();
        let table = ctx
            .elements()
            .map(|x| {
                terms
                    .iter()
                    .fold(FieldElement::ZERO, |acc, &(j, c)| acc + ctx.mul(c, ctx.pow(x, j)))
                    .value()
            })
            .collect();
        VectorialFunction { n: ctx.n(), m: ctx.n(), table }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct evaluation of an ANF: sum of coefficients of monomials whose
    /// variables are all set in x.
    fn eval_anf(anf: &AnfForm, x: u32) -> u32 {
        anf.coeffs
            .iter()
            .filter(|(&mask, _)| mask & x == mask)
            .fold(0, |acc, (_, &c)| acc ^ c)
    }

    fn random_table(n: u32, m: u32, seed: &[u32]) -> VectorialFunction {
        let mask = output_mask(m);
        let table = (0..1usize << n)
            .map(|i| {
                let mut z = (seed[i % seed.len()] as u64) ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                ((z ^ (z >> 31)) as u32) & mask
            })
            .collect();
        VectorialFunction::new(n, m, table).unwrap()
    }

    #[test]
    fn zero_and_and_gate() {
        let zero = VectorialFunction::new(2, 1, vec![0; 4]).unwrap();
        assert!(zero.to_anf().coeffs.is_empty());
        assert_eq!(zero.degree(), Degree::NegInf);
        let and = VectorialFunction::new(2, 1, vec![0, 0, 0, 1]).unwrap();
        let anf = and.to_anf();
        assert_eq!(anf.coeffs.into_iter().collect::<Vec<_>>(), vec![(0b11, 1)]);
        let back = AnfForm { n: 2, m: 1, coeffs: [(0b11, 1)].into_iter().collect() };
        assert_eq!(back.to_table().unwrap(), and);
        let empty = AnfForm { n: 2, m: 1, coeffs: BTreeMap::new() };
        assert_eq!(empty.to_table().unwrap(), zero);
    }

    #[test]
    fn degree_ordering() {
        assert!(Degree::NegInf < Degree::Finite(0));
        assert!(Degree::Finite(0) < Degree::Finite(3));
        assert_eq!(Degree::Finite(2).minus(3), Degree::NegInf);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(VectorialFunction::new(2, 1, vec![0, 1, 2, 0]).is_err());
        assert!(VectorialFunction::new(2, 1, vec![0, 1]).is_err());
        assert!(VectorialFunction::new(2, 0, vec![0; 4]).is_err());
    }

    #[test]
    fn univariate_identity_and_inverse() {
        let ctx = FieldCtx::new(5, None).unwrap();
        let id = UnivariateForm::monomial(&ctx, 1, FieldElement::ONE).unwrap().to_table();
        assert!(id.table().iter().enumerate().all(|(i, &v)| v == i as u32));
        let inv_u = UnivariateForm::monomial(&ctx, 30, FieldElement::ONE).unwrap();
        let inv = VectorialFunction::inverse(&ctx);
        assert_eq!(inv_u.to_table(), inv);
        let back = inv.to_univariate(&ctx).unwrap();
        assert_eq!(back, inv_u);
        assert_eq!(inv.degree(), Degree::Finite(4));
        let zero = VectorialFunction::new(5, 5, vec![0; 32]).unwrap();
        assert!(zero.to_univariate(&ctx).unwrap().coeffs.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn univariate_gf2() {
        let ctx = FieldCtx::new(1, None).unwrap();
        for t in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let f = VectorialFunction::new(1, 1, t.to_vec()).unwrap();
            assert_eq!(f.to_univariate(&ctx).unwrap().to_table(), f);
        }
    }

    #[test]
    fn power_degree_is_exponent_weight() {
        for n in 2..=7 {
            let ctx = FieldCtx::new(n, None).unwrap();
            for d in 1..(1u64 << n) {
                assert_eq!(
                    VectorialFunction::power(&ctx, d).degree(),
                    Degree::Finite(d.count_ones()),
                    "n = {n}, d = {d}"
                );
            }
        }
    }

    #[test]
    fn ones_run_power_has_degree_j() {
        // x^(1 + 2^u + ... + 2^((j-1)u)) with gcd(u, n) = 1
        let ctx = FieldCtx::new(7, None).unwrap();
        for u in 1..7u32 {
            for j in 1..7u32 {
                let d: u64 = (0..j).map(|i| 1u64 << ((i * u) % 7)).sum();
                assert_eq!(VectorialFunction::power(&ctx, d).degree(), Degree::Finite(j));
            }
        }
    }

    #[test]
    fn derivatives() {
        // linear f: D_a f is the constant f(a)
        let lin = VectorialFunction::from_fn(4, 3, |x| (x & 0b111) ^ ((x >> 3) * 0b101)).unwrap();
        for a in 1..16 {
            let d = lin.derivative(a).unwrap();
            assert!(d.table().iter().all(|&v| v == lin.eval(a)));
        }
        let c = VectorialFunction::new(3, 2, vec![3; 8]).unwrap();
        assert!(c.derivative(5).unwrap().is_zero());
        assert!(c.derivative(0).is_err());
        assert!(c.higher_derivative(&[1, 2, 3]).is_err());
        // x1 x2 x3 along e1, e2, e3 gives the constant 1
        let cube = VectorialFunction::from_fn(4, 1, |x| ((x & 0b111) == 0b111) as u32).unwrap();
        let d = cube.higher_derivative(&[1, 2, 4]).unwrap();
        assert!(d.table().iter().all(|&v| v == 1));
        assert_eq!(cube.higher_derivative(&[1]).unwrap(), cube.derivative(1).unwrap());
    }

    #[test]
    fn fast_points_examples() {
        let top = VectorialFunction::from_fn(3, 1, |x| (x == 7) as u32).unwrap();
        assert!(top.fast_points().unwrap().is_empty());
        // linear non-constant: fast points are the non-zero kernel vectors
        let lin = VectorialFunction::from_fn(4, 2, |x| ((x ^ (x >> 1)) & 1) | (((x >> 2) & 1) << 1)).unwrap();
        let kernel: Vec<u32> = (1..16).filter(|&a| lin.eval(a) == 0).collect();
        assert_eq!(lin.fast_points().unwrap(), kernel);
        assert!(VectorialFunction::new(2, 1, vec![1; 4]).unwrap().fast_points().is_err());
    }

    #[test]
    fn complement_examples() {
        let f = VectorialFunction::from_fn(3, 1, |x| ((x & 3) == 3) as u32).unwrap();
        let c = f.complement().unwrap();
        let x3 = VectorialFunction::from_fn(3, 1, |x| (x >> 2) & 1).unwrap();
        assert_eq!(c, x3);
        assert_eq!(c.complement().unwrap(), f);
        let nonhom = VectorialFunction::from_fn(3, 1, |x| ((x & 3) == 3) as u32 ^ (x & 1)).unwrap();
        assert!(nonhom.complement().is_err());
        assert_eq!(nonhom.homogeneous_part(2), f);
        assert!(nonhom.homogeneous_part(3).is_zero());
    }

    #[test]
    fn frobenius_power_is_affine_image() {
        let ctx = FieldCtx::new(6, None).unwrap();
        let sq = BitMatrix::from_columns(
            &(0..6).map(|i| ctx.square(FieldElement(1 << i)).value()).collect::<Vec<_>>(),
            6,
        );
        for d in [3u64, 7, 11, 62] {
            let f = VectorialFunction::power(&ctx, d);
            let g = VectorialFunction::power(&ctx, (2 * d) % 63);
            // (x^d)^2 = x^(2d)
            let composed = f.affine_transform(&BitMatrix::identity(6), 0, &sq, 0).unwrap();
            assert_eq!(composed, g);
            assert_eq!(f.degree(), g.degree());
        }
    }

    proptest! {
        #[test]
        fn anf_round_trip(seed in proptest::collection::vec(any::<u32>(), 1..8), n in 0u32..7, m in 1u32..5) {
            let f = random_table(n, m, &seed);
            let anf = f.to_anf();
            for x in 0..1u32 << n {
                prop_assert_eq!(eval_anf(&anf, x), f.eval(x));
            }
            prop_assert_eq!(anf.to_table().unwrap(), f.clone());
            prop_assert_eq!(anf.degree(), f.degree());
        }

        #[test]
        fn univariate_round_trip(seed in proptest::collection::vec(any::<u32>(), 1..8), n in 1u32..7) {
            let ctx = FieldCtx::new(n, None).unwrap();
            let f = random_table(n, n, &seed);
            let u = f.to_univariate(&ctx).unwrap();
            prop_assert_eq!(u.to_table(), f.clone());
            prop_assert_eq!(u.degree(), f.degree());
        }

        #[test]
        fn derivative_lowers_degree(seed in proptest::collection::vec(any::<u32>(), 1..8), n in 1u32..6) {
            let f = random_table(n, 3, &seed);
            for a in 1..1u32 << n {
                let d = f.derivative(a).unwrap().degree();
                match f.degree() {
                    Degree::NegInf | Degree::Finite(0) => prop_assert_eq!(d, Degree::NegInf),
                    Degree::Finite(r) => prop_assert!(d <= Degree::Finite(r - 1)),
                }
            }
        }

        #[test]
        fn fast_points_form_a_space(seed in proptest::collection::vec(any::<u32>(), 1..8), n in 1u32..6, r in 1u32..5) {
            let f = random_table(n, 2, &seed).homogeneous_part(r.min(n));
            prop_assume!(!f.is_constant());
            let fp = f.fast_points().unwrap();
            let set: std::collections::HashSet<u32> = fp.iter().copied().collect();
            for &a in &fp {
                for &b in &fp {
                    prop_assert!(a == b || set.contains(&(a ^ b)));
                }
            }
        }

        #[test]
        fn higher_derivative_order_invariant(seed in proptest::collection::vec(any::<u32>(), 1..8), a in 1u32..32, b in 1u32..32, c in 1u32..32) {
            let f = random_table(5, 2, &seed);
            let dirs = [a, b, c];
            prop_assume!(is_independent(&dirs));
            let d1 = f.higher_derivative(&dirs).unwrap();
            prop_assert_eq!(&d1, &f.higher_derivative(&[c, a, b]).unwrap());
            prop_assert_eq!(&d1, &f.higher_derivative(&[b, c, a]).unwrap());
        }

        #[test]
        fn complement_degree_and_involution(seed in proptest::collection::vec(any::<u32>(), 1..8), n in 1u32..7, r in 0u32..7) {
            let r = r.min(n);
            let f = random_table(n, 3, &seed).homogeneous_part(r);
            let c = f.complement().unwrap();
            prop_assert_eq!(c.complement().unwrap(), f.clone());
            if !f.is_zero() {
                prop_assert_eq!(c.degree(), Degree::Finite(n - r));
            }
        }

        #[test]
        fn affine_transform_keeps_degree(seed in proptest::collection::vec(any::<u32>(), 1..8), n in 1u32..6, m in 1u32..5, mseed in any::<u64>()) {
            let f = random_table(n, m, &seed);
            let inner = random_invertible(n, mseed);
            let outer = random_invertible(m, mseed.rotate_left(17));
            let g = f.affine_transform(&inner, (mseed as u32) & ((1 << n) - 1), &outer, ((mseed >> 32) as u32) & output_mask(m)).unwrap();
            if f.degree() >= Degree::Finite(1) {
                prop_assert_eq!(g.degree(), f.degree());
            }
        }
    }

    fn random_invertible(n: u32, mut seed: u64) -> BitMatrix {
        loop {
            let rows: Vec<u32> = (0..n)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((seed >> 33) as u32) & ((1 << n) - 1)
                })
                .collect();
            let m = BitMatrix::from_rows(rows);
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn identity_transform() {
        let f = random_table(4, 3, &[7, 9, 13]);
        let g = f.affine_transform(&BitMatrix::identity(4), 0, &BitMatrix::identity(3), 0).unwrap();
        assert_eq!(f, g);
        let singular = BitMatrix::from_rows(vec![1, 1, 4, 8]);
        assert!(f.affine_transform(&singular, 0, &BitMatrix::identity(3), 0).is_err());
    }
}
