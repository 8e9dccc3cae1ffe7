//! Linear and affine subspaces of F_2^n, their enumeration in a canonical
//! order, trace-equation descriptions, and restriction of functions.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::boolfn::{table_degree_in_place, Degree, VectorialFunction};
use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::{annihilator, dot, rank, reduce, rref};

/// Largest ambient dimension handled by subspace routines.
pub const MAX_AMBIENT: u32 = 24;

/// A linear subspace of F_2^n held by its canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearSubspace {
    n: u32,
    basis: Vec<u32>,
}

/// A coset `offset + E` whose offset is the smallest element of the coset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSubspace {
    linear: LinearSubspace,
    offset: u32,
}

/// `tr(a_i x) + eps_i = 0`, `i = 1..k`, with F_2-independent `a_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceEquations {
    ctx: FieldCtx,
    pairs: Vec<(FieldElement, u8)>,
}

/// Which subspaces a scan or enumeration covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Linear,
    Affine,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Linear => "linear",
            Scope::Affine => "affine",
        })
    }
}

impl std::str::FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Scope::Linear),
            "affine" => Ok(Scope::Affine),
            _ => Err(invalid!("unknown scope {s:?} (expected linear or affine)")),
        }
    }
}

fn check_ambient(n: u32) -> Result<()> {
    if n > MAX_AMBIENT {
        return Err(invalid!("ambient dimension {n} exceeds {MAX_AMBIENT}"));
    }
    Ok(())
}

fn full_mask(n: u32) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
fn pivot(row: u32) -> u32 {
    31 - row.leading_zeros()
}

impl LinearSubspace {
    /// Span of arbitrary generators.
    pub fn span(n: u32, generators: &[u32]) -> Result<Self> {
        check_ambient(n)?;
        if let Some(g) = generators.iter().find(|&&g| g & !full_mask(n) != 0) {
            return Err(invalid!("generator {g:#x} is not a vector of F_2^{n}"));
        }
        Ok(LinearSubspace { n, basis: rref(generators) })
    }

    /// Common kernel `{x : w . x = 0 for every normal w}`.
    pub fn from_normals(n: u32, normals: &[u32]) -> Result<Self> {
        check_ambient(n)?;
        if let Some(w) = normals.iter().find(|&&w| w & !full_mask(n) != 0) {
            return Err(invalid!("normal {w:#x} is not a vector of F_2^{n}"));
        }
        Ok(LinearSubspace { n, basis: annihilator(normals, n) })
    }

    pub fn whole(n: u32) -> Self {
        LinearSubspace { n, basis: (0..n).map(|i| 1 << i).collect() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn codim(&self) -> u32 {
        self.n - self.dim()
    }

    pub fn contains(&self, x: u32) -> bool {
        x & !full_mask(self.n) == 0 && reduce(&self.basis, x) == 0
    }

    /// RREF basis of the orthogonal complement; its rows are the normals of
    /// `codim` independent defining equations.
    pub fn normals(&self) -> Vec<u32> {
        annihilator(&self.basis, self.n)
    }

    pub fn pivot_mask(&self) -> u32 {
        self.basis.iter().fold(0, |acc, &b| acc | (1 << pivot(b)))
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u32 << self.dim()).map(move |t| combine(&self.basis, t))
    }

    pub fn coset(&self, offset: u32) -> Result<AffineSubspace> {
        AffineSubspace::new(self.clone(), offset)
    }
}

#[inline]
fn combine(basis: &[u32], t: u32) -> u32 {
    basis
        .iter()
        .enumerate()
        .filter(|(i, _)| (t >> i) & 1 == 1)
        .fold(0, |acc, (_, &b)| acc ^ b)
}

impl AffineSubspace {
    pub fn new(linear: LinearSubspace, offset: u32) -> Result<Self> {
        if offset & !full_mask(linear.n) != 0 {
            return Err(invalid!("offset {offset:#x} is not a vector of F_2^{}", linear.n));
        }
        let offset = reduce(&linear.basis, offset);
        Ok(AffineSubspace { linear, offset })
    }

    pub fn linear_only(linear: LinearSubspace) -> Self {
        AffineSubspace { linear, offset: 0 }
    }

    pub fn whole(n: u32) -> Self {
        AffineSubspace::linear_only(LinearSubspace::whole(n))
    }

    pub fn linear(&self) -> &LinearSubspace {
        &self.linear
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn n(&self) -> u32 {
        self.linear.n
    }

    pub fn dim(&self) -> u32 {
        self.linear.dim()
    }

    pub fn codim(&self) -> u32 {
        self.linear.codim()
    }

    pub fn is_linear(&self) -> bool {
        self.offset == 0
    }

    pub fn contains(&self, x: u32) -> bool {
        self.linear.contains(x ^ self.offset)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        self.linear.elements().map(move |e| e ^ self.offset)
    }

    /// Parse `codim k; rows r1,r2,...; offset o` (hex values) in F_2^n.
    pub fn parse(s: &str, n: u32) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed subspace {s:?}"));
        let parts: Vec<&str> = s.split(';').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let codim: u32 = parts[0]
            .strip_prefix("codim")
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let rows_txt = parts[1].strip_prefix("rows").ok_or_else(bad)?.trim();
        let rows = if rows_txt.is_empty() || rows_txt == "-" {
            Vec::new()
        } else {
            rows_txt.split(',').map(|r| parse_hex(r.trim())).collect::<Result<Vec<_>>>()?
        };
        let offset = parse_hex(parts[2].strip_prefix("offset").ok_or_else(bad)?.trim())?;
        if rank(&rows) != rows.len() {
            return Err(Error::Parse(format!("rows of {s:?} are dependent")));
        }
        let linear = LinearSubspace::span(n, &rows).map_err(|e| Error::Parse(e.to_string()))?;
        if linear.codim() != codim {
            return Err(Error::Parse(format!(
                "{s:?}: {} rows give codimension {} in F_2^{n}, not {codim}",
                rows.len(),
                linear.codim()
            )));
        }
        AffineSubspace::new(linear, offset).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub(crate) fn parse_hex(s: &str) -> Result<u32> {
    let t = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(t, 16).map_err(|_| Error::Parse(format!("bad hex value {s:?}")))
}

impl fmt::Display for AffineSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.linear.basis.iter().map(|r| format!("{r:#x}")).collect();
        write!(f, "codim {}; rows {}; offset {:#x}", self.codim(), rows.join(","), self.offset)
    }
}

impl Serialize for AffineSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Gaussian binomial coefficient `[n k]_q`; zero when `k > n`.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> Result<BigUint> {
    if q < 2 {
        return Err(invalid!("q must be at least 2, got {q}"));
    }
    if k > n {
        return Ok(BigUint::zero());
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= q.pow(n - i) - 1u32;
        den *= q.pow(i + 1) - 1u32;
    }
    Ok(num / den)
}

/// Number of codimension-`k` subspaces in the given scope, when it fits a `u64`.
pub fn subspace_count(n: u32, k: u32, scope: Scope) -> Result<u64> {
    let lin = gaussian_binomial(n, k, 2)?;
    let total = match scope {
        Scope::Linear => lin,
        Scope::Affine => lin << k as usize,
    };
    total
        .to_u64()
        .ok_or_else(|| Error::CapExceeded(format!("codim-{k} {scope} subspaces of F_2^{n}: {total} is not enumerable")))
}

/// Rough work estimate for a scan: subspaces times restriction-transform size.
pub fn scan_cost_estimate(n: u32, k: u32, scope: Scope) -> Result<f64> {
    let count = subspace_count(n, k, scope)? as f64;
    let d = n.saturating_sub(k);
    Ok(count * (1u64 << d) as f64 * d.max(1) as f64)
}

/// Default enumeration cap: `n <= 10` for any codimension, `n <= 16` for
/// codimension at most 3.
pub fn within_default_caps(n: u32, k: u32) -> bool {
    n <= 10 || (n <= 16 && k <= 3)
}

pub fn check_caps(n: u32, k: u32, override_caps: bool) -> Result<()> {
    check_ambient(n)?;
    if k > n {
        return Err(invalid!("codimension {k} exceeds ambient dimension {n}"));
    }
    if !override_caps && !within_default_caps(n, k) {
        return Err(Error::CapExceeded(format!(
            "enumerating codim-{k} subspaces of F_2^{n} is outside the default caps \
             (n <= 10, or n <= 16 with codim <= 3)"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
struct PivotBlock {
    start: u64,
    pivots: u32,
}

/// Index-addressable enumeration of all codimension-`k` linear subspaces.
///
/// Order: pivot sets in lexicographic order of their sorted column lists,
/// then the free RREF entries read as a binary counter.
#[derive(Debug, Clone)]
pub struct LinearEnumerator {
    n: u32,
    k: u32,
    blocks: Vec<PivotBlock>,
    total: u64,
}

impl LinearEnumerator {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        Self::with_caps(n, k, false)
    }

    pub fn with_caps(n: u32, k: u32, override_caps: bool) -> Result<Self> {
        check_caps(n, k, override_caps)?;
        subspace_count(n, k, Scope::Linear)?;
        let d = n - k;
        let mut blocks = Vec::new();
        let mut start = 0u64;
        let mut combo: Vec<u32> = (0..d).collect();
        loop {
            let pivots = combo.iter().fold(0u32, |acc, &p| acc | (1 << p));
            let free_bits: u32 = combo.iter().enumerate().map(|(i, &p)| p - i as u32).sum();
            blocks.push(PivotBlock { start, pivots });
            start += 1u64 << free_bits;
            if !next_combination(&mut combo, n) {
                break;
            }
        }
        Ok(LinearEnumerator { n, k, blocks, total: start })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn codim(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Write the RREF basis of subspace `index` into `out`.
    pub fn decode_into(&self, index: u64, out: &mut Vec<u32>) {
        debug_assert!(index < self.total);
        let b = match self.blocks.binary_search_by(|blk| blk.start.cmp(&index)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        let blk = &self.blocks[b];
        let mut counter = index - blk.start;
        out.clear();
        let mut rest = blk.pivots;
        while rest != 0 {
            let p = rest.trailing_zeros();
            rest &= rest - 1;
            let free = ((1u32 << p) - 1) & !blk.pivots;
            let width = free.count_ones();
            out.push((1 << p) | deposit(counter as u32, free));
            counter >>= width;
        }
    }

    pub fn get(&self, index: u64) -> LinearSubspace {
        let mut basis = Vec::with_capacity((self.n - self.k) as usize);
        self.decode_into(index, &mut basis);
        LinearSubspace { n: self.n, basis }
    }

    pub fn iter(&self) -> impl Iterator<Item = LinearSubspace> + '_ {
        (0..self.total).map(move |i| self.get(i))
    }
}

/// Affine enumeration: every linear space followed by its `2^k` cosets, with
/// coset representatives supported on the non-pivot columns.
#[derive(Debug, Clone)]
pub struct AffineEnumerator {
    linear: LinearEnumerator,
}

impl AffineEnumerator {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        Self::with_caps(n, k, false)
    }

    pub fn with_caps(n: u32, k: u32, override_caps: bool) -> Result<Self> {
        let linear = LinearEnumerator::with_caps(n, k, override_caps)?;
        subspace_count(n, k, Scope::Affine)?;
        Ok(AffineEnumerator { linear })
    }

    pub fn len(&self) -> u64 {
        self.linear.len() << self.linear.k
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Basis and canonical offset of affine subspace `index`.
    pub fn decode_into(&self, index: u64, out: &mut Vec<u32>) -> u32 {
        let k = self.linear.k;
        self.linear.decode_into(index >> k, out);
        let pivots = out.iter().fold(0u32, |acc, &b| acc | (1 << pivot(b)));
        let free = full_mask(self.linear.n) & !pivots;
        deposit((index & ((1u64 << k) - 1)) as u32, free)
    }

    pub fn get(&self, index: u64) -> AffineSubspace {
        let mut basis = Vec::new();
        let offset = self.decode_into(index, &mut basis);
        AffineSubspace { linear: LinearSubspace { n: self.linear.n, basis }, offset }
    }

    pub fn iter(&self) -> impl Iterator<Item = AffineSubspace> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }
}

/// Scatter the low bits of `value` onto the set bits of `mask`, lowest first.
#[inline]
fn deposit(mut value: u32, mut mask: u32) -> u32 {
    let mut out = 0;
    while mask != 0 && value != 0 {
        let bit = mask & mask.wrapping_neg();
        if value & 1 == 1 {
            out |= bit;
        }
        value >>= 1;
        mask ^= bit;
    }
    out
}

fn next_combination(c: &mut [u32], n: u32) -> bool {
    let d = c.len();
    let mut i = d;
    while i > 0 {
        i -= 1;
        if c[i] < n - (d - i) as u32 {
            c[i] += 1;
            for j in i + 1..d {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All codimension-`k` linear subspaces, in canonical order.
pub fn enumerate_linear(n: u32, k: u32) -> Result<impl Iterator<Item = LinearSubspace>> {
    let e = LinearEnumerator::new(n, k)?;
    Ok((0..e.len()).map(move |i| e.get(i)))
}

/// All codimension-`k` affine subspaces, in canonical order.
pub fn enumerate_affine(n: u32, k: u32) -> Result<impl Iterator<Item = AffineSubspace>> {
    let e = AffineEnumerator::new(n, k)?;
    Ok((0..e.len()).map(move |i| e.get(i)))
}

/// Particular solution of `w_i . x = e_i`, if the system is consistent.
fn solve_affine(normals: &[u32], rhs: &[u8]) -> Option<u32> {
    // eliminate on rows augmented with the right-hand side in bit 31
    let mut rows: Vec<u32> = Vec::with_capacity(normals.len());
    for (&w, &e) in normals.iter().zip(rhs) {
        let mut v = w | ((e as u32 & 1) << 31);
        for &r in &rows {
            let p = pivot(r & !(1 << 31));
            if (v >> p) & 1 == 1 {
                v ^= r;
            }
        }
        if v & !(1 << 31) == 0 {
            if v != 0 {
                return None;
            }
            continue;
        }
        let p = pivot(v & !(1 << 31));
        for r in rows.iter_mut() {
            if (*r >> p) & 1 == 1 {
                *r ^= v;
            }
        }
        rows.push(v);
    }
    Some(rows.iter().filter(|r| *r >> 31 == 1).fold(0, |acc, &r| acc | (1 << pivot(r & !(1 << 31)))))
}

impl TraceEquations {
    pub fn new(ctx: &FieldCtx, pairs: Vec<(FieldElement, u8)>) -> Result<Self> {
        if pairs.iter().any(|(a, e)| !ctx.contains(*a) || *e > 1) {
            return Err(invalid!("trace equation coefficients out of range"));
        }
        let forms: Vec<u32> = pairs.iter().map(|(a, _)| a.value()).collect();
        if rank(&forms) != forms.len() {
            return Err(invalid!("trace equation coefficients are F_2-dependent"));
        }
        Ok(TraceEquations { ctx: ctx.clone(), pairs })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn pairs(&self) -> &[(FieldElement, u8)] {
        &self.pairs
    }

    /// The solution coset, of codimension equal to the number of equations.
    pub fn to_subspace(&self) -> AffineSubspace {
        let n = self.ctx.n();
        let normals: Vec<u32> = self.pairs.iter().map(|(a, _)| self.ctx.trace_form(*a)).collect();
        let rhs: Vec<u8> = self.pairs.iter().map(|(_, e)| *e).collect();
        // trace_form is a bijection, so independent a_i give independent normals
        let offset = solve_affine(&normals, &rhs).expect("independent equations are consistent");
        let linear = LinearSubspace { n, basis: annihilator(&normals, n) };
        let offset = reduce(&linear.basis, offset);
        AffineSubspace { linear, offset }
    }

    /// Equations cutting out exactly `space`.
    pub fn from_subspace(space: &AffineSubspace, ctx: &FieldCtx) -> Result<Self> {
        if ctx.n() != space.n() {
            return Err(invalid!("field degree {} does not match ambient dimension {}", ctx.n(), space.n()));
        }
        let pairs = space
            .linear
            .normals()
            .into_iter()
            .map(|w| (ctx.element_of_form(w), dot(w, space.offset) as u8))
            .collect();
        Ok(TraceEquations { ctx: ctx.clone(), pairs })
    }
}

pub fn equations_to_subspace(eqs: &TraceEquations) -> AffineSubspace {
    eqs.to_subspace()
}

pub fn subspace_to_equations(space: &AffineSubspace, ctx: &FieldCtx) -> Result<TraceEquations> {
    TraceEquations::from_subspace(space, ctx)
}

/// Fill `out` with `g(t) = f(offset + sum t_i b_i)`, visiting points in Gray
/// code order so each step costs one XOR.
#[inline]
pub fn restrict_into(f: &[u32], basis: &[u32], offset: u32, out: &mut Vec<u32>) {
    let d = basis.len();
    out.clear();
    out.resize(1usize << d, 0);
    let mut x = offset;
    out[0] = f[x as usize];
    for t in 1usize..1 << d {
        x ^= basis[t.trailing_zeros() as usize];
        out[t ^ (t >> 1)] = f[x as usize];
    }
}

/// Restriction of `f` to `space` as a function of `dim(space)` variables.
pub fn restrict(f: &VectorialFunction, space: &AffineSubspace) -> Result<VectorialFunction> {
    restrict_basis(f, space.linear.basis(), space.offset)
}

/// Restriction along an arbitrary basis; `basis` must be independent.
pub fn restrict_basis(f: &VectorialFunction, basis: &[u32], offset: u32) -> Result<VectorialFunction> {
    let mask = full_mask(f.n());
    if basis.iter().any(|&b| b & !mask != 0) || offset & !mask != 0 {
        return Err(invalid!("subspace does not live in F_2^{}", f.n()));
    }
    if rank(basis) != basis.len() {
        return Err(invalid!("restriction basis is dependent"));
    }
    let mut out = Vec::new();
    restrict_into(f.table(), basis, offset, &mut out);
    Ok(VectorialFunction::from_raw(basis.len() as u32, f.m(), out))
}

/// Degree of the restriction, computed in the caller's scratch buffer.
#[inline]
pub fn restriction_degree_with(f: &[u32], basis: &[u32], offset: u32, scratch: &mut Vec<u32>) -> Degree {
    restrict_into(f, basis, offset, scratch);
    table_degree_in_place(scratch, basis.len() as u32)
}

pub fn restriction_degree(f: &VectorialFunction, space: &AffineSubspace) -> Result<Degree> {
    if space.n() != f.n() {
        return Err(invalid!("subspace of F_2^{} used with an {}-input function", space.n(), f.n()));
    }
    let mut scratch = Vec::new();
    Ok(restriction_degree_with(f.table(), space.linear.basis(), space.offset, &mut scratch))
}

/// Degree of the n-variable product `1_A * F`.
pub fn indicator_product_degree(f: &VectorialFunction, space: &AffineSubspace) -> Result<Degree> {
    if space.n() != f.n() {
        return Err(invalid!("subspace of F_2^{} used with an {}-input function", space.n(), f.n()));
    }
    let mut table: Vec<u32> = (0..1u32 << f.n())
        .map(|x| if space.contains(x) { f.eval(x) } else { 0 })
        .collect();
    Ok(table_degree_in_place(&mut table, f.n()))
}
