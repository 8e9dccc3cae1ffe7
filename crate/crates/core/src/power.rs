//! Power functions `x^d`: exponent profiles, closed-form codimension
//! predicates, Moore exponent sets, named families, and the structure of the
//! multiplicative inverse on codimension-2 and -3 spaces.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::boolfn::{Degree, VectorialFunction};
use crate::degree_drop::{find_drop_space, is_apn, scan, ScanOptions};
use crate::error::{invalid, Error, Result};
use crate::field::{FieldCtx, FieldElement};
use crate::linalg::is_independent;
use crate::subspace::{
    restriction_degree_with, within_default_caps, AffineEnumerator, LinearEnumerator, LinearSubspace,
    Scope, TraceEquations,
};

/// Exponents are handled symbolically up to this field degree.
pub const MAX_EXPONENT_BITS: u32 = 128;
/// Brute-force Moore checks are limited to fields up to this degree.
pub const MOORE_MAX_N: u32 = 12;
/// ... and to at most this many determinant evaluations.
pub const MOORE_MAX_EVALUATIONS: u128 = 50_000_000;
/// The z(n) sweep visits `4^n` pairs.
pub const Z_SWEEP_MAX_N: u32 = 14;

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn all_ones(n: u32) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn u128_as_string<S: Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Binary digits of an exponent together with its zero positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentProfile {
    pub n: u32,
    #[serde(serialize_with = "u128_as_string")]
    pub d: u128,
    pub digits: Vec<u8>,
    pub zero_set: Vec<u32>,
    pub weight: u32,
}

impl ExponentProfile {
    pub fn new(n: u32, d: u128) -> Result<Self> {
        if n == 0 || n > MAX_EXPONENT_BITS {
            return Err(invalid!("n = {n} outside 1..={MAX_EXPONENT_BITS}"));
        }
        if d == 0 || d > all_ones(n) {
            return Err(invalid!("exponent {d} outside 1..=2^{n}-1"));
        }
        let digits: Vec<u8> = (0..n).map(|i| ((d >> i) & 1) as u8).collect();
        let zero_set: Vec<u32> = (0..n).filter(|&i| digits[i as usize] == 0).collect();
        Ok(ExponentProfile { n, d, weight: n - zero_set.len() as u32, digits, zero_set })
    }

    /// The exponent whose binary digits vanish exactly on `zeros`.
    pub fn from_zero_set(n: u32, zeros: &[u32]) -> Result<Self> {
        if n == 0 || n > MAX_EXPONENT_BITS {
            return Err(invalid!("n = {n} outside 1..={MAX_EXPONENT_BITS}"));
        }
        if let Some(z) = zeros.iter().find(|&&z| z >= n) {
            return Err(invalid!("zero position {z} is not below n = {n}"));
        }
        let d = zeros.iter().fold(all_ones(n), |acc, &z| acc & !(1u128 << z));
        Self::new(n, d)
    }

    pub fn degree(&self) -> u32 {
        self.weight
    }

    /// Profile of `2d mod (2^n - 1)`, a cyclic shift of the digits.
    pub fn frobenius(&self) -> ExponentProfile {
        let n = self.n;
        let d = ((self.d << 1) | (self.d >> (n - 1))) & all_ones(n);
        ExponentProfile::new(n, d).expect("a rotation of a valid exponent is valid")
    }

    fn is_zero_digit(&self, i: u32) -> bool {
        self.digits[(i % self.n) as usize] == 0
    }
}

pub fn profile(n: u32, d: u128) -> Result<ExponentProfile> {
    ExponentProfile::new(n, d)
}

/// No degree-drop hyperplane, iff `d != 2^n - 1`.
pub fn codim1_no_drop(p: &ExponentProfile) -> bool {
    p.d != all_ones(p.n)
}

/// `gcd` of all positive pairwise differences of the zero positions.
pub fn zero_difference_gcd(p: &ExponentProfile) -> Result<u32> {
    let z = &p.zero_set;
    if z.len() < 2 {
        return Err(invalid!("need at least two zero digits, exponent {} has {}", p.d, z.len()));
    }
    let mut u = 0;
    for (i, &a) in z.iter().enumerate() {
        for &b in &z[i + 1..] {
            u = gcd(u, b - a);
        }
    }
    Ok(u)
}

/// No degree-drop space of codimension 2, iff `gcd(u, n) = 1` with `u` the
/// difference gcd of the zero positions. Needs `deg <= n - 2`.
pub fn codim2_no_drop(p: &ExponentProfile) -> Result<bool> {
    Ok(gcd(zero_difference_gcd(p)?, p.n) == 1)
}

fn check_codim(p: &ExponentProfile, k: u32) -> Result<()> {
    if k == 0 || k > p.n - p.weight {
        return Err(invalid!("codimension {k} outside 1..={} for an exponent of weight {}", p.n - p.weight, p.weight));
    }
    Ok(())
}

/// `(t, u)` with `gcd(u, n) = 1` such that `t, t+u, ..., t+(k-1)u` (mod n)
/// are all zero digits.
pub fn progression_witness(p: &ExponentProfile, k: u32) -> Result<Option<(u32, u32)>> {
    check_codim(p, k)?;
    let n = p.n;
    for u in (1..=n).filter(|&u| gcd(u, n) == 1) {
        for &t in &p.zero_set {
            if (0..k).all(|i| p.is_zero_digit(t + i * u)) {
                return Ok(Some((t, u % n)));
            }
        }
    }
    Ok(None)
}

/// Sufficient condition for the absence of codim-`k` degree-drop spaces.
pub fn codim_k_sufficient(p: &ExponentProfile, k: u32) -> Result<bool> {
    Ok(progression_witness(p, k)?.is_some())
}

/// Cheap shortcuts that also guarantee no codim-`k` drop: `d < 2^(n-k)` or
/// `deg <= floor((n-1)/k)`.
pub fn small_exponent_shortcut(p: &ExponentProfile, k: u32) -> Result<bool> {
    check_codim(p, k)?;
    let small = p.n - k < 128 && p.d < (1u128 << (p.n - k));
    Ok(small || p.weight <= (p.n - 1) / k)
}

/// Outcome of a Moore exponent set check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MooreSetVerdict {
    pub exponent_set: Vec<u32>,
    pub is_moore: bool,
    /// Independent elements whose determinant vanishes, when not Moore.
    pub witness: Option<Vec<u32>>,
}

/// Determinant of `(a_j^(2^(e_l)))` over the field.
pub fn moore_determinant(ctx: &FieldCtx, exps: &[u32], elems: &[FieldElement]) -> FieldElement {
    let k = elems.len();
    let mut m: Vec<Vec<FieldElement>> = exps
        .iter()
        .map(|&e| elems.iter().map(|&a| ctx.frobenius(a, e)).collect())
        .collect();
    let mut det = FieldElement::ONE;
    for col in 0..k {
        let Some(pr) = (col..k).find(|&r| !m[r][col].is_zero()) else {
            return FieldElement::ZERO;
        };
        m.swap(col, pr);
        let p = m[col][col];
        det = ctx.mul(det, p);
        let pinv = ctx.inv(p);
        for r in col + 1..k {
            if m[r][col].is_zero() {
                continue;
            }
            let f = ctx.mul(m[r][col], pinv);
            for c in col..k {
                let t = ctx.mul(f, m[col][c]);
                m[r][c] += t;
            }
        }
    }
    det
}

/// Checks Moore exponent sets over one field, caching verdicts by the set
/// shifted to start at zero (Frobenius maps one onto the other).
pub struct MooreChecker {
    ctx: FieldCtx,
    full_sweep: bool,
    workers: usize,
    cache: Mutex<HashMap<Vec<u32>, MooreSetVerdict>>,
}

fn gaussian_u128(n: u32, k: u32) -> u128 {
    let num: u128 = (0..k).map(|i| (1u128 << (n - i)) - 1).product();
    let den: u128 = (0..k).map(|i| (1u128 << (i + 1)) - 1).product();
    num / den
}

impl MooreChecker {
    pub fn new(ctx: &FieldCtx, full_sweep: bool) -> Result<Self> {
        if ctx.n() > MOORE_MAX_N {
            return Err(Error::CapExceeded(format!(
                "Moore checks are exhaustive and limited to n <= {MOORE_MAX_N}"
            )));
        }
        Ok(MooreChecker { ctx: ctx.clone(), full_sweep, workers: 0, cache: Mutex::new(HashMap::new()) })
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Number of determinants a check of a `k`-set evaluates.
    pub fn cost(&self, k: u32) -> u128 {
        let n = self.ctx.n();
        if self.full_sweep {
            (0..k).map(|i| (1u128 << n) - (1u128 << i)).product()
        } else {
            gaussian_u128(n, k)
        }
    }

    pub fn check(&self, exps: &[u32]) -> Result<MooreSetVerdict> {
        let n = self.ctx.n();
        let mut set: Vec<u32> = exps.to_vec();
        set.sort_unstable();
        set.dedup();
        if set.len() != exps.len() || set.iter().any(|&e| e >= n) || set.is_empty() {
            return Err(invalid!("exponent set must hold distinct values in 0..{n}"));
        }
        let k = set.len() as u32;
        let cost = self.cost(k);
        if cost > MOORE_MAX_EVALUATIONS {
            return Err(Error::CapExceeded(format!(
                "Moore check of a {k}-set over GF(2^{n}) needs {cost} determinants (limit {MOORE_MAX_EVALUATIONS})"
            )));
        }
        let base = set[0];
        let key: Vec<u32> = set.iter().map(|e| e - base).collect();
        if let Some(v) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(MooreSetVerdict { exponent_set: set, ..v.clone() });
        }
        let witness = if self.full_sweep { self.sweep_tuples(&key)? } else { self.sweep_subspaces(&key)? };
        // a witness for the shifted set is one for the original, raised to 2^base
        let witness = witness.map(|w| w.into_iter().map(|a| self.ctx.frobenius(FieldElement(a), n - base % n).value()).collect::<Vec<u32>>());
        let verdict = MooreSetVerdict { exponent_set: set, is_moore: witness.is_none(), witness };
        self.cache.lock().expect("cache lock").insert(key, verdict.clone());
        Ok(verdict)
    }

    /// One basis per `k`-dimensional subspace.
    fn sweep_subspaces(&self, exps: &[u32]) -> Result<Option<Vec<u32>>> {
        let n = self.ctx.n();
        let k = exps.len() as u32;
        let e = LinearEnumerator::with_caps(n, n - k, true)?;
        let ctx = &self.ctx;
        let step = (e.len() / 256).max(1);
        let chunks: Vec<(u64, u64)> =
            (0..e.len().div_ceil(step)).map(|c| (c * step, ((c + 1) * step).min(e.len()))).collect();
        let opts = ScanOptions::with_workers(self.workers);
        opts.install(|| {
            chunks.par_iter().find_map_first(|&(lo, hi)| {
                let mut basis = Vec::with_capacity(k as usize);
                (lo..hi).find_map(|i| {
                    e.decode_into(i, &mut basis);
                    let elems: Vec<FieldElement> = basis.iter().map(|&b| FieldElement(b)).collect();
                    moore_determinant(ctx, exps, &elems).is_zero().then(|| basis.clone())
                })
            })
        })
    }

    /// Every ordered tuple of independent elements.
    fn sweep_tuples(&self, exps: &[u32]) -> Result<Option<Vec<u32>>> {
        let n = self.ctx.n();
        let k = exps.len();
        let ctx = &self.ctx;
        let opts = ScanOptions::with_workers(self.workers);
        opts.install(|| {
            (1..1u32 << n).into_par_iter().find_map_first(|first| {
                let mut tuple = vec![first];
                extend_tuples(ctx, exps, k, n, &mut tuple)
            })
        })
    }
}

fn extend_tuples(ctx: &FieldCtx, exps: &[u32], k: usize, n: u32, tuple: &mut Vec<u32>) -> Option<Vec<u32>> {
    if tuple.len() == k {
        let elems: Vec<FieldElement> = tuple.iter().map(|&a| FieldElement(a)).collect();
        return moore_determinant(ctx, exps, &elems).is_zero().then(|| tuple.clone());
    }
    for a in 1..1u32 << n {
        tuple.push(a);
        if is_independent(tuple) {
            if let Some(w) = extend_tuples(ctx, exps, k, n, tuple) {
                return Some(w);
            }
        }
        tuple.pop();
    }
    None
}

/// Is `exps` a Moore exponent set for GF(2^n)?
pub fn is_moore_exponent_set(ctx: &FieldCtx, exps: &[u32], full_sweep: bool) -> Result<MooreSetVerdict> {
    MooreChecker::new(ctx, full_sweep)?.check(exps)
}

fn k_subsets(items: &[u32], k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - cur.len() {
            break;
        }
        cur.push(items[i]);
        k_subsets(items, k, i + 1, cur, out);
        cur.pop();
    }
}

/// A `k`-subset of the zero positions that is a Moore exponent set.
pub fn moore_subset_witness(checker: &MooreChecker, p: &ExponentProfile, k: u32) -> Result<Option<Vec<u32>>> {
    check_codim(p, k)?;
    if checker.ctx.n() != p.n {
        return Err(invalid!("field degree {} does not match exponent profile n = {}", checker.ctx.n(), p.n));
    }
    let mut subsets = Vec::new();
    k_subsets(&p.zero_set, k as usize, 0, &mut Vec::new(), &mut subsets);
    for s in subsets {
        if checker.check(&s)?.is_moore {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

/// Some `k`-subset of the zero positions is a Moore exponent set.
pub fn codim_k_moore_sufficient(checker: &MooreChecker, p: &ExponentProfile, k: u32) -> Result<bool> {
    Ok(moore_subset_witness(checker, p, k)?.is_some())
}

/// Every linear codim-`k` restriction of `x^d` has degree at least `w(d) - k`.
pub fn power_drop_lower_bound_check(ctx: &FieldCtx, d: u64, k: u32, opts: &ScanOptions) -> Result<bool> {
    let p = ExponentProfile::new(ctx.n(), d as u128)?;
    if p.weight >= ctx.n() || k == 0 || k > p.weight {
        return Err(invalid!("need deg(x^d) < n and 1 <= k <= deg(x^d)"));
    }
    let rep = scan(&VectorialFunction::power(ctx, d), k, Scope::Linear, opts)?;
    Ok(rep.min_degree >= Degree::Finite(p.weight - k))
}

/// Named power-function families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `x^(2^j + 1)`
    Gold(u32),
    /// `x^(2^(2i) - 2^i + 1)`
    Kasami(u32),
    /// `x^(2^j + 3)` with `j = (n - 1) / 2`, `n` odd
    Welch,
    Inverse,
    /// `x^(1 + 2^u + ... + 2^((j-1)u))`
    OnesRun { j: u32, u: u32 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gold(j) => write!(f, "gold:{j}"),
            Family::Kasami(i) => write!(f, "kasami:{i}"),
            Family::Welch => f.write_str("welch"),
            Family::Inverse => f.write_str("inverse"),
            Family::OnesRun { j, u } => write!(f, "ones-run:{j}:{u}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u32> {
            parts
                .get(i)
                .ok_or_else(|| invalid!("family {s:?} is missing a parameter"))?
                .parse()
                .map_err(|_| invalid!("bad parameter in family {s:?}"))
        };
        let fam = match parts[0] {
            "gold" => Family::Gold(num(1)?),
            "kasami" => Family::Kasami(num(1)?),
            "welch" => Family::Welch,
            "inverse" => Family::Inverse,
            "ones-run" => Family::OnesRun { j: num(1)?, u: num(2)? },
            _ => return Err(invalid!("unknown family {s:?} (gold:J, kasami:I, welch, inverse, ones-run:J:U)")),
        };
        let expected = match fam {
            Family::Welch | Family::Inverse => 1,
            Family::OnesRun { .. } => 3,
            _ => 2,
        };
        if parts.len() != expected {
            return Err(invalid!("family {s:?} takes {} parameter(s)", expected - 1));
        }
        Ok(fam)
    }
}

impl Family {
    /// The exponent over GF(2^n), reduced into `1..=2^n-1`.
    pub fn exponent(&self, n: u32) -> Result<u128> {
        if n == 0 || n > MAX_EXPONENT_BITS {
            return Err(invalid!("n = {n} outside 1..={MAX_EXPONENT_BITS}"));
        }
        match *self {
            Family::Gold(j) => {
                if j == 0 || j >= n {
                    return Err(invalid!("Gold exponent needs 1 <= j < n"));
                }
                Ok((1u128 << j) + 1)
            }
            Family::Kasami(i) => {
                if i == 0 || 2 * i > n {
                    return Err(invalid!("Kasami exponent needs 1 <= i <= n/2"));
                }
                Ok((1u128 << (2 * i)) - (1u128 << i) + 1)
            }
            Family::Welch => {
                if n % 2 == 0 || n < 5 {
                    return Err(invalid!("Welch exponent needs odd n >= 5"));
                }
                Ok((1u128 << ((n - 1) / 2)) + 3)
            }
            Family::Inverse => {
                if n < 2 {
                    return Err(invalid!("inverse needs n >= 2"));
                }
                Ok(all_ones(n) - 1)
            }
            Family::OnesRun { j, u } => {
                if j == 0 || j > n || u == 0 || gcd(u, n) != 1 {
                    return Err(invalid!("ones-run exponent needs 1 <= j <= n and gcd(u, n) = 1"));
                }
                // 2^(iu) = 2^(iu mod n) modulo 2^n - 1; the positions are distinct
                Ok((0..j).fold(0u128, |acc, i| acc | (1u128 << ((i as u64 * u as u64) % n as u64))))
            }
        }
    }

    /// Codimension at which the matching theorem excludes degree-drop spaces.
    fn guarantee(&self, n: u32) -> (Option<u32>, &'static str) {
        match *self {
            Family::Gold(j) if gcd(j, n) == 1 && n > 2 => {
                (Some(n - 2), "zero-digit progression with step j; equivalently APN quadratic")
            }
            Family::Gold(_) => (None, "gcd(j, n) > 1: not APN, no guarantee"),
            Family::Kasami(i) => {
                let k = (i - 1).max(n - 2 * i);
                ((k > 0).then_some(k), "longest run of consecutive zero digits")
            }
            Family::Welch => (Some(n - 4), "zero-digit progression with step (n-1)/2"),
            Family::Inverse => (Some(1), "no hyperplane drop: full degree-stability"),
            Family::OnesRun { j, .. } => (
                (j < n).then_some(n - j),
                "zero-digit progression with step u: full degree-stability",
            ),
        }
    }
}

/// Structured verdict for a named family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub n: u32,
    #[serde(serialize_with = "u128_as_string")]
    pub d: u128,
    pub degree: u32,
    pub guaranteed_no_drop_codim: Option<u32>,
    pub criterion: String,
    /// Whether the progression predicate reproduces the guarantee.
    pub predicate_confirms: Option<bool>,
    pub is_apn: Option<bool>,
    pub scan_confirmed: Option<bool>,
}

pub fn named_family_report(family: Family, n: u32, verify: bool, opts: &ScanOptions) -> Result<FamilyReport> {
    let d = family.exponent(n)?;
    let p = ExponentProfile::new(n, d)?;
    let (codim, criterion) = family.guarantee(n);
    let predicate_confirms = match (codim, family) {
        (Some(1), _) => Some(codim1_no_drop(&p)),
        (Some(k), _) => Some(codim_k_sufficient(&p, k)?),
        (None, _) => None,
    };
    let field_ok = n <= crate::field::MAX_FIELD_DEGREE;
    let ctx = if field_ok && (verify || matches!(family, Family::Gold(_))) {
        Some(FieldCtx::new(n, None)?)
    } else {
        None
    };
    let f = ctx.as_ref().filter(|_| n <= 16).map(|c| VectorialFunction::power(c, d as u64));
    let is_apn = match (&f, family) {
        (Some(f), Family::Gold(_)) if n <= 10 => Some(is_apn(f)?),
        _ => None,
    };
    let scan_confirmed = match (&f, codim) {
        (Some(f), Some(k)) if verify && within_default_caps(n, k) => {
            Some(find_drop_space(f, k, Scope::Linear, opts)?.is_none())
        }
        _ => None,
    };
    Ok(FamilyReport {
        family: family.to_string(),
        n,
        d,
        degree: p.weight,
        guaranteed_no_drop_codim: codim,
        criterion: criterion.to_string(),
        predicate_confirms,
        is_apn,
        scan_confirmed,
    })
}

/// Codimension-2 spaces on which the inverse drops by two.
#[derive(Debug, Clone, Serialize)]
pub struct InverseCodim2 {
    pub n: u32,
    pub special_count: u64,
    pub total_linear: u64,
    /// `(a, c a)` normal pairs, one per space, when requested.
    pub generators: Option<Vec<(u32, u32)>>,
}

/// The primitive cube roots of unity, present iff `n` is even.
pub fn cube_root_of_unity(ctx: &FieldCtx) -> Option<FieldElement> {
    ctx.elements().find(|&c| ctx.square(c) + c + FieldElement::ONE == FieldElement::ZERO)
}

pub fn inverse_codim2_classification(ctx: &FieldCtx, list_spaces: bool) -> Result<InverseCodim2> {
    let n = ctx.n();
    if n < 2 {
        return Err(invalid!("codimension 2 needs n >= 2"));
    }
    let total_linear = crate::subspace::subspace_count(n, 2, Scope::Linear)?;
    let Some(c) = cube_root_of_unity(ctx) else {
        return Ok(InverseCodim2 { n, special_count: 0, total_linear, generators: list_spaces.then(Vec::new) });
    };
    let c2 = ctx.square(c);
    // span{a, ca} = a GF(4); keep the smallest of a, ca, c^2 a as representative
    let reps: Vec<(u32, u32)> = ctx
        .elements()
        .skip(1)
        .filter(|&a| a.value() < ctx.mul(c, a).value() && a.value() < ctx.mul(c2, a).value())
        .map(|a| (a.value(), ctx.mul(c, a).value()))
        .collect();
    if reps.len() as u64 * 3 != ctx.size() as u64 - 1 {
        return Err(Error::Consistency(format!("found {} special spaces for n = {n}", reps.len())));
    }
    Ok(InverseCodim2 {
        n,
        special_count: reps.len() as u64,
        total_linear,
        generators: list_spaces.then_some(reps),
    })
}

impl InverseCodim2 {
    /// The special spaces as subspaces of F_2^n.
    pub fn spaces(&self, ctx: &FieldCtx) -> Result<Vec<LinearSubspace>> {
        let gens = self.generators.as_ref().ok_or_else(|| invalid!("spaces were not listed"))?;
        gens.iter()
            .map(|&(a, b)| {
                let eqs = TraceEquations::new(ctx, vec![(FieldElement(a), 0), (FieldElement(b), 0)])?;
                Ok(eqs.to_subspace().linear().clone())
            })
            .collect()
    }
}

fn check_z_range(ctx: &FieldCtx) -> Result<()> {
    if ctx.n() < 3 {
        return Err(invalid!("the codimension-3 equation needs n >= 3"));
    }
    if ctx.n() > Z_SWEEP_MAX_N {
        return Err(Error::CapExceeded(format!("the pair sweep is limited to n <= {Z_SWEEP_MAX_N}")));
    }
    Ok(())
}

/// Left-hand side of the codimension-3 condition in `(d1, d2)`.
pub fn codim3_form(ctx: &FieldCtx, d1: FieldElement, d2: FieldElement) -> FieldElement {
    let one = FieldElement::ONE;
    let p = ctx.mul(d1, d2);
    let s1 = ctx.square(d1);
    let s2 = ctx.square(d2);
    ctx.mul(p, one + d1 + d2) + s1 + s2 + ctx.square(p) + one + ctx.square(s1) + ctx.square(s2)
}

/// Number of pairs `(d1, d2)` with `1, d1, d2` independent solving the
/// codimension-3 condition.
pub fn inverse_codim3_z(ctx: &FieldCtx, opts: &ScanOptions) -> Result<u64> {
    check_z_range(ctx)?;
    let q = ctx.size();
    let sq: Vec<u32> = ctx.elements().map(|x| ctx.square(x).value()).collect();
    let quad: Vec<u32> = sq.iter().map(|&x| sq[x as usize]).collect();
    opts.install(|| {
        (2..q)
            .into_par_iter()
            .map(|d1| {
                let mut count = 0u64;
                // terms depending only on d1
                let base = 1 ^ sq[d1 as usize] ^ quad[d1 as usize];
                for d2 in 2..q {
                    if d2 == d1 || d2 == d1 ^ 1 {
                        continue;
                    }
                    let p = ctx.mul_raw(d1, d2);
                    let lin = ctx.mul_raw(p, 1 ^ d1 ^ d2);
                    let v = lin ^ sq[p as usize] ^ sq[d2 as usize] ^ quad[d2 as usize] ^ base;
                    if v == 0 {
                        count += 1;
                    }
                }
                count
            })
            .sum()
    })
}

/// `(2^n - 1) z(n) / 168`, the number of linear codim-3 spaces on which the
/// inverse drops by three.
pub fn inverse_codim3_special_count(ctx: &FieldCtx, opts: &ScanOptions) -> Result<u64> {
    let z = inverse_codim3_z(ctx, opts)?;
    special_count_from_z(ctx.n(), z)
}

pub fn special_count_from_z(n: u32, z: u64) -> Result<u64> {
    let num = ((1u128 << n) - 1) * z as u128;
    if num % 168 != 0 {
        return Err(Error::Consistency(format!("(2^{n} - 1) * {z} is not divisible by 168")));
    }
    Ok((num / 168) as u64)
}

/// The linear codim-3 spaces `{tr(a x) = tr(a d1 x) = tr(a d2 x) = 0}` built
/// from every solution pair and every non-zero `a`.
pub fn inverse_codim3_special_spaces(ctx: &FieldCtx) -> Result<HashSet<LinearSubspace>> {
    check_z_range(ctx)?;
    let q = ctx.size();
    let mut out = HashSet::new();
    for d1 in 2..q {
        for d2 in 2..q {
            if d2 == d1 || d2 == d1 ^ 1 {
                continue;
            }
            let (e1, e2) = (FieldElement(d1), FieldElement(d2));
            if !codim3_form(ctx, e1, e2).is_zero() {
                continue;
            }
            for a in 1..q {
                let a = FieldElement(a);
                let eqs = TraceEquations::new(ctx, vec![(a, 0), (ctx.mul(a, e1), 0), (ctx.mul(a, e2), 0)])?;
                out.insert(eqs.to_subspace().linear().clone());
            }
        }
    }
    Ok(out)
}

/// Restriction-degree histogram of the inverse over non-linear cosets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CosetHistogram {
    pub n: u32,
    pub codim: u32,
    pub checked: u64,
    pub histogram: BTreeMap<u32, u64>,
    pub below_zero: u64,
}

pub fn inverse_nonlinear_coset_histogram(ctx: &FieldCtx, k: u32, opts: &ScanOptions) -> Result<CosetHistogram> {
    let n = ctx.n();
    if k < 2 || k >= n {
        return Err(invalid!("need 2 <= k < n, got k = {k}"));
    }
    let e = AffineEnumerator::with_caps(n, k, opts.override_caps)?;
    let inv = VectorialFunction::inverse(ctx);
    let table = inv.table();
    let per = 1u64 << k;
    let lin_count = e.len() / per;
    let step = (lin_count / 256).max(1);
    let chunks: Vec<(u64, u64)> =
        (0..lin_count.div_ceil(step)).map(|c| (c * step, ((c + 1) * step).min(lin_count))).collect();
    let partials: Vec<[u64; 34]> = opts.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut hist = [0u64; 34];
                let mut basis = Vec::new();
                let mut scratch = Vec::new();
                for l in lo..hi {
                    for c in 1..per {
                        let offset = e.decode_into(l * per + c, &mut basis);
                        match restriction_degree_with(table, &basis, offset, &mut scratch) {
                            Degree::NegInf => hist[0] += 1,
                            Degree::Finite(d) => hist[d as usize + 1] += 1,
                        }
                    }
                }
                hist
            })
            .collect()
    })?;
    let mut hist = [0u64; 34];
    for p in partials {
        for (h, v) in hist.iter_mut().zip(p) {
            *h += v;
        }
    }
    Ok(CosetHistogram {
        n,
        codim: k,
        checked: hist.iter().sum(),
        below_zero: hist[0],
        histogram: (1..34).filter(|&i| hist[i] > 0).map(|i| (i as u32 - 1, hist[i])).collect(),
    })
}

/// Every non-linear affine codim-`k` space gives the inverse degree `n - k`.
pub fn affine_nondrop_check(ctx: &FieldCtx, k: u32, opts: &ScanOptions) -> Result<bool> {
    let h = inverse_nonlinear_coset_histogram(ctx, k, opts)?;
    Ok(h.below_zero == 0 && h.histogram.len() == 1 && h.histogram.contains_key(&(ctx.n() - k)))
}

/// Per-codimension verdicts for one exponent.
#[derive(Debug, Clone, Serialize)]
pub struct CodimVerdict {
    pub codim: u32,
    /// `deg(x^d) > n - codim`: every such space is trivially a drop space.
    pub trivially_drops: bool,
    pub codim1_no_drop: Option<bool>,
    pub codim2_no_drop: Option<bool>,
    pub progression: Option<(u32, u32)>,
    pub progression_sufficient: Option<bool>,
    pub moore_subset: Option<Vec<u32>>,
    pub moore_sufficient: Option<bool>,
    pub moore_skipped: Option<String>,
    /// Some(true) when the exhaustive scan found a degree-drop space.
    pub scan_has_drop: Option<bool>,
    pub scan_histogram: Option<Vec<(Degree, u64)>>,
    pub scan_skipped: Option<String>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerAnalysis {
    pub profile: ExponentProfile,
    pub modulus: Option<String>,
    pub codims: Vec<CodimVerdict>,
}

/// Settings for `analyze_power`.
#[derive(Debug, Clone, Default)]
pub struct AnalyzeOptions {
    pub scan: ScanOptions,
    pub modulus: Option<u64>,
    pub run_scans: bool,
    pub run_moore: bool,
}

pub fn analyze_power(n: u32, d: u128, k_max: u32, opts: &AnalyzeOptions) -> Result<PowerAnalysis> {
    let p = ExponentProfile::new(n, d)?;
    if k_max == 0 || k_max > n {
        return Err(invalid!("k_max must lie in 1..={n}"));
    }
    let ctx = if n <= crate::field::MAX_FIELD_DEGREE {
        Some(FieldCtx::new(n, opts.modulus)?)
    } else {
        if opts.modulus.is_some() {
            return Err(invalid!("a modulus can only be given for n <= {}", crate::field::MAX_FIELD_DEGREE));
        }
        None
    };
    let f = ctx.as_ref().filter(|_| n <= 16 && opts.run_scans).map(|c| VectorialFunction::power(c, d as u64));
    let checker = match &ctx {
        Some(c) if opts.run_moore && n <= MOORE_MAX_N => Some(MooreChecker::new(c, false)?.with_workers(opts.scan.workers)),
        _ => None,
    };
    let mut codims = Vec::new();
    for k in 1..=k_max {
        let trivially = k > n - p.weight;
        let mut v = CodimVerdict {
            codim: k,
            trivially_drops: trivially,
            codim1_no_drop: None,
            codim2_no_drop: None,
            progression: None,
            progression_sufficient: None,
            moore_subset: None,
            moore_sufficient: None,
            moore_skipped: None,
            scan_has_drop: None,
            scan_histogram: None,
            scan_skipped: None,
            verdict: String::new(),
        };
        if trivially {
            v.verdict = "degree-drop spaces exist: dimension is below the degree".into();
            codims.push(v);
            continue;
        }
        if k == 1 {
            v.codim1_no_drop = Some(codim1_no_drop(&p));
        }
        if k == 2 {
            v.codim2_no_drop = Some(codim2_no_drop(&p)?);
        }
        v.progression = progression_witness(&p, k)?;
        v.progression_sufficient = Some(v.progression.is_some());
        match &checker {
            Some(ch) if ch.cost(k) <= MOORE_MAX_EVALUATIONS => {
                v.moore_subset = moore_subset_witness(ch, &p, k)?;
                v.moore_sufficient = Some(v.moore_subset.is_some());
            }
            Some(_) => v.moore_skipped = Some("Moore check over the evaluation cap".into()),
            None if opts.run_moore => v.moore_skipped = Some(format!("Moore check needs n <= {MOORE_MAX_N}")),
            None => v.moore_skipped = Some("not requested".into()),
        }
        match &f {
            Some(f) if within_default_caps(n, k) || opts.scan.override_caps => {
                let rep = scan(f, k, Scope::Linear, &opts.scan)?;
                v.scan_has_drop = Some(rep.has_drop());
                v.scan_histogram = Some(rep.histogram.iter().map(|b| (b.degree, b.count)).collect());
            }
            Some(_) => v.scan_skipped = Some("outside enumeration caps".into()),
            None if opts.run_scans => v.scan_skipped = Some("function table too large".into()),
            None => v.scan_skipped = Some("not requested".into()),
        }
        let theorem = v.codim1_no_drop.or(v.codim2_no_drop);
        let scan_txt = match v.scan_has_drop {
            Some(true) => "degree-drop space found",
            Some(false) => "no degree-drop space",
            None => "not run",
        };
        v.verdict = match theorem {
            Some(true) => "no degree-drop space (characterization)".into(),
            Some(false) => "degree-drop space exists (characterization)".into(),
            None if v.progression_sufficient == Some(true) || v.moore_sufficient == Some(true) => {
                "no degree-drop space (sufficient condition)".into()
            }
            None => format!("sufficient condition failed; scan verdict: {scan_txt}"),
        };
        if let (Some(t), Some(s)) = (theorem, v.scan_has_drop) {
            if t == s {
                return Err(Error::Consistency(format!(
                    "codim {k}: characterization says no-drop = {t} but the scan disagrees"
                )));
            }
        }
        if v.scan_has_drop == Some(true) && (v.progression_sufficient == Some(true) || v.moore_sufficient == Some(true)) {
            return Err(Error::Consistency(format!("codim {k}: sufficient condition holds but a drop space exists")));
        }
        codims.push(v);
    }
    Ok(PowerAnalysis { profile: p, modulus: ctx.map(|c| crate::field::format_modulus_hex(c.modulus())), codims })
}
