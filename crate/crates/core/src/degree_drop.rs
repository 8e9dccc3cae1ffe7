//! Degree-drop detection on subspaces, exhaustive scans, the hyperplane
//! direction space V_F, full degree-stability and APN checks.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::boolfn::{Degree, VectorialFunction};
use crate::error::{invalid, Error, Result};
use crate::linalg::{is_independent, reduce, rref};
use crate::subspace::{
    restriction_degree, restriction_degree_with, AffineEnumerator, AffineSubspace, LinearEnumerator,
    LinearSubspace, Scope,
};

pub const DEFAULT_EXTREMAL_LIMIT: usize = 1000;

/// Knobs shared by all exhaustive scans.
#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Worker threads; 0 uses the ambient rayon pool.
    pub workers: usize,
    pub extremal_limit: usize,
    pub override_caps: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { workers: 0, extremal_limit: DEFAULT_EXTREMAL_LIMIT, override_caps: false }
    }
}

impl ScanOptions {
    pub fn with_workers(workers: usize) -> Self {
        ScanOptions { workers, ..Default::default() }
    }

    /// Run `job` on a pool of the configured size.
    pub fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        if self.workers == 0 {
            return Ok(job());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| invalid!("cannot start {} workers: {e}", self.workers))?;
        Ok(pool.install(job))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HistogramBin {
    pub degree: Degree,
    pub count: u64,
}

/// Histogram of restriction degrees over every subspace of one codimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub n: u32,
    pub m: u32,
    pub codim: u32,
    pub scope: Scope,
    pub function: String,
    pub degree: Degree,
    pub total: u64,
    /// Sorted by decreasing degree.
    pub histogram: Vec<HistogramBin>,
    pub min_degree: Degree,
    pub drop_count: u64,
    /// Subspaces attaining `min_degree`, in enumeration order.
    pub extremal: Vec<AffineSubspace>,
    pub extremal_truncated: bool,
}

impl ScanReport {
    pub fn count_at(&self, d: Degree) -> u64 {
        self.histogram.iter().find(|b| b.degree == d).map_or(0, |b| b.count)
    }

    pub fn histogram_map(&self) -> BTreeMap<Degree, u64> {
        self.histogram.iter().map(|b| (b.degree, b.count)).collect()
    }

    pub fn has_drop(&self) -> bool {
        self.drop_count > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scan reports always serialize")
    }
}

const HIST_SLOTS: usize = 34;

fn slot(d: Degree) -> usize {
    match d {
        Degree::NegInf => 0,
        Degree::Finite(k) => k as usize + 1,
    }
}

fn unslot(i: usize) -> Degree {
    if i == 0 {
        Degree::NegInf
    } else {
        Degree::Finite(i as u32 - 1)
    }
}

struct Partial {
    hist: [u64; HIST_SLOTS],
    min: Option<Degree>,
    extremal: Vec<AffineSubspace>,
}

enum Space {
    Linear(LinearEnumerator),
    Affine(AffineEnumerator),
}

impl Space {
    fn new(n: u32, k: u32, scope: Scope, override_caps: bool) -> Result<Self> {
        Ok(match scope {
            Scope::Linear => Space::Linear(LinearEnumerator::with_caps(n, k, override_caps)?),
            Scope::Affine => Space::Affine(AffineEnumerator::with_caps(n, k, override_caps)?),
        })
    }

    fn len(&self) -> u64 {
        match self {
            Space::Linear(e) => e.len(),
            Space::Affine(e) => e.len(),
        }
    }

    #[inline]
    fn decode(&self, i: u64, basis: &mut Vec<u32>) -> u32 {
        match self {
            Space::Linear(e) => {
                e.decode_into(i, basis);
                0
            }
            Space::Affine(e) => e.decode_into(i, basis),
        }
    }

    fn subspace(&self, n: u32, basis: &[u32], offset: u32) -> AffineSubspace {
        let lin = LinearSubspace::span(n, basis).expect("enumerated basis is valid");
        AffineSubspace::new(lin, offset).expect("enumerated offset is valid")
    }

    fn chunks(&self) -> Vec<(u64, u64)> {
        let len = self.len();
        let step = (len / 512).max(1);
        (0..len.div_ceil(step)).map(|c| (c * step, ((c + 1) * step).min(len))).collect()
    }
}

fn require_nonconstant(f: &VectorialFunction) -> Result<u32> {
    match f.degree() {
        Degree::Finite(r) if r >= 1 => Ok(r),
        _ => Err(invalid!("the function is constant; degree drops are undefined")),
    }
}

/// True iff `deg(F|A) < deg(F)`.
pub fn is_degree_drop(f: &VectorialFunction, space: &AffineSubspace) -> Result<bool> {
    let r = require_nonconstant(f)?;
    Ok(restriction_degree(f, space)? < Degree::Finite(r))
}

/// Exhaustive histogram of restriction degrees over all codim-`k` subspaces.
pub fn scan(f: &VectorialFunction, k: u32, scope: Scope, opts: &ScanOptions) -> Result<ScanReport> {
    let r = require_nonconstant(f)?;
    let n = f.n();
    let space = Space::new(n, k, scope, opts.override_caps)?;
    let limit = opts.extremal_limit;
    let chunks = space.chunks();
    let table = f.table();
    let partials: Vec<Partial> = opts.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| {
                let mut p = Partial { hist: [0; HIST_SLOTS], min: None, extremal: Vec::new() };
                let mut basis = Vec::with_capacity(n as usize);
                let mut scratch = Vec::with_capacity(1 << (n - k));
                for i in lo..hi {
                    let offset = space.decode(i, &mut basis);
                    let d = restriction_degree_with(table, &basis, offset, &mut scratch);
                    p.hist[slot(d)] += 1;
                    if p.min.is_none_or(|m| d < m) {
                        p.min = Some(d);
                        p.extremal.clear();
                    }
                    if p.min == Some(d) && p.extremal.len() < limit {
                        p.extremal.push(space.subspace(n, &basis, offset));
                    }
                }
                p
            })
            .collect()
    })?;

    let mut hist = [0u64; HIST_SLOTS];
    for p in &partials {
        for (h, v) in hist.iter_mut().zip(p.hist.iter()) {
            *h += v;
        }
    }
    let min_degree = partials.iter().filter_map(|p| p.min).min().unwrap_or(Degree::NegInf);
    let mut extremal = Vec::new();
    for p in partials.into_iter().filter(|p| p.min == Some(min_degree)) {
        let room = limit - extremal.len();
        extremal.extend(p.extremal.into_iter().take(room));
    }
    let total: u64 = hist.iter().sum();
    if total != space.len() {
        return Err(Error::Consistency(format!("scan covered {total} of {} subspaces", space.len())));
    }
    let histogram: Vec<HistogramBin> = (0..HIST_SLOTS)
        .rev()
        .filter(|&i| hist[i] > 0)
        .map(|i| HistogramBin { degree: unslot(i), count: hist[i] })
        .collect();
    let drop_count = (0..=r as usize).map(|i| hist[i]).sum();
    Ok(ScanReport {
        n,
        m: f.m(),
        codim: k,
        scope,
        function: String::new(),
        degree: Degree::Finite(r),
        total,
        extremal_truncated: hist[slot(min_degree)] > extremal.len() as u64,
        histogram,
        min_degree,
        drop_count,
        extremal,
    })
}

/// First degree-drop subspace of codimension `k` in enumeration order.
pub fn find_drop_space(
    f: &VectorialFunction,
    k: u32,
    scope: Scope,
    opts: &ScanOptions,
) -> Result<Option<AffineSubspace>> {
    let r = require_nonconstant(f)?;
    let n = f.n();
    let space = Space::new(n, k, scope, opts.override_caps)?;
    let chunks = space.chunks();
    let table = f.table();
    let bound = Degree::Finite(r);
    opts.install(|| {
        chunks.par_iter().find_map_first(|&(lo, hi)| {
            let mut basis = Vec::with_capacity(n as usize);
            let mut scratch = Vec::with_capacity(1 << (n - k));
            (lo..hi).find_map(|i| {
                let offset = space.decode(i, &mut basis);
                (restriction_degree_with(table, &basis, offset, &mut scratch) < bound)
                    .then(|| space.subspace(n, &basis, offset))
            })
        })
    })
}

/// `V_F`: zero together with every `a` whose hyperplane `a . x = 0` is a
/// degree-drop space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HyperplaneDropSpace {
    pub n: u32,
    pub basis: Vec<u32>,
    pub members: Vec<u32>,
}

impl HyperplaneDropSpace {
    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn contains(&self, a: u32) -> bool {
        a >> self.n == 0 && reduce(&self.basis, a) == 0
    }
}

/// Non-zero `a` such that `H_a = {x : a . x = 0}` is a degree-drop hyperplane.
pub fn drop_hyperplane_directions(f: &VectorialFunction) -> Result<Vec<u32>> {
    let r = require_nonconstant(f)?;
    let n = f.n();
    let mut scratch = Vec::new();
    Ok((1..1u32 << n)
        .filter(|&a| {
            let h = LinearSubspace::from_normals(n, &[a]).expect("a is in range");
            restriction_degree_with(f.table(), h.basis(), 0, &mut scratch) < Degree::Finite(r)
        })
        .collect())
}

pub fn hyperplane_drop_space(f: &VectorialFunction) -> Result<HyperplaneDropSpace> {
    let members = drop_hyperplane_directions(f)?;
    let basis = rref(&members);
    if (1usize << basis.len()) != members.len() + 1 {
        return Err(Error::Consistency(format!(
            "degree-drop hyperplane directions ({}) do not form a linear space",
            members.len()
        )));
    }
    Ok(HyperplaneDropSpace { n: f.n(), basis, members })
}

/// A degree-drop space of dimension `deg F` if one exists (linear scope
/// suffices: an affine space drops iff its linear part does).
pub fn full_stability_witness(f: &VectorialFunction, opts: &ScanOptions) -> Result<Option<AffineSubspace>> {
    let r = require_nonconstant(f)?;
    if r >= f.n() {
        return Ok(None);
    }
    find_drop_space(f, f.n() - r, Scope::Linear, opts)
}

/// No affine space of dimension `deg F` (hence of any larger dimension) is a
/// degree-drop space.
pub fn full_stability(f: &VectorialFunction, opts: &ScanOptions) -> Result<bool> {
    Ok(full_stability_witness(f, opts)?.is_none())
}

/// Every derivative `D_a F`, `a != 0`, is 2-to-1.
pub fn is_apn(f: &VectorialFunction) -> Result<bool> {
    if f.n() != f.m() {
        return Err(invalid!("APN needs n = m, got ({}, {})", f.n(), f.m()));
    }
    let size = 1usize << f.n();
    let table = f.table();
    let mut seen = vec![0u32; size];
    let mut stamp = 0u32;
    for a in 1..size {
        stamp += 1;
        // x and x + a give the same value, so visit only x < x + a
        for x in 0..size {
            let y = x ^ a;
            if y < x {
                continue;
            }
            let v = (table[x] ^ table[y]) as usize;
            if seen[v] == stamp {
                return Ok(false);
            }
            seen[v] = stamp;
        }
    }
    Ok(true)
}

/// Two independently computed sides of an equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Equivalence {
    pub left: bool,
    pub right: bool,
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        self.left == self.right
    }
}

/// For quadratic `F`: (no 2-dimensional degree-drop space) vs (APN).
pub fn quadratic_stability_sides(f: &VectorialFunction, opts: &ScanOptions) -> Result<Equivalence> {
    if f.degree() != Degree::Finite(2) {
        return Err(invalid!("quadratic check needs a degree-2 function, got degree {}", f.degree()));
    }
    let apn = is_apn(f)?;
    let stable = find_drop_space(f, f.n() - 2, Scope::Affine, opts)?.is_none();
    Ok(Equivalence { left: stable, right: apn })
}

pub fn quadratic_stability_equals_apn(f: &VectorialFunction, opts: &ScanOptions) -> Result<bool> {
    Ok(quadratic_stability_sides(f, opts)?.holds())
}

fn require_homogeneous(f: &VectorialFunction) -> Result<u32> {
    let r = require_nonconstant(f)?;
    if !f.is_homogeneous() {
        return Err(invalid!("the function must be homogeneous"));
    }
    if r >= f.n() {
        return Err(invalid!("degree {r} must be below n = {}", f.n()));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectionDuality {
    pub drop_directions: Vec<u32>,
    pub complement_fast_points: Vec<u32>,
}

impl DirectionDuality {
    pub fn holds(&self) -> bool {
        self.drop_directions == self.complement_fast_points
    }
}

/// Degree-drop hyperplane directions of homogeneous `F` next to the fast
/// points of `F^c`.
pub fn drop_fast_sides(f: &VectorialFunction) -> Result<DirectionDuality> {
    require_homogeneous(f)?;
    Ok(DirectionDuality {
        drop_directions: drop_hyperplane_directions(f)?,
        complement_fast_points: f.complement()?.fast_points()?,
    })
}

pub fn drop_fast_duality(f: &VectorialFunction) -> Result<bool> {
    Ok(drop_fast_sides(f)?.holds())
}

/// `{a_i . x = 0}` is a degree-drop space of `F` vs
/// `deg(D_{a_1..a_k} F^c) < deg(F^c) - k`.
pub fn fast_space_sides(f: &VectorialFunction, dirs: &[u32]) -> Result<Equivalence> {
    let r = require_homogeneous(f)?;
    let n = f.n();
    let k = dirs.len() as u32;
    if k == 0 || k > n - r {
        return Err(invalid!("need 1 <= k <= n - deg F = {}, got k = {k}", n - r));
    }
    if dirs.iter().any(|&a| a == 0 || a >> n != 0) || !is_independent(dirs) {
        return Err(invalid!("directions must be independent vectors of F_2^{n}"));
    }
    let space = AffineSubspace::linear_only(LinearSubspace::from_normals(n, dirs)?);
    let left = restriction_degree(f, &space)? < Degree::Finite(r);
    let c = f.complement()?;
    let right = c.higher_derivative(dirs)?.degree() < Degree::Finite(n - r - k);
    Ok(Equivalence { left, right })
}

pub fn fast_space_duality(f: &VectorialFunction, dirs: &[u32]) -> Result<bool> {
    Ok(fast_space_sides(f, dirs)?.holds())
}

/// Smallest affine restriction degree for every dimension `1..deg F`.
///
/// A function has `deg(F|A) = dim A` on every affine space of dimension below
/// its degree exactly when each entry equals its dimension. Whether this can
/// happen for degree above 2 is not settled; this only reports what a search
/// finds.
pub fn low_dimension_profile(f: &VectorialFunction, opts: &ScanOptions) -> Result<Vec<(u32, Degree)>> {
    let r = require_nonconstant(f)?;
    let n = f.n();
    (1..r)
        .map(|dim| Ok((dim, scan(f, n - dim, Scope::Affine, opts)?.min_degree)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::linalg::BitMatrix;
    use crate::subspace::enumerate_affine;
    use proptest::prelude::*;

    fn seeded(seed: u64, n: u32, m: u32) -> VectorialFunction {
        let mut s = seed;
        let t: Vec<u32> = (0..1u32 << n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 33) as u32
            })
            .collect();
        VectorialFunction::from_fn(n, m, |x| t[x as usize]).unwrap()
    }

    fn invertible(n: u32, seed: u64) -> BitMatrix {
        let mut s = seed;
        loop {
            let rows = (0..n)
                .map(|_| {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((s >> 35) as u32) & ((1 << n) - 1)
                })
                .collect();
            let m = BitMatrix::from_rows(rows);
            if m.is_invertible() {
                return m;
            }
        }
    }

    fn opts() -> ScanOptions {
        ScanOptions::default()
    }

    #[test]
    fn small_dimension_always_drops() {
        let ctx = FieldCtx::new(6, None).unwrap();
        let f = VectorialFunction::power(&ctx, 0b11111);
        for s in enumerate_affine(6, 3).unwrap() {
            assert!(is_degree_drop(&f, &s).unwrap());
        }
        let c = VectorialFunction::new(3, 1, vec![1; 8]).unwrap();
        assert!(is_degree_drop(&c, &AffineSubspace::whole(3)).is_err());
    }

    #[test]
    fn inverse_n7_codim2_single_bucket() {
        let ctx = FieldCtx::new(7, None).unwrap();
        let rep = scan(&VectorialFunction::inverse(&ctx), 2, Scope::Linear, &opts()).unwrap();
        assert_eq!(rep.histogram.len(), 1);
        assert_eq!(rep.histogram[0], HistogramBin { degree: Degree::Finite(5), count: 2667 });
        assert_eq!(rep.drop_count, 2667);
    }

    #[test]
    fn inverse_n8_codim2_and_codim1() {
        let ctx = FieldCtx::new(8, None).unwrap();
        let inv = VectorialFunction::inverse(&ctx);
        let rep = scan(&inv, 2, Scope::Linear, &opts()).unwrap();
        assert_eq!(rep.histogram_map(), [(Degree::Finite(6), 10710), (Degree::Finite(5), 85)].into());
        assert_eq!(rep.extremal.len(), 85);
        assert!(!rep.extremal_truncated);
        let h = scan(&inv, 1, Scope::Linear, &opts()).unwrap();
        assert_eq!(h.drop_count, 0);
        assert_eq!(h.total, 255);
        let json = rep.to_json();
        assert!(json.contains("\"count\": 10710"));
    }

    #[test]
    fn scan_is_worker_independent() {
        let f = seeded(7, 7, 3).homogeneous_part(4);
        let base = scan(&f, 2, Scope::Affine, &ScanOptions { extremal_limit: 17, ..opts() }).unwrap();
        for w in [1, 2, 3] {
            let o = ScanOptions { workers: w, extremal_limit: 17, override_caps: false };
            assert_eq!(scan(&f, 2, Scope::Affine, &o).unwrap(), base);
        }
        // sequential reference
        let mut hist = BTreeMap::new();
        let mut ext = Vec::new();
        let mut min = None;
        for s in enumerate_affine(7, 2).unwrap() {
            let d = restriction_degree(&f, &s).unwrap();
            *hist.entry(d).or_insert(0u64) += 1;
            if min.is_none_or(|m| d < m) {
                min = Some(d);
                ext.clear();
            }
            if Some(d) == min && ext.len() < 17 {
                ext.push(s);
            }
        }
        assert_eq!(base.histogram_map(), hist);
        assert_eq!(base.extremal, ext);
    }

    #[test]
    fn scan_rejects_constant_and_caps() {
        let c = VectorialFunction::new(4, 2, vec![3; 16]).unwrap();
        assert!(matches!(scan(&c, 1, Scope::Linear, &opts()), Err(Error::InvalidParameter(_))));
        let ctx = FieldCtx::new(12, None).unwrap();
        let f = VectorialFunction::power(&ctx, 3);
        assert!(matches!(scan(&f, 5, Scope::Linear, &opts()), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn x1_times_drop_free() {
        // F = x1 * G with G = x2 x3 + x4 x5, which has no degree-drop
        // hyperplane in its own four variables
        let g_bent = |x: u32| ((x >> 1) & (x >> 2) & 1) ^ ((x >> 3) & (x >> 4) & 1);
        let g = VectorialFunction::from_fn(5, 1, |x| g_bent(x)).unwrap();
        let g4 = VectorialFunction::from_fn(4, 1, |y| g_bent(y << 1)).unwrap();
        assert!(hyperplane_drop_space(&g4).unwrap().dim() == 0);
        let f = VectorialFunction::from_fn(5, 1, |x| (x & 1) & g.eval(x)).unwrap();
        let v = hyperplane_drop_space(&f).unwrap();
        assert_eq!(v.basis, vec![1]);
        assert!(v.contains(1) && !v.contains(2));
    }

    #[test]
    fn trivial_v_f() {
        let ctx = FieldCtx::new(5, None).unwrap();
        let v = hyperplane_drop_space(&VectorialFunction::inverse(&ctx)).unwrap();
        assert_eq!(v.dim(), 0);
        assert!(v.members.is_empty());
    }

    #[test]
    fn v_f_closure_exhaustive() {
        for seed in 0..40u64 {
            for n in 2..=6 {
                let r = 1 + (seed as u32 % (n - 1));
                let f = seeded(seed, n, 2).homogeneous_part(r);
                if f.is_constant() {
                    continue;
                }
                let v = hyperplane_drop_space(&f).unwrap();
                for &a in &v.members {
                    for &b in &v.members {
                        assert!(a == b || v.contains(a ^ b));
                    }
                }
            }
        }
    }

    #[test]
    fn full_stability_examples() {
        // injective linear maps
        for seed in 0..5 {
            let m = invertible(5, seed);
            let f = VectorialFunction::from_fn(5, 5, |x| m.apply(x)).unwrap();
            assert!(full_stability(&f, &opts()).unwrap());
        }
        // non-injective linear map
        let proj = VectorialFunction::from_fn(4, 4, |x| x & 0b0111).unwrap();
        assert!(!full_stability(&proj, &opts()).unwrap());
        for n in 2..=6 {
            let ctx = FieldCtx::new(n, None).unwrap();
            for j in 1..=n {
                let f = VectorialFunction::power(&ctx, (1u64 << j) - 1);
                assert!(full_stability(&f, &opts()).unwrap(), "n = {n}, j = {j}");
            }
        }
        // Boolean functions of degree below n always have a drop space
        for seed in 0..20u64 {
            let n = 3 + (seed as u32 % 3);
            let f = seeded(seed, n, 1).homogeneous_part(1 + seed as u32 % (n - 1));
            if f.is_constant() {
                continue;
            }
            assert!(!full_stability(&f, &opts()).unwrap());
        }
    }

    #[test]
    fn apn_examples() {
        for n in [4u32, 5] {
            let ctx = FieldCtx::new(n, None).unwrap();
            assert!(is_apn(&VectorialFunction::power(&ctx, 3)).unwrap());
        }
        let ctx4 = FieldCtx::new(4, None).unwrap();
        assert!(!is_apn(&VectorialFunction::power(&ctx4, 5)).unwrap());
        let lin = VectorialFunction::from_fn(4, 4, |x| x ^ (x >> 1)).unwrap();
        assert!(!is_apn(&lin).unwrap());
        assert!(is_apn(&VectorialFunction::new(3, 1, vec![0; 8]).unwrap()).is_err());
    }

    /// APN by pair counting: the number of (x, y) with D_a F(x) = D_a F(y)
    /// must be exactly 2 * 2^n per direction.
    fn apn_by_collisions(f: &VectorialFunction) -> bool {
        let n = f.n();
        (1..1u32 << n).all(|a| {
            let mut counts = vec![0u32; 1 << n];
            for x in 0..1u32 << n {
                counts[(f.eval(x) ^ f.eval(x ^ a)) as usize] += 1;
            }
            counts.iter().map(|c| c * c).sum::<u32>() == 2 << n
        })
    }

    #[test]
    fn quadratic_examples() {
        let ctx5 = FieldCtx::new(5, None).unwrap();
        let s = quadratic_stability_sides(&VectorialFunction::power(&ctx5, 3), &opts()).unwrap();
        assert_eq!(s, Equivalence { left: true, right: true });
        let ctx4 = FieldCtx::new(4, None).unwrap();
        let s = quadratic_stability_sides(&VectorialFunction::power(&ctx4, 5), &opts()).unwrap();
        assert_eq!(s, Equivalence { left: false, right: false });
        let cube = VectorialFunction::power(&ctx4, 7);
        assert!(quadratic_stability_sides(&cube, &opts()).is_err());
        for seed in 0..60u64 {
            let f = seeded(seed, 4, 4).homogeneous_part(2);
            if f.degree() != Degree::Finite(2) {
                continue;
            }
            assert_eq!(is_apn(&f).unwrap(), apn_by_collisions(&f));
            assert!(quadratic_stability_equals_apn(&f, &opts()).unwrap());
        }
    }

    #[test]
    fn duality_examples() {
        let f = VectorialFunction::from_fn(3, 1, |x| ((x & 3) == 3) as u32).unwrap();
        let s = drop_fast_sides(&f).unwrap();
        // x1 x2 drops on H_a iff a lies in span(e1, e2); x3 has fast points
        // exactly at the non-zero vectors with a_3 = 0
        assert_eq!(s.drop_directions, vec![1, 2, 3]);
        assert!(s.holds());
        let top = VectorialFunction::from_fn(3, 1, |x| (x == 7) as u32).unwrap();
        assert!(drop_fast_duality(&top).is_err());
        let cube = VectorialFunction::from_fn(5, 1, |x| ((x & 7) == 7) as u32).unwrap();
        let e = fast_space_sides(&cube, &[8, 16]).unwrap();
        assert!(e.holds());
        assert!(fast_space_sides(&cube, &[8, 8]).is_err());
        assert!(fast_space_sides(&cube, &[1, 2, 4]).is_err());
        for a in 1..32 {
            assert_eq!(
                fast_space_duality(&cube, &[a]).unwrap(),
                drop_fast_duality(&cube).unwrap()
            );
        }
    }

    #[test]
    fn duality_exhaustive() {
        for seed in 0..30u64 {
            for n in 2..=5u32 {
                for r in 1..n {
                    let f = seeded(seed * 31 + r as u64, n, 2).homogeneous_part(r);
                    if f.is_zero() {
                        continue;
                    }
                    assert!(drop_fast_duality(&f).unwrap(), "n = {n}, r = {r}");
                    if n - r >= 2 {
                        for a in 1..1u32 << n {
                            for b in a + 1..1u32 << n {
                                if (seed + a as u64 + b as u64) % 7 != 0 {
                                    continue;
                                }
                                assert!(fast_space_duality(&f, &[a, b]).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn homogeneous_part_decides_drops() {
        for seed in 0..12u64 {
            for n in 2..=5 {
                let f = seeded(seed, n, 3);
                let r = match f.degree() {
                    Degree::Finite(r) if r >= 1 => r,
                    _ => continue,
                };
                let g = f.homogeneous_part(r);
                for k in 1..=2.min(n) {
                    for s in enumerate_affine(n, k).unwrap() {
                        assert_eq!(is_degree_drop(&f, &s).unwrap(), is_degree_drop(&g, &s).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_invariance() {
        for seed in 0..10u64 {
            for n in 3..=5u32 {
                let m = 3;
                let f = seeded(seed, n, m);
                let r = match f.degree() {
                    Degree::Finite(r) if r >= 2 => r,
                    _ => continue,
                };
                let inner = invertible(n, seed ^ 0x55);
                let outer = invertible(m, seed ^ 0xaa);
                let shift = (seed as u32 * 7) & ((1 << n) - 1);
                // an output translation can turn a zero restriction into a
                // constant one, so exact histograms are compared without it
                let linear = f.affine_transform(&inner, 0, &outer, 0).unwrap();
                let affine = f.affine_transform(&inner, shift, &outer, 0).unwrap();
                let translated = f.affine_transform(&inner, shift, &outer, 5).unwrap();
                // low-degree perturbation: a random function of degree < r
                let mut low = seeded(seed + 99, n, m).anf_dense();
                for (i, c) in low.iter_mut().enumerate() {
                    if (i as u32).count_ones() >= r {
                        *c = 0;
                    }
                }
                let low = VectorialFunction::from_anf_dense(n, m, &low).unwrap();
                let perturbed = translated.add(&low).unwrap();
                for k in 1..=2 {
                    let lin_f = scan(&f, k, Scope::Linear, &opts()).unwrap();
                    let aff_f = scan(&f, k, Scope::Affine, &opts()).unwrap();
                    // a linear change of variables permutes linear subspaces
                    assert_eq!(scan(&linear, k, Scope::Linear, &opts()).unwrap().histogram, lin_f.histogram);
                    // an affine one permutes affine subspaces
                    assert_eq!(scan(&affine, k, Scope::Affine, &opts()).unwrap().histogram, aff_f.histogram);
                    // adding lower-degree terms can move individual restriction
                    // degrees but never changes which subspaces drop
                    let p = scan(&perturbed, k, Scope::Affine, &opts()).unwrap();
                    assert_eq!(p.drop_count, aff_f.drop_count);
                }
            }
        }
    }

    #[test]
    fn monotone_in_dimension() {
        for seed in 0..8u64 {
            let f = seeded(seed, 6, 2).homogeneous_part(3);
            if f.is_zero() {
                continue;
            }
            let mut prev_none = false;
            // codim 3 is dimension 3 = deg F; larger dimensions follow
            for k in (0..=3).rev() {
                let none = find_drop_space(&f, k, Scope::Linear, &opts()).unwrap().is_none();
                if prev_none {
                    assert!(none, "drop-free at lower dimension but not at codim {k}");
                }
                prev_none = none;
            }
        }
    }

    #[test]
    fn modulus_independence() {
        // x^7 and the inverse under the two lowest irreducible degree-6 moduli
        let a = FieldCtx::new(6, Some(0b1000011)).unwrap();
        let b = FieldCtx::new(6, Some(0b1011011)).unwrap();
        for d in [7u64, 62, 11, 21] {
            for k in 1..=3 {
                let ha = scan(&VectorialFunction::power(&a, d), k, Scope::Linear, &opts()).unwrap();
                let hb = scan(&VectorialFunction::power(&b, d), k, Scope::Linear, &opts()).unwrap();
                assert_eq!(ha.histogram, hb.histogram, "d = {d}, k = {k}");
            }
        }
    }

    #[test]
    fn low_dimension_profile_of_gold() {
        let ctx = FieldCtx::new(5, None).unwrap();
        let prof = low_dimension_profile(&VectorialFunction::power(&ctx, 3), &opts()).unwrap();
        assert_eq!(prof, vec![(1, Degree::Finite(1))]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn find_matches_scan(seed in any::<u64>(), n in 3u32..6, r in 1u32..5, k in 1u32..3) {
            let r = r.min(n - 1);
            let f = seeded(seed, n, 2).homogeneous_part(r);
            prop_assume!(!f.is_constant());
            let rep = scan(&f, k, Scope::Linear, &ScanOptions::default()).unwrap();
            let first = find_drop_space(&f, k, Scope::Linear, &ScanOptions::default()).unwrap();
            prop_assert_eq!(rep.has_drop(), first.is_some());
            if let Some(s) = first {
                prop_assert!(is_degree_drop(&f, &s).unwrap());
            }
        }
    }
}
