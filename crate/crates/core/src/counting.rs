//! Exact counts of homogeneous vectorial functions by the dimension of their
//! degree-drop hyperplane space or fast-point space, plus an enumeration
//! census to check them against.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::degree_drop::ScanOptions;
use crate::error::{invalid, Error, Result};
use crate::subspace::{gaussian_binomial, MAX_AMBIENT};

/// Largest `m * C(n, r)` accepted by the enumeration census.
pub const BRUTE_FORCE_MAX_BITS: u64 = 24;
/// Largest exponent `m * C(n, r)` the closed forms will expand.
pub const FORMULA_MAX_EXPONENT: u64 = 1 << 22;

/// What is being counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    DropHyperplanes,
    FastPoints,
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::DropHyperplanes => "drop-hyperplanes",
            CountMode::FastPoints => "fast-points",
        })
    }
}

impl FromStr for CountMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drop-hyperplanes" | "drop" => Ok(CountMode::DropHyperplanes),
            "fast-points" | "fast" => Ok(CountMode::FastPoints),
            _ => Err(invalid!("unknown count mode {s:?} (drop-hyperplanes or fast-points)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CountQuery {
    pub n: u32,
    pub m: u32,
    pub r: u32,
    /// Exact dimension of the drop-hyperplane direction space (or fast-point space).
    pub j: Option<u32>,
    pub homogeneous: bool,
}

impl CountQuery {
    pub fn new(n: u32, m: u32, r: u32) -> Self {
        CountQuery { n, m, r, j: None, homogeneous: true }
    }

    pub fn with_j(mut self, j: u32) -> Self {
        self.j = Some(j);
        self
    }

    pub fn non_homogeneous(mut self) -> Self {
        self.homogeneous = false;
        self
    }

    pub fn validate(&self, mode: CountMode) -> Result<()> {
        let CountQuery { n, m, r, j, .. } = *self;
        if n == 0 || m == 0 {
            return Err(invalid!("n and m must be positive"));
        }
        let top = match mode {
            CountMode::DropHyperplanes => {
                if r == 0 || r > n {
                    return Err(invalid!("degree r = {r} outside 1..={n}"));
                }
                r
            }
            CountMode::FastPoints => {
                if r == 0 || r >= n {
                    return Err(invalid!("fast points need 1 <= r <= n-1, got r = {r}, n = {n}"));
                }
                n - r
            }
        };
        if let Some(j) = j {
            if j > top {
                return Err(invalid!("dimension j = {j} outside 0..={top}"));
            }
        }
        let e = m as u128 * binomial(n, r);
        if e > FORMULA_MAX_EXPONENT as u128 {
            return Err(Error::CapExceeded(format!("m*C(n,r) = {e} exceeds {FORMULA_MAX_EXPONENT}")));
        }
        Ok(())
    }
}

pub fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let mut c = 1u128;
    for i in 0..k {
        c = c * (n as u128 - i) / (i + 1);
    }
    c
}

fn pow2(e: u128) -> BigInt {
    BigInt::one() << (e as usize)
}

/// `sum_{i=0}^{t} (-1)^i 2^(i(i-1)/2) [n i]_2 (2^(m C(n-i, sub(i))) - 1)`,
/// evaluated exactly.
fn inclusion_exclusion(n: u32, m: u32, r: u32, t: u32, sub: impl Fn(u32) -> u32) -> Result<BigUint> {
    let mut acc = BigInt::zero();
    for i in 0..=t {
        let g = BigInt::from(gaussian_binomial(n, i, 2)?);
        let term = ((pow2(m as u128 * binomial(n - i, sub(i))) - 1) * g) << ((i * i.saturating_sub(1) / 2) as usize);
        if i % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    match acc.sign() {
        Sign::Minus => Err(Error::Consistency(format!("negative count for n = {n}, m = {m}, r = {r}"))),
        _ => Ok(acc.to_biguint().expect("non-negative")),
    }
}

fn lower_degree_multiplier(q: &CountQuery) -> BigUint {
    let e: u128 = (0..q.r).map(|d| binomial(q.n, d)).sum::<u128>() * q.m as u128;
    BigUint::one() << (e as usize)
}

fn finish(q: &CountQuery, homogeneous_count: BigUint) -> BigUint {
    if q.homogeneous {
        homogeneous_count
    } else {
        homogeneous_count * lower_degree_multiplier(q)
    }
}

/// Homogeneous degree-`r` functions with no degree-drop hyperplane.
pub fn count_no_drop_hyperplane(q: &CountQuery) -> Result<BigUint> {
    q.validate(CountMode::DropHyperplanes)?;
    let (n, m, r) = (q.n, q.m, q.r);
    Ok(finish(q, inclusion_exclusion(n, m, r, r, |i| r - i)?))
}

/// Homogeneous degree-`r` functions whose drop-direction space has dimension `j`.
pub fn count_exact_drop_dimension(q: &CountQuery) -> Result<BigUint> {
    q.validate(CountMode::DropHyperplanes)?;
    let j = q.j.ok_or_else(|| invalid!("exact-dimension count needs j"))?;
    let (n, m, r) = (q.n, q.m, q.r);
    let inner = inclusion_exclusion(n - j, m, r - j, r - j, |i| r - j - i)?;
    Ok(finish(q, gaussian_binomial(n, j, 2)? * inner))
}

/// Homogeneous degree-`r` functions without fast points.
pub fn count_no_fast_points(q: &CountQuery) -> Result<BigUint> {
    q.validate(CountMode::FastPoints)?;
    let (n, m, r) = (q.n, q.m, q.r);
    Ok(finish(q, inclusion_exclusion(n, m, r, n - r, |i| n - r - i)?))
}

/// Homogeneous degree-`r` functions with exactly `2^j - 1` fast points.
pub fn count_exact_fast_dimension(q: &CountQuery) -> Result<BigUint> {
    q.validate(CountMode::FastPoints)?;
    let j = q.j.ok_or_else(|| invalid!("exact-dimension count needs j"))?;
    let (n, m, r) = (q.n, q.m, q.r);
    let inner = inclusion_exclusion(n - j, m, r, n - r - j, |i| n - r - j - i)?;
    Ok(finish(q, gaussian_binomial(n, j, 2)? * inner))
}

/// Dispatch on mode and on whether `j` is set.
pub fn count(q: &CountQuery, mode: CountMode) -> Result<BigUint> {
    match (mode, q.j) {
        (CountMode::DropHyperplanes, None) => count_no_drop_hyperplane(q),
        (CountMode::DropHyperplanes, Some(_)) => count_exact_drop_dimension(q),
        (CountMode::FastPoints, None) => count_no_fast_points(q),
        (CountMode::FastPoints, Some(_)) => count_exact_fast_dimension(q),
    }
}

/// All counts for `j = 0..=top`, keyed by `j`.
pub fn count_histogram(n: u32, m: u32, r: u32, mode: CountMode) -> Result<BTreeMap<u32, BigUint>> {
    let q = CountQuery::new(n, m, r);
    q.validate(mode)?;
    let top = match mode {
        CountMode::DropHyperplanes => r,
        CountMode::FastPoints => n - r,
    };
    (0..=top).map(|j| Ok((j, count(&q.with_j(j), mode)?))).collect()
}

/// Number of non-zero homogeneous `(n, m)`-functions of degree `r`.
pub fn total_homogeneous(n: u32, m: u32, r: u32) -> Result<BigUint> {
    CountQuery::new(n, m, r).validate(CountMode::DropHyperplanes)?;
    Ok((BigUint::one() << (m as u128 * binomial(n, r)) as usize) - 1u32)
}

/// A ratio of big integers in lowest terms plus its base-2 logarithm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Proportion {
    pub numerator: String,
    pub denominator: String,
    pub log2: f64,
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("fits").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift as usize).to_f64().expect("fits");
    top.log2() + shift as f64
}

pub fn proportion(count: &BigUint, total: &BigUint) -> Result<Proportion> {
    if total.is_zero() || count.is_zero() {
        return Err(invalid!("proportion needs positive count and total"));
    }
    let g = count.gcd(total);
    Ok(Proportion {
        numerator: (count / &g).to_string(),
        denominator: (total / &g).to_string(),
        log2: log2_big(count) - log2_big(total),
    })
}

/// `T(n) = sum_k (-1)^k 2^(k(k-1)/2) [n k]_2 S(n-k)`.
pub fn inversion_transform(s: &[BigInt]) -> Result<Vec<BigInt>> {
    (0..s.len() as u32)
        .map(|n| {
            let mut t = BigInt::zero();
            for k in 0..=n {
                let term = (BigInt::from(gaussian_binomial(n, k, 2)?) * &s[(n - k) as usize])
                    << ((k * k.saturating_sub(1) / 2) as usize);
                if k % 2 == 0 {
                    t += term;
                } else {
                    t -= term;
                }
            }
            Ok(t)
        })
        .collect()
}

/// `S(n) = sum_k [n k]_2 T(k)`.
pub fn gaussian_sum_transform(t: &[BigInt]) -> Result<Vec<BigInt>> {
    (0..t.len() as u32)
        .map(|n| {
            let mut s = BigInt::zero();
            for k in 0..=n {
                s += BigInt::from(gaussian_binomial(n, k, 2)?) * &t[k as usize];
            }
            Ok(s)
        })
        .collect()
}

/// Round trip `S -> T -> S` is exact for all `n <= n_max`.
pub fn inversion_lemma_check(s: &[BigInt], n_max: usize) -> bool {
    if s.len() <= n_max {
        return false;
    }
    let s = &s[..=n_max];
    match inversion_transform(s).and_then(|t| gaussian_sum_transform(&t)) {
        Ok(back) => back == s,
        Err(_) => false,
    }
}

/// Degree-`r` monomials of `n` variables as sorted variable masks.
fn monomials(n: u32, r: u32) -> Vec<u32> {
    fn rec(n: u32, left: u32, start: u32, acc: u32, out: &mut Vec<u32>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..=n - left {
            rec(n, left - 1, i + 1, acc | 1 << i, out);
        }
    }
    let mut out = Vec::new();
    rec(n, r, 0, 0, &mut out);
    out.sort_unstable();
    out
}

/// GF(2) row basis keyed by the highest set bit.
struct RowBasis {
    rows: [u32; 32],
    rank: u32,
}

impl RowBasis {
    fn new() -> Self {
        RowBasis { rows: [0; 32], rank: 0 }
    }

    fn insert(&mut self, mut v: u32) {
        while v != 0 {
            let h = 31 - v.leading_zeros() as usize;
            if self.rows[h] == 0 {
                self.rows[h] = v;
                self.rank += 1;
                return;
            }
            v ^= self.rows[h];
        }
    }

    fn spans(&self, mut v: u32) -> bool {
        while v != 0 {
            let h = 31 - v.leading_zeros() as usize;
            if self.rows[h] == 0 {
                return false;
            }
            v ^= self.rows[h];
        }
        true
    }
}

/// XOR-merges `(key, bits)` pairs with equal keys and feeds the rows to `b`.
fn merge_rows(buf: &mut [(u32, u32)], b: &mut RowBasis) {
    buf.sort_unstable_by_key(|e| e.0);
    let mut i = 0;
    while i < buf.len() {
        let (key, mut row) = buf[i];
        i += 1;
        while i < buf.len() && buf[i].0 == key {
            row ^= buf[i].1;
            i += 1;
        }
        b.insert(row);
    }
}

/// Number of non-zero `a` for which `H_a` is a degree-drop hyperplane of the
/// degree-`r` homogeneous function whose coordinates have supports `coords`.
///
/// For `a` with highest set bit `p`, restricting to `H_a` substitutes
/// `x_p = sum_{i<p} a_i x_i`; the degree-`r` coefficients of the result are
/// affine in `(a_0, ..., a_{p-1})`, so each `p` contributes the size of an
/// affine solution set. Bit `p` of a row holds the constant term.
fn drop_direction_count(n: u32, coords: &[Vec<u32>], buf: &mut Vec<(u32, u32)>) -> u64 {
    let mut total = 0u64;
    for p in 0..n {
        let pb = 1u32 << p;
        let mut basis = RowBasis::new();
        for supp in coords {
            buf.clear();
            for &s in supp {
                if s & pb == 0 {
                    buf.push((s, pb));
                } else {
                    let t = s ^ pb;
                    let mut free = !t & (pb - 1);
                    while free != 0 {
                        let i = free & free.wrapping_neg();
                        buf.push((t | i, i));
                        free ^= i;
                    }
                }
            }
            merge_rows(buf, &mut basis);
        }
        if !basis.spans(pb) {
            total += 1u64 << (p - basis.rank);
        }
    }
    total
}

/// Dimension of the fast-point space: the kernel of `a -> sum_i a_i dF/dx_i`
/// on the top-degree part.
fn fast_space_dim(n: u32, coords: &[Vec<u32>], buf: &mut Vec<(u32, u32)>) -> u32 {
    let mut basis = RowBasis::new();
    for supp in coords {
        buf.clear();
        for &s in supp {
            let mut bits = s;
            while bits != 0 {
                let i = bits & bits.wrapping_neg();
                buf.push((s ^ i, i));
                bits ^= i;
            }
        }
        merge_rows(buf, &mut basis);
    }
    n - basis.rank
}

/// Census of all non-zero homogeneous `(n, m)`-functions of degree `r`,
/// histogrammed by the dimension of the drop-direction space or of the
/// fast-point space.
pub fn brute_force_count(n: u32, m: u32, r: u32, mode: CountMode, opts: &ScanOptions) -> Result<BTreeMap<u32, u64>> {
    CountQuery::new(n, m, r).validate(mode)?;
    if n > MAX_AMBIENT {
        return Err(Error::CapExceeded(format!("census limited to n <= {MAX_AMBIENT}")));
    }
    let big_n = binomial(n, r) as u64;
    let bits = m as u64 * big_n;
    if bits > BRUTE_FORCE_MAX_BITS {
        return Err(Error::CapExceeded(format!(
            "census needs m*C(n,r) <= {BRUTE_FORCE_MAX_BITS}, got {bits}"
        )));
    }
    let mons = monomials(n, r);
    let total = 1u64 << bits;
    let chunk = (total / 1024).max(1);
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(chunk)).map(|c| (c * chunk, ((c + 1) * chunk).min(total))).collect();
    let coef_mask = (1u64 << big_n) - 1;
    let hist = opts.install(|| {
        chunks
            .par_iter()
            .map(|&(lo, hi)| -> Result<[u64; 33]> {
                let mut h = [0u64; 33];
                let mut coords: Vec<Vec<u32>> = vec![Vec::new(); m as usize];
                let mut buf = Vec::new();
                for c in lo.max(1)..hi {
                    for (k, supp) in coords.iter_mut().enumerate() {
                        supp.clear();
                        let mut w = (c >> (k as u64 * big_n)) & coef_mask;
                        while w != 0 {
                            supp.push(mons[w.trailing_zeros() as usize]);
                            w &= w - 1;
                        }
                    }
                    let j = match mode {
                        CountMode::DropHyperplanes => {
                            let cnt = drop_direction_count(n, &coords, &mut buf);
                            if !(cnt + 1).is_power_of_two() {
                                return Err(Error::Consistency(format!(
                                    "{cnt} drop directions do not form a subspace"
                                )));
                            }
                            (cnt + 1).trailing_zeros()
                        }
                        CountMode::FastPoints => fast_space_dim(n, &coords, &mut buf),
                    };
                    h[j as usize] += 1;
                }
                Ok(h)
            })
            .try_reduce(
                || [0u64; 33],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    Ok(a)
                },
            )
    })??;
    Ok(hist.iter().enumerate().filter(|(_, &c)| c > 0).map(|(j, &c)| (j as u32, c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{Degree, VectorialFunction};
    use crate::degree_drop::drop_hyperplane_directions;
    use proptest::prelude::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Census through truth tables: restriction degrees and derivatives.
    fn table_census(n: u32, m: u32, r: u32, mode: CountMode) -> BTreeMap<u32, u64> {
        let mons = monomials(n, r);
        let nb = mons.len() as u32;
        let mut h = BTreeMap::new();
        for c in 1u64..1 << (m * nb) {
            let mut anf = vec![0u32; 1 << n];
            for k in 0..m {
                for (t, &s) in mons.iter().enumerate() {
                    if c >> (k * nb + t as u32) & 1 == 1 {
                        anf[s as usize] |= 1 << k;
                    }
                }
            }
            let f = VectorialFunction::from_anf_dense(n, m, &anf).unwrap();
            assert_eq!(f.degree(), Degree::Finite(r));
            let cnt = match mode {
                CountMode::DropHyperplanes => drop_hyperplane_directions(&f).unwrap().len() as u64,
                CountMode::FastPoints => f.fast_points().unwrap().len() as u64,
            };
            assert!((cnt + 1).is_power_of_two());
            *h.entry((cnt + 1).trailing_zeros()).or_insert(0) += 1;
        }
        h
    }

    fn as_u64(h: BTreeMap<u32, BigUint>) -> BTreeMap<u32, u64> {
        h.into_iter().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.to_u64().unwrap())).collect()
    }

    #[test]
    fn symbolic_census_matches_tables() {
        let o = ScanOptions::default();
        for n in 1..=5u32 {
            for r in 1..=n {
                for m in 1..=3u32 {
                    if m as u128 * binomial(n, r) > 12 {
                        continue;
                    }
                    let d = brute_force_count(n, m, r, CountMode::DropHyperplanes, &o).unwrap();
                    assert_eq!(d, table_census(n, m, r, CountMode::DropHyperplanes), "drop {n} {m} {r}");
                    if r < n {
                        let f = brute_force_count(n, m, r, CountMode::FastPoints, &o).unwrap();
                        assert_eq!(f, table_census(n, m, r, CountMode::FastPoints), "fast {n} {m} {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let o = ScanOptions::default();
        // all three homogeneous quadratics of F_2^2 -> F_2^2 drop on every hyperplane
        assert_eq!(brute_force_count(2, 2, 2, CountMode::DropHyperplanes, &o).unwrap(), BTreeMap::from([(2, 3)]));
        assert_eq!(count_exact_drop_dimension(&CountQuery::new(2, 2, 2).with_j(2)).unwrap(), big(3));
        let h = brute_force_count(4, 1, 2, CountMode::DropHyperplanes, &o).unwrap();
        assert_eq!(h.values().sum::<u64>(), 63);
        assert_eq!(h[&0], count_no_drop_hyperplane(&CountQuery::new(4, 1, 2)).unwrap().to_u64().unwrap());
        let h = brute_force_count(3, 1, 2, CountMode::DropHyperplanes, &o).unwrap();
        assert_eq!(h.values().sum::<u64>(), 7);
        let h = brute_force_count(4, 2, 3, CountMode::DropHyperplanes, &o).unwrap();
        assert_eq!(h.values().sum::<u64>(), 255);
        assert!(brute_force_count(6, 2, 3, CountMode::DropHyperplanes, &o).is_err());
        assert!(brute_force_count(4, 1, 4, CountMode::FastPoints, &o).is_err());
    }

    #[test]
    fn formulas_match_census() {
        let o = ScanOptions::default();
        for n in 1..=7u32 {
            for r in 1..=n {
                for m in 1..=4u32 {
                    if m as u128 * binomial(n, r) > 14 {
                        continue;
                    }
                    for mode in [CountMode::DropHyperplanes, CountMode::FastPoints] {
                        if mode == CountMode::FastPoints && r == n {
                            continue;
                        }
                        let census = brute_force_count(n, m, r, mode, &o).unwrap();
                        assert_eq!(census, as_u64(count_histogram(n, m, r, mode).unwrap()), "{mode} {n} {m} {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn mode_symmetry() {
        let o = ScanOptions::default();
        for n in 2..=6u32 {
            for r in 1..n {
                let m = 1;
                if binomial(n, r) > 16 {
                    continue;
                }
                assert_eq!(
                    brute_force_count(n, m, r, CountMode::DropHyperplanes, &o).unwrap(),
                    brute_force_count(n, m, n - r, CountMode::FastPoints, &o).unwrap()
                );
            }
        }
    }

    #[test]
    fn partition_and_duality() {
        for n in 1..=12u32 {
            for m in [1u32, 2, 5, 12] {
                for r in 1..=n {
                    let total = total_homogeneous(n, m, r).unwrap();
                    let sum: BigUint = count_histogram(n, m, r, CountMode::DropHyperplanes).unwrap().values().sum();
                    assert_eq!(sum, total, "{n} {m} {r}");
                    assert_eq!(
                        count_exact_drop_dimension(&CountQuery::new(n, m, r).with_j(0)).unwrap(),
                        count_no_drop_hyperplane(&CountQuery::new(n, m, r)).unwrap()
                    );
                    if r < n {
                        let fast = count_histogram(n, m, r, CountMode::FastPoints).unwrap();
                        let drop = count_histogram(n, m, n - r, CountMode::DropHyperplanes).unwrap();
                        assert_eq!(fast, drop, "{n} {m} {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn non_homogeneous_multiplier() {
        let q = CountQuery::new(4, 1, 2);
        let h = count_no_drop_hyperplane(&q).unwrap();
        let all = count_no_drop_hyperplane(&q.non_homogeneous()).unwrap();
        assert_eq!(all, h * big(1 << 5));
    }

    #[test]
    fn fast_point_rarity() {
        let q = CountQuery::new(6, 6, 3).with_j(3);
        let c = count_exact_fast_dimension(&q).unwrap();
        assert_eq!(c, big(1395 * 63));
        let p = proportion(&c, &total_homogeneous(6, 6, 3).unwrap()).unwrap();
        assert!(p.log2 > -104.0 && p.log2 < -102.0, "{}", p.log2);
        let (a, b): (BigUint, BigUint) = (p.numerator.parse().unwrap(), p.denominator.parse().unwrap());
        assert_eq!(a * total_homogeneous(6, 6, 3).unwrap(), b * c);
    }

    #[test]
    fn query_validation() {
        assert!(count_no_drop_hyperplane(&CountQuery::new(4, 1, 0)).is_err());
        assert!(count_no_drop_hyperplane(&CountQuery::new(4, 1, 5)).is_err());
        assert!(count_exact_drop_dimension(&CountQuery::new(4, 1, 2)).is_err());
        assert!(count_exact_drop_dimension(&CountQuery::new(4, 1, 2).with_j(3)).is_err());
        assert!(count_exact_fast_dimension(&CountQuery::new(4, 1, 2).with_j(3)).is_err());
        assert!(count_no_fast_points(&CountQuery::new(4, 1, 4)).is_err());
        assert!("sideways".parse::<CountMode>().is_err());
    }

    #[test]
    fn inversion_examples() {
        let ones: Vec<BigInt> = vec![BigInt::one(); 13];
        assert!(inversion_lemma_check(&ones, 12));
        let t = inversion_transform(&ones).unwrap();
        assert_eq!(t[0], BigInt::one());
        for (m, r) in [(1u32, 2u32), (3, 1), (2, 3)] {
            let s: Vec<BigInt> = (0..=10u32).map(|n| pow2(m as u128 * binomial(n, r)) - 1).collect();
            assert!(inversion_lemma_check(&s, 10));
        }
        assert!(!inversion_lemma_check(&ones, 13));
    }

    #[test]
    fn log2_of_huge_values() {
        let a = BigUint::one() << 300usize;
        let b = BigUint::from(3u32) << 10usize;
        let p = proportion(&b, &a).unwrap();
        assert!((p.log2 - (3f64.log2() + 10.0 - 300.0)).abs() < 1e-9);
        assert_eq!(p.denominator, (BigUint::one() << 290usize).to_string());
        assert_eq!(p.numerator, "3");
    }

    proptest! {
        #[test]
        fn inversion_round_trip(v in proptest::collection::vec(-1_000_000i64..1_000_000, 13)) {
            let s: Vec<BigInt> = v.into_iter().map(BigInt::from).collect();
            prop_assert!(inversion_lemma_check(&s, 12));
        }
    }
}
