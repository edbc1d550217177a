//! Inversions of Hamilton cycle sequences: counting, Lehmer codes, counting
//! formulas and thresholds, and the greedy low-inversion construction.

mod greedy;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use statrs::function::gamma::ln_gamma;

pub use greedy::{default_u_target, greedy_layer_probs, greedy_low_inversion, GreedyParams, GreedyTranscript};

use crate::error::{Error, Result};
use crate::ham::HamCycle;

/// Fenwick tree of counts over positions `1..=n`.
pub(crate) struct Fenwick {
    tree: Vec<u32>,
}

impl Fenwick {
    pub(crate) fn new(n: usize) -> Fenwick {
        Fenwick { tree: vec![0; n + 1] }
    }

    pub(crate) fn full(n: usize) -> Fenwick {
        let mut f = Fenwick::new(n);
        for i in 1..=n {
            f.add(i, 1);
        }
        f
    }

    pub(crate) fn add(&mut self, mut i: usize, delta: i32) {
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].wrapping_add_signed(delta);
            i += i & i.wrapping_neg();
        }
    }

    /// Sum over `1..=i`.
    pub(crate) fn prefix(&self, mut i: usize) -> u32 {
        let mut s = 0;
        while i > 0 {
            s += self.tree[i];
            i &= i - 1;
        }
        s
    }
}

/// Number of pairs `k < l` with `seq[k] > seq[l]`, for a permutation of
/// `1..=n`, by a Fenwick sweep in O(n log n).
pub fn count_inversions(seq: &[u32]) -> u64 {
    let mut seen = Fenwick::new(seq.len());
    let mut inv = 0u64;
    for (k, &v) in seq.iter().enumerate() {
        // earlier elements greater than v
        inv += k as u64 - seen.prefix(v as usize) as u64;
        seen.add(v as usize, 1);
    }
    inv
}

/// Inversion count of the cycle's sequence starting at 1, in its stored direction.
pub fn inversions(h: &HamCycle) -> u64 {
    count_inversions(h.as_slice())
}

/// The smaller inversion count over the two directions of the cycle.
pub fn inversions_min_direction(h: &HamCycle) -> u64 {
    inversions(h).min(inversions(&h.reversed()))
}

/// A Lehmer code `(mu_1, ..., mu_n)` with `0 <= mu_j < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LehmerCode {
    mu: Vec<u32>,
}

impl LehmerCode {
    pub fn new(mu: Vec<u32>) -> Result<LehmerCode> {
        if let Some(j) = (0..mu.len()).find(|&j| mu[j] as usize > j) {
            return Err(Error::invalid(format!(
                "code entry mu_{} = {} is not below {}",
                j + 1,
                mu[j],
                j + 1
            )));
        }
        Ok(LehmerCode { mu })
    }

    pub fn mu(&self) -> &[u32] {
        &self.mu
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.mu.iter().map(|&m| m as u64).sum()
    }
}

/// `mu_k` is the number of values smaller than `k` placed after `k`, which
/// is the number of already-placed elements `k` was inserted in front of
/// when the permutation is built by inserting `1, 2, ..., n` in turn.
pub fn lehmer_encode(perm: &[u32]) -> Result<LehmerCode> {
    if !crate::ham::is_permutation(perm) {
        return Err(Error::invalid("not a permutation of 1..=n"));
    }
    let mut mu = vec![0u32; perm.len()];
    let mut later = Fenwick::new(perm.len());
    for &v in perm.iter().rev() {
        mu[v as usize - 1] = later.prefix(v as usize - 1);
        later.add(v as usize, 1);
    }
    Ok(LehmerCode { mu })
}

/// Inserts `k = 1, ..., n` so that it lands in front of exactly `mu_k` of the
/// elements placed before it.
pub fn lehmer_decode(code: &LehmerCode) -> Vec<u32> {
    let mut perm: Vec<u32> = Vec::with_capacity(code.len());
    for (j, &m) in code.mu.iter().enumerate() {
        perm.insert(perm.len() - m as usize, j as u32 + 1);
    }
    perm
}

/// Number of permutations of `[n]` with at most `m` inversions, by dynamic
/// programming over codes: `counts[s]` is the number of code prefixes with sum `s`.
pub fn count_inversion_bounded(n: usize, m: u64) -> BigUint {
    let max_sum = n * n.saturating_sub(1) / 2;
    let m = (m as usize).min(max_sum);
    let mut counts = vec![BigUint::zero(); m + 1];
    counts[0] = BigUint::one();
    for j in 1..=n {
        // mu_j ranges over 0..j
        let mut prefix = Vec::with_capacity(m + 2);
        prefix.push(BigUint::zero());
        for c in &counts {
            let next = prefix.last().unwrap() + c;
            prefix.push(next);
        }
        for s in 0..=m {
            let lo = s.saturating_sub(j - 1);
            counts[s] = &prefix[s + 1] - &prefix[lo];
        }
    }
    counts.into_iter().sum()
}

/// `ln C(a, b)` via log-gamma.
fn ln_binomial(a: f64, b: f64) -> f64 {
    ln_gamma(a + 1.0) - ln_gamma(b + 1.0) - ln_gamma(a - b + 1.0)
}

/// `min(1, C(M+n, n) p^n)`, evaluated in log space.
pub fn first_moment_bound(n: usize, m: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return 0.0;
    }
    let ln = ln_binomial(m as f64 + n as f64, n as f64) + n as f64 * p.ln();
    ln.exp().min(1.0)
}

/// `(1 - eps) n / (e M)`.
pub fn p_epsilon(n: usize, m: u64, eps: f64) -> f64 {
    (1.0 - eps) * n as f64 / (std::f64::consts::E * m as f64)
}

fn factorial(k: u64) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * i)
}

fn cap(n: usize, m: u64) -> Result<u64> {
    if n == 0 || m < n as u64 {
        return Err(Error::invalid(format!("need M >= n >= 1, got n = {n}, M = {m}")));
    }
    Ok((m / n as u64).min(n as u64))
}

/// Number of codes with `mu_j < j` for `j <= b` and `mu_j < b` for `j > b`,
/// where `b = floor(M/n)`: `b! * b^(n-b)`.
pub fn restricted_class_size(n: usize, m: u64) -> Result<BigUint> {
    let b = cap(n, m)?;
    Ok(factorial(b) * BigUint::from(b).pow((n as u64 - b) as u32))
}

/// `ln(x! x^(n-x))` with the real `x = M/n` and `x!` read as `Gamma(x+1)`.
pub fn restricted_class_size_ln(n: usize, m: u64) -> Result<f64> {
    cap(n, m)?;
    let x = (m as f64 / n as f64).min(n as f64);
    Ok(ln_gamma(x + 1.0) + (n as f64 - x) * x.ln())
}

/// Upper bound on the number of restricted codes whose cycle contains a
/// set of `s` edges, `v2` of whose path-start vertices are at most `b`:
/// `b^(n-b-s+v2) * (b-v2)!` with `b = floor(M/n)`.
pub fn size_upper_s(n: usize, m: u64, s: usize, v2: usize) -> Result<BigUint> {
    let b = cap(n, m)?;
    if v2 as u64 > b {
        return Err(Error::invalid(format!("v2 = {v2} exceeds floor(M/n) = {b}")));
    }
    let exp = n as i64 - b as i64 - s as i64 + v2 as i64;
    if exp < 0 {
        return Err(Error::invalid(format!("exponent n - b - s + v2 = {exp} is negative")));
    }
    Ok(BigUint::from(b).pow(exp as u32) * factorial(b - v2 as u64))
}

/// Log of [`size_upper_s`] with the real `x = M/n`.
pub fn size_upper_s_ln(n: usize, m: u64, s: usize, v2: usize) -> Result<f64> {
    cap(n, m)?;
    let x = (m as f64 / n as f64).min(n as f64);
    if v2 as f64 > x {
        return Err(Error::invalid(format!("v2 = {v2} exceeds M/n = {x}")));
    }
    let exp = n as f64 - x - s as f64 + v2 as f64;
    Ok(exp * x.ln() + ln_gamma(x - v2 as f64 + 1.0))
}

/// `ln(|class| / bound) - s ln(M/(e n))` in the analytic (log-gamma) form;
/// nonnegative when the class is `M/(e n)`-spread at this `(s, v2)`.
pub fn spread_margin_ln(n: usize, m: u64, s: usize, v2: usize) -> Result<f64> {
    let x = m as f64 / n as f64;
    Ok(restricted_class_size_ln(n, m)? - size_upper_s_ln(n, m, s, v2)?
        - s as f64 * (x / std::f64::consts::E).ln())
}

/// `min(1, C ln r / kappa)`.
pub fn fknp_threshold(r: f64, kappa: f64, c: f64) -> Result<f64> {
    if r < 2.0 || kappa <= 0.0 || c < 0.0 || !r.is_finite() || !kappa.is_finite() {
        return Err(Error::invalid("need r >= 2, kappa > 0 and C >= 0"));
    }
    Ok((c * r.ln() / kappa).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn naive_inversions(seq: &[u32]) -> u64 {
        let mut c = 0;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                c += (seq[i] > seq[j]) as u64;
            }
        }
        c
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(count_inversions(&[1, 2, 3, 4]), 0);
        assert_eq!(count_inversions(&[1, 4, 3, 2]), 3);
        assert_eq!(count_inversions(&[1, 3, 2, 4]), 1);
        for p in (1..=6u32).permutations(6) {
            assert_eq!(count_inversions(&p), naive_inversions(&p));
        }
    }

    #[test]
    fn min_direction() {
        let h = HamCycle::new(vec![1, 4, 3, 2]).unwrap();
        assert_eq!(inversions(&h), 3);
        assert_eq!(inversions_min_direction(&h), 0);
    }

    #[test]
    fn lehmer_examples() {
        assert_eq!(lehmer_encode(&[1, 2, 3, 4]).unwrap().mu(), &[0, 0, 0, 0]);
        let desc = LehmerCode::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(lehmer_decode(&desc), vec![4, 3, 2, 1]);
        assert!(LehmerCode::new(vec![0, 2]).is_err());
        assert!(lehmer_encode(&[1, 1, 2]).is_err());
        // 2 is placed before 1, then 3 between them
        let c = LehmerCode::new(vec![0, 1, 1]).unwrap();
        assert_eq!(lehmer_decode(&c), vec![2, 3, 1]);
    }

    #[test]
    fn lehmer_roundtrip_on_s5() {
        for p in (1..=5u32).permutations(5) {
            let c = lehmer_encode(&p).unwrap();
            assert_eq!(lehmer_decode(&c), p);
            assert_eq!(c.sum(), naive_inversions(&p));
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_inversion_bounded(5, 0), BigUint::from(1u32));
        assert_eq!(count_inversion_bounded(3, 1), BigUint::from(3u32));
        assert_eq!(count_inversion_bounded(4, 2), BigUint::from(9u32));
        assert_eq!(count_inversion_bounded(6, 15), BigUint::from(720u32));
        assert_eq!(count_inversion_bounded(6, 1000), BigUint::from(720u32));
    }

    #[test]
    fn first_moment_examples() {
        assert!((first_moment_bound(3, 2, 0.1) - 0.01).abs() < 1e-12);
        assert_eq!(first_moment_bound(10, 5, 0.0), 0.0);
        assert_eq!(first_moment_bound(3, 2, 0.9), 1.0);
        let p = p_epsilon(8, 8, 0.5);
        assert!((p - 0.5 / std::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn restricted_class_examples() {
        assert_eq!(restricted_class_size(4, 16).unwrap(), BigUint::from(24u32));
        assert_eq!(restricted_class_size(6, 12).unwrap(), BigUint::from(32u32));
        assert!(restricted_class_size(6, 5).is_err());
        assert_eq!(
            size_upper_s(6, 12, 0, 0).unwrap(),
            restricted_class_size(6, 12).unwrap()
        );
        assert!(size_upper_s(6, 12, 6, 0).is_err());
        assert!(size_upper_s(6, 12, 1, 3).is_err());
        let exact = restricted_class_size(8, 24).unwrap();
        let ln = restricted_class_size_ln(8, 24).unwrap();
        assert!((ln - exact.to_string().parse::<f64>().unwrap().ln()).abs() < 1e-9);
    }

    #[test]
    fn threshold_examples() {
        let e2 = std::f64::consts::E.powi(2);
        assert_eq!(fknp_threshold(e2, 2.0, 1.0).unwrap(), 1.0);
        assert_eq!(fknp_threshold(100.0, 3.0, 0.0).unwrap(), 0.0);
        assert!(fknp_threshold(1.0, 3.0, 1.0).is_err());
    }
}
