//! Set partitions and the exact transforms between moments and cumulants and
//! between correlation and truncated correlation functions.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `k` for [`enumerate_partitions`] and subset tables.
pub const MAX_PARTITION_K: usize = 10;
/// Largest order for moment/cumulant conversion.
pub const MAX_CUMULANT_ORDER: usize = 10;
/// Largest order of [`empirical_cumulants`].
pub const MAX_K_STATISTIC: usize = 4;

/// A partition of `{1, …, k}`; blocks are sorted and ordered by least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block bitmasks, bit `i - 1` standing for element `i`.
    pub fn masks(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .map(|b| b.iter().fold(0, |m, i| m | 1 << (i - 1)))
            .collect()
    }
}

/// All partitions of `{1, …, k}` in restricted-growth-string order.
pub fn enumerate_partitions(k: usize) -> Result<Vec<SetPartition>> {
    if !(1..=MAX_PARTITION_K).contains(&k) {
        return Err(Error::domain(format!("k must lie in 1..={MAX_PARTITION_K}, got {k}")));
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    loop {
        let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, b) in rgs.iter().enumerate() {
            blocks[*b].push(i + 1);
        }
        out.push(SetPartition { blocks });
        // Next restricted growth string: a_i ≤ 1 + max(a_0..a_{i-1}).
        let mut i = k;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// Values on every nonempty subset of `{1, …, k}`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetTable {
    k: usize,
    /// `values[mask]`; slot `0` (the empty set) is unused and kept at `1`.
    values: Vec<f64>,
}

impl SubsetTable {
    pub fn from_fn(k: usize, mut f: impl FnMut(usize) -> f64) -> Result<Self> {
        if !(1..=MAX_PARTITION_K).contains(&k) {
            return Err(Error::domain(format!("k must lie in 1..={MAX_PARTITION_K}")));
        }
        let mut values = vec![1.0; 1 << k];
        for (mask, v) in values.iter_mut().enumerate().skip(1) {
            *v = f(mask);
            if !v.is_finite() {
                return Err(Error::domain(format!("non-finite value on subset {mask:#b}")));
            }
        }
        Ok(Self { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Value on the subset given by `mask` (must be nonzero and below `2^k`).
    pub fn get(&self, mask: usize) -> f64 {
        assert!(mask != 0 && mask < self.values.len(), "subset mask out of range");
        self.values[mask]
    }

    /// Value on the subset of 1-based indices.
    pub fn get_subset(&self, indices: &[usize]) -> f64 {
        self.get(indices.iter().fold(0, |m, i| m | 1 << (i - 1)))
    }

    pub fn values(&self) -> &[f64] {
        &self.values[1..]
    }
}

/// Masks in order of increasing population count.
fn masks_by_size(k: usize) -> Vec<usize> {
    let mut m: Vec<usize> = (1..1usize << k).collect();
    m.sort_by_key(|x| (x.count_ones(), *x));
    m
}

/// `Σ_{B ∋ min S, B ⊊ S} t(B) r(S \ B)`: the partitions of `S` other than
/// `{S}`, grouped by the block holding the least element.
fn proper_sum(s: usize, t: &[f64], r: &[f64]) -> f64 {
    let low = s & s.wrapping_neg();
    let rest = s ^ low;
    let mut sum = 0.0;
    // enumerate proper subsets `sub` of `rest`; B = low | sub
    let mut sub = rest;
    loop {
        if sub != rest {
            let b = low | sub;
            sum += t[b] * r[s ^ b];
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    sum
}

/// Truncated correlations `ρ^T` from `ρ` via `ρ(S) = Σ_γ ∏_{B∈γ} ρ^T(B)`.
pub fn truncated_from_correlation(table: &SubsetTable) -> SubsetTable {
    let rho = &table.values;
    let mut t = vec![1.0; rho.len()];
    for s in masks_by_size(table.k) {
        t[s] = rho[s] - proper_sum(s, &t, rho);
    }
    SubsetTable { k: table.k, values: t }
}

/// Correlations `ρ` from truncated correlations; inverse of
/// [`truncated_from_correlation`].
pub fn correlation_from_truncated(table: &SubsetTable) -> SubsetTable {
    let t = &table.values;
    let mut rho = vec![1.0; t.len()];
    for s in masks_by_size(table.k) {
        rho[s] = t[s] + proper_sum(s, t, &rho);
    }
    SubsetTable { k: table.k, values: rho }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn check_order(len: usize) -> Result<()> {
    if len > MAX_CUMULANT_ORDER {
        return Err(Error::domain(format!("order at most {MAX_CUMULANT_ORDER}, got {len}")));
    }
    Ok(())
}

/// Cumulants `s_1..s_K` from raw moments `m_1..m_K`, using
/// `m_n = Σ_{j=1}^{n} C(n-1, j-1) s_j m_{n-j}` (partitions grouped by the
/// block containing the first element).
pub fn cumulants_from_moments(moments: &[f64]) -> Result<Vec<f64>> {
    check_order(moments.len())?;
    let m = |i: usize| if i == 0 { 1.0 } else { moments[i - 1] };
    let mut s: Vec<f64> = Vec::with_capacity(moments.len());
    for n in 1..=moments.len() {
        let mut acc = Dot2::default();
        acc.add(m(n));
        for j in 1..n {
            acc.add_triple(-binomial(n - 1, j - 1), s[j - 1], m(n - j));
        }
        s.push(acc.value());
    }
    Ok(s)
}

/// Raw moments from cumulants; inverse of [`cumulants_from_moments`].
pub fn moments_from_cumulants(cumulants: &[f64]) -> Result<Vec<f64>> {
    check_order(cumulants.len())?;
    let mut m = vec![1.0];
    for n in 1..=cumulants.len() {
        let mut acc = Dot2::default();
        for j in 1..=n {
            acc.add_triple(binomial(n - 1, j - 1), cumulants[j - 1], m[n - j]);
        }
        m.push(acc.value());
    }
    m.remove(0);
    Ok(m)
}

/// Sum of products accumulated in twice the working precision (TwoSum and
/// fused-multiply TwoProduct), so the recursions lose nothing beyond the
/// rounding of their inputs.
#[derive(Default)]
struct Dot2 {
    sum: f64,
    comp: f64,
}

impl Dot2 {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        let z = t - self.sum;
        self.comp += (self.sum - (t - z)) + (v - z);
        self.sum = t;
    }

    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        self.comp += a.mul_add(b, -p);
        self.add(p);
    }

    /// `a · b · c` with the rounding error of `a · b` carried along.
    fn add_triple(&mut self, a: f64, b: f64, c: f64) {
        let p = a * b;
        self.comp += a.mul_add(b, -p) * c;
        self.add_product(p, c);
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Unbiased k-statistics of orders `1..=order` (`order ≤ 4`).
pub fn empirical_cumulants(samples: &[f64], order: usize) -> Result<Vec<f64>> {
    if !(1..=MAX_K_STATISTIC).contains(&order) {
        return Err(Error::domain(format!("order must lie in 1..={MAX_K_STATISTIC}")));
    }
    if samples.len() < 10 * order {
        return Err(Error::domain(format!(
            "need at least {} samples for order {order}, got {}",
            10 * order,
            samples.len()
        )));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite sample"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let central = |p: i32| samples.iter().map(|x| (x - mean).powi(p)).sum::<f64>() / n;
    let (m2, m3, m4) = (central(2), central(3), central(4));
    let k = [
        mean,
        n / (n - 1.0) * m2,
        n * n / ((n - 1.0) * (n - 2.0)) * m3,
        n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) / ((n - 1.0) * (n - 2.0) * (n - 3.0)),
    ];
    Ok(k[..order].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_partitions_in_order() {
        let p = enumerate_partitions(3).unwrap();
        let blocks: Vec<_> = p.iter().map(|x| x.blocks().to_vec()).collect();
        assert_eq!(
            blocks,
            vec![
                vec![vec![1, 2, 3]],
                vec![vec![1, 2], vec![3]],
                vec![vec![1, 3], vec![2]],
                vec![vec![1], vec![2, 3]],
                vec![vec![1], vec![2], vec![3]],
            ]
        );
        assert!(enumerate_partitions(0).is_err());
        assert!(enumerate_partitions(11).is_err());
    }

    #[test]
    fn two_point_truncation() {
        let t = SubsetTable::from_fn(2, |m| [0.0, 0.3, 0.5, 0.2][m]).unwrap();
        let tr = truncated_from_correlation(&t);
        assert!((tr.get(3) - (0.2 - 0.15)).abs() < 1e-15);
        assert_eq!(tr.get(1), 0.3);
    }

    #[test]
    fn gaussian_cumulants() {
        let s = cumulants_from_moments(&[0.0, 1.0, 0.0, 3.0, 0.0, 15.0]).unwrap();
        assert_eq!(s, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(cumulants_from_moments(&[2.5]).unwrap(), vec![2.5]);
    }

    #[test]
    fn k_statistics_of_two_point_sample() {
        let x: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 0.0 } else { 2.0 }).collect();
        let k = empirical_cumulants(&x, 4).unwrap();
        assert!((k[0] - 1.0).abs() < 1e-15);
        assert!((k[1] - 100.0 / 99.0).abs() < 1e-14);
        assert!(k[2].abs() < 1e-14);
        assert!(empirical_cumulants(&x[..30], 4).is_err());
    }
}
