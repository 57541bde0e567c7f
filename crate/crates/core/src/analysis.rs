//! Brute-force checks on linear codes: weight distributions, bounds,
//! minimality and dual-distance class.

use std::collections::{BTreeMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{LinearCode, PredictedDistribution};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::linalg;

pub const DEFAULT_CODEWORD_BUDGET: u64 = 1 << 24;
/// Codewords times length; keeps the largest worked example opt-in.
pub const DEFAULT_WORK_BUDGET: u64 = 1 << 33;
/// Largest alphabet the table-driven enumerator accepts.
pub const MAX_ENUM_ALPHABET: u64 = 4096;
pub const EXHAUSTIVE_MINIMALITY_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub q: u64,
    pub n: u64,
    pub k: u32,
    /// weight -> number of codewords, zero word included.
    pub counts: BTreeMap<u64, u64>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.counts.values().map(|&c| c as u128).sum()
    }

    pub fn nonzero_weights(&self) -> Vec<u64> {
        self.counts.keys().copied().filter(|&w| w > 0).collect()
    }

    pub fn min_weight(&self) -> Option<u64> {
        self.nonzero_weights().first().copied()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.nonzero_weights().last().copied()
    }

    /// "weight,count" rows under a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,count\n");
        for (w, c) in &self.counts {
            s.push_str(&format!("{w},{c}\n"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub codewords: u64,
    pub work: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            codewords: DEFAULT_CODEWORD_BUDGET,
            work: DEFAULT_WORK_BUDGET,
        }
    }
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            codewords: u64::MAX,
            work: u64::MAX,
        }
    }

    pub fn codewords(codewords: u64) -> Self {
        Budget {
            codewords,
            ..Budget::default()
        }
    }

    pub fn check(&self, code: &LinearCode) -> Result<()> {
        self.check_size(code.q(), code.k() as u32, code.n() as u64)
    }

    /// Same test from the parameters alone.
    pub fn check_size(&self, q: u64, k: u32, n: u64) -> Result<()> {
        let total = (q as u128).checked_pow(k).unwrap_or(u128::MAX);
        if total > self.codewords as u128 {
            return Err(Error::BudgetExceeded {
                required: total,
                budget: self.codewords as u128,
            });
        }
        let work = total.saturating_mul(n as u128);
        if work > self.work as u128 {
            return Err(Error::BudgetExceeded {
                required: work,
                budget: self.work as u128,
            });
        }
        Ok(())
    }
}

/// Called after each finished chunk with (codewords done, total).
pub type Progress<'a> = &'a (dyn Fn(u64, u64) + Sync);

pub fn codeword_count(code: &LinearCode) -> Option<u64> {
    code.q().checked_pow(code.k() as u32)
}

pub fn weight_distribution(code: &LinearCode) -> Result<WeightDistribution> {
    weight_distribution_with(code, Budget::default(), None)
}

/// Enumerates every codeword. Messages are walked as F_p-digit vectors in
/// a p-ary Gray order, so each step adds one fixed vector; the top digits
/// split the space into a fixed set of chunks.
pub fn weight_distribution_with(
    code: &LinearCode,
    budget: Budget,
    progress: Option<Progress>,
) -> Result<WeightDistribution> {
    budget.check(code)?;
    let total = codeword_count(code).expect("checked");
    let f = code.alphabet();
    let q = code.q();
    if q > MAX_ENUM_ALPHABET {
        return Err(Error::BudgetExceeded {
            required: q as u128,
            budget: MAX_ENUM_ALPHABET as u128,
        });
    }
    let n = code.n();
    let p = f.p() as u64;
    let s = f.n() as usize;
    let qs = q as usize;

    // entries stored premultiplied by q so the add table index is one add
    let mut add = vec![0u32; qs * qs];
    for a in 0..q as u32 {
        for b in 0..q as u32 {
            add[a as usize * qs + b as usize] = f.add(Elem(a), Elem(b)).0 * q as u32;
        }
    }
    let steps: Vec<Vec<u32>> = code
        .generator()
        .iter()
        .flat_map(|row| {
            (0..s).map(move |t| {
                let theta = Elem((p as u32).pow(t as u32));
                row.iter().map(|&g| f.mul(theta, g).0).collect::<Vec<u32>>()
            })
        })
        .collect();
    let digits = steps.len();

    let mut top = 0;
    while top < digits && p.pow(top as u32) < 256 {
        top += 1;
    }
    let low = digits - top;
    let chunk_len = p.pow(low as u32);
    let chunks = p.pow(top as u32);
    let done = AtomicU64::new(0);

    let hist = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut h = vec![0u64; n + 1];
            let mut cw = vec![0u32; n];
            let mut c = chunk;
            for t in low..digits {
                for _ in 0..c % p {
                    add_into(&mut cw, &steps[t], &add);
                }
                c /= p;
            }
            h[weight(&cw)] += 1;
            for i in 1..chunk_len {
                let mut t = 0;
                let mut j = i;
                while j % p == 0 {
                    j /= p;
                    t += 1;
                }
                h[add_into(&mut cw, &steps[t], &add)] += 1;
            }
            if let Some(cb) = progress {
                let d = done.fetch_add(chunk_len, Ordering::Relaxed) + chunk_len;
                cb(d, total);
            }
            h
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let counts = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(w, c)| (w as u64, c))
        .collect();
    Ok(WeightDistribution {
        q,
        n: n as u64,
        k: code.k() as u32,
        counts,
    })
}

#[inline]
fn add_into(cw: &mut [u32], v: &[u32], add: &[u32]) -> usize {
    let mut nz = 0usize;
    for (c, &x) in cw.iter_mut().zip(v) {
        *c = add[*c as usize + x as usize];
        nz += (*c != 0) as usize;
    }
    nz
}

fn weight(cw: &[u32]) -> usize {
    cw.iter().filter(|&&c| c != 0).count()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DualDistanceClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = ">=3")]
    AtLeastThree,
}

/// 1 for a zero column, 2 for two proportional columns, else >= 3.
pub fn dual_distance_class(code: &LinearCode) -> DualDistanceClass {
    let f = code.alphabet();
    let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(code.n());
    for j in 0..code.n() {
        let col = code.column(j);
        let Some(lead) = col.iter().find(|x| !x.is_zero()) else {
            return DualDistanceClass::One;
        };
        let inv = f.inv(*lead).expect("nonzero");
        let norm: Vec<u32> = col.iter().map(|&x| f.mul(inv, x).0).collect();
        if !seen.insert(norm) {
            return DualDistanceClass::Two;
        }
    }
    DualDistanceClass::AtLeastThree
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GriesmerCheck {
    pub bound: u128,
    pub meets: bool,
}

/// sum_{i<k} ceil(d / q^i) against n.
pub fn griesmer_check(n: u64, k: u32, d: u64, q: u64) -> GriesmerCheck {
    let mut bound: u128 = 0;
    let mut qi: u128 = 1;
    for _ in 0..k {
        bound += (d as u128).div_ceil(qi);
        qi = qi.saturating_mul(q as u128);
    }
    GriesmerCheck {
        bound,
        meets: bound == n as u128,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingletonCheck {
    pub defect: i64,
    pub mds: bool,
}

pub fn singleton_check(n: u64, k: u32, d: u64) -> SingletonCheck {
    let defect = n as i64 - k as i64 + 1 - d as i64;
    SingletonCheck {
        defect,
        mds: defect == 0,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalityMethod {
    Lemma2,
    Exhaustive,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub verdict: Option<bool>,
    pub method: MinimalityMethod,
}

/// w_min / w_max > (q - 1) / q.
pub fn ratio_condition(dist: &WeightDistribution) -> bool {
    match (dist.min_weight(), dist.max_weight()) {
        (Some(lo), Some(hi)) => dist.q as u128 * lo as u128 > (dist.q as u128 - 1) * hi as u128,
        _ => true,
    }
}

pub fn minimality_check(code: &LinearCode, dist: &WeightDistribution) -> MinimalityReport {
    if ratio_condition(dist) {
        return MinimalityReport {
            verdict: Some(true),
            method: MinimalityMethod::Lemma2,
        };
    }
    match exhaustive_minimality(code) {
        Ok(v) => MinimalityReport {
            verdict: Some(v),
            method: MinimalityMethod::Exhaustive,
        },
        Err(_) => MinimalityReport {
            verdict: None,
            method: MinimalityMethod::Inconclusive,
        },
    }
}

/// Every nonzero codeword checked: uG is minimal iff the columns it
/// vanishes on span a space of dimension k - 1.
pub fn exhaustive_minimality(code: &LinearCode) -> Result<bool> {
    exhaustive_minimality_within(code, EXHAUSTIVE_MINIMALITY_LIMIT)
}

/// As `exhaustive_minimality`, refusing codes with more than `limit` codewords.
pub fn exhaustive_minimality_within(code: &LinearCode, limit: u64) -> Result<bool> {
    Ok(non_minimal_messages_within(code, limit)?.is_empty())
}

/// Normalized messages (leading entry 1) whose codewords are not minimal.
pub fn non_minimal_messages(code: &LinearCode) -> Result<Vec<Vec<Elem>>> {
    non_minimal_messages_within(code, EXHAUSTIVE_MINIMALITY_LIMIT)
}

pub fn non_minimal_messages_within(code: &LinearCode, limit: u64) -> Result<Vec<Vec<Elem>>> {
    let total = codeword_count(code).unwrap_or(u64::MAX);
    if total > limit {
        return Err(Error::BudgetExceeded {
            required: total as u128,
            budget: limit as u128,
        });
    }
    let f = code.alphabet();
    let k = code.k();
    let q = code.q();
    let cols: Vec<Vec<Elem>> = (0..code.n()).map(|j| code.column(j)).collect();
    let bad: Vec<Vec<Elem>> = (1..total)
        .into_par_iter()
        .filter_map(|idx| {
            let u = message(idx, q, k);
            if u.iter().find(|x| !x.is_zero()) != Some(&Elem::ONE) {
                return None;
            }
            let c = code.encode(&u).expect("length");
            let zero_cols: Vec<Vec<Elem>> = c
                .iter()
                .zip(&cols)
                .filter(|(x, _)| x.is_zero())
                .map(|(_, col)| col.clone())
                .collect();
            if linalg::rank(f, &zero_cols) + 1 == k {
                None
            } else {
                Some(u)
            }
        })
        .collect();
    Ok(bad)
}

/// Base-q digits of idx as a message, least significant first.
pub fn message(mut idx: u64, q: u64, k: usize) -> Vec<Elem> {
    (0..k)
        .map(|_| {
            let d = idx % q;
            idx /= q;
            Elem(d as u32)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDiff {
    pub weight: u64,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionCheck {
    pub matches: bool,
    pub n_matches: bool,
    pub k_matches: bool,
    pub diff: Vec<WeightDiff>,
}

/// Weights of uniformly drawn nonzero codewords.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSample {
    pub q: u64,
    pub n: u64,
    pub k: u32,
    pub samples: u64,
    pub seed: u64,
    pub counts: BTreeMap<u64, u64>,
    /// Observed weights absent from the prediction.
    pub unexpected: Vec<u64>,
}

/// Draws `samples` nonzero messages; sample i uses its own generator
/// seeded from (seed, i), so the result does not depend on scheduling.
pub fn sample_weights(
    code: &LinearCode,
    samples: u64,
    seed: u64,
    predicted: Option<&PredictedDistribution>,
) -> Result<WeightSample> {
    let q = code.q() as u32;
    let k = code.k();
    if k == 0 {
        return Err(Error::Parse("code has dimension 0".into()));
    }
    let counts = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let u = loop {
                let u: Vec<Elem> = (0..k).map(|_| Elem(rng.gen_range(0..q))).collect();
                if u.iter().any(|x| !x.is_zero()) {
                    break u;
                }
            };
            let c = code.encode(&u).expect("message length");
            c.iter().filter(|x| !x.is_zero()).count() as u64
        })
        .fold(BTreeMap::new, |mut acc: BTreeMap<u64, u64>, w| {
            *acc.entry(w).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (w, c) in b {
                *a.entry(w).or_insert(0) += c;
            }
            a
        });
    let unexpected = match predicted {
        Some(p) => counts
            .keys()
            .copied()
            .filter(|w| !p.weights.iter().any(|&(x, _)| x == *w))
            .collect(),
        None => Vec::new(),
    };
    Ok(WeightSample {
        q: code.q(),
        n: code.n() as u64,
        k: k as u32,
        samples,
        seed,
        counts,
        unexpected,
    })
}

pub fn verify_against_prediction(
    dist: &WeightDistribution,
    predicted: &PredictedDistribution,
) -> PredictionCheck {
    let mut expected: BTreeMap<u64, u64> = predicted.weights.iter().copied().collect();
    expected.insert(0, 1);
    let mut diff = Vec::new();
    let weights: std::collections::BTreeSet<u64> =
        expected.keys().chain(dist.counts.keys()).copied().collect();
    for w in weights {
        let e = expected.get(&w).copied().unwrap_or(0);
        let a = dist.counts.get(&w).copied().unwrap_or(0);
        if e != a {
            diff.push(WeightDiff {
                weight: w,
                expected: e,
                actual: a,
            });
        }
    }
    let n_matches = dist.n == predicted.n;
    let k_matches = dist.k == predicted.k && dist.q == predicted.q;
    PredictionCheck {
        matches: diff.is_empty() && n_matches && k_matches,
        n_matches,
        k_matches,
        diff,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub q: u64,
    pub n: u64,
    pub k: u32,
    pub d: u64,
    pub weights: Vec<u64>,
    pub w_min: u64,
    pub w_max: u64,
    pub distribution: Vec<(u64, u64)>,
    pub griesmer: GriesmerCheck,
    pub singleton: SingletonCheck,
    pub minimality: MinimalityReport,
    pub dual_distance: DualDistanceClass,
    pub prediction: Option<PredictionCheck>,
}

pub fn analyze(
    code: &LinearCode,
    predicted: Option<&PredictedDistribution>,
    budget: Budget,
) -> Result<AnalysisReport> {
    analyze_with(code, predicted, budget, None)
}

pub fn analyze_with(
    code: &LinearCode,
    predicted: Option<&PredictedDistribution>,
    budget: Budget,
    progress: Option<Progress>,
) -> Result<AnalysisReport> {
    let dist = weight_distribution_with(code, budget, progress)?;
    Ok(report_from(code, &dist, predicted))
}

pub fn report_from(
    code: &LinearCode,
    dist: &WeightDistribution,
    predicted: Option<&PredictedDistribution>,
) -> AnalysisReport {
    let d = dist.min_weight().unwrap_or(0);
    AnalysisReport {
        q: dist.q,
        n: dist.n,
        k: dist.k,
        d,
        weights: dist.nonzero_weights(),
        w_min: d,
        w_max: dist.max_weight().unwrap_or(0),
        distribution: dist.counts.iter().map(|(&w, &c)| (w, c)).collect(),
        griesmer: griesmer_check(dist.n, dist.k, d, dist.q),
        singleton: singleton_check(dist.n, dist.k, d),
        minimality: minimality_check(code, dist),
        dual_distance: dual_distance_class(code),
        prediction: predicted.map(|p| verify_against_prediction(dist, p)),
    }
}

#[cfg(test)]
mod tests;
