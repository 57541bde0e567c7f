//! Secret sharing on the dual of a linear code C: shares are coordinates
//! of a random word of C^perp, and access sets are governed by the
//! minimal codewords of C.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    self, codeword_count, message, DualDistanceClass, EXHAUSTIVE_MINIMALITY_LIMIT,
};
use crate::constructions::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::linalg;

pub struct MasseyScheme {
    code: LinearCode,
    /// Rows span C^perp; column 0 carries the secret.
    dual: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deal {
    pub secret: u32,
    pub seed: u64,
    /// Share of participant i at index i - 1.
    pub shares: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Recovery {
    Secret(Elem),
    Unqualified,
}

impl MasseyScheme {
    pub fn new(code: LinearCode) -> Result<Self> {
        let f = code.alphabet().clone();
        if code.n() == 0 || code.column(0).iter().all(|x| x.is_zero()) {
            return Err(Error::DegenerateG0);
        }
        let dual = linalg::kernel(&f, code.generator(), code.n());
        if dual.iter().all(|h| h[0].is_zero()) {
            return Err(Error::DegenerateG0);
        }
        Ok(Self { code, dual })
    }

    pub fn code(&self) -> &LinearCode {
        &self.code
    }

    pub fn participants(&self) -> usize {
        self.code.n() - 1
    }

    pub fn dual_generator(&self) -> &[Vec<Elem>] {
        &self.dual
    }

    fn field(&self) -> &Field {
        self.code.alphabet()
    }

    /// Dealer word u H with u uniform among vectors giving `secret` at
    /// coordinate 0.
    pub fn deal(&self, secret: Elem, seed: u64) -> Result<Deal> {
        let f = self.field();
        if secret.0 as u64 >= self.code.q() {
            return Err(Error::ElementOutOfRange(secret.0 as u64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u: Vec<Elem> = (0..self.dual.len())
            .map(|_| Elem(rng.gen_range(0..self.code.q() as u32)))
            .collect();
        let j = self
            .dual
            .iter()
            .position(|h| !h[0].is_zero())
            .ok_or(Error::DegenerateG0)?;
        let rest = (0..u.len()).filter(|&i| i != j).fold(Elem::ZERO, |acc, i| {
            f.add(acc, f.mul(u[i], self.dual[i][0]))
        });
        u[j] = f.mul(f.sub(secret, rest), f.inv(self.dual[j][0])?);
        let word: Vec<Elem> = (0..self.code.n())
            .map(|c| {
                u.iter()
                    .zip(&self.dual)
                    .fold(Elem::ZERO, |acc, (&a, h)| f.add(acc, f.mul(a, h[c])))
            })
            .collect();
        debug_assert_eq!(word[0], secret);
        Ok(Deal {
            secret: secret.0,
            seed,
            shares: word[1..].iter().map(|e| e.0).collect(),
        })
    }

    /// `shares` pairs a participant index (1-based) with its share.
    pub fn reconstruct(&self, shares: &[(usize, Elem)]) -> Result<Recovery> {
        let f = self.field();
        for &(i, s) in shares {
            if i == 0 || i > self.participants() {
                return Err(Error::Parse(format!("participant {i} out of range")));
            }
            if s.0 as u64 >= self.code.q() {
                return Err(Error::ElementOutOfRange(s.0 as u64));
            }
        }
        let cols: Vec<Vec<Elem>> = shares
            .iter()
            .map(|&(i, _)| self.dual.iter().map(|h| h[i]).collect())
            .collect();
        // shares must be the restriction of some dual word
        let restricted: Vec<Vec<Elem>> = self
            .dual
            .iter()
            .map(|h| shares.iter().map(|&(i, _)| h[i]).collect())
            .collect();
        let mut augmented = restricted.clone();
        augmented.push(shares.iter().map(|&(_, s)| s).collect());
        if !shares.is_empty() && linalg::rank(f, &augmented) != linalg::rank(f, &restricted) {
            return Err(Error::InconsistentShares);
        }
        let target: Vec<Elem> = self.dual.iter().map(|h| h[0]).collect();
        if cols.is_empty() {
            return Ok(Recovery::Unqualified);
        }
        match linalg::solve(f, &cols, &target) {
            Some(c) => {
                let s = c
                    .iter()
                    .zip(shares)
                    .fold(Elem::ZERO, |acc, (&a, &(_, v))| f.add(acc, f.mul(a, v)));
                Ok(Recovery::Secret(s))
            }
            None => Ok(Recovery::Unqualified),
        }
    }

    pub fn is_access_set(&self, set: &[usize]) -> bool {
        let cols: Vec<Vec<Elem>> = set
            .iter()
            .map(|&i| self.dual.iter().map(|h| h[i]).collect())
            .collect();
        let target: Vec<Elem> = self.dual.iter().map(|h| h[0]).collect();
        !cols.is_empty() && linalg::solve(self.field(), &cols, &target).is_some()
    }
}

/// Minimal access sets, one per minimal codeword of C with c_0 = 1.
/// Each set lists participant indices in increasing order.
pub fn minimal_access_sets(code: &LinearCode) -> Result<Vec<Vec<u32>>> {
    minimal_access_sets_within(code, EXHAUSTIVE_MINIMALITY_LIMIT)
}

/// As `minimal_access_sets`, refusing codes with more than `limit` codewords.
pub fn minimal_access_sets_within(code: &LinearCode, limit: u64) -> Result<Vec<Vec<u32>>> {
    let total = codeword_count(code).unwrap_or(u64::MAX);
    if total > limit {
        return Err(Error::BudgetExceeded {
            required: total as u128,
            budget: limit as u128,
        });
    }
    let f = code.alphabet();
    let k = code.k();
    let cols: Vec<Vec<Elem>> = (0..code.n()).map(|j| code.column(j)).collect();
    let sets = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let c = code.encode(&message(idx, code.q(), k)).expect("length");
            if c[0] != Elem::ONE {
                return None;
            }
            let zero_cols: Vec<Vec<Elem>> = c
                .iter()
                .zip(&cols)
                .filter(|(x, _)| x.is_zero())
                .map(|(_, col)| col.clone())
                .collect();
            if linalg::rank(f, &zero_cols) + 1 != code.rank() {
                return None;
            }
            Some(
                (1..c.len())
                    .filter(|&i| !c[i].is_zero())
                    .map(|i| i as u32)
                    .collect::<Vec<u32>>(),
            )
        })
        .collect::<Vec<_>>();
    let mut sets = sets;
    sets.sort();
    sets.dedup();
    Ok(sets)
}

/// Participants whose generator column is a multiple of column 0.
pub fn parallel_participants(code: &LinearCode) -> Vec<u32> {
    let f = code.alphabet();
    let g0 = code.column(0);
    (1..code.n())
        .filter(|&i| {
            let gi = code.column(i);
            linalg::rank(f, &[g0.clone(), gi]) == 1
        })
        .map(|i| i as u32)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessPrediction {
    pub total: u128,
    /// Participants in every minimal access set.
    pub always_in: Vec<u32>,
    /// Sets containing any other single participant.
    pub per_participant: u128,
    pub dual_distance: DualDistanceClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessCounts {
    pub total: u64,
    /// participant -> number of minimal access sets containing it.
    pub frequencies: BTreeMap<u32, u64>,
    pub always_in: Vec<u32>,
    pub code_minimal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessVerdicts {
    pub total: bool,
    pub always_in: bool,
    pub frequencies: bool,
}

/// Count shared by every group of `size` participants when the law applies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupVerdict {
    pub size: u32,
    pub predicted: u128,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessReport {
    pub q: u64,
    pub n: u64,
    pub k: u32,
    pub participants: u64,
    /// "enumerated" or "predicted".
    pub mode: String,
    pub predicted: AccessPrediction,
    pub enumerated: Option<AccessCounts>,
    pub verdicts: Option<AccessVerdicts>,
    /// Group sizes 1..=min(k-1, d_perp-2) that could be checked.
    pub groups: Vec<GroupVerdict>,
}

const GROUP_WORK_LIMIT: u64 = 1 << 27;

fn group_verdicts(
    code: &LinearCode,
    sets: &[Vec<u32>],
    frequencies: &BTreeMap<u32, u64>,
) -> Vec<GroupVerdict> {
    let q = code.q() as u128;
    let k = code.k() as u32;
    let expected = |l: u32| q.pow(k - 1 - l) * (q - 1).pow(l);
    let mut out = Vec::new();
    if k < 2 {
        return out;
    }
    let single = frequencies.values().all(|&c| c as u128 == expected(1));
    out.push(GroupVerdict {
        size: 1,
        predicted: expected(1),
        holds: single,
    });
    if k < 3 || no_dependent_triples(code) != Some(true) {
        return out;
    }
    let n = code.n();
    let work: u64 = sets.iter().map(|s| (s.len() * s.len()) as u64 / 2).sum();
    if work > GROUP_WORK_LIMIT {
        return out;
    }
    let mut pairs = vec![0u64; n * n];
    for set in sets {
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                pairs[i as usize * n + j as usize] += 1;
            }
        }
    }
    let holds = (1..n).all(|i| (i + 1..n).all(|j| pairs[i * n + j] as u128 == expected(2)));
    out.push(GroupVerdict {
        size: 2,
        predicted: expected(2),
        holds,
    });
    out
}

/// Whether no three generator columns are linearly dependent, given that no
/// two are; None when the column count makes the scan too large.
pub fn no_dependent_triples(code: &LinearCode) -> Option<bool> {
    let n = code.n() as u64;
    if n * n.saturating_sub(1) * n.saturating_sub(2) / 6 > GROUP_WORK_LIMIT / 8 {
        return None;
    }
    let f = code.alphabet();
    let cols: Vec<Vec<Elem>> = (0..code.n()).map(|j| code.column(j)).collect();
    let dependent = (0..cols.len()).into_par_iter().any(|i| {
        (i + 1..cols.len()).any(|j| {
            (j + 1..cols.len())
                .any(|l| linalg::rank(f, &[cols[i].clone(), cols[j].clone(), cols[l].clone()]) < 3)
        })
    });
    Some(!dependent)
}

/// Counts expected when every nonzero codeword of C is minimal.
pub fn predicted_access(code: &LinearCode) -> AccessPrediction {
    let q = code.q() as u128;
    let k = code.k() as u32;
    AccessPrediction {
        total: q.pow(k - 1),
        always_in: parallel_participants(code),
        per_participant: if k >= 2 { (q - 1) * q.pow(k - 2) } else { 0 },
        dual_distance: analysis::dual_distance_class(code),
    }
}

pub fn access_report(code: &LinearCode, predicted_only: bool) -> Result<AccessReport> {
    access_report_within(code, predicted_only, EXHAUSTIVE_MINIMALITY_LIMIT)
}

/// As `access_report`, enumerating codes of up to `limit` codewords.
pub fn access_report_within(
    code: &LinearCode,
    predicted_only: bool,
    limit: u64,
) -> Result<AccessReport> {
    let predicted = predicted_access(code);
    let mut report = AccessReport {
        q: code.q(),
        n: code.n() as u64,
        k: code.k() as u32,
        participants: code.n() as u64 - 1,
        mode: "predicted".into(),
        predicted,
        enumerated: None,
        verdicts: None,
        groups: Vec::new(),
    };
    if predicted_only {
        return Ok(report);
    }
    let sets = minimal_access_sets_within(code, limit)?;
    let mut frequencies: BTreeMap<u32, u64> = (1..code.n() as u32).map(|i| (i, 0)).collect();
    for set in &sets {
        for &i in set {
            *frequencies.get_mut(&i).expect("participant") += 1;
        }
    }
    let total = sets.len() as u64;
    let always_in: Vec<u32> = frequencies
        .iter()
        .filter(|&(_, &c)| c == total && total > 0)
        .map(|(&i, _)| i)
        .collect();
    let code_minimal = analysis::exhaustive_minimality_within(code, limit)?;
    let p = &report.predicted;
    let verdicts = AccessVerdicts {
        total: total as u128 == p.total,
        always_in: always_in == p.always_in,
        frequencies: frequencies.iter().all(|(i, &c)| {
            if p.always_in.contains(i) {
                c == total
            } else {
                c as u128 == p.per_participant
            }
        }),
    };
    if report.predicted.dual_distance == DualDistanceClass::AtLeastThree {
        report.groups = group_verdicts(code, &sets, &frequencies);
    }
    report.mode = "enumerated".into();
    report.enumerated = Some(AccessCounts {
        total,
        frequencies,
        always_in,
        code_minimal,
    });
    report.verdicts = Some(verdicts);
    Ok(report)
}

#[cfg(test)]
mod tests;
