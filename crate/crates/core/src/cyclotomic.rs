//! Exact arithmetic in Z[zeta_p].
//!
//! Canonical form uses the basis 1, zeta, ..., zeta^{p-2}; zeta^{p-1} is
//! rewritten as minus the sum of the lower powers.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt<{}>{:?}", self.p, self.coeffs)
    }
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        CycInt {
            p,
            coeffs: vec![0; p as usize - 1],
        }
    }

    pub fn from_int(p: u32, n: i64) -> Self {
        let mut z = CycInt::zero(p);
        z.coeffs[0] = n;
        z
    }

    pub fn one(p: u32) -> Self {
        CycInt::from_int(p, 1)
    }

    /// zeta^k
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[k.rem_euclid(p as i64) as usize] = 1;
        CycInt::from_exponent_counts(p, &counts)
    }

    /// sum_k counts[k] zeta^k for k in 0..p.
    pub fn from_exponent_counts(p: u32, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len(), p as usize);
        let top = counts[p as usize - 1];
        CycInt {
            p,
            coeffs: counts[..p as usize - 1].iter().map(|&c| c - top).collect(),
        }
    }

    /// Canonical coefficients a_0..a_{p-2}.
    pub fn from_coeffs(p: u32, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Parse(format!("expected {} coefficients", p - 1)));
        }
        Ok(CycInt { p, coeffs })
    }

    /// Quadratic Gauss sum G = sum_{x in F_p} zeta^{x^2}.
    pub fn gauss_sum(p: u32) -> Self {
        let mut counts = vec![0i64; p as usize];
        for x in 0..p as u64 {
            counts[(x * x % p as u64) as usize] += 1;
        }
        CycInt::from_exponent_counts(p, &counts)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Coefficients on 1..zeta^{p-1} with a zero top entry.
    pub fn exponent_array(&self) -> Vec<i64> {
        let mut v = self.coeffs.clone();
        v.push(0);
        v
    }

    fn check(&self, o: &CycInt) -> Result<()> {
        if self.p == o.p {
            Ok(())
        } else {
            Err(Error::CharacteristicMismatch)
        }
    }

    pub fn add(&self, o: &CycInt) -> Result<CycInt> {
        self.check(o)?;
        Ok(CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, o: &CycInt) -> Result<CycInt> {
        self.check(o)?;
        Ok(CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> CycInt {
        self.scalar_mul(-1)
    }

    pub fn scalar_mul(&self, k: i64) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }

    pub fn mul(&self, o: &CycInt) -> Result<CycInt> {
        self.check(o)?;
        let p = self.p as usize;
        let mut acc = vec![0i128; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[(i + j) % p] += a as i128 * b as i128;
            }
        }
        let top = acc[p - 1];
        let coeffs = acc[..p - 1]
            .iter()
            .map(|&c| i64::try_from(c - top).expect("cyclotomic coefficient overflow"))
            .collect();
        Ok(CycInt { p: self.p, coeffs })
    }

    /// zeta -> zeta^{-1}
    pub fn conj(&self) -> CycInt {
        let p = self.p as usize;
        let arr = self.exponent_array();
        let mut out = vec![0i64; p];
        for (k, &c) in arr.iter().enumerate() {
            out[(p - k) % p] += c;
        }
        CycInt::from_exponent_counts(self.p, &out)
    }

    /// z * conj(z)
    pub fn norm_sq(&self) -> CycInt {
        self.mul(&self.conj()).expect("same characteristic")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The integer value if z lies in Z.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_integer().is_some()
    }

    /// Solves z = sign * magnitude * zeta^k, returning (sign, k).
    pub fn match_unimodular(&self, magnitude: i64) -> Option<(i8, u32)> {
        match_raw_canonical(&self.coeffs, magnitude)
    }
}

/// Canonical coefficient vector equals sign*mag*zeta^k?
pub(crate) fn match_raw_canonical(c: &[i64], mag: i64) -> Option<(i8, u32)> {
    if mag == 0 {
        return None;
    }
    let nonzero: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0).collect();
    if nonzero.len() == 1 {
        let v = c[nonzero[0]];
        if v == mag {
            return Some((1, nonzero[0] as u32));
        }
        if v == -mag {
            return Some((-1, nonzero[0] as u32));
        }
        return None;
    }
    // zeta^{p-1} = -(1 + ... + zeta^{p-2})
    if nonzero.len() == c.len() && c.iter().all(|&v| v == c[0]) {
        if c[0] == -mag {
            return Some((1, c.len() as u32));
        }
        if c[0] == mag {
            return Some((-1, c.len() as u32));
        }
    }
    None
}

/// The constant written as a lowercase epsilon: 1 when p = 1 mod 4 and the
/// imaginary unit when p = 3 mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonMarker {
    pub p: u32,
}

impl EpsilonMarker {
    pub fn new(p: u32) -> Self {
        EpsilonMarker { p }
    }

    pub fn is_imaginary(self) -> bool {
        self.p % 4 == 3
    }

    /// epsilon^{2s} = (-1)^{s(p-1)/2}
    pub fn even_power_sign(self, s: u64) -> i64 {
        if (s * ((self.p as u64 - 1) / 2)).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// epsilon^m p^{m/2} as an element of Z[zeta_p]. For odd m the square root
    /// is carried by the Gauss sum, G = epsilon sqrt(p).
    pub fn scaled_power(self, m: u32) -> CycInt {
        let p = self.p;
        if m.is_multiple_of(2) {
            CycInt::from_int(
                p,
                self.even_power_sign(m as u64 / 2) * (p as i64).pow(m / 2),
            )
        } else {
            let k = self.even_power_sign((m as u64 - 1) / 2) * (p as i64).pow((m - 1) / 2);
            CycInt::gauss_sum(p).scalar_mul(k)
        }
    }
}

/// Value and verdict of a Gaussian period check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussianPeriod {
    pub value: CycInt,
    pub expected: CycInt,
    pub holds: bool,
}

/// sum_{x in S} zeta^{Tr_1^m(a x)} over the nonzero squares S of GF(p^m),
/// compared with ((-1)^{m-1} eps^m p^{m/2} - 1)/2, with the leading term
/// negated when a is a nonsquare.
pub fn gaussian_period_check(field: &Arc<Field>, a: Elem) -> Result<GaussianPeriod> {
    let eta = field.quad_character(a)?;
    let p = field.p();
    let m = field.n();
    let (squares, _) = field.squares_partition();
    let mut counts = vec![0i64; p as usize];
    for x in squares {
        counts[field.tr_prime(field.mul(a, x)) as usize] += 1;
    }
    let value = CycInt::from_exponent_counts(p, &counts);
    let sign = if (m - 1).is_multiple_of(2) { 1 } else { -1 } * eta as i64;
    let lead = EpsilonMarker::new(p).scaled_power(m).scalar_mul(sign);
    let twice = lead.sub(&CycInt::one(p))?;
    let holds = value.scalar_mul(2) == twice;
    // expected = twice / 2 when divisible coefficientwise
    let expected = if twice.coeffs.iter().all(|c| c % 2 == 0) {
        CycInt {
            p,
            coeffs: twice.coeffs.iter().map(|c| c / 2).collect(),
        }
    } else {
        twice
    };
    Ok(GaussianPeriod {
        value,
        expected,
        holds,
    })
}
