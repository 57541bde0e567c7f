//! Walsh transforms of p-ary functions and bentness classification.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{match_raw_canonical, CycInt, EpsilonMarker};
use crate::error::{Error, Result};
use crate::field::VSpace;

/// Default cap on the number of domain points for spectral work.
pub const DEFAULT_SPECTRUM_BUDGET: u64 = 1 << 24;

/// f : V_r -> F_p as a value table indexed by point index.
#[derive(Clone, Debug)]
pub struct PAryFn {
    domain: Arc<VSpace>,
    table: Vec<u8>,
}

impl PAryFn {
    pub fn from_table(domain: Arc<VSpace>, table: Vec<u8>) -> Result<Self> {
        if table.len() != domain.size() as usize {
            return Err(Error::DomainMismatch);
        }
        if table.iter().any(|&v| v as u32 >= domain.p()) {
            return Err(Error::Parse("function value outside F_p".into()));
        }
        Ok(PAryFn { domain, table })
    }

    pub fn from_fn(domain: Arc<VSpace>, f: impl Fn(u32) -> u32 + Sync) -> Self {
        let p = domain.p();
        let table = (0..domain.size())
            .into_par_iter()
            .map(|x| (f(x) % p) as u8)
            .collect();
        PAryFn { domain, table }
    }

    pub fn domain(&self) -> &Arc<VSpace> {
        &self.domain
    }
    pub fn table(&self) -> &[u8] {
        &self.table
    }
    pub fn p(&self) -> u32 {
        self.domain.p()
    }
    pub fn eval(&self, x: u32) -> u32 {
        self.table[x as usize] as u32
    }
}

/// W_f(a) by direct summation.
pub fn walsh_point(f: &PAryFn, a: u32) -> Result<CycInt> {
    let d = &f.domain;
    if a >= d.size() {
        return Err(Error::DomainMismatch);
    }
    let p = d.p();
    let mut counts = vec![0i64; p as usize];
    for x in 0..d.size() {
        let e = (f.eval(x) + p - d.inner_product(a, x)) % p;
        counts[e as usize] += 1;
    }
    Ok(CycInt::from_exponent_counts(p, &counts))
}

/// Full spectrum, canonical coefficients stored flat.
#[derive(Clone, Debug)]
pub struct WalshSpectrum {
    p: u32,
    r: u32,
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub a: u32,
    pub coeffs: Vec<i64>,
}

impl WalshSpectrum {
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn r(&self) -> u32 {
        self.r
    }
    pub fn len(&self) -> usize {
        self.coeffs.len() / (self.p as usize - 1)
    }
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn coeffs(&self, a: u32) -> &[i64] {
        let w = self.p as usize - 1;
        &self.coeffs[a as usize * w..(a as usize + 1) * w]
    }
    pub fn get(&self, a: u32) -> CycInt {
        CycInt::from_coeffs(self.p, self.coeffs(a).to_vec()).expect("width")
    }

    /// sum_a |W(a)|^2 == p^{2r}
    pub fn parseval_holds(&self) -> bool {
        let mut acc = CycInt::zero(self.p);
        for a in 0..self.len() as u32 {
            acc = acc.add(&self.get(a).norm_sq()).expect("same p");
        }
        acc == CycInt::from_int(self.p, (self.p as i64).pow(2 * self.r))
    }

    pub fn entries(&self) -> Vec<SpectrumEntry> {
        (0..self.len() as u32)
            .map(|a| SpectrumEntry {
                a,
                coeffs: self.coeffs(a).to_vec(),
            })
            .collect()
    }
}

pub(crate) fn check_budget(points: u64, budget: u64) -> Result<()> {
    if points > budget {
        Err(Error::BudgetExceeded {
            required: points as u128,
            budget: budget as u128,
        })
    } else {
        Ok(())
    }
}

/// p-ary FFT over the digit coordinates: out[v] = sum_x zeta^{f(x) - v.x},
/// each entry an unreduced length-p exponent histogram.
fn digit_transform(p: usize, dim: u32, values: &[u8]) -> Vec<i32> {
    let n = values.len();
    let mut data = vec![0i32; n * p];
    for (x, &v) in values.iter().enumerate() {
        data[x * p + v as usize] = 1;
    }
    let mut stride = 1usize;
    for _ in 0..dim {
        let block = stride * p;
        let run = |chunk: &mut [i32]| {
            let mut inbuf = vec![0i32; p * p];
            for low in 0..stride {
                for t in 0..p {
                    let off = (low + t * stride) * p;
                    inbuf[t * p..(t + 1) * p].copy_from_slice(&chunk[off..off + p]);
                }
                for v in 0..p {
                    let off = (low + v * stride) * p;
                    let out = &mut chunk[off..off + p];
                    out.fill(0);
                    for t in 0..p {
                        // out[j] += in_t[(j + v t) mod p]
                        let s = v * t % p;
                        let src = &inbuf[t * p..(t + 1) * p];
                        for j in 0..p - s {
                            out[j] += src[j + s];
                        }
                        for j in p - s..p {
                            out[j] += src[j + s - p];
                        }
                    }
                }
            }
        };
        data.par_chunks_mut(block * p).for_each(run);
        stride = block;
    }
    data
}

/// Raw spectrum indexed by `a`, as unreduced exponent histograms.
pub(crate) struct RawSpectrum {
    pub p: usize,
    data: Vec<i32>,
    tmap: Arc<Vec<u32>>,
}

impl RawSpectrum {
    pub fn compute(f: &PAryFn, tmap: Arc<Vec<u32>>) -> Self {
        let p = f.p() as usize;
        let data = digit_transform(p, f.domain.dim(), &f.table);
        RawSpectrum { p, data, tmap }
    }

    #[inline]
    pub fn raw(&self, a: u32) -> &[i32] {
        let v = self.tmap[a as usize] as usize;
        &self.data[v * self.p..(v + 1) * self.p]
    }

    #[inline]
    pub fn canonical_into(&self, a: u32, out: &mut [i64]) {
        let r = self.raw(a);
        let top = r[self.p - 1] as i64;
        for k in 0..self.p - 1 {
            out[k] = r[k] as i64 - top;
        }
    }

    pub fn len(&self) -> usize {
        self.tmap.len()
    }
}

pub fn walsh_spectrum(f: &PAryFn) -> Result<WalshSpectrum> {
    walsh_spectrum_with_budget(f, DEFAULT_SPECTRUM_BUDGET)
}

pub fn walsh_spectrum_with_budget(f: &PAryFn, budget: u64) -> Result<WalshSpectrum> {
    check_budget(f.domain.size() as u64, budget)?;
    let raw = RawSpectrum::compute(f, Arc::new(f.domain.dual_coordinates()));
    let w = raw.p - 1;
    let mut coeffs = vec![0i64; raw.len() * w];
    for (a, chunk) in coeffs.chunks_mut(w).enumerate() {
        raw.canonical_into(a as u32, chunk);
    }
    Ok(WalshSpectrum {
        p: f.p(),
        r: f.domain.dim(),
        coeffs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BentVerdict {
    NotBent,
    Regular,
    WeaklyRegular,
    NonWeaklyRegular,
}

impl BentVerdict {
    pub fn is_bent(self) -> bool {
        self != BentVerdict::NotBent
    }
    pub fn is_weakly_regular(self) -> bool {
        matches!(self, BentVerdict::Regular | BentVerdict::WeaklyRegular)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BentClassification {
    pub verdict: BentVerdict,
    /// Constant sign for even r.
    pub epsilon: Option<i8>,
    /// For odd r: constant sign of W(a) relative to G p^{(r-1)/2} zeta^k.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gauss_sign: Option<i8>,
    pub dual: Option<Vec<u8>>,
    #[serde(skip)]
    pub marker: Option<EpsilonMarker>,
}

/// Per-point match of a spectrum value against +-p^{r/2} zeta^k (even r) or
/// +-G p^{(r-1)/2} zeta^k (odd r).
pub(crate) struct Matcher {
    p: u32,
    r: u32,
    mag: i64,
    gconj: Option<CycInt>,
}

impl Matcher {
    pub fn new(p: u32, r: u32) -> Self {
        if r.is_multiple_of(2) {
            Matcher {
                p,
                r,
                mag: (p as i64).pow(r / 2),
                gconj: None,
            }
        } else {
            Matcher {
                p,
                r,
                mag: (p as i64).pow(r.div_ceil(2)),
                gconj: Some(CycInt::gauss_sum(p).conj()),
            }
        }
    }

    pub fn matches(&self, canonical: &[i64]) -> Option<(i8, u32)> {
        match &self.gconj {
            None => match_raw_canonical(canonical, self.mag),
            Some(g) => {
                let w = CycInt::from_coeffs(self.p, canonical.to_vec()).expect("width");
                w.mul(g).expect("same p").match_unimodular(self.mag)
            }
        }
    }

    pub fn is_bent_value(&self, canonical: &[i64]) -> bool {
        let w = CycInt::from_coeffs(self.p, canonical.to_vec()).expect("width");
        w.norm_sq() == CycInt::from_int(self.p, (self.p as i64).pow(self.r))
    }
}

pub(crate) fn classify_raw(raw: &RawSpectrum, p: u32, r: u32) -> BentClassification {
    let matcher = Matcher::new(p, r);
    let n = raw.len();
    let mut buf = vec![0i64; p as usize - 1];
    let mut dual = vec![0u8; n];
    let mut signs = [false, false];
    let mut unmatched_bent = false;
    for a in 0..n as u32 {
        raw.canonical_into(a, &mut buf);
        match matcher.matches(&buf) {
            Some((s, k)) => {
                signs[(s < 0) as usize] = true;
                dual[a as usize] = k as u8;
            }
            None => {
                if matcher.is_bent_value(&buf) {
                    unmatched_bent = true;
                } else {
                    return BentClassification {
                        verdict: BentVerdict::NotBent,
                        epsilon: None,
                        gauss_sign: None,
                        dual: None,
                        marker: Some(EpsilonMarker::new(p)),
                    };
                }
            }
        }
    }
    let constant = !unmatched_bent && !(signs[0] && signs[1]);
    let sign: i8 = if signs[1] { -1 } else { 1 };
    let verdict = if !constant {
        BentVerdict::NonWeaklyRegular
    } else if sign == 1 && (r.is_multiple_of(2) || p % 4 == 1) {
        BentVerdict::Regular
    } else {
        BentVerdict::WeaklyRegular
    };
    BentClassification {
        verdict,
        epsilon: if constant && r.is_multiple_of(2) {
            Some(sign)
        } else {
            None
        },
        gauss_sign: if constant && r % 2 == 1 {
            Some(sign)
        } else {
            None
        },
        dual: if unmatched_bent { None } else { Some(dual) },
        marker: Some(EpsilonMarker::new(p)),
    }
}

pub fn classify_bent(f: &PAryFn) -> Result<BentClassification> {
    classify_bent_with_budget(f, DEFAULT_SPECTRUM_BUDGET)
}

pub fn classify_bent_with_budget(f: &PAryFn, budget: u64) -> Result<BentClassification> {
    check_budget(f.domain.size() as u64, budget)?;
    let raw = RawSpectrum::compute(f, Arc::new(f.domain.dual_coordinates()));
    Ok(classify_raw(&raw, f.p(), f.domain.dim()))
}

/// (f*)* = f(-x), with f* weakly regular.
pub fn dual_dual_check(f: &PAryFn) -> Result<bool> {
    let c = classify_bent(f)?;
    if !c.verdict.is_weakly_regular() {
        return Err(Error::NotWeaklyRegular);
    }
    let dual = PAryFn::from_table(f.domain.clone(), c.dual.expect("weakly regular has dual"))?;
    let cc = classify_bent(&dual)?;
    if !cc.verdict.is_weakly_regular() {
        return Ok(false);
    }
    let dd = cc.dual.expect("weakly regular has dual");
    let d = &f.domain;
    Ok((0..d.size()).all(|x| dd[x as usize] as u32 == f.eval(d.neg(x))))
}

/// p^r zeta^{f(x)} == sum_a W(a) zeta^{<a,x>}, checked for every x.
pub fn inverse_transform_holds(f: &PAryFn, spec: &WalshSpectrum) -> bool {
    let d = &f.domain;
    let p = d.p();
    let pr = (p as i64).pow(d.dim());
    (0..d.size()).all(|x| {
        let mut acc = CycInt::zero(p);
        for a in 0..d.size() {
            let z = CycInt::zeta_pow(p, d.inner_product(a, x) as i64);
            acc = acc.add(&spec.get(a).mul(&z).expect("p")).expect("p");
        }
        acc == CycInt::zeta_pow(p, f.eval(x) as i64).scalar_mul(pr)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Elem, Field};

    fn space(p: u32, degs: &[u32]) -> Arc<VSpace> {
        Arc::new(VSpace::from_degrees(p, degs).unwrap())
    }

    fn tr_square(p: u32, r: u32) -> PAryFn {
        let d = space(p, &[r]);
        let f = d.component(0).clone();
        PAryFn::from_fn(d, move |x| f.tr_prime(f.mul(Elem(x), Elem(x))))
    }

    #[test]
    fn zero_and_linear_functions() {
        let d = space(3, &[2]);
        let zero = PAryFn::from_fn(d.clone(), |_| 0);
        let s = walsh_spectrum(&zero).unwrap();
        assert_eq!(s.get(0), CycInt::from_int(3, 9));
        for a in 1..9 {
            assert!(s.get(a).is_zero());
        }
        assert_eq!(classify_bent(&zero).unwrap().verdict, BentVerdict::NotBent);
        let b = 5u32;
        let dd = d.clone();
        let lin = PAryFn::from_fn(d.clone(), move |x| dd.inner_product(b, x));
        let s = walsh_spectrum(&lin).unwrap();
        for a in 0..9 {
            let want = if a == b {
                CycInt::from_int(3, 9)
            } else {
                CycInt::zero(3)
            };
            assert_eq!(s.get(a), want);
        }
    }

    #[test]
    fn nine_term_oracle() {
        let f = tr_square(3, 2);
        let fld = Field::conway(3, 2).unwrap();
        let mut counts = [0i64; 3];
        for x in fld.elements() {
            counts[fld.tr_prime(fld.mul(x, x)) as usize] += 1;
        }
        let direct = CycInt::from_exponent_counts(3, &counts);
        assert_eq!(direct, CycInt::from_int(3, 3));
        assert_eq!(walsh_point(&f, 0).unwrap(), direct);
        assert_eq!(walsh_spectrum(&f).unwrap().get(0), direct);
    }

    #[test]
    fn fft_matches_direct_sum() {
        for (p, degs) in [(3, vec![2, 1]), (5, vec![2]), (3, vec![3])] {
            let d = space(p, &degs);
            let dd = d.clone();
            let f = PAryFn::from_fn(d.clone(), move |x| {
                let c0 = dd.coord(x, 0);
                dd.component(0).tr_prime(dd.component(0).pow(c0, 4)) + x % 2
            });
            let s = walsh_spectrum(&f).unwrap();
            for a in 0..d.size() {
                assert_eq!(s.get(a), walsh_point(&f, a).unwrap());
            }
            assert!(s.parseval_holds());
            assert!(inverse_transform_holds(&f, &s));
        }
    }

    #[test]
    fn quadratic_trace_classification() {
        let c = classify_bent(&tr_square(3, 2)).unwrap();
        assert!(c.verdict.is_weakly_regular());
        assert_eq!(c.epsilon, Some(1));
        // dual is Tr(-a^2/4)
        let fld = Field::conway(3, 2).unwrap();
        let four_inv = fld.inv(fld.from_int(4)).unwrap();
        for a in fld.elements() {
            let v = fld.neg(fld.mul(fld.mul(a, a), four_inv));
            assert_eq!(
                c.dual.as_ref().unwrap()[a.0 as usize] as u32,
                fld.tr_prime(v)
            );
        }
        let c4 = classify_bent(&tr_square(3, 4)).unwrap();
        assert_eq!(c4.verdict, BentVerdict::WeaklyRegular);
        assert_eq!(c4.epsilon, Some(-1));
        let s = walsh_spectrum(&tr_square(3, 4)).unwrap();
        for a in 0..81 {
            assert_eq!(s.get(a).norm_sq(), CycInt::from_int(3, 81));
        }
    }

    #[test]
    fn odd_dimension_matching_through_gauss_sum() {
        for (p, r) in [(3, 1), (3, 3), (5, 1), (7, 1)] {
            let c = classify_bent(&tr_square(p, r)).unwrap();
            assert!(c.verdict.is_weakly_regular(), "p={p} r={r}");
            assert!(c.gauss_sign.is_some() && c.epsilon.is_none());
        }
    }

    #[test]
    fn dual_of_dual() {
        assert!(dual_dual_check(&tr_square(3, 2)).unwrap());
        assert!(dual_dual_check(&tr_square(3, 4)).unwrap());
        assert!(dual_dual_check(&tr_square(5, 2)).unwrap());
        let d = space(3, &[2]);
        let zero = PAryFn::from_fn(d, |_| 0);
        assert_eq!(dual_dual_check(&zero), Err(Error::NotWeaklyRegular));
    }

    #[test]
    fn linear_structure_is_not_bent() {
        // f(x1, x2) = Tr(x1^2): derivative in the x2 direction vanishes
        let d = space(3, &[2, 2]);
        let dd = d.clone();
        let f = PAryFn::from_fn(d, move |x| {
            let k = dd.component(0);
            let c = dd.coord(x, 0);
            k.tr_prime(k.mul(c, c))
        });
        let s = walsh_spectrum(&f).unwrap();
        assert!((0..81).any(|a| s.get(a).norm_sq() == CycInt::from_int(3, 3i64.pow(6))));
        assert_eq!(classify_bent(&f).unwrap().verdict, BentVerdict::NotBent);
    }

    #[test]
    fn budget_refusal() {
        let f = tr_square(3, 4);
        assert!(matches!(
            walsh_spectrum_with_budget(&f, 80),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(walsh_point(&f, 81).is_err());
    }

    #[test]
    fn direct_sum_signs_multiply() {
        let d = space(3, &[2, 4]);
        let dd = d.clone();
        let f = PAryFn::from_fn(d, move |x| {
            let a = dd.component(0);
            let b = dd.component(1);
            let x0 = dd.coord(x, 0);
            let x1 = dd.coord(x, 1);
            a.tr_prime(a.mul(x0, x0)) + b.tr_prime(b.mul(x1, x1))
        });
        // (+1) * (-1)
        let c = classify_bent(&f).unwrap();
        assert_eq!(c.epsilon, Some(-1));
    }
}
