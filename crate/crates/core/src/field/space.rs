use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Elem, Field};
use crate::error::{Error, Result};

/// V_r = GF(p^{r_1}) x ... x GF(p^{r_t}).
///
/// Points are addressed by a single index: component 0 occupies the lowest
/// base-p digits, so the index is also the F_p-coordinate vector read
/// little-endian.
#[derive(Clone, Debug)]
pub struct VSpace {
    p: u32,
    comps: Vec<Arc<Field>>,
    radix: Vec<u32>,
    size: u32,
    dim: u32,
}

/// A point of V_r, one encoding per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VPoint(pub Vec<Elem>);

impl VSpace {
    pub fn new(comps: Vec<Arc<Field>>) -> Result<Self> {
        let Some(first) = comps.first() else {
            return Err(Error::SpecInvariantViolated(
                "V_r needs at least one component".into(),
            ));
        };
        let p = first.p();
        if comps.iter().any(|f| f.p() != p) {
            return Err(Error::FieldMismatch);
        }
        let mut radix = Vec::with_capacity(comps.len());
        let mut size: u64 = 1;
        for f in &comps {
            radix.push(size as u32);
            size *= f.order() as u64;
            if size > super::MAX_FIELD_ORDER {
                return Err(Error::BudgetExceeded {
                    required: size as u128,
                    budget: super::MAX_FIELD_ORDER as u128,
                });
            }
        }
        let dim = comps.iter().map(|f| f.n()).sum();
        Ok(VSpace {
            p,
            comps,
            radix,
            size: size as u32,
            dim,
        })
    }

    /// Components are Conway fields of the given degrees.
    pub fn from_degrees(p: u32, degrees: &[u32]) -> Result<Self> {
        let comps = degrees
            .iter()
            .map(|&d| Field::conway(p, d))
            .collect::<Result<Vec<_>>>()?;
        VSpace::new(comps)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    /// r = sum r_j
    pub fn dim(&self) -> u32 {
        self.dim
    }
    /// p^r
    pub fn size(&self) -> u32 {
        self.size
    }
    pub fn degrees(&self) -> Vec<u32> {
        self.comps.iter().map(|f| f.n()).collect()
    }
    pub fn components(&self) -> &[Arc<Field>] {
        &self.comps
    }
    pub fn component(&self, j: usize) -> &Arc<Field> {
        &self.comps[j]
    }
    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    pub fn same_space(&self, other: &VSpace) -> bool {
        self.comps.len() == other.comps.len()
            && self
                .comps
                .iter()
                .zip(&other.comps)
                .all(|(a, b)| a.same_field(b))
    }

    #[inline]
    pub fn coord(&self, idx: u32, j: usize) -> Elem {
        Elem(idx / self.radix[j] % self.comps[j].order())
    }

    pub fn point(&self, idx: u32) -> VPoint {
        VPoint((0..self.comps.len()).map(|j| self.coord(idx, j)).collect())
    }

    pub fn index(&self, pt: &VPoint) -> Result<u32> {
        if pt.0.len() != self.comps.len() {
            return Err(Error::DomainMismatch);
        }
        let mut idx = 0u32;
        for (j, &x) in pt.0.iter().enumerate() {
            if x.0 >= self.comps[j].order() {
                return Err(Error::DomainMismatch);
            }
            idx += x.0 * self.radix[j];
        }
        Ok(idx)
    }

    pub fn from_coords(&self, coords: &[Elem]) -> u32 {
        coords.iter().zip(&self.radix).map(|(x, r)| x.0 * r).sum()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let mut out = 0;
        for (j, f) in self.comps.iter().enumerate() {
            out += f.add(self.coord(a, j), self.coord(b, j)).0 * self.radix[j];
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let mut out = 0;
        for (j, f) in self.comps.iter().enumerate() {
            out += f.neg(self.coord(a, j)).0 * self.radix[j];
        }
        out
    }

    /// Componentwise product with scalars already embedded per component.
    pub fn scale(&self, c: &[Elem], a: u32) -> u32 {
        let mut out = 0;
        for (j, f) in self.comps.iter().enumerate() {
            out += f.mul(c[j], self.coord(a, j)).0 * self.radix[j];
        }
        out
    }

    /// Embeds a GF(p^m) scalar into every component (m must divide each r_j).
    pub fn embed_scalar(&self, m: u32, c: Elem) -> Result<Vec<Elem>> {
        self.comps.iter().map(|f| f.embed(m, c)).collect()
    }

    /// <a, x>_r = sum_j Tr_1^{r_j}(a_j x_j), in 0..p.
    pub fn inner_product(&self, a: u32, x: u32) -> u32 {
        let mut acc = 0;
        for (j, f) in self.comps.iter().enumerate() {
            acc += f.tr_prime(f.mul(self.coord(a, j), self.coord(x, j)));
        }
        acc % self.p
    }

    /// sum_j Tr_s^{r_j}(beta_j x_j) in GF(p^s).
    pub fn mixed_trace_form(&self, beta: &VPoint, x: &VPoint, s: u32) -> Result<Elem> {
        if beta.0.len() != self.comps.len() || x.0.len() != self.comps.len() {
            return Err(Error::DomainMismatch);
        }
        let mut acc = Elem::ZERO;
        let mut target: Option<Arc<Field>> = None;
        for (j, f) in self.comps.iter().enumerate() {
            if s == 0 || f.n() % s != 0 {
                return Err(Error::NonDivisorDegree { m: s, n: f.n() });
            }
            let t = f.trace_to(f.mul(beta.0[j], x.0[j]), s)?;
            let sub = target.get_or_insert_with(|| f.subfield(s).expect("divisor checked"));
            acc = sub.add(acc, t);
        }
        Ok(acc)
    }

    /// Maps a to the F_p-coordinate vector v with <a,x>_r = v . digits(x).
    /// Returned as a point index, so the result is a permutation of 0..p^r.
    pub fn dual_coordinates(&self) -> Vec<u32> {
        // per component: a -> (Tr(a X^i))_i
        let mut per_comp: Vec<Vec<u32>> = Vec::with_capacity(self.comps.len());
        for f in &self.comps {
            let basis: Vec<Elem> = (0..f.n()).map(|i| Elem(f.p().pow(i))).collect();
            let v: Vec<u32> = f
                .elements()
                .map(|a| {
                    let mut out = 0u32;
                    for (i, &b) in basis.iter().enumerate() {
                        out += f.tr_prime(f.mul(a, b)) * self.p.pow(i as u32);
                    }
                    out
                })
                .collect();
            per_comp.push(v);
        }
        (0..self.size)
            .map(|a| {
                let mut out = 0;
                for (j, v) in per_comp.iter().enumerate() {
                    out += v[self.coord(a, j).0 as usize] * self.radix[j];
                }
                out
            })
            .collect()
    }
}
