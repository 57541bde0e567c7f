//! The six vectorial dual-bent families, their components and closed-form
//! duals, and the checks around them.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycInt, EpsilonMarker};
use crate::error::{Error, Result};
use crate::field::{divisors, gcd_u64, mod_inverse, Elem, Field, VSpace};
use crate::walsh::{classify_raw, BentVerdict, PAryFn, RawSpectrum};

/// A sparse polynomial term c * x^e.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: u32,
    pub exp: u64,
}

/// Family parameters. Coefficients are element encodings in the field named
/// beside each one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum VectorialFnSpec {
    /// Tr_m^{r'}(a x y^e); a in GF(p^{r'}).
    #[serde(rename = "F1_xy_power")]
    XyPower {
        p: u32,
        r_prime: u32,
        m: u32,
        a: u32,
        e: u64,
    },
    /// Tr_m^{r'}(a x L(y)), L(y) = sum l_i y^{p^{m i}}; a, l_i in GF(p^{r'}).
    #[serde(rename = "F2_xy_linearized")]
    XyLinearized {
        p: u32,
        r_prime: u32,
        m: u32,
        a: u32,
        l: Vec<u32>,
    },
    /// Tr_m^r(a x^2); a in GF(p^r).
    #[serde(rename = "F3_quadratic_trace")]
    QuadraticTrace { p: u32, r: u32, m: u32, a: u32 },
    /// a_1 x_1^2 + ... + a_t x_t^2; a_i in GF(p^m).
    #[serde(rename = "F4_diagonal_quadratic")]
    DiagonalQuadratic { p: u32, m: u32, a: Vec<u32> },
    /// g(alpha G(x_1 x_2^{p^{r'}-2})) with G(x) = sum of `perm` terms and
    /// g(x) = Tr_m^{r'}(sum of `g` terms); everything in GF(p^{r'}).
    #[serde(rename = "F5_partial_spread")]
    PartialSpread {
        p: u32,
        r_prime: u32,
        m: u32,
        alpha: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perm: Option<Vec<Term>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        g: Option<Vec<Term>>,
    },
    /// H_{Tr_m^{r''}(gamma y_2^2)}(x) + Tr_m^{r''}(beta y_1 L(y_2)); alphas in
    /// GF(p^{r'}), beta, gamma and l_i in GF(p^{r''}).
    #[serde(rename = "F6_mixed")]
    Mixed {
        p: u32,
        r_prime: u32,
        r_second: u32,
        m: u32,
        alpha: [u32; 3],
        beta: u32,
        gamma: u32,
        l: Vec<u32>,
    },
}

impl VectorialFnSpec {
    pub fn p(&self) -> u32 {
        match self {
            VectorialFnSpec::XyPower { p, .. }
            | VectorialFnSpec::XyLinearized { p, .. }
            | VectorialFnSpec::QuadraticTrace { p, .. }
            | VectorialFnSpec::DiagonalQuadratic { p, .. }
            | VectorialFnSpec::PartialSpread { p, .. }
            | VectorialFnSpec::Mixed { p, .. } => *p,
        }
    }

    pub fn m(&self) -> u32 {
        match self {
            VectorialFnSpec::XyPower { m, .. }
            | VectorialFnSpec::XyLinearized { m, .. }
            | VectorialFnSpec::QuadraticTrace { m, .. }
            | VectorialFnSpec::DiagonalQuadratic { m, .. }
            | VectorialFnSpec::PartialSpread { m, .. }
            | VectorialFnSpec::Mixed { m, .. } => *m,
        }
    }

    pub fn family_tag(&self) -> &'static str {
        match self {
            VectorialFnSpec::XyPower { .. } => "F1",
            VectorialFnSpec::XyLinearized { .. } => "F2",
            VectorialFnSpec::QuadraticTrace { .. } => "F3",
            VectorialFnSpec::DiagonalQuadratic { .. } => "F4",
            VectorialFnSpec::PartialSpread { .. } => "F5",
            VectorialFnSpec::Mixed { .. } => "F6",
        }
    }

    /// Component degrees of the domain.
    pub fn degrees(&self) -> Vec<u32> {
        match self {
            VectorialFnSpec::XyPower { r_prime, .. }
            | VectorialFnSpec::XyLinearized { r_prime, .. }
            | VectorialFnSpec::PartialSpread { r_prime, .. } => vec![*r_prime, *r_prime],
            VectorialFnSpec::QuadraticTrace { r, .. } => vec![*r],
            VectorialFnSpec::DiagonalQuadratic { m, a, .. } => vec![*m; a.len()],
            VectorialFnSpec::Mixed {
                r_prime, r_second, ..
            } => vec![*r_prime, *r_second, *r_second],
        }
    }
}

/// What the family formulas predict, independent of any spectrum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFacts {
    /// Predicted Walsh sign of F_c, indexed by c.enc() - 1; `None` when the
    /// formula leaves Z (odd powers of epsilon).
    pub epsilon_by_c: Option<Vec<i8>>,
    /// e with sigma(c) = c^{-e}, reduced into 1..p^m-1.
    pub sigma_exponent: u64,
}

impl FamilyFacts {
    pub fn constant_epsilon(&self) -> Option<i8> {
        let v = self.epsilon_by_c.as_ref()?;
        if v.iter().all(|&x| x == v[0]) {
            Some(v[0])
        } else {
            None
        }
    }
}

/// F : V_r -> GF(p^m) backed by a table of codomain encodings.
#[derive(Clone, Debug)]
pub struct VectorialFn {
    domain: Arc<VSpace>,
    codomain: Arc<Field>,
    table: Vec<Elem>,
    spec: Option<VectorialFnSpec>,
    dual: Option<Arc<VectorialFn>>,
    facts: Option<FamilyFacts>,
}

impl VectorialFn {
    pub fn from_table(domain: Arc<VSpace>, codomain: Arc<Field>, table: Vec<Elem>) -> Result<Self> {
        if table.len() != domain.size() as usize {
            return Err(Error::DomainMismatch);
        }
        if domain.p() != codomain.p() {
            return Err(Error::FieldMismatch);
        }
        if table.iter().any(|v| v.0 >= codomain.order()) {
            return Err(Error::ElementOutOfRange(codomain.order() as u64));
        }
        Ok(VectorialFn {
            domain,
            codomain,
            table,
            spec: None,
            dual: None,
            facts: None,
        })
    }

    pub fn with_dual(mut self, dual: VectorialFn) -> Result<Self> {
        if !dual.domain.same_space(&self.domain) || !dual.codomain.same_field(&self.codomain) {
            return Err(Error::DomainMismatch);
        }
        self.dual = Some(Arc::new(dual));
        Ok(self)
    }

    pub fn domain(&self) -> &Arc<VSpace> {
        &self.domain
    }
    pub fn codomain(&self) -> &Arc<Field> {
        &self.codomain
    }
    pub fn table(&self) -> &[Elem] {
        &self.table
    }
    pub fn spec(&self) -> Option<&VectorialFnSpec> {
        self.spec.as_ref()
    }
    pub fn dual(&self) -> Option<&Arc<VectorialFn>> {
        self.dual.as_ref()
    }
    pub fn facts(&self) -> Option<&FamilyFacts> {
        self.facts.as_ref()
    }
    pub fn m(&self) -> u32 {
        self.codomain.n()
    }
    #[inline]
    pub fn eval(&self, x: u32) -> Elem {
        self.table[x as usize]
    }
}

fn tabulate(domain: &VSpace, f: impl Fn(&[Elem]) -> Elem + Sync) -> Vec<Elem> {
    let t = domain.num_components();
    (0..domain.size())
        .into_par_iter()
        .map_init(
            || vec![Elem::ZERO; t],
            |buf, idx| {
                for (j, slot) in buf.iter_mut().enumerate() {
                    *slot = domain.coord(idx, j);
                }
                f(buf)
            },
        )
        .collect()
}

fn violated(msg: impl Into<String>) -> Error {
    Error::SpecInvariantViolated(msg.into())
}

fn check_elem(f: &Field, v: u32, what: &str) -> Result<Elem> {
    f.elem(v as u64).map_err(|_| {
        violated(format!(
            "{what} is not an element of GF({}^{})",
            f.p(),
            f.n()
        ))
    })
}

fn check_nonzero(f: &Field, v: u32, what: &str) -> Result<Elem> {
    let e = check_elem(f, v, what)?;
    if e.is_zero() {
        return Err(violated(format!("{what} must be nonzero")));
    }
    Ok(e)
}

fn check_divides(m: u32, n: u32, what: &str) -> Result<()> {
    if m == 0 || !n.is_multiple_of(m) {
        return Err(violated(format!("m must divide {what}")));
    }
    Ok(())
}

/// L(y) = sum l_i y^{p^{m i}} as a table, plus its inverse; errors unless L
/// permutes the field.
fn linearized_tables(f: &Field, m: u32, l: &[u32]) -> Result<(Vec<Elem>, Vec<Elem>)> {
    if l.is_empty() {
        return Err(violated("L needs at least one coefficient"));
    }
    let coeffs: Vec<Elem> = l
        .iter()
        .map(|&c| check_elem(f, c, "L coefficient"))
        .collect::<Result<_>>()?;
    let table: Vec<Elem> = f
        .elements()
        .map(|y| {
            coeffs.iter().enumerate().fold(Elem::ZERO, |acc, (i, &c)| {
                f.add(acc, f.mul(c, f.frobenius(y, m * i as u32 % f.n())))
            })
        })
        .collect();
    let mut inv = vec![Elem(u32::MAX); table.len()];
    for (y, &v) in table.iter().enumerate() {
        if inv[v.0 as usize].0 != u32::MAX {
            return Err(violated("L does not permute the field"));
        }
        inv[v.0 as usize] = Elem(y as u32);
    }
    Ok((table, inv))
}

fn eval_terms(f: &Field, terms: &[Term], x: Elem) -> Elem {
    terms.iter().fold(Elem::ZERO, |acc, t| {
        f.add(acc, f.mul(Elem(t.coeff), f.pow(x, t.exp)))
    })
}

fn power_of_eps(p: u32, k: u32) -> Option<i64> {
    if k.is_multiple_of(2) {
        Some(EpsilonMarker::new(p).even_power_sign(k as u64 / 2))
    } else {
        None
    }
}

/// Materialize a family instance with its closed-form dual and predicted facts.
pub fn build_family(spec: &VectorialFnSpec) -> Result<VectorialFn> {
    let p = spec.p();
    let m = spec.m();
    if m == 0 {
        return Err(violated("m must be positive"));
    }
    let codomain = Field::conway(p, m)?;
    let qm = codomain.order() as u64;
    let domain = Arc::new(VSpace::from_degrees(p, &spec.degrees())?);
    let nonzero_c: Vec<Elem> = codomain.nonzero_elements().collect();
    let (table, dual, facts) = match spec {
        VectorialFnSpec::XyPower { r_prime, a, e, .. } => {
            check_divides(m, *r_prime, "r'")?;
            let k = domain.component(0).clone();
            let a = check_nonzero(&k, *a, "a")?;
            let order = k.order() as u64 - 1;
            if *e == 0 || gcd_u64(*e % order, order) != 1 {
                return Err(violated(format!("gcd(e, p^r' - 1) must be 1 (e = {e})")));
            }
            let u = mod_inverse(*e % order, order);
            let neg_a_u = k.neg(k.pow(k.inv(a)?, u));
            let kk = k.clone();
            let t = tabulate(&domain, |c| {
                kk.trace_to(kk.mul(a, kk.mul(c[0], kk.pow(c[1], *e))), m)
                    .expect("m | r'")
            });
            let kk = k.clone();
            let d = tabulate(&domain, |c| {
                kk.trace_to(kk.mul(neg_a_u, kk.mul(kk.pow(c[0], u), c[1])), m)
                    .expect("m | r'")
            });
            let sigma_e = reduce_exp(u, qm - 1);
            (
                t,
                d,
                FamilyFacts {
                    epsilon_by_c: Some(vec![1; nonzero_c.len()]),
                    sigma_exponent: sigma_e,
                },
            )
        }
        VectorialFnSpec::XyLinearized { r_prime, a, l, .. } => {
            check_divides(m, *r_prime, "r'")?;
            let k = domain.component(0).clone();
            let a = check_nonzero(&k, *a, "a")?;
            let (lt, linv) = linearized_tables(&k, m, l)?;
            let a_inv = k.inv(a)?;
            let kk = k.clone();
            let t = tabulate(&domain, |c| {
                kk.trace_to(kk.mul(a, kk.mul(c[0], lt[c[1].0 as usize])), m)
                    .expect("m | r'")
            });
            let kk = k.clone();
            let d = tabulate(&domain, |c| {
                let z = linv[kk.mul(a_inv, c[0]).0 as usize];
                kk.trace_to(kk.neg(kk.mul(z, c[1])), m).expect("m | r'")
            });
            (
                t,
                d,
                FamilyFacts {
                    epsilon_by_c: Some(vec![1; nonzero_c.len()]),
                    sigma_exponent: 1,
                },
            )
        }
        VectorialFnSpec::QuadraticTrace { r, a, .. } => {
            check_divides(m, *r, "r")?;
            let k = domain.component(0).clone();
            let a = check_nonzero(&k, *a, "a")?;
            let inv4a = k.inv(k.mul(k.from_int(4), a))?;
            let kk = k.clone();
            let t = tabulate(&domain, |c| {
                kk.trace_to(kk.mul(a, kk.mul(c[0], c[0])), m)
                    .expect("m | r")
            });
            let kk = k.clone();
            let d = tabulate(&domain, |c| {
                kk.trace_to(kk.neg(kk.mul(inv4a, kk.mul(c[0], c[0]))), m)
                    .expect("m | r")
            });
            // (-1)^{r-1} eps^r eta_r(a c)
            let eps = power_of_eps(p, *r).map(|er| {
                nonzero_c
                    .iter()
                    .map(|&c| {
                        let ce = k.embed(m, c).expect("m | r");
                        let sign = if (*r - 1) % 2 == 0 { 1 } else { -1 };
                        (sign * er * k.quad_character(k.mul(a, ce)).expect("nonzero") as i64) as i8
                    })
                    .collect()
            });
            (
                t,
                d,
                FamilyFacts {
                    epsilon_by_c: eps,
                    sigma_exponent: 1,
                },
            )
        }
        VectorialFnSpec::DiagonalQuadratic { a, .. } => {
            if a.is_empty() {
                return Err(violated("t must be at least 1"));
            }
            let k = codomain.clone();
            let coeffs: Vec<Elem> = a
                .iter()
                .map(|&c| check_nonzero(&k, c, "a_i"))
                .collect::<Result<_>>()?;
            let inv4: Vec<Elem> = coeffs
                .iter()
                .map(|&c| k.neg(k.inv(k.mul(k.from_int(4), c)).expect("nonzero")))
                .collect();
            let sq: Vec<Elem> = k.elements().map(|x| k.mul(x, x)).collect();
            let kk = k.clone();
            let t = tabulate(&domain, |c| {
                c.iter().zip(&coeffs).fold(Elem::ZERO, |acc, (&x, &ai)| {
                    kk.add(acc, kk.mul(ai, sq[x.0 as usize]))
                })
            });
            let kk = k.clone();
            let d = tabulate(&domain, |c| {
                c.iter().zip(&inv4).fold(Elem::ZERO, |acc, (&x, &bi)| {
                    kk.add(acc, kk.mul(bi, sq[x.0 as usize]))
                })
            });
            let tt = coeffs.len() as u32;
            let prod = coeffs.iter().fold(Elem::ONE, |acc, &c| k.mul(acc, c));
            // (-1)^{(m-1)t} eps^{mt} eta_m(c^t prod)
            let eps = power_of_eps(p, m * tt).map(|emt| {
                nonzero_c
                    .iter()
                    .map(|&c| {
                        let sign = if ((m - 1) * tt).is_multiple_of(2) {
                            1
                        } else {
                            -1
                        };
                        let eta = k
                            .quad_character(k.mul(k.pow(c, tt as u64), prod))
                            .expect("nonzero") as i64;
                        (sign * emt * eta) as i8
                    })
                    .collect()
            });
            (
                t,
                d,
                FamilyFacts {
                    epsilon_by_c: eps,
                    sigma_exponent: 1,
                },
            )
        }
        VectorialFnSpec::PartialSpread {
            r_prime,
            alpha,
            perm,
            g,
            ..
        } => {
            check_divides(m, *r_prime, "r'")?;
            let k = domain.component(0).clone();
            let alpha = check_nonzero(&k, *alpha, "alpha")?;
            let id = vec![Term { coeff: 1, exp: 1 }];
            let perm_terms = perm.clone().unwrap_or_else(|| id.clone());
            let g_terms = g.clone().unwrap_or(id);
            for t in perm_terms.iter().chain(&g_terms) {
                check_elem(&k, t.coeff, "polynomial coefficient")?;
            }
            let gp: Vec<Elem> = k
                .elements()
                .map(|x| eval_terms(&k, &perm_terms, x))
                .collect();
            let mut seen = vec![false; gp.len()];
            for &v in &gp {
                if std::mem::replace(&mut seen[v.0 as usize], true) {
                    return Err(violated("G is not a permutation"));
                }
            }
            if !gp[0].is_zero() {
                return Err(violated("G(0) must be 0"));
            }
            let gb: Vec<Elem> = k
                .elements()
                .map(|x| k.trace_to(eval_terms(&k, &g_terms, x), m).expect("m | r'"))
                .collect();
            let mut fibers = vec![0u64; qm as usize];
            for v in &gb {
                fibers[v.0 as usize] += 1;
            }
            let want = (k.order() as u64) / qm;
            if fibers.iter().any(|&c| c != want) {
                return Err(violated("g is not balanced"));
            }
            let e2 = k.order() as u64 - 2;
            let comp: Vec<Elem> = k
                .elements()
                .map(|z| gb[k.mul(alpha, gp[z.0 as usize]).0 as usize])
                .collect();
            let kk = k.clone();
            let t = tabulate(&domain, |c| comp[kk.mul(c[0], kk.pow(c[1], e2)).0 as usize]);
            let kk = k.clone();
            let d = tabulate(&domain, |c| {
                comp[kk.neg(kk.mul(kk.pow(c[0], e2), c[1])).0 as usize]
            });
            (
                t,
                d,
                FamilyFacts {
                    epsilon_by_c: Some(vec![1; nonzero_c.len()]),
                    sigma_exponent: reduce_exp(qm - 2, qm - 1),
                },
            )
        }
        VectorialFnSpec::Mixed {
            r_prime,
            r_second,
            alpha,
            beta,
            gamma,
            l,
            ..
        } => {
            check_divides(m, *r_prime, "r'")?;
            check_divides(m, *r_second, "r''")?;
            let k1 = domain.component(0).clone();
            let k2 = domain.component(1).clone();
            let al: Vec<Elem> = alpha
                .iter()
                .enumerate()
                .map(|(j, &v)| check_nonzero(&k1, v, &format!("alpha_{}", j + 1)))
                .collect::<Result<_>>()?;
            let beta = check_nonzero(&k2, *beta, "beta")?;
            let gamma = check_nonzero(&k2, *gamma, "gamma")?;
            let (lt, linv) = linearized_tables(&k2, m, l)?;
            // class of an index in GF(p^m): 0, square, nonsquare
            let class = |i: Elem| -> usize {
                if i.is_zero() {
                    0
                } else if codomain.quad_character(i).expect("nonzero") == 1 {
                    1
                } else {
                    2
                }
            };
            let inv4 = k1.inv(k1.from_int(4))?;
            let h: Vec<Vec<Elem>> = al
                .iter()
                .map(|&a| {
                    k1.elements()
                        .map(|x| k1.trace_to(k1.mul(a, k1.mul(x, x)), m).expect("m | r'"))
                        .collect()
                })
                .collect();
            let rr: Vec<Vec<Elem>> = al
                .iter()
                .map(|&a| {
                    let c = k1.neg(k1.mul(inv4, k1.inv(a).expect("nonzero")));
                    k1.elements()
                        .map(|x| k1.trace_to(k1.mul(c, k1.mul(x, x)), m).expect("m | r'"))
                        .collect()
                })
                .collect();
            let sel: Vec<usize> = k2
                .elements()
                .map(|y| {
                    class(
                        k2.trace_to(k2.mul(gamma, k2.mul(y, y)), m)
                            .expect("m | r''"),
                    )
                })
                .collect();
            let q2 = k2.order() as usize;
            let mut gt = vec![Elem::ZERO; q2 * q2];
            for y1 in k2.elements() {
                for y2 in k2.elements() {
                    gt[y1.0 as usize * q2 + y2.0 as usize] = k2
                        .trace_to(k2.mul(beta, k2.mul(y1, lt[y2.0 as usize])), m)
                        .expect("m | r''");
                }
            }
            let beta_inv = k2.inv(beta)?;
            // w(y1) = L^{-1}(beta^{-1} y1)
            let w: Vec<Elem> = k2
                .elements()
                .map(|y1| linv[k2.mul(beta_inv, y1).0 as usize])
                .collect();
            let dsel: Vec<usize> = w
                .iter()
                .map(|&wy| {
                    class(
                        k2.trace_to(k2.mul(gamma, k2.mul(wy, wy)), m)
                            .expect("m | r''"),
                    )
                })
                .collect();
            let mut dg = vec![Elem::ZERO; q2 * q2];
            for y1 in k2.elements() {
                for y2 in k2.elements() {
                    dg[y1.0 as usize * q2 + y2.0 as usize] = k2
                        .trace_to(k2.neg(k2.mul(w[y1.0 as usize], y2)), m)
                        .expect("m | r''");
                }
            }
            let cm = codomain.clone();
            let t = tabulate(&domain, |c| {
                let (x, y1, y2) = (c[0].0 as usize, c[1].0 as usize, c[2].0 as usize);
                cm.add(h[sel[y2]][x], gt[y1 * q2 + y2])
            });
            let cm = codomain.clone();
            let d = tabulate(&domain, |c| {
                let (x, y1, y2) = (c[0].0 as usize, c[1].0 as usize, c[2].0 as usize);
                cm.add(rr[dsel[y1]][x], dg[y1 * q2 + y2])
            });
            // -eps^{r'} eta_{r'}(alpha_1), when all alphas share a square class and 2m | r'
            let etas: Vec<i8> = al
                .iter()
                .map(|&a| k1.quad_character(a).expect("nonzero"))
                .collect();
            let eps = match power_of_eps(p, *r_prime) {
                Some(er) if etas.iter().all(|&e| e == etas[0]) && r_prime % (2 * m) == 0 => {
                    Some(vec![(-er * etas[0] as i64) as i8; nonzero_c.len()])
                }
                _ => None,
            };
            (
                t,
                d,
                FamilyFacts {
                    epsilon_by_c: eps,
                    sigma_exponent: 1,
                },
            )
        }
    };
    let dual_fn = VectorialFn::from_table(domain.clone(), codomain.clone(), dual)?;
    let mut f = VectorialFn::from_table(domain, codomain, table)?.with_dual(dual_fn)?;
    f.spec = Some(spec.clone());
    f.facts = Some(facts);
    Ok(f)
}

fn reduce_exp(e: u64, order: u64) -> u64 {
    let r = e % order;
    if r == 0 {
        order
    } else {
        r
    }
}

/// F_c(x) = Tr_1^m(c F(x)).
pub fn component(f: &VectorialFn, c: Elem) -> Result<PAryFn> {
    if c.is_zero() {
        return Err(Error::ZeroComponentIndex);
    }
    if c.0 >= f.codomain.order() {
        return Err(Error::ElementOutOfRange(c.0 as u64));
    }
    let k = &f.codomain;
    let table: Vec<u8> = f
        .table
        .par_iter()
        .map(|&v| k.tr_prime(k.mul(c, v)) as u8)
        .collect();
    PAryFn::from_table(f.domain.clone(), table)
}

/// Cap on (p^m - 1) * r * p^{r+2}, the cost of spectra for every component.
pub const DEFAULT_SPECTRAL_WORK: u64 = 1 << 34;

struct ComponentSpectra {
    verdicts: Vec<BentVerdict>,
    epsilons: Vec<Option<i8>>,
    duals: Vec<Option<Vec<u8>>>,
}

fn spectral_work(f: &VectorialFn) -> u128 {
    let p = f.domain.p() as u128;
    let r = f.domain.dim();
    (f.codomain.order() as u128 - 1) * r as u128 * p.pow(r + 2)
}

fn all_component_spectra(f: &VectorialFn, work_budget: u64) -> Result<ComponentSpectra> {
    let work = spectral_work(f);
    if work > work_budget as u128 {
        return Err(Error::BudgetExceeded {
            required: work,
            budget: work_budget as u128,
        });
    }
    let tmap = Arc::new(f.domain.dual_coordinates());
    let (p, r) = (f.domain.p(), f.domain.dim());
    let mut verdicts = Vec::new();
    let mut epsilons = Vec::new();
    let mut duals = Vec::new();
    for c in f.codomain.nonzero_elements() {
        let fc = component(f, c)?;
        let raw = RawSpectrum::compute(&fc, tmap.clone());
        let cl = classify_raw(&raw, p, r);
        verdicts.push(cl.verdict);
        epsilons.push(cl.epsilon);
        duals.push(cl.dual);
    }
    Ok(ComponentSpectra {
        verdicts,
        epsilons,
        duals,
    })
}

/// Lookup from the trace vector (Tr(b_i y))_i, packed base p, back to y.
fn trace_vector_inverse(k: &Field) -> (Vec<Elem>, Vec<u32>) {
    let basis: Vec<Elem> = (0..k.n()).map(|i| Elem(k.p().pow(i))).collect();
    let mut inv = vec![Elem::ZERO; k.order() as usize];
    for y in k.elements() {
        let key: u32 = basis
            .iter()
            .enumerate()
            .map(|(i, &b)| k.tr_prime(k.mul(b, y)) * k.p().pow(i as u32))
            .sum();
        inv[key as usize] = y;
    }
    (basis, inv.iter().map(|e| e.0).collect())
}

/// G with G_{c^{-e}} = dual(F_c), if one exists for this e.
fn reconstruct_dual(k: &Field, duals: &[Vec<u8>], e: u64) -> Option<Vec<Elem>> {
    let order = k.order() as u64 - 1;
    let u = mod_inverse(e % order, order);
    let (basis, inv) = trace_vector_inverse(k);
    // c_i with c_i^{-e} = b_i, i.e. c_i = b_i^{-u}
    let cs: Vec<Elem> = basis
        .iter()
        .map(|&b| k.pow(k.inv(b).expect("nonzero"), u))
        .collect();
    let n = duals[0].len();
    let p = k.p();
    let g: Vec<Elem> = (0..n)
        .map(|x| {
            let key: u32 = cs
                .iter()
                .enumerate()
                .map(|(i, c)| duals[c.0 as usize - 1][x] as u32 * p.pow(i as u32))
                .sum();
            Elem(inv[key as usize])
        })
        .collect();
    for c in k.nonzero_elements() {
        let s = k.pow(k.inv(c).expect("nonzero"), e);
        let d = &duals[c.0 as usize - 1];
        if (0..n).any(|x| d[x] as u32 != k.tr_prime(k.mul(s, g[x]))) {
            return None;
        }
    }
    Some(g)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DualSource {
    ClosedForm,
    PowerMap,
    Span,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VdbReport {
    pub is_vdb: bool,
    pub all_components_bent: bool,
    pub all_components_weakly_regular: bool,
    /// (c, sigma(c)) for every nonzero c, when sigma is known.
    pub sigma: Option<Vec<(u32, u32)>>,
    pub sigma_exponent: Option<u64>,
    pub dual_source: Option<DualSource>,
    /// Per-c Walsh sign (even r, weakly regular components only).
    pub epsilons: Vec<Option<i8>>,
}

pub fn verify_vectorial_dual_bent(f: &VectorialFn) -> Result<VdbReport> {
    verify_vectorial_dual_bent_with_budget(f, DEFAULT_SPECTRAL_WORK)
}

pub fn verify_vectorial_dual_bent_with_budget(
    f: &VectorialFn,
    work_budget: u64,
) -> Result<VdbReport> {
    let cs = all_component_spectra(f, work_budget)?;
    let k = &f.codomain;
    let all_bent = cs.verdicts.iter().all(|v| v.is_bent());
    let all_wr = cs.verdicts.iter().all(|v| v.is_weakly_regular());
    let mut report = VdbReport {
        is_vdb: false,
        all_components_bent: all_bent,
        all_components_weakly_regular: all_wr,
        sigma: None,
        sigma_exponent: None,
        dual_source: None,
        epsilons: cs.epsilons.clone(),
    };
    if !all_bent || cs.duals.iter().any(|d| d.is_none()) {
        return Ok(report);
    }
    let duals: Vec<Vec<u8>> = cs.duals.into_iter().map(|d| d.expect("checked")).collect();
    // closed-form dual: match each (F_c)* to some (F*)_{c'}
    if let Some(d) = &f.dual {
        let mut by_table: HashMap<Vec<u8>, u32> = HashMap::new();
        for c2 in k.nonzero_elements() {
            by_table.insert(component(d, c2)?.table().to_vec(), c2.0);
        }
        let sigma: Option<Vec<(u32, u32)>> = k
            .nonzero_elements()
            .map(|c| by_table.get(&duals[c.0 as usize - 1]).map(|&s| (c.0, s)))
            .collect();
        if let Some(sigma) = sigma {
            let mut image: Vec<u32> = sigma.iter().map(|&(_, s)| s).collect();
            image.sort();
            image.dedup();
            if image.len() == sigma.len() {
                report.is_vdb = true;
                report.sigma_exponent = power_exponent(k, &sigma);
                report.sigma = Some(sigma);
                report.dual_source = Some(DualSource::ClosedForm);
                return Ok(report);
            }
        }
    }
    // sigma(c) = c^{-e}
    let order = k.order() as u64 - 1;
    for e in 1..=order {
        if gcd_u64(e, order) != 1 {
            continue;
        }
        if reconstruct_dual(k, &duals, e).is_some() {
            report.is_vdb = true;
            report.sigma_exponent = Some(e);
            report.sigma = Some(
                k.nonzero_elements()
                    .map(|c| (c.0, k.pow(k.inv(c).expect("nonzero"), e).0))
                    .collect(),
            );
            report.dual_source = Some(DualSource::PowerMap);
            return Ok(report);
        }
    }
    // general case: the duals together with 0 must form an F_p-space of dimension m
    report.is_vdb = duals_form_space(f.domain.p(), k.n(), &duals);
    if report.is_vdb {
        report.dual_source = Some(DualSource::Span);
    }
    Ok(report)
}

fn power_exponent(k: &Field, sigma: &[(u32, u32)]) -> Option<u64> {
    let order = k.order() as u64 - 1;
    (1..=order).find(|&e| {
        gcd_u64(e, order) == 1
            && sigma
                .iter()
                .all(|&(c, s)| k.pow(k.inv(Elem(c)).expect("nonzero"), e) == Elem(s))
    })
}

fn duals_form_space(p: u32, m: u32, duals: &[Vec<u8>]) -> bool {
    let n = duals[0].len();
    let add = |a: &[u8], b: &[u8], k: u32| -> Vec<u8> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| ((x as u32 + k * y as u32) % p) as u8)
            .collect()
    };
    let mut basis: Vec<Vec<u8>> = Vec::new();
    let mut span: Vec<Vec<u8>> = vec![vec![0u8; n]];
    for d in duals {
        if span.contains(d) {
            continue;
        }
        if basis.len() == m as usize {
            return false;
        }
        basis.push(d.clone());
        let mut next = Vec::with_capacity(span.len() * p as usize);
        for s in &span {
            for k in 0..p {
                next.push(add(s, d, k));
            }
        }
        span = next;
    }
    let mut want: Vec<Vec<u8>> = duals.to_vec();
    want.push(vec![0u8; n]);
    want.sort();
    span.sort();
    basis.len() == m as usize && span == want
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionAMethod {
    /// Every component spectrum computed.
    Spectral,
    /// Family formulas for epsilon and sigma, exhaustive structural checks on
    /// F and the closed-form dual, and direct Walsh sums at sample points.
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Spectral,
    ClosedForm,
}

#[derive(Clone, Copy, Debug)]
pub struct ConditionAOptions {
    pub method: MethodChoice,
    pub spectral_work_budget: u64,
}

impl Default for ConditionAOptions {
    fn default() -> Self {
        ConditionAOptions {
            method: MethodChoice::Auto,
            spectral_work_budget: DEFAULT_SPECTRAL_WORK,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionAReport {
    pub passes: bool,
    pub method: ConditionAMethod,
    pub epsilon: Option<i8>,
    pub e: Option<u64>,
    pub matching_e: Vec<u64>,
    pub degrees_ok: bool,
    pub zero_at_origin: bool,
    pub even: bool,
    pub constant_epsilon: bool,
    pub sigma_power_form: bool,
    pub dual_homogeneous: bool,
    pub dual_zero_at_origin: bool,
    /// Reconstructed dual equals the attached closed form (spectral method only).
    pub closed_form_dual_agrees: Option<bool>,
    pub failures: Vec<String>,
}

pub fn verify_condition_a(f: &VectorialFn) -> Result<ConditionAReport> {
    verify_condition_a_with(f, ConditionAOptions::default())
}

pub fn verify_condition_a_with(
    f: &VectorialFn,
    opts: ConditionAOptions,
) -> Result<ConditionAReport> {
    let d = &f.domain;
    let k = &f.codomain;
    let m = k.n();
    let r = d.dim();
    let mut failures = Vec::new();
    let degrees_ok =
        r >= 4 && r.is_multiple_of(2) && m <= r / 2 && d.degrees().iter().all(|rj| rj % m == 0);
    if !degrees_ok {
        failures.push(format!(
            "degree arithmetic: need even r >= 4, m <= r/2, m | r_j (r={r}, m={m})"
        ));
    }
    let zero_at_origin = f.eval(0).is_zero();
    if !zero_at_origin {
        failures.push("F(0) != 0".into());
    }
    let even = (0..d.size())
        .into_par_iter()
        .all(|x| f.eval(d.neg(x)) == f.eval(x));
    if !even {
        failures.push("F(-x) != F(x)".into());
    }
    let method = match opts.method {
        MethodChoice::Spectral => ConditionAMethod::Spectral,
        MethodChoice::ClosedForm => ConditionAMethod::ClosedForm,
        MethodChoice::Auto => {
            if spectral_work(f) <= opts.spectral_work_budget as u128 {
                ConditionAMethod::Spectral
            } else {
                ConditionAMethod::ClosedForm
            }
        }
    };
    let scalar_ok = d.degrees().iter().all(|rj| rj % m == 0);
    let order = k.order() as u64 - 1;
    let mut report = ConditionAReport {
        passes: false,
        method,
        epsilon: None,
        e: None,
        matching_e: Vec::new(),
        degrees_ok,
        zero_at_origin,
        even,
        constant_epsilon: false,
        sigma_power_form: false,
        dual_homogeneous: false,
        dual_zero_at_origin: false,
        closed_form_dual_agrees: None,
        failures: Vec::new(),
    };
    match method {
        ConditionAMethod::Spectral => {
            let cs =
                all_component_spectra(f, opts.spectral_work_budget.max(spectral_work(f) as u64))?;
            if !cs.verdicts.iter().all(|v| v.is_weakly_regular()) {
                failures.push("some component is not weakly regular bent".into());
            }
            let eps: Vec<i8> = cs.epsilons.iter().filter_map(|e| *e).collect();
            if eps.len() == cs.epsilons.len() && eps.iter().all(|&e| e == eps[0]) {
                report.constant_epsilon = true;
                report.epsilon = Some(eps[0]);
            } else {
                failures.push("epsilon_{F_c} is not constant in c".into());
            }
            if cs.duals.iter().all(|x| x.is_some()) {
                let duals: Vec<Vec<u8>> =
                    cs.duals.into_iter().map(|x| x.expect("checked")).collect();
                let mut chosen: Option<(u64, Vec<Elem>)> = None;
                for e in 1..=order {
                    if gcd_u64(e, order) != 1 {
                        continue;
                    }
                    if let Some(g) = reconstruct_dual(k, &duals, e) {
                        report.matching_e.push(e);
                        if chosen.is_none() && scalar_ok && homogeneous_with(d, k, &g, e + 1) {
                            chosen = Some((e, g));
                        }
                    }
                }
                report.sigma_power_form = !report.matching_e.is_empty();
                if !report.sigma_power_form {
                    failures.push("no e with (F_c)* = (F*)_{c^{-e}}".into());
                }
                match chosen {
                    Some((e, g)) => {
                        report.e = Some(e);
                        report.dual_homogeneous = true;
                        report.dual_zero_at_origin = g[0].is_zero();
                        if let Some(cf) = &f.dual {
                            report.closed_form_dual_agrees = Some(cf.table == g);
                        }
                    }
                    None if report.sigma_power_form => {
                        report.e = report.matching_e.first().copied();
                        failures.push("F*(cx) != c^{e+1} F*(x)".into());
                    }
                    None => {}
                }
            } else {
                failures.push("some component has no dual".into());
            }
        }
        ConditionAMethod::ClosedForm => {
            let (Some(facts), Some(dual)) = (&f.facts, &f.dual) else {
                return Err(Error::BudgetExceeded {
                    required: spectral_work(f),
                    budget: opts.spectral_work_budget as u128,
                });
            };
            match facts.constant_epsilon() {
                Some(e) => {
                    report.constant_epsilon = true;
                    report.epsilon = Some(e);
                }
                None => failures.push("epsilon_{F_c} is not constant in c".into()),
            }
            let e = facts.sigma_exponent;
            if gcd_u64(e, order) == 1 {
                report.sigma_power_form = true;
                report.e = Some(e);
                report.matching_e.push(e);
            } else {
                failures.push(format!("gcd(e, p^m - 1) != 1 for e = {e}"));
            }
            report.dual_homogeneous = scalar_ok && homogeneous_with(d, k, &dual.table, e + 1);
            if !report.dual_homogeneous {
                failures.push("F*(cx) != c^{e+1} F*(x)".into());
            }
            report.dual_zero_at_origin = dual.eval(0).is_zero();
            if let Some(eps) = report.epsilon {
                if !spot_check_spectrum(f, dual, eps, e)? {
                    failures.push(
                        "sampled Walsh values disagree with eps p^{r/2} zeta^{(F*)_{sigma(c)}(a)}"
                            .into(),
                    );
                }
            }
        }
    }
    if !report.dual_zero_at_origin && report.sigma_power_form {
        failures.push("F*(0) != 0".into());
    }
    report.passes = failures.is_empty();
    report.failures = failures;
    Ok(report)
}

/// F*(g x) = g^l F*(x) for the generator g of the codomain; enough for all c.
fn homogeneous_with(d: &VSpace, k: &Arc<Field>, table: &[Elem], l: u64) -> bool {
    let g = k.generator();
    let Ok(gv) = d.embed_scalar(k.n(), g) else {
        return false;
    };
    let gl = k.pow(g, l);
    (0..d.size())
        .into_par_iter()
        .all(|x| table[d.scale(&gv, x) as usize] == k.mul(gl, table[x as usize]))
}

fn spot_check_spectrum(f: &VectorialFn, dual: &VectorialFn, eps: i8, e: u64) -> Result<bool> {
    let d = &f.domain;
    let k = &f.codomain;
    let p = d.p();
    let r = d.dim();
    if r % 2 == 1 {
        return Ok(true);
    }
    let mag = eps as i64 * (p as i64).pow(r / 2);
    let samples = [0u32, 1, d.size() / 3, d.size() - 1];
    for c in [Elem::ONE, k.generator()] {
        let fc = component(f, c)?;
        let s = k.pow(k.inv(c)?, e);
        for &a in &samples {
            let w = crate::walsh::walsh_point(&fc, a)?;
            let kexp = k.tr_prime(k.mul(s, dual.eval(a)));
            if w != CycInt::zeta_pow(p, kexp as i64).scalar_mul(mag) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest l in 1..p^m-1 with F(cx) = c^l F(x) for all scalars c of the
/// codomain, if any.
pub fn homogeneity_degree(f: &VectorialFn) -> Option<u64> {
    let d = &f.domain;
    let k = &f.codomain;
    let order = k.order() as u64 - 1;
    let g = k.generator();
    let gv = d.embed_scalar(k.n(), g).ok()?;
    // every x with F(x) != 0 pins l mod (p^m - 1)
    let mut l: Option<u64> = None;
    for x in 0..d.size() {
        let a = f.eval(x);
        let b = f.eval(d.scale(&gv, x));
        match (a.is_zero(), b.is_zero()) {
            (true, true) => {}
            (true, false) | (false, true) => return None,
            (false, false) => {
                let diff = (k.log(b)? + order - k.log(a)?) % order;
                match l {
                    None => l = Some(diff),
                    Some(prev) if prev != diff => return None,
                    _ => {}
                }
            }
        }
    }
    // F identically zero satisfies every l
    Some(match l {
        None => 1,
        Some(0) => order,
        Some(v) => v,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelSetCounts {
    /// counts[i] = |{x : F(x) = i}|, i by codomain encoding.
    pub counts: Vec<u64>,
    /// Agreement with p^{r-m} + eps p^{r/2-m}(delta_0(i) p^m - 1), when
    /// that formula is integral.
    pub verdict: Option<bool>,
}

pub fn level_set_counts(f: &VectorialFn, eps: i8) -> LevelSetCounts {
    let k = &f.codomain;
    let mut counts = vec![0u64; k.order() as usize];
    for v in &f.table {
        counts[v.0 as usize] += 1;
    }
    let r = f.domain.dim();
    let m = k.n();
    let p = k.p() as i128;
    let verdict = if r.is_multiple_of(2) && 2 * m <= r {
        let pm = p.pow(m);
        Some(counts.iter().enumerate().all(|(i, &c)| {
            let delta = if i == 0 { pm } else { 0 };
            // times p^m on both sides
            c as i128 * pm == p.pow(r) + eps as i128 * p.pow(r / 2) * (delta - 1)
        }))
    } else {
        None
    };
    LevelSetCounts { counts, verdict }
}

/// Degrees for which a Condition-A style scalar action exists.
pub fn scalar_degrees(f: &VectorialFn) -> Vec<u32> {
    let degs = f.domain.degrees();
    divisors(f.m())
        .into_iter()
        .filter(|s| degs.iter().all(|r| r % s == 0))
        .collect()
}

pub mod instances;

#[cfg(test)]
mod tests;
