//! The five code families built from a Condition-A function, their
//! defining sets and the weight distributions the theorems predict.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::EpsilonMarker;
use crate::error::{Error, Result};
use crate::field::{Elem, Field, VPoint, VSpace};
use crate::linalg;
use crate::zoo::{
    build_family, homogeneity_degree, verify_condition_a_with, ConditionAOptions, ConditionAReport,
    VectorialFn, VectorialFnSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeKind {
    #[serde(rename = "theorem1")]
    Theorem1,
    #[serde(rename = "theorem2")]
    Theorem2,
    #[serde(rename = "corollary1")]
    Corollary1,
    #[serde(rename = "theorem3_S")]
    Theorem3S,
    #[serde(rename = "theorem3_N")]
    Theorem3N,
    #[serde(rename = "corollary2_S")]
    Corollary2S,
    #[serde(rename = "corollary2_N")]
    Corollary2N,
}

impl CodeKind {
    pub const ALL: [CodeKind; 7] = [
        CodeKind::Theorem1,
        CodeKind::Theorem2,
        CodeKind::Corollary1,
        CodeKind::Theorem3S,
        CodeKind::Theorem3N,
        CodeKind::Corollary2S,
        CodeKind::Corollary2N,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CodeKind::Theorem1 => "theorem1",
            CodeKind::Theorem2 => "theorem2",
            CodeKind::Corollary1 => "corollary1",
            CodeKind::Theorem3S => "theorem3_S",
            CodeKind::Theorem3N => "theorem3_N",
            CodeKind::Corollary2S => "corollary2_S",
            CodeKind::Corollary2N => "corollary2_N",
        }
    }

    /// Defining-set membership rule; `None` for the three-weight code.
    pub fn mode(self) -> Option<DefiningMode> {
        match self {
            CodeKind::Theorem1 => None,
            CodeKind::Theorem2 | CodeKind::Corollary1 => Some(DefiningMode::ZeroSet),
            CodeKind::Theorem3S | CodeKind::Corollary2S => Some(DefiningMode::Squares),
            CodeKind::Theorem3N | CodeKind::Corollary2N => Some(DefiningMode::Nonsquares),
        }
    }

    /// Punctured onto orbit representatives.
    pub fn is_corollary(self) -> bool {
        matches!(
            self,
            CodeKind::Corollary1 | CodeKind::Corollary2S | CodeKind::Corollary2N
        )
    }
}

impl fmt::Display for CodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CodeKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown code kind '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefiningMode {
    ZeroSet,
    Squares,
    Nonsquares,
}

/// Which code to build. For theorem1, `s1 == s2 == s` and `lambda` is unused.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecipe {
    pub kind: CodeKind,
    pub s1: u32,
    pub s2: u32,
    /// Encoding in GF(p^m).
    pub lambda: u32,
}

impl CodeRecipe {
    pub fn theorem1(s: u32) -> Self {
        CodeRecipe {
            kind: CodeKind::Theorem1,
            s1: s,
            s2: s,
            lambda: 1,
        }
    }

    pub fn new(kind: CodeKind, s1: u32, s2: u32, lambda: u32) -> Self {
        if kind == CodeKind::Theorem1 {
            return CodeRecipe::theorem1(s1);
        }
        CodeRecipe {
            kind,
            s1,
            s2,
            lambda,
        }
    }

    /// Alphabet degree over F_p.
    pub fn s(&self) -> u32 {
        self.s1
    }

    /// Parameter condition under which the code is stated to be minimal,
    /// so that its dual scheme has q^{k-1} minimal access sets.
    pub fn minimality_precondition(&self, p: u32, r: u32, eps: i8) -> bool {
        let (s1, s2) = (self.s1, self.s2);
        match self.kind {
            CodeKind::Theorem1 => 2 * s1 + 2 <= r,
            CodeKind::Theorem2 | CodeKind::Corollary1 => {
                2 * (s1 + s2) <= r && !(eps == -1 && 2 * (s1 + s2) == r)
            }
            _ => (2 * s2 < r || s2 != s1) && !(p == 3 && r == 4 && eps == 1 && s2 == 1),
        }
    }

    /// Checks the divisibility and sign clauses; `l` is the homogeneity
    /// degree when one exists.
    pub fn validate(&self, degrees: &[u32], m: u32, eps: i8, l: Option<u64>) -> Result<()> {
        let r: u32 = degrees.iter().sum();
        if !r.is_multiple_of(2) {
            return Err(Error::HypothesisViolated("r must be even".into()));
        }
        if self.kind == CodeKind::Theorem1 {
            let s = self.s1;
            if s == 0 || !m.is_multiple_of(s) {
                return Err(Error::NonDivisor("s must divide m".into()));
            }
        } else {
            if self.s2 == 0 || !m.is_multiple_of(self.s2) {
                return Err(Error::NonDivisor("s2 must divide m".into()));
            }
            if self.s1 == 0 || !self.s2.is_multiple_of(self.s1) {
                return Err(Error::NonDivisor("s1 must divide s2".into()));
            }
            if self.lambda == 0 {
                return Err(Error::ZeroLambda);
            }
        }
        if degrees.iter().any(|rj| rj % self.s1 != 0) {
            return Err(Error::NonDivisor(
                "s must divide every component degree".into(),
            ));
        }
        match self.kind {
            CodeKind::Theorem2 | CodeKind::Corollary1 if eps == -1 && 2 * self.s2 == r => {
                return Err(Error::HypothesisViolated(
                    "s2 must differ from r/2 when epsilon = -1".into(),
                ));
            }
            _ => {}
        }
        match self.kind {
            CodeKind::Corollary1 if l.is_none() => {
                return Err(Error::HypothesisViolated(
                    "F must be homogeneous: F(cx) = c^l F(x)".into(),
                ));
            }
            CodeKind::Corollary2S | CodeKind::Corollary2N if l.is_none_or(|l| l % 2 != 0) => {
                return Err(Error::HypothesisViolated(
                    "F must be homogeneous of even degree: F(cx) = c^l F(x), l even".into(),
                ));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Weight distribution a theorem predicts, zero word excluded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedDistribution {
    pub source: CodeKind,
    pub q: u64,
    pub n: u64,
    pub k: u32,
    /// (weight, multiplicity), ascending by weight.
    pub weights: Vec<(u64, u64)>,
}

/// Values are carried as integers times p^shift so that negative
/// exponents like p^{r/2-s} stay exact.
struct Scaled {
    p: i128,
    shift: u32,
}

impl Scaled {
    fn pw(&self, e: i64) -> Result<i128> {
        let t = e + self.shift as i64;
        if t < 0 {
            return Err(Error::HypothesisViolated("exponent out of range".into()));
        }
        self.p
            .checked_pow(t as u32)
            .ok_or_else(|| Error::HypothesisViolated("parameters too large".into()))
    }

    fn unscale(&self, v: i128, div: i128) -> Result<u64> {
        let d = self.p.pow(self.shift) * div;
        if v % d != 0 || v / d <= 0 {
            return Err(Error::HypothesisViolated(
                "predicted weight or multiplicity is not a positive integer".into(),
            ));
        }
        Ok((v / d) as u64)
    }
}

fn ipow(p: u32, e: u32) -> i128 {
    (p as i128).pow(e)
}

/// (n, k, weights) for the recipe at sign `eps`.
///
/// For the square/nonsquare kinds the weight attached to each class of
/// alpha follows Tr(lambda^{-e} F*(alpha)) in S; when -1 is a nonsquare of
/// GF(p^{s_2}) this exchanges the two multiplicities of `table_distribution`.
pub fn predicted_distribution(
    recipe: &CodeRecipe,
    p: u32,
    r: u32,
    m: u32,
    eps: i8,
) -> Result<PredictedDistribution> {
    distribution(recipe, p, r, m, eps, true)
}

/// Closed-form table values taken literally, with the square/nonsquare
/// weights assigned by Tr(-lambda^{-e} F*(alpha)) in S.
pub fn table_distribution(
    recipe: &CodeRecipe,
    p: u32,
    r: u32,
    m: u32,
    eps: i8,
) -> Result<PredictedDistribution> {
    distribution(recipe, p, r, m, eps, false)
}

fn distribution(
    recipe: &CodeRecipe,
    p: u32,
    r: u32,
    m: u32,
    eps: i8,
    corrected: bool,
) -> Result<PredictedDistribution> {
    if !r.is_multiple_of(2) {
        return Err(Error::HypothesisViolated("r must be even".into()));
    }
    let (s1, s2) = (recipe.s1, recipe.s2);
    let sc = Scaled {
        p: p as i128,
        shift: s1 + s2,
    };
    let e = eps as i128;
    let (r, h) = (r as i64, r as i64 / 2);
    let (s1i, s2i) = (s1 as i64, s2 as i64);
    let q1 = ipow(p, s1) - 1;
    let q2 = ipow(p, s2) - 1;
    let one = sc.pw(0)?;
    let mut rows: Vec<(i128, i128)> = Vec::new(); // (scaled weight, scaled multiplicity)
    let (n, k, half) = match recipe.kind {
        CodeKind::Theorem1 => {
            let pm1 = ipow(p, m) - 1;
            let (prs, phs) = (sc.pw(r - s1i)?, sc.pw(h - s1i)?);
            rows.push((q1 * prs, (ipow(p, r as u32) - 1) * one));
            rows.push((q1 * prs + e * phs, pm1 * (prs - e * phs) * q1));
            rows.push((q1 * (prs - e * phs), pm1 * (prs + e * phs * q1)));
            ((ipow(p, r as u32) - 1) * one, (r as u32 + m) / s1, 1)
        }
        CodeKind::Theorem2 | CodeKind::Corollary1 => {
            let len = sc.pw(r - s2i)? + e * sc.pw(h - s2i)? * q2 - one;
            let w0 = sc.pw(r - s1i - s2i)?;
            let w1 = w0 + e * sc.pw(h - s1i)?;
            let m1 = q2 * (sc.pw(r - s2i)? - e * sc.pw(h - s2i)?);
            if recipe.kind == CodeKind::Theorem2 {
                rows.push((q1 * w0, len));
                rows.push((q1 * w1, m1));
                (len, r as u32 / s1, 1)
            } else {
                // punctured lengths divide exactly by p^{s1} - 1
                if len % q1 != 0 {
                    return Err(Error::HypothesisViolated(
                        "orbit count is not integral".into(),
                    ));
                }
                rows.push((w0, len));
                rows.push((w1, m1));
                (len / q1, r as u32 / s1, 1)
            }
        }
        _ => {
            let e2 = EpsilonMarker::new(p).even_power_sign(s2 as u64) as i128;
            let base = sc.pw(r - s1i - s2i)?;
            let ph1 = sc.pw(h - s1i)?;
            let (prs2, phs2) = (sc.pw(r - s2i)?, sc.pw(h - s2i)?);
            let punct = recipe.kind.is_corollary();
            let f = if punct { 1 } else { q1 };
            let wa = q2 * f * base + e * (e2 - 1) * ph1 * f;
            let wb = q2 * f * base - e * (e2 + 1) * ph1 * f;
            // multiplicities carry an extra factor 2 to match the weights
            let ma = q2 * (prs2 + e * phs2) + 2 * (prs2 - one);
            let mb = q2 * (prs2 - e * phs2);
            if corrected && e2 == -1 {
                rows.push((wa, mb));
                rows.push((wb, ma));
            } else {
                rows.push((wa, ma));
                rows.push((wb, mb));
            }
            let len = q2 * (prs2 - e * phs2);
            let len = if punct {
                if len % (2 * q1) != 0 {
                    return Err(Error::HypothesisViolated(
                        "orbit count is not integral".into(),
                    ));
                }
                len / q1
            } else {
                len
            };
            (len, r as u32 / s1, 2)
        }
    };
    let mut weights: Vec<(u64, u64)> = Vec::new();
    for (w, mult) in rows {
        let w = sc.unscale(w, half)?;
        let mult = sc.unscale(mult, half)?;
        match weights.iter_mut().find(|(x, _)| *x == w) {
            Some(slot) => slot.1 += mult,
            None => weights.push((w, mult)),
        }
    }
    weights.sort_unstable();
    let q = ipow(p, s1) as u64;
    let n = sc.unscale(n, half)?;
    if weights.iter().any(|&(w, _)| w > n) {
        return Err(Error::HypothesisViolated(
            "predicted weight exceeds the length".into(),
        ));
    }
    let total: u128 = weights.iter().map(|&(_, c)| c as u128).sum();
    if (q as u128).checked_pow(k) != Some(total + 1) {
        return Err(Error::HypothesisViolated(
            "predicted multiplicities do not sum to q^k - 1".into(),
        ));
    }
    Ok(PredictedDistribution {
        source: recipe.kind,
        q,
        n,
        k,
        weights,
    })
}

/// Points of V_r^* selected by the trace condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefiningSet {
    pub mode: DefiningMode,
    pub s2: u32,
    pub lambda: u32,
    /// Point indices in ascending order.
    pub points: Vec<u32>,
}

/// Scans V_r^* for x with Tr_{s2}^m(lambda F(x)) zero, a square, or a
/// nonsquare of GF(p^{s2}).
pub fn defining_set(
    f: &VectorialFn,
    s2: u32,
    lambda: u32,
    mode: DefiningMode,
) -> Result<DefiningSet> {
    let k = f.codomain();
    let m = k.n();
    if s2 == 0 || !m.is_multiple_of(s2) {
        return Err(Error::NonDivisor("s2 must divide m".into()));
    }
    if lambda == 0 {
        return Err(Error::ZeroLambda);
    }
    let lam = k.elem(lambda as u64)?;
    let sub = k.subfield(s2)?;
    let mut member = vec![false; k.order() as usize];
    for y in k.elements() {
        let t = k.trace_to(k.mul(lam, y), s2)?;
        member[y.0 as usize] = match mode {
            DefiningMode::ZeroSet => t.is_zero(),
            DefiningMode::Squares => !t.is_zero() && sub.quad_character(t)? == 1,
            DefiningMode::Nonsquares => !t.is_zero() && sub.quad_character(t)? == -1,
        };
    }
    let points = (1..f.domain().size())
        .filter(|&x| member[f.eval(x).0 as usize])
        .collect();
    Ok(DefiningSet {
        mode,
        s2,
        lambda,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentativeRule {
    MinEncoding,
    /// Uniform member of each orbit from a seeded stream.
    Randomized(u64),
}

/// One point per GF(p^{s1})^* orbit of `points`, orbits ordered by their
/// smallest member.
pub fn coset_representatives(
    domain: &VSpace,
    points: &[u32],
    s1: u32,
    rule: RepresentativeRule,
) -> Result<Vec<u32>> {
    let sub = Field::conway(domain.p(), s1)?;
    let scalars: Vec<Vec<Elem>> = sub
        .nonzero_elements()
        .map(|c| domain.embed_scalar(s1, c))
        .collect::<Result<_>>()?;
    let mut state = vec![0u8; domain.size() as usize]; // 0 absent, 1 present, 2 used
    for &x in points {
        state[x as usize] = 1;
    }
    let mut rng = match rule {
        RepresentativeRule::Randomized(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        RepresentativeRule::MinEncoding => None,
    };
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    let mut reps = Vec::with_capacity(points.len() / scalars.len().max(1));
    let mut orbit = Vec::with_capacity(scalars.len());
    for &x in &sorted {
        if state[x as usize] != 1 {
            continue;
        }
        orbit.clear();
        for c in &scalars {
            let y = domain.scale(c, x);
            if state[y as usize] == 0 {
                return Err(Error::NotOrbitClosed);
            }
            orbit.push(y);
        }
        for &y in &orbit {
            state[y as usize] = 2;
        }
        // orbit[0] is 1*x = x, the minimum since x is visited first
        reps.push(match rng.as_mut() {
            Some(rng) => orbit[rng.gen_range(0..orbit.len())],
            None => x,
        });
    }
    Ok(reps)
}

/// A q-ary linear code given by a generator matrix over GF(q).
#[derive(Clone, Debug)]
pub struct LinearCode {
    alphabet: Arc<Field>,
    generator: Vec<Vec<Elem>>,
    n: usize,
}

impl LinearCode {
    pub fn new(alphabet: Arc<Field>, generator: Vec<Vec<Elem>>) -> Result<Self> {
        let n = generator.first().map_or(0, |r| r.len());
        let q = alphabet.order();
        if generator
            .iter()
            .any(|row| row.len() != n || row.iter().any(|x| x.0 >= q))
        {
            return Err(Error::Parse(
                "generator rows must have equal length and entries below q".into(),
            ));
        }
        Ok(LinearCode {
            alphabet,
            generator,
            n,
        })
    }

    pub fn alphabet(&self) -> &Arc<Field> {
        &self.alphabet
    }
    pub fn q(&self) -> u64 {
        self.alphabet.order() as u64
    }
    pub fn n(&self) -> usize {
        self.n
    }
    /// Number of generator rows.
    pub fn k(&self) -> usize {
        self.generator.len()
    }
    pub fn generator(&self) -> &[Vec<Elem>] {
        &self.generator
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        self.generator.iter().map(|row| row[j]).collect()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.alphabet, &self.generator)
    }

    /// u G.
    pub fn encode(&self, u: &[Elem]) -> Result<Vec<Elem>> {
        if u.len() != self.k() {
            return Err(Error::DomainMismatch);
        }
        let f = &self.alphabet;
        let mut out = vec![Elem::ZERO; self.n];
        for (&ui, row) in u.iter().zip(&self.generator) {
            if ui.is_zero() {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(ui, g));
            }
        }
        Ok(out)
    }

    /// Text form: "q n k" then k rows of encodings.
    pub fn to_matrix_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.q(), self.n, self.k());
        for row in &self.generator {
            let line: Vec<String> = row.iter().map(|x| x.0.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_matrix_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad header token '{t}'")))
            })
            .collect::<Result<_>>()?;
        let [q, n, k] = nums[..] else {
            return Err(Error::Parse("header must be 'q n k'".into()));
        };
        let alphabet = field_of_order(q)?;
        let mut rows = Vec::with_capacity(k as usize);
        for line in lines {
            let row: Vec<Elem> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map(Elem)
                        .map_err(|_| Error::Parse(format!("bad entry '{t}'")))
                })
                .collect::<Result<_>>()?;
            if row.len() as u64 != n {
                return Err(Error::Parse(format!(
                    "row has {} entries, expected {n}",
                    row.len()
                )));
            }
            rows.push(row);
        }
        if rows.len() as u64 != k {
            return Err(Error::Parse(format!(
                "found {} rows, expected {k}",
                rows.len()
            )));
        }
        LinearCode::new(alphabet, rows)
    }
}

/// GF(q) for a prime power q.
pub fn field_of_order(q: u64) -> Result<Arc<Field>> {
    let p = (2..=q)
        .find(|d| q.is_multiple_of(*d))
        .ok_or_else(|| Error::Parse(format!("invalid alphabet size {q}")))?;
    let mut n = 0;
    let mut t = q;
    while t.is_multiple_of(p) {
        t /= p;
        n += 1;
    }
    if t != 1 {
        return Err(Error::Parse(format!(
            "alphabet size {q} is not a prime power"
        )));
    }
    Field::conway(p as u32, n)
}

/// x -> Tr_s^{deg}(b x) for every x of `field`, as GF(p^s) encodings.
fn trace_table(field: &Field, b: Elem, s: u32) -> Result<Vec<Elem>> {
    field
        .elements()
        .map(|x| field.trace_to(field.mul(b, x), s))
        .collect()
}

/// Rows Tr_{s}^{r_j}(g_j^i d_j) over coordinate points, component by
/// component, i < r_j / s.
fn point_rows(domain: &VSpace, points: &[u32], s: u32, negate: bool) -> Result<Vec<Vec<Elem>>> {
    let alphabet = Field::conway(domain.p(), s)?;
    let mut rows = Vec::new();
    for (j, comp) in domain.components().iter().enumerate() {
        let mut b = Elem::ONE;
        for _ in 0..comp.n() / s {
            let t = trace_table(comp, b, s)?;
            rows.push(
                points
                    .iter()
                    .map(|&x| {
                        let v = t[domain.coord(x, j).0 as usize];
                        if negate {
                            alphabet.neg(v)
                        } else {
                            v
                        }
                    })
                    .collect(),
            );
            b = comp.mul(b, comp.generator());
        }
    }
    Ok(rows)
}

/// Generator of the three-weight code: alpha rows first, then beta rows.
pub fn theorem1_generator(f: &VectorialFn, s: u32) -> Result<LinearCode> {
    let d = f.domain();
    let k = f.codomain();
    let points: Vec<u32> = (1..d.size()).collect();
    let mut rows = Vec::new();
    let mut b = Elem::ONE;
    for _ in 0..k.n() / s {
        let t = trace_table(k, b, s)?;
        rows.push(points.iter().map(|&x| t[f.eval(x).0 as usize]).collect());
        b = k.mul(b, k.generator());
    }
    rows.extend(point_rows(d, &points, s, true)?);
    LinearCode::new(Field::conway(d.p(), s)?, rows)
}

/// Generator of the code with coordinates `points` and codewords
/// (sum_j Tr_{s1}^{r_j}(alpha_j d_j))_d.
pub fn defining_set_generator(domain: &VSpace, points: &[u32], s1: u32) -> Result<LinearCode> {
    let rows = point_rows(domain, points, s1, false)?;
    LinearCode::new(Field::conway(domain.p(), s1)?, rows)
}

/// c_{alpha,beta} straight from the definition, coordinates in V_r^* order.
pub fn theorem1_codeword(f: &VectorialFn, s: u32, alpha: Elem, beta: &VPoint) -> Result<Vec<Elem>> {
    let d = f.domain();
    let k = f.codomain();
    let sub = Field::conway(d.p(), s)?;
    (1..d.size())
        .map(|x| {
            let a = k.trace_to(k.mul(alpha, f.eval(x)), s)?;
            let b = d.mixed_trace_form(beta, &d.point(x), s)?;
            Ok(sub.sub(a, b))
        })
        .collect()
}

/// c_alpha over the given coordinate points, straight from the definition.
pub fn defining_set_codeword(
    domain: &VSpace,
    points: &[u32],
    s1: u32,
    alpha: &VPoint,
) -> Result<Vec<Elem>> {
    points
        .iter()
        .map(|&x| domain.mixed_trace_form(alpha, &domain.point(x), s1))
        .collect()
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub condition_a: ConditionAOptions,
    pub representatives: RepresentativeRule,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            condition_a: ConditionAOptions::default(),
            representatives: RepresentativeRule::MinEncoding,
        }
    }
}

/// A built code with everything needed to reproduce and check it.
#[derive(Clone, Debug)]
pub struct Construction {
    pub recipe: CodeRecipe,
    pub p: u32,
    pub r: u32,
    pub m: u32,
    pub epsilon: i8,
    pub e: u64,
    pub homogeneity: Option<u64>,
    pub representatives: RepresentativeRule,
    pub function: Option<VectorialFnSpec>,
    pub defining_set: Option<DefiningSet>,
    /// Coordinate points in V_r, one per code coordinate.
    pub coordinates: Vec<u32>,
    pub code: LinearCode,
    pub predicted: PredictedDistribution,
}

pub fn build(f: &VectorialFn, recipe: &CodeRecipe, opts: &BuildOptions) -> Result<Construction> {
    let report = verify_condition_a_with(f, opts.condition_a)?;
    build_with_report(f, &report, recipe, opts.representatives)
}

/// Like [`build`] with a Condition-A report computed earlier for `f`.
pub fn build_with_report(
    f: &VectorialFn,
    report: &ConditionAReport,
    recipe: &CodeRecipe,
    rule: RepresentativeRule,
) -> Result<Construction> {
    if !report.passes {
        return Err(Error::ConditionAViolated(report.failures.join("; ")));
    }
    let (Some(eps), Some(e)) = (report.epsilon, report.e) else {
        return Err(Error::ConditionAViolated(
            "sign or exponent undetermined".into(),
        ));
    };
    let d = f.domain();
    let p = d.p();
    let r = d.dim();
    let m = f.m();
    if recipe.lambda as u64 >= f.codomain().order() as u64 {
        return Err(Error::ElementOutOfRange(recipe.lambda as u64));
    }
    let l = if recipe.kind.is_corollary() {
        homogeneity_degree(f)
    } else {
        None
    };
    recipe.validate(&d.degrees(), m, eps, l)?;
    let predicted = predicted_distribution(recipe, p, r, m, eps)?;

    let (code, coordinates, dset) = match recipe.kind.mode() {
        None => (
            theorem1_generator(f, recipe.s1)?,
            (1..d.size()).collect(),
            None,
        ),
        Some(mode) => {
            let ds = defining_set(f, recipe.s2, recipe.lambda, mode)?;
            let coords = if recipe.kind.is_corollary() {
                coset_representatives(d, &ds.points, recipe.s1, rule)?
            } else {
                ds.points.clone()
            };
            (
                defining_set_generator(d, &coords, recipe.s1)?,
                coords,
                Some(ds),
            )
        }
    };
    if code.rank() != predicted.k as usize {
        return Err(Error::HypothesisViolated(format!(
            "codewords are not distinct: generator rank {} below {}",
            code.rank(),
            predicted.k
        )));
    }
    Ok(Construction {
        recipe: *recipe,
        p,
        r,
        m,
        epsilon: eps,
        e,
        homogeneity: l,
        representatives: rule,
        function: f.spec().cloned(),
        defining_set: dset,
        coordinates,
        code,
        predicted,
    })
}

/// Serialized form of a construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub kind: CodeKind,
    pub q: u64,
    pub n: u64,
    pub k: u32,
    pub params: CodeParams,
    /// Coordinate points (orbit representatives for the punctured codes);
    /// absent for theorem1, whose coordinates are all of V_r^*.
    pub defining_set: Option<Vec<u32>>,
    pub predicted: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub p: u32,
    pub r: u32,
    pub m: u32,
    pub s1: u32,
    pub s2: u32,
    pub lambda: u32,
    pub epsilon: i8,
    pub e: u64,
    pub homogeneity_degree: Option<u64>,
    pub representatives: RepresentativeRule,
    /// Length of the full defining set before puncturing.
    pub defining_set_size: Option<u64>,
    pub function: Option<VectorialFnSpec>,
}

impl Construction {
    pub fn to_code_file(&self) -> CodeFile {
        CodeFile {
            kind: self.recipe.kind,
            q: self.code.q(),
            n: self.code.n() as u64,
            k: self.code.k() as u32,
            params: CodeParams {
                p: self.p,
                r: self.r,
                m: self.m,
                s1: self.recipe.s1,
                s2: self.recipe.s2,
                lambda: self.recipe.lambda,
                epsilon: self.epsilon,
                e: self.e,
                homogeneity_degree: self.homogeneity,
                representatives: self.representatives,
                defining_set_size: self.defining_set.as_ref().map(|d| d.points.len() as u64),
                function: self.function.clone(),
            },
            defining_set: if self.recipe.kind == CodeKind::Theorem1 {
                None
            } else {
                Some(self.coordinates.clone())
            },
            predicted: self.predicted.weights.clone(),
        }
    }
}

impl CodeFile {
    pub fn predicted_distribution(&self) -> PredictedDistribution {
        PredictedDistribution {
            source: self.kind,
            q: self.q,
            n: self.n,
            k: self.k,
            weights: self.predicted.clone(),
        }
    }

    /// Regenerates the generator matrix from the recorded parameters.
    pub fn materialize(&self) -> Result<LinearCode> {
        let pr = &self.params;
        let spec = pr
            .function
            .as_ref()
            .ok_or_else(|| Error::Parse("code file has no function".into()))?;
        let code = match &self.defining_set {
            None => {
                if self.kind != CodeKind::Theorem1 {
                    return Err(Error::Parse("defining set missing".into()));
                }
                theorem1_generator(&build_family(spec)?, pr.s1)?
            }
            Some(points) => {
                let domain = VSpace::from_degrees(spec.p(), &spec.degrees())?;
                if let Some(&bad) = points.iter().find(|&&x| x == 0 || x >= domain.size()) {
                    return Err(Error::ElementOutOfRange(bad as u64));
                }
                defining_set_generator(&domain, points, pr.s1)?
            }
        };
        Ok(code)
    }
}
