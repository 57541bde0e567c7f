//! Odd-characteristic finite fields GF(p^n) and the subfield tower.
//!
//! Elements are carried as their canonical encoding `enc = sum c_i p^i` of the
//! polynomial-basis coefficients. Small fields keep Zech logarithm tables;
//! larger ones fall back to plain polynomial arithmetic.

pub mod conway;
pub(crate) mod poly;
mod space;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock, Weak};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use space::{VPoint, VSpace};

/// Canonical encoding of a field element.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn enc(self) -> u32 {
        self.0
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;
/// Largest field order accepted at all.
pub const MAX_FIELD_ORDER: u64 = 1 << 28;

#[derive(Clone, Copy, Debug)]
pub struct FieldOptions {
    pub table_limit: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions {
            table_limit: DEFAULT_TABLE_LIMIT,
        }
    }
}

const NONE: u32 = u32::MAX;

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    tr1: Vec<u8>,
}

enum Repr {
    Tables(Tables),
    /// frob[i] = digits of (X^i)^p.
    Poly {
        frob: Vec<Vec<u32>>,
    },
}

struct Embedding {
    m: u32,
    sub: Arc<Field>,
    /// log multiplier: embed(g_m^k) = g^(k*scale).
    scale: u64,
    basis: Vec<Elem>,
    pivots: Vec<usize>,
    pinv: Vec<Vec<u32>>,
}

/// JSON descriptor of a field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub generator: u32,
}

pub struct Field {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    generator: Elem,
    conway: bool,
    pows: Vec<u32>,
    frob_mult: Vec<u64>,
    tr1_basis: Vec<u32>,
    repr: Repr,
    embeddings: Vec<Embedding>,
    me: Weak<Field>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.n)
    }
}

type Registry = Mutex<HashMap<(u32, u32), Arc<Field>>>;

fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn check_characteristic(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NonPrimeCharacteristic(p as u64));
    }
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    Ok(())
}

impl Field {
    /// Shared context for the Conway-polynomial field GF(p^n).
    pub fn conway(p: u32, n: u32) -> Result<Arc<Field>> {
        if let Some(f) = registry().lock().expect("registry").get(&(p, n)) {
            return Ok(f.clone());
        }
        let f = Field::build(p, n, None, FieldOptions::default())?;
        let mut reg = registry().lock().expect("registry");
        Ok(reg.entry((p, n)).or_insert(f).clone())
    }

    /// Field with an explicit modulus (or the Conway one when `None`) and options.
    /// Not cached.
    pub fn with_modulus(
        p: u32,
        n: u32,
        modulus: Option<Vec<u32>>,
        opts: FieldOptions,
    ) -> Result<Arc<Field>> {
        Field::build(p, n, modulus, opts)
    }

    fn build(p: u32, n: u32, modulus: Option<Vec<u32>>, opts: FieldOptions) -> Result<Arc<Field>> {
        check_characteristic(p)?;
        if n == 0 {
            return Err(Error::InvalidModulus("degree must be positive".into()));
        }
        let q64 = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q64 > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, n });
        }
        let q = q64 as u32;
        let bundled = conway::conway_polynomial(p, n);
        let (modulus, conway) = match modulus {
            Some(m) => {
                let is_conway = bundled.as_ref() == Some(&m);
                (m, is_conway)
            }
            None => (bundled.ok_or(Error::NoBundledPolynomial { p, n })?, true),
        };
        if modulus.len() != n as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                n + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus(
                "coefficient not reduced mod p".into(),
            ));
        }
        if modulus[n as usize] != 1 {
            return Err(Error::InvalidModulus("modulus must be monic".into()));
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus { p });
        }
        let pows: Vec<u32> = (0..=n).map(|i| p.pow(i)).collect();
        let frob_mult: Vec<u64> = (0..n)
            .map(|k| poly::pow_mod(p as u64, k as u64, q as u64 - 1))
            .collect();

        let mut f = Field {
            p,
            n,
            q,
            modulus,
            generator: Elem::ZERO,
            conway,
            pows,
            frob_mult,
            tr1_basis: Vec::new(),
            repr: Repr::Poly { frob: Vec::new() },
            embeddings: Vec::new(),
            me: Weak::new(),
        };
        // Frobenius matrix first: poly-mode arithmetic needs nothing else.
        let frob: Vec<Vec<u32>> = (0..n)
            .map(|i| {
                let mut xi = vec![0u32; i as usize + 1];
                xi[i as usize] = 1;
                let mut d = poly::frob_pow(&xi, 1, &f.modulus, p);
                d.resize(n as usize, 0);
                d
            })
            .collect();
        f.repr = Repr::Poly { frob };
        f.generator = f.find_generator();
        if (q as u64) <= opts.table_limit {
            f.repr = Repr::Tables(f.build_tables());
        }
        f.tr1_basis = (0..n)
            .map(|i| {
                let xi = f.pack_digits(&unit(n, i));
                f.frob_sum(xi, 1).0
            })
            .collect();
        if let Repr::Tables(t) = &mut f.repr {
            let mut tr1 = vec![0u8; q as usize];
            let mut digits = vec![0u32; n as usize];
            for (x, slot) in tr1.iter_mut().enumerate() {
                let mut acc = 0u32;
                for i in 0..n as usize {
                    acc += digits[i] * f.tr1_basis[i];
                }
                *slot = (acc % p) as u8;
                // increment little-endian digit counter
                if x + 1 < q as usize {
                    let mut i = 0;
                    loop {
                        digits[i] += 1;
                        if digits[i] < p {
                            break;
                        }
                        digits[i] = 0;
                        i += 1;
                    }
                }
            }
            t.tr1 = tr1;
        }
        for m in divisors(n) {
            if m == n {
                continue;
            }
            let sub = Field::conway(p, m)?;
            let emb = f.embedding_for(sub)?;
            f.embeddings.push(emb);
        }
        Ok(Arc::new_cyclic(|w| {
            f.me = w.clone();
            f
        }))
    }

    fn x_elem(&self) -> Elem {
        if self.n == 1 {
            Elem((self.p - self.modulus[0]) % self.p)
        } else {
            Elem(self.p)
        }
    }

    fn find_generator(&self) -> Elem {
        let order = self.q as u64 - 1;
        let factors = prime_factors(order);
        let is_gen =
            |g: Elem| !g.is_zero() && factors.iter().all(|&l| self.pow(g, order / l) != Elem::ONE);
        let x = self.x_elem();
        if is_gen(x) {
            return x;
        }
        (1..self.q)
            .map(Elem)
            .find(|&g| is_gen(g))
            .expect("cyclic group has a generator")
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let p = self.p;
        let mut exp = vec![0u32; 2 * (q - 1)];
        let mut log = vec![NONE; q];
        let mut cur = Elem::ONE;
        let g = self.generator;
        let use_shift = g == self.x_elem();
        let mut digits = unit(self.n, 0);
        for k in 0..q - 1 {
            exp[k] = cur.0;
            exp[k + q - 1] = cur.0;
            log[cur.0 as usize] = k as u32;
            if use_shift {
                let n = self.n as usize;
                let top = digits[n - 1];
                for i in (1..n).rev() {
                    digits[i] = digits[i - 1];
                }
                digits[0] = 0;
                if top != 0 {
                    for i in 0..n {
                        digits[i] = (digits[i] + (p - top) * self.modulus[i]) % p;
                    }
                }
                cur = self.pack_digits(&digits);
            } else {
                cur = self.poly_mul(cur, g);
            }
        }
        debug_assert_eq!(cur, Elem::ONE);
        let mut zech = vec![NONE; q - 1];
        for (k, z) in zech.iter_mut().enumerate() {
            let v = exp[k];
            let d0 = v % p;
            let w = v - d0 + (d0 + 1) % p;
            if w != 0 {
                *z = log[w as usize];
            }
        }
        Tables {
            exp,
            log,
            zech,
            tr1: Vec::new(),
        }
    }

    fn embedding_for(&self, sub: Arc<Field>) -> Result<Embedding> {
        let m = sub.n;
        let qm = sub.q as u64;
        let c = (self.q as u64 - 1) / (qm - 1);
        if sub.generator != sub.x_elem() {
            return Err(Error::InvalidModulus(
                "subfield generator is not a root of its modulus".into(),
            ));
        }
        let mut scale = None;
        for j in 1..qm - 1 {
            if gcd_u64(j, qm - 1) != 1 {
                continue;
            }
            let rho = self.pow(self.generator, c * j);
            // evaluate sub.modulus at rho
            let mut acc = Elem::ZERO;
            for &coef in sub.modulus.iter().rev() {
                acc = self.add(self.mul(acc, rho), Elem(coef));
            }
            if acc.is_zero() {
                scale = Some((c * j) % (self.q as u64 - 1));
                break;
            }
        }
        let scale =
            scale.ok_or_else(|| Error::InvalidModulus("no embedding of subfield found".into()))?;
        let rho = self.pow(self.generator, scale);
        let basis: Vec<Elem> = (0..m).map(|i| self.pow(rho, i as u64)).collect();
        // pivot columns + inverse for pullback
        let rows: Vec<Vec<u32>> = basis.iter().map(|&b| self.digits(b)).collect();
        let (pivots, pinv) = pivot_inverse(&rows, self.p);
        Ok(Embedding {
            m,
            sub,
            scale,
            basis,
            pivots,
            pinv,
        })
    }

    // ---- accessors ----

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    /// p^n
    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }
    pub fn is_conway(&self) -> bool {
        self.conway
    }
    pub fn is_table_backed(&self) -> bool {
        matches!(self.repr, Repr::Tables(_))
    }
    pub fn arc(&self) -> Arc<Field> {
        self.me.upgrade().expect("field is always held in an Arc")
    }
    pub fn same_field(&self, other: &Field) -> bool {
        std::ptr::eq(self, other)
            || (self.p == other.p && self.n == other.n && self.modulus == other.modulus)
    }
    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
            generator: self.generator.0,
        }
    }

    pub fn elem(&self, enc: u64) -> Result<Elem> {
        if enc < self.q as u64 {
            Ok(Elem(enc as u32))
        } else {
            Err(Error::ElementOutOfRange(enc))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> {
        (1..self.q).map(Elem)
    }

    /// Polynomial-basis coefficients c_0..c_{n-1}.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.n)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> Result<Elem> {
        if d.len() > self.n as usize || d.iter().any(|&c| c >= self.p) {
            return Err(Error::Parse("bad coefficient vector".into()));
        }
        Ok(self.pack_digits(d))
    }

    fn pack_digits(&self, d: &[u32]) -> Elem {
        let mut v = 0u32;
        for &c in d.iter().rev() {
            v = v * self.p + c;
        }
        Elem(v)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.p as i64) as u32)
    }

    // ---- arithmetic ----

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        match &self.repr {
            Repr::Tables(t) => {
                let (la, lb) = (t.log[a.0 as usize], t.log[b.0 as usize]);
                let d = if lb >= la {
                    lb - la
                } else {
                    lb + self.q - 1 - la
                };
                let z = t.zech[d as usize];
                if z == NONE {
                    Elem::ZERO
                } else {
                    Elem(t.exp[(la + z) as usize])
                }
            }
            Repr::Poly { .. } => self.digitwise(a, b, |x, y, p| (x + y) % p),
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.digitwise(a, Elem::ZERO, |x, _, p| (p - x) % p)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    fn digitwise(&self, a: Elem, b: Elem, f: impl Fn(u32, u32, u32) -> u32) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        for i in 0..self.n as usize {
            out += f(x % self.p, y % self.p, self.p) * self.pows[i];
            x /= self.p;
            y /= self.p;
        }
        Elem(out)
    }

    /// c * x for c in the prime field.
    pub fn scalar_mul(&self, c: u32, x: Elem) -> Elem {
        let c = c % self.p;
        self.digitwise(x, Elem::ZERO, |d, _, p| d * c % p)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.repr {
            Repr::Tables(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            Repr::Poly { .. } => self.poly_mul(a, b),
        }
    }

    fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        let mut r = poly::mul_mod(&self.digits(a), &self.digits(b), &self.modulus, self.p);
        r.resize(self.n as usize, 0);
        self.pack_digits(&r)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.repr {
            Repr::Tables(t) => {
                let l = t.log[a.0 as usize];
                Elem(t.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
            }
            Repr::Poly { .. } => self.pow(a, self.q as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        match &self.repr {
            Repr::Tables(t) => {
                let l = t.log[a.0 as usize] as u64;
                Elem(t.exp[(l * (e % (self.q as u64 - 1)) % (self.q as u64 - 1)) as usize])
            }
            Repr::Poly { .. } => {
                let mut r = Elem::ONE;
                let mut b = a;
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        r = self.poly_mul(r, b);
                    }
                    b = self.poly_mul(b, b);
                    e >>= 1;
                }
                r
            }
        }
    }

    /// Signed exponent; negative powers of zero are an error.
    pub fn pow_i(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// x^(p^k)
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        let k = k % self.n;
        if k == 0 || x.is_zero() {
            return x;
        }
        match &self.repr {
            Repr::Tables(t) => {
                let l = t.log[x.0 as usize] as u64;
                Elem(t.exp[(l * self.frob_mult[k as usize] % (self.q as u64 - 1)) as usize])
            }
            Repr::Poly { frob } => {
                let mut d = self.digits(x);
                for _ in 0..k {
                    let mut out = vec![0u32; self.n as usize];
                    for (i, &c) in d.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for (o, &f) in out.iter_mut().zip(&frob[i]) {
                            *o = (*o + c * f) % self.p;
                        }
                    }
                    d = out;
                }
                self.pack_digits(&d)
            }
        }
    }

    /// g^k for the stored generator.
    pub fn exp(&self, k: u64) -> Elem {
        match &self.repr {
            Repr::Tables(t) => Elem(t.exp[(k % (self.q as u64 - 1)) as usize]),
            Repr::Poly { .. } => self.pow(self.generator, k),
        }
    }

    /// Discrete log to the stored generator; `None` for zero.
    pub fn log(&self, x: Elem) -> Option<u64> {
        if x.is_zero() {
            return None;
        }
        match &self.repr {
            Repr::Tables(t) => Some(t.log[x.0 as usize] as u64),
            Repr::Poly { .. } => Some(self.bsgs(x)),
        }
    }

    fn bsgs(&self, x: Elem) -> u64 {
        let order = self.q as u64 - 1;
        let m = (order as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut cur = Elem::ONE;
        for j in 0..m {
            baby.entry(cur).or_insert(j);
            cur = self.mul(cur, self.generator);
        }
        let step = self.pow(self.generator, order - m % order);
        let mut y = x;
        for i in 0..=m {
            if let Some(&j) = baby.get(&y) {
                return (i * m + j) % order;
            }
            y = self.mul(y, step);
        }
        unreachable!("generator spans the multiplicative group")
    }

    fn frob_sum(&self, x: Elem, m: u32) -> Elem {
        let mut acc = Elem::ZERO;
        for i in 0..self.n / m {
            acc = self.add(acc, self.frobenius(x, m * i));
        }
        acc
    }

    // ---- tower ----

    fn embedding(&self, m: u32) -> Result<&Embedding> {
        self.embeddings
            .iter()
            .find(|e| e.m == m)
            .ok_or(Error::NonDivisorDegree { m, n: self.n })
    }

    /// Context of the degree-m subfield (the field itself when m = n).
    pub fn subfield(&self, m: u32) -> Result<Arc<Field>> {
        if m == self.n {
            return Ok(self.arc());
        }
        Ok(self.embedding(m)?.sub.clone())
    }

    /// Image of y in GF(p^m) under the tower embedding.
    pub fn embed(&self, m: u32, y: Elem) -> Result<Elem> {
        if m == self.n {
            return Ok(y);
        }
        let e = self.embedding(m)?;
        if y.is_zero() {
            return Ok(y);
        }
        Ok(match &self.repr {
            Repr::Tables(_) => {
                let k = e.sub.log(y).expect("nonzero");
                self.exp(k * e.scale)
            }
            Repr::Poly { .. } => {
                let mut acc = Elem::ZERO;
                for (c, &b) in e.sub.digits(y).into_iter().zip(&e.basis) {
                    acc = self.add(acc, self.scalar_mul(c, b));
                }
                acc
            }
        })
    }

    /// Preimage of x in GF(p^m) if x lies in the embedded subfield.
    pub fn pullback(&self, m: u32, x: Elem) -> Result<Option<Elem>> {
        if m == self.n {
            return Ok(Some(x));
        }
        let e = self.embedding(m)?;
        if x.is_zero() {
            return Ok(Some(x));
        }
        match &self.repr {
            Repr::Tables(_) => {
                let l = self.log(x).expect("nonzero");
                let c = (self.q as u64 - 1) / (e.sub.q as u64 - 1);
                if !l.is_multiple_of(c) {
                    return Ok(None);
                }
                // l = k * scale (mod q-1); scale = c*j with j a unit mod q_m - 1
                let qm1 = e.sub.q as u64 - 1;
                let j = e.scale / c % qm1;
                let jinv = mod_inverse(j, qm1);
                let k = (l / c) % qm1 * jinv % qm1;
                Ok(Some(e.sub.exp(k)))
            }
            Repr::Poly { .. } => {
                let d = self.digits(x);
                let xp: Vec<u32> = e.pivots.iter().map(|&c| d[c]).collect();
                let mut y = vec![0u32; e.m as usize];
                for (i, &xi) in xp.iter().enumerate() {
                    for (k, yk) in y.iter_mut().enumerate() {
                        *yk = (*yk + xi * e.pinv[i][k]) % self.p;
                    }
                }
                let cand = e.sub.pack_digits(&y);
                if self.embed(m, cand)? == x {
                    Ok(Some(cand))
                } else {
                    Ok(None)
                }
            }
        }
    }

    pub fn in_subfield(&self, m: u32, x: Elem) -> Result<bool> {
        Ok(self.pullback(m, x)?.is_some())
    }

    /// Tr_m^n(x), returned in the GF(p^m) context.
    pub fn trace_to(&self, x: Elem, m: u32) -> Result<Elem> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::NonDivisorDegree { m, n: self.n });
        }
        if m == 1 {
            return Ok(Elem(self.tr_prime(x)));
        }
        let s = self.frob_sum(x, m);
        Ok(self.pullback(m, s)?.expect("trace lies in the subfield"))
    }

    /// Absolute trace as an integer in 0..p.
    pub fn tr_prime(&self, x: Elem) -> u32 {
        match &self.repr {
            Repr::Tables(t) if !t.tr1.is_empty() => t.tr1[x.0 as usize] as u32,
            _ => {
                let mut v = x.0;
                let mut acc = 0u32;
                for i in 0..self.n as usize {
                    acc += (v % self.p) * self.tr1_basis[i];
                    v /= self.p;
                }
                acc % self.p
            }
        }
    }

    // ---- characters ----

    pub fn quad_character(&self, x: Elem) -> Result<i8> {
        let l = self.log(x).ok_or(Error::ZeroArgument)?;
        Ok(if l % 2 == 0 { 1 } else { -1 })
    }

    /// (nonzero squares, nonsquares), each in ascending encoding order.
    pub fn squares_partition(&self) -> (Vec<Elem>, Vec<Elem>) {
        let mut s = Vec::new();
        let mut ns = Vec::new();
        for x in self.nonzero_elements() {
            if self.quad_character(x).expect("nonzero") == 1 {
                s.push(x);
            } else {
                ns.push(x);
            }
        }
        (s, ns)
    }
}

fn unit(n: u32, i: u32) -> Vec<u32> {
    let mut v = vec![0u32; n as usize];
    v[i as usize] = 1;
    v
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let qt = old_r / r;
        (old_r, r) = (r, old_r - qt * r);
        (old_s, s) = (s, old_s - qt * s);
    }
    old_s.rem_euclid(m as i128) as u64
}

/// For an m x n full-row-rank matrix over F_p, choose m pivot columns and
/// return the inverse of the selected m x m block.
fn pivot_inverse(rows: &[Vec<u32>], p: u32) -> (Vec<usize>, Vec<Vec<u32>>) {
    let m = rows.len();
    let n = rows.first().map_or(0, |r| r.len());
    // row-reduce a copy to find pivot columns
    let mut a: Vec<Vec<u32>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(piv) = (r..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = poly::inv_mod(a[r][c], p);
        for v in a[r].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in 0..n {
                    a[i][k] = (a[i][k] + (p - f) * a[r][k]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    assert_eq!(pivots.len(), m, "embedding basis is linearly independent");
    // block B_P (m x m), rows = basis vectors; y * B_P = x_P  =>  y = x_P * B_P^{-1}
    let mut aug: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut row: Vec<u32> = pivots.iter().map(|&c| rows[i][c]).collect();
            row.extend(unit(m as u32, i as u32));
            row
        })
        .collect();
    for c in 0..m {
        let piv = (c..m).find(|&i| aug[i][c] != 0).expect("invertible block");
        aug.swap(c, piv);
        let inv = poly::inv_mod(aug[c][c], p);
        for v in aug[c].iter_mut() {
            *v = *v * inv % p;
        }
        for i in 0..m {
            if i != c && aug[i][c] != 0 {
                let f = aug[i][c];
                for k in 0..2 * m {
                    aug[i][k] = (aug[i][k] + (p - f) * aug[c][k]) % p;
                }
            }
        }
    }
    let inv = aug.into_iter().map(|row| row[m..].to_vec()).collect();
    (pivots, inv)
}

/// Element bound to its field, for callers that want mismatches caught.
#[derive(Clone, Debug)]
pub struct FieldElem {
    field: Arc<Field>,
    value: Elem,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.value == other.value
    }
}

impl FieldElem {
    pub fn new(field: &Arc<Field>, enc: u64) -> Result<Self> {
        Ok(FieldElem {
            value: field.elem(enc)?,
            field: field.clone(),
        })
    }
    pub fn value(&self) -> Elem {
        self.value
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    fn same(&self, o: &FieldElem) -> Result<()> {
        if self.field.same_field(&o.field) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
    fn wrap(&self, v: Elem) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            value: v,
        }
    }
    pub fn add(&self, o: &FieldElem) -> Result<FieldElem> {
        self.same(o)?;
        Ok(self.wrap(self.field.add(self.value, o.value)))
    }
    pub fn sub(&self, o: &FieldElem) -> Result<FieldElem> {
        self.same(o)?;
        Ok(self.wrap(self.field.sub(self.value, o.value)))
    }
    pub fn mul(&self, o: &FieldElem) -> Result<FieldElem> {
        self.same(o)?;
        Ok(self.wrap(self.field.mul(self.value, o.value)))
    }
    pub fn inv(&self) -> Result<FieldElem> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }
    pub fn pow(&self, e: u64) -> FieldElem {
        self.wrap(self.field.pow(self.value, e))
    }
    pub fn frobenius(&self, k: u32) -> FieldElem {
        self.wrap(self.field.frobenius(self.value, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_pow(f: &Field, x: Elem, e: u64) -> Elem {
        let mut r = Elem::ONE;
        for _ in 0..e {
            r = f.mul(r, x);
        }
        r
    }

    #[test]
    fn rejects_bad_characteristic() {
        assert_eq!(Field::conway(2, 3).unwrap_err(), Error::EvenCharacteristic);
        assert_eq!(
            Field::conway(9, 1).unwrap_err(),
            Error::NonPrimeCharacteristic(9)
        );
        assert_eq!(
            Field::conway(17, 2).unwrap_err(),
            Error::NoBundledPolynomial { p: 17, n: 2 }
        );
        let r = Field::with_modulus(5, 2, Some(vec![1, 0, 1]), FieldOptions::default());
        assert_eq!(r.unwrap_err(), Error::ReducibleModulus { p: 5 });
    }

    #[test]
    fn prime_field_generator() {
        let f = Field::conway(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.generator(), Elem(2));
        assert_eq!(f.mul(Elem(2), Elem(2)), Elem(1));
    }

    #[test]
    fn gf81_lattice() {
        let f = Field::conway(3, 4).unwrap();
        assert_eq!(f.order(), 81);
        for m in [1, 2, 4] {
            assert_eq!(f.subfield(m).unwrap().order(), 3u32.pow(m));
        }
        assert!(f.subfield(3).is_err());
    }

    #[test]
    fn group_axioms_exhaustive() {
        for (p, n) in [(3, 1), (3, 2), (3, 4), (5, 2), (7, 2)] {
            let f = Field::conway(p, n).unwrap();
            let g = f.generator();
            assert_eq!(f.pow(g, f.order() as u64 - 1), Elem::ONE);
            for x in f.nonzero_elements() {
                assert_eq!(f.mul(x, f.inv(x).unwrap()), Elem::ONE);
                assert_eq!(f.frobenius(x, n), x);
                assert_eq!(f.add(x, f.neg(x)), Elem::ZERO);
            }
            assert_eq!(f.inv(Elem::ZERO), Err(Error::ZeroInverse));
        }
    }

    #[test]
    fn generator_has_full_order() {
        let f = Field::conway(5, 3).unwrap();
        let g = f.generator();
        let mut seen = std::collections::HashSet::new();
        let mut cur = Elem::ONE;
        for _ in 0..f.order() - 1 {
            assert!(seen.insert(cur));
            cur = f.mul(cur, g);
        }
        assert_eq!(cur, Elem::ONE);
    }

    #[test]
    fn polynomial_fallback_agrees_with_tables() {
        for (p, n) in [(3, 4), (5, 2), (7, 3)] {
            let t = Field::conway(p, n).unwrap();
            let s = Field::with_modulus(p, n, None, FieldOptions { table_limit: 0 }).unwrap();
            assert!(t.is_table_backed() && !s.is_table_backed());
            assert_eq!(t.generator(), s.generator());
            for a in t.elements().step_by(3) {
                for b in t.elements().step_by(5) {
                    assert_eq!(t.add(a, b), s.add(a, b));
                    assert_eq!(t.mul(a, b), s.mul(a, b));
                }
                assert_eq!(t.frobenius(a, 1), s.frobenius(a, 1));
                assert_eq!(t.log(a), s.log(a));
                for m in divisors(n) {
                    assert_eq!(t.trace_to(a, m).unwrap(), s.trace_to(a, m).unwrap());
                }
            }
            for m in divisors(n) {
                let sub = t.subfield(m).unwrap();
                for y in sub.elements() {
                    let e = t.embed(m, y).unwrap();
                    assert_eq!(e, s.embed(m, y).unwrap());
                    assert_eq!(s.pullback(m, e).unwrap(), Some(y));
                }
            }
        }
    }

    #[test]
    fn user_modulus_with_nonprimitive_root() {
        // x^2 + 1 over F_3: X has order 4, not 8.
        let f = Field::with_modulus(3, 2, Some(vec![1, 0, 1]), FieldOptions::default()).unwrap();
        assert!(!f.is_conway());
        assert_ne!(f.generator(), Elem(3));
        assert_eq!(f.pow(f.generator(), 4), f.from_int(-1));
        let sub = f.subfield(1).unwrap();
        for y in sub.elements() {
            assert_eq!(f.pullback(1, f.embed(1, y).unwrap()).unwrap(), Some(y));
        }
    }

    #[test]
    fn gf7_8_frobenius_fixed_set_is_gf49() {
        let f = Field::conway(7, 8).unwrap();
        assert_eq!(f.order(), 5_764_801);
        let fixed: Vec<Elem> = f.elements().filter(|&x| f.frobenius(x, 2) == x).collect();
        assert_eq!(fixed.len(), 49);
        let sub = f.subfield(2).unwrap();
        let mut image: Vec<Elem> = sub.elements().map(|y| f.embed(2, y).unwrap()).collect();
        image.sort();
        assert_eq!(image, fixed);
    }

    #[test]
    fn embedding_compatibility() {
        let f = Field::conway(3, 8).unwrap();
        let mid = f.subfield(4).unwrap();
        let low = f.subfield(2).unwrap();
        for y in low.elements() {
            let via = f.embed(4, mid.embed(2, y).unwrap()).unwrap();
            assert_eq!(via, f.embed(2, y).unwrap());
        }
        // Conway towers embed with exponent multiplier 1
        for e in &f.embeddings {
            let c = (f.order() as u64 - 1) / (e.sub.order() as u64 - 1);
            assert_eq!(e.scale, c);
        }
    }

    #[test]
    fn trace_oracle_gf81() {
        let f = Field::conway(3, 4).unwrap();
        let g = f.generator();
        let direct = f.add(g, naive_pow(&f, g, 9));
        let pulled = f.pullback(2, direct).unwrap().unwrap();
        assert_eq!(f.trace_to(g, 2).unwrap(), pulled);
        assert_eq!(f.trace_to(Elem::ZERO, 2).unwrap(), Elem::ZERO);
        assert_eq!(f.trace_to(g, 4).unwrap(), g);
        assert_eq!(
            f.trace_to(g, 3),
            Err(Error::NonDivisorDegree { m: 3, n: 4 })
        );
    }

    #[test]
    fn trace_transitivity_and_balance() {
        let f = Field::conway(3, 8).unwrap();
        let f4 = f.subfield(4).unwrap();
        let f2 = f.subfield(2).unwrap();
        let mut fibers = [0u32; 9];
        for x in f.elements() {
            let t4 = f.trace_to(x, 4).unwrap();
            let t2 = f.trace_to(x, 2).unwrap();
            assert_eq!(f4.trace_to(t4, 2).unwrap(), t2);
            assert_eq!(f2.trace_to(t2, 1).unwrap(), f.trace_to(x, 1).unwrap());
            fibers[t2.0 as usize] += 1;
        }
        assert!(fibers.iter().all(|&c| c == 3u32.pow(6)));
    }

    #[test]
    fn quadratic_character() {
        let f = Field::conway(5, 2).unwrap();
        let g = f.generator();
        assert_eq!(f.quad_character(Elem::ONE), Ok(1));
        assert_eq!(f.quad_character(g), Ok(-1));
        assert_eq!(f.quad_character(f.mul(g, g)), Ok(1));
        assert_eq!(f.quad_character(Elem::ZERO), Err(Error::ZeroArgument));
        for x in f.nonzero_elements() {
            for y in f.nonzero_elements() {
                let l = f.quad_character(f.mul(x, y)).unwrap();
                assert_eq!(
                    l,
                    f.quad_character(x).unwrap() * f.quad_character(y).unwrap()
                );
            }
        }
    }

    #[test]
    fn squares_partition_by_squaring_scan() {
        let f3 = Field::conway(3, 1).unwrap();
        assert_eq!(f3.squares_partition(), (vec![Elem(1)], vec![Elem(2)]));
        let f9 = Field::conway(3, 2).unwrap();
        let (s, n) = f9.squares_partition();
        assert_eq!((s.len(), n.len()), (4, 4));
        let f = Field::conway(5, 2).unwrap();
        let (s, n) = f.squares_partition();
        let mut scan: Vec<Elem> = f.nonzero_elements().map(|x| f.mul(x, x)).collect();
        scan.sort();
        scan.dedup();
        assert_eq!(s, scan);
        let evens: std::collections::BTreeSet<Elem> = (0..12).map(|k| f.exp(2 * k)).collect();
        assert_eq!(s, evens.into_iter().collect::<Vec<_>>());
        assert_eq!(s.len() + n.len() + 1, 25);
    }

    #[test]
    fn checked_elements_detect_mismatch() {
        let a = FieldElem::new(&Field::conway(3, 2).unwrap(), 4).unwrap();
        let b = FieldElem::new(&Field::conway(3, 4).unwrap(), 4).unwrap();
        assert_eq!(a.add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.mul(&a.inv().unwrap()).unwrap().value(), Elem::ONE);
        assert!(FieldElem::new(&Field::conway(3, 2).unwrap(), 9).is_err());
    }

    #[test]
    fn encoding_roundtrip() {
        let f = Field::conway(7, 3).unwrap();
        for x in f.elements() {
            assert_eq!(f.from_digits(&f.digits(x)).unwrap(), x);
        }
        assert_eq!(f.digits(Elem::ONE), vec![1, 0, 0]);
    }
}
