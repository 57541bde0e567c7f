//! Dense polynomials over F_p, little-endian coefficient vectors.
//!
//! Only what the irreducibility test and the non-table fallback need.

pub(crate) fn trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a as u64, (p - 2) as u64, p as u64) as u32
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        out[i] = (x + p - y) % p;
    }
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|v| v as u32).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `m` (m nonzero, any leading coefficient).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p) as u64;
    while r.len() > dm {
        let top = r.len() - 1;
        let f = r[top] as u64 * lead_inv % p as u64;
        if f != 0 {
            let shift = top - dm;
            for (i, &c) in m.iter().enumerate() {
                let t = (f * c as u64) % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - t) % p as u64) as u32;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_mod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv_mod(l, p) as u64;
        for c in a.iter_mut() {
            *c = (*c as u64 * li % p as u64) as u32;
        }
    }
    a
}

/// `base^(p^k)` modulo `m` by k successive p-th powers.
pub(crate) fn frob_pow(base: &[u32], k: u32, m: &[u32], p: u32) -> Vec<u32> {
    let mut cur = rem(base, m, p);
    for _ in 0..k {
        let mut acc = vec![1u32];
        let mut b = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Ben-Or style test: monic `f` of degree n is irreducible iff
/// gcd(f, X^{p^k} - X) = 1 for every k <= n/2.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=n / 2 {
        xp = frob_pow(&xp, 1, f, p);
        let d = sub(&xp, &x, p);
        if gcd(f, &d, p).len() != 1 {
            return false;
        }
    }
    true
}
