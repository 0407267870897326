//! Factorization of square-free integer polynomials: Berlekamp modulo a
//! small prime, quadratic Hensel lifting, and subset recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

type ZPoly = Vec<BigInt>;

fn ztrim(v: &mut ZPoly) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn zdeg(v: &ZPoly) -> usize {
    v.len().saturating_sub(1)
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    ztrim(&mut r);
    r
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(a: &ZPoly) -> ZPoly {
    let c = content(a);
    let mut out: ZPoly = a.iter().map(|x| x / &c).collect();
    if out.last().is_some_and(|x| x.is_negative()) {
        out.iter_mut().for_each(|x| *x = -&*x);
    }
    out
}

/// Exact division over ℤ; `None` if `b` does not divide `a`.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let mut r = a.clone();
    let db = zdeg(b);
    if r.len() < b.len() {
        return if r.is_empty() { Some(Vec::new()) } else { None };
    }
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let (f, rem) = r[k].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..=db {
            r[k - db + j] -= &f * &b[j];
        }
        q[k - db] = f;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    ztrim(&mut q);
    Some(q)
}

// ---- arithmetic modulo a small prime ----

fn pm_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pm_inv(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn pm_from(a: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    pm_trim(&mut v);
    v
}

fn pm_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    pm_trim(&mut v);
    v
}

fn pm_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    pm_trim(&mut r);
    r
}

fn pm_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let db = b.len() - 1;
    let inv = pm_inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = r[k] * inv % p;
        if c == 0 {
            continue;
        }
        for j in 0..=db {
            r[k - db + j] = (r[k - db + j] + p - c * b[j] % p) % p;
        }
        q[k - db] = c;
    }
    pm_trim(&mut r);
    pm_trim(&mut q);
    (q, r)
}

fn pm_monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = pm_inv(l, p);
            a.iter().map(|x| x * inv % p).collect()
        }
    }
}

fn pm_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = pm_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    pm_monic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g = gcd(a, b)` monic.
fn pm_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = pm_divrem(&r0, &r1, p);
        let s = pm_sub(&s0, &pm_mul(&q, &s1, p), p);
        let t = pm_sub(&t0, &pm_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    let inv = pm_inv(*r0.last().unwrap(), p);
    let sc = |v: Vec<u64>| -> Vec<u64> {
        let mut w: Vec<u64> = v.iter().map(|x| x * inv % p).collect();
        pm_trim(&mut w);
        w
    };
    (sc(r0), sc(s0), sc(t0))
}

fn pm_derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
    pm_trim(&mut v);
    v
}

/// Nullspace of a square matrix over F_p (row vectors `v` with `v·M = 0`
/// when `transpose` is false).
fn pm_left_nullspace(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    // Work on the transpose so that the left nullspace becomes a right one.
    let mut a: Vec<Vec<u64>> = (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| a[r][col] != 0) else { continue };
        a.swap(row, pr);
        let inv = pm_inv(a[row][col], p);
        for x in a[row].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != row && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..n {
                    a[r][c] = (a[r][c] + p - f * a[row][c] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - a[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

/// Berlekamp factorization of a monic square-free polynomial mod `p`.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Rows: x^(i p) mod f, minus identity.
    let xp = pm_powmod(&[0, 1], p, f, p);
    let mut q = Vec::with_capacity(n);
    let mut cur = vec![1u64];
    for i in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        row[i] = (row[i] + p - 1) % p;
        q.push(row);
        cur = pm_divrem(&pm_mul(&cur, &xp, p), f, p).1;
    }
    let basis = pm_left_nullspace(&q, p);
    let k = basis.len();
    let mut factors = vec![f.to_vec()];
    for v in &basis {
        if factors.len() >= k {
            break;
        }
        let mut vp = v.clone();
        pm_trim(&mut vp);
        if vp.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for g in factors {
            if g.len() <= 2 {
                next.push(g);
                continue;
            }
            let mut rest = g.clone();
            for s in 0..p {
                if rest.len() <= 2 {
                    break;
                }
                let shifted = pm_sub(&vp, &[s], p);
                let h = pm_gcd(&rest, &shifted, p);
                if h.len() > 1 && h.len() < rest.len() {
                    rest = pm_divrem(&rest, &h, p).0;
                    next.push(h);
                }
            }
            next.push(pm_monic(&rest, p));
        }
        factors = next;
    }
    factors
}

fn pm_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = pm_divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = pm_divrem(&pm_mul(&acc, &b, p), m, p).1;
        }
        b = pm_divrem(&pm_mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    acc
}

// ---- arithmetic modulo a big modulus ----

fn bm_red(a: &ZPoly, m: &BigInt) -> ZPoly {
    let mut v: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut v);
    v
}

fn bm_add(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    bm_red(&(0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect(), m)
}

fn bm_sub(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    bm_red(&(0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect(), m)
}

fn bm_mul(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    bm_red(&zmul(a, b), m)
}

/// Division by a monic polynomial modulo `m`.
fn bm_divrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let mut r = bm_red(a, m);
    let db = zdeg(b);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = r[k].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for j in 0..=db {
            r[k - db + j] = (&r[k - db + j] - &c * &b[j]).mod_floor(m);
        }
        q[k - db] = c;
    }
    ztrim(&mut r);
    ztrim(&mut q);
    (q, r)
}

/// One quadratic Hensel step: from `f ≡ g h (mod m)` with `s g + t h ≡ 1`
/// to the same relations modulo `m²`. `h` is monic.
fn hensel_step(f: &ZPoly, g: &ZPoly, h: &ZPoly, s: &ZPoly, t: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly, ZPoly, ZPoly) {
    let m2 = m * m;
    let e = bm_sub(f, &bm_mul(g, h, &m2), &m2);
    let (q, r) = bm_divrem_monic(&bm_mul(s, &e, &m2), h, &m2);
    let g2 = bm_add(g, &bm_add(&bm_mul(t, &e, &m2), &bm_mul(&q, g, &m2), &m2), &m2);
    let h2 = bm_add(h, &r, &m2);
    let b = bm_sub(
        &bm_add(&bm_mul(s, &g2, &m2), &bm_mul(t, &h2, &m2), &m2),
        &[BigInt::one()].to_vec(),
        &m2,
    );
    let (c, d) = bm_divrem_monic(&bm_mul(s, &b, &m2), &h2, &m2);
    let s2 = bm_sub(s, &d, &m2);
    let t2 = bm_sub(&bm_sub(t, &bm_mul(t, &b, &m2), &m2), &bm_mul(&c, &g2, &m2), &m2);
    (g2, h2, s2, t2)
}

fn to_z(a: &[u64]) -> ZPoly {
    a.iter().map(|&x| BigInt::from(x)).collect()
}

/// Lifts `f ≡ lc(f) Π u_i (mod p)` (u_i monic) to modulus `p^(2^k) ≥ bound`.
fn multifactor_lift(f: &ZPoly, us: &[Vec<u64>], p: u64, bound: &BigInt) -> (Vec<ZPoly>, BigInt) {
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut steps = 0;
    while &modulus < bound {
        modulus = &modulus * &modulus;
        steps += 1;
    }
    let mut out = Vec::new();
    let mut rest_f = f.clone();
    for (idx, u) in us.iter().enumerate() {
        if idx == us.len() - 1 {
            // The remaining cofactor, made monic.
            let lcf = rest_f.last().unwrap().clone();
            let inv = lcf.modinv(&modulus).expect("leading coefficient not invertible");
            out.push(bm_red(&rest_f.iter().map(|c| c * &inv).collect(), &modulus));
            break;
        }
        // g: current factor (monic), h: product of the others (monic); lift
        // rest_f ≡ lc · g · h.
        let rest: Vec<u64> = us[idx + 1..].iter().fold(vec![1u64], |acc, v| pm_mul(&acc, v, p));
        let lcf = rest_f.last().unwrap().clone();
        let lcp = lcf.mod_floor(&pb).to_u64().unwrap();
        let g0 = pm_mul(u, &[lcp], p);
        let (_, s0, t0) = pm_ext_gcd(&g0, &rest, p);
        let (mut g, mut h, mut s, mut t) = (to_z(&g0), to_z(&rest), to_z(&s0), to_z(&t0));
        let mut m = pb.clone();
        for _ in 0..steps {
            let (g2, h2, s2, t2) = hensel_step(&rest_f, &g, &h, &s, &t, &m);
            g = g2;
            h = h2;
            s = s2;
            t = t2;
            m = &m * &m;
        }
        let inv = lcf.modinv(&modulus).expect("leading coefficient not invertible");
        out.push(bm_red(&g.iter().map(|c| c * &inv).collect(), &modulus));
        // Continue with h: monic, lifted.
        rest_f = h;
    }
    (out, modulus)
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m >> 1;
    let mut v: ZPoly = a
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    ztrim(&mut v);
    v
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|n| (2..).take_while(|d| d * d <= *n).all(|d| n % d != 0))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Irreducible factors over ℤ of a primitive square-free polynomial with
/// positive leading coefficient and nonzero constant term.
pub(crate) fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![f.clone()];
    }
    let lc = f.last().unwrap().clone();
    // Pick the prime giving the fewest modular factors among a few candidates.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = pm_from(f, p);
        if fp.len() != f.len() {
            continue;
        }
        if pm_gcd(&fp, &pm_derivative(&fp, p), p).len() != 1 {
            continue;
        }
        let facs = berlekamp(&pm_monic(&fp, p), p);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 || p > 400 {
            break;
        }
    }
    let (p, mut us) = best.expect("no suitable prime");
    us.sort();
    // Mignotte-type bound on factor coefficients, times the leading coefficient.
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let b = (norm2.sqrt() + BigInt::one()) << (n + 1);
    let bound = &b * lc.abs() * 2;
    let (lifted, modulus) = multifactor_lift(f, &us, p, &bound);

    let mut remaining: Vec<ZPoly> = lifted;
    let mut cur = f.clone();
    let mut found = Vec::new();
    let mut k = 1;
    while 2 * k <= remaining.len() {
        let mut hit = None;
        let lcc = cur.last().unwrap().clone();
        for comb in combinations(remaining.len(), k) {
            let mut g: ZPoly = vec![lcc.clone()];
            for &i in &comb {
                g = bm_mul(&g, &remaining[i], &modulus);
            }
            let g = primitive(&symmetric(&g, &modulus));
            if let Some(q) = zdiv_exact(&cur, &g) {
                hit = Some((comb, g, q));
                break;
            }
        }
        match hit {
            Some((comb, g, q)) => {
                found.push(g);
                cur = q;
                remaining = remaining.into_iter().enumerate().filter(|(i, _)| !comb.contains(i)).map(|(_, v)| v).collect();
            }
            None => k += 1,
        }
    }
    found.push(primitive(&cur));
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn splits_products() {
        // (t^2 + 1)(t^2 - 2)(t + 3)
        let f = zmul(&zmul(&z(&[1, 0, 1]), &z(&[-2, 0, 1])), &z(&[3, 1]));
        let mut facs = factor_squarefree(&f);
        facs.sort();
        assert_eq!(facs.len(), 3);
        let prod = facs.iter().fold(z(&[1]), |a, b| zmul(&a, b));
        assert_eq!(prod, f);
    }

    #[test]
    fn swinnerton_dyer_like_stays_whole() {
        // t^4 - 10 t^2 + 1 is irreducible but splits mod every prime.
        let f = z(&[1, 0, -10, 0, 1]);
        assert_eq!(factor_squarefree(&f), vec![f]);
    }

    #[test]
    fn non_monic() {
        // (2t - 1)(3t + 5)(t^2 + t + 1)
        let f = zmul(&zmul(&z(&[-1, 2]), &z(&[5, 3])), &z(&[1, 1, 1]));
        let facs = factor_squarefree(&f);
        assert_eq!(facs.len(), 3);
        assert_eq!(facs.iter().fold(z(&[1]), |a, b| zmul(&a, b)), f);
    }
}
