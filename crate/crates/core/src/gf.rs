//! Exact arithmetic in GF(p^k) for small odd primes p and extension degrees k <= 8.
//!
//! Elements are coefficient vectors over the power basis of a deterministic
//! modulus: the lexicographically smallest monic irreducible polynomial of
//! degree k over GF(p), where candidates are ordered by the base-p integer
//! encoding of their non-leading coefficients. Two contexts created with the
//! same (p, k) are therefore interchangeable.
//!
//! Root extraction for general n runs through a lazily built discrete-log
//! table, which is practical for the field sizes this library targets
//! (q up to a few million). Roots with gcd(n, q-1) = 1, in particular all
//! p-power roots, never need the table.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Largest supported extension degree over the prime field.
pub const MAX_EXT_DEGREE: usize = 8;

/// Largest field order for which discrete-log tables are built.
const DLOG_TABLE_CAP: u64 = 1 << 22;

/// Largest field order scanned when locating an embedding root.
const EMBED_SCAN_CAP: u64 = 1 << 22;

/// An element of GF(p^k): k residues mod p in the power basis of the modulus.
///
/// Scalars carry (p, k) so mixed-context arithmetic can be rejected; all
/// arithmetic goes through [`FieldCtx`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scalar {
    p: u16,
    k: u8,
    c: [u8; MAX_EXT_DEGREE],
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// Power-basis coordinates, length k.
    pub fn coeffs(&self) -> Vec<u16> {
        self.c[..self.k as usize].iter().map(|&x| x as u16).collect()
    }

    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn ext_degree(&self) -> u32 {
        self.k as u32
    }
}

impl fmt::Display for Scalar {
    /// Prime-field elements print as decimal integers, extension elements as
    /// "[c0,c1,...]" power-basis coordinates. This is the CLI/JSON syntax.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "[")?;
            for i in 0..self.k as usize {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.c[i])?;
            }
            write!(f, "]")
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

struct FieldInner {
    p: u16,
    k: u8,
    q: u64,
    /// Monic modulus, k+1 coefficients in ascending degree order.
    modulus: Vec<u16>,
    /// x^k = sum_i reduction[i] x^i, the negated low part of the modulus.
    reduction: [u16; MAX_EXT_DEGREE],
    dlog: OnceLock<Result<DlogTables>>,
}

struct DlogTables {
    /// log[index(a)] for a != 0; log of the fixed generator is 1.
    log: Vec<u32>,
    /// exp[e] = index(g^e), length q-1.
    exp: Vec<u32>,
}

/// An extension field GF(p^k) with its deterministic modulus.
///
/// Cheap to clone (shared handle); immutable after creation and safe to use
/// from many threads.
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}
impl Eq for FieldCtx {}

impl std::hash::Hash for FieldCtx {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.k).hash(state);
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.k)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---- dense polynomial helpers over GF(p), used only for modulus selection ----

mod pp {
    //! Polynomials over the prime field as ascending coefficient vectors.

    pub fn trim(v: &mut Vec<u32>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r: Vec<u32> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let inv_lead = inv_mod(b[db], p);
        while r.len() > db {
            let da = r.len() - 1;
            let c = (r[da] * inv_lead) % p;
            if c != 0 {
                for i in 0..=db {
                    let idx = da - db + i;
                    r[idx] = (r[idx] + p * p - (c * b[i]) % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += (x as u64) * (y as u64);
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|v| (v % p as u64) as u32).collect();
        trim(&mut out);
        out
    }

    pub fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// g^(p) mod m, then iterated j times: g^(p^j) mod m.
    pub fn frob_pow(g: &[u32], j: u32, m: &[u32], p: u32) -> Vec<u32> {
        let mut cur = g.to_vec();
        for _ in 0..j {
            cur = powmod(&cur, p as u64, m, p);
        }
        cur
    }

    pub fn powmod(g: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
        let mut base = rem(g, m, p);
        let mut acc = vec![1u32];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            base = mulmod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn inv_mod(a: u32, p: u32) -> u32 {
        // Fermat; p is prime and a != 0.
        let mut e = p - 2;
        let mut base = a % p;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    }
}

/// Rabin irreducibility test for a monic polynomial of degree k over GF(p).
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    // x^(p^k) must reduce to x itself.
    let xpk = pp::frob_pow(&x, k as u32, poly, p);
    let mut diff = xpk.clone();
    while diff.len() < 2 {
        diff.push(0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    pp::trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    // For each prime r | k, gcd(x^(p^(k/r)) - x, poly) must be constant.
    let mut rest = k;
    let mut r = 2;
    let mut prime_divs = vec![];
    while rest > 1 {
        if rest % r == 0 {
            prime_divs.push(r);
            while rest % r == 0 {
                rest /= r;
            }
        }
        r += 1;
    }
    for r in prime_divs {
        let e = pp::frob_pow(&x, (k / r) as u32, poly, p);
        let mut diff = e;
        while diff.len() < 2 {
            diff.push(0);
        }
        diff[1] = (diff[1] + p - 1) % p;
        pp::trim(&mut diff);
        if diff.is_empty() {
            return false;
        }
        let g = pp::gcd(poly, &diff, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

impl FieldCtx {
    /// Build GF(p^k) with the deterministic modulus.
    pub fn new(p: u64, k: u32) -> Result<FieldCtx> {
        if p % 2 == 0 {
            return Err(Error::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p > 1 << 8 {
            return Err(Error::UnsupportedField { p, k, reason: "characteristic above 2^8" });
        }
        if k == 0 || k as usize > MAX_EXT_DEGREE {
            return Err(Error::UnsupportedField { p, k, reason: "extension degree must be 1..=8" });
        }
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q.checked_mul(p).ok_or(Error::UnsupportedField {
                p,
                k,
                reason: "field order overflows 64 bits",
            })?;
        }
        let modulus = Self::smallest_irreducible(p as u32, k as usize);
        let mut reduction = [0u16; MAX_EXT_DEGREE];
        for i in 0..k as usize {
            // x^k = -(lower part), coefficients already reduced mod p
            reduction[i] = ((p as u32 - modulus[i] as u32) % p as u32) as u16;
        }
        Ok(FieldCtx(Arc::new(FieldInner {
            p: p as u16,
            k: k as u8,
            q,
            modulus,
            reduction,
            dlog: OnceLock::new(),
        })))
    }

    /// GF(p^(k*m)), the m-fold extension of this field in the same tower.
    pub fn extension(&self, m: u32) -> Result<FieldCtx> {
        FieldCtx::new(self.p(), self.k() * m)
    }

    fn smallest_irreducible(p: u32, k: usize) -> Vec<u16> {
        let mut coeffs = vec![0u32; k + 1];
        coeffs[k] = 1;
        let mut n: u64 = 0;
        loop {
            let mut rest = n;
            for c in coeffs.iter_mut().take(k) {
                *c = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            if is_irreducible(&coeffs, p) {
                return coeffs.iter().map(|&c| c as u16).collect();
            }
            n += 1;
        }
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn k(&self) -> u32 {
        self.0.k as u32
    }

    /// Field order q = p^k.
    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Modulus coefficients in ascending degree order (length k+1, monic).
    pub fn modulus(&self) -> Vec<u16> {
        self.0.modulus.clone()
    }

    pub fn check(&self, a: &Scalar) -> Result<()> {
        if a.p == self.0.p && a.k == self.0.k {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar { p: self.0.p, k: self.0.k, c: [0; MAX_EXT_DEGREE] }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    /// Embed an integer via reduction mod p (prime subfield).
    pub fn from_int(&self, v: i64) -> Scalar {
        let p = self.0.p as i64;
        let r = ((v % p) + p) % p;
        let mut c = [0u8; MAX_EXT_DEGREE];
        c[0] = r as u8;
        Scalar { p: self.0.p, k: self.0.k, c }
    }

    /// Build a scalar from power-basis coordinates (at most k of them).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Scalar> {
        if coeffs.len() > self.0.k as usize {
            return Err(Error::LengthMismatch { expected: self.0.k as usize, got: coeffs.len() });
        }
        let p = self.0.p as i64;
        let mut c = [0u8; MAX_EXT_DEGREE];
        for (i, &v) in coeffs.iter().enumerate() {
            c[i] = (((v % p) + p) % p) as u8;
        }
        Ok(Scalar { p: self.0.p, k: self.0.k, c })
    }

    /// Enumeration index: sum c_i p^i in [0, q).
    pub fn index_of(&self, a: &Scalar) -> u64 {
        let p = self.0.p as u64;
        let mut idx = 0u64;
        for i in (0..self.0.k as usize).rev() {
            idx = idx * p + a.c[i] as u64;
        }
        idx
    }

    pub fn scalar_at(&self, mut index: u64) -> Scalar {
        let p = self.0.p as u64;
        let mut c = [0u8; MAX_EXT_DEGREE];
        for item in c.iter_mut().take(self.0.k as usize) {
            *item = (index % p) as u8;
            index /= p;
        }
        Scalar { p: self.0.p, k: self.0.k, c }
    }

    /// All q field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        (0..self.0.q).map(move |i| self.scalar_at(i))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let p = self.0.p;
        let mut c = [0u8; MAX_EXT_DEGREE];
        for i in 0..self.0.k as usize {
            c[i] = ((a.c[i] as u16 + b.c[i] as u16) % p) as u8;
        }
        Scalar { p: self.0.p, k: self.0.k, c }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let p = self.0.p;
        let mut c = [0u8; MAX_EXT_DEGREE];
        for i in 0..self.0.k as usize {
            c[i] = ((a.c[i] as u16 + p - b.c[i] as u16) % p) as u8;
        }
        Scalar { p: self.0.p, k: self.0.k, c }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let k = self.0.k as usize;
        let p = self.0.p as u32;
        if k == 1 {
            let v = (a.c[0] as u32 * b.c[0] as u32) % p;
            let mut c = [0u8; MAX_EXT_DEGREE];
            c[0] = v as u8;
            return Scalar { p: self.0.p, k: self.0.k, c };
        }
        let mut prod = [0u32; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..k {
            if a.c[i] == 0 {
                continue;
            }
            let ai = a.c[i] as u32;
            for j in 0..k {
                prod[i + j] += ai * b.c[j] as u32;
            }
        }
        // Fold degrees >= k down with x^k = reduction(x).
        for deg in (k..=2 * k - 2).rev() {
            let c = prod[deg] % p;
            if c != 0 {
                for i in 0..k {
                    let r = self.0.reduction[i] as u32;
                    if r != 0 {
                        prod[deg - k + i] += c * r;
                    }
                }
            }
            prod[deg] = 0;
        }
        let mut c = [0u8; MAX_EXT_DEGREE];
        for i in 0..k {
            c[i] = (prod[i] % p) as u8;
        }
        Scalar { p: self.0.p, k: self.0.k, c }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_u(a, self.0.q - 2))
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow_u(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow_u(a, e as u64))
        } else {
            let inv = self.inv(a)?;
            Ok(self.pow_u(&inv, e.unsigned_abs()))
        }
    }

    /// The p-power Frobenius map a -> a^p; bijective on the field.
    pub fn frobenius(&self, a: &Scalar) -> Scalar {
        self.pow_u(a, self.0.p as u64)
    }

    /// All n-th roots of a, possibly empty, sorted by enumeration index.
    ///
    /// When gcd(n, q-1) = 1 (this covers all p-power roots) the answer is a
    /// singleton computed without tables; the general case walks the
    /// discrete-log table and fails for fields past the table cap.
    pub fn nth_roots(&self, a: &Scalar, n: u64) -> Result<Vec<Scalar>> {
        self.check(a)?;
        if n == 0 {
            return Err(Error::InvalidArgument("root order n must be >= 1".into()));
        }
        if a.is_zero() {
            return Ok(vec![self.zero()]);
        }
        let group = self.0.q - 1;
        let ne = n % group;
        if ne == 0 {
            // x^n = x^(q-1)^t = 1 for all nonzero x.
            return if a.is_one() {
                Ok(self.elements().filter(|x| !x.is_zero()).collect())
            } else {
                Ok(vec![])
            };
        }
        let d = gcd_u64(ne, group);
        if d == 1 {
            let e = mod_inverse(ne, group).expect("coprime");
            return Ok(vec![self.pow_u(a, e)]);
        }
        let tables = self.dlog_tables()?;
        let t = tables.log[self.index_of(a) as usize] as u64;
        if t % d != 0 {
            return Ok(vec![]);
        }
        let m = group / d;
        let s0 = mulmod_u64(t / d, mod_inverse(ne / d, m).expect("coprime"), m);
        let mut roots: Vec<Scalar> = (0..d)
            .map(|j| self.scalar_at(tables.exp[((s0 + j * m) % group) as usize] as u64))
            .collect();
        roots.sort_by_key(|r| self.index_of(r));
        Ok(roots)
    }

    fn dlog_tables(&self) -> Result<&DlogTables> {
        let built = self.0.dlog.get_or_init(|| self.build_dlog_tables());
        match built {
            Ok(t) => Ok(t),
            Err(_) => Err(Error::RootTableTooLarge { q: self.0.q }),
        }
    }

    fn build_dlog_tables(&self) -> Result<DlogTables> {
        let q = self.0.q;
        if q > DLOG_TABLE_CAP {
            return Err(Error::RootTableTooLarge { q });
        }
        let group = q - 1;
        let mut prime_factors = vec![];
        let mut rest = group;
        let mut d = 2u64;
        while d * d <= rest {
            if rest % d == 0 {
                prime_factors.push(d);
                while rest % d == 0 {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            prime_factors.push(rest);
        }
        // First generator in index order keeps the tables deterministic.
        let generator = (1..q)
            .map(|i| self.scalar_at(i))
            .find(|g| prime_factors.iter().all(|&r| !self.pow_u(g, group / r).is_one()))
            .expect("the multiplicative group of a finite field is cyclic");
        let mut log = vec![u32::MAX; q as usize];
        let mut exp = vec![0u32; group as usize];
        let mut cur = self.one();
        for e in 0..group {
            let idx = self.index_of(&cur);
            exp[e as usize] = idx as u32;
            log[idx as usize] = e as u32;
            cur = self.mul(&cur, &generator);
        }
        Ok(DlogTables { log, exp })
    }

    /// Parse the CLI/JSON scalar syntax: a decimal integer (embedded via the
    /// prime subfield) or "[c0,c1,...]" power-basis coordinates.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| Error::Syntax {
                pos: t.len(),
                msg: "unterminated '['".into(),
            })?;
            let mut coeffs = vec![];
            for part in inner.split(',') {
                let v: i64 = part.trim().parse().map_err(|_| Error::Syntax {
                    pos: 0,
                    msg: format!("bad coordinate {part:?}"),
                })?;
                coeffs.push(v);
            }
            self.from_coeffs(&coeffs)
        } else {
            let v: i64 = t
                .parse()
                .map_err(|_| Error::Syntax { pos: 0, msg: format!("bad scalar {t:?}") })?;
            Ok(self.from_int(v))
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(((old_s % m as i128 + m as i128) % m as i128) as u64)
}

/// Coefficient-wise embedding GF(p^k) -> GF(p^(k*m)) along a root of the
/// source modulus in the target field.
///
/// The root with the smallest enumeration index is chosen, so the embedding
/// is deterministic for a given (source, target) pair.
pub struct Embedding {
    src: FieldCtx,
    dst: FieldCtx,
    /// Powers beta^0 .. beta^(k_src - 1) in the target field.
    powers: Vec<Scalar>,
}

impl Embedding {
    pub fn new(src: &FieldCtx, dst: &FieldCtx) -> Result<Embedding> {
        let incompatible = Error::NoEmbedding {
            ps: src.p(),
            ks: src.k(),
            pd: dst.p(),
            kd: dst.k(),
        };
        if src.p() != dst.p() || dst.k() % src.k() != 0 {
            return Err(incompatible);
        }
        let ks = src.k() as usize;
        let beta = if ks == 1 {
            // Modulus is x + c0; the root is -c0 in the prime subfield.
            dst.from_int(-(src.modulus()[0] as i64))
        } else {
            if dst.order() > EMBED_SCAN_CAP {
                return Err(Error::UnsupportedField {
                    p: dst.p(),
                    k: dst.k(),
                    reason: "target field too large for embedding root search",
                });
            }
            let modulus = src.modulus();
            dst.elements()
                .find(|cand| {
                    let mut acc = dst.zero();
                    let mut pw = dst.one();
                    for &mc in &modulus {
                        if mc != 0 {
                            acc = dst.add(&acc, &dst.mul(&dst.from_int(mc as i64), &pw));
                        }
                        pw = dst.mul(&pw, cand);
                    }
                    acc.is_zero()
                })
                .ok_or(incompatible)?
        };
        let mut powers = Vec::with_capacity(ks);
        let mut pw = dst.one();
        for _ in 0..ks {
            powers.push(pw);
            pw = dst.mul(&pw, &beta);
        }
        Ok(Embedding { src: src.clone(), dst: dst.clone(), powers })
    }

    pub fn source(&self) -> &FieldCtx {
        &self.src
    }

    pub fn target(&self) -> &FieldCtx {
        &self.dst
    }

    pub fn map(&self, a: &Scalar) -> Result<Scalar> {
        self.src.check(a)?;
        let mut acc = self.dst.zero();
        for (i, pw) in self.powers.iter().enumerate() {
            let c = a.c[i];
            if c != 0 {
                acc = self.dst.add(&acc, &self.dst.mul(&self.dst.from_int(c as i64), pw));
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, k: u32) -> FieldCtx {
        FieldCtx::new(p, k).unwrap()
    }

    #[test]
    fn create_rejects_bad_parameters() {
        assert!(matches!(FieldCtx::new(4, 1), Err(Error::EvenCharacteristic(4))));
        assert!(matches!(FieldCtx::new(9, 1), Err(Error::NonPrime(9))));
        assert!(matches!(FieldCtx::new(3, 0), Err(Error::UnsupportedField { .. })));
        assert!(matches!(FieldCtx::new(3, 9), Err(Error::UnsupportedField { .. })));
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f3 = gf(3, 1);
        assert_eq!(f3.modulus(), vec![0, 1]);
        assert_eq!(f3.order(), 3);
    }

    #[test]
    fn gf9_modulus_has_no_rational_root() {
        // Independent check: scan GF(3) for roots of the chosen modulus.
        // Degree 2 without roots is irreducible.
        let f9 = gf(3, 2);
        let m = f9.modulus();
        assert_eq!(m.len(), 3);
        for x in 0i64..3 {
            let val = (m[0] as i64 + m[1] as i64 * x + m[2] as i64 * x * x) % 3;
            assert_ne!(val, 0, "modulus has root {x} over GF(3)");
        }
    }

    #[test]
    fn moduli_are_irreducible_by_exhaustive_candidate_check() {
        // For k <= 3, irreducible == no roots in GF(p); verify the selected
        // modulus is also the first such candidate in enumeration order.
        for (p, k) in [(3u64, 2u32), (3, 3), (5, 2), (7, 2)] {
            let f = gf(p, k);
            let chosen = f.modulus();
            let mut expected = None;
            'search: for n in 0..p.pow(k) {
                let mut coeffs = vec![0i64; k as usize + 1];
                coeffs[k as usize] = 1;
                let mut rest = n;
                for c in coeffs.iter_mut().take(k as usize) {
                    *c = (rest % p) as i64;
                    rest /= p;
                }
                for x in 0..p as i64 {
                    let mut v = 0i64;
                    for c in coeffs.iter().rev() {
                        v = (v * x + c) % p as i64;
                    }
                    if v == 0 {
                        continue 'search;
                    }
                }
                expected = Some(coeffs.iter().map(|&c| c as u16).collect::<Vec<_>>());
                break;
            }
            assert_eq!(chosen, expected.unwrap(), "GF({p}^{k})");
        }
    }

    #[test]
    fn field_create_is_deterministic() {
        let a = gf(3, 4);
        let b = gf(3, 4);
        assert_eq!(a.modulus(), b.modulus());
    }

    #[test]
    fn basic_prime_field_arithmetic() {
        let f3 = gf(3, 1);
        let two = f3.from_int(2);
        assert!(f3.mul(&two, &two).is_one());
        assert_eq!(f3.add(&two, &two), f3.from_int(1));
        assert!(matches!(f3.inv(&f3.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn context_mismatch_detected() {
        let f3 = gf(3, 1);
        let f9 = gf(3, 2);
        assert!(matches!(f3.check(&f9.zero()), Err(Error::ContextMismatch)));
        assert!(f9.check(&f9.one()).is_ok());
    }

    #[test]
    fn every_nonzero_element_is_invertible_gf9() {
        let f9 = gf(3, 2);
        for a in f9.elements().filter(|a| !a.is_zero()) {
            let inv = f9.inv(&a).unwrap();
            assert!(f9.mul(&a, &inv).is_one());
        }
    }

    #[test]
    fn pow_q_is_identity_gf9() {
        // Oracle: repeated multiplication.
        let f9 = gf(3, 2);
        for a in f9.elements() {
            let mut slow = f9.one();
            for _ in 0..9 {
                slow = f9.mul(&slow, &a);
            }
            assert_eq!(f9.pow_u(&a, 9), slow);
            assert_eq!(f9.pow_u(&a, 9), a);
        }
    }

    #[test]
    fn negative_powers() {
        let f9 = gf(3, 2);
        let a = f9.from_coeffs(&[1, 2]).unwrap();
        let ainv = f9.inv(&a).unwrap();
        assert_eq!(f9.pow(&a, -3).unwrap(), f9.pow_u(&ainv, 3));
        assert!(f9.pow(&f9.zero(), -1).is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f3 = gf(3, 1);
        assert_eq!(f3.frobenius(&f3.from_int(2)), f3.from_int(2));
        let f9 = gf(3, 2);
        assert!(f9.frobenius(&f9.zero()).is_zero());
        for a in f9.elements() {
            assert_eq!(f9.frobenius(&f9.frobenius(&a)), a, "Galois group of GF(9) has order 2");
        }
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism() {
        for (p, k) in [(3u64, 2u32), (3, 4), (5, 2), (7, 1)] {
            let f = gf(p, k);
            let step = (f.order() / 23).max(1);
            let sample: Vec<Scalar> = (0..f.order()).step_by(step as usize).map(|i| f.scalar_at(i)).collect();
            for a in &sample {
                for b in &sample {
                    assert_eq!(
                        f.frobenius(&f.add(a, b)),
                        f.add(&f.frobenius(a), &f.frobenius(b))
                    );
                    assert_eq!(
                        f.frobenius(&f.mul(a, b)),
                        f.mul(&f.frobenius(a), &f.frobenius(b))
                    );
                }
            }
        }
    }

    #[test]
    fn cube_roots_in_gf27_are_unique_and_match_double_frobenius() {
        let f27 = gf(3, 3);
        for a in f27.elements() {
            let roots = f27.nth_roots(&a, 3).unwrap();
            assert_eq!(roots.len(), 1);
            assert_eq!(roots[0], f27.pow_u(&a, 9), "cube root must be a^(3^2)");
            assert_eq!(f27.pow_u(&roots[0], 3), a);
        }
    }

    #[test]
    fn fourth_roots_of_unity_in_gf9() {
        let f9 = gf(3, 2);
        let roots = f9.nth_roots(&f9.one(), 4).unwrap();
        assert_eq!(roots.len(), 4);
        let minus_one = f9.from_int(-1);
        assert!(roots.contains(&f9.one()));
        assert!(roots.contains(&minus_one));
        let xi: Vec<Scalar> = roots
            .iter()
            .copied()
            .filter(|r| !r.is_one() && *r != minus_one)
            .collect();
        assert_eq!(xi.len(), 2);
        for x in xi {
            assert_eq!(f9.mul(&x, &x), minus_one, "the remaining roots square to -1");
        }
    }

    #[test]
    fn nth_roots_of_zero() {
        let f9 = gf(3, 2);
        assert_eq!(f9.nth_roots(&f9.zero(), 5).unwrap(), vec![f9.zero()]);
    }

    #[test]
    fn nth_roots_complete_and_sound() {
        // Exhaustive: the root set is exactly { x : x^n = a }.
        for (p, k) in [(3u64, 2u32), (3, 3), (5, 1)] {
            let f = gf(p, k);
            for n in 1..=10u64 {
                for a in f.elements() {
                    let roots = f.nth_roots(&a, n).unwrap();
                    let brute: Vec<Scalar> =
                        f.elements().filter(|x| f.pow_u(x, n) == a).collect();
                    assert_eq!(roots, brute, "q={} n={} a={}", f.order(), n, a);
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_field_homomorphism() {
        let f9 = gf(3, 2);
        let f81 = gf(3, 4);
        let emb = Embedding::new(&f9, &f81).unwrap();
        for a in f9.elements() {
            for b in f9.elements() {
                assert_eq!(
                    emb.map(&f9.add(&a, &b)).unwrap(),
                    f81.add(&emb.map(&a).unwrap(), &emb.map(&b).unwrap())
                );
                assert_eq!(
                    emb.map(&f9.mul(&a, &b)).unwrap(),
                    f81.mul(&emb.map(&a).unwrap(), &emb.map(&b).unwrap())
                );
            }
        }
        assert!(emb.map(&f9.one()).unwrap().is_one());
        // Injective on a sample
        let images: std::collections::HashSet<u64> =
            f9.elements().map(|a| f81.index_of(&emb.map(&a).unwrap())).collect();
        assert_eq!(images.len(), 9);
    }

    #[test]
    fn embedding_rejects_incompatible_towers() {
        let f9 = gf(3, 2);
        let f27 = gf(3, 3);
        assert!(Embedding::new(&f9, &f27).is_err());
        let f5 = gf(5, 1);
        assert!(Embedding::new(&f5, &f9).is_err());
    }

    #[test]
    fn scalar_text_round_trip() {
        let f3 = gf(3, 1);
        assert_eq!(f3.parse_scalar("2").unwrap(), f3.from_int(2));
        assert_eq!(f3.parse_scalar("-1").unwrap(), f3.from_int(2));
        let f9 = gf(3, 2);
        for a in f9.elements() {
            assert_eq!(f9.parse_scalar(&a.to_string()).unwrap(), a);
        }
        assert_eq!(f9.parse_scalar("2").unwrap(), f9.from_int(2));
        assert!(f9.parse_scalar("[1,2,0]").is_err());
        assert!(f9.parse_scalar("oops").is_err());
    }
}
