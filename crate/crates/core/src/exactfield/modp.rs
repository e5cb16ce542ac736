//! Reduction of tower elements modulo word-sized primes, modular linear
//! algebra, and rational reconstruction.
//!
//! A ring homomorphism from the `p`-integral part of a tower into `F_p` is
//! fixed by sending every generator `t_j` to a root of its minimal
//! polynomial reduced mod `p`. Such reductions give exact lower bounds for
//! ranks and fast nonzero certificates; exact upper bounds come from kernel
//! vectors that are lifted back to the tower and verified there.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::Matrix;
use super::rational::Rational;
use super::tower::{Tower, TowerElement};
use super::FieldError;

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = pow_mod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Primes `p = 3 (mod 4)` below `2^62`, in decreasing order.
pub fn primes_3_mod_4() -> impl Iterator<Item = u64> {
    let start = (1u64 << 62) - 1;
    let start = start - (start % 4) + 3 - if start % 4 < 3 { 4 } else { 0 };
    (0..).map(move |k| start - 4 * k).filter(|&p| is_prime_u64(p))
}

/// Square root modulo a prime `p = 3 (mod 4)`.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    let r = pow_mod(a, (p + 1) / 4, p);
    (mul_mod(r, r, p) == a).then_some(r)
}

/// Residue of a rational, `None` if `p` divides the denominator.
pub fn rational_mod(x: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = x.denom().mod_floor(&pb).to_u64()?;
    if d == 0 {
        return None;
    }
    let n = x.numer().mod_floor(&pb).to_u64()?;
    Some(mul_mod(n, inv_mod(d, p), p))
}

/// A homomorphism from a tower to `F_p`.
#[derive(Clone, Debug)]
pub struct ModHom {
    pub p: u64,
    /// Image of each generator.
    pub roots: Vec<u64>,
    /// Image of each basis monomial.
    monomials: Vec<u64>,
}

impl ModHom {
    /// All `2^depth` homomorphisms of `tower` into `F_p`, or `None` when `p`
    /// is bad (a denominator vanishes, or some level does not split into
    /// distinct roots mod `p`).
    pub fn all(tower: &Tower, p: u64) -> Option<Vec<ModHom>> {
        let mut partial: Vec<Vec<u64>> = vec![Vec::new()];
        for j in 0..tower.depth() {
            let (pj, sj) = tower.level_poly(j);
            let mut next = Vec::new();
            for roots in &partial {
                let mono = monomials(roots, p);
                let pp = eval_coeffs(pj.coeffs(), &mono, p)?;
                let ss = eval_coeffs(sj.coeffs(), &mono, p)?;
                let disc = add_mod(mul_mod(pp, pp, p), mul_mod(4, ss, p), p);
                if disc == 0 {
                    return None;
                }
                let sq = sqrt_mod(disc, p)?;
                let half = inv_mod(2, p);
                for r in [add_mod(pp, sq, p), sub_mod(pp, sq, p)] {
                    let mut v = roots.clone();
                    v.push(mul_mod(r, half, p));
                    next.push(v);
                }
            }
            partial = next;
        }
        Some(partial.into_iter().map(|roots| ModHom { p, monomials: monomials(&roots, p), roots }).collect())
    }

    /// Image of `x`, which must lie in (a prefix of) the homomorphism's
    /// tower; `None` if a coefficient is not `p`-integral.
    pub fn eval(&self, x: &TowerElement) -> Option<u64> {
        eval_coeffs(x.coeffs(), &self.monomials, self.p)
    }

    pub fn monomials(&self) -> &[u64] {
        &self.monomials
    }
}

fn monomials(roots: &[u64], p: u64) -> Vec<u64> {
    let mut m = vec![1 % p];
    for &r in roots {
        let hi: Vec<u64> = m.iter().map(|&x| mul_mod(x, r, p)).collect();
        m.extend(hi);
    }
    m
}

fn eval_coeffs(c: &[Rational], mono: &[u64], p: u64) -> Option<u64> {
    let mut acc = 0;
    for (x, &m) in c.iter().zip(mono) {
        if x.is_zero() {
            continue;
        }
        acc = add_mod(acc, mul_mod(rational_mod(x, p)?, m, p), p);
    }
    Some(acc)
}

/// Homomorphisms for the first good prime, skipping `skip` good primes.
pub fn good_homs(tower: &Tower, skip: usize) -> Vec<ModHom> {
    primes_3_mod_4().filter_map(|p| ModHom::all(tower, p)).nth(skip).expect("good primes exist")
}

/// Reduces a matrix under a homomorphism.
pub fn reduce_matrix(m: &Matrix<TowerElement>, h: &ModHom) -> Option<Matrix<u64>> {
    m.iter().map(|row| row.iter().map(|x| h.eval(x)).collect()).collect()
}

/// Reduced row echelon form mod `p` in place; returns the pivot columns.
pub fn rref_mod(m: &mut Matrix<u64>, p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..cols {
                if pivot_row[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(f, pivot_row[j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod(m: &Matrix<u64>, p: u64) -> usize {
    let mut w = m.clone();
    rref_mod(&mut w, p).len()
}

/// Basis of the right kernel of a matrix already in RREF with the given
/// pivots: one vector per free column `f`, equal to 1 at `f` and 0 at the
/// other free columns.
pub fn rref_kernel(rref: &Matrix<u64>, pivots: &[usize], cols: usize, p: u64) -> Vec<(usize, Vec<u64>)> {
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = sub_mod(0, rref[r][f], p);
            }
            (f, v)
        })
        .collect()
}

/// Smallest-height rational congruent to `a` modulo `m`, if one with
/// numerator and denominator below `sqrt(m/2)` exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Chinese remaindering of `x mod m` with `r mod p`.
pub fn crt_step(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let xm = x.mod_floor(&pb).to_u64().expect("residue fits");
    let mm = m.mod_floor(&pb).to_u64().expect("residue fits");
    let k = mul_mod(sub_mod(r, xm, p), inv_mod(mm, p), p);
    x + m * BigInt::from(k)
}

/// Exact rank certificate for a matrix over a tower.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// Prime whose reduction gives the lower bound.
    pub prime: u64,
    /// Number of exactly verified independent kernel vectors.
    pub kernel_dim: usize,
    /// Whether the kernel vectors were lifted from modular data (as opposed
    /// to supplied by the caller).
    pub lifted: bool,
}

/// `true` if `m y = 0` exactly.
pub fn annihilates(m: &Matrix<TowerElement>, y: &[TowerElement]) -> bool {
    m.iter().all(|row| {
        let mut acc = TowerElement::zero(row[0].tower());
        for (a, b) in row.iter().zip(y) {
            if !a.is_zero() && !b.is_zero() {
                acc = &acc + &(a * b);
            }
        }
        acc.is_zero()
    })
}

/// Exact rank of `m` (entries in a single tower).
///
/// The lower bound is the rank of a reduction mod a good prime. The upper
/// bound comes from kernel vectors checked exactly: first the caller's
/// `known_kernel`, and if that is not enough, the modular RREF kernel lifted
/// back to the tower by Chinese remaindering and rational reconstruction.
pub fn certified_rank(
    m: &Matrix<TowerElement>,
    known_kernel: &[Vec<TowerElement>],
    max_primes: usize,
) -> Result<RankCertificate, FieldError> {
    let tower = m[0][0].tower().clone();
    let cols = m[0].len();
    let mut primes = primes_3_mod_4().filter_map(|p| ModHom::all(&tower, p));
    let homs = primes.next().expect("good primes exist");
    let p = homs[0].p;
    let red = reduce_matrix(m, &homs[0]).ok_or(FieldError::DivisionByZero)?;
    let mut rref = red;
    let pivots = rref_mod(&mut rref, p);
    let rank = pivots.len();
    let need = cols - rank;
    if need == 0 {
        return Ok(RankCertificate { rank, prime: p, kernel_dim: 0, lifted: false });
    }
    if !known_kernel.is_empty() && known_kernel.iter().all(|y| annihilates(m, y)) {
        if let Some(k) = reduce_matrix(&known_kernel.to_vec(), &homs[0]) {
            if rank_mod(&k, p) >= need {
                return Ok(RankCertificate { rank, prime: p, kernel_dim: need, lifted: false });
            }
        }
    }
    let lifted = lift_kernel(m, &tower, &pivots, rank, max_primes)?;
    if lifted.iter().all(|y| annihilates(m, y)) {
        return Ok(RankCertificate { rank, prime: p, kernel_dim: lifted.len(), lifted: true });
    }
    Err(FieldError::PrecisionExhausted)
}

/// Lifts the RREF kernel basis (pivot pattern `pivots`) from residues at
/// many primes back to exact tower elements.
fn lift_kernel(
    m: &Matrix<TowerElement>,
    tower: &Tower,
    pivots: &[usize],
    rank: usize,
    max_primes: usize,
) -> Result<Vec<Vec<TowerElement>>, FieldError> {
    let cols = m[0].len();
    let deg = tower.degree();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    // residues[v][c][b]: coordinate b of entry c of kernel vector v
    let mut acc: Vec<Vec<Vec<BigInt>>> = vec![vec![vec![BigInt::zero(); deg]; cols]; free.len()];
    let mut modulus = BigInt::one();
    let mut used = 0;
    let mut last: Option<Vec<Vec<TowerElement>>> = None;
    for homs in primes_3_mod_4().filter_map(|p| ModHom::all(tower, p)) {
        if used >= max_primes {
            break;
        }
        let p = homs[0].p;
        // images of every kernel entry under every homomorphism
        let mut images: Vec<Vec<Vec<u64>>> = Vec::with_capacity(homs.len());
        let mut ok = true;
        for h in &homs {
            let Some(mut r) = reduce_matrix(m, h) else {
                ok = false;
                break;
            };
            let piv = rref_mod(&mut r, p);
            if piv != pivots || piv.len() != rank {
                ok = false;
                break;
            }
            images.push(rref_kernel(&r, &piv, cols, p).into_iter().map(|(_, v)| v).collect());
        }
        if !ok {
            continue;
        }
        let vinv = vandermonde_inverse(&homs, p);
        for (vi, acc_v) in acc.iter_mut().enumerate() {
            for (c, acc_c) in acc_v.iter_mut().enumerate() {
                for (b, slot) in acc_c.iter_mut().enumerate() {
                    let mut coord = 0;
                    for (s, img) in images.iter().enumerate() {
                        coord = add_mod(coord, mul_mod(vinv[b][s], img[vi][c], p), p);
                    }
                    *slot = crt_step(slot, &modulus, coord, p);
                }
            }
        }
        modulus *= BigInt::from(p);
        used += 1;
        if used % 2 != 0 {
            continue;
        }
        let candidate: Option<Vec<Vec<TowerElement>>> = acc
            .iter()
            .map(|v| {
                v.iter()
                    .map(|coords| {
                        let c: Option<Vec<Rational>> =
                            coords.iter().map(|x| rational_reconstruct(x, &modulus)).collect();
                        c.and_then(|c| TowerElement::from_coeffs(tower, c).ok())
                    })
                    .collect()
            })
            .collect();
        if let Some(cand) = candidate {
            if last.as_ref() == Some(&cand) {
                return Ok(cand);
            }
            last = Some(cand);
        }
    }
    last.ok_or(FieldError::PrecisionExhausted)
}

/// Inverse of `V[s][b] = monomial_b(hom_s)` mod `p`, so that coordinates
/// are recovered from images as `c_b = sum_s Vinv[b][s] img_s`.
fn vandermonde_inverse(homs: &[ModHom], p: u64) -> Matrix<u64> {
    let n = homs.len();
    let mut aug: Matrix<u64> = homs
        .iter()
        .enumerate()
        .map(|(s, h)| {
            let mut row = h.monomials().to_vec();
            row.extend((0..n).map(|j| u64::from(j == s)));
            row
        })
        .collect();
    let piv = rref_mod(&mut aug, p);
    assert_eq!(piv.len(), n, "distinct homomorphisms give an invertible system");
    // aug = [I | V^{-1}] with V[s][b]; we need (V^{-1})[b][s]
    aug.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rational::{int, rat};
    use crate::exactfield::tower::{adjoin_rational_sqrt, adjoin_root, TowerDescriptor};

    #[test]
    fn primality() {
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1_000_000_007 * 3));
        let p = primes_3_mod_4().next().unwrap();
        assert_eq!(p % 4, 3);
        assert!(p < 1 << 62);
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64);
        let x = rat(-355, 113);
        let p = 1_000_000_007u64;
        let r = mul_mod(sub_mod(0, 355, p), inv_mod(113, p), p);
        let q = 998_244_353u64;
        let s = mul_mod(sub_mod(0, 355, q), inv_mod(113, q), q);
        let c = crt_step(&BigInt::from(r), &BigInt::from(p), s, q);
        assert_eq!(rational_reconstruct(&c, &m), Some(x));
    }

    #[test]
    fn homomorphisms_respect_arithmetic() {
        let (t1, s) = adjoin_rational_sqrt(&int(201)).unwrap();
        let t2 = adjoin_root(&t1, &s.scale(&rat(1, 5)), &TowerElement::from_int(&t1, -1)).unwrap();
        let w = TowerElement::generator(&t2, 1);
        let x = &(&w * &s.lift(&t2).unwrap()) + &TowerElement::from_rational(&t2, rat(3, 7));
        let y = &x * &x.inv().unwrap().square();
        let homs = good_homs(&t2, 0);
        assert_eq!(homs.len(), 4);
        for h in &homs {
            let (ex, ey) = (h.eval(&x).unwrap(), h.eval(&y).unwrap());
            assert_eq!(mul_mod(ey, ex, h.p), 1);
        }
    }

    #[test]
    fn rank_with_lifted_kernel() {
        let (t, s) = adjoin_rational_sqrt(&int(-11)).unwrap();
        let e = |a: i64, b: i64| &TowerElement::from_int(&t, a) + &s.scale(&int(b));
        // third row = s * first row + second row
        let r1 = vec![e(1, 2), e(3, 0), e(0, 1)];
        let r2 = vec![e(2, 0), e(1, 1), e(5, 0)];
        let r3: Vec<TowerElement> = r1.iter().zip(&r2).map(|(a, b)| &(a * &s) + b).collect();
        let m = vec![r1, r2, r3];
        let c = certified_rank(&m, &[], 40).unwrap();
        assert_eq!(c.rank, 2);
        assert!(c.lifted);
        let q = TowerDescriptor::rational();
        let id = vec![vec![TowerElement::one(&q), TowerElement::zero(&q)], vec![TowerElement::zero(&q), TowerElement::one(&q)]];
        assert_eq!(certified_rank(&id, &[], 4).unwrap().rank, 2);
    }
}
