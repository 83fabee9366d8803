use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::matrix::LevelMatrix;

/// Below this size the fraction-free elimination is used directly.
const BAREISS_MAX_DIM: usize = 40;

/// Exact determinant of a rational matrix.
///
/// Rows are scaled to integers first. Small matrices go through Bareiss
/// elimination; larger ones are reduced modulo enough word-sized primes to
/// exceed twice the Hadamard bound and recombined by CRT, which gives the
/// same exact value.
pub fn exact_determinant(m: &LevelMatrix) -> BigRational {
    let (rows, scale) = integer_rows(m);
    let det = if m.dim() <= BAREISS_MAX_DIM {
        bareiss(rows)
    } else {
        match to_i64(&rows) {
            Some(small) => modular_determinant(&small),
            None => bareiss(rows),
        }
    };
    BigRational::new(det, scale)
}

/// Fraction-free Gaussian elimination over the integers; kept public as the
/// reference path.
pub fn bareiss_determinant(m: &LevelMatrix) -> BigRational {
    let (rows, scale) = integer_rows(m);
    BigRational::new(bareiss(rows), scale)
}

/// Multiplies every row by the lcm of its denominators. Returns the integer
/// rows and the product of the multipliers.
fn integer_rows(m: &LevelMatrix) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let rows = (0..m.dim())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
            let out = row.iter().map(|e| e.numer() * (&l / e.denom())).collect();
            scale *= l;
            out
        })
        .collect();
    (rows, scale)
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn to_i64(rows: &[Vec<BigInt>]) -> Option<Vec<Vec<i64>>> {
    rows.iter()
        .map(|r| r.iter().map(|e| e.to_i64()).collect())
        .collect()
}

fn modular_determinant(a: &[Vec<i64>]) -> BigInt {
    // log2 of the Hadamard bound, with slack for float rounding and the sign
    let bound_bits: f64 = a
        .iter()
        .map(|r| {
            let s: f64 = r.iter().map(|&x| (x as f64) * (x as f64)).sum();
            if s == 0.0 {
                f64::NEG_INFINITY
            } else {
                0.5 * s.log2()
            }
        })
        .sum();
    if bound_bits == f64::NEG_INFINITY {
        return BigInt::zero();
    }
    let needed = bound_bits.max(0.0) + 4.0;

    let mut residue = BigInt::zero();
    let mut modulus = BigInt::one();
    let mut bits = 0.0;
    for p in primes_below(1 << 31) {
        let r = det_mod_p(a, p);
        crt_step(&mut residue, &mut modulus, r, p);
        bits += (p as f64).log2();
        if bits > needed {
            break;
        }
    }
    // symmetric representative
    if &residue * 2 > modulus {
        residue - modulus
    } else {
        residue
    }
}

fn crt_step(x: &mut BigInt, m: &mut BigInt, r: u64, p: u64) {
    let xp = x.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let mp = m.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    let t = mul_mod((r + p - xp) % p, pow_mod(mp, p - 2, p), p);
    *x += &*m * t;
    *m *= p;
}

fn det_mod_p(a: &[Vec<i64>], p: u64) -> u64 {
    let n = a.len();
    let pi = p as i64;
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(pi) as u64).collect())
        .collect();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| m[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            m.swap(piv, k);
            det = (p - det) % p;
        }
        let pk = m[k][k];
        det = mul_mod(det, pk, p);
        let inv = pow_mod(pk, p - 2, p);
        let (top, rest) = m.split_at_mut(k + 1);
        let row_k = &top[k];
        for row in rest.iter_mut() {
            let f = mul_mod(row[k], inv, p);
            if f == 0 {
                continue;
            }
            for j in k + 1..n {
                // row[j] - f * row_k[j] mod p
                row[j] = (row[j] + p - mul_mod(f, row_k[j], p)) % p;
            }
            row[k] = 0;
        }
    }
    det
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Primes below `limit`, descending. `limit` must be at most 2^32 so that
/// products of residues fit in a u64.
fn primes_below(limit: u64) -> impl Iterator<Item = u64> {
    (2..limit).rev().filter(|&n| {
        n % 2 == 1
            && (3..)
                .step_by(2)
                .take_while(|d| d * d <= n)
                .all(|d| n % d != 0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::level_ops::matrix::{integer, rational};

    #[test]
    fn small_cases() {
        assert_eq!(exact_determinant(&LevelMatrix::identity(4)), integer(1));
        assert_eq!(exact_determinant(&LevelMatrix::zeros(0)), integer(1));
        let m = LevelMatrix::from_integer_rows(&[&[0, 2], &[3, 1]]).unwrap();
        assert_eq!(exact_determinant(&m), integer(-6));
        let r = LevelMatrix::from_rows(vec![
            vec![rational(1, 2), rational(1, 3)],
            vec![rational(1, 5), rational(-2, 7)],
        ])
        .unwrap();
        assert_eq!(exact_determinant(&r), rational(-1, 7) - rational(1, 15));
    }

    #[test]
    fn modular_path_agrees_with_bareiss() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for dim in [41, 60] {
            let m = LevelMatrix::from_fn(dim, |_, _| {
                rational(rng.gen_range(-50..50), rng.gen_range(1..6))
            });
            assert_eq!(exact_determinant(&m), bareiss_determinant(&m));
        }
        // singular: repeated row
        let mut m = LevelMatrix::from_fn(45, |i, j| integer(((i * 7 + j * 3) % 11) as i64 - 5));
        for j in 0..45 {
            let v = m.get(0, j).clone();
            m.set(1, j, v);
        }
        assert_eq!(exact_determinant(&m), integer(0));
    }
}
