use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tree_groups::GroupPreset;

/// Dense square matrix of exact rationals attached to a tree level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelMatrix {
    dim: usize,
    level: usize,
    group: Option<GroupPreset>,
    entries: Vec<BigRational>,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LevelMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            level: 0,
            group: None,
            entries: vec![BigRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("matrix rows must form a square".into()));
        }
        Ok(Self {
            dim,
            level: 0,
            group: None,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| integer(v)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self {
            dim,
            level: 0,
            group: None,
            entries,
        }
    }

    pub fn with_context(mut self, group: GroupPreset, level: usize) -> Self {
        self.group = Some(group);
        self.level = level;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn group(&self) -> Option<GroupPreset> {
        self.group
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &BigRational) {
        self.entries[i * self.dim + j] += v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut out = self.clone();
        out.entries.iter_mut().for_each(|e| *e *= s);
        out
    }

    /// `self + s·I`
    pub fn shift(&self, s: &BigRational) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i] += s;
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[j * self.dim + i] = self.get(i, j).clone();
            }
        }
        out
    }

    /// First off-diagonal pair `(i, j)` with `m[i][j] != m[j][i]`, if any.
    pub fn asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.dim)
            .flat_map(|i| (i + 1..self.dim).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.asymmetry().is_none()
    }

    pub fn row_sums(&self) -> Vec<BigRational> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    pub fn column_sums(&self) -> Vec<BigRational> {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j)).sum())
            .collect()
    }

    /// Every entry 0 or 1 with one 1 per row and column.
    pub fn is_permutation(&self) -> bool {
        let one = BigRational::one();
        self.entries.iter().all(|e| e.is_zero() || *e == one)
            && self.row_sums().iter().all(|s| *s == one)
            && self.column_sums().iter().all(|s| *s == one)
    }

    /// Exact product. Cubic with big rationals, meant for small levels.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        out.level = self.level;
        out.group = self.group;
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }

    /// Row-major CSV with entries written as `p/q` (or `p` for integers).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            for (j, e) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{e}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(s: &str) -> Result<Self> {
        let rows = s
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                l.split(',')
                    .map(|f| parse_rational(f.trim()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("`{s}` is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl Add for &LevelMatrix {
    type Output = LevelMatrix;

    fn add(self, rhs: &LevelMatrix) -> LevelMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        out.entries
            .iter_mut()
            .zip(&rhs.entries)
            .for_each(|(a, b)| *a += b);
        out
    }
}

impl Sub for &LevelMatrix {
    type Output = LevelMatrix;

    fn sub(self, rhs: &LevelMatrix) -> LevelMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        out.entries
            .iter_mut()
            .zip(&rhs.entries)
            .for_each(|(a, b)| *a -= b);
        out
    }
}

impl Mul<&BigRational> for &LevelMatrix {
    type Output = LevelMatrix;

    fn mul(self, rhs: &BigRational) -> LevelMatrix {
        self.scale(rhs)
    }
}
