//! Exact linear algebra over the rationals, plus the integer-vector helpers
//! (primitive scaling, fraction-free rank) used by the cone code.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

/// Dense matrix of exact rationals. Row-major; every row has `cols` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: Vec<Vec<Rational>>,
    pub cols: usize,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Matrix { rows, cols }
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![Rational::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        Matrix { rows, cols: n }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Reduced row echelon form. Returns the nonzero rows together with their
    /// pivot columns (strictly increasing).
    pub fn rref(&self) -> (Vec<Vec<Rational>>, Vec<usize>) {
        let mut rows: Vec<Vec<Rational>> = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x /= &inv;
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..self.cols {
                        let sub = &f * &rows[r][j];
                        rows[i][j] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        (rows, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : Ax = 0}`, one vector per free column,
    /// in increasing free-column order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (rows, pivots) = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            basis.push(v);
        }
        basis
    }
}

pub fn is_zero_vec_int(v: &[BigInt]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn is_zero_vec_rat(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Divides an integer vector by the gcd of its entries (keeping the sign).
/// The zero vector is returned unchanged.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g == BigInt::from(1) {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Clears denominators and reduces to a primitive integer vector.
pub fn to_primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::from(1);
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    primitive(&ints)
}

pub fn to_rational_vec(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn dot_rat(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += Rational::from_integer(x.clone()) * y;
        }
    }
    acc
}

/// Rank of a set of integer vectors, by fraction-free elimination with
/// per-row primitive reduction to keep entries small.
pub fn rank_int(rows_in: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = rows_in
        .iter()
        .map(|r| primitive(r))
        .filter(|r| !is_zero_vec_int(r))
        .collect();
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    let mut top = 0;
    for col in 0..cols {
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        for i in top + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let a = rows[top][col].clone();
            let b = rows[i][col].clone();
            for j in col..cols {
                let t = &a * &rows[i][j] - &b * &rows[top][j];
                rows[i][j] = t;
            }
            rows[i] = primitive(&rows[i]);
        }
        top += 1;
        rank += 1;
        if top == rows.len() {
            break;
        }
    }
    rank
}

/// Reduction of vectors modulo the span of a fixed generating set: each input
/// is mapped to the unique representative whose pivot-column entries (in the
/// generators' reduced echelon basis) vanish. Used to canonicalize fan rays
/// modulo lineality directions.
#[derive(Clone, Debug)]
pub struct SpanReducer {
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    dim: usize,
}

impl SpanReducer {
    pub fn new(generators: &[Vec<BigInt>], dim: usize) -> Self {
        let rows: Vec<Vec<Rational>> = generators.iter().map(|g| to_rational_vec(g)).collect();
        let (basis, pivots) = Matrix::new(rows, dim).rref();
        SpanReducer { basis, pivots, dim }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn reduce_rat(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.dim);
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for j in 0..self.dim {
                let sub = &f * &row[j];
                out[j] -= sub;
            }
        }
        out
    }

    /// Reduces modulo the span and rescales to a primitive integer vector.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        to_primitive_integer(&self.reduce_rat(&to_rational_vec(v)))
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        is_zero_vec_int(&self.reduce(v))
    }
}

/// Affine hull of a nonempty point set: a basepoint, a basis of the direction
/// space, and the equality constraints `⟨a, x⟩ = b` cutting the hull out of
/// the ambient space (normals primitive integer, deterministic order).
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub basepoint: Vec<Rational>,
    pub directions: Vec<Vec<Rational>>,
    pub equalities: Vec<(Vec<BigInt>, Rational)>,
}

pub fn affine_hull(points: &[Vec<Rational>]) -> AffineHull {
    assert!(!points.is_empty(), "affine hull of an empty set");
    let dim = points[0].len();
    let base = points[0].clone();
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let m = Matrix::new(diffs, dim);
    let (directions, _) = m.rref();
    let equalities = m
        .nullspace()
        .into_iter()
        .map(|n| {
            let a = to_primitive_integer(&n);
            let b = dot_int_rat(&a, &base);
            (a, b)
        })
        .collect();
    AffineHull {
        basepoint: base,
        directions,
        equalities,
    }
}
