//! Hypercube-specific helpers: the fundamental chamber of the signed
//! permutation group, the "downarrow" (weakly decreasing) presentation of
//! facet rows, and the dimension-lifting transformation on such rows.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cone::Cone;
use crate::config::{hypercube, test_cone};
use crate::engine::InequalityRow;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// The chamber `0 <= x_1 <= x_2 <= ... <= x_n` as an H-cone.
pub fn fundamental_chamber(n: usize) -> Cone {
    let t = test_cone(&hypercube(n));
    Cone::from_h(n, Vec::new(), t.rows)
}

/// The chamber's extreme rays: the staircase vectors `(0,...,0,1,...,1)`
/// with k trailing ones, k = 1..=n, in lexicographic order.
pub fn chamber_rays(n: usize) -> Vec<Vec<BigInt>> {
    (1..=n)
        .map(|k| {
            let mut v = vec![BigInt::zero(); n];
            for x in v.iter_mut().skip(n - k) {
                *x = BigInt::one();
            }
            v
        })
        .collect()
}

/// A facet row written against coordinates sorted in decreasing order:
/// weakly decreasing coefficients, the support values `s`, an additive
/// constant, and the lineup length the row was derived for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownarrowRow {
    pub coeffs: Vec<BigInt>,
    pub s: Vec<Rational>,
    pub constant: Rational,
    pub r: usize,
}

/// Rewrites a chamber-form row (weakly increasing normal) into its
/// downarrow presentation by reversing the coefficients.
pub fn to_downarrow(row: &InequalityRow, r: usize) -> Result<DownarrowRow> {
    if row.normal.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid(
            "row normal is not weakly increasing; not a chamber-form row",
        ));
    }
    let mut coeffs = row.normal.clone();
    coeffs.reverse();
    Ok(DownarrowRow {
        coeffs,
        s: row.s.clone(),
        constant: row.constant.clone(),
        r,
    })
}

/// Converts every inequality of an H-representation to downarrow form and
/// sorts the rows lexicographically by coefficient vector.
pub fn downarrow_rows(h: &crate::engine::HRep) -> Result<Vec<DownarrowRow>> {
    if !h.equalities.is_empty() {
        return Err(Error::invalid(
            "downarrow form requires a full-dimensional polytope (no equalities)",
        ));
    }
    let mut rows = h
        .inequalities
        .iter()
        .map(|row| to_downarrow(row, h.r))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
    Ok(rows)
}

/// Lifts a downarrow row from dimension n to dimension `m > n` by
/// prepending copies of the leading coefficient and crediting the constant,
/// except for the plain largest-coordinate row `(1,0,...,0)`, which keeps a
/// single leading 1. The support values require `n >= r - 1` to stay valid.
pub fn lift_inequality(row: &DownarrowRow, m: usize) -> Result<DownarrowRow> {
    let n = row.coeffs.len();
    if m <= n {
        return Err(Error::invalid(format!(
            "lift target {m} must exceed the row dimension {n}"
        )));
    }
    if n + 1 < row.r {
        return Err(Error::invalid(format!(
            "row for lineup length {} cannot be lifted from dimension {n}",
            row.r
        )));
    }
    if row.coeffs.is_empty() {
        return Err(Error::invalid("empty coefficient row"));
    }
    let max_coordinate_row =
        row.coeffs[0] == BigInt::one() && row.coeffs[1..].iter().all(|x| x.is_zero());
    let (coeffs, constant) = if max_coordinate_row {
        let mut c = vec![BigInt::zero(); m];
        c[0] = BigInt::one();
        (c, row.constant.clone())
    } else {
        let lead = row.coeffs[0].clone();
        let mut c = vec![lead.clone(); m - n];
        c.extend(row.coeffs.iter().cloned());
        let bump = Rational::from_integer(BigInt::from(m - n) * lead);
        (c, &row.constant + bump)
    };
    Ok(DownarrowRow {
        coeffs,
        s: row.s.clone(),
        constant,
        r: row.r,
    })
}
