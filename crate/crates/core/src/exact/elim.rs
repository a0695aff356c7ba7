//! Fraction-free Gauss–Jordan elimination.
//!
//! Rows are cleared to primitive integer vectors, reduced with integer row
//! operations only (each result is divided by its content to keep entries
//! small), and normalized to the rational reduced row-echelon form at the
//! very end. There is no pivot tolerance anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Scalar;

/// Reduced row-echelon form of a rational matrix.
#[derive(Debug, Clone)]
pub struct Echelon {
    /// Nonzero rows of the RREF; row `r` has a leading one in `pivots[r]`.
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
    pub cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{v : A v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[free] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    v[p] = -&row[free];
                }
                v
            })
            .collect()
    }
}

fn to_primitive_integers(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut ints);
    ints
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Row-reduce `rows` (each of length `cols`) to canonical RREF.
pub fn row_reduce(rows: &[Vec<Scalar>], cols: usize) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix");
            to_primitive_integers(r)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();

    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        // Smallest nonzero magnitude keeps the multipliers small.
        let Some(pr) = (rank..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        else {
            continue;
        };
        m.swap(rank, pr);
        let pivot_row = m[rank].clone();
        let a = &pivot_row[col];
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let g = a.gcd(&row[col]);
            let fa = a / &g;
            let fb = &row[col] / &g;
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = &fa * &*x - &fb * p;
            }
            make_primitive(row);
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);

    let rows = m
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let lead = row[p].clone();
            row.into_iter()
                .map(|x| Scalar::from_bigints(x, lead.clone()))
                .collect()
        })
        .collect();
    Echelon { rows, pivots, cols }
}
