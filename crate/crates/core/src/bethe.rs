//! String centers at `q = 0`, eigenvalue phases and the `N'` period.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::content::{cartan, BlockId, SolitonContent};
use crate::error::{Error, Result};
use crate::linalg::{det_bareiss, lcm_rationals, rat, solve_exact, Matrix, Rational};

/// `A_{x,y} = delta_xy (p + m) + C_ab min(l, l') - delta_ab delta_ij` over rows `H`.
pub fn a_matrix(mu: &SolitonContent) -> Matrix {
    let rows = mu.row_ids();
    let size = rows.len();
    let mut a = Matrix::zeros(size, size);
    for (x, &(id_x, _)) in rows.iter().enumerate() {
        let bx = mu.block(id_x);
        for (y, &(id_y, _)) in rows.iter().enumerate() {
            let by = mu.block(id_y);
            let mut v = cartan(id_x.color, id_y.color) * bx.length.min(by.length) as i64;
            if x == y {
                v += mu.vacancy(id_x) + bx.multiplicity as i64;
            }
            if id_x == id_y {
                v -= 1;
            }
            a.set(x, y, BigInt::from(v));
        }
    }
    a
}

/// Solution of the string center equation, raw and reduced mod 1 per block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BetheRoot {
    pub raw: Vec<Rational>,
    /// Per block (color-major), centers in `[0, 1)` sorted.
    pub centers: Vec<(BlockId, Vec<Rational>)>,
}

impl BetheRoot {
    /// The per-block multisets of centers mod 1, the comparison key for angle variables.
    pub fn key(&self) -> &[(BlockId, Vec<Rational>)] {
        &self.centers
    }
}

pub fn fractional(x: &Rational) -> Rational {
    x - x.floor()
}

/// Solves `A u = (p + m + 1)/2 + r + alpha - 1` for a rigging window over `H`.
pub fn string_centers(mu: &SolitonContent, riggings: &[i64]) -> Result<BetheRoot> {
    let rows = mu.row_ids();
    assert_eq!(rows.len(), riggings.len());
    let rhs: Vec<Rational> = rows
        .iter()
        .zip(riggings)
        .map(|(&(id, alpha), &r)| {
            let b = mu.block(id);
            rat(mu.vacancy(id) + b.multiplicity as i64 + 1, 2) + rat(r + alpha as i64 - 1, 1)
        })
        .collect();
    let raw = solve_exact(&a_matrix(mu), &rhs)?;
    let mut centers = Vec::new();
    let mut offset = 0;
    for id in mu.block_ids() {
        let m = mu.block(id).multiplicity;
        let mut block: Vec<Rational> = raw[offset..offset + m].iter().map(fractional).collect();
        block.sort();
        if block.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::CollisionDetected { color: id.color, block: id.block });
        }
        centers.push((id, block));
        offset += m;
    }
    Ok(BetheRoot { raw, centers })
}

/// `h^(r)_l . (u + 1/2) mod 1`.
pub fn eigenvalue_phase(mu: &SolitonContent, r: usize, l: usize, root: &BetheRoot) -> Rational {
    let half = rat(1, 2);
    let total = mu
        .row_ids()
        .iter()
        .zip(&root.raw)
        .filter(|((id, _), _)| id.color == r)
        .fold(Rational::zero(), |acc, ((id, _), u)| {
            acc + (u + &half) * BigInt::from(l.min(mu.block(*id).length))
        });
    fractional(&total)
}

/// `LCM(det M / det M[col <- v])` over columns with nonzero replaced determinant.
fn cramer_lcm(m: &Matrix, v: &[BigInt]) -> Option<BigInt> {
    let det = det_bareiss(m);
    let ratios: Vec<Rational> = (0..m.cols())
        .filter_map(|j| {
            let dj = det_bareiss(&m.with_column(j, v));
            (!dj.is_zero()).then(|| Rational::new(det.clone(), dj))
        })
        .collect();
    lcm_rationals(&ratios)
}

/// `N'` computed over the columns of `A` (rows `H`) and of `F` (blocks).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NPrime {
    pub via_a: Option<BigInt>,
    pub via_f: Option<BigInt>,
}

pub fn n_prime(mu: &SolitonContent, r: usize, l: usize) -> NPrime {
    let h_rows: Vec<BigInt> = mu
        .row_ids()
        .iter()
        .map(|&(id, _)| if id.color == r { BigInt::from(l.min(mu.block(id).length)) } else { BigInt::zero() })
        .collect();
    NPrime { via_a: cramer_lcm(&a_matrix(mu), &h_rows), via_f: cramer_lcm(&mu.f_matrix(), &mu.velocity(r, l)) }
}

/// Whether `N' * phase` lies in `Z / 2`.
pub fn phase_condition_holds(n_prime: &BigInt, phase: &Rational) -> bool {
    let scaled = phase * n_prime * BigInt::from(2);
    scaled.is_integer()
}
