//! Exact linear solving over the parameter field.
//!
//! Systems produced by the chain construction are small but have
//! multivariate rational entries, so elimination must stay exact and keep
//! intermediate growth in check. Rows are cleared of denominators and
//! reduced by fraction-free elimination, where every division is exact by
//! construction; back-substitution then runs over reduced ratios.
//!
//! * [`AffineSolution`]: one particular solution plus a kernel basis.
//! * [`solve_affine`]: solves `M x = rhs`, `None` when inconsistent.

use crate::field::{divide_exact, poly_lcm, ParamPoly, ParamRatio};

/// The full solution set of a consistent affine system: the particular
/// solution puts every free variable at zero, and the kernel vectors each
/// put one free variable at one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<ParamRatio>,
    pub kernel: Vec<Vec<ParamRatio>>,
}

impl AffineSolution {
    /// Number of free directions left by the system.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }
}

/// Solves `M x = rhs` exactly. Every row of `rows` must have length
/// `cols`. Returns `None` when the system has no solution.
pub fn solve_affine(
    rows: &[Vec<ParamRatio>],
    rhs: &[ParamRatio],
    cols: usize,
) -> Option<AffineSolution> {
    assert_eq!(rows.len(), rhs.len(), "row/rhs count mismatch");
    // Clear denominators row by row; scaling a row does not change the
    // solution set.
    let mut m: Vec<Vec<ParamPoly>> = Vec::with_capacity(rows.len());
    for (row, b) in rows.iter().zip(rhs) {
        assert_eq!(row.len(), cols, "row length mismatch");
        let mut lcm = ParamPoly::one();
        for e in row.iter().chain(std::iter::once(b)) {
            lcm = poly_lcm(&lcm, e.den());
        }
        let mut cleared = Vec::with_capacity(cols + 1);
        for e in row.iter().chain(std::iter::once(b)) {
            let scaled = divide_exact(&lcm, e.den()).expect("lcm divisible by denominator");
            cleared.push(e.num().mul(&scaled));
        }
        m.push(cleared);
    }

    // Fraction-free forward elimination. `prev` is the previous pivot;
    // the update divides by it exactly.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut prev = ParamPoly::one();
    let mut r = 0;
    for c in 0..cols {
        let pivot_row = (r..m.len())
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| (m[i][c].num_terms(), m[i][c].degree()));
        let Some(p) = pivot_row else { continue };
        m.swap(r, p);
        for i in (r + 1)..m.len() {
            if m[i].iter().all(|e| e.is_zero()) {
                continue;
            }
            for k in (c + 1)..=cols {
                let num = m[r][c].mul(&m[i][k]).sub(&m[i][c].mul(&m[r][k]));
                m[i][k] = if num.is_zero() {
                    ParamPoly::zero()
                } else {
                    divide_exact(&num, &prev).expect("fraction-free division is exact")
                };
            }
            m[i][c] = ParamPoly::zero();
        }
        prev = m[r][c].clone();
        pivots.push((r, c));
        r += 1;
        if r == m.len() {
            break;
        }
    }

    // A zero row with nonzero right-hand side has no solution.
    for row in &m[r..] {
        if row[..cols].iter().all(|e| e.is_zero()) && !row[cols].is_zero() {
            return None;
        }
    }

    let free_cols: Vec<usize> =
        (0..cols).filter(|c| !pivots.iter().any(|&(_, pc)| pc == *c)).collect();

    let particular = back_substitute(&m, &pivots, cols, None);
    let kernel =
        free_cols.iter().map(|&f| back_substitute(&m, &pivots, cols, Some(f))).collect();
    Some(AffineSolution { particular, kernel })
}

/// Solves the triangular system bottom-up. With `free_one` absent this
/// produces the particular solution (free variables zero, right-hand side
/// active); with `free_one = Some(f)` it produces the homogeneous kernel
/// vector with variable `f` set to one.
fn back_substitute(
    m: &[Vec<ParamPoly>],
    pivots: &[(usize, usize)],
    cols: usize,
    free_one: Option<usize>,
) -> Vec<ParamRatio> {
    let mut x = vec![ParamRatio::zero(); cols];
    if let Some(f) = free_one {
        x[f] = ParamRatio::one();
    }
    for &(r, c) in pivots.iter().rev() {
        let mut acc = if free_one.is_none() {
            ParamRatio::from_poly(m[r][cols].clone())
        } else {
            ParamRatio::zero()
        };
        for k in (c + 1)..cols {
            if !m[r][k].is_zero() && !x[k].is_zero() {
                acc = &acc - &(&ParamRatio::from_poly(m[r][k].clone()) * &x[k]);
            }
        }
        x[c] = acc
            .checked_div(&ParamRatio::from_poly(m[r][c].clone()))
            .expect("pivot entry is nonzero");
    }
    x
}

/// `M x`, for checking solutions in tests.
pub fn matrix_vector(rows: &[Vec<ParamRatio>], x: &[ParamRatio]) -> Vec<ParamRatio> {
    rows.iter()
        .map(|row| {
            let mut acc = ParamRatio::zero();
            for (e, xi) in row.iter().zip(x) {
                if !e.is_zero() && !xi.is_zero() {
                    acc = &acc + &(e * xi);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::parse_ratio;

    fn r(s: &str) -> ParamRatio {
        parse_ratio(s).unwrap()
    }

    fn rows(specs: &[&[&str]]) -> Vec<Vec<ParamRatio>> {
        specs.iter().map(|row| row.iter().map(|s| r(s)).collect()).collect()
    }

    #[test]
    fn solves_an_invertible_parametric_system() {
        // x + a y = b, 2 y = 4a  =>  y = 2a, x = b - 2a^2.
        let m = rows(&[&["1", "a"], &["0", "2"]]);
        let b = vec![r("b"), r("4*a")];
        let sol = solve_affine(&m, &b, 2).unwrap();
        assert_eq!(sol.particular, vec![r("b - 2*a^2"), r("2*a")]);
        assert!(sol.kernel.is_empty());
        assert_eq!(matrix_vector(&m, &sol.particular), b);
    }

    #[test]
    fn detects_inconsistency() {
        let m = rows(&[&["1", "1"], &["2", "2"]]);
        assert!(solve_affine(&m, &[r("1"), r("3")], 2).is_none());
        // The same rows with a consistent right-hand side do solve.
        assert!(solve_affine(&m, &[r("1"), r("2")], 2).is_some());
    }

    #[test]
    fn reports_the_kernel_of_an_underdetermined_system() {
        // One equation, three unknowns with rational-function entries.
        let m = rows(&[&["a", "b/a", "1/2"]]);
        let b = vec![r("a*b")];
        let sol = solve_affine(&m, &b, 3).unwrap();
        assert_eq!(sol.kernel_dim(), 2);
        assert_eq!(matrix_vector(&m, &sol.particular), b);
        for k in &sol.kernel {
            assert_eq!(matrix_vector(&m, k), vec![r("0")]);
            assert!(k.iter().any(|e| e.is_one()));
        }
        // Free variables stay at zero in the particular solution.
        assert_eq!(sol.particular[1], r("0"));
        assert_eq!(sol.particular[2], r("0"));
    }

    #[test]
    fn handles_zero_rows_and_redundancy() {
        let m = rows(&[&["1", "a"], &["0", "0"], &["2", "2*a"]]);
        let b = vec![r("b"), r("0"), r("2*b")];
        let sol = solve_affine(&m, &b, 2).unwrap();
        assert_eq!(sol.kernel_dim(), 1);
        assert_eq!(matrix_vector(&m, &sol.particular), b);
        assert_eq!(matrix_vector(&m, &sol.kernel[0]), vec![r("0"), r("0"), r("0")]);
    }

    #[test]
    fn eliminates_with_dense_parameter_entries() {
        // 3x3 with multivariate entries; checked by substitution.
        let m = rows(&[
            &["a", "b", "omega"],
            &["b", "a + b", "0"],
            &["omega/2", "1", "a^2"],
        ]);
        let b = vec![r("1"), r("a"), r("b^2")];
        let sol = solve_affine(&m, &b, 3).unwrap();
        assert!(sol.kernel.is_empty());
        assert_eq!(matrix_vector(&m, &sol.particular), b);
    }
}
