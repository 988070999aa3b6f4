//! Pointwise exterior algebra: values of k-forms stored against increasing
//! multi-indices, wedge products and pullbacks along linear maps.

use crate::error::{Error, Result};

pub fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc = 1usize;
    for i in 0..k {
        acc = acc * (m - i) / (i + 1);
    }
    acc
}

/// All increasing multi-indices of length `k` drawn from 0..m, in
/// lexicographic order. This fixes the coefficient layout of [`KFormValue`]
/// and of grid fields.
pub fn multi_indices(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(m, k));
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(idx.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + m - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Position of a sorted multi-index in the lexicographic enumeration
/// (combinatorial number system).
pub fn rank_of(m: usize, idx: &[usize]) -> usize {
    let k = idx.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (pos, &i) in idx.iter().enumerate() {
        for j in prev..i {
            rank += binomial(m - j - 1, k - pos - 1);
        }
        prev = i + 1;
    }
    rank
}

/// Sign of the shuffle merging disjoint sorted `a` and `b` into a sorted
/// multi-index: (-1)^{#{(x, y) in a x b : y < x}}.
pub fn merge_sign(a: &[usize], b: &[usize]) -> f64 {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if y < x {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Value of a k-form at a point of R^m: one coefficient per increasing
/// multi-index, laid out by [`multi_indices`].
#[derive(Debug, Clone, PartialEq)]
pub struct KFormValue {
    pub m: usize,
    pub k: usize,
    pub coeffs: Vec<f64>,
}

impl KFormValue {
    pub fn zero(m: usize, k: usize) -> Self {
        Self {
            m,
            k,
            coeffs: vec![0.0; binomial(m, k)],
        }
    }

    pub fn new(m: usize, k: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != binomial(m, k) {
            return Err(Error::DimensionMismatch {
                context: "k-form coefficient count",
                expected: binomial(m, k),
                got: coeffs.len(),
            });
        }
        Ok(Self { m, k, coeffs })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            m: self.m,
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.m, self.k), (other.m, other.k));
        Self {
            m: self.m,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    /// Wedge product, lands in degree `self.k + other.k`.
    pub fn wedge(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        let m = self.m;
        let k = self.k + other.k;
        let mut out = KFormValue::zero(m, k);
        if k > m {
            return out;
        }
        let ia = multi_indices(m, self.k);
        let ib = multi_indices(m, other.k);
        for (pa, a) in ia.iter().enumerate() {
            if self.coeffs[pa] == 0.0 {
                continue;
            }
            for (pb, b) in ib.iter().enumerate() {
                if other.coeffs[pb] == 0.0 {
                    continue;
                }
                if a.iter().any(|x| b.contains(x)) {
                    continue;
                }
                let mut merged: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                merged.sort_unstable();
                let sign = merge_sign(a, b);
                out.coeffs[rank_of(m, &merged)] += sign * self.coeffs[pa] * other.coeffs[pb];
            }
        }
        out
    }
}

/// Determinant of the k x k submatrix of a row-major (rows x cols) matrix,
/// taking rows `ri` and columns `ci`.
fn minor_det(data: &[f64], cols: usize, ri: &[usize], ci: &[usize]) -> f64 {
    let k = ri.len();
    let at = |i: usize, j: usize| data[ri[i] * cols + ci[j]];
    match k {
        0 => 1.0,
        1 => at(0, 0),
        2 => at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0),
        3 => {
            at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1))
                - at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0))
                + at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0))
        }
        _ => {
            // Laplace expansion along the first row; k stays tiny here.
            let mut acc = 0.0;
            let sub_r: Vec<usize> = ri[1..].to_vec();
            for (j, &c) in ci.iter().enumerate() {
                let sub_c: Vec<usize> = ci
                    .iter()
                    .enumerate()
                    .filter(|(jj, _)| *jj != j)
                    .map(|(_, &cc)| cc)
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * data[ri[0] * cols + c] * minor_det(data, cols, &sub_r, &sub_c);
            }
            acc
        }
    }
}

/// Pullback of a k-form value along a linear map given as a row-major
/// (l x m) matrix: (A* w)_I = sum_J w_J det A[J, I].
pub fn pullback(jacobian: &[f64], l: usize, m: usize, omega: &KFormValue) -> Result<KFormValue> {
    if omega.m != l {
        return Err(Error::DimensionMismatch {
            context: "pullback: form lives on the target space",
            expected: l,
            got: omega.m,
        });
    }
    if jacobian.len() != l * m {
        return Err(Error::DimensionMismatch {
            context: "pullback: jacobian entries",
            expected: l * m,
            got: jacobian.len(),
        });
    }
    let k = omega.k;
    if k > m.min(l) {
        return Err(Error::DimensionMismatch {
            context: "pullback: form degree exceeds min(source, target) dimension",
            expected: m.min(l),
            got: k,
        });
    }
    let mut out = KFormValue::zero(m, k);
    let src_idx = multi_indices(m, k);
    let tgt_idx = multi_indices(l, k);
    for (pi, i_cols) in src_idx.iter().enumerate() {
        let mut acc = 0.0;
        for (pj, j_rows) in tgt_idx.iter().enumerate() {
            let w = omega.coeffs[pj];
            if w != 0.0 {
                acc += w * minor_det(jacobian, m, j_rows, i_cols);
            }
        }
        out.coeffs[pi] = acc;
    }
    Ok(out)
}
