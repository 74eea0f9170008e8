//! Integer homology of a truncated simplicial set via normalized chains:
//! the basis in degree `n` is the nondegenerate `n`-simplices, the boundary
//! is the alternating face sum with degenerate faces dropped, and the
//! groups come out of a Smith normal form over arbitrary-precision
//! integers.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::simplicial::SimplicialSet;
use crate::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn add_assign(&mut self, r: usize, c: usize, v: &BigInt) {
        self.data[r * self.cols + c] += v;
    }

    pub fn multiply(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let prod = a * b;
                        out.add_assign(r, c, &prod);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

/// The normalized chain complex up to degree `n_max`: per-degree bases of
/// nondegenerate simplices and boundary matrices `∂_n: C_n → C_{n-1}`
/// (columns indexed by the degree-`n` basis).
pub struct ChainComplex {
    pub basis_sizes: Vec<usize>,
    /// `boundaries[n]` is `∂_n`, present for `1 ≤ n ≤ n_max`.
    pub boundaries: Vec<IntMatrix>,
}

/// A simplex is degenerate iff it is `s_i` of some `(n-1)`-simplex.
fn degenerate_set<X: SimplicialSet>(x: &X, n: usize) -> HashSet<X::Simplex> {
    let mut out = HashSet::new();
    if n == 0 {
        return out;
    }
    for y in x.simplices(n - 1) {
        for i in 0..n {
            out.insert(x.degeneracy(i, n - 1, &y));
        }
    }
    out
}

pub fn normalized_chains<X: SimplicialSet>(x: &X, n_max: usize) -> Result<ChainComplex> {
    if n_max > x.cutoff() {
        return Err(Error::CutoffExceeded {
            required: n_max,
            available: x.cutoff(),
        });
    }
    let mut bases: Vec<Vec<X::Simplex>> = Vec::with_capacity(n_max + 1);
    let mut index: Vec<HashMap<X::Simplex, usize>> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let degen = degenerate_set(x, n);
        let basis: Vec<X::Simplex> = x
            .simplices(n)
            .into_iter()
            .filter(|s| !degen.contains(s))
            .collect();
        let idx = basis
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        bases.push(basis);
        index.push(idx);
    }
    let mut boundaries = vec![IntMatrix::zero(0, 0)];
    for n in 1..=n_max {
        let mut m = IntMatrix::zero(bases[n - 1].len(), bases[n].len());
        for (c, s) in bases[n].iter().enumerate() {
            for i in 0..=n {
                let f = x.face(i, n, s);
                // degenerate faces vanish in the normalized complex
                if let Some(&r) = index[n - 1].get(&f) {
                    let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                    m.add_assign(r, c, &sign);
                }
            }
        }
        boundaries.push(m);
    }
    // ∂∂ = 0 is a hard structural invariant, not a reportable check
    for n in 2..=n_max {
        assert!(
            boundaries[n - 1].multiply(&boundaries[n]).is_zero(),
            "∂∂ ≠ 0 in degree {n}"
        );
    }
    Ok(ChainComplex {
        basis_sizes: bases.iter().map(Vec::len).collect(),
        boundaries,
    })
}

/// Diagonal of the Smith normal form: nonzero invariant factors
/// `d_1 | d_2 | …`, all positive.
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let mut out = Vec::new();
    let mut top = 0usize;
    while top < a.rows && top < a.cols {
        // minimal-absolute-value pivot in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for r in top..a.rows {
            for c in top..a.cols {
                if !a.get(r, c).is_zero()
                    && pivot.map_or(true, |(pr, pc)| a.get(r, c).abs() < a.get(pr, pc).abs())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        a.swap_rows(top, pr);
        a.swap_cols(top, pc);
        loop {
            let mut dirty = false;
            for r in top + 1..a.rows {
                if a.get(r, top).is_zero() {
                    continue;
                }
                let q = div_nearest(a.get(r, top), a.get(top, top));
                if !q.is_zero() {
                    a.row_sub_mul(r, top, &q);
                }
                if !a.get(r, top).is_zero() {
                    // remainder became the smaller pivot
                    a.swap_rows(top, r);
                    dirty = true;
                }
            }
            for c in top + 1..a.cols {
                if a.get(top, c).is_zero() {
                    continue;
                }
                let q = div_nearest(a.get(top, c), a.get(top, top));
                if !q.is_zero() {
                    a.col_sub_mul(c, top, &q);
                }
                if !a.get(top, c).is_zero() {
                    a.swap_cols(top, c);
                    dirty = true;
                }
            }
            if !dirty
                && (top + 1..a.rows).all(|r| a.get(r, top).is_zero())
                && (top + 1..a.cols).all(|c| a.get(top, c).is_zero())
            {
                break;
            }
        }
        // enforce divisibility: fold any non-multiple entry into the pivot
        let mut fixed = false;
        'fix: for r in top + 1..a.rows {
            for c in top + 1..a.cols {
                if !(a.get(r, c) % a.get(top, top)).is_zero() {
                    a.row_add(top, r);
                    fixed = true;
                    break 'fix;
                }
            }
        }
        if fixed {
            continue; // re-clear the pivot row/column
        }
        out.push(a.get(top, top).abs());
        top += 1;
    }
    out
}

fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    // round-to-nearest quotient keeps remainders at most |b|/2
    let two = BigInt::from(2);
    let (q, r) = (a / b, a % b);
    if &r.abs() * &two > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

impl IntMatrix {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row_r -= q * row_src
    fn row_sub_mul(&mut self, r: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let v = q * self.get(src, c);
            self.data[r * self.cols + c] -= v;
        }
    }

    /// col_c -= q * col_src
    fn col_sub_mul(&mut self, c: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let v = q * self.get(r, src);
            self.data[r * self.cols + c] -= v;
        }
    }

    /// row_r += row_src
    fn row_add(&mut self, r: usize, src: usize) {
        for c in 0..self.cols {
            let v = self.get(src, c).clone();
            self.data[r * self.cols + c] += v;
        }
    }

    /// Rank over ℚ by fraction-free (Bareiss) elimination; independent
    /// oracle for the number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut rank = 0usize;
        for _ in 0..a.rows.min(a.cols) {
            let mut pivot = None;
            for r in rank..a.rows {
                for c in rank..a.cols {
                    if !a.get(r, c).is_zero() {
                        pivot = Some((r, c));
                        break;
                    }
                }
                if pivot.is_some() {
                    break;
                }
            }
            let Some((pr, pc)) = pivot else { break };
            a.swap_rows(rank, pr);
            a.swap_cols(rank, pc);
            for r in rank + 1..a.rows {
                for c in rank + 1..a.cols {
                    let v = (a.get(rank, rank) * a.get(r, c) - a.get(r, rank) * a.get(rank, c))
                        / &prev;
                    a.set(r, c, v);
                }
                a.set(r, rank, BigInt::zero());
            }
            prev = a.get(rank, rank).clone();
            rank += 1;
        }
        rank
    }
}

/// `H_n ≅ ℤ^betti ⊕ ⨁ ℤ/d` with the torsion coefficients `d > 1` in
/// divisibility order.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn render(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        if self.betti == 1 {
            parts.push("Z".to_string());
        } else if self.betti > 1 {
            parts.push(format!("Z^{}", self.betti));
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

/// Homology in degrees `0..=n_max - 1`; degree `n` needs `∂_{n+1}`, so the
/// complex must extend one degree above the last group reported.
pub fn homology<X: SimplicialSet>(x: &X, n_max: usize) -> Result<Vec<HomologyGroup>> {
    let chains = normalized_chains(x, n_max)?;
    let mut out = Vec::with_capacity(n_max);
    for n in 0..n_max {
        let rank_n = chains.basis_sizes[n];
        let inv_in = smith_invariants(&chains.boundaries[n + 1]);
        let rank_out = if n == 0 {
            0
        } else {
            chains.boundaries[n].rank()
        };
        let betti = rank_n - rank_out - inv_in.len();
        let torsion = inv_in
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        out.push(HomologyGroup { betti, torsion });
    }
    Ok(out)
}
