//! The classifying space `BG` of a truncated simplicial group: simplices
//! `[g_{n-1}|…|g_0]`, the four structure-map rules, and the canonical
//! twisting function `τ_G(𝒈) = g_{n-1}⁻¹`.

use std::sync::Arc;

use crate::group::ElemId;
use crate::simplicial::{SimplicialGroupView, SimplicialSet};
use crate::{Error, Result};

/// An `n`-simplex `[g_{n-1}|…|g_0]` of `BG`. `entries[t]` is `g_{n-1-t}`,
/// an element id of level `n-1-t` of the underlying simplicial group; the
/// unique 0-simplex is the empty list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BarSimplex {
    pub entries: Vec<ElemId>,
}

impl BarSimplex {
    pub fn new(entries: Vec<ElemId>) -> Self {
        BarSimplex { entries }
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    /// `g_j` (counting `g_0` rightmost).
    pub fn entry(&self, j: usize) -> ElemId {
        self.entries[self.degree() - 1 - j]
    }
}

pub struct BarView {
    group: Arc<SimplicialGroupView>,
    cutoff: usize,
}

impl BarView {
    /// `N`-truncated `BG`; needs the group up to level `N−1`.
    pub fn new(group: Arc<SimplicialGroupView>, cutoff: usize) -> Result<Self> {
        if cutoff >= 1 && group.cutoff() < cutoff - 1 {
            return Err(Error::CutoffExceeded {
                required: cutoff - 1,
                available: group.cutoff(),
            });
        }
        Ok(BarView { group, cutoff })
    }

    pub fn group(&self) -> &Arc<SimplicialGroupView> {
        &self.group
    }

    /// `τ_G(𝒈) = g_{n-1}⁻¹ ∈ G_{n-1}`, the canonical twisting function.
    pub fn canonical_twist(&self, x: &BarSimplex) -> Result<ElemId> {
        let n = x.degree();
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, dim: 0 });
        }
        Ok(self.group.level(n - 1).inv(x.entries[0]))
    }

    /// True iff `x` is `s_0` of some lower simplex, i.e. its top entry is
    /// the identity of its level.
    pub fn is_top_degenerate(&self, x: &BarSimplex) -> bool {
        let n = x.degree();
        n >= 1 && x.entries[0] == self.group.level(n - 1).identity()
    }
}

impl SimplicialSet for BarView {
    type Simplex = BarSimplex;

    fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Lexicographic in `(g_{n-1},…,g_0)` ids.
    fn simplices(&self, n: usize) -> Vec<BarSimplex> {
        let orders: Vec<usize> = (0..n).map(|t| self.group.level(n - 1 - t).order()).collect();
        let total: usize = orders.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut cur = vec![0usize; n];
        for _ in 0..total {
            out.push(BarSimplex::new(cur.clone()));
            for t in (0..n).rev() {
                cur[t] += 1;
                if cur[t] < orders[t] {
                    break;
                }
                cur[t] = 0;
            }
        }
        out
    }

    fn face(&self, i: usize, n: usize, x: &BarSimplex) -> BarSimplex {
        assert!(i <= n && n >= 1 && x.degree() == n);
        let g = &self.group;
        if i == 0 {
            return BarSimplex::new(x.entries[1..].to_vec());
        }
        if i == n {
            // [∂_{n-1}g_{n-1}|…|∂_1 g_1]
            let entries = (0..n - 1)
                .map(|t| g.face_apply(n - 1 - t, n - 1 - t, x.entries[t]))
                .collect();
            return BarSimplex::new(entries);
        }
        // [∂_{i-1}g_{n-1}|…|∂_1 g_{n-i+1}|∂_0 g_{n-i}·g_{n-i-1}|g_{n-i-2}|…|g_0]
        let mut entries = Vec::with_capacity(n - 1);
        for t in 0..i - 1 {
            entries.push(g.face_apply(i - 1 - t, n - 1 - t, x.entries[t]));
        }
        let merged = g.level(n - 1 - i).mul(
            g.face_apply(0, n - i, x.entries[i - 1]),
            x.entries[i],
        );
        entries.push(merged);
        entries.extend_from_slice(&x.entries[i + 1..]);
        BarSimplex::new(entries)
    }

    fn degeneracy(&self, i: usize, n: usize, x: &BarSimplex) -> BarSimplex {
        assert!(i <= n && x.degree() == n);
        let g = &self.group;
        // [s_{i-1}g_{n-1}|…|s_0 g_{n-i}|1_{n-i}|g_{n-i-1}|…|g_0]
        let mut entries = Vec::with_capacity(n + 1);
        for t in 0..i {
            entries.push(g.degeneracy_apply(i - 1 - t, n - 1 - t, x.entries[t]));
        }
        entries.push(g.level(n - i).identity());
        entries.extend_from_slice(&x.entries[i..]);
        BarSimplex::new(entries)
    }

    fn label(&self, n: usize, x: &BarSimplex) -> String {
        if n == 0 {
            return "[]".to_string();
        }
        let parts: Vec<&str> = (0..n)
            .map(|t| self.group.level(n - 1 - t).label(x.entries[t]))
            .collect();
        format!("[{}]", parts.join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::simplicial::check_simplicial_identities;

    fn bar_of(g: FiniteGroup, n: usize) -> BarView {
        let view = Arc::new(SimplicialGroupView::constant(Arc::new(g), n.max(1) - 1));
        BarView::new(view, n).unwrap()
    }

    #[test]
    fn faces_of_constant_z4() {
        let b = bar_of(FiniteGroup::cyclic(4).unwrap(), 3);
        let x = BarSimplex::new(vec![1, 2]);
        assert_eq!(b.face(0, 2, &x), BarSimplex::new(vec![2]));
        assert_eq!(b.face(1, 2, &x), BarSimplex::new(vec![3]));
        assert_eq!(b.face(2, 2, &x), BarSimplex::new(vec![1]));
    }

    #[test]
    fn degeneracies_of_constant_z4() {
        let b = bar_of(FiniteGroup::cyclic(4).unwrap(), 3);
        let x = BarSimplex::new(vec![2]);
        assert_eq!(b.degeneracy(0, 1, &x), BarSimplex::new(vec![0, 2]));
        assert_eq!(b.degeneracy(1, 1, &x), BarSimplex::new(vec![2, 0]));
        assert_eq!(
            b.degeneracy(0, 0, &BarSimplex::new(vec![])),
            BarSimplex::new(vec![0])
        );
    }

    #[test]
    fn canonical_twist_values() {
        let b = bar_of(FiniteGroup::cyclic(4).unwrap(), 3);
        assert_eq!(b.canonical_twist(&BarSimplex::new(vec![1, 2])).unwrap(), 3);
        assert_eq!(b.canonical_twist(&BarSimplex::new(vec![0, 3])).unwrap(), 0);
        assert!(b.canonical_twist(&BarSimplex::new(vec![])).is_err());
        // τ(s_0 𝒈) = identity for every 𝒈
        for n in 0..2usize {
            for x in b.simplices(n) {
                let s0 = b.degeneracy(0, n, &x);
                assert_eq!(b.canonical_twist(&s0).unwrap(), 0);
            }
        }
    }

    #[test]
    fn simplex_counts() {
        let b = bar_of(FiniteGroup::cyclic(4).unwrap(), 3);
        assert_eq!(b.simplices(0).len(), 1);
        assert_eq!(b.simplices(3).len(), 64);
    }

    #[test]
    fn bar_of_s3_satisfies_identities() {
        let b = bar_of(FiniteGroup::symmetric(3).unwrap(), 4);
        let report = check_simplicial_identities(&b, 4).unwrap();
        assert!(report.passed(), "{}", report.render_text());
    }

    /// Independent oracle: the classical nerve of a discrete group, with
    /// tuples `(a_1,…,a_n)`, `∂_0` dropping the first entry, `∂_i` merging
    /// `a_i a_{i+1}`, `∂_n` dropping the last, `s_i` inserting an identity.
    /// Under `a_j = g_{n-j}` this must agree with the bar construction on a
    /// constant simplicial group.
    #[test]
    fn constant_bar_matches_classical_nerve() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let b = bar_of(g.clone(), 4);
        let nerve_face = |i: usize, a: &[ElemId]| -> Vec<ElemId> {
            let n = a.len();
            if i == 0 {
                a[1..].to_vec()
            } else if i == n {
                a[..n - 1].to_vec()
            } else {
                let mut out = a[..i - 1].to_vec();
                out.push(g.mul(a[i - 1], a[i]));
                out.extend_from_slice(&a[i + 1..]);
                out
            }
        };
        for n in 1..=4usize {
            for x in b.simplices(n) {
                // a_j = g_{n-j}: the entries list is already (a_1,…,a_n)
                for i in 0..=n {
                    assert_eq!(b.face(i, n, &x).entries, nerve_face(i, &x.entries));
                }
            }
        }
        for n in 0..4usize {
            for x in b.simplices(n) {
                for i in 0..=n {
                    let mut expect = x.entries.clone();
                    expect.insert(i, g.identity());
                    assert_eq!(b.degeneracy(i, n, &x).entries, expect);
                }
            }
        }
    }
}
