//! The Kan loop group `ΩX` of a reduced simplicial set: degreewise free
//! groups on the `(n+1)`-simplices of `X` modulo `s_0`-degenerate
//! generators, with canonical-form word arithmetic, structure maps, the
//! twisting function `τ^X(x) = [x]`, and the canonical morphism `ΩBG → G`.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bar::{BarSimplex, BarView};
use crate::group::ElemId;
use crate::simplicial::{is_reduced, SimplicialGroupView, SimplicialSet};
use crate::{Error, Result};

/// A reduced word in `(ΩX)_n`: letters are `(n+1)`-simplices with a sign.
/// Canonical form: no `s_0`-degenerate letter, no adjacent `x^{+1}x^{-1}`
/// pair. Equality of canonical forms is word equality in the quotient,
/// which is free on the non-degenerate generators.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LoopWord<S> {
    degree: usize,
    letters: Vec<(S, i8)>,
}

impl<S: Clone + Eq> LoopWord<S> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn letters(&self) -> &[(S, i8)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

pub struct LoopGroup<X: SimplicialSet> {
    space: Arc<X>,
    cutoff: usize,
    /// Per degree `n ≤ cutoff`: the `s_0`-images `X_n → X_{n+1}`, i.e. the
    /// generators killed by the relation `s_0 x = 1`.
    degenerate: Vec<HashSet<X::Simplex>>,
}

impl<X: SimplicialSet> LoopGroup<X> {
    /// Loop group of a reduced space; word degree `n` needs `X` at degree
    /// `n+1`, so the loop cutoff is one less than the space cutoff.
    pub fn new(space: Arc<X>) -> Result<Self> {
        if !is_reduced(space.as_ref()) {
            return Err(Error::NotReduced);
        }
        if space.cutoff() == 0 {
            return Err(Error::CutoffExceeded {
                required: 1,
                available: 0,
            });
        }
        let cutoff = space.cutoff() - 1;
        let degenerate = (0..=cutoff)
            .map(|n| {
                space
                    .simplices(n)
                    .iter()
                    .map(|y| space.degeneracy(0, n, y))
                    .collect()
            })
            .collect();
        Ok(LoopGroup {
            space,
            cutoff,
            degenerate,
        })
    }

    pub fn space(&self) -> &Arc<X> {
        &self.space
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn identity(&self, n: usize) -> LoopWord<X::Simplex> {
        LoopWord {
            degree: n,
            letters: Vec::new(),
        }
    }

    fn is_degenerate(&self, n: usize, x: &X::Simplex) -> bool {
        self.degenerate[n].contains(x)
    }

    /// Canonical form: delete `s_0`-degenerate letters, then freely reduce.
    fn reduce(&self, n: usize, letters: Vec<(X::Simplex, i8)>) -> LoopWord<X::Simplex> {
        let mut out: Vec<(X::Simplex, i8)> = Vec::with_capacity(letters.len());
        for (x, sign) in letters {
            if self.is_degenerate(n, &x) {
                continue;
            }
            if let Some(last) = out.last() {
                if last.0 == x && last.1 == -sign {
                    out.pop();
                    continue;
                }
            }
            out.push((x, sign));
        }
        LoopWord {
            degree: n,
            letters: out,
        }
    }

    /// `[x] ∈ (ΩX)_n` for an `(n+1)`-simplex `x`; the identity word if `x`
    /// is `s_0`-degenerate.
    pub fn generator(&self, n: usize, x: &X::Simplex) -> Result<LoopWord<X::Simplex>> {
        if n > self.cutoff {
            return Err(Error::CutoffExceeded {
                required: n,
                available: self.cutoff,
            });
        }
        Ok(self.reduce(n, vec![(x.clone(), 1)]))
    }

    /// Non-degenerate generators of `(ΩX)_n`, in the space's enumeration
    /// order.
    pub fn generators(&self, n: usize) -> Vec<X::Simplex> {
        self.space
            .simplices(n + 1)
            .into_iter()
            .filter(|x| !self.is_degenerate(n, x))
            .collect()
    }

    pub fn multiply(
        &self,
        w: &LoopWord<X::Simplex>,
        v: &LoopWord<X::Simplex>,
    ) -> Result<LoopWord<X::Simplex>> {
        if w.degree != v.degree {
            return Err(Error::DegreeMismatch(w.degree, v.degree));
        }
        let mut letters = w.letters.clone();
        letters.extend(v.letters.iter().cloned());
        Ok(self.reduce(w.degree, letters))
    }

    pub fn invert(&self, w: &LoopWord<X::Simplex>) -> LoopWord<X::Simplex> {
        let letters = w
            .letters
            .iter()
            .rev()
            .map(|(x, s)| (x.clone(), -s))
            .collect();
        self.reduce(w.degree, letters)
    }

    /// `∂_i` on a word, extended letterwise from the generator rules
    /// `∂_0[x] = [∂_0 x]⁻¹[∂_1 x]` and `∂_i[x] = [∂_{i+1} x]`.
    pub fn face(&self, i: usize, n: usize, w: &LoopWord<X::Simplex>) -> Result<LoopWord<X::Simplex>> {
        if w.degree != n {
            return Err(Error::DegreeMismatch(w.degree, n));
        }
        if n == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        let mut letters = Vec::new();
        for (x, sign) in &w.letters {
            // the generator x is an (n+1)-simplex
            let image: Vec<(X::Simplex, i8)> = if i == 0 {
                vec![
                    (self.space.face(0, n + 1, x), -1),
                    (self.space.face(1, n + 1, x), 1),
                ]
            } else {
                vec![(self.space.face(i + 1, n + 1, x), 1)]
            };
            if *sign == 1 {
                letters.extend(image);
            } else {
                letters.extend(image.into_iter().rev().map(|(y, s)| (y, -s)));
            }
        }
        Ok(self.reduce(n - 1, letters))
    }

    /// `s_i` on a word, extended from `s_i[x] = [s_{i+1} x]`.
    pub fn degeneracy(
        &self,
        i: usize,
        n: usize,
        w: &LoopWord<X::Simplex>,
    ) -> Result<LoopWord<X::Simplex>> {
        if w.degree != n {
            return Err(Error::DegreeMismatch(w.degree, n));
        }
        if n >= self.cutoff || i > n {
            return Err(Error::CutoffExceeded {
                required: n + 1,
                available: self.cutoff,
            });
        }
        let letters = w
            .letters
            .iter()
            .map(|(x, sign)| (self.space.degeneracy(i + 1, n + 1, x), *sign))
            .collect();
        Ok(self.reduce(n + 1, letters))
    }

    /// The canonical twisting function `τ^X: X_n → (ΩX)_{n-1}`, `x ↦ [x]`.
    pub fn canonical_twist(&self, n: usize, x: &X::Simplex) -> Result<LoopWord<X::Simplex>> {
        if n == 0 {
            return Err(Error::IndexOutOfRange { index: 0, dim: 0 });
        }
        self.generator(n - 1, x)
    }

    /// Sign-prefixed letters joined by `·`, identity as `ε`.
    pub fn word_label(&self, n: usize, w: &LoopWord<X::Simplex>) -> String {
        if w.is_identity() {
            return "ε".to_string();
        }
        w.letters
            .iter()
            .map(|(x, s)| {
                format!(
                    "{}{}",
                    if *s >= 0 { "+" } else { "-" },
                    self.space.label(n + 1, x)
                )
            })
            .collect::<Vec<_>>()
            .join("·")
    }

    /// Deterministic random word built from `len` uniformly chosen signed
    /// generators (before reduction).
    pub fn random_word<R: Rng>(&self, n: usize, len: usize, rng: &mut R) -> LoopWord<X::Simplex> {
        let gens = self.generators(n);
        let letters = (0..len)
            .filter_map(|_| {
                gens.choose(rng)
                    .map(|x| (x.clone(), if rng.gen_bool(0.5) { 1 } else { -1 }))
            })
            .collect();
        self.reduce(n, letters)
    }
}

/// The canonical morphism `ΩBG → G`, `⟨g_n|…|g_0⟩ ↦ g_n⁻¹`, extended
/// multiplicatively over the letters of a word. Well defined because
/// `s_0`-degenerate generators have identity top entry.
pub fn loop_to_group(
    group: &SimplicialGroupView,
    n: usize,
    w: &LoopWord<BarSimplex>,
) -> ElemId {
    let level = group.level(n);
    let mut acc = level.identity();
    for (x, sign) in w.letters() {
        let top = x.entries[0]; // g_n, an element of G_n
        let factor = if *sign == 1 { level.inv(top) } else { top };
        acc = level.mul(acc, factor);
    }
    acc
}

/// Loop group of a classifying space, the case the fibration machinery
/// uses.
pub type BarLoopGroup = LoopGroup<BarView>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn loops_over(g: FiniteGroup, space_cutoff: usize) -> BarLoopGroup {
        let view = Arc::new(SimplicialGroupView::constant(
            Arc::new(g),
            space_cutoff.max(1) - 1,
        ));
        LoopGroup::new(Arc::new(BarView::new(view, space_cutoff).unwrap())).unwrap()
    }

    #[test]
    fn generator_of_degenerate_simplex_is_identity() {
        let lg = loops_over(FiniteGroup::cyclic(4).unwrap(), 4);
        // s_0-degenerate 2-simplices of BG are those with identity top entry
        let w = lg.generator(1, &BarSimplex::new(vec![0, 2])).unwrap();
        assert!(w.is_identity());
        let w = lg.generator(1, &BarSimplex::new(vec![1, 2])).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.letters()[0].1, 1);
    }

    #[test]
    fn word_arithmetic() {
        let lg = loops_over(FiniteGroup::cyclic(4).unwrap(), 4);
        let x = lg.generator(1, &BarSimplex::new(vec![1, 2])).unwrap();
        let y = lg.generator(1, &BarSimplex::new(vec![3, 0])).unwrap();
        let xy = lg.multiply(&x, &y).unwrap();
        assert_eq!(xy.len(), 2);
        assert!(lg.multiply(&xy, &lg.invert(&xy)).unwrap().is_identity());
        assert_eq!(lg.multiply(&lg.identity(1), &x).unwrap(), x);
        // no relation collapses squares: free reduction only
        assert_eq!(lg.multiply(&x, &x).unwrap().len(), 2);
    }

    #[test]
    fn face_rules_on_generators() {
        let lg = loops_over(FiniteGroup::cyclic(4).unwrap(), 4);
        let b = lg.space().clone();
        // ∂_1⟨x⟩ = ⟨∂_2 x⟩ for degree-1 x
        let x = BarSimplex::new(vec![1, 2]);
        let w = lg.generator(1, &x).unwrap();
        let d1 = lg.face(1, 1, &w).unwrap();
        assert_eq!(d1, lg.generator(0, &b.face(2, 2, &x)).unwrap());
        // ∂_0⟨[1|2]⟩ = ⟨[2]⟩⁻¹⟨[3]⟩
        let d0 = lg.face(0, 1, &w).unwrap();
        let g2 = lg.generator(0, &BarSimplex::new(vec![2])).unwrap();
        let g3 = lg.generator(0, &BarSimplex::new(vec![3])).unwrap();
        assert_eq!(d0, lg.multiply(&lg.invert(&g2), &g3).unwrap());
    }

    #[test]
    fn structure_maps_respect_relations() {
        // faces and degeneracies of s_0-degenerate generators are identity
        let lg = loops_over(FiniteGroup::cyclic(4).unwrap(), 4);
        let b = lg.space().clone();
        for n in 1..=2usize {
            for y in b.simplices(n) {
                let x = b.degeneracy(0, n, &y);
                let w = lg.generator(n, &x).unwrap();
                assert!(w.is_identity());
                for i in 0..=n {
                    assert!(lg.face(i, n, &w).unwrap().is_identity());
                }
                if n < lg.cutoff() {
                    for i in 0..=n {
                        assert!(lg.degeneracy(i, n, &w).unwrap().is_identity());
                    }
                }
            }
        }
    }

    #[test]
    fn simplicial_identities_on_generators() {
        // sufficient on generators since all maps are homomorphisms
        for g in [
            FiniteGroup::cyclic(2).unwrap(),
            FiniteGroup::cyclic(4).unwrap(),
            FiniteGroup::symmetric(3).unwrap(),
        ] {
            let lg = loops_over(g, 4);
            let b = lg.space().clone();
            for n in 1..=3usize {
                for x in b.simplices(n + 1) {
                    let w = lg.generator(n, &x).unwrap();
                    // ∂_i ∂_j = ∂_{j-1} ∂_i, i < j
                    if n >= 2 {
                        for j in 1..=n {
                            for i in 0..j {
                                let lhs = lg
                                    .face(i, n - 1, &lg.face(j, n, &w).unwrap())
                                    .unwrap();
                                let rhs = lg
                                    .face(j - 1, n - 1, &lg.face(i, n, &w).unwrap())
                                    .unwrap();
                                assert_eq!(lhs, rhs, "∂∂ at n={n} i={i} j={j}");
                            }
                        }
                    }
                    // mixed identities where degeneracies stay in range
                    if n + 1 <= lg.cutoff() {
                        for j in 0..=n {
                            let sj = lg.degeneracy(j, n, &w).unwrap();
                            for i in 0..=n + 1 {
                                let lhs = lg.face(i, n + 1, &sj).unwrap();
                                let rhs = if i < j {
                                    lg.degeneracy(j - 1, n - 1, &lg.face(i, n, &w).unwrap())
                                        .unwrap()
                                } else if i == j || i == j + 1 {
                                    w.clone()
                                } else {
                                    lg.degeneracy(j, n - 1, &lg.face(i - 1, n, &w).unwrap())
                                        .unwrap()
                                };
                                assert_eq!(lhs, rhs, "∂s at n={n} i={i} j={j}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn loop_to_group_values() {
        let group = Arc::new(SimplicialGroupView::constant(
            Arc::new(FiniteGroup::cyclic(4).unwrap()),
            3,
        ));
        let lg = LoopGroup::new(Arc::new(BarView::new(group.clone(), 3).unwrap())).unwrap();
        // ⟨3|2⟩ ↦ 1
        let w = lg.generator(1, &BarSimplex::new(vec![3, 2])).unwrap();
        assert_eq!(loop_to_group(&group, 1, &w), 1);
        assert_eq!(loop_to_group(&group, 1, &lg.identity(1)), 0);
    }

    #[test]
    fn loop_to_group_is_simplicial_homomorphism() {
        for g in [FiniteGroup::cyclic(4).unwrap(), FiniteGroup::symmetric(3).unwrap()] {
            let group = Arc::new(SimplicialGroupView::constant(Arc::new(g), 4));
            let b = Arc::new(BarView::new(group.clone(), 4).unwrap());
            let lg = LoopGroup::new(b.clone()).unwrap();
            for n in 0..=2usize {
                for x in b.simplices(n + 1) {
                    let w = lg.generator(n, &x).unwrap();
                    // homomorphism on generator pairs
                    for y in b.simplices(n + 1) {
                        let v = lg.generator(n, &y).unwrap();
                        let prod = lg.multiply(&w, &v).unwrap();
                        assert_eq!(
                            loop_to_group(&group, n, &prod),
                            group
                                .level(n)
                                .mul(loop_to_group(&group, n, &w), loop_to_group(&group, n, &v))
                        );
                    }
                    // commutes with faces and degeneracies
                    if n >= 1 {
                        for i in 0..=n {
                            let lhs =
                                loop_to_group(&group, n - 1, &lg.face(i, n, &w).unwrap());
                            let rhs =
                                group.face_apply(i, n, loop_to_group(&group, n, &w));
                            assert_eq!(lhs, rhs, "face {i} degree {n}");
                        }
                    }
                    if n < lg.cutoff() {
                        for i in 0..=n {
                            let lhs = loop_to_group(
                                &group,
                                n + 1,
                                &lg.degeneracy(i, n, &w).unwrap(),
                            );
                            let rhs =
                                group.degeneracy_apply(i, n, loop_to_group(&group, n, &w));
                            assert_eq!(lhs, rhs, "degeneracy {i} degree {n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn requires_reduced_space() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let view = Arc::new(SimplicialGroupView::constant(z2, 3));
        assert!(matches!(LoopGroup::new(view), Err(Error::NotReduced)));
    }

    #[test]
    fn random_words_are_reduced() {
        let lg = loops_over(FiniteGroup::cyclic(2).unwrap(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let w = lg.random_word(2, 6, &mut rng);
            // reduction is idempotent on canonical forms
            let again = lg.multiply(&w, &lg.identity(2)).unwrap();
            assert_eq!(w, again);
        }
    }
}
