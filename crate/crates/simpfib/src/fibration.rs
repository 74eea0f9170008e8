//! The `ΩBL`-action on `BK`, the bijection `α: G → K×L`, the isomorphism
//! `Ψ: BG → BK ×_{τ^{BL}} BL`, and the semidirect-product specializations
//! (the `L`-action on `BK` and the simplified isomorphism `Φ` into
//! `BK ×_{τ_L} BL`), with an exhaustive end-to-end verifier.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bar::{BarSimplex, BarView};
use crate::group::{coset_section, ElemId};
use crate::loop_group::{loop_to_group, BarLoopGroup, LoopGroup, LoopWord};
use crate::report::{Report, ReportConfig};
use crate::simplicial::{check_simplicial_map, ShortExactSequence, SimplicialGroupView, SimplicialMap, SimplicialSet};
use crate::twisted::{validate_action, SimplicialAction, TwistedProduct, TwistingFunction};
use crate::{Error, Result};

/// Levelwise section `σ(n): L_n → G_n` of the projection, required to
/// satisfy `πσ = id`, commute with `∂_i` for `i ≥ 1` and with every `s_i`,
/// and be normalized to `σ(1_n) = 1_n`. Violations are reported by
/// [`PseudoSection::validate`]; only `πσ = id` is enforced at
/// construction.
pub struct PseudoSection {
    sigma: Vec<Vec<ElemId>>,
}

impl PseudoSection {
    pub fn from_tables(sigma: Vec<Vec<ElemId>>) -> Self {
        PseudoSection { sigma }
    }

    /// One table applied at every level; the right construction for
    /// constant simplicial groups.
    pub fn from_constant_table(table: Vec<ElemId>, cutoff: usize) -> Self {
        PseudoSection {
            sigma: vec![table; cutoff + 1],
        }
    }

    /// Deterministic section: minimal id per fibre, normalized so that
    /// `σ(1) = 1`, independently at each level.
    pub fn from_coset_policy(ses: &ShortExactSequence) -> Result<Self> {
        let sigma = ses
            .pi
            .iter()
            .map(coset_section)
            .collect::<Result<Vec<_>>>()?;
        Ok(PseudoSection { sigma })
    }

    pub fn apply(&self, n: usize, l: ElemId) -> ElemId {
        self.sigma[n][l]
    }

    pub fn levels(&self) -> usize {
        self.sigma.len()
    }

    /// Full pseudo-cross-section validation against a sequence, with the
    /// `∂_0` clause reported separately (honest vs pseudo).
    pub fn validate(&self, ses: &ShortExactSequence) -> Report {
        let n_max = ses.cutoff().min(self.sigma.len().saturating_sub(1));
        let mut report = Report::new(
            "pseudo-section",
            ReportConfig {
                max_dim: n_max,
                ..Default::default()
            },
        );
        for n in 0..=n_max {
            let l_grp = ses.l.level(n);
            let mut cex = None;
            for l in l_grp.elements() {
                if ses.pi[n].apply(self.sigma[n][l]) != l {
                    cex = Some(format!("πσ({}) ≠ {}", l_grp.label(l), l_grp.label(l)));
                    break;
                }
            }
            report.record("projection-section", Some(n), cex);
            let normalized = self.sigma[n][l_grp.identity()] == ses.g.level(n).identity();
            report.record(
                "sigma-of-identity",
                Some(n),
                (!normalized).then(|| {
                    format!(
                        "σ(1_{n}) = {} ≠ 1",
                        ses.g.level(n).label(self.sigma[n][l_grp.identity()])
                    )
                }),
            );
        }
        for n in 1..=n_max {
            let mut cex0 = None;
            let mut cex = None;
            for l in ses.l.level(n).elements() {
                for i in 0..=n {
                    let lhs = ses.g.face_apply(i, n, self.sigma[n][l]);
                    let rhs = self.sigma[n - 1][ses.l.face_apply(i, n, l)];
                    if lhs != rhs {
                        let w = format!("∂_{i}σ ≠ σ∂_{i} at l = {}", ses.l.level(n).label(l));
                        if i == 0 {
                            cex0.get_or_insert(w);
                        } else {
                            cex.get_or_insert(w);
                        }
                    }
                }
            }
            report.record("commutes-with-faces", Some(n), cex);
            report.record("honest-face-0", Some(n), cex0);
        }
        for n in 0..n_max {
            let mut cex = None;
            's: for l in ses.l.level(n).elements() {
                for i in 0..=n {
                    let lhs = ses.g.degeneracy_apply(i, n, self.sigma[n][l]);
                    let rhs = self.sigma[n + 1][ses.l.degeneracy_apply(i, n, l)];
                    if lhs != rhs {
                        cex = Some(format!("s_{i}σ ≠ σs_{i} at l = {}", ses.l.level(n).label(l)));
                        break 's;
                    }
                }
            }
            report.record("commutes-with-degeneracies", Some(n), cex);
        }
        report
    }

    pub fn is_multiplicative(&self, ses: &ShortExactSequence) -> bool {
        let n_max = ses.cutoff().min(self.sigma.len().saturating_sub(1));
        (0..=n_max).all(|n| {
            let l_grp = ses.l.level(n);
            let g_grp = ses.g.level(n);
            l_grp.elements().all(|a| {
                l_grp.elements().all(|b| {
                    self.sigma[n][l_grp.mul(a, b)]
                        == g_grp.mul(self.sigma[n][a], self.sigma[n][b])
                })
            })
        })
    }
}

/// Everything needed to state and check the fibration theorem for one
/// short exact sequence and one pseudo-cross section: the three
/// classifying spaces at a common cutoff, the loop group of the base, and
/// the kernel-membership tables that certify fibre entries.
pub struct FibrationContext {
    pub ses: Arc<ShortExactSequence>,
    pub section: Arc<PseudoSection>,
    cutoff: usize,
    pub bk: Arc<BarView>,
    pub bg: Arc<BarView>,
    pub bl: Arc<BarView>,
    pub loops_bl: Arc<BarLoopGroup>,
    /// Per level: `ι(k) ↦ k`.
    iota_inv: Vec<HashMap<ElemId, ElemId>>,
    multiplicative: bool,
}

impl FibrationContext {
    /// `cutoff` is the top simplex dimension of the bar views. Fails if
    /// the section is not a set-theoretic section of `π` (everything else
    /// is reported, not rejected, so that defective inputs can be
    /// diagnosed).
    pub fn new(
        ses: Arc<ShortExactSequence>,
        section: PseudoSection,
        cutoff: usize,
    ) -> Result<Arc<Self>> {
        if cutoff >= 1 && ses.cutoff() < cutoff - 1 {
            return Err(Error::CutoffExceeded {
                required: cutoff - 1,
                available: ses.cutoff(),
            });
        }
        if section.levels() < cutoff.max(1) {
            return Err(Error::InvalidSection(format!(
                "section has {} levels, need {}",
                section.levels(),
                cutoff.max(1)
            )));
        }
        let level_max = (cutoff.max(1) - 1).min(section.levels() - 1);
        for n in 0..=level_max {
            for l in ses.l.level(n).elements() {
                let g = section.apply(n, l);
                if g >= ses.g.level(n).order() || ses.pi[n].apply(g) != l {
                    return Err(Error::InvalidSection(format!(
                        "σ({l}) = {g} at level {n} is not a π-preimage"
                    )));
                }
            }
        }
        let iota_inv = ses
            .iota
            .iter()
            .map(|h| h.source.elements().map(|k| (h.apply(k), k)).collect())
            .collect();
        let multiplicative = section.is_multiplicative(&ses);
        let bg = Arc::new(BarView::new(ses.g.clone(), cutoff)?);
        let bk = Arc::new(BarView::new(ses.k.clone(), cutoff)?);
        let bl = Arc::new(BarView::new(ses.l.clone(), cutoff)?);
        let loops_bl = Arc::new(LoopGroup::new(bl.clone())?);
        Ok(Arc::new(FibrationContext {
            ses,
            section: Arc::new(section),
            cutoff,
            bk,
            bg,
            bl,
            loops_bl,
            iota_inv,
            multiplicative,
        }))
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_multiplicative(&self) -> bool {
        self.multiplicative
    }

    fn sigma(&self, n: usize, l: ElemId) -> ElemId {
        self.section.apply(n, l)
    }

    /// Certify a `G_n` element as `ι` of a `K_n` element.
    fn into_k(&self, n: usize, g: ElemId) -> Result<ElemId> {
        self.iota_inv[n]
            .get(&g)
            .copied()
            .ok_or(Error::OutsideKernel { level: n, elem: g })
    }

    /// `α(g) = (g·σ(π g)⁻¹, π g)`, with the first component certified to
    /// lie in `ι(K)` and returned as a `K`-id.
    pub fn alpha(&self, n: usize, g: ElemId) -> Result<(ElemId, ElemId)> {
        let l = self.ses.pi[n].apply(g);
        let g_grp = self.ses.g.level(n);
        let kbar = g_grp.mul(g, g_grp.inv(self.sigma(n, l)));
        Ok((self.into_k(n, kbar)?, l))
    }

    /// `α⁻¹(k, l) = ι(k)·σ(l)`.
    pub fn alpha_inverse(&self, n: usize, k: ElemId, l: ElemId) -> ElemId {
        self.ses
            .g
            .level(n)
            .mul(self.ses.iota[n].apply(k), self.sigma(n, l))
    }

    /// The α-component of `g` kept as a `G`-element (in `ι(K)`).
    fn alpha_kbar(&self, n: usize, g: ElemId) -> (ElemId, ElemId) {
        let l = self.ses.pi[n].apply(g);
        let g_grp = self.ses.g.level(n);
        (g_grp.mul(g, g_grp.inv(self.sigma(n, l))), l)
    }

    /// The product identity transferred through α: for `g ∈ G_n`,
    /// `g' ∈ G_{n-1}` with `α(g) = (k,l)`, `α(g') = (k',l')`,
    /// `α(∂_0g·g') = (∂_0k·∂_0σ(l)·k'·σ(l')·σ(∂_0l·l')⁻¹, ∂_0l·l')`.
    pub fn alpha_twist_identity(&self, n: usize, g: ElemId, g_prime: ElemId) -> bool {
        let g_lo = self.ses.g.level(n - 1);
        let l_lo = self.ses.l.level(n - 1);
        let (kbar, l) = self.alpha_kbar(n, g);
        let (kbar_p, l_p) = self.alpha_kbar(n - 1, g_prime);
        let lhs = self.alpha_kbar(
            n - 1,
            g_lo.mul(self.ses.g.face_apply(0, n, g), g_prime),
        );
        let ll = l_lo.mul(self.ses.l.face_apply(0, n, l), l_p);
        let rhs_k = g_lo.product(&[
            self.ses.g.face_apply(0, n, kbar),
            self.ses.g.face_apply(0, n, self.sigma(n, l)),
            kbar_p,
            self.sigma(n - 1, l_p),
            g_lo.inv(self.sigma(n - 1, ll)),
        ]);
        lhs == (rhs_k, ll)
    }

    /// Decreasing-power product `∂_0^m l_a · ∂_0^{m-1} l_{a-1} ⋯ l_{a-m}`
    /// for `elems = [l_a, …, l_{a-m}]` with `l_a` at level `top_level`;
    /// the empty product is the identity at `target_level`.
    pub fn leading_product(&self, top_level: usize, target_level: usize, elems: &[ElemId]) -> ElemId {
        let l = &self.ses.l;
        if elems.is_empty() {
            return l.level(target_level).identity();
        }
        debug_assert_eq!(top_level + 1 - elems.len(), target_level);
        let mut acc = elems[0];
        let mut lev = top_level;
        for &x in &elems[1..] {
            acc = l.level(lev - 1).mul(l.face_apply(0, lev, acc), x);
            lev -= 1;
        }
        acc
    }

    /// Flanking factors of the generator action: the generator
    /// `⟨l_n|…|l_0⟩` sends the entry `k_{n-j}` of a bar simplex over `K`
    /// to `A_j · k_{n-j} · B_j` (computed in `G_{n-j}`), where
    /// `A_j = ∂_0σ(R_{j-1}) · (∂_0σ(Q_{j-1}))⁻¹` and
    /// `B_j = σ(Q_j) · σ(R_j)⁻¹`, with `Q_j` the decreasing-power product
    /// of `(l_n, …, l_{n-j})` and `R_j` of `(l_{n-1}, …, l_{n-j})`.
    fn generator_flanks(&self, n: usize, gen: &BarSimplex) -> Vec<(ElemId, ElemId)> {
        debug_assert_eq!(gen.degree(), n + 1);
        let g = &self.ses.g;
        let ls = &gen.entries; // ls[t] = l_{n-t}, level n-t
        (1..=n)
            .map(|j| {
                let level = n - j;
                let q_prev = self.leading_product(n, level + 1, &ls[0..j]);
                let q_cur = self.leading_product(n, level, &ls[0..j + 1]);
                let r_prev = self.leading_product(n - 1, level + 1, &ls[1..j]);
                let r_cur = self.leading_product(n - 1, level, &ls[1..j + 1]);
                let g_lvl = g.level(level);
                let a = g_lvl.mul(
                    g.face_apply(0, level + 1, self.sigma(level + 1, r_prev)),
                    g_lvl.inv(g.face_apply(0, level + 1, self.sigma(level + 1, q_prev))),
                );
                let b = g_lvl.mul(
                    self.sigma(level, q_cur),
                    g_lvl.inv(self.sigma(level, r_cur)),
                );
                (a, b)
            })
            .collect()
    }

    /// Action of a single (possibly inverted) generator of `(ΩBL)_n` on an
    /// `n`-simplex of `BK`. Every output entry is certified to lie in
    /// `ι(K)`; an entry outside it signals an invalid section (or a
    /// formula regression) and aborts with the offending position.
    pub fn act_generator(
        &self,
        n: usize,
        gen: &BarSimplex,
        sign: i8,
        k: &BarSimplex,
    ) -> Result<BarSimplex> {
        if gen.degree() != n + 1 || k.degree() != n {
            return Err(Error::DegreeMismatch(gen.degree(), n + 1));
        }
        let g = &self.ses.g;
        let flanks = self.generator_flanks(n, gen);
        let mut entries = Vec::with_capacity(n);
        for (j, &(a, b)) in (1..=n).zip(flanks.iter()) {
            let level = n - j;
            let g_lvl = g.level(level);
            let kg = self.ses.iota[level].apply(k.entries[j - 1]);
            // an inverted generator undoes k ↦ A·k·B entrywise
            let out = if sign >= 0 {
                g_lvl.product(&[a, kg, b])
            } else {
                g_lvl.product(&[g_lvl.inv(a), kg, g_lvl.inv(b)])
            };
            entries.push(self.into_k(level, out)?);
        }
        Ok(BarSimplex::new(entries))
    }

    /// Action of a reduced word, folding letters right to left.
    pub fn act_word(&self, n: usize, w: &LoopWord<BarSimplex>, k: &BarSimplex) -> Result<BarSimplex> {
        if w.degree() != n {
            return Err(Error::DegreeMismatch(w.degree(), n));
        }
        let mut cur = k.clone();
        for (gen, sign) in w.letters().iter().rev() {
            cur = self.act_generator(n, gen, *sign, &cur)?;
        }
        Ok(cur)
    }

    /// `∂_0σ(P_j) ∈ G_{n-1-j}`; `P_0` is the empty product one level above
    /// the truncation, whose image is the identity, so it never gets
    /// materialized.
    fn d0_sigma_leading(&self, n: usize, j: usize, ls: &[ElemId]) -> ElemId {
        if j == 0 {
            return self.ses.g.level(n - 1).identity();
        }
        let p = self.leading_product(n - 1, n - j, &ls[0..j]);
        self.ses.g.face_apply(0, n - j, self.sigma(n - j, p))
    }

    fn base_entries(&self, n: usize, g: &BarSimplex) -> Vec<ElemId> {
        (0..n)
            .map(|t| self.ses.pi[n - 1 - t].apply(g.entries[t]))
            .collect()
    }

    /// `Ψ(𝒈) = (𝒌', 𝒍) ∈ BK ×_{τ^{BL}} BL`: the base is the entrywise
    /// projection, and the fibre entry in level `n-1-j` is
    /// `∂_0σ(P_j) · k_{n-1-j} · σ(l_{n-1-j}) · σ(P_{j+1})⁻¹` with
    /// `P_j` the decreasing-power product of `(l_{n-1}, …, l_{n-j})`.
    pub fn psi(&self, n: usize, g: &BarSimplex) -> Result<(BarSimplex, BarSimplex)> {
        if g.degree() != n {
            return Err(Error::DegreeMismatch(g.degree(), n));
        }
        let grp = &self.ses.g;
        let ls = self.base_entries(n, g);
        let mut fibre = Vec::with_capacity(n);
        for j in 0..n {
            let level = n - 1 - j;
            let g_lvl = grp.level(level);
            let (kbar, l) = self.alpha_kbar(level, g.entries[j]);
            let p_next = self.leading_product(n - 1, level, &ls[0..j + 1]);
            let out = g_lvl.product(&[
                self.d0_sigma_leading(n, j, &ls),
                kbar,
                self.sigma(level, l),
                g_lvl.inv(self.sigma(level, p_next)),
            ]);
            fibre.push(self.into_k(level, out)?);
        }
        Ok((BarSimplex::new(fibre), BarSimplex::new(ls)))
    }

    /// Inverse of `Ψ`, solving for the entries top-down:
    /// `k̄_{n-1-j} = (∂_0σ(P_j))⁻¹ · entry · σ(P_{j+1}) · σ(l_{n-1-j})⁻¹`,
    /// then `g_i = k̄_i · σ(l_i)`. Total on the full product set.
    pub fn psi_inverse(&self, n: usize, fibre: &BarSimplex, base: &BarSimplex) -> Result<BarSimplex> {
        if fibre.degree() != n || base.degree() != n {
            return Err(Error::DegreeMismatch(fibre.degree(), base.degree()));
        }
        let grp = &self.ses.g;
        let ls = &base.entries;
        let mut entries = Vec::with_capacity(n);
        for j in 0..n {
            let level = n - 1 - j;
            let g_lvl = grp.level(level);
            let p_next = self.leading_product(n - 1, level, &ls[0..j + 1]);
            let kg = self.ses.iota[level].apply(fibre.entries[j]);
            let kbar = g_lvl.product(&[
                g_lvl.inv(self.d0_sigma_leading(n, j, ls)),
                kg,
                self.sigma(level, p_next),
                g_lvl.inv(self.sigma(level, ls[j])),
            ]);
            entries.push(g_lvl.mul(kbar, self.sigma(level, ls[j])));
        }
        Ok(BarSimplex::new(entries))
    }

    /// Conjugation `l ∗ k = σ(l)·k·σ(l)⁻¹` through a multiplicative
    /// section, landing back in `K`.
    pub fn conjugate(&self, n: usize, l: ElemId, k: ElemId) -> Result<ElemId> {
        let g_lvl = self.ses.g.level(n);
        let s = self.sigma(n, l);
        let out = g_lvl.product(&[s, self.ses.iota[n].apply(k), g_lvl.inv(s)]);
        self.into_k(n, out)
    }

    /// The `L`-action on `BK` in the semidirect case:
    /// `l·𝒌 = [∂_0l∗k_{n-1} | ∂_0²l∗k_{n-2} | … | ∂_0ⁿl∗k_0]`.
    pub fn semidirect_action(&self, n: usize, l: ElemId, k: &BarSimplex) -> Result<BarSimplex> {
        if !self.multiplicative {
            return Err(Error::SectionNotMultiplicative);
        }
        if k.degree() != n {
            return Err(Error::DegreeMismatch(k.degree(), n));
        }
        let entries = (0..n)
            .map(|t| {
                let level = n - 1 - t;
                let m = self.ses.l.face0_power(t + 1, n, l);
                self.conjugate(level, m, k.entries[t])
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BarSimplex::new(entries))
    }

    /// The simplified isomorphism `Φ: BG → BK ×_{τ_L} BL` in the
    /// semidirect case: fibre entry `j` is `∂_0(P_j) ∗ k_{n-1-j}`.
    pub fn phi(&self, n: usize, g: &BarSimplex) -> Result<(BarSimplex, BarSimplex)> {
        if !self.multiplicative {
            return Err(Error::SectionNotMultiplicative);
        }
        if g.degree() != n {
            return Err(Error::DegreeMismatch(g.degree(), n));
        }
        let ls = self.base_entries(n, g);
        let mut fibre = Vec::with_capacity(n);
        for j in 0..n {
            let level = n - 1 - j;
            let (k, _) = self.alpha(level, g.entries[j])?;
            let m = if j == 0 {
                self.ses.l.level(level).identity()
            } else {
                let p_cur = self.leading_product(n - 1, n - j, &ls[0..j]);
                self.ses.l.face_apply(0, n - j, p_cur)
            };
            fibre.push(self.conjugate(level, m, k)?);
        }
        Ok((BarSimplex::new(fibre), BarSimplex::new(ls)))
    }

    /// `τ^{BL}` together with the `ΩBL`-action, packaged as the twisted
    /// Cartesian product `BK ×_{τ^{BL}} BL`.
    pub fn twisted_product(
        self: &Arc<Self>,
    ) -> Result<TwistedProduct<BarView, BarView, BarLoopGroup>> {
        let loops = self.loops_bl.clone();
        let tau = TwistingFunction::new(self.bl.clone(), loops.clone(), {
            let loops = loops.clone();
            move |n, b: &BarSimplex| loops.canonical_twist(n, b).expect("twist within cutoff")
        });
        let ctx = self.clone();
        let action = SimplicialAction::new(
            loops,
            self.bk.clone(),
            move |n, w: &LoopWord<BarSimplex>, k: &BarSimplex| {
                ctx.act_word(n, w, k).expect("action within certified range")
            },
        );
        TwistedProduct::new(self.bk.clone(), tau, action, self.cutoff)
    }

    /// `BK ×_{τ_L} BL` with `L` acting by the semidirect formula; only
    /// available for a multiplicative section.
    pub fn semidirect_product_view(
        self: &Arc<Self>,
    ) -> Result<TwistedProduct<BarView, BarView, SimplicialGroupView>> {
        if !self.multiplicative {
            return Err(Error::SectionNotMultiplicative);
        }
        let bl = self.bl.clone();
        let tau = TwistingFunction::new(self.bl.clone(), self.ses.l.clone(), {
            move |_n, b: &BarSimplex| bl.canonical_twist(b).expect("twist of positive degree")
        });
        let ctx = self.clone();
        let action = SimplicialAction::new(
            self.ses.l.clone(),
            self.bk.clone(),
            move |n, l: &ElemId, k: &BarSimplex| {
                ctx.semidirect_action(n, *l, k)
                    .expect("semidirect action within certified range")
            },
        );
        TwistedProduct::new(self.bk.clone(), tau, action, self.cutoff)
    }

    /// The full theorem check: sequence and section validation, twisting
    /// axioms for `τ^{BL}`, action well-definedness and axioms, Ψ
    /// bijectivity and commutation with every structure map, and in the
    /// semidirect case the same for Φ plus the factorization through
    /// `ΩBL → L`. Failures are data.
    pub fn verify_theorem(self: &Arc<Self>, seed: u64, samples: usize) -> Result<Report> {
        let n_max = self.cutoff;
        let mut report = Report::new(
            "verify-theorem",
            ReportConfig {
                max_dim: n_max,
                seed,
                samples,
                notes: vec![if self.multiplicative {
                    "section is multiplicative; Φ branch included".to_string()
                } else {
                    "section is not multiplicative; Ψ branch only".to_string()
                }],
            },
        );
        absorb_prefixed(&mut report, "ses", self.ses.validate());
        absorb_prefixed(&mut report, "section", self.section.validate(&self.ses));

        // α commutes with ∂_i (i ≥ 1) and all s_i; α-product identity
        self.alpha_reports(&mut report);

        let product = self.twisted_product()?;
        absorb_prefixed(
            &mut report,
            "twist-BL",
            crate::twisted::validate_twisting(&product.tau, n_max)?,
        );

        self.action_reports(&mut report, seed, samples)?;
        self.psi_reports(&mut report, &product)?;

        if self.multiplicative {
            let sd = self.semidirect_product_view()?;
            absorb_prefixed(
                &mut report,
                "twist-L",
                crate::twisted::validate_twisting(&sd.tau, n_max)?,
            );
            self.phi_reports(&mut report, &sd)?;
        }
        Ok(report)
    }

    fn alpha_reports(&self, report: &mut Report) {
        for n in 1..=self.cutoff.max(1) - 1 {
            let g_view = &self.ses.g;
            let mut cex = None;
            'outer: for g in g_view.level(n).elements() {
                let (kbar, l) = self.alpha_kbar(n, g);
                for i in 1..=n {
                    // α commutes with ∂_i for i ≥ 1 when σ does
                    let lhs = self.alpha_kbar(n - 1, g_view.face_apply(i, n, g));
                    let rhs = (
                        g_view.face_apply(i, n, kbar),
                        self.ses.l.face_apply(i, n, l),
                    );
                    if lhs != rhs {
                        cex = Some(format!(
                            "α vs ∂_{i} at g = {}",
                            g_view.level(n).label(g)
                        ));
                        break 'outer;
                    }
                }
                if n < self.cutoff.max(1) - 1 {
                    for i in 0..=n {
                        let lhs = self.alpha_kbar(n + 1, g_view.degeneracy_apply(i, n, g));
                        let rhs = (
                            g_view.degeneracy_apply(i, n, kbar),
                            self.ses.l.degeneracy_apply(i, n, l),
                        );
                        if lhs != rhs {
                            cex = Some(format!(
                                "α vs s_{i} at g = {}",
                                g_view.level(n).label(g)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            report.record("alpha/structure-maps", Some(n), cex);

            let mut cex = None;
            'pairs: for g in g_view.level(n).elements() {
                for gp in g_view.level(n - 1).elements() {
                    if !self.alpha_twist_identity(n, g, gp) {
                        cex = Some(format!(
                            "α(∂_0g·g') identity fails at g = {}, g' = {}",
                            g_view.level(n).label(g),
                            g_view.level(n - 1).label(gp)
                        ));
                        break 'pairs;
                    }
                }
            }
            report.record("alpha/product-identity", Some(n), cex);
        }
    }

    fn action_reports(self: &Arc<Self>, report: &mut Report, seed: u64, samples: usize) -> Result<()> {
        let degree_max = self.cutoff.max(1) - 1;
        let deep_max = degree_max.min(3);

        // well-definedness: s_0-degenerate generators act trivially
        for n in 1..=deep_max {
            let mut cex = None;
            'wd: for y in self.bl.simplices(n) {
                let gen = self.bl.degeneracy(0, n, &y);
                for k in self.bk.simplices(n) {
                    let moved = self.act_generator(n, &gen, 1, &k)?;
                    if moved != k {
                        cex = Some(format!(
                            "s_0{} moves {}",
                            self.bl.label(n, &y),
                            self.bk.label(n, &k)
                        ));
                        break 'wd;
                    }
                }
            }
            report.record("action/degenerate-generators-trivial", Some(n), cex);
        }

        // action axioms on generators (exhaustive) via the shared validator
        let product_action = {
            let ctx = self.clone();
            SimplicialAction::new(
                self.loops_bl.clone(),
                self.bk.clone(),
                move |n, w: &LoopWord<BarSimplex>, k: &BarSimplex| {
                    ctx.act_word(n, w, k).expect("action within certified range")
                },
            )
        };
        let loops = self.loops_bl.clone();
        let gens = move |n: usize| -> Vec<LoopWord<BarSimplex>> {
            loops
                .generators(n)
                .iter()
                .map(|x| loops.generator(n, x).expect("generator within cutoff"))
                .collect()
        };
        absorb_prefixed(
            &mut *report,
            "action",
            validate_action(&product_action, &gens, deep_max)?,
        );

        // seeded random words: inverses and compatibility
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for n in 1..=deep_max {
            let ks = self.bk.simplices(n);
            let mut cex_inv = None;
            let mut cex_compat = None;
            for _ in 0..samples {
                let w = self.loops_bl.random_word(n, rng.gen_range(1..=6), &mut rng);
                let v = self.loops_bl.random_word(n, rng.gen_range(1..=6), &mut rng);
                let k = ks[rng.gen_range(0..ks.len())].clone();
                if cex_inv.is_none() {
                    let back = self.act_word(n, &w, &self.act_word(n, &self.loops_bl.invert(&w), &k)?)?;
                    if back != k {
                        cex_inv = Some(format!(
                            "w·(w⁻¹·k) ≠ k at w = {}, k = {}",
                            self.loops_bl.word_label(n, &w),
                            self.bk.label(n, &k)
                        ));
                    }
                }
                if cex_compat.is_none() {
                    let wv = self.loops_bl.multiply(&w, &v)?;
                    if self.act_word(n, &wv, &k)? != self.act_word(n, &w, &self.act_word(n, &v, &k)?)? {
                        cex_compat = Some(format!(
                            "(ww')·k ≠ w·(w'·k) at w = {}, w' = {}",
                            self.loops_bl.word_label(n, &w),
                            self.loops_bl.word_label(n, &v)
                        ));
                    }
                }
            }
            report.record("action/sampled-inverses", Some(n), cex_inv);
            report.record("action/sampled-compatibility", Some(n), cex_compat);
        }
        Ok(())
    }

    fn psi_reports(
        self: &Arc<Self>,
        report: &mut Report,
        product: &TwistedProduct<BarView, BarView, BarLoopGroup>,
    ) -> Result<()> {
        let n_max = self.cutoff;
        for n in 0..=n_max {
            let gs = self.bg.simplices(n);
            let expected = self.bk.simplices(n).len() * self.bl.simplices(n).len();
            let images: Vec<(BarSimplex, BarSimplex)> = gs
                .par_iter()
                .map(|g| self.psi(n, g).expect("psi total on valid section"))
                .collect();
            let distinct: HashSet<&(BarSimplex, BarSimplex)> = images.iter().collect();
            report.record(
                "psi/bijective",
                Some(n),
                (distinct.len() != gs.len() || gs.len() != expected).then(|| {
                    format!(
                        "|image| = {}, |BG_n| = {}, |BK_n|·|BL_n| = {}",
                        distinct.len(),
                        gs.len(),
                        expected
                    )
                }),
            );
            let mut cex = None;
            for (g, im) in gs.iter().zip(&images) {
                if self.psi_inverse(n, &im.0, &im.1)? != *g {
                    cex = Some(format!("Ψ⁻¹Ψ ≠ id at {}", self.bg.label(n, g)));
                    break;
                }
            }
            if cex.is_none() {
                for t in product.simplices(n) {
                    let g = self.psi_inverse(n, &t.0, &t.1)?;
                    if self.psi(n, &g)? != t {
                        cex = Some(format!("ΨΨ⁻¹ ≠ id at {}", product.label(n, &t)));
                        break;
                    }
                }
            }
            report.record("psi/round-trip", Some(n), cex);
        }

        let ctx = self.clone();
        let psi_map = SimplicialMap::new(
            self.bg.clone(),
            Arc::new(self.twisted_product()?),
            move |n, g: &BarSimplex| ctx.psi(n, g).expect("psi total on valid section"),
        );
        absorb_prefixed(&mut *report, "psi", check_simplicial_map(&psi_map, n_max)?);
        Ok(())
    }

    fn phi_reports(
        self: &Arc<Self>,
        report: &mut Report,
        sd: &TwistedProduct<BarView, BarView, SimplicialGroupView>,
    ) -> Result<()> {
        let n_max = self.cutoff;
        for n in 0..=n_max {
            let gs = self.bg.simplices(n);
            let mut images = Vec::with_capacity(gs.len());
            for g in &gs {
                images.push(self.phi(n, g)?);
            }
            let distinct: HashSet<&(BarSimplex, BarSimplex)> = images.iter().collect();
            report.record(
                "phi/bijective",
                Some(n),
                (distinct.len() != gs.len()).then(|| format!("|image| = {}", distinct.len())),
            );
            let mut cex = None;
            for (g, im) in gs.iter().zip(&images) {
                if self.psi(n, g)? != *im {
                    cex = Some(format!("Φ ≠ Ψ at {}", self.bg.label(n, g)));
                    break;
                }
            }
            report.record("phi/agrees-with-psi", Some(n), cex);
        }

        // L-action axioms, exhaustive over L_n
        let ctx = self.clone();
        let action = SimplicialAction::new(
            self.ses.l.clone(),
            self.bk.clone(),
            move |n, l: &ElemId, k: &BarSimplex| {
                ctx.semidirect_action(n, *l, k)
                    .expect("semidirect action within certified range")
            },
        );
        let l_view = self.ses.l.clone();
        let elems = move |n: usize| l_view.level(n).elements().collect::<Vec<_>>();
        let degree_max = (self.cutoff.max(1) - 1).min(3);
        absorb_prefixed(
            &mut *report,
            "sd-action",
            validate_action(&action, &elems, degree_max)?,
        );

        // the ΩBL-action factors through ΩBL → L, ⟨l_n|…⟩ ↦ l_n⁻¹
        for n in 1..=degree_max {
            let mut cex = None;
            'fac: for gen in self.loops_bl.generators(n) {
                let word = self.loops_bl.generator(n, &gen)?;
                let l_elem = loop_to_group(&self.ses.l, n, &word);
                for k in self.bk.simplices(n) {
                    if self.act_word(n, &word, &k)? != self.semidirect_action(n, l_elem, &k)? {
                        cex = Some(format!(
                            "factorization fails at generator {}, k = {}",
                            self.bl.label(n + 1, &gen),
                            self.bk.label(n, &k)
                        ));
                        break 'fac;
                    }
                }
            }
            report.record("phi/action-factors-through-L", Some(n), cex);
        }

        let ctx = self.clone();
        let phi_map = SimplicialMap::new(
            self.bg.clone(),
            Arc::new(self.semidirect_product_view()?),
            move |n, g: &BarSimplex| ctx.phi(n, g).expect("phi total on valid section"),
        );
        absorb_prefixed(&mut *report, "phi", check_simplicial_map(&phi_map, n_max)?);
        let _ = sd;
        Ok(())
    }

    /// Deterministic walkthrough of `Ψ(𝒈)` with the intermediate α-pairs
    /// and leading products; used by the CLI demo.
    pub fn describe_psi(&self, n: usize, g: &BarSimplex) -> Result<String> {
        let mut out = String::new();
        out.push_str(&format!("Ψ on 𝒈 = {}\n", self.bg.label(n, g)));
        let ls = self.base_entries(n, g);
        for j in 0..n {
            let level = n - 1 - j;
            let (k, l) = self.alpha(level, g.entries[j])?;
            out.push_str(&format!(
                "  α(g_{level}) = (k = {}, l = {})\n",
                self.ses.k.level(level).label(k),
                self.ses.l.level(level).label(l)
            ));
        }
        for j in 1..=n {
            let p = self.leading_product(n - 1, n - j, &ls[0..j]);
            out.push_str(&format!(
                "  P_{j} = {} (level {}), σ(P_{j}) = {}\n",
                self.ses.l.level(n - j).label(p),
                n - j,
                self.ses.g.level(n - j).label(self.sigma(n - j, p))
            ));
        }
        let (fibre, base) = self.psi(n, g)?;
        out.push_str(&format!(
            "  Ψ(𝒈) = ({}, {})\n",
            self.bk.label(n, &fibre),
            self.bl.label(n, &base)
        ));
        if self.multiplicative {
            let (pf, pb) = self.phi(n, g)?;
            out.push_str(&format!(
                "  Φ(𝒈) = ({}, {})\n",
                self.bk.label(n, &pf),
                self.bl.label(n, &pb)
            ));
        }
        Ok(out)
    }
}

fn absorb_prefixed(report: &mut Report, prefix: &str, mut sub: Report) {
    for check in &mut sub.checks {
        check.name = format!("{prefix}/{}", check.name);
    }
    report.absorb(sub);
}
