//! Twisting functions, group actions on simplicial sets, and twisted
//! Cartesian products `F ×_τ B` (the Cartesian product of graded sets with
//! `∂_0` twisted by `τ`), plus pseudo-cross-section validation.

use std::fmt::Debug;
use std::sync::Arc;

use crate::report::{Report, ReportConfig};
use crate::simplicial::{SimplicialGroupView, SimplicialSet};
use crate::group::ElemId;
use crate::loop_group::{LoopGroup, LoopWord};
use crate::{Error, Result};

/// A degreewise group carrier that twisting functions take values in:
/// either a simplicial group (elements are ids) or a loop group (elements
/// are reduced words).
pub trait TwistCarrier: Send + Sync {
    type Elem: Clone + Eq + Debug + Send + Sync;

    fn identity(&self, n: usize) -> Self::Elem;
    fn multiply(&self, n: usize, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn invert(&self, n: usize, a: &Self::Elem) -> Self::Elem;
    fn face(&self, i: usize, n: usize, a: &Self::Elem) -> Self::Elem;
    fn degeneracy(&self, i: usize, n: usize, a: &Self::Elem) -> Self::Elem;
    fn elem_label(&self, n: usize, a: &Self::Elem) -> String;
}

impl TwistCarrier for SimplicialGroupView {
    type Elem = ElemId;

    fn identity(&self, n: usize) -> ElemId {
        self.level(n).identity()
    }

    fn multiply(&self, n: usize, a: &ElemId, b: &ElemId) -> ElemId {
        self.level(n).mul(*a, *b)
    }

    fn invert(&self, n: usize, a: &ElemId) -> ElemId {
        self.level(n).inv(*a)
    }

    fn face(&self, i: usize, n: usize, a: &ElemId) -> ElemId {
        self.face_apply(i, n, *a)
    }

    fn degeneracy(&self, i: usize, n: usize, a: &ElemId) -> ElemId {
        self.degeneracy_apply(i, n, *a)
    }

    fn elem_label(&self, n: usize, a: &ElemId) -> String {
        self.level(n).label(*a).to_string()
    }
}

impl<X: SimplicialSet> TwistCarrier for LoopGroup<X> {
    type Elem = LoopWord<X::Simplex>;

    fn identity(&self, n: usize) -> Self::Elem {
        LoopGroup::identity(self, n)
    }

    fn multiply(&self, n: usize, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let _ = n;
        LoopGroup::multiply(self, a, b).expect("degree mismatch in carrier multiply")
    }

    fn invert(&self, _n: usize, a: &Self::Elem) -> Self::Elem {
        LoopGroup::invert(self, a)
    }

    fn face(&self, i: usize, n: usize, a: &Self::Elem) -> Self::Elem {
        LoopGroup::face(self, i, n, a).expect("loop face out of range")
    }

    fn degeneracy(&self, i: usize, n: usize, a: &Self::Elem) -> Self::Elem {
        LoopGroup::degeneracy(self, i, n, a).expect("loop degeneracy out of range")
    }

    fn elem_label(&self, n: usize, a: &Self::Elem) -> String {
        self.word_label(n, a)
    }
}

/// A collection of maps `τ: B_n → Γ_{n-1}` (`n ≥ 1`), subject to the four
/// twisting axioms checked by [`validate_twisting`].
pub struct TwistingFunction<B: SimplicialSet, C: TwistCarrier> {
    pub base: Arc<B>,
    pub carrier: Arc<C>,
    value: Box<dyn Fn(usize, &B::Simplex) -> C::Elem + Send + Sync>,
}

impl<B: SimplicialSet, C: TwistCarrier> TwistingFunction<B, C> {
    pub fn new(
        base: Arc<B>,
        carrier: Arc<C>,
        value: impl Fn(usize, &B::Simplex) -> C::Elem + Send + Sync + 'static,
    ) -> Self {
        TwistingFunction {
            base,
            carrier,
            value: Box::new(value),
        }
    }

    /// `τ(b)` for an `n`-simplex `b`, landing in `Γ_{n-1}`.
    pub fn value(&self, n: usize, b: &B::Simplex) -> C::Elem {
        (self.value)(n, b)
    }
}

/// Exhaustively check the four twisting-function axioms on all base
/// simplices of dimension `≤ n_max`:
///   1. `∂_0 τ(b) = τ(∂_0 b)⁻¹ τ(∂_1 b)`
///   2. `∂_i τ(b) = τ(∂_{i+1} b)` for `1 ≤ i ≤ n−1`
///   3. `s_i τ(b) = τ(s_{i+1} b)` for `0 ≤ i ≤ n−1`
///   4. `τ(s_0 b) = 1_n`
pub fn validate_twisting<B: SimplicialSet, C: TwistCarrier>(
    tau: &TwistingFunction<B, C>,
    n_max: usize,
) -> Result<Report> {
    if n_max > tau.base.cutoff() {
        return Err(Error::CutoffExceeded {
            required: n_max,
            available: tau.base.cutoff(),
        });
    }
    let base = &tau.base;
    let carrier = &tau.carrier;
    let mut report = Report::new(
        "twisting-function",
        ReportConfig {
            max_dim: n_max,
            ..Default::default()
        },
    );
    for n in 2..=n_max {
        let mut cex1 = None;
        let mut cex2 = None;
        for b in base.simplices(n) {
            let t = tau.value(n, &b);
            if cex1.is_none() {
                let lhs = carrier.face(0, n - 1, &t);
                let rhs = carrier.multiply(
                    n - 2,
                    &carrier.invert(n - 2, &tau.value(n - 1, &base.face(0, n, &b))),
                    &tau.value(n - 1, &base.face(1, n, &b)),
                );
                if lhs != rhs {
                    cex1 = Some(format!(
                        "∂_0τ(b) ≠ τ(∂_0b)⁻¹τ(∂_1b) at b = {}",
                        base.label(n, &b)
                    ));
                }
            }
            if cex2.is_none() {
                for i in 1..n {
                    if carrier.face(i, n - 1, &t)
                        != tau.value(n - 1, &base.face(i + 1, n, &b))
                    {
                        cex2 = Some(format!(
                            "∂_{i}τ(b) ≠ τ(∂_{}b) at b = {}",
                            i + 1,
                            base.label(n, &b)
                        ));
                        break;
                    }
                }
            }
        }
        report.record("axiom-1-face-0", Some(n), cex1);
        report.record("axiom-2-inner-faces", Some(n), cex2);
    }
    for n in 1..n_max {
        let mut cex3 = None;
        for b in base.simplices(n) {
            let t = tau.value(n, &b);
            for i in 0..n {
                if carrier.degeneracy(i, n - 1, &t)
                    != tau.value(n + 1, &base.degeneracy(i + 1, n, &b))
                {
                    cex3 = Some(format!(
                        "s_{i}τ(b) ≠ τ(s_{}b) at b = {}",
                        i + 1,
                        base.label(n, &b)
                    ));
                    break;
                }
            }
            if cex3.is_some() {
                break;
            }
        }
        report.record("axiom-3-degeneracies", Some(n), cex3);
    }
    for n in 0..n_max {
        let mut cex4 = None;
        for b in base.simplices(n) {
            let s0 = base.degeneracy(0, n, &b);
            if tau.value(n + 1, &s0) != carrier.identity(n) {
                cex4 = Some(format!("τ(s_0 b) ≠ 1 at b = {}", base.label(n, &b)));
                break;
            }
        }
        report.record("axiom-4-s0-normalization", Some(n), cex4);
    }
    Ok(report)
}

/// A degreewise left action of a carrier on a simplicial set.
pub struct SimplicialAction<C: TwistCarrier, F: SimplicialSet> {
    pub carrier: Arc<C>,
    pub space: Arc<F>,
    apply: Box<dyn Fn(usize, &C::Elem, &F::Simplex) -> F::Simplex + Send + Sync>,
}

impl<C: TwistCarrier, F: SimplicialSet> SimplicialAction<C, F> {
    pub fn new(
        carrier: Arc<C>,
        space: Arc<F>,
        apply: impl Fn(usize, &C::Elem, &F::Simplex) -> F::Simplex + Send + Sync + 'static,
    ) -> Self {
        SimplicialAction {
            carrier,
            space,
            apply: Box::new(apply),
        }
    }

    pub fn apply(&self, n: usize, gamma: &C::Elem, f: &F::Simplex) -> F::Simplex {
        (self.apply)(n, gamma, f)
    }
}

/// Check the action axioms `1·f = f`, `(γγ')·f = γ·(γ'·f)`,
/// `∂_i(γ·f) = ∂_iγ·∂_if` and `s_i(γ·f) = s_iγ·s_if`, quantifying over the
/// carrier elements supplied by `elems` per degree (exhaustive for finite
/// carriers, generators plus sampled words for loop groups).
pub fn validate_action<C: TwistCarrier, F: SimplicialSet>(
    action: &SimplicialAction<C, F>,
    elems: &dyn Fn(usize) -> Vec<C::Elem>,
    n_max: usize,
) -> Result<Report> {
    if n_max > action.space.cutoff() {
        return Err(Error::CutoffExceeded {
            required: n_max,
            available: action.space.cutoff(),
        });
    }
    let carrier = &action.carrier;
    let space = &action.space;
    let mut report = Report::new(
        "simplicial-action",
        ReportConfig {
            max_dim: n_max,
            ..Default::default()
        },
    );
    for n in 0..=n_max {
        let gammas = elems(n);
        let fs = space.simplices(n);
        let mut cex_unit = None;
        let one = carrier.identity(n);
        for f in &fs {
            if action.apply(n, &one, f) != *f {
                cex_unit = Some(format!("1·f ≠ f at f = {}", space.label(n, f)));
                break;
            }
        }
        report.record("action-unit", Some(n), cex_unit);

        let mut cex_assoc = None;
        'assoc: for a in &gammas {
            for b in &gammas {
                let ab = carrier.multiply(n, a, b);
                for f in &fs {
                    if action.apply(n, &ab, f) != action.apply(n, a, &action.apply(n, b, f)) {
                        cex_assoc = Some(format!(
                            "(γγ')·f ≠ γ·(γ'·f) at γ = {}, γ' = {}, f = {}",
                            carrier.elem_label(n, a),
                            carrier.elem_label(n, b),
                            space.label(n, f)
                        ));
                        break 'assoc;
                    }
                }
            }
        }
        report.record("action-compatibility", Some(n), cex_assoc);

        if n >= 1 {
            let mut cex = None;
            'faces: for a in &gammas {
                for f in &fs {
                    let af = action.apply(n, a, f);
                    for i in 0..=n {
                        let lhs = space.face(i, n, &af);
                        let rhs = action.apply(
                            n - 1,
                            &carrier.face(i, n, a),
                            &space.face(i, n, f),
                        );
                        if lhs != rhs {
                            cex = Some(format!(
                                "∂_{i}(γ·f) ≠ ∂_{i}γ·∂_{i}f at γ = {}, f = {}",
                                carrier.elem_label(n, a),
                                space.label(n, f)
                            ));
                            break 'faces;
                        }
                    }
                }
            }
            report.record("action-faces", Some(n), cex);
        }
        if n < n_max {
            let mut cex = None;
            'degs: for a in &gammas {
                for f in &fs {
                    let af = action.apply(n, a, f);
                    for i in 0..=n {
                        let lhs = space.degeneracy(i, n, &af);
                        let rhs = action.apply(
                            n + 1,
                            &carrier.degeneracy(i, n, a),
                            &space.degeneracy(i, n, f),
                        );
                        if lhs != rhs {
                            cex = Some(format!(
                                "s_{i}(γ·f) ≠ s_{i}γ·s_{i}f at γ = {}, f = {}",
                                carrier.elem_label(n, a),
                                space.label(n, f)
                            ));
                            break 'degs;
                        }
                    }
                }
            }
            report.record("action-degeneracies", Some(n), cex);
        }
    }
    Ok(report)
}

/// The twisted Cartesian product `F ×_τ B`: componentwise structure maps
/// except `∂_0(f,b) = (τ(b)·∂_0 f, ∂_0 b)`.
pub struct TwistedProduct<F: SimplicialSet, B: SimplicialSet, C: TwistCarrier> {
    pub fibre: Arc<F>,
    pub tau: TwistingFunction<B, C>,
    pub action: SimplicialAction<C, F>,
    cutoff: usize,
}

impl<F: SimplicialSet, B: SimplicialSet, C: TwistCarrier> TwistedProduct<F, B, C> {
    /// Builds the product after re-checking the twisting axioms; axiom
    /// failures abort construction. Action axioms are the caller's
    /// responsibility (see [`validate_action`]; a loop-group carrier cannot
    /// be checked exhaustively here).
    pub fn new(
        fibre: Arc<F>,
        tau: TwistingFunction<B, C>,
        action: SimplicialAction<C, F>,
        cutoff: usize,
    ) -> Result<Self> {
        let twist_report = validate_twisting(&tau, cutoff)?;
        if !twist_report.passed() {
            let first = twist_report.failures().next().unwrap();
            return Err(Error::InvalidSpec(format!(
                "twisting axioms fail: {} — {}",
                first.name,
                first.counterexample.as_deref().unwrap_or("")
            )));
        }
        if cutoff > fibre.cutoff() {
            return Err(Error::CutoffExceeded {
                required: cutoff,
                available: fibre.cutoff(),
            });
        }
        Ok(TwistedProduct {
            fibre,
            tau,
            action,
            cutoff,
        })
    }

    pub fn base(&self) -> &Arc<B> {
        &self.tau.base
    }
}

impl<F: SimplicialSet, B: SimplicialSet, C: TwistCarrier> SimplicialSet
    for TwistedProduct<F, B, C>
{
    type Simplex = (F::Simplex, B::Simplex);

    fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn simplices(&self, n: usize) -> Vec<Self::Simplex> {
        let bs = self.tau.base.simplices(n);
        let mut out = Vec::new();
        for f in self.fibre.simplices(n) {
            for b in &bs {
                out.push((f.clone(), b.clone()));
            }
        }
        out
    }

    fn face(&self, i: usize, n: usize, x: &Self::Simplex) -> Self::Simplex {
        let (f, b) = x;
        if i == 0 {
            let twisted = self
                .action
                .apply(n - 1, &self.tau.value(n, b), &self.fibre.face(0, n, f));
            (twisted, self.tau.base.face(0, n, b))
        } else {
            (self.fibre.face(i, n, f), self.tau.base.face(i, n, b))
        }
    }

    fn degeneracy(&self, i: usize, n: usize, x: &Self::Simplex) -> Self::Simplex {
        let (f, b) = x;
        (
            self.fibre.degeneracy(i, n, f),
            self.tau.base.degeneracy(i, n, b),
        )
    }

    fn label(&self, n: usize, x: &Self::Simplex) -> String {
        format!(
            "({}, {})",
            self.fibre.label(n, &x.0),
            self.tau.base.label(n, &x.1)
        )
    }
}

/// Check that a per-degree map `σ: B → F ×_τ B` is a pseudo-cross section
/// of the canonical projection: `πσ = id`, `∂_iσ = σ∂_i` for `i ≥ 1`, and
/// `s_iσ = σs_i`. Whether `∂_0σ = σ∂_0` also holds (making σ an honest
/// cross section) is reported as a separate record.
pub fn validate_pseudo_cross_section<F: SimplicialSet, B: SimplicialSet, C: TwistCarrier>(
    product: &TwistedProduct<F, B, C>,
    sigma: &dyn Fn(usize, &B::Simplex) -> (F::Simplex, B::Simplex),
    n_max: usize,
) -> Result<Report> {
    if n_max > product.cutoff() {
        return Err(Error::CutoffExceeded {
            required: n_max,
            available: product.cutoff(),
        });
    }
    let base = &product.tau.base;
    let mut report = Report::new(
        "pseudo-cross-section",
        ReportConfig {
            max_dim: n_max,
            ..Default::default()
        },
    );
    for n in 0..=n_max {
        let bs = base.simplices(n);
        let mut cex_proj = None;
        for b in &bs {
            if sigma(n, b).1 != *b {
                cex_proj = Some(format!("πσ(b) ≠ b at b = {}", base.label(n, b)));
                break;
            }
        }
        report.record("projection-section", Some(n), cex_proj);

        if n >= 1 {
            let mut cex0 = None;
            let mut cex = None;
            for b in &bs {
                let sb = sigma(n, b);
                for i in 0..=n {
                    if product.face(i, n, &sb) != sigma(n - 1, &base.face(i, n, b)) {
                        let w = format!("∂_{i} at b = {}", base.label(n, b));
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
        if n < n_max {
            let mut cex = None;
            'dg: for b in &bs {
                let sb = sigma(n, b);
                for i in 0..=n {
                    if product.degeneracy(i, n, &sb) != sigma(n + 1, &base.degeneracy(i, n, b)) {
                        cex = Some(format!("s_{i} at b = {}", base.label(n, b)));
                        break 'dg;
                    }
                }
            }
            report.record("commutes-with-degeneracies", Some(n), cex);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bar::BarView;
    use crate::group::FiniteGroup;
    use crate::simplicial::check_simplicial_identities;

    fn bar_z4(n: usize) -> Arc<BarView> {
        let g = Arc::new(SimplicialGroupView::constant(
            Arc::new(FiniteGroup::cyclic(4).unwrap()),
            n.max(1) - 1,
        ));
        Arc::new(BarView::new(g, n).unwrap())
    }

    fn canonical_tau(
        b: Arc<BarView>,
    ) -> TwistingFunction<BarView, SimplicialGroupView> {
        let carrier = b.group().clone();
        let bb = b.clone();
        TwistingFunction::new(b, carrier, move |n, x| {
            let _ = n;
            bb.canonical_twist(x).unwrap()
        })
    }

    #[test]
    fn canonical_twist_satisfies_axioms() {
        let b = bar_z4(5);
        let report = validate_twisting(&canonical_tau(b), 5).unwrap();
        assert!(report.passed(), "{}", report.render_text());
    }

    #[test]
    fn corrupted_twist_fails_with_witness() {
        let b = bar_z4(4);
        let carrier = b.group().clone();
        let bb = b.clone();
        let tau = TwistingFunction::new(b, carrier, move |n, x: &crate::bar::BarSimplex| {
            let v = bb.canonical_twist(x).unwrap();
            // corrupt a single value
            if n == 2 && x.entries == vec![1, 2] {
                bb.group().level(n - 1).mul(v, 1)
            } else {
                v
            }
        });
        let report = validate_twisting(&tau, 4).unwrap();
        assert!(!report.passed());
        let failure = report.failures().next().unwrap();
        assert!(failure.counterexample.is_some());
    }

    #[test]
    fn trivial_twist_gives_plain_product() {
        let b = bar_z4(3);
        let f = bar_z4(3);
        let carrier = b.group().clone();
        let tau = TwistingFunction::new(b.clone(), carrier.clone(), {
            let c = carrier.clone();
            move |n, _x: &crate::bar::BarSimplex| c.level(n - 1).identity()
        });
        let action = SimplicialAction::new(carrier.clone(), f.clone(), {
            let f = f.clone();
            move |_n, _g: &ElemId, x: &crate::bar::BarSimplex| {
                let _ = &f;
                x.clone()
            }
        });
        let prod = TwistedProduct::new(f.clone(), tau, action, 3).unwrap();
        assert_eq!(prod.simplices(2).len(), 16 * 16);
        // all structure maps componentwise, ∂_0 included (trivial twist)
        for n in 1..=3usize {
            for (fx, bx) in prod.simplices(n) {
                for i in 0..=n {
                    let got = prod.face(i, n, &(fx.clone(), bx.clone()));
                    assert_eq!(got, (f.face(i, n, &fx), b.face(i, n, &bx)));
                }
            }
        }
        let report = check_simplicial_identities(&prod, 3).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn honest_section_over_trivial_twist() {
        let b = bar_z4(3);
        let one = Arc::new(SimplicialGroupView::constant(
            Arc::new(FiniteGroup::trivial()),
            2,
        ));
        let f = Arc::new(BarView::new(one.clone(), 3).unwrap());
        let carrier = b.group().clone();
        let tau = TwistingFunction::new(b.clone(), carrier.clone(), {
            let c = carrier.clone();
            move |n, _x: &crate::bar::BarSimplex| c.level(n - 1).identity()
        });
        let action = SimplicialAction::new(
            carrier,
            f.clone(),
            |_n, _g: &ElemId, x: &crate::bar::BarSimplex| x.clone(),
        );
        let prod = TwistedProduct::new(f.clone(), tau, action, 3).unwrap();
        let report = validate_pseudo_cross_section(
            &prod,
            &|n, bx| (crate::bar::BarSimplex::new(vec![0; n]), bx.clone()),
            3,
        )
        .unwrap();
        assert!(report.passed(), "{}", report.render_text());
    }
}
