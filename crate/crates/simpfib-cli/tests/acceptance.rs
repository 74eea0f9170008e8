//! Acceptance suite: one test per criterion, each ending with a single
//! `criterion N: pass` line. Everything here is exact integer equality —
//! zero tolerance, pinned seeds.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;

use simpfib::bar::{BarSimplex, BarView};
use simpfib::fibration::{FibrationContext, PseudoSection};
use simpfib::group::FiniteGroup;
use simpfib::homology::{homology, HomologyGroup};
use simpfib::loop_group::{loop_to_group, LoopGroup};
use simpfib::report::Report;
use simpfib::simplicial::{SimplicialGroupView, SimplicialSet};
use simpfib::specfile::parse_ses;
use simpfib::twisted::{validate_twisting, TwistingFunction};

fn specs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn context_from_spec(name: &str, cutoff: usize) -> Arc<FibrationContext> {
    let text = std::fs::read_to_string(specs_dir().join(name)).expect("bundled spec");
    let built = parse_ses(&text).unwrap().build(cutoff).unwrap();
    let section = PseudoSection::from_coset_policy(&built.ses).unwrap();
    FibrationContext::new(built.ses, section, cutoff).unwrap()
}

fn constant_bar(g: FiniteGroup, cutoff: usize) -> Arc<BarView> {
    let view = Arc::new(SimplicialGroupView::constant(Arc::new(g), cutoff.max(1) - 1));
    Arc::new(BarView::new(view, cutoff).unwrap())
}

fn assert_all_pass(report: &Report) {
    let failures: Vec<String> = report
        .failures()
        .map(|c| {
            format!(
                "{} [dim {:?}]: {}",
                c.name,
                c.dimension,
                c.counterexample.as_deref().unwrap_or("")
            )
        })
        .collect();
    assert!(failures.is_empty(), "failed checks: {failures:?}");
}

/// Criterion 1: main theorem for the non-split sequence
/// 1 → ℤ/2 → ℤ/4 → ℤ/2 → 1 at N = 4, exhaustively.
#[test]
fn criterion_1_nonsplit_theorem() {
    let ctx = context_from_spec("z4.json", 4);
    assert!(!ctx.is_multiplicative(), "coset section of Z/4 must not split");
    for n in 0..=4usize {
        assert_eq!(ctx.bg.simplices(n).len(), 4usize.pow(n as u32));
        assert_eq!(
            ctx.bg.simplices(n).len(),
            ctx.bk.simplices(n).len() * ctx.bl.simplices(n).len()
        );
    }
    let report = ctx.verify_theorem(0, 1000).unwrap();
    assert_all_pass(&report);
    assert!(report.checks.iter().any(|c| c.name == "psi/bijective" && c.dimension == Some(4)));
    println!("criterion 1: pass");
}

/// Criterion 2: main theorem for the split sequence 1 → ℤ/3 → S₃ → ℤ/2 → 1
/// at N = 3; Φ applies and agrees with Ψ on every simplex.
#[test]
fn criterion_2_split_theorem() {
    let ctx = context_from_spec("s3_split.json", 3);
    assert!(ctx.is_multiplicative(), "coset section of the semidirect product splits");
    let report = ctx.verify_theorem(0, 1000).unwrap();
    assert_all_pass(&report);
    assert!(report.checks.iter().any(|c| c.name == "phi/agrees-with-psi"));
    for n in 0..=3usize {
        for g in ctx.bg.simplices(n) {
            assert_eq!(ctx.phi(n, &g).unwrap(), ctx.psi(n, &g).unwrap());
        }
    }
    println!("criterion 2: pass");
}

/// Criterion 3: the ΩBL-action is well defined (s_0-degenerate generators
/// act as the identity) and satisfies the action axioms, exhaustively on
/// generator pairs and on 1,000 seeded random words, for n ≤ 3 on both
/// test sequences.
#[test]
fn criterion_3_action_axioms() {
    for name in ["z4.json", "s3_split.json"] {
        // cutoff 4 so that action degrees reach 3
        let ctx = context_from_spec(name, 4);
        let report = ctx.verify_theorem(0, 1000).unwrap();
        assert_all_pass(&report);
        for n in 1..=3usize {
            for check in [
                "action/degenerate-generators-trivial",
                "action/action-compatibility",
                "action/sampled-inverses",
                "action/sampled-compatibility",
            ] {
                assert!(
                    report.checks.iter().any(|c| c.name == check && c.dimension == Some(n)),
                    "{name}: missing {check} at dim {n}"
                );
            }
        }
    }
    println!("criterion 3: pass");
}

/// Criterion 4: τ_G satisfies all four twisting axioms for
/// G ∈ {ℤ/4, S₃, ℤ/2×ℤ/2} at N = 5, and τ^{BL} for L ∈ {ℤ/2, ℤ/3} at
/// N = 4. Exhaustive.
#[test]
fn criterion_4_twisting_axioms() {
    let klein = {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        FiniteGroup::direct_product(&z2, &z2)
    };
    for g in [
        FiniteGroup::cyclic(4).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
        klein,
    ] {
        let bar = constant_bar(g, 5);
        let carrier = bar.group().clone();
        let b = bar.clone();
        let tau = TwistingFunction::new(bar, carrier, move |_n, x: &BarSimplex| {
            b.canonical_twist(x).unwrap()
        });
        assert_all_pass(&validate_twisting(&tau, 5).unwrap());
    }
    for order in [2usize, 3] {
        let bar = constant_bar(FiniteGroup::cyclic(order).unwrap(), 4);
        let loops = Arc::new(LoopGroup::new(bar.clone()).unwrap());
        let lp = loops.clone();
        let tau = TwistingFunction::new(bar, loops, move |n, x: &BarSimplex| {
            lp.canonical_twist(n, x).unwrap()
        });
        assert_all_pass(&validate_twisting(&tau, 4).unwrap());
    }
    println!("criterion 4: pass");
}

/// Criterion 5: the canonical morphism ΩBG → G, ⟨g_n|…⟩ ↦ g_n⁻¹, is a
/// homomorphism commuting with all structure maps on generators, for
/// G ∈ {ℤ/4, S₃} and degrees ≤ 3.
#[test]
fn criterion_5_canonical_morphism() {
    for g in [FiniteGroup::cyclic(4).unwrap(), FiniteGroup::symmetric(3).unwrap()] {
        let bar = constant_bar(g, 4);
        let view = bar.group().clone();
        let loops = LoopGroup::new(bar.clone()).unwrap();
        for n in 0..=3usize {
            let words: Vec<_> = bar
                .simplices(n + 1)
                .iter()
                .map(|x| loops.generator(n, x).unwrap())
                .collect();
            for w in &words {
                for v in &words {
                    let wv = loops.multiply(w, v).unwrap();
                    assert_eq!(
                        loop_to_group(&view, n, &wv),
                        view.level(n).mul(loop_to_group(&view, n, w), loop_to_group(&view, n, v))
                    );
                }
                if n >= 1 {
                    for i in 0..=n {
                        let lhs = loop_to_group(&view, n - 1, &loops.face(i, n, w).unwrap());
                        assert_eq!(lhs, view.face_apply(i, n, loop_to_group(&view, n, w)));
                    }
                }
                if n < 3 {
                    for i in 0..=n {
                        let lhs = loop_to_group(&view, n + 1, &loops.degeneracy(i, n, w).unwrap());
                        assert_eq!(lhs, view.degeneracy_apply(i, n, loop_to_group(&view, n, w)));
                    }
                }
            }
        }
    }
    println!("criterion 5: pass");
}

/// Criterion 6: classical homology values from the in-repo Smith oracle,
/// and H_i(BG) = H_i(BK ×_{τ^{BL}} BL) for i ≤ 2 on both test sequences.
#[test]
fn criterion_6_homology() {
    let h = |g: FiniteGroup, n: usize| homology(constant_bar(g, n).as_ref(), n).unwrap();
    let tz = |d: i64| HomologyGroup {
        betti: 0,
        torsion: vec![num_bigint::BigInt::from(d)],
    };
    assert_eq!(h(FiniteGroup::cyclic(4).unwrap(), 2)[1], tz(4));
    assert_eq!(h(FiniteGroup::symmetric(3).unwrap(), 2)[1], tz(2));
    let klein = {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        FiniteGroup::direct_product(&z2, &z2)
    };
    assert_eq!(
        h(klein, 2)[1],
        HomologyGroup {
            betti: 0,
            torsion: vec![num_bigint::BigInt::from(2), num_bigint::BigInt::from(2)],
        }
    );
    assert_eq!(h(FiniteGroup::cyclic(2).unwrap(), 4)[3], tz(2));

    for name in ["z4.json", "s3_split.json"] {
        let ctx = context_from_spec(name, 3);
        let bar_h = homology(ctx.bg.as_ref(), 3).unwrap();
        let twisted_h = homology(&ctx.twisted_product().unwrap(), 3).unwrap();
        assert_eq!(bar_h, twisted_h, "{name}: H_i(BG) ≠ H_i(BK ×_τ BL)");
    }
    println!("criterion 6: pass");
}

/// Criterion 7: negative controls — a corrupted face table, a
/// non-normalized section, and a corrupted twisting value each yield a
/// localized failure record with a concrete counterexample and exit 1.
#[test]
fn criterion_7_negative_controls() {
    let bin = env!("CARGO_BIN_EXE_simpfib");

    let out = Command::new(bin)
        .args(["verify-twist", "--group", "cyclic:4", "--which", "canonical",
               "--max-dim", "3", "--corrupt-face", "2,1,3,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL face-degeneracy"), "{text}");
    assert!(text.contains("mismatch at"), "witness missing: {text}");

    let dir = std::env::temp_dir().join("simpfib-acceptance");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("z4_bad_section.json");
    std::fs::write(
        &bad,
        r#"{"G":{"kind":"cyclic","order":4},"K_elements":[0,2],"section":[2,1]}"#,
    )
    .unwrap();
    let out = Command::new(bin)
        .args(["verify-ses", "--ses", bad.to_str().unwrap(), "--max-dim", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL section/sigma-of-identity"), "{text}");

    for which in ["canonical", "loop"] {
        let out = Command::new(bin)
            .args(["verify-twist", "--group", "cyclic:4", "--which", which,
                   "--max-dim", "3", "--corrupt-twist"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1), "which = {which}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("FAIL axiom-"), "{which}: {text}");
        assert!(text.contains("at b = "), "{which} witness missing: {text}");
    }
    println!("criterion 7: pass");
}
