//! `simpfib` — verification suites for classifying-space fibrations of
//! finite simplicial groups. Exit codes: 0 all checks pass, 1 a check
//! failed with a witness, 2 usage or spec error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use simpfib::bar::{BarSimplex, BarView};
use simpfib::fibration::{FibrationContext, PseudoSection};
use simpfib::group::{ElemId, FiniteGroup, GroupHom};
use simpfib::homology::homology;
use simpfib::loop_group::LoopGroup;
use simpfib::report::Report;
use simpfib::simplicial::{
    check_simplicial_identities, ShortExactSequence, SimplicialGroupView, SimplicialSet,
    TabulatedSimplicialSet,
};
use simpfib::specfile::{parse_ses, BuiltSes};
use simpfib::twisted::{validate_twisting, TwistingFunction};

#[derive(Parser)]
#[command(name = "simpfib", version, about = "verify fibrations of classifying spaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Top simplex dimension to verify.
    #[arg(long, default_value_t = 3)]
    max_dim: usize,
    /// Seed for the sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of sampled random words per dimension.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores; SIMPFIB_JOBS overrides).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a short exact sequence end to end (theorem suite).
    VerifySes {
        #[command(flatten)]
        common: Common,
        /// SES spec file (JSON).
        #[arg(long)]
        ses: PathBuf,
    },
    /// Verify the twisting-function axioms for a group's bar construction.
    VerifyTwist {
        #[command(flatten)]
        common: Common,
        /// Group, e.g. cyclic:4, symmetric:3, dihedral:8, klein, trivial.
        #[arg(long)]
        group: String,
        /// canonical = τ_G into the group, loop = τ^X into ΩBG.
        #[arg(long, value_enum, default_value_t = Which::Canonical)]
        which: Which,
        /// Negative control: corrupt one face-table entry, "n,i,idx,target".
        #[arg(long)]
        corrupt_face: Option<String>,
        /// Negative control: perturb one twisting value.
        #[arg(long, default_value_t = false)]
        corrupt_twist: bool,
    },
    /// Integer homology of BG or of the twisted product.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, conflicts_with = "group")]
        ses: Option<PathBuf>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long, value_enum, default_value_t = Space::Bar)]
        space: Space,
    },
    /// Worked low-dimensional examples with intermediate values.
    Demo {
        /// Bundled example name (z4 or s3).
        #[arg(long)]
        example: Option<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// List the bundled examples.
        #[arg(long, default_value_t = false)]
        list: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Canonical,
    Loop,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Space {
    Bar,
    Twisted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.cmd {
        Cmd::VerifySes { common, ses } => {
            configure_jobs(&common)?;
            let report = verify_ses(&common, &ses)?;
            emit_report(&common, &report)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Cmd::VerifyTwist {
            common,
            group,
            which,
            corrupt_face,
            corrupt_twist,
        } => {
            configure_jobs(&common)?;
            let report = verify_twist(&common, &group, which, corrupt_face.as_deref(), corrupt_twist)?;
            emit_report(&common, &report)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
        Cmd::Homology {
            common,
            ses,
            group,
            space,
        } => {
            configure_jobs(&common)?;
            let output = run_homology(&common, ses.as_deref(), group.as_deref(), space)?;
            write_output(&common, &output)?;
            Ok(0)
        }
        Cmd::Demo { example, dim, list } => {
            if list {
                println!("z4  1 → Z/2 → Z/4 → Z/2 → 1 (non-split, coset section)");
                println!("s3  1 → Z/3 → S3 → Z/2 → 1 (split, multiplicative section)");
                return Ok(0);
            }
            let name = example.ok_or_else(|| anyhow::anyhow!("--example or --list required"))?;
            print!("{}", demo(&name, dim)?);
            Ok(0)
        }
    }
}

fn configure_jobs(common: &Common) -> anyhow::Result<()> {
    let jobs = match std::env::var("SIMPFIB_JOBS") {
        Ok(v) => Some(v.parse::<usize>().map_err(|_| {
            anyhow::anyhow!("SIMPFIB_JOBS must be a positive integer, got {v:?}")
        })?),
        Err(_) => common.jobs,
    };
    if let Some(j) = jobs {
        if j == 0 {
            anyhow::bail!("--jobs must be at least 1");
        }
        // ignore AlreadyInitialized in tests that call run() twice
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    Ok(())
}

fn emit_report(common: &Common, report: &Report) -> anyhow::Result<()> {
    let rendered = match common.format {
        Format::Text => report.render_text(),
        Format::Json => serde_json::to_string_pretty(report)? + "\n",
    };
    write_output(common, &rendered)
}

fn write_output(common: &Common, text: &str) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_ses(path: &std::path::Path, max_dim: usize) -> anyhow::Result<BuiltSes> {
    let text = fs::read_to_string(path)
        .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
    let spec = parse_ses(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    spec.build(max_dim)
        .map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))
}

fn context_for(built: &BuiltSes, max_dim: usize) -> anyhow::Result<Arc<FibrationContext>> {
    let section = match &built.section_table {
        Some(table) => PseudoSection::from_constant_table(table.clone(), max_dim),
        None => PseudoSection::from_coset_policy(&built.ses)?,
    };
    Ok(FibrationContext::new(built.ses.clone(), section, max_dim)?)
}

fn verify_ses(common: &Common, path: &std::path::Path) -> anyhow::Result<Report> {
    let built = load_ses(path, common.max_dim)?;
    let ctx = context_for(&built, common.max_dim)?;
    Ok(ctx.verify_theorem(common.seed, common.samples)?)
}

/// `family:order` group descriptions for the twist/homology commands.
fn parse_group_arg(s: &str) -> anyhow::Result<FiniteGroup> {
    let (family, arg) = match s.split_once(':') {
        Some((f, a)) => (f, Some(a)),
        None => (s, None),
    };
    let num = |what: &str| -> anyhow::Result<usize> {
        arg.ok_or_else(|| anyhow::anyhow!("{family} needs {what}, e.g. {family}:4"))?
            .parse()
            .map_err(|_| anyhow::anyhow!("bad {what} in group {s:?}"))
    };
    Ok(match family {
        "trivial" => FiniteGroup::trivial(),
        "cyclic" => FiniteGroup::cyclic(num("an order")?)?,
        "symmetric" => FiniteGroup::symmetric(num("a degree")?)?,
        "dihedral" => FiniteGroup::dihedral(num("an order")?)?,
        "klein" => {
            let z2 = FiniteGroup::cyclic(2)?;
            FiniteGroup::direct_product(&z2, &z2)
        }
        other => anyhow::bail!("unknown group family {other:?}"),
    })
}

fn verify_twist(
    common: &Common,
    group: &str,
    which: Which,
    corrupt_face: Option<&str>,
    corrupt_twist: bool,
) -> anyhow::Result<Report> {
    let n = common.max_dim;
    let g = Arc::new(parse_group_arg(group)?);
    let view = Arc::new(SimplicialGroupView::constant(g.clone(), n.max(1) - 1));
    let bar = Arc::new(BarView::new(view.clone(), n)?);

    if let Some(desc) = corrupt_face {
        let parts: Vec<usize> = desc
            .split(',')
            .map(|p| p.trim().parse())
            .collect::<Result<_, _>>()
            .map_err(|_| anyhow::anyhow!("--corrupt-face wants \"n,i,idx,target\", got {desc:?}"))?;
        let [cn, ci, idx, target] = parts[..] else {
            anyhow::bail!("--corrupt-face wants four comma-separated numbers");
        };
        let mut tab = TabulatedSimplicialSet::tabulate(bar.as_ref(), n)?;
        tab.corrupt_face(cn, ci, idx, target)?;
        return Ok(check_simplicial_identities(&tab, n)?);
    }

    let mut report = check_simplicial_identities(bar.as_ref(), n)?;
    // deterministic perturbation target for the negative control
    let bad_simplex = (n >= 2 && g.order() > 1)
        .then(|| {
            // must have nontrivial top entry so that the loop twist is a
            // nonempty word
            bar.simplices(2)
                .into_iter()
                .find(|x| !bar.is_top_degenerate(x))
        })
        .flatten();
    match which {
        Which::Canonical => {
            let b = bar.clone();
            let v = view.clone();
            let tau = TwistingFunction::new(bar.clone(), view.clone(), move |m, x: &BarSimplex| {
                let val = b.canonical_twist(x).expect("positive degree");
                match &bad_simplex {
                    Some(bad) if corrupt_twist && m == 2 && x == bad => {
                        let lvl = v.level(1);
                        lvl.mul(val, if lvl.identity() == 0 { 1 } else { 0 })
                    }
                    _ => val,
                }
            });
            report.absorb(validate_twisting(&tau, n)?);
        }
        Which::Loop => {
            let loops = Arc::new(LoopGroup::new(bar.clone())?);
            let lp = loops.clone();
            let tau = TwistingFunction::new(bar, loops, move |m, x: &BarSimplex| {
                let w = lp.canonical_twist(m, x).expect("within cutoff");
                match &bad_simplex {
                    Some(bad) if corrupt_twist && m == 2 && x == bad => lp.invert(&w),
                    _ => w,
                }
            });
            report.absorb(validate_twisting(&tau, n)?);
        }
    }
    Ok(report)
}

#[derive(serde::Serialize)]
struct HomologyOutput {
    schema_version: u32,
    space: String,
    groups: Vec<simpfib::homology::HomologyGroup>,
}

fn run_homology(
    common: &Common,
    ses: Option<&std::path::Path>,
    group: Option<&str>,
    space: Space,
) -> anyhow::Result<String> {
    let n = common.max_dim;
    let (label, groups) = match (ses, group) {
        (Some(path), None) => {
            let built = load_ses(path, n.max(1))?;
            match space {
                Space::Bar => {
                    let bar = BarView::new(built.ses.g.clone(), n)?;
                    ("bar".to_string(), homology(&bar, n)?)
                }
                Space::Twisted => {
                    let ctx = context_for(&built, n)?;
                    let product = ctx.twisted_product()?;
                    ("twisted".to_string(), homology(&product, n)?)
                }
            }
        }
        (None, Some(gs)) => {
            let g = Arc::new(parse_group_arg(gs)?);
            let view = Arc::new(SimplicialGroupView::constant(g, n.max(1) - 1));
            let bar = BarView::new(view, n)?;
            ("bar".to_string(), homology(&bar, n)?)
        }
        _ => anyhow::bail!("exactly one of --ses or --group is required"),
    };
    Ok(match common.format {
        Format::Text => {
            let mut out = format!("homology of the {label} space, dims 0..{}\n", n.max(1) - 1);
            for (i, h) in groups.iter().enumerate() {
                out.push_str(&format!("  H_{i} = {}\n", h.render()));
            }
            out
        }
        Format::Json => {
            serde_json::to_string_pretty(&HomologyOutput {
                schema_version: simpfib::report::SCHEMA_VERSION,
                space: label,
                groups,
            })? + "\n"
        }
    })
}

fn labelled_cyclic(order: usize, labels: &[&str]) -> FiniteGroup {
    let mut table = Vec::with_capacity(order * order);
    for a in 0..order {
        for b in 0..order {
            table.push((a + b) % order);
        }
    }
    FiniteGroup::from_table(table, Some(labels.iter().map(|s| s.to_string()).collect()))
        .expect("cyclic table")
}

fn demo_context(name: &str, cutoff: usize) -> anyhow::Result<Arc<FibrationContext>> {
    match name {
        "z4" => {
            let z4 = Arc::new(FiniteGroup::cyclic(4)?);
            let z2k = Arc::new(FiniteGroup::cyclic(2)?);
            let z2l = Arc::new(FiniteGroup::cyclic(2)?);
            let iota = GroupHom::new(z2k, z4.clone(), vec![0, 2])?;
            let pi = GroupHom::new(z4, z2l, vec![0, 1, 0, 1])?;
            let ses = Arc::new(ShortExactSequence::constant(iota, pi, cutoff.max(1) - 1)?);
            let section = PseudoSection::from_coset_policy(&ses)?;
            Ok(FibrationContext::new(ses, section, cutoff)?)
        }
        "s3" => {
            let z3 = Arc::new(labelled_cyclic(3, &["e", "c", "c2"]));
            let z2 = Arc::new(labelled_cyclic(2, &["e", "t"]));
            let inversion = vec![vec![0, 1, 2], vec![0, 2, 1]];
            let sd = simpfib::group::semidirect(&z3, &z2, &inversion)?;
            let ses = Arc::new(ShortExactSequence::constant(sd.iota, sd.pi, cutoff.max(1) - 1)?);
            let section = PseudoSection::from_coset_policy(&ses)?;
            Ok(FibrationContext::new(ses, section, cutoff)?)
        }
        other => anyhow::bail!("unknown example {other:?} (try --list)"),
    }
}

/// Showcase simplex per example: alternating nontrivial entries, chosen so
/// the dim-2 case reproduces the worked examples from the docs.
fn demo_simplex(name: &str, dim: usize) -> Vec<ElemId> {
    let cycle: [ElemId; 2] = match name {
        "z4" => [3, 1],
        _ => [3, 4], // (c,t), (c2,e)
    };
    (0..dim).map(|t| cycle[t % 2]).collect()
}

fn demo(name: &str, dim: usize) -> anyhow::Result<String> {
    let cutoff = (dim + 1).max(2);
    let ctx = demo_context(name, cutoff)?;
    let mut out = String::new();
    out.push_str(&match name {
        "z4" => "example z4: 1 → Z/2 → Z/4 → Z/2 → 1 (non-split)\n".to_string(),
        _ => "example s3: 1 → Z/3 → S3 → Z/2 → 1 (split)\n".to_string(),
    });
    let l0 = ctx.ses.l.level(0);
    let sigmas: Vec<String> = l0
        .elements()
        .map(|l| {
            format!(
                "σ({}) = {}",
                l0.label(l),
                ctx.ses.g.level(0).label(ctx.section.apply(0, l))
            )
        })
        .collect();
    out.push_str(&format!(
        "section (coset policy, {}): {}\n",
        if ctx.is_multiplicative() {
            "multiplicative"
        } else {
            "not multiplicative"
        },
        sigmas.join(", ")
    ));
    let g = BarSimplex::new(demo_simplex(name, dim));
    out.push_str(&ctx.describe_psi(dim, &g)?);
    if dim >= 1 {
        let (_, base) = ctx.psi(dim, &g)?;
        let w = ctx.loops_bl.canonical_twist(dim, &base)?;
        out.push_str(&format!(
            "  τ^BL({}) = {}\n",
            ctx.bl.label(dim, &base),
            ctx.loops_bl.word_label(dim - 1, &w)
        ));
        let k = ctx.bk.simplices(dim - 1)[ctx.bk.simplices(dim - 1).len() - 1].clone();
        let moved = ctx.act_word(dim - 1, &w, &k)?;
        out.push_str(&format!(
            "  action: τ^BL({})·{} = {}\n",
            ctx.bl.label(dim, &base),
            ctx.bk.label(dim - 1, &k),
            ctx.bk.label(dim - 1, &moved)
        ));
    }
    Ok(out)
}
