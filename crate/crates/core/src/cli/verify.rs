use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::commands::{figure_chain, ChainSolver, ChainVariant, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::boxes::{direct_sum, kcbs, pr_box, tensor, tensor_power, ChannelMixture, XorFamily};
use crate::closed_form::{chi, cost_isotropic, quantum_chain_alpha, xu_chain, xu_isotropic};
use crate::entropy::{verify_equivalence, x_max, x_u, x_u_isotropic_reduced, ContextWeights, SolverOptions};
use crate::error::{Error, Result};
use crate::ks::{beta, beta_scalar_identity_check, verify_bounds_by_lp};
use crate::polytope::{contextuality_cost, is_noncontextual};
use crate::random::{random_consistent_box, random_small_box, triangle_xor_box};
use crate::symmetry::{builtin_generators, chain_generators, invariant_set_check};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Golden,
    Properties,
    Equivalence,
    Additivity,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "golden" => Ok(Suite::Golden),
            "properties" => Ok(Suite::Properties),
            "equivalence" => Ok(Suite::Equivalence),
            "additivity" => Ok(Suite::Additivity),
            _ => Err(Error::InvalidParameter(format!("unknown suite `{s}`"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Golden => "golden",
            Suite::Properties => "properties",
            Suite::Equivalence => "equivalence",
            Suite::Additivity => "additivity",
        })
    }
}

/// One pass/fail line of a verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn close(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        let err = (value - expected).abs();
        Check {
            name: name.into(),
            passed: err <= tol,
            detail: format!("value={value:.12} expected={expected:.12} err={err:.3e} tol={tol:.0e}"),
        }
    }

    pub fn holds(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn run_suite(suite: Suite, seed: u64, samples: usize) -> Result<Vec<Check>> {
    match suite {
        Suite::Golden => golden(),
        Suite::Properties => properties(seed, samples),
        Suite::Equivalence => equivalence(seed, samples),
        Suite::Additivity => additivity(),
    }
}

fn tight() -> SolverOptions {
    SolverOptions::with_tol(1e-9)
}

/// Solver values against closed forms, cost LP against the cost formula,
/// and tightness of the non-contextual bounds on `beta`.
pub fn golden() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (name, family, n) in
        [("PR", XorFamily::PR, 4.0f64), ("PM", XorFamily::PeresMermin, 6.0), ("M", XorFamily::MerminStar, 5.0)]
    {
        let v = x_u(&family.extremal()?, &tight())?.value;
        out.push(Check::close(format!("xu {name}"), v, (n / (n - 1.0)).log2(), 1e-5));
    }
    for n in 3..=12 {
        let v = x_u(&XorFamily::Chain(n).extremal()?, &tight())?.value;
        out.push(Check::close(format!("xu CH{n} full"), v, xu_chain(n, 1.0)?, 1e-5));
    }
    for n in 13..=50 {
        let reference = XorFamily::Chain(n).extremal()?;
        let group = chain_generators(n)?.group()?;
        let v = x_u_isotropic_reduced(&reference, 1.0, &group, 1e-12)?;
        out.push(Check::close(format!("xu CH{n} reduced"), v, xu_chain(n, 1.0)?, 1e-9));
    }
    let a = quantum_chain_alpha(4)?;
    let chsh = x_u(&XorFamily::PR.isotropic(a)?, &tight())?.value;
    out.push(Check::close("xu CHSH quantum", chsh, chi(a, 0.75), 1e-5));
    out.push(Check::close("xu CHSH quantum rounded", chi(a, 0.75), 0.0463, 5e-5));
    out.push(Check::close("xu KCBS", x_u(&kcbs()?, &tight())?.value, 0.0466576, 1e-5));
    for family in [
        XorFamily::PR,
        XorFamily::PeresMermin,
        XorFamily::MerminStar,
        XorFamily::Chain(3),
        XorFamily::Chain(5),
        XorFamily::Chain(6),
    ] {
        let n = family.num_contexts();
        let mut worst: f64 = 0.0;
        for k in 0..=20 {
            let alpha = k as f64 / 20.0;
            let c = contextuality_cost(&family.isotropic(alpha)?, 1e-9)?.cost;
            worst = worst.max((c - cost_isotropic(n, alpha)?).abs());
        }
        out.push(Check::close(format!("cost grid {}", family.name()), worst, 0.0, 1e-7));
    }
    for family in
        [XorFamily::PR, XorFamily::PeresMermin, XorFamily::MerminStar].into_iter().chain((3..=8).map(XorFamily::Chain))
    {
        let b = verify_bounds_by_lp(&family.extremal()?)?;
        out.push(Check::holds(
            format!("beta bounds {}", family.name()),
            b.tight(0.0),
            format!("max={} min={} expected {} and {}", b.max, b.min, b.expected_max, b.expected_min),
        ));
    }
    let rows = figure_chain(3, 50, ChainVariant::Both, ChainSolver::Both)?;
    out.push(Check::holds("figure rows", rows.len() == 96, format!("{} rows", rows.len())));
    Ok(out)
}

fn random_weights<R: Rng>(n: usize, rng: &mut R) -> Result<ContextWeights> {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = w.iter().sum();
    ContextWeights::new(w.into_iter().map(|x| x / s).collect())
}

/// Seeded property checks on random boxes.
pub fn properties(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SolverOptions::with_tol(1e-9);
    let mut out = Vec::new();
    let mut certificate_failures = 0usize;
    let mut solves = 0usize;
    let mut record = |r: &crate::entropy::MeasureReport| {
        solves += 1;
        if !(r.gap >= 0.0 && r.lower_bound() <= r.value && r.value >= -1e-12) {
            certificate_failures += 1;
        }
    };

    let (mut nc, mut ctx, mut borderline, mut bad) = (0, 0, 0, Vec::new());
    for i in 0..samples {
        let b = if i % 3 == 0 {
            let g = random_small_box(&mut rng)?;
            random_consistent_box(g.hypergraph_arc(), None, &mut rng)?
        } else {
            random_small_box(&mut rng)?
        };
        let r = x_u(&b, &opts)?;
        record(&r);
        let cost = contextuality_cost(&b, 1e-9)?.cost;
        let member = is_noncontextual(&b, 1e-9)?;
        if cost <= 1e-6 {
            nc += 1;
            if !(member && r.value <= 1e-6) {
                bad.push(format!("sample {i}: cost {cost:.3e} xu {:.3e} member {member}", r.value));
            }
        } else if cost >= 1e-2 {
            ctx += 1;
            if member || r.lower_bound() <= 1e-6 {
                bad.push(format!("sample {i}: cost {cost:.3e} xu lower bound {:.3e} member {member}", r.lower_bound()));
            }
        } else {
            borderline += 1;
            if member || r.value <= 0.0 {
                bad.push(format!("sample {i}: cost {cost:.3e} xu {:.3e} member {member}", r.value));
            }
        }
    }
    out.push(Check::holds(
        "faithfulness",
        bad.is_empty() && nc > 0 && ctx > 0,
        format!("{nc} non-contextual, {ctx} contextual, {borderline} near the boundary; {}", bad.join("; ")),
    ));

    let mut worst_xu: f64 = f64::NEG_INFINITY;
    let mut worst_cost: f64 = f64::NEG_INFINITY;
    for _ in 0..samples {
        let b = random_small_box(&mut rng)?;
        let cards: Vec<usize> = b.hypergraph().observables().iter().map(|o| o.cardinality).collect();
        let k = rng.gen_range(1..=3);
        let mapped = ChannelMixture::random(&cards, k, &mut rng).apply(&b)?;
        let (before, after) = (x_u(&b, &opts)?, x_u(&mapped, &opts)?);
        record(&before);
        record(&after);
        worst_xu = worst_xu.max(after.lower_bound() - before.value);
        let (cb, ca) = (contextuality_cost(&b, 1e-9)?.cost, contextuality_cost(&mapped, 1e-9)?.cost);
        worst_cost = worst_cost.max(ca - cb);
    }
    out.push(Check::holds("monotonicity xu", worst_xu <= 1e-9, format!("max increase {worst_xu:.3e}")));
    out.push(Check::holds("monotonicity cost", worst_cost <= 1e-9, format!("max increase {worst_cost:.3e}")));

    for name in ["PM", "M", "CH5", "PR"] {
        let gens = builtin_generators(name)?;
        let group = gens.group()?;
        let family: XorFamily = name.parse()?;
        let reference = family.extremal()?;
        let rep = invariant_set_check(&group, Some(&reference), samples, rng.gen())?;
        out.push(Check::holds(
            format!("twirl {name}"),
            rep.passed(),
            format!(
                "max deviation {:.3e}{}",
                rep.max_deviation,
                rep.failure.map_or(String::new(), |f| format!(": {}", f.0))
            ),
        ));
        let (mut lin, mut inv, mut dot): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..samples {
            let a = random_consistent_box(reference.hypergraph_arc(), Some(&reference), &mut rng)?;
            let b = random_consistent_box(reference.hypergraph_arc(), None, &mut rng)?;
            let p: f64 = rng.gen();
            let mixed = beta(&reference, &a.mix(&b, p)?)?;
            lin = lin.max((mixed - (p * beta(&reference, &a)? + (1.0 - p) * beta(&reference, &b)?)).abs());
            inv = inv.max((beta(&reference, &group.twirl(&a)?)? - beta(&reference, &a)?).abs());
            dot = dot.max(beta_scalar_identity_check(&reference, &a)?);
        }
        out.push(Check::holds(format!("beta linearity {name}"), lin <= 1e-12, format!("{lin:.3e}")));
        out.push(Check::holds(format!("beta twirl invariance {name}"), inv <= 1e-12, format!("{inv:.3e}")));
        out.push(Check::holds(format!("beta scalar product {name}"), dot <= 1e-12, format!("{dot:.3e}")));
    }

    let mut misses = Vec::new();
    for i in 0..samples {
        let family = [XorFamily::PR, XorFamily::PeresMermin, XorFamily::MerminStar, XorFamily::Chain(5)][i % 4];
        let alpha: f64 = rng.gen();
        let r = x_u(&family.isotropic(alpha)?, &SolverOptions::with_tol(1e-6))?;
        record(&r);
        let exact = xu_isotropic(family.num_contexts(), alpha)?;
        if exact < r.lower_bound() - 1e-12 || exact > r.value + 1e-12 {
            misses.push(format!("{} alpha={alpha}: [{}, {}] vs {exact}", family.name(), r.lower_bound(), r.value));
        }
    }
    out.push(Check::holds("certificate brackets closed form", misses.is_empty(), misses.join("; ")));
    out.push(Check::holds(
        "certificate well formed",
        certificate_failures == 0,
        format!("{certificate_failures} of {solves} solves"),
    ));
    Ok(out)
}

/// Mutual-information form against relative-entropy form.
pub fn equivalence(seed: u64, samples: usize) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SolverOptions::with_tol(1e-9);
    let mut out = Vec::new();
    for (name, b) in [
        ("PR", pr_box()),
        ("PM", XorFamily::PeresMermin.extremal()?),
        ("KCBS", kcbs()?),
        ("triangle", triangle_xor_box()),
    ] {
        let e = verify_equivalence(&b, &ContextWeights::uniform(b.num_contexts()), &opts)?;
        out.push(Check::close(format!("equivalence {name}"), e.residual, 0.0, 1e-5));
    }
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let b = random_small_box(&mut rng)?;
        let w = random_weights(b.num_contexts(), &mut rng)?;
        worst = worst.max(verify_equivalence(&b, &w, &opts)?.residual);
    }
    out.push(Check::close(format!("equivalence {samples} random boxes"), worst, 0.0, 1e-5));
    Ok(out)
}

/// Tensor additivity, direct-sum laws and `X_max = X_u` on isotropic boxes.
pub fn additivity() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let pr = pr_box();
    let l43 = (4f64 / 3.0).log2();
    let pm = XorFamily::PeresMermin.extremal()?;
    out.push(Check::close(
        "xu PR x PR",
        x_u(&tensor(&pr, &pr)?, &SolverOptions::with_tol(1e-7))?.value,
        2.0 * l43,
        5e-4,
    ));
    out.push(Check::close(
        "xu PR x PR x PR",
        x_u(&tensor_power(&pr, 3)?, &SolverOptions::with_tol(1e-5))?.value,
        3.0 * l43,
        1e-3,
    ));
    out.push(Check::close(
        "xu PM x PM",
        x_u(&tensor(&pm, &pm)?, &SolverOptions::with_tol(1e-6))?.value,
        2.0 * (1.2f64).log2(),
        5e-4,
    ));
    let sum = direct_sum(&pr, &XorFamily::PR.isotropic(0.5)?)?;
    let xu = x_u(&sum, &tight())?.value;
    let xm = x_max(&sum, &tight())?.value;
    out.push(Check::close("xu direct sum", xu, 0.5 * l43, 2e-5));
    out.push(Check::close("xmax direct sum", xm, l43, 2e-5));
    out.push(Check::holds("xu below xmax on direct sum", xu < xm, format!("{xu} < {xm}")));
    for family in [XorFamily::PR, XorFamily::PeresMermin, XorFamily::MerminStar] {
        for alpha in [0.85, 0.95, 1.0] {
            let b = family.isotropic(alpha)?;
            let (u, m) = (x_u(&b, &tight())?.value, x_max(&b, &tight())?.value);
            out.push(Check::close(format!("xmax = xu {} alpha={alpha}", family.name()), m, u, 2e-5));
        }
    }
    Ok(out)
}

pub fn write_checks<W: Write>(out: W, suite: Suite, checks: &[Check]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["suite", "check", "result", "detail"]).map_err(err)?;
    for c in checks {
        let result = if c.passed { "pass" } else { "fail" };
        w.write_record([suite.to_string().as_str(), &c.name, result, &c.detail]).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn cmd_verify<W: Write>(out: W, suite: Suite, seed: u64, samples: usize) -> i32 {
    let checks = match run_suite(suite, seed, samples) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return super::commands::exit_code(&e);
        }
    };
    if let Err(e) = write_checks(out, suite, &checks) {
        eprintln!("error: {e}");
        return super::commands::EXIT_INVALID_INPUT;
    }
    if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    }
}
