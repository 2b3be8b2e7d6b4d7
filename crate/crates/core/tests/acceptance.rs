//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use contextuality::cli::commands::{cmd_figure_chain, ChainSolver, ChainVariant};
use contextuality::cli::verify::properties;
use contextuality::entropy::{verify_equivalence, x_max, x_u, x_u_isotropic_reduced, ContextWeights, SolverOptions};
use contextuality::ks::verify_bounds_by_lp;
use contextuality::polytope::contextuality_cost;
use contextuality::random::random_small_box;
use contextuality::symmetry::chain_generators;
use contextuality::{direct_sum, kcbs, pr_box, tensor, tensor_power, Result, XorFamily};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    failures: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { passed: true, failures: Vec::new() }
    }

    fn close(&mut self, what: &str, value: f64, expected: f64, tol: f64) {
        let within = (value - expected).abs() <= tol;
        if !within {
            self.passed = false;
            self.failures.push(format!("{what}: {value} vs {expected} (tol {tol:e})"));
        }
    }

    fn holds(&mut self, what: &str, ok: bool) {
        if !ok {
            self.passed = false;
            self.failures.push(what.to_string());
        }
    }
}

fn log2_ratio(n: f64) -> f64 {
    (n / (n - 1.0)).log2()
}

fn binary_kl(x: f64, y: f64) -> f64 {
    x * (x / y).log2() + (1.0 - x) * ((1.0 - x) / (1.0 - y)).log2()
}

fn golden_values() -> Result<Outcome> {
    let mut o = Outcome::new();
    let opts = SolverOptions::with_tol(1e-9);
    o.close("X_u(PR)", x_u(&pr_box(), &opts)?.value, 0.4150374992788438, 1e-5);
    o.close("X_u(PM)", x_u(&XorFamily::PeresMermin.extremal()?, &opts)?.value, (6f64 / 5.0).log2(), 1e-5);
    o.close("X_u(M)", x_u(&XorFamily::MerminStar.extremal()?, &opts)?.value, (5f64 / 4.0).log2(), 1e-5);
    for n in 3..=12 {
        let start = Instant::now();
        let v = x_u(&XorFamily::Chain(n).extremal()?, &opts)?.value;
        o.close(&format!("X_u(CH{n})"), v, log2_ratio(n as f64), 1e-5);
        o.holds(&format!("CH{n} under 30 s"), start.elapsed().as_secs_f64() < 30.0);
    }
    for n in 13..=50 {
        let group = chain_generators(n)?.group()?;
        let v = x_u_isotropic_reduced(&XorFamily::Chain(n).extremal()?, 1.0, &group, 1e-12)?;
        o.close(&format!("reduced X_u(CH{n})"), v, log2_ratio(n as f64), 1e-9);
    }
    let a = (PI / 8.0).cos().powi(2);
    let chsh = x_u(&XorFamily::PR.isotropic(a)?, &opts)?.value;
    o.close("X_u(CHSH) vs closed form", chsh, binary_kl(a, 0.75), 1e-5);
    o.close("closed form vs 0.0463", binary_kl(a, 0.75), 0.0463, 5e-5);
    o.close("X_u(KCBS)", x_u(&kcbs()?, &opts)?.value, 0.0466576, 1e-5);
    Ok(o)
}

fn cost_formulas() -> Result<Outcome> {
    let mut o = Outcome::new();
    let families = [
        ("PR", XorFamily::PR, 4.0),
        ("PM", XorFamily::PeresMermin, 6.0),
        ("M", XorFamily::MerminStar, 5.0),
        ("CH3", XorFamily::Chain(3), 3.0),
        ("CH4", XorFamily::Chain(4), 4.0),
        ("CH5", XorFamily::Chain(5), 5.0),
        ("CH6", XorFamily::Chain(6), 6.0),
    ];
    for (name, family, n) in families {
        for k in 0..=20 {
            let alpha = k as f64 / 20.0;
            let c = contextuality_cost(&family.isotropic(alpha)?, 1e-9)?.cost;
            let formula = (n * alpha - (n - 1.0)).max(0.0);
            o.close(&format!("C({name}) at alpha={alpha}"), c, formula, 1e-7);
        }
    }
    Ok(o)
}

fn interval_tightness() -> Result<Outcome> {
    let mut o = Outcome::new();
    let families =
        [XorFamily::PR, XorFamily::PeresMermin, XorFamily::MerminStar].into_iter().chain((3..=8).map(XorFamily::Chain));
    for family in families {
        let n = family.num_contexts();
        let b = verify_bounds_by_lp(&family.extremal()?)?;
        let expected_min = if n % 2 == 0 { 1.0 } else { 0.0 };
        o.close(&format!("max beta {}", family.name()), b.max, n as f64 - 1.0, 0.0);
        o.close(&format!("min beta {}", family.name()), b.min, expected_min, 0.0);
    }
    Ok(o)
}

fn equivalence() -> Result<Outcome> {
    let mut o = Outcome::new();
    let opts = SolverOptions::with_tol(1e-9);
    let mut boxes =
        vec![("PR".to_string(), pr_box()), ("PM".into(), XorFamily::PeresMermin.extremal()?), ("KCBS".into(), kcbs()?)];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..20 {
        let b = random_small_box(&mut rng)?;
        let k = b.hypergraph().num_observables();
        o.holds(&format!("random box {i} has 4 to 6 observables"), (4..=6).contains(&k));
        boxes.push((format!("random box {i}"), b));
    }
    for (name, b) in boxes {
        let e = verify_equivalence(&b, &ContextWeights::uniform(b.num_contexts()), &opts)?;
        o.close(&format!("residual {name}"), e.residual, 0.0, 1e-5);
    }
    Ok(o)
}

fn direct_sum_laws() -> Result<Outcome> {
    let mut o = Outcome::new();
    let opts = SolverOptions::with_tol(1e-9);
    let b = direct_sum(&pr_box(), &XorFamily::PR.isotropic(0.5)?)?;
    let u = x_u(&b, &opts)?.value;
    let m = x_max(&b, &opts)?.value;
    o.close("X_u(PR + PR_1/2)", u, 0.5 * (4f64 / 3.0).log2(), 2e-5);
    o.close("X_max(PR + PR_1/2)", m, 0.41504, 2e-5);
    o.holds("X_u < X_max", u < m);
    Ok(o)
}

fn additivity() -> Result<Outcome> {
    let mut o = Outcome::new();
    let pr = pr_box();
    let pm = XorFamily::PeresMermin.extremal()?;
    let l43 = (4f64 / 3.0).log2();
    let v = x_u(&tensor(&pr, &pr)?, &SolverOptions::with_tol(1e-7))?.value;
    o.close("X_u(PR x PR)", v, 2.0 * l43, 5e-4);
    let start = Instant::now();
    let v = x_u(&tensor(&pm, &pm)?, &SolverOptions::with_tol(1e-5))?.value;
    o.close("X_u(PM x PM)", v, 2.0 * (6f64 / 5.0).log2(), 5e-4);
    o.holds("PM x PM under 5 min", start.elapsed().as_secs_f64() < 300.0);
    let v = x_u(&tensor_power(&pr, 3)?, &SolverOptions::with_tol(1e-5))?.value;
    o.close("X_u(PR^3)", v, 3.0 * l43, 1e-3);
    Ok(o)
}

fn xmax_equals_xu() -> Result<Outcome> {
    let mut o = Outcome::new();
    let opts = SolverOptions::with_tol(1e-9);
    for (name, family) in [("PR", XorFamily::PR), ("PM", XorFamily::PeresMermin), ("M", XorFamily::MerminStar)] {
        for alpha in [0.85, 0.95, 1.0] {
            let b = family.isotropic(alpha)?;
            let (u, m) = (x_u(&b, &opts)?.value, x_max(&b, &opts)?.value);
            o.close(&format!("{name} alpha={alpha}"), m, u, 2e-5);
        }
    }
    Ok(o)
}

fn property_suites() -> Result<Outcome> {
    let mut o = Outcome::new();
    for c in properties(42, 50)? {
        o.holds(&format!("{}: {}", c.name, c.detail), c.passed);
    }
    Ok(o)
}

fn figure_reproduction() -> Result<Outcome> {
    let mut o = Outcome::new();
    let mut buf = Vec::new();
    let code = cmd_figure_chain(&mut buf, 3, 50, ChainVariant::Both, ChainSolver::ClosedForm);
    o.holds("exit code 0", code == 0);
    let text = String::from_utf8(buf).expect("utf-8 csv");
    let mut lines = text.lines();
    o.holds("header n,alpha,xu", lines.next() == Some("n,alpha,xu"));
    let rows: Vec<(usize, f64, f64)> = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect();
    o.holds(&format!("96 rows, got {}", rows.len()), rows.len() == 96);
    let max_rows: Vec<_> = rows.iter().filter(|r| r.1 == 1.0).collect();
    let n4: Vec<_> = rows.iter().filter(|r| r.0 == 4).collect();
    o.holds("two rows for n = 4", n4.len() == 2);
    for r in n4 {
        let expected = if r.1 == 1.0 { log2_ratio(4.0) } else { binary_kl((PI / 8.0).cos().powi(2), 0.75) };
        o.close(&format!("n=4 alpha={}", r.1), r.2, expected, 1e-5);
    }
    o.holds("48 max rows", max_rows.len() == 48);
    o.holds("max variant decreasing in n", max_rows.windows(2).all(|w| w[0].0 < w[1].0 && w[1].2 < w[0].2));
    Ok(o)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 golden closed-form values", golden_values),
        ("2 cost LP vs cost formulas", cost_formulas),
        ("3 alpha-interval tightness", interval_tightness),
        ("4 equivalence theorem", equivalence),
        ("5 direct-sum laws", direct_sum_laws),
        ("6 tensor additivity", additivity),
        ("7 X_max = X_u on isotropic boxes", xmax_equals_xu),
        ("8 property suites", property_suites),
        ("9 chain figure reproduction", figure_reproduction),
    ];
    let mut all = true;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run().unwrap_or_else(|e| Outcome { passed: false, failures: vec![format!("error: {e}")] });
        let secs = start.elapsed().as_secs_f64();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} criterion {name} ({secs:.1}s)");
        for f in outcome.failures.iter().take(12) {
            println!("    {f}");
        }
        if outcome.failures.len() > 12 {
            println!("    ... {} more", outcome.failures.len() - 12);
        }
        all &= outcome.passed;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
