//! One line per acceptance criterion; the test fails if any criterion does.

use std::process::Command;
use std::time::{Duration, Instant};

use elliptica::elliptic::{phi_translate_check, EllipticParams, Translation};
use elliptica::fixedpoint::{
    catalog_manifold, equivariant_index, rigidity_check, simplify_character, twist_split_check, Backend,
    IndexValue, SpinCircleManifold, TwistSpec,
};
use elliptica::report::IdentityReport;
use elliptica::zem::{identity_check, SuiteConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn suite(name: &str, trials: usize, tol: f64, max_dim: usize) -> IdentityReport {
    let config = SuiteConfig {
        trials,
        seed: 0,
        tol,
        max_dim,
        truncation_order: 80,
        exact: true,
    };
    identity_check(name, &config).expect("suite runs")
}

fn summarize(reports: &[IdentityReport]) -> Outcome {
    let passed = reports.iter().all(|r| r.passed);
    let parts: Vec<String> = reports
        .iter()
        .map(|r| {
            let exact = if r.exact.is_empty() {
                String::new()
            } else {
                format!(" +{} exact", r.exact.iter().filter(|e| e.passed).count())
            };
            format!("{} {:.1e}{exact}", r.suite, r.max_residual)
        })
        .collect();
    Outcome {
        passed,
        detail: parts.join(", "),
    }
}

fn translations() -> Outcome {
    let params = EllipticParams::default().with_truncation_order(80);
    let mut ok = true;
    let mut labels = Vec::new();
    for t in Translation::ALL {
        let r = phi_translate_check(t, &params).expect("translation check runs");
        ok &= r.passed;
        labels.push(t.label());
    }
    Outcome {
        passed: ok,
        detail: format!("{} exact through p^80", labels.join(", ")),
    }
}

fn sign_and_character() -> Outcome {
    summarize(&[
        suite("jchi", 200, 1e-10, 10),
        suite("jeul", 200, 1e-10, 10),
        suite("K-transfer", 100, 1e-9, 8),
    ])
}

fn elliptic_suites() -> Outcome {
    let names = [
        "Z-periodicity",
        "order-k-trivial",
        "allW",
        "EM-welldef",
        "EM-periodicity",
        "elliptic-transfer",
        "spin-transfer",
        "spin-periodicity",
    ];
    let reports: Vec<IdentityReport> = names.iter().map(|n| suite(n, 100, 1e-8, 8)).collect();
    summarize(&reports)
}

fn degenerate_reduction() -> Outcome {
    summarize(&[suite("degenerate-reduction", 100, 1e-10, 8)])
}

fn exact_character(m: &SpinCircleManifold, twist: &TwistSpec) -> elliptica::fixedpoint::Character {
    match equivariant_index(m, twist, &EllipticParams::default(), Backend::Exact).expect("index") {
        IndexValue::Character(f) => simplify_character(&f),
        other => panic!("unexpected {other:?}"),
    }
}

fn fixed_point_indices() -> Outcome {
    let s2 = catalog_manifold("s2").unwrap();
    let cp3 = catalog_manifold("cp3").unwrap();
    let s2_plain = exact_character(&s2, &TwistSpec::None).to_string() == "0";
    let s2_witten = match equivariant_index(
        &s2,
        &TwistSpec::TangentWitten,
        &EllipticParams::default().with_truncation_order(80),
        Backend::Exact,
    )
    .unwrap()
    {
        IndexValue::Series(s) => s.is_zero(),
        _ => false,
    };
    let cp3_plain = exact_character(&cp3, &TwistSpec::None).to_string() == "0";
    let twists = ["O(3)", "T", "L2T", "S2T", "L3T"];
    let integral = twists
        .iter()
        .all(|t| exact_character(&cp3, &cp3.twist(t).unwrap()).laurent().is_some());
    Outcome {
        passed: s2_plain && s2_witten && cp3_plain && integral,
        detail: format!(
            "S2 untwisted 0: {s2_plain}, S2 Witten series 0 through p^80: {s2_witten}, CP3 untwisted 0: {cp3_plain}, CP3 twists {twists:?} integral: {integral}"
        ),
    }
}

fn rigidity() -> Outcome {
    let cp3 = catalog_manifold("cp3").unwrap();
    let r = rigidity_check(&cp3, 8).unwrap();
    let generic = twist_split_check(&catalog_manifold("cp3-0137").unwrap()).unwrap();
    let special = twist_split_check(&cp3).unwrap();
    let split_ok = !generic.s2_constant && !generic.l3_constant && generic.sum_constant;
    Outcome {
        passed: r.rigid && split_ok && special.sum_constant,
        detail: format!(
            "CP3 (0,1,2,3) rigid through q^2 with constants {:?}; CP3 (0,1,3,7) S2T constant {}, L3T constant {}, sum constant {}; on (0,1,2,3) S2T = {}, L3T = {}",
            r.constants.iter().map(|c| c.clone().unwrap_or_default()).collect::<Vec<_>>(),
            generic.s2_constant,
            generic.l3_constant,
            generic.sum_constant,
            special.s2,
            special.l3
        ),
    }
}

fn negative_control() -> Outcome {
    let flipped = catalog_manifold("cp3").unwrap().with_flipped_weight(0, 0).unwrap();
    let r = rigidity_check(&flipped, 4).unwrap();
    Outcome {
        passed: !r.rigid && r.non_constant_orders.iter().any(|&e| e <= 4),
        detail: format!("one flipped weight: non-constant at p^{:?}", r.non_constant_orders),
    }
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_elliptica"))
            .args(["verify", "--suite", "all", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        passed: same && a.status.success(),
        detail: format!(
            "two runs of `verify --suite all --seed 7`: {} bytes, identical {same}, exit {:?}",
            a.stdout.len(),
            a.status.code()
        ),
    }
}

#[test]
fn acceptance() {
    type Criterion = (usize, &'static str, Option<Duration>, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        (1, "exact translation identities", Some(Duration::from_secs(10)), translations),
        (2, "sign and character identities", Some(Duration::from_secs(10)), sign_and_character),
        (3, "elliptic identity suites", Some(Duration::from_secs(60)), elliptic_suites),
        (4, "degenerate reduction", None, degenerate_reduction),
        (5, "fixed-point indices", Some(Duration::from_secs(5)), fixed_point_indices),
        (6, "Witten rigidity", Some(Duration::from_secs(120)), rigidity),
        (7, "negative control", None, negative_control),
        (8, "determinism", None, determinism),
    ];
    let mut failed = Vec::new();
    for (n, name, budget, f) in criteria {
        let start = Instant::now();
        let out = f();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed < b);
        let ok = out.passed && in_time;
        let budget_note = budget.map_or(String::new(), |b| format!(" / budget {}s", b.as_secs()));
        println!(
            "criterion {n} {}: {name} ({:.2}s{budget_note}) {}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            out.detail
        );
        if !ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
