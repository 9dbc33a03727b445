//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero on any result other than the known kernel-relation mismatch.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use edgesync_cli::format::read_graph;
use edgesync_cli::pipeline::{verify, SimOptions, VerifyOutcome};
use edgesync_core::behavior::BehaviorCase;
use edgesync_core::graph::{random_leader_graph, RandomGraphParams, SignedDigraph};
use edgesync_core::linalg::inf_norm;
use edgesync_core::TolerancePolicy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const X0_5: [f64; 5] = [3.5, 4.0, -2.0, -6.5, 5.5];
const X0_9: [f64; 9] = [3.5, 4.0, -2.0, -6.5, 5.5, -10.5, 3.5, 12.0, 5.5];
const RANDOM_GRAPHS: usize = 200;

/// Criteria expected to fail; see the repository notes on the kernel relation.
const KNOWN_RED: &[u32] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(format!("{name}.json"))
}

fn load(name: &str) -> SignedDigraph {
    read_graph(&fixture(name)).unwrap()
}

fn opts(x0: &[f64]) -> SimOptions {
    SimOptions {
        x0: Some(x0.to_vec()),
        ..SimOptions::default()
    }
}

fn finding(o: &VerifyOutcome, name: &str) -> bool {
    o.findings.iter().filter(|f| f.name == name).all(|f| f.pass)
}

fn findings_pass(o: &VerifyOutcome, names: &[&str]) -> bool {
    names.iter().all(|n| finding(o, n))
}

struct Suite {
    fixtures: Vec<(String, VerifyOutcome)>,
    random: Vec<(u64, VerifyOutcome)>,
    random_secs: f64,
}

fn random_params(r: &mut ChaCha8Rng) -> RandomGraphParams {
    let roots = r.random_range(0..=3);
    let sb_sccs = r.random_range(0..=2);
    let sub_sccs = if roots + sb_sccs == 0 {
        r.random_range(1..=2)
    } else {
        r.random_range(0..=2)
    };
    let scc_size = if sub_sccs > 0 { 3 } else { r.random_range(2..=3) };
    let leaders = roots + (sb_sccs + sub_sccs) * scc_size;
    RandomGraphParams {
        n: (leaders + r.random_range(1..=8)).min(25),
        roots,
        sb_sccs,
        sub_sccs,
        scc_size,
        density: 0.08,
        neg_prob: 0.3,
        force_sb: sub_sccs == 0 && r.random_bool(0.3),
    }
}

fn random_suite(tol: &TolerancePolicy) -> (Vec<(u64, VerifyOutcome)>, f64) {
    let start = Instant::now();
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < RANDOM_GRAPHS {
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let p = random_params(&mut r);
        if let Ok(g) = random_leader_graph(&p, seed) {
            let x0: Vec<f64> = (0..p.n).map(|_| r.random_range(-10.0..10.0)).collect();
            out.push((seed, verify(&g, &opts(&x0), tol).unwrap()));
        }
        seed += 1;
    }
    (out, start.elapsed().as_secs_f64())
}

fn criterion_1(tol: &TolerancePolicy) -> (Outcome, VerifyOutcome) {
    let start = Instant::now();
    let o = verify(&load("g1"), &opts(&X0_5), tol).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let a = &o.analysis;
    let r = a.spectral.ranks;
    let structure = a.gauge.is_none()
        && a.leaders.l1 == 1
        && (a.spectral.gamma, a.spectral.xi) == (1, 1)
        && (r.es_in, r.es, r.ls, r.le) == (4, 5, 4, 4);
    let t = &o.run.trajectory;
    let d = &t.diagnostics;
    let ebar = d.ebar_final_norm;
    let e_norm = inf_norm(&t.final_e());
    let x_max = inf_norm(&t.final_x());
    let pass = structure
        && ebar <= 1e-6
        && d.limit_error <= 1e-6
        && e_norm > 0.0
        && x_max <= 5.5 + 1e-6
        && secs <= 5.0;
    let detail = format!(
        "structure {structure}, |ebar(10)| {ebar:.2e}, limit error {:.2e}, |e(10)| {e_norm:.3}, max|x(10)| {x_max:.4}, {secs:.2}s",
        d.limit_error
    );
    (Outcome { pass, detail }, o)
}

fn criterion_2(tol: &TolerancePolicy) -> (Outcome, Vec<(String, VerifyOutcome)>) {
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    let mut runs = Vec::new();
    for (name, gx) in [("g2", (3, 3)), ("g3", (2, 3)), ("g4", (2, 2))] {
        let o = verify(&load(name), &opts(&X0_9), tol).unwrap();
        let s = &o.analysis.spectral;
        let t = &o.run.trajectory;
        let contained = o.run.verdict.overall_pass;
        let ebar = t.diagnostics.ebar_final_norm;
        let e_norm = inf_norm(&t.final_e());
        let ok = (s.gamma, s.xi) == gx && contained && ebar <= 1e-6 && e_norm >= 1e-3;
        pass &= ok;
        parts.push(format!(
            "{name} ({},{}) containment {contained} |ebar| {ebar:.1e} |e| {e_norm:.3}",
            s.gamma, s.xi
        ));
        runs.push((name.to_string(), o));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs <= 15.0;
    (
        Outcome {
            pass,
            detail: format!("{}; {secs:.2}s", parts.join("; ")),
        },
        runs,
    )
}

fn criterion_3(suite: &Suite) -> Outcome {
    let mut rank_fail = 0;
    let mut mult_fail = 0;
    let mut ns_fail = 0;
    let mut resid_fail = 0;
    let mut ns_examples = Vec::new();
    for (seed, o) in &suite.random {
        let s = &o.analysis.spectral;
        let r = s.rank_match;
        rank_fail += usize::from(!(r.es_in && r.es && r.ls && r.le));
        mult_fail += usize::from(!(s.gamma_match && s.xi_match));
        resid_fail += usize::from(o.analysis.zero.residuals.max() > 1e-9);
        if !s.null_space_match() {
            ns_fail += 1;
            if ns_examples.len() < 3 {
                let l = &o.analysis.leaders;
                ns_examples.push(format!("seed {seed} ({},{},{})", l.l1, l.l2_sb, l.l2_sub));
            }
        }
    }
    let n = suite.random.len();
    let secs = suite.random_secs;
    Outcome {
        pass: rank_fail + mult_fail + ns_fail + resid_fail == 0 && secs <= 60.0,
        detail: format!(
            "{n} graphs: rank mismatches {rank_fail}, multiplicity mismatches {mult_fail}, \
             kernel-relation mismatches {ns_fail} [{}], residual failures {resid_fail}, {secs:.1}s",
            ns_examples.join(", ")
        ),
    }
}

/// Unexpected sub-failures of criterion 3, i.e. anything but the kernel
/// relation.
fn criterion_3_unexpected(suite: &Suite) -> bool {
    suite.random.iter().any(|(_, o)| {
        let s = &o.analysis.spectral;
        !s.predictions_match() || o.analysis.zero.residuals.max() > 1e-9
    }) || suite.random_secs > 60.0
}

fn all_runs(suite: &Suite) -> impl Iterator<Item = (String, &VerifyOutcome)> {
    suite
        .fixtures
        .iter()
        .map(|(n, o)| (n.clone(), o))
        .chain(suite.random.iter().map(|(s, o)| (format!("seed {s}"), o)))
}

fn count_failing(suite: &Suite, names: &[&str]) -> (usize, Vec<String>) {
    let bad: Vec<String> = all_runs(suite)
        .filter(|(_, o)| !findings_pass(o, names))
        .map(|(n, _)| n)
        .collect();
    (bad.len(), bad.into_iter().take(3).collect())
}

fn criterion_4(suite: &Suite) -> Outcome {
    let names = ["lyapunov-residual", "lyapunov-p-positive", "vdot-finite-difference", "v-monotone"];
    let (bad, ex) = count_failing(suite, &names);
    let worst_fd = all_runs(suite)
        .flat_map(|(_, o)| o.findings.iter().filter(|f| f.name == "vdot-finite-difference").map(|f| f.value))
        .fold(0.0, f64::max);
    Outcome {
        pass: bad == 0,
        detail: format!(
            "{} graphs, failing {bad} {ex:?}, worst relative V-dot mismatch {worst_fd:.1e}",
            suite.fixtures.len() + suite.random.len()
        ),
    }
}

fn criterion_5(suite: &Suite) -> Outcome {
    let names = ["node-edge-consistency", "edge-average-drift", "expm-oracle", "decay-slope"];
    let (bad, ex) = count_failing(suite, &names);
    let worst = |name: &str| {
        all_runs(suite)
            .flat_map(|(_, o)| o.findings.iter().filter(|f| f.name == name).map(|f| f.value))
            .fold(0.0, f64::max)
    };
    Outcome {
        pass: bad == 0,
        detail: format!(
            "failing {bad} {ex:?}, worst consistency {:.1e}, drift {:.1e}, oracle {:.1e}",
            worst("node-edge-consistency"),
            worst("edge-average-drift"),
            worst("expm-oracle")
        ),
    }
}

fn criterion_6(tol: &TolerancePolicy, suite: &Suite) -> Outcome {
    let extra = [
        ("sb_cycle", vec![1.0, 2.0, 3.0]),
        ("sub_cycle", vec![1.0, 2.0, 3.0]),
        ("sub_leaders", X0_9.to_vec()),
    ];
    let mut runs: Vec<(String, BehaviorCase, bool)> = suite
        .fixtures
        .iter()
        .map(|(n, o)| (n.clone(), o.analysis.case, o.run.verdict.overall_pass))
        .collect();
    for (name, x0) in extra {
        let o = verify(&load(name), &opts(&x0), tol).unwrap();
        runs.push((name.to_string(), o.analysis.case, o.run.verdict.overall_pass));
    }
    let cases = [
        BehaviorCase::BalancedSpanningTree,
        BehaviorCase::UnbalancedSccLeader,
        BehaviorCase::RootOrBalancedSccLeader,
        BehaviorCase::MultiLeaderContainment,
        BehaviorCase::MultiLeaderAllUnbalanced,
    ];
    let covered = cases.iter().all(|c| runs.iter().any(|(_, rc, _)| rc == c));
    let all_pass = runs.iter().all(|(_, _, p)| *p);
    let listing: Vec<String> = runs
        .iter()
        .map(|(n, c, p)| format!("{n}:{}{}", c.label(), if *p { "" } else { " FAILED" }))
        .collect();
    Outcome {
        pass: covered && all_pass,
        detail: format!("all cases covered {covered}; {}", listing.join(", ")),
    }
}

fn run_bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_edgesync")).args(args).output().unwrap()
}

fn dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn criterion_7() -> Outcome {
    let tmp = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance-determinism");
    let _ = std::fs::remove_dir_all(&tmp);
    let mut same = true;
    let mut notes = Vec::new();
    let random_args = ["random", "--n", "12", "--roots", "1", "--sb-sccs", "1", "--sub-sccs", "1", "--seed", "7"];
    let a = run_bin(&random_args);
    let b = run_bin(&random_args);
    let ok = a.status.success() && a.stdout == b.stdout;
    same &= ok;
    notes.push(format!("random {}", if ok { "identical" } else { "differs" }));
    for name in ["g1", "g2", "g3", "g4"] {
        let graph = fixture(name);
        let mut outputs = Vec::new();
        let out = tmp.join(name);
        for _ in 0..2 {
            let st = run_bin(&["simulate", graph.to_str().unwrap(), "--out", out.to_str().unwrap()]);
            same &= st.status.success();
            outputs.push(dir_bytes(&out));
        }
        let ok = outputs[0] == outputs[1] && outputs[0].len() == 5;
        same &= ok;
        notes.push(format!("simulate {name} {}", if ok { "identical" } else { "differs" }));
    }
    Outcome {
        pass: same,
        detail: notes.join(", "),
    }
}

fn main() {
    let tol = TolerancePolicy::default();
    let mut results: Vec<(u32, &str, Outcome, f64)> = Vec::new();
    let mut timed = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let o = f();
        results.push((id, name, o, start.elapsed().as_secs_f64()));
    };

    let mut fixtures = Vec::new();
    timed(1, "G1 reproduction", &mut || {
        let (o, run) = criterion_1(&tol);
        fixtures.push(("g1".to_string(), run));
        o
    });
    timed(2, "G2/G3/G4 reproduction", &mut || {
        let (o, runs) = criterion_2(&tol);
        fixtures.extend(runs);
        o
    });
    let (random, random_secs) = random_suite(&tol);
    let suite = Suite {
        fixtures,
        random,
        random_secs,
    };
    timed(3, "spectral property suite", &mut || criterion_3(&suite));
    timed(4, "Lyapunov suite", &mut || criterion_4(&suite));
    timed(5, "dynamics invariants", &mut || criterion_5(&suite));
    timed(6, "behavior class coverage", &mut || criterion_6(&tol, &suite));
    timed(7, "determinism", &mut || criterion_7());

    let objective_ok = suite.random.iter().filter(|(_, o)| o.run.verdict.overall_pass).count();
    let mut unexpected = Vec::new();
    for (id, name, o, secs) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let known = if KNOWN_RED.contains(id) { " (known)" } else { "" };
        println!("{tag}{known} criterion {id}: {name}: {} [{secs:.2}s]", o.detail);
        let expected_red = KNOWN_RED.contains(id);
        if o.pass == expected_red {
            unexpected.push(*id);
        }
    }
    println!(
        "note: objective checks at t = 10 hold on {objective_ok}/{} random graphs (not part of any criterion)",
        suite.random.len()
    );
    if criterion_3_unexpected(&suite) && !unexpected.contains(&3) {
        unexpected.push(3);
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance results for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
