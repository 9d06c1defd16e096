//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails other than those listed in
//! `EXPECTED_FAILURES`. An expected failure that starts passing also fails
//! the run, so the list cannot go stale silently.

use std::process::Command;
use std::time::Instant;

use spectral_turan::graph::turan_edge_count;
use spectral_turan::pattern::{registry, REGISTRY};
use spectral_turan::search::{enumerate_free, equivalence_check, extremal, SearchConfig, VALUE_EPS};
use spectral_turan::spectra::{spectral_radius, DEFAULT_TOL};
use spectral_turan::verify::{
    all_graphs, check_bound_chain, check_min_entry_bound, check_monotone_sequence, check_star_theorem,
    check_vertex_deletion, connected_graphs, convergence_table, random_graphs, summarize, sweep, Verdict, CHECK_TOL,
};
use spectral_turan::{ForbiddenPattern, Graph, MatrixKind, Measure, NamedFamily};

/// Criteria that cannot hold for the mathematics as computed; see README.
const EXPECTED_FAILURES: &[u32] = &[7];

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config() -> SearchConfig {
    SearchConfig::default()
}

fn pattern(name: &str) -> ForbiddenPattern {
    ForbiddenPattern::from_name(name).expect("registry pattern")
}

fn q_of<G: spectral_turan::Adjacency + ?Sized>(g: &G) -> f64 {
    spectral_radius(g, MatrixKind::SignlessLaplacian, DEFAULT_TOL).expect("converges").value
}

/// `T_r(n)`, read as `K_n` when `n < r`.
fn turan(r: usize, n: usize) -> Graph {
    if n < r { NamedFamily::Complete(n) } else { NamedFamily::Turan(r, n) }.build().expect("small Turán graph")
}

fn closed_form_spectra() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=200 {
        let g = NamedFamily::Turan(2, n).build_list().map_err(|e| e.to_string())?;
        let err = (q_of(&g) - n as f64).abs();
        worst = worst.max(err);
        ensure(err <= 1e-8, || format!("q(T_2({n})) off by {err:e}"))?;
    }
    for t in 2..=50 {
        let err = (q_of(&NamedFamily::Complete(t).build().unwrap()) - 2.0 * (t as f64 - 1.0)).abs();
        worst = worst.max(err);
        ensure(err <= 1e-8, || format!("q(K_{t}) off by {err:e}"))?;
    }
    for s in 1..=30 {
        for t in 1..=30 {
            let err = (q_of(&NamedFamily::CompleteBipartite(s, t).build().unwrap()) - (s + t) as f64).abs();
            worst = worst.max(err);
            ensure(err <= 1e-8, || format!("q(K_{s},{t}) off by {err:e}"))?;
        }
    }
    Ok(format!("199 Turán, 49 complete, 900 complete bipartite graphs; max error {worst:.1e}"))
}

fn turan_theorem() -> Outcome {
    let cfg = config();
    for r in [2, 3] {
        let f = pattern(&format!("K{}", r + 1));
        for n in 1..=8 {
            let rec = extremal(n, &f, Measure::Edges, &cfg).map_err(|e| e.to_string())?;
            let t = turan(r, n);
            let expect = if n < r { n * (n - 1) / 2 } else { turan_edge_count(r, n) };
            ensure(rec.value == expect as f64 && expect == t.edge_count(), || {
                format!("ex({n}, K{}) = {} but e(T_{r}({n})) = {}", r + 1, rec.value, t.edge_count())
            })?;
            ensure(rec.witnesses == vec![t.canonical_form()], || {
                format!("r = {r}, n = {n}: witnesses {:?} are not exactly T_{r}({n})", rec.witnesses)
            })?;
        }
    }
    Ok("ex(n, K_{r+1}) = e(T_r(n)) with T_r(n) the unique witness, r = 2, 3, n <= 8".into())
}

fn signless_turan() -> Outcome {
    let cfg = config();
    let mut tightest = f64::INFINITY;
    for r in [2usize, 3] {
        let f = pattern(&format!("K{}", r + 1));
        for n in 2..=8 {
            let rec = extremal(n, &f, Measure::QRadius, &cfg).map_err(|e| e.to_string())?;
            let bound = (1.0 - 1.0 / r as f64) * 2.0 * n as f64;
            tightest = tightest.min(bound - rec.value);
            ensure(rec.value <= bound + 1e-8, || format!("ex_q({n}, K{}) = {} exceeds {bound}", r + 1, rec.value))?;
            if r == 2 {
                ensure((rec.value - bound).abs() <= 1e-8, || format!("ex_q({n}, K3) = {} != {bound}", rec.value))?;
                let balanced = turan(2, n).canonical_form();
                ensure(rec.witnesses.contains(&balanced), || format!("n = {n}: T_2(n) missing from witnesses"))?;
                for w in rec.witness_graphs() {
                    ensure(spectral_turan::pattern::chromatic_number(&w) <= 2 && w.is_connected(), || {
                        format!("n = {n}: witness {} is not connected bipartite", w.to_graph6())
                    })?;
                }
            }
        }
    }
    Ok(format!("bound holds for r = 2, 3, n <= 8, equality at r = 2 via T_2(n); smallest r = 3 gap {tightest:.2e}"))
}

fn star_theorem() -> Outcome {
    let cfg = config();
    for t in [2, 3, 4] {
        let check = check_star_theorem(t, t..=8, &cfg).map_err(|e| e.to_string())?;
        ensure(!check.partial && check.details.iter().all(|r| r.verdict == Verdict::Passed), || {
            let bad: Vec<_> = check.details.iter().filter(|r| !r.passed).collect();
            format!("t = {t}: {bad:?}")
        })?;
        ensure(check.details.iter().filter(|r| r.check_id == "star_theorem.value").count() == 9 - t, || {
            format!("t = {t}: wrong number of n values")
        })?;
    }
    Ok("ex_q(n, K_{1,t}) = 2(t-1) with a union of K_t among the witnesses, t = 2, 3, 4, t <= n <= 8".into())
}

fn lemma_sweeps() -> Outcome {
    let cfg = config();
    let connected = connected_graphs(7, &cfg).map_err(|e| e.to_string())?;
    ensure(connected.iter().filter(|g| g.n() == 7).count() == 853, || "expected 853 connected graphs on 7 vertices".into())?;
    let mut lines = Vec::new();
    for (id, check) in [
        ("vertex_deletion", check_vertex_deletion as fn(&Graph, f64) -> spectral_turan::CheckReport),
        ("min_entry_bound", check_min_entry_bound),
    ] {
        let s = summarize(id, &sweep(&connected, |g| check(g, CHECK_TOL)));
        ensure(s.failed == 0 && s.not_applicable == 0 && s.passed == connected.len(), || format!("{s:?}"))?;
        lines.push(format!("{id} {}/{}", s.passed, s.total));
    }
    let mut graphs = all_graphs(7, &cfg).map_err(|e| e.to_string())?;
    for n in 8..=12 {
        graphs.extend(random_graphs(n, 500, 2024));
    }
    let s = summarize("bound_chain", &sweep(&graphs, |g| check_bound_chain(g, CHECK_TOL)));
    ensure(s.failed == 0 && s.passed == graphs.len(), || format!("{s:?}"))?;
    lines.push(format!("bound_chain {}/{}", s.passed, s.total));
    Ok(lines.join(", "))
}

fn monotone_sequence() -> Outcome {
    let cfg = config();
    let mut notes = Vec::new();
    for name in ["K3", "K4", "C5"] {
        let f = pattern(name);
        let ratios: Vec<f64> = (3..=8)
            .map(|n| extremal(n, &f, Measure::QRadius, &cfg).map(|r| r.value / (n - 1) as f64))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        ensure(ratios.windows(2).all(|w| w[1] <= w[0] + 1e-9), || format!("{name}: {ratios:?} increases"))?;
        let check = check_monotone_sequence(&f, 8, &cfg).map_err(|e| e.to_string())?;
        ensure(check.summary.verdict == Verdict::Passed, || format!("{name}: {:?}", check.summary))?;
        notes.push(format!("{name} {:.4}->{:.4}", ratios[0], ratios[5]));
    }
    Ok(format!("ex_q(n,F)/(n-1) nonincreasing on n = 3..8: {}", notes.join(", ")))
}

fn convergence() -> Outcome {
    let cfg = config();
    let k4 = convergence_table(&pattern("K4"), 8, &cfg).map_err(|e| e.to_string())?;
    let col = |n: usize| k4.rows.iter().find(|r| r.n == n).expect("row").ratio_q_n;
    let increments: Vec<f64> = (6..=8).map(|n| col(n) - col(n - 1)).collect();
    let shrinking = increments.windows(2).all(|w| w[1].abs() < w[0].abs());
    let k3 = convergence_table(&pattern("K3"), 8, &cfg).map_err(|e| e.to_string())?;
    let k3_exact = k3.rows.iter().all(|r| (r.ratio_q_n - 1.0).abs() <= VALUE_EPS);
    let lo = 4.0 / 3.0;
    let at8 = col(8);
    let in_window = (lo..=lo + 0.5).contains(&at8);
    let summary = format!(
        "K4 ratio_q_n(8) = {at8:.6} vs window [{lo:.6}, {:.6}]; |increments| n=5..8 {:?} shrinking = {shrinking}; K3 column = 1: {k3_exact}",
        lo + 0.5,
        increments.iter().map(|d| format!("{:.4}", d.abs())).collect::<Vec<_>>()
    );
    if in_window && shrinking && k3_exact {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn search_integrity() -> Outcome {
    let cfg = config();
    let counts: Vec<usize> = (1..=7)
        .map(|n| enumerate_free(n, None, &cfg).map(|v| v.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(counts == [1, 2, 4, 11, 34, 156, 1044], || format!("class counts {counts:?}"))?;
    let mut pairs = 0;
    for f in registry() {
        for measure in Measure::ALL {
            for n in 1..=6 {
                let ok = equivalence_check(n, &f, measure, &cfg).map_err(|e| e.to_string())?;
                ensure(ok, || format!("modes disagree for {} {measure:?} n = {n}", f.label()))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("counts {counts:?}; {pairs} equivalence checks over {} patterns x 3 measures x n = 1..6", REGISTRY.len()))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_spectral-turan");
    let outputs: Vec<Vec<u8>> = [1, 4, 8]
        .iter()
        .map(|w| {
            let out = Command::new(bin)
                .args(["--no-cache", "--workers", &w.to_string(), "table", "--pattern", "K4", "--n-max", "7"])
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
            Ok(out.stdout)
        })
        .collect::<Result<_, String>>()?;
    ensure(outputs.windows(2).all(|w| w[0] == w[1]), || "CSV differs between worker counts".into())?;
    Ok(format!("byte-identical CSV ({} bytes) with 1, 4 and 8 workers", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "closed-form spectra", closed_form_spectra),
        (2, "Turán theorem", turan_theorem),
        (3, "signless Laplacian Turán bound", signless_turan),
        (4, "star theorem", star_theorem),
        (5, "inequality sweeps", lemma_sweeps),
        (6, "monotone ex_q/(n-1)", monotone_sequence),
        (7, "convergence evidence", convergence),
        (8, "search integrity", search_integrity),
        (9, "determinism", determinism),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        let expected_fail = EXPECTED_FAILURES.contains(&id);
        match (&result, expected_fail) {
            (Ok(msg), false) => println!("criterion {id} PASS [{name}] ({secs:.1}s): {msg}"),
            (Err(msg), true) => println!("criterion {id} FAIL (expected) [{name}] ({secs:.1}s): {msg}"),
            (Err(msg), false) => {
                unexpected += 1;
                println!("criterion {id} FAIL [{name}] ({secs:.1}s): {msg}");
            }
            (Ok(msg), true) => {
                unexpected += 1;
                println!("criterion {id} PASS (unexpected; update EXPECTED_FAILURES) [{name}] ({secs:.1}s): {msg}");
            }
        }
    }
    if unexpected > 0 {
        println!("acceptance: {unexpected} unexpected result(s)");
        std::process::exit(1);
    }
    println!("acceptance: all results as expected");
}
