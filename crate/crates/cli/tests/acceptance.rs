//! Acceptance suite. Runs the `heisenlab` binary from default configs and
//! evaluates each criterion from the written reports at its own tolerance,
//! independent of the tolerance an experiment applies to itself.
//!
//! Prints one `PASS`/`FAIL` line per criterion. Criterion 9 is a known
//! failure (the partial sum of the series stays below 0.99 at 200 terms); it
//! is reported as FAIL and does not make the suite exit non-zero. Any other
//! failure does.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use serde_json::Value;

const KNOWN_FAILURES: [u32; 1] = [9];

struct Run {
    code: i32,
    wall: f64,
    elapsed: f64,
    report: Value,
}

impl Run {
    fn metric(&self, k: &str) -> f64 {
        self.report["metrics"][k].as_f64().unwrap_or(f64::NAN)
    }
    fn check(&self, k: &str) -> Option<&Value> {
        self.report["checks"].as_array()?.iter().find(|c| c["name"] == k)
    }
    fn holds(&self, k: &str) -> bool {
        self.check(k).map(|c| c["pass"] == true).unwrap_or(false)
    }
    fn check_value(&self, k: &str) -> f64 {
        self.check(k).and_then(|c| c["value"].as_f64()).unwrap_or(f64::NAN)
    }
    fn param(&self, k: &str) -> &Value {
        &self.report["params"][k]
    }
    fn passed(&self) -> bool {
        self.report["pass"] == true
    }
}

fn invoke(out: &Path, name: &str, extra: &[&str]) -> Run {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_heisenlab"))
        .args(["--threads", "1", "--out"])
        .arg(out)
        .args(["run", name])
        .args(extra)
        .output()
        .expect("binary runs");
    let wall = start.elapsed().as_secs_f64();
    let read = |f: String| -> Value {
        let p = out.join(f);
        serde_json::from_str(&std::fs::read_to_string(&p).unwrap_or_else(|_| panic!("missing {}", p.display()))).unwrap()
    };
    let report = read(format!("{name}.json"));
    let meta = read(format!("{name}.meta.json"));
    Run { code: status.status.code().unwrap_or(-1), wall, elapsed: meta["elapsed_seconds"].as_f64().unwrap(), report }
}

struct Outcome {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    seconds: f64,
    budget: f64,
    detail: String,
}

struct Ctx<'a> {
    failures: Vec<String>,
    runs: &'a BTreeMap<String, Run>,
}

impl<'a> Ctx<'a> {
    fn run(&self, n: &str) -> &'a Run {
        &self.runs[n]
    }
    fn below(&mut self, what: &str, v: f64, tol: f64) {
        if !(v < tol) {
            self.failures.push(format!("{what} = {v:e}, need < {tol:e}"));
        }
    }
    fn above(&mut self, what: &str, v: f64, tol: f64) {
        if !(v > tol) {
            self.failures.push(format!("{what} = {v:e}, need > {tol:e}"));
        }
    }
    fn require(&mut self, what: &str, ok: bool) {
        if !ok {
            self.failures.push(what.to_string());
        }
    }
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().map(|a| a.iter().filter_map(Value::as_f64).collect()).unwrap_or_default()
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let suite_start = Instant::now();

    let catalog: Value = {
        let o = Command::new(env!("CARGO_BIN_EXE_heisenlab")).args(["list", "--json"]).output().unwrap();
        serde_json::from_slice(&o.stdout).unwrap()
    };
    let names: Vec<String> = catalog.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();

    let mut runs = BTreeMap::new();
    for n in &names {
        runs.insert(n.clone(), invoke(out, n, &[]));
    }
    let controls = tempfile::tempdir().unwrap();
    for op in ["A_H_inv_sqrt", "spectral_nonconstant"] {
        let dir = controls.path().join(op);
        runs.insert(format!("homogeneity:{op}"), invoke(&dir, "homogeneity", &["--set", &format!("operator=\"{op}\"")]));
    }

    let mut outcomes = Vec::new();
    let mut criterion = |id: u32, title: &'static str, budget: f64, used: &[&str], body: &dyn Fn(&mut Ctx) -> String| {
        let mut ctx = Ctx { failures: Vec::new(), runs: &runs };
        let detail = body(&mut ctx);
        let seconds = used.iter().map(|n| runs[*n].wall).sum();
        outcomes.push(Outcome { id, title, failures: ctx.failures, seconds, budget, detail });
    };

    criterion(1, "Hermite orthonormality", 5.0, &["hermite-orthonormality"], &|c| {
        let r = c.run("hermite-orthonormality");
        c.require("n = 1, K = 32", r.param("n") == 1 && r.param("trunc_k") == 32);
        c.require("λ ∈ {0.5, 1, 2}", floats(r.param("lambdas")) == [0.5, 1.0, 2.0]);
        let dev = r.metric("max_offdiag").max(r.metric("max_diag_dev"));
        c.below("max |Gram − I|", dev, 1e-10);
        format!("max dev {dev:.1e}")
    });
    criterion(2, "Ladder and eigen relations", 1.0, &["ladder-relations"], &|c| {
        let e = c.run("ladder-relations").metric("max_relative_error");
        c.below("max relation error", e, 1e-12);
        format!("max err {e:.1e}")
    });
    criterion(3, "Weyl homomorphism", 60.0, &["weyl-homomorphism"], &|c| {
        let r = c.run("weyl-homomorphism");
        c.require("λ = 1, K = 24, 48-point grid", r.param("lambda") == 1.0 && r.param("trunc_k") == 24 && r.param("grid_n") == 48);
        let e = r.metric("relative_hs_residual");
        c.below("relative HS residual", e, 1e-6);
        format!("residual {e:.1e}")
    });
    criterion(4, "Weyl Plancherel", 60.0, &["weyl-plancherel"], &|c| {
        let r = c.run("weyl-plancherel");
        c.require("λ ∈ {0.5, 1, 2}", floats(r.param("lambdas")) == [0.5, 1.0, 2.0]);
        let cv = r.metric("coefficient_of_variation");
        c.below("coefficient of variation", cv, 1e-6);
        format!("CV {cv:.1e}")
    });
    criterion(5, "Laguerre projections", 120.0, &["laguerre-projections"], &|c| {
        let r = c.run("laguerre-projections");
        c.require("k ≤ 8 covered", r.param("k_max").as_u64() >= Some(8));
        let (i, e) = (r.metric("max_idempotency_error"), r.metric("max_eigen_residual"));
        c.below("idempotency error", i, 1e-6);
        c.below("eigen residual", e, 1e-5);
        format!("idem {i:.1e}, eigen {e:.1e}")
    });
    criterion(6, "Heat-mass law", 10.0, &["heat-mass"], &|c| {
        let r = c.run("heat-mass");
        c.require("3×3 (t, λ) grid", floats(r.param("ts")).len() == 3 && floats(r.param("lambdas")).len() == 3);
        let e = r.metric("max_relative_residual");
        c.below("residual after calibration", e, 1e-6);
        format!("residual {e:.1e}")
    });
    criterion(7, "Geller orthonormality", 60.0, &["geller-orthonormality"], &|c| {
        let r = c.run("geller-orthonormality");
        c.require("bands ≤ 3, k ≤ 16", r.param("max_band") == 3 && r.param("k_max") == 16);
        let (g, k) = (r.metric("max_gram_deviation"), r.metric("max_constant_error"));
        c.below("Gram deviation", g, 1e-6);
        c.below("constant error", k, 1e-5);
        format!("gram {g:.1e}, constant {k:.1e}")
    });
    criterion(8, "Homogeneity ledger", 30.0, &["homogeneity", "homogeneity:A_H_inv_sqrt", "homogeneity:spectral_nonconstant"], &|c| {
        let s = c.run("homogeneity");
        c.require("synthesized operator passes", s.passed() && s.code == 0 && s.holds("homogeneous"));
        c.below("B recovery error", s.metric("b_recovery_error"), 1e-8);
        c.below("‖MP_k‖_HS spread", s.metric("level_norm_spread"), 1e-8);
        let a = c.run("homogeneity:A_H_inv_sqrt");
        c.require("A H^{-1/2} control fails", !a.passed() && a.code == 1 && !a.holds("homogeneous"));
        let drift = a.metric("coefficient_drift_10");
        c.above("A H^{-1/2} drift", drift, 1e-2);
        c.below("A H^{-1/2} coefficient vs closed form", a.metric("coefficient_formula_error"), 1e-8);
        let sn = c.run("homogeneity:spectral_nonconstant");
        c.require("non-constant spectral control fails", !sn.passed() && sn.code == 1 && !sn.holds("homogeneous"));
        format!("B err {:.1e}, control drift {drift:.3}", s.metric("b_recovery_error"))
    });
    criterion(9, "Power series and Neumann identity", 1.0, &["power-series", "neumann-identity"], &|c| {
        let p = c.run("power-series");
        c.require("c_1 = 1/2 exactly", p.metric("c1") == 0.5);
        c.require("c_2 = 1/8 exactly", p.metric("c2") == 0.125);
        let s = p.metric("partial_sum");
        c.require(&format!("partial sum {s:.6} in (0.99, 1]"), s > 0.99 && s <= 1.0);
        let n = c.run("neumann-identity").metric("sup_error");
        c.below("Neumann sup error", n, 1e-6);
        format!("Σc_i = {s:.4}, Neumann {n:.1e}")
    });
    criterion(10, "Scaled-Riesz limit", 300.0, &["riesz-limit", "riesz-dilation"], &|c| {
        let r = c.run("riesz-limit");
        c.require("(α, β) = ((1), ())", r.param("alpha") == 1 && r.param("beta") == 0);
        c.require("λ ∈ {1, ½, ¼, ⅛}", floats(r.param("lambdas")) == [1.0, 0.5, 0.25, 0.125]);
        c.require("max error strictly decreasing", r.holds("errors_strictly_decreasing"));
        let f = r.metric("final_relative_error");
        c.below("final relative error", f, 5e-2);
        let d = c.run("riesz-dilation").metric("max_defect");
        c.below("dilation covariance defect", d, 1e-12);
        format!("final {f:.2e}, dilation {d:.1e}")
    });
    criterion(11, "Resolvent convergence on H¹_ε", 600.0, &["heisenberg-resolvent"], &|c| {
        let r = c.run("heisenberg-resolvent");
        c.require("γ = 1, ε ∈ {1, ½, ¼, ⅛}", r.param("gamma") == 1.0 && floats(r.param("eps_seq")) == [1.0, 0.5, 0.25, 0.125]);
        c.require("32³ grid", r.param("grid_n") == 32);
        c.require("L¹ error strictly decreasing", r.holds("errors_strictly_decreasing"));
        c.below("Fourier identity ratio spread", r.check_value("fourier_identity_ratio_spread"), 1e-4);
        c.below("heat homogeneity defect", r.check_value("heat_homogeneity_defect"), 1e-6);
        // the halving ratio is an observed rate and only recorded
        let ratios = floats(r.param("ratios"));
        format!("ratios {}", ratios.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join(" "))
    });
    criterion(12, "Riesz-field convergence", 600.0, &["heisenberg-riesz-field"], &|c| {
        let r = c.run("heisenberg-riesz-field");
        c.require("5 sample points", r.param("points").as_array().map(Vec::len) == Some(5));
        c.require("same ε sequence", floats(r.param("eps_seq")) == [1.0, 0.5, 0.25, 0.125]);
        c.require("pointwise errors decrease", r.holds("pointwise_errors_strictly_decreasing"));
        format!("worst final {:.1e}", (0..5).map(|i| r.metric(&format!("final_error_point_{i}"))).fold(0.0, f64::max))
    });

    // CLI contract
    let golden_root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let golden_cases: [(&str, &[&str]); 2] =
        [("hermite-orthonormality", &["--set", "trunc_k=16"]), ("neumann-identity", &["--set", "points=25"])];
    let mut contract = Vec::new();
    let mut golden_wall = 0.0;
    for (name, extra) in golden_cases {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let ra = invoke(a.path(), name, extra);
        let rb = invoke(b.path(), name, extra);
        golden_wall += ra.wall - ra.elapsed + rb.wall - rb.elapsed;
        let read = |d: &Path| std::fs::read(d.join(format!("{name}.json"))).unwrap();
        let (ba, bb) = (read(a.path()), read(b.path()));
        if ba != bb {
            contract.push(format!("{name}: two runs differ"));
        }
        match std::fs::read(golden_root.join(format!("{name}.json"))) {
            Ok(g) if g == ba => {}
            Ok(_) => contract.push(format!("{name}: differs from committed golden")),
            Err(_) => contract.push(format!("{name}: golden file missing")),
        }
    }
    let mut mismatched = 0;
    for (n, r) in &runs {
        let expected = if r.passed() { 0 } else { 1 };
        if r.code != expected {
            mismatched += 1;
            contract.push(format!("{n}: exit {} but report pass = {}", r.code, r.passed()));
        }
    }
    let overhead: f64 = runs.values().map(|r| r.wall - r.elapsed).sum::<f64>() + golden_wall;
    if overhead >= 30.0 {
        contract.push(format!("CLI overhead {overhead:.1}s, need < 30s"));
    }
    outcomes.push(Outcome {
        id: 13,
        title: "CLI contract",
        failures: contract,
        seconds: overhead,
        budget: 30.0,
        detail: format!("{} experiments, {mismatched} exit mismatches, 2 goldens", names.len()),
    });

    println!();
    let mut unexpected = Vec::new();
    for o in &mut outcomes {
        if o.seconds >= o.budget {
            o.failures.push(format!("took {:.1}s, budget {:.0}s", o.seconds, o.budget));
        }
        let pass = o.failures.is_empty();
        let known = KNOWN_FAILURES.contains(&o.id);
        println!(
            "criterion {:>2} {} {:<36} {:>7.2}s  {}{}",
            o.id,
            if pass { "PASS" } else { "FAIL" },
            o.title,
            o.seconds,
            o.detail,
            if !pass && known { "  [known failure]" } else { "" }
        );
        for f in &o.failures {
            println!("              - {f}");
        }
        if !pass && !known {
            unexpected.push(o.id);
        }
    }
    println!("acceptance suite wall time {:.1}s", suite_start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
