//! End-to-end acceptance battery: one test (and one pass/fail line)
//! per shipped guarantee, each with an explicit wall-clock budget.
//!
//! Exact claims are asserted against the library directly; sampled
//! batteries run through the named suite checks at their documented
//! scales; determinism is checked on the compiled binary itself. The
//! timed sections hold a shared lock so each budget measures one
//! battery alone even when the harness interleaves tests.

use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use wedgelab::euler::{check_euler, hj_element, is_symmetric};
use wedgelab::exact::{frac, RatMatrix};
use wedgelab::gl2::{embed_gl2, verify_embedding};
use wedgelab::modcov::{
    bw_control_setup, catalog_setups, negcond_certificate, verify_certificate, CovarianceStatus,
};
use wedgelab::net::{
    mink_noncov_chain, verify_identity_text, ChainVerdict, CosetNet, IdentityVerdict, RuleSet,
    RuleTag,
};
use wedgelab::suite::{run_suite, SuiteConfig};
use wedgelab::LieAlgebra;

static TIMER_LOCK: Mutex<()> = Mutex::new(());

/// Run `body` alone, assert it fits in `budget`, and print the verdict
/// line for this criterion.
fn timed(label: &str, budget: Duration, body: impl FnOnce() -> Result<String, String>) {
    let guard = TIMER_LOCK.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    drop(guard);
    match outcome {
        Ok(detail) => {
            println!("PASS  {label}: {detail} [{elapsed:.2?}, budget {budget:.0?}]");
            assert!(
                elapsed < budget,
                "{label} exceeded its budget: {elapsed:.2?} >= {budget:.0?}"
            );
        }
        Err(reason) => {
            println!("FAIL  {label}: {reason}");
            panic!("{label} failed: {reason}");
        }
    }
}

/// Run one named suite check at the default seed and surface its
/// details (or first failure).
fn suite_check(name: &str) -> Result<String, String> {
    let report = run_suite(&SuiteConfig::default(), Some(name)).map_err(|e| e.to_string())?;
    let check = report.checks.into_iter().next().ok_or("no check ran")?;
    if check.passed {
        Ok(check.details.join("; "))
    } else {
        Err(check.failures.join("; "))
    }
}

#[test]
fn euler_catalog_reproduction() {
    timed("euler catalog", Duration::from_secs(5), || {
        let mut count = 0;
        for n in 2..=6usize {
            for j in 1..n {
                let x = hj_element(n, j).map_err(|e| format!("h_{j} of sl({n}): {e}"))?;
                let e = check_euler(&x).map_err(|e| format!("h_{j} of sl({n}) not Euler: {e}"))?;
                let sym =
                    is_symmetric(&e).map_err(|e| format!("h_{j} of sl({n}) undecided: {e}"))?;
                if sym != (n == 2 * j) {
                    return Err(format!(
                        "h_{j} of sl({n}): symmetric = {sym}, expected {}",
                        n == 2 * j
                    ));
                }
                count += 1;
            }
        }
        Ok(format!("{count} elements Euler with symmetric ⇔ n = 2j, all exact"))
    });
}

#[test]
fn grading_exactness() {
    timed("grading exactness", Duration::from_secs(5), || {
        let mut count = 0;
        for n in 2..=6usize {
            for j in 1..n {
                let x = hj_element(n, j).map_err(|e| e.to_string())?;
                let e = check_euler(&x).map_err(|e| e.to_string())?;
                let a = e.element().ad();
                if &(&a * &a) * &a != a {
                    return Err(format!("h_{j} of sl({n}): (ad x)³ ≠ ad x"));
                }
                let (pos, zero, neg) = e.grading().dims();
                let dim = e.element().algebra().dim();
                if pos + zero + neg != dim {
                    return Err(format!("h_{j} of sl({n}): grading dims do not sum to {dim}"));
                }
                if pos != neg {
                    return Err(format!("h_{j} of sl({n}): ±1 summands differ ({pos} vs {neg})"));
                }
                count += 1;
            }
        }
        Ok(format!("{count} gradings exact: cubes, dimension sums, ±1 balance"))
    });
}

#[test]
fn gl2_splitting_worked_example() {
    timed("gl(2) splitting", Duration::from_secs(1), || {
        let sl3 = LieAlgebra::sl(3);
        let h = sl3
            .element_from_matrix(&RatMatrix::diagonal(vec![frac(-1, 3), frac(2, 3), frac(-1, 3)]))
            .map_err(|e| e.to_string())?;
        let e = check_euler(&h).map_err(|e| e.to_string())?;
        let emb = embed_gl2(&e).map_err(|e| e.to_string())?;
        let expect_center = RatMatrix::diagonal(vec![frac(1, 6), frac(1, 6), frac(-1, 3)]);
        let expect_inner = RatMatrix::diagonal(vec![frac(1, 2), frac(-1, 2), frac(0, 1)]);
        if emb.h_center.matrix() != expect_center {
            return Err("central half is not diag(1/6, 1/6, −1/3)".into());
        }
        if emb.h_inner.matrix() != expect_inner {
            return Err("inner half is not ½·diag(1, −1, 0)".into());
        }
        verify_embedding(&emb).map_err(|e| format!("bracket table: {e}"))?;
        Ok("h = diag(−1/3, 2/3, −1/3) splits exactly; 16 bracket entries verified".into())
    });
}

#[test]
fn covariance_certificates() {
    timed("covariance certificates", Duration::from_secs(2), || {
        let setups = catalog_setups();
        for setup in &setups {
            let cert = negcond_certificate(setup);
            if cert.status != CovarianceStatus::Violated {
                return Err(format!("{} should be violated", setup.name()));
            }
            if !verify_certificate(setup, &cert) {
                return Err(format!("{} certificate does not re-verify", setup.name()));
            }
        }
        let sl3 = &setups[0];
        let cert = negcond_certificate(sl3);
        if cert.witness_index != Some(1) {
            return Err(format!("sl3 witness index {:?}, expected 1", cert.witness_index));
        }
        if cert.witness.as_ref() != Some(&sl3.subalgebra_basis()[1]) {
            return Err("sl3 witness is not the rotated boost generator".into());
        }
        let expected_obstruction = sl3
            .ambient()
            .element_from_matrix(
                &(&RatMatrix::elementary(3, 1, 0) + &RatMatrix::elementary(3, 0, 1)),
            )
            .map_err(|e| e.to_string())?;
        if cert.obstruction.as_ref() != Some(&expected_obstruction) {
            return Err("sl3 obstruction is not E₂₁ + E₁₂".into());
        }
        let control = bw_control_setup();
        let control_cert = negcond_certificate(&control);
        if control_cert.status != CovarianceStatus::CovariantNecessaryConditionHolds {
            return Err("equal-generator control should satisfy the necessary condition".into());
        }
        if !verify_certificate(&control, &control_cert) {
            return Err("control certificate does not re-verify".into());
        }
        Ok(format!(
            "{} setups violated with exact witnesses (sl3: E₂₁ + E₁₂); control holds",
            setups.len()
        ))
    });
}

#[test]
fn ds2_geometry_battery() {
    timed("dS² geometry", Duration::from_secs(10), || suite_check("ds2-geometry"));
}

#[test]
fn standard_subspace_roundtrips() {
    timed("subspace round-trips", Duration::from_secs(30), || {
        suite_check("stdspace-roundtrip").map(|detail| {
            format!("{detail} (operator comparisons relative to max(1, ‖·‖_F))")
        })
    });
}

#[test]
fn tensor_flow_factorization() {
    timed("tensor flow", Duration::from_secs(5), || suite_check("tensor-flow"));
}

#[test]
fn twisted_duality_transcript() {
    timed("twisted duality", Duration::from_secs(1), || {
        let rules = RuleSet::standard();
        let ctx = CosetNet::ds2_twisted();
        match verify_identity_text("Htilde(W') = Z·Htilde(W)'", &rules, &ctx)
            .map_err(|e| e.to_string())?
        {
            IdentityVerdict::Proved { transcript, .. } => {
                if !transcript.has_tag(RuleTag::EqPrime) {
                    return Err("transcript lacks an eq-prime step".into());
                }
                if !transcript.has_tag(RuleTag::CentralFix) {
                    return Err("transcript lacks a central-fix step".into());
                }
                if !transcript.reverify(&ctx) {
                    return Err("transcript fails numerical re-verification".into());
                }
                let steps = transcript.len();
                match verify_identity_text("Htilde(W') = Htilde(W)'", &rules, &ctx)
                    .map_err(|e| e.to_string())?
                {
                    IdentityVerdict::Refuted { note, .. } => {
                        let note = note.unwrap_or_else(|| "normal forms differ".to_string());
                        Ok(format!(
                            "proved in {steps} steps with eq-prime and central-fix; untwisted variant refuted ({note})"
                        ))
                    }
                    IdentityVerdict::Proved { .. } => {
                        Err("untwisted variant must not hold".into())
                    }
                }
            }
            IdentityVerdict::Refuted { note, .. } => {
                Err(format!("refuted: {}", note.unwrap_or_default()))
            }
        }
    });
}

#[test]
fn minkowski_chain_verdicts() {
    timed("chain verdicts", Duration::from_secs(1), || {
        let setups = catalog_setups();
        let cert = negcond_certificate(&setups[0]);
        let at_one = mink_noncov_chain(&cert, 1.0).map_err(|e| e.to_string())?;
        if at_one.verdict != ChainVerdict::NotEqual {
            return Err("sl3 chain at t = 1 should be unequal".into());
        }
        let at_zero = mink_noncov_chain(&cert, 0.0).map_err(|e| e.to_string())?;
        if at_zero.verdict != ChainVerdict::Equal {
            return Err("sl3 chain at t = 0 should be equal".into());
        }
        let control = bw_control_setup();
        let control_cert = negcond_certificate(&control);
        let control_chain = mink_noncov_chain(&control_cert, 1.0).map_err(|e| e.to_string())?;
        if control_chain.verdict != ChainVerdict::Equal {
            return Err("control chain should be equal".into());
        }
        Ok(format!(
            "violated setup: unequal at t = 1 ({} samples), equal at t = 0; control equal",
            at_one.samples.len()
        ))
    });
}

#[test]
fn deterministic_suite_reports() {
    timed("report determinism", Duration::from_secs(60), || {
        let run = || {
            let output = Command::new(env!("CARGO_BIN_EXE_wedgelab"))
                .args(["suite", "--seed", "42"])
                .env_remove("WEDGELAB_SEED")
                .output()
                .map_err(|e| format!("binary did not start: {e}"))?;
            if !output.status.success() {
                return Err(format!(
                    "suite run failed with {:?}: {}",
                    output.status.code(),
                    String::from_utf8_lossy(&output.stderr)
                ));
            }
            Ok(output.stdout)
        };
        let first = run()?;
        let second = run()?;
        if first != second {
            return Err("two identical-seed suite runs differ".into());
        }
        if first.is_empty() {
            return Err("suite produced no JSON".into());
        }
        Ok(format!("two binary runs byte-identical ({} bytes of JSON)", first.len()))
    });
}
