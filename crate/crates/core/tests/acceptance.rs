//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.
//!
//! Every criterion is decided by named checks of the suite reports; a skipped
//! check counts as a failure here.

use qroots_core::qscalars::{qbinom, RootOfUnityConfig};
use qroots_core::rootdata::CartanType;
use qroots_core::suites::{run_suite, Config, Status, SuiteReport};
use std::process::ExitCode;
use std::time::{Duration, Instant};

fn cfg(t: CartanType, ell: u32) -> Config {
    Config::new(t, ell).expect("valid config")
}

fn suite(name: &str, c: &Config) -> Result<SuiteReport, String> {
    run_suite(name, c).map_err(|e| e.to_string())
}

/// All named checks passed.
fn need(r: &SuiteReport, names: &[&str]) -> Result<(), String> {
    for n in names {
        match r.check(n) {
            Some(c) if c.status == Status::Pass => {}
            Some(c) => return Err(format!("{}/{} {:?}: {}", r.suite, n, c.status, c.witness)),
            None => return Err(format!("{}/{} missing", r.suite, n)),
        }
    }
    Ok(())
}

/// Every check of the report passed or was skipped, and at least one passed.
fn need_all(r: &SuiteReport) -> Result<(), String> {
    if let Some(c) = r.checks.iter().find(|c| c.status == Status::Fail) {
        return Err(format!("{}/{} failed: {}", r.suite, c.name, c.witness));
    }
    if !r.checks.iter().any(|c| c.status == Status::Pass) {
        return Err(format!("{}: nothing ran", r.suite));
    }
    Ok(())
}

fn count(r: &SuiteReport, check: &str, key: &str) -> u64 {
    r.check(check).and_then(|c| c.witness.get(key)).and_then(|v| v.as_u64()).unwrap_or(0)
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        Err(format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Ok(())
    }
}

type Criterion = (&'static str, fn() -> Result<String, String>);

fn c1() -> Result<String, String> {
    let start = Instant::now();
    let mut words = Vec::new();
    for (t, ell) in [(CartanType::A1, 3), (CartanType::A2, 5), (CartanType::B2, 3)] {
        let r = suite("hopf", &cfg(t, ell))?;
        need(&r, &["relations", "hopf-axioms"])?;
        words.push(format!("{t}: {} words", count(&r, "hopf-axioms", "words")));
    }
    within(start, Duration::from_secs(60))?;
    Ok(words.join(", "))
}

fn c2() -> Result<String, String> {
    let a1 = suite("pbw", &cfg(CartanType::A1, 3))?;
    need(&a1, &["pbw-products"])?;
    let mut out = vec![format!("A1 {} products", count(&a1, "pbw-products", "products"))];
    for word in [vec![1, 2, 1], vec![2, 1, 2]] {
        let mut c = cfg(CartanType::A2, 5);
        c.w0_word = Some(word.clone());
        let r = suite("pbw", &c)?;
        need(&r, &["pbw-products", "w0-change-of-basis"])?;
        out.push(format!("A2 {:?}: {} products, unimodular", word, count(&r, "pbw-products", "products")));
    }
    Ok(out.join("; "))
}

fn c3() -> Result<String, String> {
    let a2 = suite("braid", &cfg(CartanType::A2, 5))?;
    need(&a2, &["braid-inverse", "braid-relations", "braid-module-forms", "braid-intertwine", "delta-t"])?;
    let a1 = suite("braid", &cfg(CartanType::A1, 3))?;
    need(&a1, &["braid-inverse", "braid-module-forms", "delta-t", "braid-frobenius"])?;
    Ok("T1T2T1 = T2T1T2 (A2); both T_i forms on L(w)+L(2w); Delta T on L(w)xL(w); pullback braid".into())
}

fn c4() -> Result<String, String> {
    let checks = [
        "defining-identities",
        "lemma-antipode",
        "lemma-commutation",
        "lemma-k-factor",
        "lemma-orthogonality",
        "gram-nondegenerate",
        "pm-duality",
    ];
    let mut out = Vec::new();
    for (t, ell) in [(CartanType::A1, 3), (CartanType::A2, 5), (CartanType::B2, 3)] {
        let r = suite("pairing", &cfg(t, ell))?;
        need(&r, &checks)?;
        out.push(format!("{t} ell={ell}"));
    }
    Ok(format!("ht <= 4 for {}", out.join(", ")))
}

fn c5() -> Result<String, String> {
    let r = suite("center", &cfg(CartanType::A1, 3))?;
    need(&r, &["zfr-central", "qbinom-vanishing", "frobenius-bialgebra"])?;
    // independent of the suite: the binomials themselves
    let rc = RootOfUnityConfig::new(3, 2, false).unwrap();
    for k in 1..3 {
        if !rc.specialize(&qbinom(3, k, 2)).unwrap().is_zero() {
            return Err(format!("[3 choose {k}] does not vanish"));
        }
    }
    if count(&r, "frobenius-bialgebra", "max_divided_power") < 6 {
        return Err("divided powers below e^(6)".into());
    }
    Ok(format!("{} divided-power pairs up to e^(6)", count(&r, "frobenius-bialgebra", "pairs")))
}

fn c6() -> Result<String, String> {
    let r = suite("center", &cfg(CartanType::A1, 3))?;
    need(&r, &["hc-image", "m-lambda"])?;
    Ok("Casimir central, iota dot-invariant, m(w) = q(q-q^-1)^2 C".into())
}

fn c7() -> Result<String, String> {
    let start = Instant::now();
    let a1 = suite("omega", &cfg(CartanType::A1, 3))?;
    need(&a1, &["rphi-agreement", "omega-identities"])?;
    let a2 = suite("omega", &cfg(CartanType::A2, 5))?;
    need(&a2, &["rphi-agreement", "omega-identities"])?;
    let loc = suite("local-formulas", &cfg(CartanType::A1, 3))?;
    need(&loc, &["local-formula-1", "local-formula-2", "braid-star-ideal"])?;
    let loc2 = suite("local-formulas", &cfg(CartanType::A2, 5))?;
    need(&loc2, &["braid-star-ideal"])?;
    within(start, Duration::from_secs(600))?;
    Ok(format!(
        "r_phi on {} (A1) + {} (A2) vectors, {} Omega-identity instances",
        count(&a1, "rphi-agreement", "phis"),
        count(&a2, "rphi-agreement", "phis"),
        count(&a1, "omega-identities", "instances") + count(&a2, "omega-identities", "instances")
    ))
}

fn c8() -> Result<String, String> {
    let r = suite("center", &cfg(CartanType::A1, 3))?;
    need(&r, &["omega-routes", "variety-equations"])?;
    let points = count(&r, "omega-routes", "points");
    if points < 10 {
        return Err(format!("only {points} points"));
    }
    let separated = count(&r, "variety-equations", "off_points_separated");
    if separated == 0 {
        return Err("no off-variety point with Omega_1 != Omega_2".into());
    }
    Ok(format!(
        "{points} points agree; Omega_1 = Omega_2 on {} V-points for {} phis; {separated} off-V points separated",
        count(&r, "variety-equations", "v_points"),
        count(&r, "variety-equations", "phis")
    ))
}

fn c9() -> Result<String, String> {
    let r = suite("poisson", &cfg(CartanType::A1, 3))?;
    need(&r, &["poisson-bracket", "poisson-rank", "poisson-radical"])?;
    let pts = count(&r, "poisson-radical", "points");
    if pts < 3 {
        return Err(format!("only {pts} points"));
    }
    Ok(format!("rank 4 = dim V~ and radical dim 2 = dim B~ at {pts} points"))
}

fn c10() -> Result<String, String> {
    let start = Instant::now();
    let r = suite("azumaya", &cfg(CartanType::A1, 3))?;
    need(&r, &["fiber-matrix", "chart-freeness", "xi-twist"])?;
    need_all(&r)?;
    let fibers = r.check("fiber-matrix").unwrap().witness["fibers"].as_array().cloned().unwrap_or_default();
    if fibers.len() < 3 || fibers.iter().any(|f| f["dim"] != 9 || f["n"] != 3) {
        return Err(format!("fibers: {fibers:?}"));
    }
    within(start, Duration::from_secs(1800))?;
    Ok(format!("{} fibers of dim 9 = M_3; free of rank 3 to level 2; twist preserves fibers", fibers.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("relations and Hopf axioms", c1),
        ("PBW integrality and word change", c2),
        ("braid actions", c3),
        ("Drinfeld pairing", c4),
        ("Frobenius center", c5),
        ("Harish-Chandra center", c6),
        ("differential operators", c7),
        ("center on the variety", c8),
        ("Poisson structure", c9),
        ("Azumaya fibers", c10),
    ];
    let mut failed = 0;
    for (k, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {:2} PASS  {title}: {detail} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:2} FAIL  {title}: {why} ({secs:.1}s)", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        ExitCode::FAILURE
    } else {
        println!("all 10 criteria passed");
        ExitCode::SUCCESS
    }
}
