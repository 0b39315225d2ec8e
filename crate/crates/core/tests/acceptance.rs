//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use cvteleport::dsl::{self, bundled, parse, Overrides};
use cvteleport::engine::{qnd_couple, ModeRegistry, ModeSpec, QuadratureForm};
use cvteleport::montecarlo::{estimate_added_noise, McConfig};
use cvteleport::protocols::{
    added_noise_qnd, added_noise_qnd_from_vc, added_noise_squeezed, gain_from_conditional_variance,
    run_classical_teleport, run_qnd_teleport, run_squeezed_teleport, ClassicalTeleporter,
    ProtocolParams, SqueezedTeleporter, Teleporter,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT: f64 = 1e-12;
const REPORTED: f64 = 1e-6;
const MC_SIGMAS: f64 = 3.0;
const MC_TRIALS: u64 = 1_000_000;
const MC_SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(t)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn gains() -> [f64; 4] {
    [1.0 / 3f64.sqrt(), 1.0, 2.0, 5.0]
}

/// Output forms `X_in + g⁻¹X_a` and `Y_in − Y_b` with nothing else.
fn qnd_coefficient_identity(
    reg: &ModeRegistry,
    x: &QuadratureForm,
    y: &QuadratureForm,
    g: f64,
) -> Result<f64, String> {
    let id = |l: &str| reg.find(l).ok_or_else(|| format!("no mode labelled {l}"));
    let (m_in, a, b) = (id("in")?, id("a")?, id("b")?);
    let want_x = QuadratureForm::from_terms(0.0, [(m_in, 1.0, 0.0), (a, 1.0 / g, 0.0)]);
    let want_y = QuadratureForm::from_terms(0.0, [(m_in, 0.0, 1.0), (b, 0.0, -1.0)]);
    let d = x.max_abs_diff(&want_x).max(y.max_abs_diff(&want_y));
    ensure(d < EXACT, || format!("g={g}: coefficient deviation {d:e}"))?;
    Ok(d)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for g in gains() {
        let out = run_qnd_teleport(&ProtocolParams::matched(g).map_err(e)?).map_err(e)?;
        worst = worst.max(qnd_coefficient_identity(
            &out.registry,
            out.output.x(),
            out.output.y(),
            g,
        )?);
    }
    let t = within_time(start, Duration::from_secs(1))?;
    Ok(format!(
        "max |Δ| = {worst:.1e} over g ∈ {{1/√3, 1, 2, 5}} (tol {EXACT:e}), {t:.2?} < 1 s"
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let vac = ModeSpec::vacuum();
    let n = run_classical_teleport(&vac, &vac, &vac)
        .map_err(e)?
        .n_add
        .ok_or("no n_add")?;
    ensure((n - 2.0).abs() < EXACT, || {
        format!("vacuum ancillas give {n}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut lowest = f64::INFINITY;
    for _ in 0..10_000 {
        let draw = |rng: &mut ChaCha8Rng| {
            if rng.random::<bool>() {
                common::random_pure_spec(rng)
            } else {
                common::random_spec(rng).with_means(0.0, 0.0)
            }
        };
        let v = draw(&mut rng);
        let w = draw(&mut rng);
        let input = common::random_spec(&mut rng);
        let n = run_classical_teleport(&input, &v, &w)
            .map_err(e)?
            .n_add
            .ok_or("no n_add")?;
        lowest = lowest.min(n);
        ensure(n >= 2.0 - EXACT, || {
            format!("n_add {n} below floor for {v:?}, {w:?}")
        })?;
    }
    let t = within_time(start, Duration::from_secs(5))?;
    Ok(format!("vacuum n_add = {n:.15}; min over 10⁴ random ancilla pairs = {lowest:.9} ≥ 2 − {EXACT:e}; {t:.2?} < 5 s"))
}

fn criterion_3() -> Outcome {
    let g0 = 1.0 / 3f64.sqrt();
    let at = added_noise_qnd(g0, 1.0, 1.0).map_err(e)?;
    let engine_at = run_qnd_teleport(&ProtocolParams::matched(g0).map_err(e)?)
        .map_err(e)?
        .n_add
        .ok_or("no n_add")?;
    let via_vc = added_noise_qnd_from_vc(0.75, 1.0, 1.0).map_err(e)?;
    for (what, v) in [
        ("closed form", at),
        ("engine", engine_at),
        ("V_c = 3/4", via_vc),
    ] {
        ensure((v - 2.0).abs() < EXACT, || {
            format!("{what} at threshold gives {v}")
        })?;
    }
    let g1 = g0 + 1e-6;
    let above = added_noise_qnd(g1, 1.0, 1.0).map_err(e)?;
    let engine_above = run_qnd_teleport(&ProtocolParams::matched(g1).map_err(e)?)
        .map_err(e)?
        .n_add
        .ok_or("no n_add")?;
    ensure(above < 2.0 && engine_above < 2.0, || {
        format!("above threshold: {above}, {engine_above}")
    })?;
    Ok(format!("n_add(1/√3) = {at:.15} (engine {engine_at:.15}, V_c=¾ {via_vc:.15}); n_add(1/√3 + 1e-6) = {above:.9} < 2"))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let g = 10.0 * (1.0 - rng.random::<f64>());
        let mut reg = ModeRegistry::new();
        let (_, a) = reg
            .allocate_mode(ModeSpec::coherent(rng.random(), rng.random()))
            .map_err(e)?;
        let (_, b) = reg
            .allocate_mode(ModeSpec::coherent(rng.random(), rng.random()))
            .map_err(e)?;
        let (a, b) = qnd_couple(a, b, g).map_err(e)?;
        let vc = reg.conditional_variance(b.x(), a.x()).map_err(e)?;
        let d = (vc - 1.0 / (1.0 + g * g)).abs();
        worst = worst.max(d);
        ensure(d < EXACT, || format!("g={g}: V_c = {vc}"))?;
    }
    Ok(format!(
        "max |V_c − 1/(1+g²)| = {worst:.1e} over 20 random g ∈ (0, 10]"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let g = rng.random_range(0.25..=10.0);
        let va = rng.random_range(0.05..=5.0);
        let vb = rng.random_range(0.05..=5.0);
        let a = added_noise_qnd(g, va, vb).map_err(e)?;
        let b = added_noise_qnd_from_vc(1.0 / (1.0 + g * g), va, vb).map_err(e)?;
        worst = worst.max((a - b).abs());
        ensure((a - b).abs() < EXACT, || {
            format!("g={g} V_a={va} V_b={vb}: {a} vs {b}")
        })?;
    }
    Ok(format!(
        "max |Δ| = {worst:.1e} over 10³ random (g, V_a, V_b)"
    ))
}

fn criterion_6() -> Outcome {
    let levels: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
    let mut worst: f64 = 0.0;
    for &v1 in &levels {
        for &v2 in &levels {
            let n = run_squeezed_teleport(&ModeSpec::vacuum(), v1, v2)
                .map_err(e)?
                .n_add
                .ok_or("no n_add")?;
            worst = worst.max((n - (v1 + v2)).abs());
            ensure((n - (v1 + v2)).abs() < EXACT, || {
                format!("V1={v1} V2={v2}: {n}")
            })?;
        }
    }
    let mut comparisons = 0;
    for &v in &levels {
        for k in 1..15 {
            let vc = 0.05 * k as f64;
            let g = gain_from_conditional_variance(vc).map_err(e)?;
            let params = ProtocolParams::matched(g).map_err(e)?.with_ancillas(
                ModeSpec::squeezed_x(v).map_err(e)?,
                ModeSpec::squeezed_y(v).map_err(e)?,
            );
            let qnd = run_qnd_teleport(&params)
                .map_err(e)?
                .n_add
                .ok_or("no n_add")?;
            let sq = added_noise_squeezed(v, v).map_err(e)?;
            ensure(qnd < sq, || {
                format!("V={v} V_c={vc}: QND {qnd} ≥ squeezed {sq}")
            })?;
            comparisons += 1;
        }
    }
    Ok(format!("max |n_add − (V1+V2)| = {worst:.1e} on 10×10 grid; QND < squeezed in {comparisons}/{comparisons} cases with V_c < ¾"))
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for (vc, want) in [(0.45, 0.909091), (0.65, 1.428571), (0.70, 1.666667)] {
        let closed = added_noise_qnd_from_vc(vc, 1.0, 1.0).map_err(e)?;
        let params =
            ProtocolParams::matched(gain_from_conditional_variance(vc).map_err(e)?).map_err(e)?;
        let engine = run_qnd_teleport(&params)
            .map_err(e)?
            .n_add
            .ok_or("no n_add")?;
        for v in [closed, engine] {
            ensure((v - want).abs() < REPORTED && v < 2.0, || {
                format!("V_c={vc}: {v} vs {want}")
            })?;
        }
        parts.push(format!("V_c={vc} → {engine:.6}"));
    }
    Ok(format!("{} (tol {REPORTED:e}), all < 2", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    type Cell = (&'static str, Box<dyn Teleporter + Sync>, f64);
    let cells: [Cell; 3] = [
        (
            "qnd g=1",
            Box::new(ProtocolParams::matched(1.0).map_err(e)?),
            1.0,
        ),
        ("classical", Box::new(ClassicalTeleporter::default()), 2.0),
        (
            "squeezed 0.5",
            Box::new(SqueezedTeleporter::new(0.5, 0.5).map_err(e)?),
            1.0,
        ),
    ];
    let input = ModeSpec::coherent(1.0, -0.5);
    let cfg = McConfig::new(MC_TRIALS, MC_SEED);
    let mut parts = Vec::new();
    for (name, proto, exact) in cells {
        let start = Instant::now();
        let est = estimate_added_noise(proto.as_ref(), &input, &cfg).map_err(e)?;
        let t = within_time(start, Duration::from_secs(30)).map_err(|m| format!("{name}: {m}"))?;
        let again = estimate_added_noise(proto.as_ref(), &input, &cfg).map_err(e)?;
        ensure(est == again, || format!("{name}: not deterministic"))?;
        ensure(est.agrees_with(exact, MC_SIGMAS), || {
            format!("{name}: {} ± {} vs {exact}", est.n_add_hat, est.std_error)
        })?;
        parts.push(format!(
            "{name}: {:.4}±{:.4} (z={:+.2}, {t:.1?})",
            est.n_add_hat,
            est.std_error,
            est.z_score(exact)
        ));
    }
    Ok(format!("10⁶ trials, seed {MC_SEED}: {}", parts.join("; ")))
}

fn criterion_9() -> Outcome {
    let mut beams: f64 = 0.0;
    let mut feeds: f64 = 0.0;
    let (mut elements, mut feedforwards) = (0, 0);
    for seed in 0..1000u64 {
        let s = common::random_circuit(seed);
        beams = beams.max(s.beam_pairing_error);
        feeds = feeds.max(s.feed_pairing_error);
        elements += s.elements;
        feedforwards += s.feedforwards;
    }
    ensure(beams < EXACT && feeds < EXACT, || {
        format!("Ω error {beams:e}, feed pairing {feeds:e}")
    })?;
    Ok(format!(
        "10³ circuits, {elements} elements, {feedforwards} feedforwards: max |Ω−1| = {beams:.1e}, max feed pairing = {feeds:.1e}"
    ))
}

fn criterion_10() -> Outcome {
    for g in gains() {
        let o: Overrides = [("g".to_string(), g)].into();
        let program = parse(bundled::QND_TELEPORT).map_err(e)?;
        let rep = dsl::execute(&program, &o).map_err(e)?;
        let get = |l: &str| {
            rep.coefficients
                .iter()
                .find(|c| c.label == l)
                .map(|c| (c.cx, c.cy))
                .ok_or(l.to_string())
        };
        let want = [
            ("in", (1.0, 1.0)),
            ("a", (1.0 / g, 0.0)),
            ("b", (0.0, -1.0)),
        ];
        for (l, w) in want {
            let c = get(l)?;
            ensure(
                (c.0 - w.0).abs() < EXACT && (c.1 - w.1).abs() < EXACT,
                || format!("g={g} {l}: {c:?}"),
            )?;
        }
        ensure(rep.coefficients.len() == 3, || {
            format!("unexpected modes {:?}", rep.coefficients)
        })?;
    }
    let classical = dsl::run_source(bundled::CLASSICAL, &Overrides::new())
        .map_err(e)?
        .n_add
        .ok_or("no n_add")?;
    ensure((classical - 2.0).abs() < EXACT, || {
        format!("classical.cvc gives {classical}")
    })?;
    let levels: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
    for &v1 in &levels {
        for &v2 in &levels {
            let o: Overrides = [("V1".to_string(), v1), ("V2".to_string(), v2)].into();
            let n = dsl::run_source(bundled::SQUEEZED, &o)
                .map_err(e)?
                .n_add
                .ok_or("no n_add")?;
            ensure((n - (v1 + v2)).abs() < EXACT, || {
                format!("squeezed.cvc V1={v1} V2={v2}: {n}")
            })?;
        }
    }
    for (name, src) in bundled::ALL {
        let a = parse(src).map_err(e)?;
        let b = parse(&a.to_string()).map_err(e)?;
        ensure(a.without_spans() == b.without_spans(), || {
            format!("{name} does not round-trip")
        })?;
    }
    Ok("qnd_teleport.cvc coefficients at 4 gains, classical.cvc n_add = 2, squeezed.cvc on 10×10 grid, 3/3 round-trips".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("coefficient identity", criterion_1),
        ("classical floor", criterion_2),
        ("quantum threshold", criterion_3),
        ("conditional variance", criterion_4),
        ("metric consistency", criterion_5),
        ("squeezed baseline", criterion_6),
        ("experimental regime", criterion_7),
        ("monte carlo oracle", criterion_8),
        ("symplectic property suite", criterion_9),
        ("dsl equivalence", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
