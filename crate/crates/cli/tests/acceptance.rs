//! Acceptance criteria. Run with
//! `cargo test -p pulsesynth-cli --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pulsesynth::decompose::{euler_decompose, trotterize, SingleOp};
use pulsesynth::format::parse_expansion;
use pulsesynth::gates::GateSpec;
use pulsesynth::generator::{reconstruct, GeneratorExpansion};
use pulsesynth::linalg::{matrix_exp_hermitian, max_abs_diff};
use pulsesynth::pauli::enumerate_basis;
use pulsesynth::pipeline::{compile_unitary, CompileOptions};
use pulsesynth::reduce::{
    cnot_sequence, composite_z, reduce_coupling_order, PulseOp, PulseSequence, ReduceOptions,
};
use pulsesynth::sim::{equal_up_to_phase, op_matrix, simulate, simulate_plan};
use pulsesynth::{Axis, Complex64, ComplexMatrix, DecompositionPlan, PauliString, Strategy};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pulsesynth"))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn exp_of(s: &PauliString, angle: f64) -> ComplexMatrix {
    matrix_exp_hermitian(&s.materialize().scale_real(angle)).unwrap()
}

fn p(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn toffoli() -> ComplexMatrix {
    GateSpec::toffoli().build().unwrap()
}

/// Hand-written toffoli pulse sequence in time order.
fn printed_toffoli_sequence() -> String {
    let q = "0.785398163397448";
    let h = "1.5707963267949";
    format!(
        "spins 3\n\
         R 3 y -{h}\n\
         R 2 x -{h}\nJ 1 2 -{h}\nR 2 y -{h}\n\
         J 2 3 {q}\n\
         R 2 y {h}\nJ 1 2 {h}\nR 2 x {h}\n\
         J 2 3 -{q}\n\
         J 1 3 -{q}\n\
         R 3 y {h}\n\
         R 3 x {q}\n\
         J 1 2 -{q}\n\
         R 2 z {q}\n\
         R 1 z {q}\n"
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = bin()
        .args(["expand", "--gate", "toffoli", "--branch", "lower"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.success(), "expand exited with failure")?;
    let exp = parse_expansion(&String::from_utf8_lossy(&out.stdout)).map_err(|e| e.to_string())?;
    let want = [
        ("000", -1.0 / 8.0),
        ("z00", 0.25),
        ("0z0", 0.25),
        ("zz0", -0.25),
        ("00x", 0.25),
        ("z0x", -0.25),
        ("0zx", -0.25),
        ("zzx", 0.25),
    ];
    let mut worst: f64 = 0.0;
    for (s, c) in want {
        let got = if s == "000" {
            exp.identity_coeff
        } else {
            exp.get(&p(s))
        };
        worst = worst.max((got - c * PI).abs());
    }
    ensure(
        exp.len() == 7,
        format!("expected 7 non-identity terms, got {}", exp.len()),
    )?;
    ensure(worst < 1e-9, format!("max coefficient error {worst:e}"))?;
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;
    Ok(format!("max coefficient error {worst:.1e}, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let u = toffoli();
    let report = compile_unitary(&u, &CompileOptions::default()).map_err(|e| e.to_string())?;
    let compiled = equal_up_to_phase(&u, &simulate(&report.sequence).unwrap(), 1e-9).unwrap();
    ensure(
        report.exact && report.strategy == Strategy::Commuting,
        "expected exact commuting compile",
    )?;
    ensure(
        compiled.equal,
        format!("compiled residual {:e}", compiled.residual),
    )?;

    let printed = pulsesynth::format::parse_sequence(&printed_toffoli_sequence()).unwrap();
    let transcribed = equal_up_to_phase(&u, &simulate(&printed).unwrap(), 1e-9).unwrap();
    ensure(
        transcribed.equal,
        format!("transcribed residual {:e}", transcribed.residual),
    )?;
    let elapsed = start.elapsed();
    ensure(
        elapsed < Duration::from_secs(1),
        format!("took {elapsed:?}"),
    )?;

    // the same through the CLI
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("tof.seq");
    let status = bin()
        .args(["compile", "--gate", "toffoli", "--out"])
        .arg(&seq)
        .status()
        .unwrap();
    ensure(status.code() == Some(0), "compile exit status")?;
    let status = bin()
        .arg("verify")
        .arg(&seq)
        .args(["--gate", "toffoli"])
        .output()
        .unwrap();
    ensure(status.status.code() == Some(0), "verify of compiled output")?;
    let printed = dir.path().join("printed.seq");
    std::fs::write(&printed, printed_toffoli_sequence()).unwrap();
    let status = bin()
        .arg("verify")
        .arg(&printed)
        .args(["--gate", "toffoli"])
        .output()
        .unwrap();
    ensure(
        status.status.code() == Some(0),
        "verify of transcribed sequence",
    )?;

    Ok(format!(
        "compiled residual {:.1e} ({} ops), transcribed residual {:.1e}, {elapsed:.2?}",
        compiled.residual, report.op_count, transcribed.residual
    ))
}

fn criterion_3() -> Outcome {
    let seq = PulseSequence::new(2, cnot_sequence(1, 2).unwrap());
    let cnot = GateSpec::cnot(1, 2).build().unwrap();
    let check = equal_up_to_phase(&simulate(&seq).unwrap(), &cnot, 1e-12).unwrap();
    ensure(check.equal, format!("residual {:e}", check.residual))?;
    ensure(
        (check.phase + FRAC_PI_4).abs() < 1e-12,
        format!("phase {}", check.phase),
    )?;

    // independent route: the five factors as matrix exponentials, in printed order
    let factors = [
        exp_of(&p("z0"), FRAC_PI_2),
        exp_of(&p("0x"), FRAC_PI_2),
        exp_of(&p("0y"), FRAC_PI_2),
        exp_of(&p("zz"), -FRAC_PI_2),
        exp_of(&p("0y"), -FRAC_PI_2),
    ];
    let product = factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| &acc * f);
    let want = cnot.scale(Complex64::from_polar(1.0, -FRAC_PI_4));
    let oracle = max_abs_diff(&product, &want).unwrap();
    ensure(
        oracle < 1e-12,
        format!("five-matrix product differs by {oracle:e}"),
    )?;
    Ok(format!(
        "residual {:.1e}, phase {:.12}",
        check.residual, check.phase
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let phi = rng.gen_range(-2.0 * PI..2.0 * PI);
        let got = simulate(&PulseSequence::new(1, composite_z(1, phi))).unwrap();
        worst = worst.max(max_abs_diff(&got, &exp_of(&p("z"), phi)).unwrap());
    }
    ensure(worst < 1e-12, format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e} over 100 angles"))
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let spins = rng.gen_range(1..=3);
        let basis: Vec<PauliString> = enumerate_basis(spins)
            .into_iter()
            .filter(|s| !s.is_identity())
            .collect();
        let (a, b) = loop {
            let a = basis[rng.gen_range(0..basis.len())].clone();
            let b = basis[rng.gen_range(0..basis.len())].clone();
            if !a.commutes(&b).unwrap() {
                break (a, b);
            }
        };
        let (ba, bb) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let ops =
            euler_decompose(&SingleOp::new(a.clone(), ba), &SingleOp::new(b.clone(), bb)).unwrap();
        let plan = DecompositionPlan {
            spins,
            ops,
            exact: true,
            trotter_steps: 0,
            strategy: Strategy::Euler,
            global_phase: 0.0,
        };
        let g = &a.materialize().scale_real(ba) + &b.materialize().scale_real(bb);
        let want = matrix_exp_hermitian(&g).unwrap();
        worst = worst.max(max_abs_diff(&simulate_plan(&plan).unwrap(), &want).unwrap());
    }
    ensure(worst < 1e-10, format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:.1e} over 50 pairs"))
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let mut block: f64 = 0.0;
    let mut reduced: f64 = 0.0;
    for _ in 0..20 {
        let phi = rng.gen_range(-2.0 * PI..2.0 * PI);
        let full = exp_of(&p("zzz"), phi);
        let upper = op_matrix(&PulseOp::j(1, 2, phi), 2).unwrap();
        let lower = op_matrix(&PulseOp::j(1, 2, -phi), 2).unwrap();
        let mut want = ComplexMatrix::zeros(8);
        for r in 0..4 {
            for c in 0..4 {
                want[(r, c)] = upper[(r, c)];
                want[(r + 4, c + 4)] = lower[(r, c)];
            }
        }
        block = block.max(max_abs_diff(&full, &want).unwrap());

        let seq =
            reduce_coupling_order(&SingleOp::new(p("zzz"), phi), ReduceOptions::default()).unwrap();
        reduced = reduced.max(
            equal_up_to_phase(&full, &simulate(&seq).unwrap(), 1e-10)
                .unwrap()
                .residual,
        );
    }
    ensure(block < 1e-12, format!("block structure residual {block:e}"))?;
    ensure(reduced < 1e-10, format!("reduction residual {reduced:e}"))?;
    Ok(format!(
        "block residual {block:.1e}, reduction residual {reduced:.1e}"
    ))
}

fn criterion_7() -> Outcome {
    let mut notes = Vec::new();
    for n in 3..=5 {
        let start = Instant::now();
        let s = PauliString::new(vec![Axis::Z; n]);
        let phi = 0.7321;
        let seq = reduce_coupling_order(&SingleOp::new(s.clone(), phi), ReduceOptions::default())
            .unwrap();
        let check = equal_up_to_phase(&exp_of(&s, phi), &simulate(&seq).unwrap(), 1e-9).unwrap();
        let elapsed = start.elapsed();
        ensure(seq.only_allowed(false), "disallowed pulse emitted")?;
        ensure(check.equal, format!("n={n} residual {:e}", check.residual))?;
        ensure(seq.len() <= 12 * n, format!("n={n} has {} ops", seq.len()))?;
        ensure(
            elapsed < Duration::from_secs(10),
            format!("n={n} took {elapsed:?}"),
        )?;
        notes.push(format!(
            "n={n}: {} ops, residual {:.1e}",
            seq.len(),
            check.residual
        ));
    }
    Ok(notes.join("; "))
}

fn criterion_8() -> Outcome {
    let mut pairs = 0;
    for spins in 1..=3 {
        let basis = enumerate_basis(spins);
        let mats: Vec<ComplexMatrix> = basis.iter().map(|s| s.materialize()).collect();
        let norm = f64::powi(2.0, spins as i32 - 2);
        for (a, ma) in basis.iter().zip(&mats) {
            for (b, mb) in basis.iter().zip(&mats) {
                let ab = ma * mb;
                let want = if a == b { norm } else { 0.0 };
                ensure((ab.trace() - want).norm() < 1e-12, format!("tr({a} {b})"))?;
                let zero = (&ab - &(mb * ma)).max_abs() < 1e-12;
                ensure(
                    a.commutes(b).unwrap() == zero,
                    format!("commutes({a}, {b})"),
                )?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs checked"))
}

fn random_commuting_zx(rng: &mut StdRng, spins: usize) -> GeneratorExpansion {
    let pool: Vec<PauliString> = enumerate_basis(spins)
        .into_iter()
        .filter(|s| !s.is_identity() && !s.axes().contains(&Axis::Y))
        .collect();
    let wanted = rng.gen_range(1..=4);
    let mut chosen: Vec<PauliString> = Vec::new();
    for _ in 0..64 {
        if chosen.len() == wanted {
            break;
        }
        let s = &pool[rng.gen_range(0..pool.len())];
        if !chosen.contains(s) && chosen.iter().all(|c| c.commutes(s).unwrap()) {
            chosen.push(s.clone());
        }
    }
    let mut exp = GeneratorExpansion::new(spins);
    for s in chosen {
        exp.add(s, rng.gen_range(-PI..PI));
    }
    exp
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for k in 0..200 {
        let spins = rng.gen_range(1..=3);
        let exp = random_commuting_zx(&mut rng, spins);
        let u = matrix_exp_hermitian(&reconstruct(&exp)).unwrap();
        let r = compile_unitary(&u, &CompileOptions::default())
            .map_err(|e| format!("case {k}: {e}"))?;
        ensure(r.exact, format!("case {k}: not exact ({})", r.strategy))?;
        let check = equal_up_to_phase(&u, &simulate(&r.sequence).unwrap(), 1e-8).unwrap();
        ensure(
            check.equal,
            format!("case {k}: residual {:e}", check.residual),
        )?;
        worst = worst.max(check.residual);
    }
    Ok(format!("max residual {worst:.1e} over 200 unitaries"))
}

fn criterion_10() -> Outcome {
    let exp = GeneratorExpansion::new(1)
        .with("x", FRAC_PI_4)
        .with("z", FRAC_PI_4);
    let want = matrix_exp_hermitian(&reconstruct(&exp)).unwrap();
    let err = |n| {
        max_abs_diff(
            &simulate_plan(&trotterize(&exp, n).unwrap()).unwrap(),
            &want,
        )
        .unwrap()
    };
    let mut ratios = Vec::new();
    for n in [1, 2, 4, 8] {
        let (a, b) = (err(n), err(2 * n));
        ensure(
            b < a,
            format!("error did not decrease from {n} to {}", 2 * n),
        )?;
        let ratio = a / b;
        ensure(
            (1.5..=2.5).contains(&ratio),
            format!("ratio at n={n} is {ratio}"),
        )?;
        ratios.push(format!("{ratio:.3}"));
    }
    let e16 = err(16);
    ensure(e16 < 0.05, format!("error at 16 steps {e16}"))?;
    Ok(format!(
        "ratios [{}], error(16) = {e16:.4}",
        ratios.join(", ")
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("toffoli generator expansion", criterion_1),
        ("toffoli end-to-end and printed sequence", criterion_2),
        ("c-NOT pulse identity and phase", criterion_3),
        ("composite z rotation", criterion_4),
        ("Euler sandwich", criterion_5),
        ("third-order block structure", criterion_6),
        ("order-n coupling reduction", criterion_7),
        ("basis orthogonality and commutation", criterion_8),
        ("random commuting round trip", criterion_9),
        ("Trotter fallback convergence", criterion_10),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
