//! Acceptance suite: one test per criterion, each printing a pass line
//! (visible with `cargo test --test acceptance -- --nocapture`).

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;

use wavemix::eval::{eval_chi, eval_s, EvalParams};
use wavemix::oracle::{oracle_chi, ClassicalField, OracleParams};
use wavemix::process::{ModeSpec, ProcessSpec};
use wavemix::sample;
use wavemix::spectra::{kh_pair, pole_table, rayleigh_process, HalfPlane};
use wavemix::system::LevelSystem;
use wavemix::terms::{cached_terms, expand_scattering, expand_susceptibility, TermKind};

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

fn budget(start: Instant, limit: Duration, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < limit,
        "{label}: runtime {elapsed:?} exceeds budget {limit:?}"
    );
}

fn two_level() -> LevelSystem {
    LevelSystem::from_json(r#"{"energies":[0,1],"dipole":[[0,1],[1,0]]}"#).unwrap()
}

/// dt that divides the window exactly, transients snapped to the step grid.
fn grid_params(dt_target: f64, t_transient: f64, t_window: f64) -> OracleParams {
    let steps = (t_window / dt_target).round();
    let dt = t_window / steps;
    OracleParams {
        dt,
        t_transient: (t_transient / dt).round() * dt,
        t_window,
        integrator_order: 4,
    }
}

#[test]
fn criterion_1_term_counts() {
    let start = Instant::now();
    let expected = [2usize, 6, 24, 120, 720];
    for (n, &count) in (1..=5).zip(&expected) {
        let s = expand_scattering(n);
        let chi = expand_susceptibility(n);
        assert_eq!(s.terms.len(), count, "S, n = {n}");
        assert_eq!(chi.terms.len(), count, "chi, n = {n}");
        for m in 0..=n {
            let group = chi
                .terms
                .iter()
                .filter(|t| t.basic_index == Some(m))
                .count();
            assert_eq!(group, factorial(n), "chi grouping, n = {n}, m = {m}");
        }
    }
    budget(start, Duration::from_secs(1), "criterion 1");
    println!("criterion 1 PASS: term counts (n+1)! for n = 1..5, chi grouped (n+1) x n!");
}

#[test]
fn criterion_2_kramers_heisenberg_split() {
    let start = Instant::now();
    let sys = two_level();
    let (omega, eps) = (0.5, 0.1);
    let proc = rayleigh_process(omega).unwrap();
    let params = EvalParams::with_epsilon(eps);

    let s = eval_s(&sys, &proc, &params).unwrap();
    let chi = eval_chi(&sys, &proc, &params).unwrap();
    let (s_direct, chi_direct) = kh_pair(&sys, omega, eps).unwrap();
    assert!(rel(s.total, s_direct) <= 1e-14, "{} vs {s_direct}", s.total);
    assert!(
        rel(chi.total, chi_direct) <= 1e-14,
        "{} vs {chi_direct}",
        chi.total
    );

    // Shared resonant term, bit for bit.
    assert_eq!(s.per_term[0].1, chi.per_term[0].1);

    // Antiresonant denominators differ only in the sign of eps. |V01| = 1,
    // so each single-factor term value is exactly 1/denominator.
    let denom_s = 1.0 / s.per_term[1].1;
    let denom_chi = 1.0 / chi.per_term[1].1;
    assert!((denom_s.re - denom_chi.re).abs() <= 1e-14 * denom_s.re.abs());
    assert!((denom_s.im - eps).abs() <= 1e-14, "constant sign: {denom_s}");
    assert!((denom_chi.im + eps).abs() <= 1e-14, "opposite sign: {denom_chi}");

    budget(start, Duration::from_secs(1), "criterion 2");
    println!(
        "criterion 2 PASS: generic pipeline matches kh_pair to 1e-14; antiresonant \
         denominators carry +eps (S) and -eps (chi)"
    );
}

#[test]
fn criterion_3_off_resonance_equivalence() {
    let start = Instant::now();
    let params = EvalParams::default();
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    for seed in 0..100u64 {
        let mut rng = sample::rng(seed);
        let levels = if seed % 2 == 0 { 3 } else { 4 };
        let sys = sample::random_system(&mut rng, levels);
        for order in 1..=3 {
            let proc = sample::random_offresonant_process(&mut rng, &sys, order, 0.1);
            let chi = eval_chi(&sys, &proc, &params).unwrap().total;
            let s = eval_s(&sys, &proc, &params).unwrap().total;
            let r = rel(chi, s);
            assert!(r <= 1e-12, "seed {seed}, order {order}: rel {r:.3e}");
            worst = worst.max(r);
            checked += 1;
        }
    }
    assert_eq!(checked, 300);
    budget(start, Duration::from_secs(30), "criterion 3");
    println!(
        "criterion 3 PASS: chi = S at eps = 0 over 100 systems x orders 1..3 \
         (worst rel {worst:.2e})"
    );
}

#[test]
fn criterion_4_pole_half_planes() {
    let start = Instant::now();
    let sys = two_level();
    let proc = ProcessSpec::new(
        vec![
            ModeSpec::absorbed(0.37, 1),
            ModeSpec::absorbed(0.59, 1),
            ModeSpec::absorbed(0.83, 1),
            ModeSpec::emitted(1.79, 0),
        ],
        0,
        None,
    )
    .unwrap();

    let s_report = pole_table(TermKind::Noncausal, &sys, &proc, 0.05).unwrap();
    assert_eq!(s_report.terms.len(), 24);
    for (id, entries) in s_report.terms.iter().enumerate() {
        assert!(
            entries.iter().all(|e| e.half_plane == HalfPlane::Lower),
            "S term {id}"
        );
    }

    let chi_report = pole_table(TermKind::Causal, &sys, &proc, 0.05).unwrap();
    let list = cached_terms(TermKind::Causal, 3);
    for (id, term) in list.terms.iter().enumerate() {
        assert_eq!(
            chi_report.upper_slot_count(id),
            term.basic_index.unwrap(),
            "chi term {id}"
        );
    }
    budget(start, Duration::from_secs(1), "criterion 4");
    println!(
        "criterion 4 PASS: all 24 S terms lower-half-plane; chi terms carry exactly m \
         upper-half-plane slots for m = 0..3"
    );
}

#[test]
fn criterion_5_mode_symmetry() {
    let start = Instant::now();
    let mut rng = sample::rng(42);
    let sys = sample::random_system(&mut rng, 4);
    let base_modes = vec![
        ModeSpec::absorbed(0.41, 1),
        ModeSpec::absorbed(0.67, 2),
        ModeSpec::absorbed(0.89, 1),
        ModeSpec::emitted(1.97, 0),
    ];
    let base = ProcessSpec::new(base_modes.clone(), 0, None).unwrap();
    let params = EvalParams::with_epsilon(0.03);
    let s0 = eval_s(&sys, &base, &params).unwrap().total;
    let chi0 = eval_chi(&sys, &base, &params).unwrap().total;

    // Every permutation of the three incoming modes.
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for perm in orders {
        let mut modes: Vec<ModeSpec> = perm.iter().map(|&j| base_modes[j]).collect();
        modes.push(base_modes[3]);
        let proc = ProcessSpec::new(modes, 0, None).unwrap();
        let s = eval_s(&sys, &proc, &params).unwrap().total;
        let chi = eval_chi(&sys, &proc, &params).unwrap().total;
        assert!(rel(s, s0) <= 1e-12, "S under incoming perm {perm:?}");
        assert!(rel(chi, chi0) <= 1e-12, "chi under incoming perm {perm:?}");
    }

    // Relabelings that move the emitted mode preserve the signed-frequency
    // multiset; S must not care. (No such assertion for chi: the signal
    // mode is distinguished there.)
    for position in 0..3 {
        let mut modes = base_modes.clone();
        let signal = modes.remove(3);
        modes.insert(position, signal);
        let proc = ProcessSpec::new(modes, 0, None).unwrap();
        let s = eval_s(&sys, &proc, &params).unwrap().total;
        assert!(rel(s, s0) <= 1e-12, "S with signal at position {position}");
    }
    budget(start, Duration::from_secs(5), "criterion 5");
    println!(
        "criterion 5 PASS: S invariant under all signed-multiset relabelings, chi under \
         incoming-mode permutations"
    );
}

#[test]
fn criterion_6_time_domain_oracle() {
    let start = Instant::now();

    // Linear two-level case, gamma = 0.1, omega = 0.5.
    let sys = LevelSystem::from_json(
        r#"{"energies":[0,1],"linewidths":[0,0.1],"dipole":[[0,1],[1,0]]}"#,
    )
    .unwrap();
    let proc = rayleigh_process(0.5).unwrap();
    let fields = [ClassicalField {
        amplitude: 2e-3,
        omega: 0.5,
    }];
    let params = grid_params(0.02, 300.0, 90.0 * PI);
    let estimate = oracle_chi(&sys, &proc, &fields, &params).unwrap();
    let reference = eval_chi(&sys, &proc, &EvalParams::default()).unwrap().total;
    let linear_rel = rel(estimate, reference);
    assert!(linear_rel <= 0.01, "linear: {linear_rel:.3e}");

    // The eps -> gamma mapping against the explicit formula.
    let (_, kh_chi) = kh_pair(&two_level(), 0.5, 0.1).unwrap();
    assert!(rel(estimate, kh_chi) <= 0.01);

    // Step-halving certificate.
    let halved_dt = grid_params(params.dt / 2.0, params.t_transient, params.t_window);
    let estimate_half_dt = oracle_chi(&sys, &proc, &fields, &halved_dt).unwrap();
    let step_shift = rel(estimate_half_dt, estimate);
    assert!(step_shift <= 1e-3, "step halving: {step_shift:.3e}");

    // Amplitude-halving certificate (also enforced inside oracle_chi).
    let halved_fields = [ClassicalField {
        amplitude: 1e-3,
        omega: 0.5,
    }];
    let estimate_half_amp = oracle_chi(&sys, &proc, &halved_fields, &params).unwrap();
    let amp_shift = rel(estimate_half_amp, estimate);
    assert!(amp_shift <= 0.01, "amplitude halving: {amp_shift:.3e}");

    // Order-3 sum frequency on a three-level ladder; every cumulative
    // argument at least 5 gamma from every level spacing.
    let sys3 = LevelSystem::from_json(
        r#"{"energies":[0,1.1,2.3],"linewidths":[0,0.018,0.018],
            "dipole":[[0,1,0],[1,0,0.8],[0,0.8,0]]}"#,
    )
    .unwrap();
    let proc3 = ProcessSpec::new(
        vec![
            ModeSpec::absorbed(0.37, 1),
            ModeSpec::absorbed(0.59, 1),
            ModeSpec::absorbed(0.83, 1),
            ModeSpec::emitted(1.79, 0),
        ],
        0,
        None,
    )
    .unwrap();
    assert!(sample::is_off_resonant(&sys3, &proc3, 5.0 * 0.018));
    let fields3: Vec<ClassicalField> = proc3.modes()[..3]
        .iter()
        .map(|m| ClassicalField {
            amplitude: 2e-3,
            omega: m.omega,
        })
        .collect();
    let params3 = grid_params(0.02, 1250.0, 200.0 * PI);
    let estimate3 = oracle_chi(&sys3, &proc3, &fields3, &params3).unwrap();
    let reference3 = eval_chi(&sys3, &proc3, &EvalParams::default()).unwrap().total;
    let cubic_rel = rel(estimate3, reference3);
    assert!(cubic_rel <= 0.02, "order 3: {cubic_rel:.3e}");

    budget(start, Duration::from_secs(120), "criterion 6");
    println!(
        "criterion 6 PASS: oracle within {linear_rel:.1e} (linear) and {cubic_rel:.1e} \
         (order 3); step-halving {step_shift:.1e}, amplitude-halving {amp_shift:.1e}"
    );
}

#[test]
fn criterion_7_order_eps_gap() {
    let start = Instant::now();

    // Two fixed off-resonant points: the linear two-level case and an
    // order-2 process on a parity-broken three-level system.
    let sys2 = two_level();
    let proc2 = rayleigh_process(0.5).unwrap();
    let sys3 = LevelSystem::from_json(
        r#"{"energies":[0,0.9,2.1],
            "dipole":[[0,1,0.25],[1,0,0.8],[0.25,0.8,0]]}"#,
    )
    .unwrap();
    let proc3 = ProcessSpec::new(
        vec![
            ModeSpec::absorbed(0.43, 1),
            ModeSpec::absorbed(0.71, 1),
            ModeSpec::emitted(1.14, 0),
        ],
        0,
        None,
    )
    .unwrap();

    for (label, sys, proc) in [
        ("two-level linear", &sys2, &proc2),
        ("three-level order 2", &sys3, &proc3),
    ] {
        let mut points = Vec::new();
        for eps in [1e-2, 1e-3, 1e-4] {
            let params = EvalParams::with_epsilon(eps);
            let chi = eval_chi(sys, proc, &params).unwrap().total;
            let s = eval_s(sys, proc, &params).unwrap().total;
            points.push((eps.ln(), (chi - s).norm().ln()));
        }
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (slope - 1.0).abs() <= 0.1,
            "{label}: log-log slope {slope:.4}"
        );
        println!("criterion 7 PASS: |chi - S| ~ eps with slope {slope:.4} ({label})");
    }
    budget(start, Duration::from_secs(5), "criterion 7");
}

#[test]
fn criterion_8_cli_determinism() {
    let start = Instant::now();
    let bin = env!("CARGO_BIN_EXE_wavemix");
    let data = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let runs: Vec<Vec<String>> = vec![
        vec!["expand", "--kind", "chi", "--order", "4", "--format", "json"]
            .into_iter()
            .map(String::from)
            .collect(),
        vec![
            "eval",
            "--system",
            &format!("{data}/twolevel.json"),
            "--process",
            &format!("{data}/rayleigh.json"),
            "--eps",
            "0.1",
            "--per-term",
        ]
        .into_iter()
        .map(String::from)
        .collect(),
        vec![
            "kh",
            "--system",
            &format!("{data}/twolevel.json"),
            "--omega",
            "0.5",
            "--eps",
            "0.1",
        ]
        .into_iter()
        .map(String::from)
        .collect(),
        vec![
            "scan",
            "--system",
            &format!("{data}/twolevel.json"),
            "--process",
            &format!("{data}/rayleigh.json"),
            "--mode",
            "0",
            "--grid",
            "0.3:0.8:11",
            "--eps",
            "0.05",
        ]
        .into_iter()
        .map(String::from)
        .collect(),
    ];
    for args in &runs {
        let once = Command::new(bin).args(args).output().unwrap();
        let twice = Command::new(bin).args(args).output().unwrap();
        assert!(once.status.success(), "{args:?}: {once:?}");
        assert_eq!(
            once.stdout, twice.stdout,
            "outputs differ between runs for {args:?}"
        );
        assert!(!once.stdout.is_empty());
    }
    budget(start, Duration::from_secs(30), "criterion 8");
    println!("criterion 8 PASS: repeated CLI runs are byte-identical across subcommands");
}
