//! Configuration, persistence, sweeps and the command-line front end.

mod common;

use std::collections::BTreeMap;
use std::process::Command;

use proptest::prelude::*;
use relvac::harness::persist::{self, DIAG_HEADER};
use relvac::harness::sweeps::{perturbation_profile, state_distance};
use relvac::harness::{
    limit_sweep, refinement_study, run_simulation, stability_probe, CompareNorm, Config, InitSource, SweepKind,
    SweepSpec,
};
use relvac::record::{Abort, DiagRow, EnergyColumns, RunRecord, Snapshot};
use relvac::thermo::State;
use relvac::{Error, LightSpeed};

fn small() -> Config {
    Config {
        n_cells: 32,
        t_end: 0.02,
        output_every: 0.01,
        ..Config::default()
    }
}

#[test]
fn classical_run_keeps_axial_velocity_and_carries_its_config() {
    let cfg = Config {
        mode: relvac::dynamics::Mode::Classical,
        c: LightSpeed::Infinite,
        ..small()
    };
    let record = run_simulation(&cfg).unwrap();
    assert!(record.completed());
    let w0: Vec<f64> = record.snapshots[0].w.clone();
    assert!(record.snapshots.iter().all(|s| s.w == w0));
    assert_eq!(record.meta["mode"], "classical");
    assert_eq!(Config::parse(&cfg.to_text()).unwrap(), cfg);
}

#[test]
fn default_relativistic_run_keeps_lorentz_and_geometry_bounds() {
    let record = run_simulation(&Config {
        n_cells: 64,
        ..Config::default()
    })
    .unwrap();
    assert!(record.completed());
    assert!(record.rows.iter().all(|r| r.theta_sq_min >= 11.0 / 12.0));
    assert!(record.rows.iter().all(|r| r.baryon_residual <= 1e-12));
}

#[test]
fn inadmissible_light_speed_is_rejected_before_stepping() {
    let cfg = Config {
        c: LightSpeed::Finite(0.3),
        ..small()
    };
    assert!(matches!(run_simulation(&cfg), Err(Error::Inadmissible(_))));
}

#[test]
fn file_initial_data_round_trip_through_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("odd.txt");
    std::fs::write(&path, common::odd_data_columns(32)).unwrap();
    let cfg = Config::parse(&format!("n_cells=32\nt_end=0.01\ninit=file:{}\n", path.display())).unwrap();
    assert_eq!(cfg.init, InitSource::File(path.clone()));
    let record = run_simulation(&cfg).unwrap();
    assert!(record.completed());
    let wrong = Config {
        n_cells: 64,
        ..cfg
    };
    assert!(matches!(run_simulation(&wrong), Err(Error::Shape { .. }) | Err(Error::Config(_))));
}

#[test]
fn persisted_run_loads_back_identically() {
    let mut record = run_simulation(&small()).unwrap();
    record.abort = Some(Abort {
        message: "density bracket = -0.1 at node 3".into(),
        node: Some(3),
        t: 0.015,
    });
    let dir = tempfile::tempdir().unwrap();
    persist::save(&record, dir.path()).unwrap();
    let header = std::fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert_eq!(header.lines().next().unwrap(), DIAG_HEADER);
    assert_eq!(persist::load(dir.path()).unwrap(), record);
}

#[test]
fn light_speed_sweep_is_independent_of_scheduling() {
    let base = Config {
        n_cells: 32,
        ..Config::default()
    };
    let spec = SweepSpec::new(SweepKind::LightSpeed, vec![8.0, 16.0, 32.0], base, 0.02).unwrap();
    let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = serial.install(|| limit_sweep(&spec)).unwrap();
    let b = wide.install(|| limit_sweep(&spec)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.pairs.iter().map(|p| p.0).collect::<Vec<_>>(), vec![8.0, 16.0, 32.0]);
    assert!(a.pairs.windows(2).all(|w| w[1].1 < w[0].1));

    let reversed = SweepSpec {
        values: vec![32.0, 16.0, 8.0],
        ..spec.clone()
    };
    let r = limit_sweep(&reversed).unwrap();
    let mut back = r.pairs.clone();
    back.reverse();
    assert_eq!(back, a.pairs);
}

#[test]
fn weighted_norm_sweep_reports_a_smaller_error() {
    let base = Config {
        n_cells: 32,
        ..Config::default()
    };
    let spec = SweepSpec::new(SweepKind::LightSpeed, vec![8.0, 16.0, 32.0], base, 0.02).unwrap();
    let sup = limit_sweep(&spec).unwrap();
    let l2 = limit_sweep(&spec.clone().with_norm(CompareNorm::WeightedL2)).unwrap();
    for (a, b) in sup.pairs.iter().zip(&l2.pairs) {
        assert!(b.1 < a.1);
    }
}

#[test]
fn sweep_member_failures_are_flagged() {
    let base = Config {
        n_cells: 32,
        ..Config::default()
    };
    let spec = SweepSpec::new(SweepKind::LightSpeed, vec![0.5, 16.0, 32.0, 64.0], base, 0.01).unwrap();
    let r = limit_sweep(&spec).unwrap();
    assert_eq!(r.failures.len(), 1);
    assert_eq!(r.failures[0].0, 0.5);
    assert_eq!(r.pairs.len(), 3);
    assert!(!r.pass);
    assert!(r.to_text().contains("failed c = 0.5"));
}

#[test]
fn refinement_requires_nested_grids() {
    let spec = SweepSpec::new(SweepKind::Refinement, vec![32.0, 48.0, 64.0], small(), 0.01).unwrap();
    assert!(matches!(refinement_study(&spec), Err(Error::Config(_))));
    let spec = SweepSpec::new(SweepKind::Refinement, vec![16.0, 32.0, 64.0], small(), 0.01).unwrap();
    let r = refinement_study(&spec).unwrap();
    assert_eq!(r.pairs.len(), 2);
    assert_eq!(r.pairs[0].0, 1.0 / 16.0);
}

#[test]
fn stability_probe_scales_with_the_perturbation() {
    let cfg = small();
    let a = stability_probe(&cfg, 1e-6).unwrap();
    let b = stability_probe(&cfg, 2e-6).unwrap();
    assert!(a > 0.0 && a < 100.0);
    assert!((a - b).abs() < 1e-3 * a);
    assert_eq!(perturbation_profile(0.0), 0.0);
    assert_eq!(perturbation_profile(0.5), 1.0);
}

#[test]
fn state_distance_covers_the_stretch() {
    let model = small().model().unwrap();
    let a = model.initial_state();
    let mut b = a.clone();
    b.r = b.r.iter().map(|r| 1.001 * r).collect();
    let d = state_distance(&a, &b, CompareNorm::Sup, &model).unwrap();
    assert!((d - 0.001).abs() < 1e-12);
}

#[test]
fn cli_simulate_writes_a_record_and_rejects_bad_keys() {
    let exe = env!("CARGO_BIN_EXE_relvac");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let status = Command::new(exe)
        .args(["simulate", "--n-cells", "32", "--t-end", "0.02", "--out"])
        .arg(&out)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let record = persist::load(&out).unwrap();
    assert_eq!(record.meta["n_cells"], "32");
    assert_eq!(record.final_state.t, 0.02);

    let cfg_path = dir.path().join("bad.cfg");
    std::fs::write(&cfg_path, "colour=blue\n").unwrap();
    let output = Command::new(exe).args(["simulate", "--config"]).arg(&cfg_path).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("colour"));

    let output = Command::new(exe)
        .args(["limit-sweep", "--n-cells", "32", "--values", "8,16,32", "--horizon", "0.02"])
        .output()
        .unwrap();
    let text = String::from_utf8(output.stdout).unwrap();
    assert!(text.starts_with("kind = light-speed"));
    assert!(text.contains("slope = "));
}

fn arb_row() -> impl Strategy<Value = DiagRow> {
    (
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        0.0f64..1.0,
        0.0f64..10.0,
        0.0f64..1e-10,
        proptest::option::of((0.0f64..1e6, 0.0f64..1e6, 0.0f64..1.0, 0.0f64..1.0)),
        0.0f64..1e-2,
    )
        .prop_map(|(t, th, v, b, e, dt)| DiagRow {
            t,
            theta_sq_min: th,
            vel_sup_ratio: v,
            baryon_residual: b,
            energy: e.map(|(e_u, e_v, e_w, extra)| EnergyColumns {
                total: e_u + e_v + e_w + extra,
                e_u,
                e_v,
                e_w,
            }),
            dt,
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn records_round_trip_exactly(
        rows in proptest::collection::vec(arb_row(), 0..6),
        field in proptest::collection::vec(-1e3f64..1e3, 5),
        steps in 0usize..10_000,
    ) {
        let snap = Snapshot {
            t: 0.5,
            x: field.clone(),
            r: field.clone(),
            u: field.iter().map(|v| v * 1e-7).collect(),
            v: field.clone(),
            w: field.clone(),
            rho: field.clone(),
            n: field.clone(),
        };
        let record = RunRecord {
            meta: BTreeMap::from([("c".to_string(), "16".to_string())]),
            rows,
            snapshots: vec![snap.clone(), snap],
            final_state: State { t: 0.25, r: field.clone(), u: field.clone(), v: field.clone(), w: field },
            abort: None,
            steps,
        };
        let dir = tempfile::tempdir().unwrap();
        persist::save(&record, dir.path()).unwrap();
        prop_assert_eq!(persist::load(dir.path()).unwrap(), record);
    }
}
