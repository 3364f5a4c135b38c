use std::collections::BTreeSet;
use std::process::Command;

use fibercap_cli::curve::{csv_string, read_csv};
use fibercap_cli::model::parse_models;
use fibercap_cli::{run_sweep, svg, BoundCurve, Cache, Row, SweepConfig};
use quick_xml::events::Event;
use quick_xml::Reader;

const BIN: &str = env!("CARGO_BIN_EXE_fibercap");

fn element_names(svg: &str) -> BTreeSet<String> {
    let mut reader = Reader::from_str(svg);
    let mut names = BTreeSet::new();
    loop {
        match reader.read_event().expect("well-formed XML") {
            Event::Start(e) | Event::Empty(e) => {
                names.insert(String::from_utf8(e.name().as_ref().to_vec()).unwrap());
            }
            Event::Eof => break,
            _ => {}
        }
    }
    names
}

fn sample_curve() -> BoundCurve {
    let cfg = SweepConfig {
        p_min_dbm: -35.0,
        p_max_dbm: 50.0,
        step_db: 5.0,
        models: parse_models("rpc-lb,rpc-ub,rpc-ub-simple,lpc").unwrap(),
        ..SweepConfig::default()
    };
    run_sweep(&cfg, &Cache::disabled()).unwrap()
}

#[test]
fn rpc_sandwich_holds_on_the_sweep() {
    let c = sample_curve();
    let lb = c.column(parse_models("rpc-lb").unwrap()[0]).unwrap();
    let ub = c.column(parse_models("rpc-ub").unwrap()[0]).unwrap();
    for (l, u) in lb.iter().zip(&ub) {
        assert!(l <= u);
    }
}

#[test]
fn csv_round_trip_is_byte_identical() {
    let mut c = sample_curve();
    c.rows[3]
        .flags
        .push("rpc-ub: synthetic, \"quoted\" flag".into());
    c.rows[4].values[1] = f64::NAN;
    let first = csv_string(&c).unwrap();
    let parsed = read_csv(first.as_bytes()).unwrap();
    assert_eq!(csv_string(&parsed).unwrap(), first);
    assert_eq!(
        first.lines().next().unwrap(),
        "power_dbm,rpc-lb,rpc-ub,rpc-ub-simple,lpc,flags"
    );
}

#[test]
fn svg_uses_only_the_declared_elements() {
    let mut c = sample_curve();
    c.rows[2].flags.push("lpc: synthetic".into());
    let s = svg::render(&c).unwrap();
    let allowed: BTreeSet<String> = ["svg", "path", "polyline", "text", "line"]
        .map(String::from)
        .into();
    let names = element_names(&s);
    assert!(names.is_subset(&allowed), "{names:?}");
    assert_eq!(s.matches("<polyline").count(), 4);
    // The flagged lpc point is left out of its polyline.
    let lpc_line = s
        .lines()
        .filter(|l| l.starts_with("<polyline"))
        .nth(3)
        .unwrap();
    assert_eq!(lpc_line.matches(',').count(), c.rows.len() - 1);
}

#[test]
fn single_row_curve_plots() {
    let c = BoundCurve {
        models: parse_models("lpc").unwrap(),
        rows: vec![Row {
            power_dbm: 0.0,
            values: vec![1.0],
            flags: vec![],
        }],
        meta: None,
    };
    assert_eq!(csv_string(&c).unwrap().lines().count(), 2);
    assert!(element_names(&svg::render(&c).unwrap()).contains("polyline"));
}

#[test]
fn command_line_bounds_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let fig = dir.path().join("curve.svg");
    let st = Command::new(BIN)
        .args([
            "bounds",
            "--pmin",
            "-10",
            "--pmax",
            "10",
            "--step",
            "5",
            "--models",
            "lpc,rpc-lb",
            "--out",
        ])
        .arg(&csv)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(dir.path().join("curve.meta.json").exists());
    let st = Command::new(BIN)
        .args(["plot", "--input"])
        .arg(&csv)
        .arg("--out")
        .arg(&fig)
        .status()
        .unwrap();
    assert!(st.success());
    assert!(element_names(&std::fs::read_to_string(&fig).unwrap()).contains("polyline"));
}

#[test]
fn command_line_rejects_bad_input() {
    let out = Command::new(BIN)
        .args(["bounds", "--pmin", "10", "--pmax", "0", "--models", "lpc"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let out = Command::new(BIN)
        .args(["bounds", "--models", "awgn"])
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn command_line_pdf_and_simulate() {
    let out = Command::new(BIN)
        .args([
            "pdf",
            "--r0-sq",
            "1",
            "--r-points",
            "4",
            "--theta-points",
            "8",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 8);

    for channel in ["rpc", "lpc", "mnc"] {
        let out = Command::new(BIN)
            .args([
                "simulate",
                "--channel",
                channel,
                "--samples",
                "100",
                "--segments",
                "10",
                "--seed",
                "5",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{channel}");
        let again = Command::new(BIN)
            .args([
                "simulate",
                "--channel",
                channel,
                "--samples",
                "100",
                "--segments",
                "10",
                "--seed",
                "5",
            ])
            .output()
            .unwrap();
        assert_eq!(out.stdout, again.stdout);
        assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 101);
    }
}

#[test]
fn command_line_linear_config_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("linear.toml");
    std::fs::write(
        &cfg,
        "attenuation_db_per_km = 0.2\nnonlinearity = 0.0\nlength_km = 5000.0\n\
         noise_bandwidth_hz = 125e9\nemission_factor = 1.0\nphoton_energy_j = 1.28e-19\n",
    )
    .unwrap();
    let out = Command::new(BIN)
        .args(["verify", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.contains("[PASS] linear limit"));
}
