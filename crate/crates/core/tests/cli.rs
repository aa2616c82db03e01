use std::process::{Command, Output};

fn sto2c(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sto2c"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .parse()
        .expect("numeric field")
}

#[test]
fn legendre_values_and_domain_error() {
    let o = sto2c(&["legendre", "--l", "1", "--m", "0", "--x", "0.5"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert_eq!(v, 0.6123724356957945);

    let o = sto2c(&["legendre", "--l", "0", "--m", "0", "--x", "0.0"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), std::f64::consts::FRAC_1_SQRT_2);

    let o = sto2c(&["legendre", "--l", "2", "--m", "3", "--x", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m exceeds l"));

    let o = sto2c(&["legendre", "--l", "4", "--m", "2", "--x", "-0.3", "--method", "both"]);
    let text = stdout(&o);
    assert!((field(&text, "closed") - field(&text, "recurrence")).abs() < 1e-14);
}

#[test]
fn product_table_csv() {
    let o = sto2c(&["product-table", "--l", "0", "--lp", "0", "--lambda", "0"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "k,kp,u,s,rat_num,rat_den,radicand_num,radicand_den,coeff_float,pow_plus,pow_minus"
    );
    assert_eq!(&lines[1..], ["0,0,0,0,1,2,1,1,0.5,0,0"]);

    let o = sto2c(&["product-table", "--l", "1", "--lp", "0", "--lambda", "0"]);
    let rows: Vec<String> = stdout(&o).lines().skip(1).map(String::from).collect();
    assert_eq!(rows.len(), 2);
    for r in &rows {
        let c: f64 = r.split(',').nth(8).unwrap().parse().unwrap();
        assert!((c - 0.866_025_403_784_438_6).abs() < 1e-16);
    }

    let o = sto2c(&["product-table", "--l", "1", "--lp", "1", "--lambda", "1"]);
    assert_eq!(stdout(&o).lines().count(), 5);

    let o = sto2c(&["product-table", "--l", "1", "--lp", "1", "--lambda", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn product_table_json_matches_csv() {
    let o = sto2c(&["product-table", "--l", "3", "--lp", "2", "--lambda", "1", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let terms = doc["terms"].as_array().unwrap();
    let csv = sto2c(&["product-table", "--l", "3", "--lp", "2", "--lambda", "1"]);
    assert_eq!(terms.len() + 1, stdout(&csv).lines().count());
}

#[test]
fn product_eval_agrees() {
    let o = sto2c(&["product-eval", "--l", "1", "--lp", "0", "--lambda", "0", "--mu", "2", "--nu", "0.5"]);
    let text = stdout(&o);
    assert!((field(&text, "expansion") - 0.8 * 3f64.sqrt() / 2.0).abs() < 1e-15);
    assert!((field(&text, "direct") - field(&text, "expansion")).abs() < 1e-15);
    let o = sto2c(&["product-eval", "--l", "1", "--lp", "0", "--lambda", "0", "--mu", "0.5", "--nu", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn integral_paths() {
    let base = ["integral", "--na", "1", "--la", "0", "--za", "1", "--nb", "1", "--lb", "0", "--zb", "1", "--r", "2"];
    let mut args = base.to_vec();
    args.extend(["--kind", "overlap"]);
    let text = stdout(&sto2c(&args));
    assert!((field(&text, "value") - 13.0 / 3.0 * (-2.0f64).exp()).abs() < 1e-15);
    assert!(text.contains("method: analytic"));

    let mut args = base.to_vec();
    args.extend(["--kind", "na-a", "--oracle"]);
    let text = stdout(&sto2c(&args));
    assert!((field(&text, "value") - 3.0 * (-2.0f64).exp()).abs() < 1e-15);
    assert!(field(&text, "rel_diff") < 1e-10);

    let mut args = base.to_vec();
    args[2] = "1.5";
    args.extend(["--kind", "overlap"]);
    let o = sto2c(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--oracle"));
    args.push("--oracle");
    let text = stdout(&sto2c(&args));
    assert!(text.contains("method: quadrature"));
    assert!(field(&text, "value") > 0.0);
}

#[test]
fn printed_values_round_trip() {
    let a = ["integral", "--kind", "na-b", "--na", "3", "--la", "2", "--za", "1.3", "--nb", "2", "--lb", "1"];
    let mut args = a.to_vec();
    args.extend(["--zb", "0.7", "--lambda", "1", "--r", "2.2"]);
    let v = field(&stdout(&sto2c(&args)), "value");
    use sto_twocenter::integrals::{nuclear_attraction, Center, StoParams};
    let want = nuclear_attraction(
        StoParams::integer(3, 2, 1, 1.3).unwrap(),
        StoParams::integer(2, 1, 1, 0.7).unwrap(),
        2.2,
        Center::B,
    )
    .unwrap()
    .value;
    assert_eq!(v.to_bits(), want.to_bits());
}

#[test]
fn validate_small_run_is_deterministic() {
    let args = ["validate", "--lmax", "0", "--samples", "5", "--seed", "7", "--report-lmax", "2"];
    let a = sto2c(&args);
    assert_eq!(a.status.code(), Some(0));
    let ra: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let rb: serde_json::Value = serde_json::from_slice(&sto2c(&args).stdout).unwrap();
    assert_eq!(ra["suites"], rb["suites"]);
    assert_eq!(ra["seed"], 7);
    assert!(ra["wall_time_ms"].is_u64());
    assert_eq!(ra["digit_loss"]["entries"].as_array().unwrap().len(), 3);
    for s in ra["suites"].as_array().unwrap() {
        assert!(s["cases"].as_u64().unwrap() > 0, "{}", s["name"]);
        assert!(s["failures"].as_array().unwrap().is_empty());
    }
}

#[test]
fn validate_guard_and_failures_exit_codes() {
    let o = sto2c(&["validate", "--lmax", "13"]);
    assert_eq!(o.status.code(), Some(2));
    // an impossible tolerance must produce failure rows and exit 1
    let o = sto2c(&["validate", "--lmax", "1", "--samples", "3", "--tol", "1e-300", "--report-lmax", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failures: usize = r["suites"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["failures"].as_array().unwrap().len())
        .sum();
    assert!(failures > 0);
}

#[test]
fn bench_csv_and_usage_errors() {
    let o = sto2c(&["bench", "--lmax", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,lp,lambda,terms,build_us,eval_ns"));
    let golden = [(0, 0, 0, 1), (1, 1, 1, 4), (2, 2, 0, 30)];
    let rows: Vec<Vec<String>> = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 14);
    for (l, lp, lambda, terms) in golden {
        let row = rows
            .iter()
            .find(|r| r[0] == l.to_string() && r[1] == lp.to_string() && r[2] == lambda.to_string())
            .unwrap();
        assert_eq!(row[3], terms.to_string());
    }
    assert_eq!(sto2c(&["nonsense"]).status.code(), Some(2));
    assert_eq!(sto2c(&["legendre", "--l", "x"]).status.code(), Some(2));
}
