use std::fs;
use std::process::Command;

fn orion() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orion"))
}

#[test]
fn simulate_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = orion()
        .args(["simulate", "--nodes", "20", "--speeds", "5,10", "--seed", "1..2", "--duration", "60", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(o.status.success(), "{o:?}");
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "protocol,nodes,speed_mps,seed,sent,delivered,psr,avg_hop_count,first_arrival_s,avg_e2e_delay_s"
    );
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(lines[1].starts_with("orion,20,5,1,"));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("nodes=20 speed=5 m/s"));
}

#[test]
fn config_file_and_events() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.cfg");
    fs::write(&cfg, "# single cell\nprotocols = orion\nnodes = 30\nspeeds = 10\nseeds = 4\nduration = 120\n").unwrap();
    let (out, events) = (dir.path().join("r.csv"), dir.path().join("e.csv"));
    let o = orion()
        .arg("simulate")
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .arg("--events")
        .arg(&events)
        .output()
        .unwrap();
    assert!(o.status.success(), "{o:?}");
    let log = fs::read_to_string(&events).unwrap();
    assert!(log.starts_with("time_s,packet_id,event,from,to\n"));
    assert!(log.contains(",created,"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 2);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let bad = orion().args(["simulate", "--speeds", "fast", "--out"]).arg(&out).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("speeds"));

    let multi = orion()
        .args(["simulate", "--nodes", "20", "--duration", "10", "--out"])
        .arg(&out)
        .arg("--events")
        .arg(dir.path().join("e.csv"))
        .output()
        .unwrap();
    assert_eq!(multi.status.code(), Some(1));

    let usage = orion().arg("nonsense").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));

    let missing = orion()
        .args(["fit", "--column", "x", "--input"])
        .arg(dir.path().join("absent.csv"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let unwritable = orion()
        .args(["simulate", "--nodes", "20", "--speeds", "5", "--seed", "1", "--duration", "10", "--out"])
        .arg(dir.path().join("no/such/dir/r.csv"))
        .output()
        .unwrap();
    assert_eq!(unwritable.status.code(), Some(2));
}

#[test]
fn fit_prints_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("s.csv");
    let mut text = String::from("idx,value\n");
    for i in 0..200 {
        text.push_str(&format!("{i},{}\n", 10.0 + ((i * 7919) % 13) as f64));
    }
    fs::write(&input, text).unwrap();
    let o = orion().args(["fit", "--column", "value", "--input"]).arg(&input).output().unwrap();
    assert!(o.status.success(), "{o:?}");
    let stdout = String::from_utf8(o.stdout).unwrap();
    for key in ["mu", "phi1", "phi2", "theta1", "sigma2", "stationarity"] {
        assert!(stdout.contains(key), "{stdout}");
    }
}
