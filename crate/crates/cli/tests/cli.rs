use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_structroute"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("structroute-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn butterfly_is_not_dominated() {
    let o = run(&["analyze", "butterfly"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("verdict=not downward dominated\n"));
    assert!(out.contains("witness.outgoing={alpha}\n"));
    assert!(out.contains("witness.pair=2\n"));
}

#[test]
fn fig5_is_certified_by_path_separation() {
    let o = run(&["analyze", "fig5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.starts_with("order=1,2\nverdict=downward dominated\ncertified_by=l42\n"),
        "{out}"
    );
    let swapped = run(&["analyze", "fig5", "--order", "2,1"]);
    assert_eq!(swapped.status.code(), Some(1));
    let searched = stdout(&run(&["analyze", "fig5", "--search-orderings"]));
    assert!(searched.starts_with("order=1,2\n"));
}

#[test]
fn single_level_failure_is_inconclusive() {
    let o = run(&["analyze", "fig5", "--level", "l43"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict=inconclusive\n"));
}

#[test]
fn sdom_of_alpha() {
    let o = run(&["sdom", "butterfly", "--arcs", "alpha"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sdom={alpha,beta,gamma}\n"));
}

#[test]
fn butterfly_flow_and_construction_fail() {
    let flow = run(&["flow", "butterfly"]);
    assert_eq!(
        (flow.status.code(), stdout(&flow)),
        (Some(1), "feasible=false\n".to_string())
    );
    let c = run(&["construct", "butterfly"]);
    assert_eq!(c.status.code(), Some(1));
    assert!(stdout(&c).contains("failed_pair=2\n"));
}

#[test]
fn corpus_round_trips_through_files() {
    let text = stdout(&run(&["corpus", "fig6"]));
    let path = temp_file("fig6.net", &text);
    let p = path.to_str().unwrap();
    let v = run(&["validate", p]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&v), "valid=true\nvertices=8\narcs=9\npairs=2\n");
    assert_eq!(
        stdout(&run(&["analyze", p])),
        stdout(&run(&["analyze", "fig6"]))
    );
    let flow = run(&["flow", p, "--strict"]);
    assert_eq!(flow.status.code(), Some(1), "unit demands saturate beta");
}

#[test]
fn simulate_half_rate_butterfly() {
    let text = stdout(&run(&["corpus", "butterfly"])).replace(" 1\npair", " 1/2\npair");
    let text = text.replace("tau2 1\n", "tau2 1/2\n");
    let path = temp_file("bf-half.net", &text);
    let p = path.to_str().unwrap();
    let o = run(&["simulate", p, "--blocks", "200", "--m", "8", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("pair1.reconstructed=200/200\n"));
    assert!(out.contains("arc.alpha.bits_per_step=1.000000\n"));
    assert!(out.contains("all_within_bound=true\n"));
    let auto = run(&["simulate", p, "--blocks", "10"]);
    assert_eq!(auto.status.code(), Some(1));
    assert!(stdout(&auto).contains("insufficient slack on arc alpha"));
}

#[test]
fn dot_export_highlights() {
    let o = stdout(&run(&[
        "export-dot",
        "butterfly",
        "--highlight-arcs",
        "alpha,beta,gamma",
    ]));
    assert_eq!(o.matches("color=red").count(), 3);
    assert!(o.starts_with("digraph network {"));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["analyze"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "no-such-file"]).status.code(), Some(2));
    assert_eq!(
        run(&["analyze", "fig5", "--order", "1,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "fig5", "--level", "l99"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["sdom", "butterfly", "--arcs", "omega"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["corpus", "line", "k=x"]).status.code(), Some(2));
    let bad = temp_file("bad.net", "arc a x y 0\npair x y 1\n");
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1: capacity must be positive"));
}

#[test]
fn family_parameters() {
    let o = run(&["corpus", "cycle", "k=4", "pairs=1:3,4:2"]);
    assert_eq!(o.status.code(), Some(0));
    let path = temp_file("c4.net", &stdout(&o));
    let a = stdout(&run(&["analyze", path.to_str().unwrap()]));
    assert!(a.contains("certified_by=l43\n"), "{a}");
    assert_eq!(
        stdout(&run(&["corpus", "random", "seed=5"])),
        stdout(&run(&["corpus", "random", "seed=5"]))
    );
}
