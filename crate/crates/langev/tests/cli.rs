//! End-to-end tests of the `langev` binary: subcommands, config handling,
//! output files, and byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn langev(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_langev"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tiny_sweep_args(out: &str) -> Vec<String> {
    [
        "sweep",
        "--seed",
        "9",
        "--realizations",
        "2",
        "--generations",
        "8",
        "--out-dir",
        out,
        "--set",
        "models=model_b,model_c",
        "--set",
        "n_values=12",
        "--set",
        "r_grid=0.25,0.5",
        "--set",
        "k_max=4",
        "--set",
        "restarts=3",
    ]
    .iter()
    .map(ToString::to_string)
    .collect()
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let args = tiny_sweep_args(out);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let output = langev(&args, dir.path());
        assert!(
            output.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&output.stderr)
        );
    }
    for file in ["sweep.csv", "realizations.jsonl"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
    }
    let csv = std::fs::read_to_string(dir.path().join("a/sweep.csv")).unwrap();
    assert!(csv.starts_with("model,N,r,R,realizations,mean_w,"));
    assert_eq!(csv.lines().count(), 1 + 4, "header plus 2 models x 2 r cells");
}

#[test]
fn run_writes_a_parsable_record() {
    let dir = tempfile::tempdir().unwrap();
    let output = langev(
        &[
            "run",
            "--seed",
            "3",
            "--generations",
            "5",
            "--out-dir",
            "out",
            "--set",
            "n=10",
            "--set",
            "strategy=model_c",
            "--set",
            "r=0.3",
            "--set",
            "k_max=4",
        ],
        dir.path(),
    );
    assert!(output.status.success());
    let text = std::fs::read_to_string(dir.path().join("out/realization.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(record["params"]["n"], 10);
    assert_eq!(record["w_trajectory"].as_array().unwrap().len(), 6);
}

#[test]
fn cluster_and_fit_consume_their_input_files() {
    let dir = tempfile::tempdir().unwrap();

    // a two-block cache in the documented file format
    let cache = "N=4\n1,0.9,0.1,0.1\n0.9,1,0.1,0.1\n0.1,0.1,1,0.9\n0.1,0.1,0.9,1\n";
    std::fs::write(dir.path().join("cache.csv"), cache).unwrap();
    let output = langev(
        &["cluster", "cache.csv", "--seed", "1", "--out-dir", "out", "--set", "k_max=4"],
        dir.path(),
    );
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let optimum: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/optimum.json")).unwrap())
            .unwrap();
    assert_eq!(optimum["k_star"], 2);

    // fit on a synthetic summary with an exact power law K* = r^(-0.5)
    let mut summary = String::from(
        "model,N,r,R,realizations,mean_w,se_w,mean_w_star,se_w_star,\
         mean_i_star,se_i_star,i_star_count,mean_k_star,se_k_star\n",
    );
    for r in [0.04f64, 0.1, 0.25, 0.5] {
        let k = r.powf(-0.5);
        summary.push_str(&format!(
            "model_a,100,{r},10,5,0.2,0.01,0.5,0.01,0.05,0.01,5,{k},0.1\n"
        ));
    }
    std::fs::write(dir.path().join("summary.csv"), summary).unwrap();
    let output = langev(
        &["fit", "summary.csv", "--out-dir", "out"],
        dir.path(),
    );
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let fit = std::fs::read_to_string(dir.path().join("out/fit.csv")).unwrap();
    let row = fit.lines().nth(1).unwrap();
    assert!(row.starts_with("model_a,100,4,"));
    assert!(row.contains("0.500000"), "gamma column should be 0.5: {row}");
}

#[test]
fn constraint_violations_exit_nonzero_with_the_key_named() {
    let dir = tempfile::tempdir().unwrap();
    let output = langev(&["run", "--set", "q=0", "--out-dir", "out"], dir.path());
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("`q`"), "stderr: {stderr}");

    let output = langev(&["run", "--set", "foo=1", "--out-dir", "out"], dir.path());
    assert!(!output.status.success());
    assert!(String::from_utf8_lossy(&output.stderr).contains("unknown key"));

    let output = langev(&["fit", "missing.csv", "--out-dir", "out"], dir.path());
    assert!(!output.status.success());
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.conf"),
        "# desk-scale setup\nn = 10\nstrategy = model_c\nr = 0.3\ngenerations = 4\nk_max = 3\nseed = 5\n",
    )
    .unwrap();
    let output = langev(
        &["run", "--config", "run.conf", "--generations", "6", "--out-dir", "out"],
        dir.path(),
    );
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("out/realization.jsonl")).unwrap();
    let record: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(record["params"]["generations"], 6, "flag overrides config");
    assert_eq!(record["params"]["n"], 10, "config key applies");
}
