use std::fs;
use std::path::Path;
use std::process::Command;

use isa_evo::environment::EnvKind;
use isa_evo::isa::SetName;
use isa_evo::runner::{compare_sets, read_summary, run_experiment, RunConfig, SUMMARY_HEADER};

fn small(out: &Path, workers: usize) -> RunConfig {
    let mut cfg = RunConfig::preset(SetName::Heads, EnvKind::Logic9);
    cfg.world.width = 10;
    cfg.world.height = 10;
    cfg.updates = 400;
    cfg.replicates = 3;
    cfg.log_interval = 50;
    cfg.seed = 77;
    cfg.workers = workers;
    cfg.out = out.to_path_buf();
    cfg
}

/// Every file under `dir`, sorted by name, with contents.
fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn output_tree_is_identical_across_reruns_and_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    run_experiment(&small(&a, 1)).unwrap();
    run_experiment(&small(&b, 1)).unwrap();
    run_experiment(&small(&c, 3)).unwrap();
    let ta = tree(&a);
    assert_eq!(ta.len(), 1 + 1 + 3 + 3, "{:?}", ta.iter().map(|f| &f.0).collect::<Vec<_>>());
    assert_eq!(ta, tree(&b));
    assert_eq!(ta, tree(&c));
}

#[test]
fn different_seeds_diverge() {
    let tmp = tempfile::tempdir().unwrap();
    let mut x = small(&tmp.path().join("x"), 1);
    x.replicates = 1;
    let mut y = x.clone();
    y.seed = 78;
    y.out = tmp.path().join("y");
    let rx = run_experiment(&x).unwrap();
    let ry = run_experiment(&y).unwrap();
    assert_ne!(fs::read(x.out.join("replicate_000.csv")).unwrap(), fs::read(y.out.join("replicate_000.csv")).unwrap());
    assert_eq!(rx[0].seed, 77);
    assert_eq!(ry[0].seed, 78);
}

#[test]
fn smoke_run_logic9_heads() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::preset(SetName::Heads, EnvKind::Logic9);
    cfg.world.width = 30;
    cfg.world.height = 30;
    cfg.updates = 5000;
    cfg.replicates = 5;
    cfg.log_interval = 1000;
    cfg.out = tmp.path().to_path_buf();
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 5);
    let text = fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    assert!(text.starts_with(SUMMARY_HEADER));
    let back = read_summary(&tmp.path().join("summary.csv")).unwrap();
    assert_eq!(back.len(), 5);
    for (r, row) in back.iter().enumerate() {
        assert_eq!(row.replicate as usize, r);
        assert_eq!(row.seed, cfg.seed + r as u64);
        assert_eq!(row.updates, 5000);
        assert!(row.organisms > 0 && row.organisms <= 900);
        assert!(row.log2_mean_fitness.is_finite());
        assert!((0.0..=1.0).contains(&row.task_success));
    }
    let log = fs::read_to_string(tmp.path().join("replicate_000.csv")).unwrap();
    // header, column names, updates 0, 1000..5000
    assert_eq!(log.lines().count(), 2 + 6);
}

#[test]
fn compare_reads_written_summaries() {
    let tmp = tempfile::tempdir().unwrap();
    let mut a = small(&tmp.path().join("a"), 1);
    a.replicates = 4;
    let mut b = a.clone();
    b.set = "FA".into();
    b.out = tmp.path().join("b");
    run_experiment(&a).unwrap();
    run_experiment(&b).unwrap();
    let ra = read_summary(&a.out.join("summary.csv")).unwrap();
    let rb = read_summary(&b.out.join("summary.csv")).unwrap();
    let rows = compare_sets(&ra, &rb).unwrap();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        assert!((0.0..=1.0).contains(&row.p_value));
        assert!(row.ci_a.0 <= row.median_a && row.median_a <= row.ci_a.1);
        assert_eq!(row.set_a, "Heads");
        assert_eq!(row.set_b, "FA");
    }
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isa-evo"))
}

#[test]
fn cli_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let presets = tmp.path().join("presets");
    let st = cli().args(["presets", "--out"]).arg(&presets).status().unwrap();
    assert!(st.success());
    assert_eq!(fs::read_dir(&presets).unwrap().count(), SetName::ALL.len() * EnvKind::ALL.len());

    let cfg = small(&tmp.path().join("unused"), 1);
    let cfg_path = tmp.path().join("small.cfg");
    fs::write(&cfg_path, cfg.to_ini()).unwrap();
    for (name, set) in [("a", "Heads"), ("b", "FA")] {
        let path = tmp.path().join(format!("{name}.cfg"));
        fs::write(&path, fs::read_to_string(&cfg_path).unwrap().replace("set = Heads", &format!("set = {set}"))).unwrap();
        let st = cli()
            .args(["run", "--config"])
            .arg(&path)
            .args(["--replicates", "3", "--out"])
            .arg(tmp.path().join(name))
            .status()
            .unwrap();
        assert!(st.success());
    }
    let cmp = tmp.path().join("cmp.csv");
    let st = cli()
        .args(["compare", "--a"])
        .arg(tmp.path().join("a"))
        .arg("--b")
        .arg(tmp.path().join("b"))
        .arg("--out")
        .arg(&cmp)
        .status()
        .unwrap();
    assert!(st.success());
    assert_eq!(fs::read_to_string(&cmp).unwrap().lines().count(), 4);

    let anc = cli().args(["ancestor", "--set", "Heads"]).output().unwrap();
    assert!(anc.status.success());
    let genome = tmp.path().join("heads.org");
    fs::write(&genome, &anc.stdout).unwrap();
    let tr = cli()
        .args(["trace", "--set", "Heads", "--steps", "25", "--genome"])
        .arg(&genome)
        .output()
        .unwrap();
    assert!(tr.status.success());
    let text = String::from_utf8(tr.stdout).unwrap();
    assert!(text.starts_with("# isa-evo trace v1"));
    assert_eq!(text.lines().count(), 2 + 25);

    let bad = tmp.path().join("bad.cfg");
    fs::write(&bad, "[mutation]\nsubstitution = 2\n").unwrap();
    let out = cli().args(["run", "--config"]).arg(&bad).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("mutation.substitution"));
}
