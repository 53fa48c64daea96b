use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wopgtsp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wopgtsp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn gen_instance(dir: &Path) {
    let out = wopgtsp(
        &["gen", "-n", "60", "-m", "12", "--seed", "4", "-o", "a.gtsp"],
        dir,
    );
    assert!(out.status.success());
}

#[test]
fn gen_writes_gtsplib() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path());
    let text = fs::read_to_string(dir.path().join("a.gtsp")).unwrap();
    assert!(text.starts_with("NAME: 60wop12\n"));
    assert!(text.contains("GTSP_SETS: 12\n"));
    assert!(text.ends_with("EOF\n"));
}

#[test]
fn gen_is_deterministic_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let a = wopgtsp(&["gen", "-n", "30", "-m", "6", "--seed", "9"], dir.path());
    let b = wopgtsp(&["gen", "-n", "30", "-m", "6", "--seed", "9"], dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_with_zero_iterations_reports_the_initial_cost() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path());
    let out = wopgtsp(
        &["solve", "a.gtsp", "--iters", "0", "--seed", "2"],
        dir.path(),
    );
    assert!(out.status.success());
    let cost: i64 = stdout(&out).trim().parse().unwrap();

    let text = fs::read_to_string(dir.path().join("a.gtsp")).unwrap();
    let inst = wopgtsp::gtsplib::parse(&text).unwrap();
    let mut rng = wopgtsp::seed::rng_from_seed(2);
    let init = wopgtsp::Solution::random_initial(&inst, &mut rng).unwrap();
    assert_eq!(cost, init.cost());
}

#[test]
fn solve_is_reproducible_and_writes_a_tour() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path());
    let args = [
        "solve", "a.gtsp", "--iters", "5000", "--seed", "7", "-o", "t.sol",
    ];
    let a = wopgtsp(&args, dir.path());
    let first = fs::read_to_string(dir.path().join("t.sol")).unwrap();
    let b = wopgtsp(&args, dir.path());
    let second = fs::read_to_string(dir.path().join("t.sol")).unwrap();
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(first, second);

    let cost = stdout(&a).trim().to_string();
    assert!(first.contains(&format!("COST : {cost}\n")));
    let nodes: Vec<usize> = first
        .split("TOUR_SECTION\n")
        .nth(1)
        .unwrap()
        .lines()
        .take_while(|l| *l != "-1")
        .map(|l| l.parse().unwrap())
        .collect();
    assert_eq!(nodes.len(), 12);
    assert!(nodes.iter().all(|&v| (1..=60).contains(&v)));
}

#[test]
fn solve_accepts_configuration_files() {
    let dir = tempfile::tempdir().unwrap();
    gen_instance(dir.path());
    for name in ["conf1", "conf2"] {
        let file = configs_dir().join(format!("{name}.cmcs"));
        let by_file = wopgtsp(
            &[
                "solve",
                "a.gtsp",
                "--iters",
                "3000",
                "--config",
                file.to_str().unwrap(),
            ],
            dir.path(),
        );
        let by_name = wopgtsp(
            &["solve", "a.gtsp", "--iters", "3000", "--config", name],
            dir.path(),
        );
        assert!(by_file.status.success());
        assert_eq!(stdout(&by_file), stdout(&by_name), "{name}");
    }
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let missing = wopgtsp(&["solve", "missing.gtsp", "--iters", "1"], dir.path());
    assert_eq!(missing.status.code(), Some(3));

    fs::write(dir.path().join("bad.gtsp"), "NAME: x\nDIMENSION: oops\n").unwrap();
    let malformed = wopgtsp(&["solve", "bad.gtsp", "--iters", "1"], dir.path());
    assert_eq!(malformed.status.code(), Some(4));

    fs::write(dir.path().join("bad.cmcs"), "start CO\nCO XX IHC\n").unwrap();
    gen_instance(dir.path());
    let bad_config = wopgtsp(
        &["solve", "a.gtsp", "--iters", "1", "--config", "bad.cmcs"],
        dir.path(),
    );
    assert_eq!(bad_config.status.code(), Some(4));

    let usage = wopgtsp(
        &["solve", "a.gtsp", "--iters", "1", "--time", "1"],
        dir.path(),
    );
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn verify_random_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = wopgtsp(&["verify", "--random", "2", "--clusters", "5"], dir.path());
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("[PASS]"));
    assert!(!stdout(&out).contains("[FAIL]"));
}

#[test]
fn verify_reports_too_small_instances_with_code_5() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = "NAME: tiny\nTYPE: GTSP\nDIMENSION: 3\nGTSP_SETS: 2\nEDGE_WEIGHT_TYPE: MAN_2D\n\
                NODE_COORD_SECTION\n1 0 0\n2 1 0\n3 0 1\nGTSP_SET_SECTION\n1 1 2 -1\n2 3 -1\nEOF\n";
    fs::write(dir.path().join("tiny.gtsp"), tiny).unwrap();
    let out = wopgtsp(&["verify", "tiny.gtsp"], dir.path());
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout(&out).contains("[FAIL]"));
}

#[test]
fn testbed_and_bench_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = wopgtsp(
        &["testbed", "medium", "--base-seed", "5", "-o", "tb"],
        dir.path(),
    );
    assert!(out.status.success());
    let tb = dir.path().join("tb");
    assert_eq!(fs::read_dir(&tb).unwrap().count(), 31);
    let manifest = fs::read_to_string(tb.join("manifest.tsv")).unwrap();
    assert!(manifest.starts_with("name\tn\tm\tseed\n150wop30\t150\t30\t5\n"));

    let out = wopgtsp(
        &[
            "bench",
            "tb",
            "--iters",
            "100",
            "--repeats",
            "1",
            "-o",
            "bench.tsv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let rendered = stdout(&out);
    assert!(rendered.contains("Time, sec"));
    assert!(rendered.contains("0.0810"));
    assert!(rendered.contains("wins: conf1 "));

    let tsv = fs::read_to_string(dir.path().join("bench.tsv")).unwrap();
    let table = wopgtsp::harness::BenchTable::from_tsv(&tsv).unwrap();
    assert_eq!(table.rows.len(), 30);
    assert_eq!(table.to_tsv(), tsv);
}

#[test]
fn bench_without_manifest_needs_alpha() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("tb")).unwrap();
    let out = wopgtsp(
        &["gen", "-n", "30", "-m", "6", "-o", "tb/x.gtsp"],
        dir.path(),
    );
    assert!(out.status.success());
    let out = wopgtsp(&["bench", "tb", "--iters", "10"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = wopgtsp(
        &["bench", "tb", "--iters", "10", "--alpha", "1e-5"],
        dir.path(),
    );
    assert!(out.status.success());
}

#[test]
fn train_writes_report_and_winner() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("train")).unwrap();
    for seed in 0..3 {
        let path = format!("train/i{seed}.gtsp");
        let out = wopgtsp(
            &[
                "gen",
                "-n",
                "30",
                "-m",
                "6",
                "--seed",
                &seed.to_string(),
                "-o",
                &path,
            ],
            dir.path(),
        );
        assert!(out.status.success());
    }
    let out = wopgtsp(
        &[
            "train",
            "train",
            "--iters",
            "50",
            "--pool",
            "CO,IHC,VM",
            "--size",
            "2",
            "-o",
            "out",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(stdout(&out).contains("winner: "));
    let report = fs::read_to_string(dir.path().join("out/report.tsv")).unwrap();
    assert!(report.contains("config\tdescription\tq"));
    let winner = fs::read_to_string(dir.path().join("out/winner.cmcs")).unwrap();
    let config = wopgtsp::Configuration::from_text(&winner).unwrap();
    assert!(config.validate().is_ok());
    assert_eq!(config.name, "winner");
}
