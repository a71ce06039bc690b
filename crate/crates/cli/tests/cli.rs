use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_iesl");

fn iesl(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(iesl(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(iesl(&["solve", "--game", "kuhn-9"]).status.code(), Some(1));
    assert_eq!(iesl(&["solve", "--game", "kuhn-2", "--eps", "-1"]).status.code(), Some(1));
    assert_eq!(iesl(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_file_with_flag_override_and_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "game = \"kuhn-2\"\nsolver = \"cfr\"\niterations = 999\n").unwrap();
    let out_dir = dir.path().join("out");
    let out = out_dir.to_str().unwrap();
    let o = iesl(&["solve", "--config", cfg.to_str().unwrap(), "--iterations", "40", "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("final_iteration = 40"));
    for ext in ["csv", "svg", "summary.toml", "config.toml", "ckpt"] {
        assert!(out_dir.join(format!("kuhn-2-cfr.{ext}")).exists(), "{ext}");
    }

    let ckpt = out_dir.join("kuhn-2-cfr.ckpt");
    let o = iesl(&[
        "solve", "--game", "kuhn-2", "--solver", "cfr", "--iterations", "10", "--resume",
        ckpt.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("start_iteration = 40") && text.contains("final_iteration = 50"), "{text}");

    let o = iesl(&["eval", "--game", "kuhn-2", "--checkpoint", ckpt.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("nashconv"));
}

#[test]
fn resume_rejects_other_game() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(iesl(&["solve", "--game", "kuhn-2", "--solver", "fp", "--iterations", "5", "--out-dir", out]).status.success());
    let ckpt = dir.path().join("kuhn-2-fp.ckpt");
    let o = iesl(&["solve", "--game", "kuhn-3", "--solver", "fp", "--iterations", "5", "--resume", ckpt.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verification_commands() {
    let o = iesl(&["verify-lemma1", "--game", "kuhn-2", "--trials", "20"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = iesl(&["probe-hypomono", "--game", "matching-pennies", "--samples", "50"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("samples = 50"));
}

#[test]
fn compare_and_sweep_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = iesl(&["compare", "--games", "kuhn-2,matching-pennies", "--iterations", "200", "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = iesl(&["sweep-eps", "--game", "kuhn-2", "--eps-list", "0.2,0.1", "--lambda", "0.01", "--iterations", "500",
        "--out-dir", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let verdicts = std::fs::read_to_string(dir.path().join("kuhn-2-sweep.verdicts")).unwrap();
    assert_eq!(verdicts.lines().count(), 2);
}
