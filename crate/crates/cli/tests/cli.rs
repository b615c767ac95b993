//! Runs the `cqgalg` binary and compares reports with files under
//! `tests/golden/`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cqgalg_cli::verify_report;

fn here() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqgalg"))
        .args(args)
        .current_dir(here())
        .output()
        .expect("binary runs")
}

fn job(name: &str) -> String {
    here().join("jobs").join(format!("{}.job", name)).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str, text: &str) {
    let path = here().join("golden").join(format!("{}.txt", name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {} (run with UPDATE_GOLDEN=1)", path.display(), e));
    assert_eq!(text, want, "report differs from {}", path.display());
}

/// Runs, checks the exit code and the golden, and returns the report.
fn case(name: &str, args: &[&str], code: i32) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(code), "{}\n{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    golden(name, &text);
    text
}

#[test]
fn unitary_real_splits() {
    let text = case(
        "qunitary_real_sum",
        &["qunitary-real", "--algebra", "C(1)+H(1)+C(3)", "--F", "identity"],
        0,
    );
    assert!(text.contains("blocks: 5\n"));
    assert!(text.contains("generators: 12\n"));
}

#[test]
fn twisted_quaternions() {
    let text = case("suq2_quaternions", &["--job", &job("suq2_quaternions")], 0);
    // a twisted quaternion block reduces to two generators
    assert!(text.contains("generators: 2\n"));
}

#[test]
fn explicit_map_into_free_unitary() {
    let text = case("suq2_into_au2", &["--job", &job("suq2_into_au2")], 0);
    assert!(verify_report(&text).unwrap() > 0);
}

#[test]
fn orthogonal_into_unitary_fails() {
    let text = case("ao2_into_au2", &["--job", &job("ao2_into_au2")], 1);
    assert!(text.contains("verdict: fail\n"));
}

#[test]
fn commutative_real_automorphisms() {
    let text = case("commutative_aaut_real_r2", &["commutative-check", "--preset", "aaut-real-R2", "-k", "1"], 0);
    assert!(verify_report(&text).unwrap() > 0);
}

#[test]
fn quantum_isometries() {
    case("qiso_2", &["qiso", "-n", "2"], 0);
}

#[test]
fn classical_points() {
    let text = case("classical_eym_c5_1", &["classical-check", "--triple", "eym-c5(1)", "--samples", "20"], 0);
    assert!(text.contains("verdict: pass\n"));
}

#[test]
fn real_form_coproduct() {
    let text = case("real_form_r1", &["--job", &job("real_form_r1")], 0);
    verify_report(&text).unwrap();
}

#[test]
fn trace_on_quaternions() {
    let text = case("quaternion_trace", &["--job", &job("quaternion_trace")], 0);
    verify_report(&text).unwrap();
}

#[test]
fn circle_is_commutative() {
    let text = case("circle_commutators", &["--job", &job("circle_commutators")], 0);
    verify_report(&text).unwrap();
}

#[test]
fn gauge_group_of_a_matrix_algebra() {
    case("qgauge_eym_c2", &["qgauge", "--triple", "eym-c(2)"], 0);
}

#[test]
fn empty_relation_list() {
    let text = case("abelian_elim_as1", &["abelianize", "--group", "elim(as(1))"], 0);
    assert!(text.contains("relations: (none)\n"), "{}", text);
}

#[test]
fn bilinear_form() {
    let path = std::env::temp_dir().join(format!("cqgalg-bilinear-{}.job", std::process::id()));
    std::fs::write(&path, "command = qunitary\nB = [[0, 1], [-1, 0]]\n").unwrap();
    let text = case("qunitary_bilinear", &["--job", path.to_str().unwrap()], 0);
    std::fs::remove_file(&path).ok();
    assert!(text.contains("relations: 16\n"));
}

#[test]
fn standard_model_display_differs() {
    let o = run(&["qgauge", "--triple", "sm"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("unitarity: pass"), "{}", text);
    assert!(text.contains("display: differs"), "{}", text);
}

#[test]
fn usage_errors_exit_two() {
    let o = run(&["--job", &job("bad_key")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("3:1: unknown key 'colour'"));

    let o = run(&["--job", &job("bad_matrix")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":19:"));

    for args in [
        &["qunitary-real", "--algebra", "C3(3)"][..],
        &["qunitary-real", "--algebra", "R(2)", "--F", "[[1]]"],
        &["hom-check", "--job", &job("suq2_quaternions")],
        &["no-such-command"],
        &[],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{:?}: {}", args, stdout(&o));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--job", &job("suq2_into_au2")];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let args = ["classical-check", "--triple", "eym-c5(1)", "--samples", "10", "--seed", "9"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("cqgalg-{}-{}", std::process::id(), name))
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn writes_report_and_presentation_files() {
    let out = scratch("report.txt");
    let pres = scratch("pres.txt");
    let o = run(&[
        "qaut-real",
        "--algebra",
        "H(1)",
        "--out",
        out.to_str().unwrap(),
        "--presentation",
        pres.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = read(&out);
    assert!(report.starts_with("cqgalg-report v1\n"));
    let p = read(&pres);
    assert!(p.starts_with("cqg-presentation v1\n"));

    // the written presentation reads back as a group
    let arg = format!("file({})", pres.display());
    let o = run(&["projective", "--group", &arg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::remove_file(out).ok();
    std::fs::remove_file(pres).ok();
}
