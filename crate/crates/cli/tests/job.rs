use cqgalg::{Scalar, ScalarMatrix};
use cqgalg_cli::{Command, JobConfig, JobError, MatrixList};

fn err(text: &str) -> JobError {
    JobConfig::parse(text).unwrap_err()
}

#[test]
fn full_job_parses() {
    let cfg = JobConfig::parse(
        "# comment line\n\
         command = hom-check   # trailing comment\n\
         source = au(2)\n\
         target = suq(2)\n\
         map = u[1,1] -> (1)*u[1,1]\n\
         map = u[2,2] -> (1)*u*[1,1]\n\
         k = 2\n\
         D = 6\n\
         budget = 1000\n\
         seed = 7\n",
    )
    .unwrap();
    assert_eq!(cfg.command, Some(Command::HomCheck));
    assert_eq!(cfg.source.as_deref(), Some("au(2)"));
    assert_eq!(cfg.map.len(), 2);
    assert_eq!(cfg.map[1], ("u[2,2]".to_string(), "(1)*u*[1,1]".to_string()));
    assert_eq!((cfg.k, cfg.max_degree, cfg.budget, cfg.seed), (Some(2), Some(6), Some(1000), Some(7)));
}

#[test]
fn matrices_and_identity() {
    let cfg = JobConfig::parse("F = [[s, 0], [0, 1/s]]; [[2]]\nR = identity\nB = [[1, i], [0, 1]]\n").unwrap();
    let s = Scalar::s();
    let expect = vec![ScalarMatrix::diag(&[s.clone(), s.inv()]), ScalarMatrix::from_ints(&[&[2]])];
    assert_eq!(cfg.f, Some(MatrixList::Blocks(expect)));
    assert_eq!(cfg.r, Some(MatrixList::Identity));
    assert_eq!(cfg.b.unwrap().get(0, 1), &Scalar::i());
    let id = MatrixList::Identity.resolve(&[1, 2]).unwrap();
    assert_eq!(id, vec![ScalarMatrix::identity(1), ScalarMatrix::identity(2)]);
    assert!(MatrixList::parse("[[1]]").unwrap().resolve(&[1, 1]).is_err());
}

#[test]
fn unknown_key_points_at_the_key() {
    let e = err("command = qiso\n  colour = blue\n");
    assert_eq!((e.line, e.col), (2, 3));
    assert!(e.msg.contains("unknown key 'colour'"), "{}", e);
}

#[test]
fn bad_matrix_points_into_the_value() {
    // the ')' sits at column 19
    let e = err("algebra = R(2)\nF = [[1, 0], [0, 1)]\n");
    assert_eq!((e.line, e.col), (2, 19));
    // second block of a list
    let e = err("F = [[1]]; [[x]]\n");
    assert_eq!(e.line, 1);
    assert_eq!(e.col, 14);
}

#[test]
fn repeated_and_malformed_lines() {
    let e = err("k = 1\nk = 2\n");
    assert_eq!(e.line, 2);
    assert!(e.msg.contains("twice"));
    assert_eq!(err("just words\n").msg, "expected 'key = value'");
    assert!(err("k = many\n").msg.contains("integer"));
    assert!(err("command = qgroup\n").msg.contains("unknown command"));
    assert!(err("map = u[1,1]\n").msg.contains("->"));
    let e = err("group =   \n");
    assert_eq!(e.col, 8);
}

#[test]
fn relation_lines_accumulate() {
    let cfg = JobConfig::parse("relation = (1)*u[1,1]\nrelation = (1)*u[2,2]\n").unwrap();
    assert_eq!(cfg.relations.len(), 2);
}

#[test]
fn flags_override_the_job() {
    let base = JobConfig::parse("command = qiso\nn = 2\nk = 1\nrelation = (1)*u[1,1]\n").unwrap();
    let over = JobConfig { n: Some(3), relations: vec!["(1)*u[1,2]".into()], ..JobConfig::default() };
    let m = base.merge(over);
    assert_eq!((m.command, m.n, m.k), (Some(Command::Qiso), Some(3), Some(1)));
    assert_eq!(m.relations.len(), 2);
}

#[test]
fn command_names_round_trip() {
    for c in Command::ALL {
        assert_eq!(c.as_str().parse::<Command>().unwrap(), c);
    }
    assert_eq!(Command::ALL.len(), 13);
}
