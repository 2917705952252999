use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitcalc"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn chern_worked_example() {
    let out = stdout(&[
        "chern", "--case", "a", "--p", "2", "--q", "2", "--clan", "++--",
    ]);
    assert_eq!(out, "(x1^2 - x1*z3 + z4)(x2^2 - x2*z3 + z4)\n");
}

#[test]
fn symplectic_gl_table_has_eleven_rows() {
    let out = stdout(&["classes", "--case", "c-sp-gl", "--n", "2"]);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 11);
    assert!(rows.contains(&"1212\t2*x1"));
    assert!(rows.contains(&"1221\t1"));
}

#[test]
fn type_a_dot_graph() {
    let out = stdout(&[
        "poset", "--case", "a", "--p", "2", "--q", "2", "--format", "dot",
    ]);
    assert!(out.starts_with("digraph"));
    assert_eq!(
        out.matches("[label=\"").count() - out.matches("->").count(),
        21
    );
    assert!(out.contains("rank=same"));
}

#[test]
fn blue_edges_mark_degree_two() {
    let out = stdout(&["poset", "--case", "c-sp-gl", "--n", "2", "--format", "dot"]);
    assert!(out.contains("blue"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&[
        "poset", "--case", "c-sp-gl", "--n", "2", "--format", "json",
    ]))
    .unwrap();
    let blue = out.matches("blue").count();
    let degree_two = json["edges"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["degree"] == 2)
        .count();
    assert_eq!(blue, degree_two);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "classes",
        "--case",
        "d-oxo-odd",
        "--p",
        "1",
        "--q",
        "2",
        "--format",
        "json",
    ];
    assert_eq!(stdout(&args), stdout(&args));
    let args = [
        "poset",
        "--case",
        "b-so",
        "--p",
        "2",
        "--q",
        "1",
        "--threads",
        "2",
    ];
    assert_eq!(stdout(&args), stdout(&args[..7]));
}

#[test]
fn classes_json_carries_exact_terms() {
    let out = stdout(&[
        "classes", "--case", "d-so-gl", "--n", "3", "--format", "json", "--verify",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert!(v["verification"]["failures"].as_array().unwrap().is_empty());
    let halves = rows
        .iter()
        .flat_map(|r| r["terms"].as_array().unwrap())
        .any(|t| t["den"] == 4);
    assert!(halves, "closed classes carry a 1/4 prefactor");
}

#[test]
fn checks_exit_with_their_verdict() {
    assert!(
        run(&["verify", "--case", "d-oxo-even", "--p", "2", "--q", "1"])
            .status
            .success()
    );
    assert!(run(&["oracle", "--case", "a", "--p", "2", "--q", "2"])
        .status
        .success());
    let base = ["conjecture", "--case", "d-so-gl", "--n", "4", "--expect"];
    assert_eq!(
        run(&[&base[..], &["weaker"]].concat()).status.code(),
        Some(0)
    );
    assert_eq!(
        run(&[&base[..], &["coincide"]].concat()).status.code(),
        Some(1)
    );
    let out = stdout(&["conjecture", "--case", "d-so-gl", "--n", "4"]);
    assert!(out.contains("1+-12+-2 <= 12341234"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["enumerate", "--case", "e8", "--p", "1", "--q", "1"][..],
        &["enumerate", "--case", "a", "--p", "1"],
        &[
            "classes", "--case", "a", "--p", "1", "--q", "1", "--format", "dot",
        ],
        &[
            "chern", "--case", "a", "--p", "1", "--q", "1", "--clan", "++",
        ],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn writes_to_output_file() {
    let path = std::env::temp_dir().join(format!("orbitcalc-{}.txt", std::process::id()));
    let out = stdout(&[
        "enumerate",
        "--case",
        "a",
        "--p",
        "1",
        "--q",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "+-\n-+\n11\n");
    std::fs::remove_file(path).unwrap();
}
