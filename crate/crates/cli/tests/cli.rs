//! End-to-end runs of the `qrecur` binary.

use std::process::{Command, Output};

use qrecur_core::formula::RecursiveFormula;
use qrecur_core::{golden, Composition, Rational};

fn qrecur(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrecur"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn rpoly_trivial_and_eval() {
    let o = qrecur(&["rpoly", "--I", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("r_(1) = 1\n"));

    let o = qrecur(&["rpoly", "--I", "1,2,1", "--eval", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
}

#[test]
fn rpoly_json_matches_tabulated_row() {
    let o = qrecur(&["rpoly", "--I", "2,1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let index: Composition = "2,1".parse().unwrap();
    let (_, expected) = golden::r_polynomials().into_iter().find(|(c, _)| *c == index).unwrap();
    let coeffs: Vec<Rational> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(coeffs, expected.coeffs());
    // S(3) has four points, then -3..=2.
    assert_eq!(v["values"].as_array().unwrap().len(), 4 + 6);
}

#[test]
fn rpoly_rejects_bad_input() {
    assert_eq!(qrecur(&["rpoly", "--I", "1,x"]).status.code(), Some(2));
    assert_eq!(qrecur(&["rpoly", "--I", "0,1"]).status.code(), Some(2));
    assert_eq!(qrecur(&["rpoly", "--I", "1", "--eval", "a/b"]).status.code(), Some(2));
}

#[test]
fn formula_outputs() {
    let o = qrecur(&["formula", "--N", "2", "--source", "rpoly"]);
    assert_eq!(stdout(&o).trim(), "Q_4 = P_2(Q_2) - 2 i* Pbar_2(Qbar_2)");

    let o = qrecur(&["formula", "--N", "4", "--source", "rpoly", "--format", "latex"]);
    let text = stdout(&o);
    assert!(text.starts_with("Q_{8} = \\frac{3}{5} P_{2}(Q_{6})"));
    assert!(text.contains("+ \\frac{28}{5} P_{4} P_{2}(Q_{2})"));
    assert!(text.contains("- \\frac{22}{5} P_{2}^{3}(Q_{2})"));
    assert!(text
        .trim_end()
        .ends_with("- \\frac{16}{5} i^* \\bar{P}_2^{3}(\\bar{Q}_2)"));

    let o = qrecur(&["formula", "--N", "5", "--source", "residue", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let f = RecursiveFormula::from_json(&stdout(&o)).unwrap();
    assert_eq!(f.terms.len(), 15);
    assert_eq!(f.bar_coeff, Rational::frac(128, 35));
    assert!(f.same_coefficients(&golden::explicit_formula(5).unwrap()));
}

#[test]
fn formula_out_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("qrecur-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q6.json");
    let o = qrecur(&[
        "formula",
        "--N",
        "3",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let f = RecursiveFormula::from_json(&text).unwrap();
    assert_eq!(f.to_json().trim(), text.trim());
    assert!(f.same_coefficients(&golden::explicit_formula(3).unwrap()));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn formula_rejects_out_of_range() {
    assert_eq!(qrecur(&["formula", "--N", "1"]).status.code(), Some(2));
    assert_eq!(
        qrecur(&["formula", "--N", "40", "--source", "residue"]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "tables"],
        vec!["verify", "spheres", "--max-N", "8"],
        vec!["verify", "cross", "--max-N", "5"],
        vec!["verify", "universality", "--max-N", "3"],
        vec!["verify", "conjectures", "--max-size", "4", "--max-N", "6"],
    ] {
        let o = qrecur(&args);
        let out = stdout(&o);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{out}");
        assert!(out.contains("PASS"));
        assert!(!out.contains("FAIL"));
    }
}

#[test]
fn verify_usage_errors() {
    assert_eq!(qrecur(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(
        qrecur(&["verify", "universality", "--dims", "7"]).status.code(),
        Some(2)
    );
    assert_eq!(
        qrecur(&["verify", "universality", "--max-N", "3", "--dims", "8"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qrecur(&["verify", "spheres", "--lambdas", "1,0"]).status.code(),
        Some(2)
    );
    assert_eq!(qrecur(&["verify", "formulas", "--max-N", "1"]).status.code(), Some(2));
}

#[test]
fn verify_universality_custom_dims() {
    let o = qrecur(&["verify", "universality", "--max-N", "2", "--dims", "8,14"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS N=2 n=14 residual (n-1)/3"));
}
