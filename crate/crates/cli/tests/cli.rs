use std::process::{Command, Output};

use serde_json::Value;

fn pdres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdres")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn locus<'a>(profile: &'a Value, i: u64, k: i64) -> &'a Value {
    profile["loci"]
        .as_array()
        .unwrap()
        .iter()
        .find(|l| l["i"] == i && l["k"] == k)
        .unwrap_or_else(|| panic!("no locus ({i}, {k})"))
}

#[test]
fn resonance_profile_schema() {
    let out = pdres(&["resonance", "--form", "125+345", "--n", "5", "--field", "p5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["field"], "p5");
    assert_eq!(v["n"], 5);
    assert!(v["checks"].as_array().unwrap().is_empty());
    assert_eq!(locus(&v, 1, 1)["count"], 625);
    assert_eq!(locus(&v, 1, 3)["count"], 1);
    assert_eq!(locus(&v, 2, 1)["count"], 625);
    for l in v["loci"].as_array().unwrap() {
        assert!(l["sample_points"].is_array());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["resonance", "--catalog", "VI", "--field", "p3", "--generators", "--generator-limit", "20000", "--depth", "4"];
    let (a, b) = (pdres(&args), pdres(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(locus(&v, 1, 4)["ideal_generators"].as_array().unwrap().len() > 0);
}

#[test]
fn claims_attach_to_profile() {
    let out = pdres(&["resonance", "--catalog", "III", "--field", "p5", "--claim", "duality", "--claim", "parity"]);
    assert_eq!(code(&out), 0);
    let checks = json(&out)["checks"].clone();
    assert_eq!(checks[0]["claim"], "DUALITY");
    assert_eq!(checks[1]["claim"], "PARITY");
    assert_eq!(checks[1]["status"], "PASS");
}

#[test]
fn turaev_pfaffian_of_form_ten() {
    let out = pdres(&["turaev", "--form", "123+456+147+257+367", "--n", "7", "--field", "rational"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["pf"], "x1*x4 + x2*x5 + x3*x6 - x7^2");
    assert_eq!(v["cofactors_checked"], 49);
    assert_eq!(v["pfaffians_checked"], 7);
}

#[test]
fn pfaffians_of_zero_matrix() {
    let out = pdres(&["pfaffian", "--form", "", "--n", "4", "--field", "p5", "--size", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["ideal"], "(0)");
    assert!(v["generators"].as_array().unwrap().is_empty());
    assert_eq!(v["zero_locus_count"], 625);
    let pf = json(&pdres(&["pfaffian", "--catalog", "III"]));
    assert_eq!(pf["generators"][0], "x5");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&pdres(&["resonance", "--form", "125", "--form", "345"])), 2);
    assert_eq!(code(&pdres(&["resonance", "--form", "125", "--n", "5", "--catalog", "III"])), 2);
    assert_eq!(code(&pdres(&["resonance", "--form", "125"])), 2);
    assert_eq!(code(&pdres(&["resonance", "--catalog", "III", "--field", "p4"])), 2);
    assert_eq!(code(&pdres(&["resonance", "--catalog", "III", "--field", "p2"])), 2);
    assert_eq!(code(&pdres(&["resonance", "--catalog", "NOPE"])), 2);
    assert_eq!(code(&pdres(&["frobnicate"])), 2);
    assert_eq!(code(&pdres(&["resonance"])), 2);
    assert_eq!(code(&pdres(&["generic", "--catalog", "IV"])), 2);
}

#[test]
fn budget_refusal_exits_three() {
    let out = pdres(&["resonance", "--catalog", "XXIII", "--field", "p5", "--budget", "1000"]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn verify_duality_on_catalog_entry() {
    let out = pdres(&["verify", "--claim", "duality", "--catalog", "III", "--field", "p5"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["runs"][0]["reports"][0]["status"], "PASS");
}

#[test]
fn failed_verification_exits_one_with_counterexample() {
    let out = pdres(&["verify", "--claim", "connsum", "--catalog", "II", "--with-catalog", "II", "--field", "p3"]);
    assert_eq!(code(&out), 1);
    let r = &json(&out)["runs"][0]["reports"][0];
    assert_eq!(r["status"], "FAIL");
    assert!(r["counterexample"]["point"].is_array());
    assert_eq!(r["amended"]["status"], "PASS");
}

#[test]
fn pinch_map_functoriality() {
    let out = pdres(&["verify", "--claim", "functoriality", "--morphism", "pinch", "--field", "p5", "--degree", "2"]);
    assert_eq!(code(&out), 0);
    let notes = json(&out)["runs"][0]["reports"][0]["notes"].to_string();
    assert!(!notes.is_empty());
}

#[test]
fn binary_verbs_and_algebra_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sum.json");
    let path = file.to_str().unwrap();
    let out = pdres(&["connsum", "--catalog", "II", "--with-catalog", "III", "--field", "p3", "--emit-algebra", path]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["operation"], "connsum");
    assert_eq!(v["profile"]["n"], 8);
    let again = json(&pdres(&["resonance", "--algebra", path, "--field", "p3"]));
    assert_eq!(again["loci"], v["profile"]["loci"]);
    let implied = json(&pdres(&["resonance", "--algebra", path, "--depth", "1"]));
    assert_eq!(implied["field"], "p3");
    let dual = pdres(&["verify", "--claim", "duality", "--algebra", path, "--field", "p3"]);
    assert_eq!(code(&dual), 0);

    let t = json(&pdres(&["tensor", "--catalog", "II", "--with-catalog", "II", "--field", "p3", "--depth", "1"]));
    assert_eq!(t["profile"]["dims"][1], 6);
    let w = pdres(&["wedge", "--catalog", "II", "--with-catalog", "II", "--field", "p3", "--claim", "wedge"]);
    assert_eq!(json(&w)["profile"]["checks"][0]["claim"], "WEDGE");
}

#[test]
fn nullity_and_genericity() {
    let v = json(&pdres(&["nullity", "--catalog", "V_a", "--field", "p3"]));
    assert_eq!(v["nullity"], 2);
    assert_eq!(v["two_singular"], true);
    let g = json(&pdres(&["generic", "--catalog", "X_a", "--field", "p5"]));
    assert_eq!(g["bp_generic"], true);
    let g = json(&pdres(&["generic", "--catalog", "VI", "--field", "p5"]));
    assert_eq!(g["bp_generic"], true);
    assert_eq!(g["dfmr_generic"], false);
    let g = json(&pdres(&["generic", "--form", "", "--n", "3", "--field", "p5"]));
    assert_eq!(g["bp_generic"], false);
}

#[test]
fn table_rendering() {
    let out = pdres(&["catalog", "list", "--table"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().count(), 27);
    assert!(text.contains("125+345"));
    let show = String::from_utf8_lossy(&pdres(&["catalog", "show", "IV", "--table"]).stdout).to_string();
    assert!(show.contains("R_1: FULL"));
    assert!(show.contains("R_3: {x1=x2=x3=0}"));
}

#[test]
fn catalog_verify_subset() {
    let out = pdres(&["catalog", "verify", "III", "V_a", "--field", "p5,p7"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["passed"], 2);
    assert_eq!(v["verdict"], "PASS");
    let ix = pdres(&["catalog", "verify", "IX_a", "--field", "p5"]);
    assert_eq!(code(&ix), 1);
    assert_eq!(code(&pdres(&["catalog", "verify", "IX_a", "--field", "p5", "--amended"])), 0);
}

#[test]
fn catalog_verify_all() {
    let out = pdres(&["catalog", "verify", "--all", "--field", "p5,p7", "--amended"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["entries"].as_array().unwrap().len(), 27);
    assert_eq!(v["passed"], 25);
    assert_eq!(v["failed"], 2);
    assert_eq!(v["amended_passes"], 2);
    assert_eq!(v["verdict"], "PASS");
    let xxii = v["entries"].as_array().unwrap().iter().find(|e| e["id"] == "XXII").unwrap();
    let g = xxii["growth"]["exponent"].as_f64().unwrap();
    assert!(g > 4.5 && g < 5.5);
}
