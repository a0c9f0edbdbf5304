use std::process::{Command, Output};

const MIRROR_TREFOIL_PD: &str = "PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]";

fn golden(name: &str) -> String {
    format!("{}/golden/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_skeinseq"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SKEINSEQ_THREADS", t),
        None => cmd.env_remove("SKEINSEQ_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn minus_table_for_the_mirror_trefoil() {
    let o = run(&["kh", "--pd", MIRROR_TREFOIL_PD, "--flavor", "minus"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# ring\tF2[X]"));
    assert!(text.contains("# total_rank\t3"));
    assert!(text.contains("# torsion\t-"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows, ["0\t0\t0\t1\t-", "1\t2\t0\t1\t-", "3\t6\t0\t1\t-"]);
}

#[test]
fn unpointed_minus_has_rank_six_over_u() {
    let o = run(&["kh", "--pd", MIRROR_TREFOIL_PD, "--unpointed"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# ring\tF2[U]"));
    assert!(text.contains("# total_rank\t6"));
}

#[test]
fn reduced_without_basepoint_is_an_input_error() {
    let o = run(&["kh", "--pd", MIRROR_TREFOIL_PD, "--flavor", "reduced"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--basepoint"));
    assert!(o.stdout.is_empty());
}

#[test]
fn non_planar_code_is_rejected() {
    let o = run(&["kh", "--pd", "PD[X(1,4,2,3),X(3,6,4,5),X(5,2,6,1)]", "--mirror"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("planar"));
}

#[test]
fn malformed_inputs_exit_with_two() {
    for args in [
        vec!["kh", "--pd", "PD[X[1,2,3]]"],
        vec!["kh", "--braid", "1,x,1", "--strands", "2"],
        vec!["kh", "--pd", MIRROR_TREFOIL_PD, "--flavor", "sideways"],
        vec!["infer", "--e2", "/nonexistent/page.json", "--target", "/nonexistent/t.json"],
        vec!["kh"],
    ] {
        let o = run(&args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn examples_suite_passes() {
    let o = run(&["examples"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(!text.contains("FAIL"));
    assert!(text.lines().filter(|l| l.contains("PASS")).count() >= 20);
}

#[test]
fn output_is_identical_across_thread_counts() {
    let cases: Vec<Vec<String>> = vec![
        vec!["kh".into(), "--braid".into(), "1,1,1,2,-1,2".into(), "--strands".into(), "3".into(), "--flavor".into(), "hat".into()],
        vec!["kh".into(), "--braid".into(), "1,2,1,2,1,2,1,2".into(), "--strands".into(), "3".into(), "--out".into(), "json".into()],
        vec!["ss".into(), "--braid".into(), "1,-2,1,-2".into(), "--strands".into(), "3".into()],
        vec!["examples".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let one = run(&args, Some("1"));
        let four = run(&args, Some("4"));
        assert_eq!(one.status.code(), Some(0), "{args:?}");
        assert_eq!(one.stdout, four.stdout, "{args:?}");
        assert_eq!(one.stdout, run(&args, Some("4")).stdout, "{args:?}");
    }
}

#[test]
fn infer_trefoil_golden_table() {
    let e2 = golden("trefoil_e2.json");
    let target = golden("trefoil_target.json");
    let o = run(&["infer", "--e2", &e2, "--target", &target], None);
    assert_eq!(o.status.code(), Some(0));
    let expected = "\
# slots\t1
# examined\t2
# closed\t2
# canonical\texact
patterns\t1
pattern\t1
arrow\td3: z -> X x
survivors\t-2
violations\t0
";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn infer_hopf_collapses_with_a_forced_filtration() {
    let o = run(&["infer", "--e2", &golden("hopf_e2.json"), "--target", &golden("hopf_target.json"), "--out", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let patterns = v["patterns"].as_array().unwrap();
    assert_eq!(patterns.len(), 1);
    assert!(patterns[0]["arrows"].as_array().unwrap().is_empty());
    assert_eq!(patterns[0]["filtration"]["status"], "unique");
}

#[test]
fn json_reports_parse() {
    let o = run(&["kh", "--pd", MIRROR_TREFOIL_PD, "--flavor", "hat", "--out", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["total_rank"], 6);
    assert_eq!(v["ring"], "F2");
    let groups = v["groups"].as_array().unwrap();
    assert_eq!(groups.iter().map(|g| g["h"].as_i64().unwrap()).min(), Some(0));

    let o = run(&["ss", "--pd", MIRROR_TREFOIL_PD, "--out", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["violations"].as_array().unwrap().is_empty());
    assert_eq!(v["convergence"]["ok"], true);

    let o = run(&["examples", "--out", "json"], None);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|c| c["pass"] == true));
}
