use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stackelberg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stackelberg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON output")
}

fn value_of(report: &Value) -> (i64, i64) {
    (
        report["value"]["base"].as_i64().unwrap(),
        report["value"]["eps_coeff"].as_i64().unwrap(),
    )
}

#[test]
fn solve_example_with_dp_and_oracle() {
    let file = data("worked_example.json");
    let dp = json(&stackelberg(&[
        "solve",
        &file,
        "--model",
        "objective",
        "--algorithm",
        "dp",
    ]));
    assert_eq!(value_of(&dp), (5, -2));
    assert_eq!(dp["replay_confirmed"], true);
    assert_eq!(dp["solution"]["before_set"], serde_json::json!([1, 3]));
    assert_eq!(dp["solution"]["after_set"], serde_json::json!([2]));
    assert_eq!(dp["solution"]["follower_fill"], 4);
    assert!(dp["stats"]["cell_updates"].as_u64().unwrap() > 0);

    let oracle = json(&stackelberg(&["solve", &file, "--algorithm", "oracle"]));
    assert_eq!(value_of(&oracle), (5, -2));
    assert_eq!(oracle["replay_confirmed"], true);
}

#[test]
fn solve_constraint_models() {
    let file = data("no_leader.json");
    let r = json(&stackelberg(&["solve", &file]));
    assert_eq!(value_of(&r), (0, 0));
    assert_eq!(r["replay_confirmed"], true);

    let example = data("worked_example.json");
    let naive = json(&stackelberg(&["solve", &example, "--model", "constraint"]));
    let batched = json(&stackelberg(&[
        "solve",
        &example,
        "--model",
        "constraint",
        "--algorithm",
        "dp-batched",
        "--threads",
        "3",
    ]));
    let oracle = json(&stackelberg(&[
        "solve",
        &example,
        "--model",
        "constraint",
        "--algorithm",
        "oracle",
    ]));
    assert_eq!(value_of(&naive), value_of(&batched));
    assert_eq!(value_of(&naive).0, value_of(&oracle).0);
    assert_eq!(naive["replay_confirmed"], true);
    assert_eq!(oracle["replay_confirmed"], true);

    let simple = json(&stackelberg(&["solve", &example, "--model", "constraint-simple"]));
    assert_eq!(simple["algorithm"], "closed-form");
    assert_eq!(value_of(&simple).0, 20);
    let lp = json(&stackelberg(&["solve", &example, "--model", "lp-objective"]));
    assert_eq!(value_of(&lp).0, 0);
    assert_eq!(lp["branch"], "follower-fills");
}

#[test]
fn solve_exit_codes() {
    let example = data("worked_example.json");
    let out = stackelberg(&["solve", &data("zero_weight.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("leader"));
    assert_eq!(
        stackelberg(&["solve", &data("unknown_field.json")]).status.code(),
        Some(2)
    );
    assert_eq!(stackelberg(&["solve", &data("missing.json")]).status.code(), Some(2));
    assert_eq!(
        stackelberg(&["solve", &example, "--algorithm", "dp-batched"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        stackelberg(&["solve", &example, "--algorithm", "closed-form"])
            .status
            .code(),
        Some(3)
    );

    let dir = std::env::temp_dir().join(format!("stackelberg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let big = dir.join("big.json");
    let out = stackelberg(&[
        "generate",
        "--random",
        "17",
        "2",
        "9",
        "40",
        "--seed",
        "1",
        "-o",
        big.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        stackelberg(&["solve", big.to_str().unwrap(), "--algorithm", "oracle"])
            .status
            .code(),
        Some(4)
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_claims() {
    let example = data("worked_example.json");
    let out = stackelberg(&[
        "verify",
        &example,
        &data("worked_example_optimal.json"),
        "--claim",
        "5,-2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("leader payoff: 5-2ε"), "{text}");

    let out = stackelberg(&[
        "verify",
        &example,
        &data("worked_example_suboptimal.json"),
        "--claim",
        "5,-2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("3-2ε"));

    let out = stackelberg(&[
        "verify",
        &example,
        &data("identity.json"),
        "--model",
        "constraint",
        "--claim",
        "0,0",
    ]);
    assert_eq!(out.status.code(), Some(0));

    assert_eq!(
        stackelberg(&["verify", &example, &data("worked_example.json")])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        stackelberg(&[
            "verify",
            &example,
            &data("worked_example_optimal.json"),
            "--claim",
            "five"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn generate_random_is_seeded() {
    let a = stackelberg(&["generate", "--random", "4", "4", "12", "20", "--seed", "7"]);
    let b = stackelberg(&["generate", "--random", "4", "4", "12", "20", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["leader"].as_array().unwrap().len(), 4);
    assert_eq!(v["capacity"], 20);
    assert_ne!(
        a.stdout,
        stackelberg(&["generate", "--random", "4", "4", "12", "20", "--seed", "8"]).stdout
    );
    // seed is mandatory in random mode
    assert_eq!(
        stackelberg(&["generate", "--random", "4", "4", "12", "20"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn generate_gadgets() {
    let v = json(&stackelberg(&[
        "generate",
        "--from-partition",
        &data("partition_123.txt"),
        "--theorem",
        "2",
        "--M",
        "100",
    ]));
    assert_eq!(v["capacity"], 103);
    assert_eq!(v["leader"], serde_json::json!([1, 2, 3, 100]));
    assert_eq!(v["follower"], serde_json::json!([101]));
    assert_eq!(v["provenance"]["theorem"], 2);
    assert_eq!(v["provenance"]["verified"], true);

    let out = stackelberg(&[
        "generate",
        "--from-partition",
        &data("partition_22.txt"),
        "--theorem",
        "2",
    ]);
    assert!(out.status.success());
    let out = stackelberg(&[
        "generate",
        "--from-partition",
        &data("partition_odd.txt"),
        "--theorem",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = stackelberg(&[
        "generate",
        "--from-partition",
        &data("partition_123.txt"),
        "--theorem",
        "2",
        "--M",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let v = json(&stackelberg(&[
        "generate",
        "--from-partition",
        &data("partition_22.txt"),
        "--theorem",
        "4",
        "--scale",
        "2",
    ]));
    assert_eq!(v["provenance"]["scale"], 2);
    assert_eq!(v["leader"].as_array().unwrap().len(), 4);
}

#[test]
fn generated_files_solve() {
    let dir = std::env::temp_dir().join(format!("stackelberg-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gadget.json");
    let out = stackelberg(&[
        "generate",
        "--from-partition",
        &data("partition_123.txt"),
        "--theorem",
        "2",
        "--M",
        "100",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let r = json(&stackelberg(&["solve", path.to_str().unwrap()]));
    assert_eq!(value_of(&r).0, 100);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bench_tables() {
    let r: Value = json(&stackelberg(&[
        "bench",
        "--model",
        "constraint",
        "--sizes",
        "64,256",
        "--capacity",
        "300",
        "--seed",
        "3",
        "--json",
    ]));
    let rows = r.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1]["ratio"].as_f64().unwrap() > rows[0]["ratio"].as_f64().unwrap());

    let single: Value = json(&stackelberg(&["bench", "--sizes", "1", "--capacity", "50", "--json"]));
    assert_eq!(single[0]["naive_cell_updates"], single[0]["batched_cell_updates"]);

    let a = stackelberg(&["bench", "--sizes", "16,32", "--capacity", "100", "--seed", "5"]);
    let b = stackelberg(&["bench", "--sizes", "16,32", "--capacity", "100", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    assert_eq!(stackelberg(&["bench", "--sizes", "4,x"]).status.code(), Some(2));
    assert_eq!(stackelberg(&["bench", "--model", "objective"]).status.code(), Some(3));
}

fn check_keys(value: &Value, schema: &Value, path: &str) {
    let props = schema["properties"].as_object().unwrap();
    let object = value.as_object().unwrap();
    for key in object.keys() {
        assert!(props.contains_key(key), "{path}.{key} is not in the schema");
    }
    for req in schema["required"].as_array().unwrap() {
        assert!(object.contains_key(req.as_str().unwrap()), "{path}.{req} missing");
    }
}

#[test]
fn reports_follow_the_published_schema() {
    let schema_path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/solve_report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let example = data("worked_example.json");
    for args in [
        vec!["solve", &example],
        vec!["solve", &example, "--algorithm", "oracle"],
        vec!["solve", &example, "--model", "constraint", "--algorithm", "dp-batched"],
        vec!["solve", &example, "--model", "lp-constraint"],
        vec!["solve", &example, "--model", "constraint-simple"],
    ] {
        let report = json(&stackelberg(&args));
        check_keys(&report, &schema, "report");
        for part in ["input", "solution", "stats"] {
            check_keys(&report[part], &schema["properties"][part], part);
        }
    }
}
