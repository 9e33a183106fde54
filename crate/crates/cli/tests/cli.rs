use std::process::{Command, Output};

use exscaf_core::oracle::OracleReport;
use exscaf_core::ramification::ShiftTables;
use exscaf_core::report::{ConvertReport, Envelope, VerdictReport};
use exscaf_core::{Cfrak, GmsVerdict, PlanReport};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn exscaf(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exscaf")).args(args.split_whitespace()).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parses a JSON report and checks that re-serializing reproduces it byte
/// for byte.
fn roundtrip<T: Serialize + DeserializeOwned>(o: &Output) -> Envelope<T> {
    let text = stdout(o);
    let env: Envelope<T> = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(env.schema, 1);
    let again = serde_json::to_string_pretty(&env).unwrap() + "\n";
    assert_eq!(again, text);
    env
}

#[test]
fn example_heisenberg_json() {
    let o = exscaf("example --p 3 --n 1 --u 1 --t 1 --variant H --output json");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let env: Envelope<PlanReport> = roundtrip(&o);
    assert_eq!(env.command, "example");
    assert_eq!(env.report.cfrak, Cfrak::Value(64));
    assert_eq!(env.report.gms, Some(GmsVerdict::Free));
    assert_eq!(env.report.b, vec![1, 1, 82]);
}

#[test]
fn example_metacyclic_text() {
    let o = exscaf("example --p 3 --n 1 --u 1 --t 1 --variant M");
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("scaffold precision: 55"), "{out}");
    assert!(out.contains("module structure: free"), "{out}");
}

#[test]
fn verdict_hopf() {
    let o = exscaf("verdict --p 3 --n 1 --c 125 --u1 26 --output json");
    assert_eq!(code(&o), 0);
    let env: Envelope<VerdictReport> = roundtrip(&o);
    assert_eq!(env.report.verdict, GmsVerdict::FreeAndHopf);
}

#[test]
fn no_conclusion_is_not_an_error() {
    let o = exscaf("verdict --p 3 --n 1 --c 2 --u1 5 --output json");
    assert_eq!(code(&o), 0);
    let env: Envelope<VerdictReport> = roundtrip(&o);
    assert_eq!(env.report.verdict, GmsVerdict::NoConclusion);
}

#[test]
fn plan_certified_and_failing() {
    let ok = exscaf("plan --variant H --p 3 --n 1 --e0 inf --r 1 --m 0,0,1 --leads 1,g,1 --output json");
    assert_eq!(code(&ok), 0);
    let env: Envelope<PlanReport> = roundtrip(&ok);
    assert_eq!(env.report.cfrak, Cfrak::Value(64));

    let bad = exscaf("plan --variant H --p 3 --n 1 --r 1 --m 1,2,4 --output json");
    assert_eq!(code(&bad), 2);
    let env: Envelope<PlanReport> = roundtrip(&bad);
    assert_eq!(env.report.cfrak, Cfrak::NotApplicable);
    assert!(env.report.checks.iter().any(|c| !c.holds));
}

#[test]
fn plan_simple_mode_with_finite_e0() {
    let o = exscaf("plan --variant M --p 3 --n 1 --e0 10 --r 1 --m 0,0,1 --mode simple --output json");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let env: Envelope<PlanReport> = roundtrip(&o);
    assert_eq!(env.report.cfrak, Cfrak::Value(55));
    assert!(env.report.alternate_reading.is_some());
}

#[test]
fn malformed_input_exits_one() {
    let o = exscaf("plan --variant H --p 3 --n 1 --r 3 --m 0,0,1");
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("p divides u_1"));
    for args in [
        "plan --variant H --p 4 --n 1 --r 1 --m 0,0,1",
        "plan --variant X --p 3 --n 1 --r 1 --m 0,0,1",
        "plan --variant H --p 3 --n 1 --r 1 --m 0,0",
        "plan --variant H --p 3 --n 1 --r 1 --m 0,0,1 --e0 -4",
        "verdict --p 3 --n 0 --c 5 --u1 1",
        "ram convert --p 3 --lower 5,1",
        "ram tables --p 3 --n 2 --b 1,2",
        "example --p 3 --n 1 --u 1 --t 1 --variant H --bogus",
        "frobnicate",
        "oracle verify --variant H --p 3 --n 1 --u 1 --t 1 --prec 0",
    ] {
        let o = exscaf(args);
        assert_eq!(code(&o), 1, "{args}: {}", stderr(&o));
        assert!(o.stdout.is_empty(), "{args}");
    }
}

#[test]
fn help_exits_zero() {
    assert_eq!(code(&exscaf("--help")), 0);
    assert_eq!(code(&exscaf("oracle verify --help")), 0);
}

#[test]
fn ram_convert_and_tables() {
    let o = exscaf("ram convert --p 3 --lower 1,1,82 --output json");
    assert_eq!(code(&o), 0);
    let env: Envelope<ConvertReport> = roundtrip(&o);
    let upper: Vec<String> = env.report.sequence.upper.iter().map(|r| r.to_string()).collect();
    assert_eq!(upper, ["1", "1", "10"]);
    assert!(env.report.checks.iter().all(|c| c.holds));

    let o = exscaf("ram convert --p 3 --upper 1,1,10 --output json");
    let env: Envelope<ConvertReport> = roundtrip(&o);
    let lower: Vec<String> = env.report.sequence.lower.iter().map(|r| r.to_string()).collect();
    assert_eq!(lower, ["1", "1", "82"]);

    let o = exscaf("ram tables --p 3 --n 3 --b 1,1,82 --output json");
    assert_eq!(code(&o), 0);
    let env: Envelope<ShiftTables> = roundtrip(&o);
    assert_eq!(env.report.afrak.len(), 27);
    let mut sorted = env.report.afrak.clone();
    sorted.sort_unstable();
    assert_eq!(sorted, (0..27).collect::<Vec<u64>>());
}

#[test]
fn oracle_verify_json() {
    let o = exscaf("oracle verify --variant H --p 3 --n 1 --u 1 --t 1 --output json");
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let env: Envelope<OracleReport> = roundtrip(&o);
    let r = env.report;
    assert!(r.pass);
    assert_eq!(r.measured_b, vec![1, 1, 82]);
    assert_eq!(r.y.v_y, -82);
    assert_eq!(r.group.digest.len(), 64);
}

#[test]
fn oracle_digest_is_deterministic() {
    let a = stdout(&exscaf("oracle verify --variant M --p 3 --n 1 --u 1 --t 1 --output json"));
    let b = stdout(&exscaf("oracle verify --variant M --p 3 --n 1 --u 1 --t 1 --output json"));
    assert_eq!(a, b);
}

#[test]
fn oracle_exit_codes() {
    let hyp = exscaf("oracle verify --variant H --p 3 --n 1 --u 1 --m 1,2,4");
    assert_eq!(code(&hyp), 2, "{}", stderr(&hyp));
    let prec = exscaf("oracle verify --variant H --p 3 --n 1 --u 1 --m 0,1,2 --prec 5");
    assert_eq!(code(&prec), 3, "{}", stderr(&prec));
    assert!(stderr(&prec).contains("precision"));
    let ok = exscaf("oracle verify --variant H --p 3 --n 1 --u 1 --m 0,1,2");
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).trim_end().ends_with("PASS"));
}
