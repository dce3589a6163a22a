use std::path::PathBuf;
use std::process::Command;

use num_bigint::BigUint;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn mersinv(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_mersinv")).args(args).output().expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares stdout with a golden file. `UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, args: &[&str]) -> Run {
    let run = mersinv(args);
    assert_eq!(run.code, 0, "{args:?}: {}", run.stderr);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &run.stdout).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(run.stdout, want, "{args:?} differs from {name}");
    run
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no field {key} in\n{text}"))
}

fn is_inverse(d: u64, n: u32, t: &BigUint) -> bool {
    let m = (BigUint::from(1u32) << n) - 1u32;
    (BigUint::from(d) * t) % m == BigUint::from(1u32)
}

#[test]
fn invert_goldens() {
    let run = golden("invert_trace.txt", &["invert", "--d", "13", "--n", "101", "--trace"]);
    let t: BigUint = field(&run.stdout, "value").parse().unwrap();
    assert!(is_inverse(13, 101, &t));

    let run = golden("invert_hex.txt", &["invert", "--d", "0x39", "--n", "65", "--format", "hex"]);
    let t = BigUint::parse_bytes(field(&run.stdout, "value").as_bytes(), 16).unwrap();
    assert!(is_inverse(57, 65, &t));

    let run = golden("invert_bits.txt", &["invert", "--d", "57", "--n", "17", "--format", "bits"]);
    let bits: String = field(&run.stdout, "value").chars().filter(|&c| c != '_').collect();
    assert_eq!(bits.len(), 17);
    assert!(is_inverse(57, 17, &BigUint::parse_bytes(bits.as_bytes(), 2).unwrap()));
}

#[test]
fn trace_only_on_request() {
    let run = mersinv(&["invert", "--d", "13", "--n", "101"]);
    assert_eq!(run.code, 0);
    assert!(!run.stdout.contains("trace="));
}

#[test]
fn family_goldens() {
    golden("family_kasami.txt", &["family", "--name", "kasami", "--k", "2", "--n", "29"]);
    let run = golden("family_gold.txt", &["family", "--name", "gold", "--k", "3", "--n", "13"]);
    assert!(is_inverse(9, 13, &field(&run.stdout, "value").parse().unwrap()));
    golden("family_dobbertin.txt", &["family", "--name", "dobbertin", "--k", "1", "--n", "5"]);
}

#[test]
fn structure_order_and_apn_goldens() {
    golden("structure.txt", &["structure", "--d", "13", "--n", "29"]);
    golden("order.txt", &["order", "--d", "2049"]);
    golden("apn_check.txt", &["apn-check", "--d", "5", "--n", "7", "--walsh"]);
    golden("apn_check_even.txt", &["apn-check", "--d", "7", "--n", "6"]);
}

#[test]
fn table_goldens_match_core_fixtures() {
    let run = golden("tables_2.txt", &["tables", "--which", "2"]);
    let fixture = include_str!("../../core/tests/fixtures/table2.txt");
    assert!(run.stdout.starts_with(fixture));
    assert_eq!(run.stdout.matches("table=2\n").count(), 9);
    let run = golden("tables_kasami13.txt", &["tables", "--which", "kasami13"]);
    assert!(run.stdout.starts_with(include_str!("../../core/tests/fixtures/kasami13.txt")));
}

#[test]
fn conjecture_golden() {
    golden("conjecture.txt", &["conjecture", "--k", "2", "--b", "1"]);
}

#[test]
fn bench_records() {
    // 13 is not a unit modulo 2^300 - 1, so that row is skipped.
    let run = mersinv(&["bench", "--d", "13", "--nmax", "500", "--step", "100", "--runs", "3"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let records: Vec<&str> = run.stdout.split("\n\n").collect();
    let ns: Vec<&str> = records.iter().map(|r| field(r, "n")).collect();
    assert_eq!(ns, ["100", "200", "400", "500"]);
    for rec in records {
        assert_eq!(field(rec, "d"), "13");
        for key in ["recursive_ns", "euclid_ns"] {
            assert!(field(rec, key).parse::<u64>().unwrap() > 0);
        }
        assert!(field(rec, "speedup").parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn exit_codes() {
    let run = mersinv(&["invert", "--d", "7", "--n", "6"]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("not invertible"));
    let run = mersinv(&["family", "--name", "gold", "--k", "2", "--n", "4"]);
    assert_eq!(run.code, 1);
    assert_eq!(field(&run.stdout, "invertible"), "false");
    assert_eq!(mersinv(&["invert", "--d", "x", "--n", "6"]).code, 2);
    assert_eq!(mersinv(&["family", "--name", "welch", "--k", "2", "--n", "6"]).code, 2);
    assert_eq!(mersinv(&["family", "--name", "nope", "--k", "2", "--n", "5"]).code, 2);
    assert_eq!(mersinv(&["apn-check", "--d", "3", "--n", "6", "--walsh"]).code, 2);
    assert_eq!(mersinv(&["apn-check", "--d", "3", "--n", "20"]).code, 2);
    assert_eq!(mersinv(&["order", "--d", "8"]).code, 2);
    assert_eq!(mersinv(&["tables", "--which", "9"]).code, 2);
    assert_eq!(mersinv(&["bench", "--d", "13", "--nmax", "10", "--step", "0"]).code, 2);
    assert_eq!(mersinv(&[]).code, 2);
}
