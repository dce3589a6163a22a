//! End-to-end acceptance checks. Prints one line per criterion and exits
//! non-zero when any of criteria 1-7 fails. Criterion 8 (timing) is reported
//! but only enforced when `MERSINV_STRICT_PERF` is set.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use common::{big, mersenne, oracle_inverse, oracle_order, p2, weight};
use mersinv_core::families::{
    dobbertin_inverse, family_inverse, gold_inverse, kasami_inverse, niho_inverse, welch_inverse,
    welch_recurrence_bits,
};
use mersinv_core::inv::{concat_structure, invert, lift_inverse, lift_inverse_concat, lift_inverse_direct, s_quantity};
use mersinv_core::record::parse_all;
use mersinv_core::tables::{table, TableId};
use mersinv_core::verify::{is_ab, is_apn, FieldCtx};
use mersinv_core::{euclid_inverse, perf, BigUint, Error, ExponentSpec, Family, MersenneRing, Residue, Step};
use num_integer::Integer;

/// Required speedup of recursive inversion over extended Euclid.
const SPEEDUP_TARGET: f64 = 10.0;
const PERF_D: u64 = 13;
const PERF_N: u64 = 10_001;
const PERF_RUNS: usize = 5;
const MAX_CLOSED_N: u64 = 2000;
const WALSH_CAP: u32 = 9;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn residue(d: u64, n: u64) -> Option<Residue> {
    if n == 1 {
        return Some(Residue::unit_ring_inverse());
    }
    oracle_inverse(&big(d), n).map(|t| MersenneRing::new(n).unwrap().reduce(&t))
}

fn criterion_1() -> Outcome {
    let mut pairs = 0;
    for d in (3..=999u64).step_by(2) {
        for n in 2..=40u64 {
            let ring = MersenneRing::new(n).unwrap();
            let Ok(want) = euclid_inverse(&big(d), &ring) else {
                ensure(invert(&big(d), n).is_err(), || format!("d={d} n={n} inverted but not a unit"))?;
                continue;
            };
            let got = invert(&big(d), n).map_err(|e| format!("d={d} n={n}: {e}"))?;
            ensure(got.value == want, || format!("d={d} n={n}: {} != {want}", got.value))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (d, n) pairs equal to extended Euclid"))
}

/// `d * t ≡ 1 (mod 2^n - 1)` with `t` in range, by plain `%`.
fn sound(d: &BigUint, n: u64, t: &BigUint) -> bool {
    let m = mersenne(n);
    if n == 1 {
        return t == &big(1);
    }
    t < &m && (d * t) % &m == big(1)
}

fn criterion_2() -> Outcome {
    let mut checked = 0u64;
    let mut run = |family: Family, k: u64, n: u64| -> Result<(), String> {
        let Ok(spec) = ExponentSpec::new(family, k, n) else { return Ok(()) };
        match family_inverse(&spec) {
            Ok(res) => {
                ensure(matches!(res.trace[..], [Step::ClosedForm { .. }]), || format!("{spec}: no closed form"))?;
                ensure(sound(spec.d(), n, res.value.value()), || format!("{spec}: d*t != 1"))?;
                checked += 1;
            }
            Err(Error::NotInvertible { .. }) => {
                ensure(oracle_inverse(spec.d(), n).is_none(), || format!("{spec}: wrongly rejected"))?
            }
            Err(e) => return Err(format!("{spec}: {e}")),
        }
        Ok(())
    };
    for n in 2..=MAX_CLOSED_N {
        let kmax = if n <= 300 { n } else { 8 };
        for k in 1..=kmax {
            run(Family::Gold, k, n)?;
            run(Family::Kasami, k, n)?;
            run(Family::AllOnes, k, n)?;
        }
    }
    for k in 1..=(MAX_CLOSED_N - 1) / 2 {
        run(Family::Welch, k, 2 * k + 1)?;
        run(Family::FieldInverse, k, 2 * k + 1)?;
    }
    for k in 1..=(MAX_CLOSED_N - 3) / 4 {
        run(Family::Niho, k, 4 * k + 1)?;
        run(Family::Niho, k, 4 * k + 3)?;
    }
    for k in (1..=MAX_CLOSED_N / 5).step_by(2) {
        run(Family::Dobbertin, k, 5 * k)?;
    }
    Ok(format!("{checked} closed-form inverses with n <= {MAX_CLOSED_N}, all exact"))
}

fn welch_min_k() -> BTreeMap<u64, u64> {
    parse_all(include_str!("fixtures/welch_validity.txt"))
        .unwrap()
        .iter()
        .map(|r| (r.get("residue").unwrap().parse().unwrap(), r.get("min_k").unwrap().parse().unwrap()))
        .collect()
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    let mut law = |what: &str, got: u64, want: u64| -> Result<(), String> {
        checked += 1;
        ensure(got == want, || format!("{what}: weight {got}, law says {want}"))
    };
    for k in 1..=16u64 {
        for n in 2..=200u64 {
            if let Some(t) = oracle_inverse(&(p2(k) + 1u32), n) {
                ensure(gold_inverse(k, n).map(|r| r.value.into_value()) == Ok(t.clone()), || format!("gold k={k} n={n}"))?;
                law(&format!("gold k={k} n={n}"), weight(&t), (n - n.gcd(&k) + 2) / 2)?;
            }
        }
    }
    for k in (1..=21u64).step_by(2) {
        let t = dobbertin_inverse(k).map_err(|e| e.to_string())?;
        law(&format!("dobbertin k={k}"), weight(t.value.value()), (5 * k + 3) / 2)?;
    }
    for k in 1..=249u64 {
        for (n, c) in [(4 * k + 1, if k % 2 == 0 { 5 } else { 9 }), (4 * k + 3, if k % 2 == 0 { 7 } else { 11 })] {
            if n > 1000 {
                continue;
            }
            let t = niho_inverse(k, n).map_err(|e| e.to_string())?;
            law(&format!("niho k={k} n={n}"), weight(t.value.value()), (3 * n + c) / 8)?;
        }
    }
    let min_k = welch_min_k();
    let extra = [1, 1, 0, 0, 0, 0, 1, 1];
    for k in 1..=200u64 {
        let t = welch_inverse(k).map_err(|e| e.to_string())?;
        let oracle = oracle_inverse(&(p2(k) + 3u32), 2 * k + 1).unwrap();
        ensure(t.value.value() == &oracle, || format!("welch k={k} wrong value"))?;
        if k >= min_k[&(k % 8)] {
            law(&format!("welch k={k}"), weight(&oracle), k + extra[(k % 8) as usize])?;
        }
    }
    for k in 1..=6u64 {
        let d = p2(2 * k) - p2(k) + 1u32;
        for n in 2..=300u64 {
            let r = n % (6 * k);
            let (Some(t), false) = (oracle_inverse(&d, n), r == 0) else { continue };
            ensure(kasami_inverse(k, n).map(|x| x.value.into_value()) == Ok(t.clone()), || format!("kasami k={k} n={n}"))?;
            let a = oracle_inverse(&d, r).unwrap();
            law(&format!("kasami k={k} n={n}"), weight(&t), weight(&a) + (n - r) / 2)?;
        }
    }
    Ok(format!("{checked} weights equal their laws"))
}

fn criterion_4() -> Outcome {
    let fixtures = [
        (TableId::Kasami3, include_str!("fixtures/table2.txt")),
        (TableId::Kasami4, include_str!("fixtures/table3.txt")),
        (TableId::Kasami5, include_str!("fixtures/table4.txt")),
    ];
    for (id, want) in fixtures {
        let got = table(id).map_err(|e| e.to_string())?.to_text();
        ensure(got == want, || format!("table {} differs from its fixture", id.name()))?;
    }
    let weights: Vec<String> = table(TableId::Kasami3).unwrap().rows.iter().map(|r| r[1].clone()).collect();
    ensure(weights == ["1", "1", "2", "4", "2", "6", "6", "7", "9"], || format!("d=57 weights {weights:?}"))?;
    Ok("tables 2, 3 and 4 byte-identical to fixtures".to_string())
}

fn criterion_5() -> Outcome {
    let mut layouts = 0;
    let mut sums = 0;
    for d in (3..=199u64).step_by(2) {
        for n in 2..=300u64 {
            let Some(t) = oracle_inverse(&big(d), n) else { continue };
            let st = concat_structure(&big(d), n).map_err(|e| format!("d={d} n={n}: {e}"))?;
            ensure(st.reassembled.value() == t && st.reassembled.len() == n, || format!("d={d} n={n} reassembly"))?;
            layouts += 1;
        }
        let ord = oracle_order(d);
        for r in 1..ord {
            let (Some(a), Some(b)) = (residue(d, r), residue(d, ord - r)) else { continue };
            let sa = s_quantity(&big(d), r, &a).map_err(|e| e.to_string())?.s;
            let sb = s_quantity(&big(d), ord - r, &b).map_err(|e| e.to_string())?.s;
            ensure(sa + sb == big(d + 1), || format!("d={d} r={r}: S sum"))?;
            sums += 1;
        }
    }
    for r in 1..=25u64 {
        let k = 8 * r;
        let bits = welch_recurrence_bits(r);
        ensure(Some(bits.value()) == oracle_inverse(&(p2(k) + 3u32), 2 * k + 1), || format!("welch recurrence r={r}"))?;
    }
    Ok(format!("{layouts} layouts, {sums} S sums, 25 recurrence steps"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for d in (3..=199u64).step_by(2) {
        let ord = oracle_order(d);
        for n in 2..=200u64 {
            let r = n % ord;
            if r == 0 {
                continue;
            }
            let Some(want) = residue(d, n) else { continue };
            let a = residue(d, r).unwrap();
            let b = residue(d, ord - r).unwrap();
            let dd = big(d);
            let forms = [
                lift_inverse(&dd, r, &a, n),
                lift_inverse_concat(&dd, r, &a, &b, n),
                lift_inverse_direct(&dd, r, &a, n),
            ];
            for (i, f) in forms.into_iter().enumerate() {
                let f = f.map_err(|e| format!("d={d} n={n} form {i}: {e}"))?;
                ensure(f == want, || format!("d={d} n={n}: form {i} gives {f}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (d, n) pairs, three formulas each"))
}

fn criterion_7() -> Outcome {
    let mut apn = 0;
    let mut ab = 0;
    for n in [5u64, 7, 9] {
        let f = FieldCtx::new(n as u32).unwrap();
        for spec in ExponentSpec::apn_catalog(n) {
            let d = spec.reduced();
            ensure(is_apn(&d, &f).unwrap(), || format!("{spec} not APN"))?;
            let inv = oracle_inverse(&d, n).ok_or_else(|| format!("{spec} not invertible"))?;
            ensure(is_apn(&inv, &f).unwrap(), || format!("inverse of {spec} not APN"))?;
            apn += 2;
            if matches!(spec.family(), Family::Gold | Family::Kasami | Family::Welch | Family::Niho) {
                ensure(is_ab(&d, &f, WALSH_CAP).unwrap(), || format!("{spec} not AB"))?;
                ab += 1;
            }
        }
    }
    let f5 = FieldCtx::new(5).unwrap();
    let dob = dobbertin_inverse(1).map_err(|e| e.to_string())?;
    ensure(!is_ab(dob.value.value(), &f5, WALSH_CAP).unwrap(), || "dobbertin inverse is AB at n=5".into())?;
    // Dobbertin at n=15 is beyond every supported field.
    ensure(FieldCtx::new(15).is_err(), || "n=15 field unexpectedly available".into())?;
    let field = ExponentSpec::new(Family::FieldInverse, 2, 5).unwrap();
    ensure(!is_ab(field.d(), &f5, WALSH_CAP).unwrap(), || "field inverse is AB at n=5".into())?;
    Ok(format!("{apn} APN checks, {ab} AB checks, 2 non-AB confirmed, n=15 skipped"))
}

fn criterion_8() -> Outcome {
    let d = big(PERF_D);
    let row = perf::compare(&d, PERF_N, PERF_RUNS, false).map_err(|e| e.to_string())?;
    let detail = format!(
        "d={PERF_D} n={PERF_N}: recursive {:?}, euclid {:?}, speedup {:.2}x (target {SPEEDUP_TARGET}x)",
        row.recursive,
        row.euclid,
        row.speedup()
    );
    if row.speedup() >= SPEEDUP_TARGET {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let strict_perf = std::env::var_os("MERSINV_STRICT_PERF").is_some();
    let mut failed = Vec::new();
    for (id, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(msg) => println!("criterion {id}: PASS {msg} ({secs:.1}s)"),
            Err(msg) => println!("criterion {id}: FAIL {msg} ({secs:.1}s)"),
        }
        if outcome.is_err() && (id != 8 || strict_perf) {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
