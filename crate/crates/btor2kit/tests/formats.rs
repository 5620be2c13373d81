use std::path::Path;

use btor2kit::cli::{canonical_matches, roundtrip_file};
use btor2kit::load;
use btor2kit::witness::{parse_trace, parse_witnesses, write_trace, write_witness};
use btor2kit_core::bmc::{brute_force_check, DEFAULT_BUDGET_BITS};
use btor2kit_core::interp::{replay, simulate, SimOptions};
use btor2kit_core::ir::Program;
use btor2kit_core::translate::to_ir;
use proptest::prelude::*;

const DESIGNS: [&str; 6] = ["counter", "array_nondet", "free_state", "wide", "toggle", "no_init"];

fn program(name: &str) -> Program {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.btor2"));
    to_ir(&load(&path).unwrap().system)
}

#[test]
fn witnesses_round_trip_and_still_replay() {
    for name in ["counter", "toggle", "array_fill", "constraint", "no_init"] {
        let p = program(name);
        let r = brute_force_check(&p, 5, DEFAULT_BUDGET_BITS).unwrap();
        let found: Vec<_> = r.verdicts.iter().filter_map(|v| v.witness().cloned()).collect();
        let text: String = found.iter().map(|w| write_witness(&p, w)).collect();
        let parsed = parse_witnesses(&p, &text).unwrap();
        assert_eq!(parsed, found, "{name}");
        for w in &parsed {
            assert!(replay(&p, w).unwrap().is_confirmed(), "{name}");
        }
    }
}

#[test]
fn malformed_witnesses_are_rejected() {
    let p = program("counter");
    for text in [
        "sat\nb0\n#0\n0 1111\n@0\n",
        "sat\nb0\n#0\n0 11\n@0\n.\n",
        "unsat\n",
        "sat\nbx\n.\n",
        "sat\nb0\n#0\n0 1111\n@0\n9 1\n.\n",
    ] {
        assert!(parse_witnesses(&p, text).is_err(), "{text:?}");
    }
}

#[test]
fn missing_terminator_names_the_last_line() {
    let p = program("counter");
    let err = parse_witnesses(&p, "sat\nb0\n#0\n0 0000\n@0\n").unwrap_err();
    assert_eq!(err.line, 5);
}

#[test]
fn roundtrip_mismatch_is_detected() {
    let loaded = load(&Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/counter.btor2")).unwrap();
    let (printed, same) = roundtrip_file(&loaded.file).unwrap();
    assert!(same);
    let tampered = printed.to_string().replace(" add ", " sub ");
    assert_ne!(tampered, printed.to_string());
    assert!(!canonical_matches(&loaded.system, &tampered).unwrap());
}

proptest! {
    #[test]
    fn traces_round_trip(design in 0usize..DESIGNS.len(), seed in any::<u64>(), cycles in 0u32..12) {
        let p = program(DESIGNS[design]);
        let trace = simulate(&p, &SimOptions::new(cycles, seed), None).unwrap();
        let parsed = parse_trace(&p, &write_trace(&p, &trace)).unwrap();
        prop_assert_eq!(parsed, trace.to_frames());
    }
}
