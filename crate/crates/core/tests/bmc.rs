mod common;

use btor2kit_core::bmc::{brute_force_check, emit_smtlib, unroll_all, BmcResult, Mode, DEFAULT_BUDGET_BITS};
use btor2kit_core::interp::{replay, simulate, PropertyStatus, ReplayResult, SimOptions};

use common::{corpus, corpus_file, Design};

fn internal(d: &Design, bound: u32) -> Option<BmcResult> {
    brute_force_check(&d.program, bound, DEFAULT_BUDGET_BITS).ok()
}

#[test]
fn counter_bounds() {
    let d = corpus_file("counter");
    assert!(internal(&d, 14).unwrap().verdicts[0].is_safe());
    let r = internal(&d, 15).unwrap();
    let w = r.verdicts[0].witness().unwrap();
    assert_eq!(w.violation_frame, Some(15));
    assert_eq!(w.frames[15].states[0].as_bv().unwrap().to_binary(), "1111");
}

#[test]
fn unsafe_verdicts_are_monotone_in_the_bound() {
    for d in corpus() {
        let mut seen = vec![false; d.program.properties.len()];
        for bound in 0..=16 {
            let Some(r) = internal(&d, bound) else { break };
            for (j, v) in r.verdicts.iter().enumerate() {
                assert!(!seen[j] || v.is_unsafe(), "{} property {j} bound {bound}", d.name);
                seen[j] |= v.is_unsafe();
            }
        }
    }
}

#[test]
fn every_unsafe_verdict_replays() {
    for d in corpus() {
        for bound in [0, 5, 15] {
            let Some(r) = internal(&d, bound) else { continue };
            for (j, v) in r.verdicts.iter().enumerate() {
                if let Some(w) = v.witness() {
                    let got = replay(&d.program, w).unwrap();
                    assert!(
                        matches!(got, ReplayResult::Confirmed { property, .. } if property == j),
                        "{} property {j} bound {bound}: {got:?}",
                        d.name
                    );
                }
            }
        }
    }
}

#[test]
fn earliest_violation_matches_simulation() {
    for name in ["counter", "factorial", "two_counters", "div_udiv"] {
        let d = corpus_file(name);
        let trace = simulate(&d.program, &SimOptions::new(20, 0), None).unwrap();
        let r = internal(&d, 20).unwrap();
        for (j, v) in r.verdicts.iter().enumerate() {
            assert_eq!(v.witness().and_then(|w| w.violation_frame), trace.violations_of(j).next(), "{name} {j}");
        }
    }
}

#[test]
fn safe_means_safe() {
    let mut cases = Vec::new();
    for d in corpus() {
        for bound in [3, 8, 12] {
            let Some(r) = internal(&d, bound) else { continue };
            let safe: Vec<usize> = (0..r.verdicts.len()).filter(|&j| r.verdicts[j].is_safe()).collect();
            if !safe.is_empty() {
                cases.push((d.program.clone(), d.name.clone(), bound, safe));
            }
        }
    }
    assert!(!cases.is_empty());
    let mut runs = 0u64;
    let mut seed = 0u64;
    while runs < 1000 {
        for (p, name, bound, safe) in &cases {
            let trace = simulate(p, &SimOptions::new(*bound, seed), None).unwrap();
            let script = trace.to_frames();
            let replayed = simulate(p, &SimOptions::new(*bound, 0), Some(&script)).unwrap();
            for f in &replayed.frames {
                for &j in safe {
                    assert_ne!(f.properties[j], PropertyStatus::Violated, "{name} property {j} seed {seed}");
                }
            }
            runs += 1;
            seed += 1;
        }
    }
}

#[test]
fn emission_is_deterministic() {
    for d in corpus() {
        for mode in [Mode::PerProperty, Mode::Combined] {
            let a: Vec<String> = unroll_all(&d.program, 6, mode).iter().map(emit_smtlib).collect();
            let b: Vec<String> = unroll_all(&d.program, 6, mode).iter().map(emit_smtlib).collect();
            assert_eq!(a, b, "{}", d.name);
        }
    }
}

#[test]
fn enumeration_counts_leaves() {
    let d = corpus_file("toggle");
    assert_eq!(internal(&d, 3).unwrap().enumerated, 16);
}
