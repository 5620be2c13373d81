mod common;

use btor2kit_core::bmc::{check, Engine, Mode};
use btor2kit_core::btor2::{parse_btor2, typecheck, Btor2File, NodeId, NodeKind};
use btor2kit_core::interp::{simulate, SimOptions};
use btor2kit_core::ir::{fold_constants, verify_ir};
use btor2kit_core::translate::{canonical_form, to_btor2, to_ir};
use proptest::prelude::*;

use common::{corpus, corpus_file};

fn reparse(file: &Btor2File) -> Btor2File {
    parse_btor2(&file.to_string(), &file.source_name).unwrap()
}

/// Maps every id `n` to `a * n + b`, keeping the file well ordered.
fn renumber(file: &Btor2File, a: u64, b: u64) -> Btor2File {
    let map = |n: u64| a * n + b;
    let mut out = Btor2File::new(file.source_name.clone());
    for line in file.lines() {
        let mut line = line.clone();
        line.id = NodeId(map(line.id.0));
        line.sort = line.sort.map(|s| NodeId(map(s.0)));
        line.operands = line
            .operands
            .iter()
            .map(|&o| {
                let m = map(o.unsigned_abs()) as i64;
                if o < 0 {
                    -m
                } else {
                    m
                }
            })
            .collect();
        out.nodes.insert(line.id, line);
    }
    out
}

fn without_symbols(file: &Btor2File) -> Btor2File {
    let mut out = file.clone();
    for line in out.nodes.values_mut() {
        line.symbol = None;
    }
    out
}

#[test]
fn printing_and_reparsing_gives_the_same_node_table() {
    for d in corpus() {
        assert_eq!(reparse(&d.file).nodes, d.file.nodes, "{}", d.name);
    }
}

#[test]
fn every_value_node_has_one_sort() {
    for d in corpus() {
        for line in d.file.lines() {
            if line.kind.is_sort() || line.kind.is_value() {
                assert!(d.system.sorts.contains_key(&line.id), "{} line {}", d.name, line.id);
            }
        }
    }
}

#[test]
fn typecheck_ignores_symbols() {
    for d in corpus() {
        let bare = typecheck(&without_symbols(&d.file)).unwrap();
        assert_eq!(bare.sorts, d.system.sorts, "{}", d.name);
        assert_eq!(typecheck(&d.file).unwrap(), d.system, "{}", d.name);
    }
}

#[test]
fn round_trip_preserves_canonical_form() {
    for d in corpus() {
        let emitted = to_btor2(&d.program).unwrap();
        let back = typecheck(&reparse(&emitted)).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&d.system), "{}", d.name);
    }
}

#[test]
fn round_trip_node_count_is_bounded() {
    for d in corpus() {
        let emitted = to_btor2(&d.program).unwrap();
        let sorts = d.file.lines().filter(|l| matches!(l.kind, NodeKind::SortBitvec | NodeKind::SortArray)).count();
        let limit = d.file.len() + d.system.states.len() + sorts;
        assert!(emitted.len() <= limit, "{}: {} > {}", d.name, emitted.len(), limit);
    }
}

#[test]
fn distinct_corpus_files_have_distinct_canonical_forms() {
    let forms: Vec<(String, String)> = corpus().into_iter().map(|d| (d.name, canonical_form(&d.system))).collect();
    for (i, (a, fa)) in forms.iter().enumerate() {
        for (b, fb) in &forms[i + 1..] {
            assert_ne!(fa, fb, "{a} and {b}");
        }
    }
}

#[test]
fn folding_is_idempotent_and_keeps_programs_valid() {
    for d in corpus() {
        let once = fold_constants(&d.program);
        assert!(verify_ir(&once).is_empty(), "{}", d.name);
        assert_eq!(fold_constants(&once), once, "{}", d.name);
    }
}

#[test]
fn folding_preserves_traces() {
    for d in corpus() {
        let folded = fold_constants(&d.program);
        for seed in 0..5 {
            let opts = SimOptions::new(16, seed);
            assert_eq!(simulate(&d.program, &opts, None), simulate(&folded, &opts, None), "{} seed {seed}", d.name);
        }
    }
}

#[test]
fn folding_preserves_verdicts() {
    let engine = Engine::Internal { budget_bits: 16 };
    for d in corpus() {
        let folded = fold_constants(&d.program);
        for bound in [0, 3, 8] {
            let (Ok(a), Ok(b)) =
                (check(&d.program, bound, Mode::PerProperty, engine), check(&folded, bound, Mode::PerProperty, engine))
            else {
                continue;
            };
            let kinds = |r: &btor2kit_core::bmc::BmcResult| r.verdicts.iter().map(|v| v.kind()).collect::<Vec<_>>();
            assert_eq!(kinds(&a), kinds(&b), "{} bound {bound}", d.name);
        }
    }
}

proptest! {
    #[test]
    fn canonical_form_ignores_numbering(a in 1u64..5, b in 0u64..1000) {
        for name in ["factorial", "array_fill", "negated_operand", "slice_ext_concat"] {
            let d = corpus_file(name);
            let moved = typecheck(&renumber(&d.file, a, b)).unwrap();
            prop_assert_eq!(canonical_form(&moved), canonical_form(&d.system));
            prop_assert_eq!(to_ir(&moved).ops.len(), d.program.ops.len());
        }
    }
}
