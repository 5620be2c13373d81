#![allow(dead_code)]

use std::path::PathBuf;

use btor2kit_core::btor2::{parse_btor2, typecheck, Btor2File, TypedSystem};
use btor2kit_core::ir::Program;
use btor2kit_core::translate::to_ir;

pub struct Design {
    pub name: String,
    pub text: String,
    pub file: Btor2File,
    pub system: TypedSystem,
    pub program: Program,
}

pub fn design(name: &str, text: &str) -> Design {
    let file = parse_btor2(text, name).unwrap_or_else(|e| panic!("{name}: {e}"));
    let system = typecheck(&file).unwrap_or_else(|e| panic!("{name}: {e}"));
    let program = to_ir(&system);
    Design { name: name.to_string(), text: text.to_string(), file, system, program }
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn corpus() -> Vec<Design> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "btor2"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).unwrap();
            design(p.file_stem().unwrap().to_str().unwrap(), &text)
        })
        .collect()
}

pub fn corpus_file(name: &str) -> Design {
    let text = std::fs::read_to_string(corpus_dir().join(format!("{name}.btor2"))).unwrap();
    design(name, &text)
}
