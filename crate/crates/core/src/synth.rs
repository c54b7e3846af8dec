//! Generators of schema source text for tests and benchmarks.
//!
//! Every generated schema parses without errors.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

const PROPS: [&str; 4] = ["acyclic", "irreflexive", "asymmetric", "reflexive"];

/// A random schema with `n_sets` non-value sets (entity, relationship and
/// computed ones, some with inclusions) and `n_funcs` structural functions
/// between them, plus attributes and constraints of every kind.
pub fn random<R: Rng + ?Sized>(n_sets: usize, n_funcs: usize, rng: &mut R) -> String {
    let n_sets = n_sets.max(1);
    let mut names = Vec::with_capacity(n_sets);
    let mut kinds = Vec::with_capacity(n_sets);
    for i in 0..n_sets {
        let roll = rng.gen_range(0..10);
        let (name, kind) = match roll {
            0 | 1 if i >= 2 => (format!("R{i}"), 'r'),
            2 if i >= 1 => (format!("CE{i}"), 'c'),
            3 if i >= 1 => (format!("SUB{i}"), 'i'),
            _ => (format!("E{i}"), 'e'),
        };
        names.push(name);
        kinds.push(kind);
    }

    // functions grouped by the block they are written in
    let mut blocks: Vec<Vec<String>> = vec![Vec::new(); n_sets];
    let mut self_maps: Vec<(usize, String)> = Vec::new();
    for k in 0..n_funcs {
        let block = rng.gen_range(0..n_sets);
        let domain = if rng.gen_bool(0.8) {
            block
        } else {
            rng.gen_range(0..n_sets)
        };
        let codomain = if rng.gen_bool(0.1) {
            domain
        } else {
            rng.gen_range(0..n_sets)
        };
        let name = format!("f{k}");
        let arrow = if rng.gen_bool(0.2) { "↔" } else { "→" };
        let mut line = if domain == block && rng.gen_bool(0.5) {
            format!("{name} {arrow} {}", names[codomain])
        } else {
            format!("{name} : {} {arrow} {}", names[domain], names[codomain])
        };
        if rng.gen_bool(0.3) {
            line.push_str(" total");
        }
        if rng.gen_bool(0.1) {
            line.push_str(" onto");
        }
        if domain == codomain {
            if rng.gen_bool(0.5) {
                let _ = write!(line, " {}", PROPS.choose(rng).unwrap());
            }
            self_maps.push((domain, name.clone()));
        }
        if rng.gen_bool(0.2) {
            line.push_str(" (Some prose about this function.)");
        }
        blocks[block].push(line.clone());
        if rng.gen_bool(0.03) {
            blocks[block].push(line);
        }
    }

    let mut out = String::new();
    let mut label = 0usize;
    if rng.gen_bool(0.3) {
        out.push_str("VALUE GRADES = {'A', 'B', 'C'}\n");
    }
    for i in 0..n_sets {
        let name = &names[i];
        out.push('\n');
        match kinds[i] {
            'r' => {
                let a = rng.gen_range(0..i);
                let b = rng.gen_range(0..i);
                let _ = writeln!(out, "{name}(Left: {}, Right: {})", names[a], names[b]);
            }
            'c' => {
                let base = rng.gen_range(0..i);
                let _ = writeln!(out, "COMPUTED {name} = {{x ∈ {} | x > 0}}", names[base]);
            }
            'i' => {
                let sup = rng.gen_range(0..i);
                let _ = writeln!(out, "{name}");
                let _ = writeln!(out, "{name} SUBSETOF {}", names[sup]);
            }
            _ => {
                if rng.gen_bool(0.2) {
                    let _ = writeln!(out, "{name} (A set of things.)");
                } else {
                    let _ = writeln!(out, "{name}");
                }
            }
        }
        if kinds[i] != 'r' || rng.gen_bool(0.5) {
            let _ = writeln!(out, "x ↔ NAT({}) total", rng.gen_range(1..=12));
        }
        let n_attrs = rng.gen_range(0..4);
        for a in 0..n_attrs {
            let codomain = match rng.gen_range(0..6) {
                0 => "ASCII(64)".to_string(),
                1 => "[-6500, CurrentYear()]".to_string(),
                2 => "{'M', 'F'}".to_string(),
                3 if out.contains("VALUE GRADES") => "GRADES".to_string(),
                4 => "BOOLE".to_string(),
                _ => format!("NAT({})", rng.gen_range(1..=9)),
            };
            let mut line = format!("a{a} → {codomain}");
            if rng.gen_bool(0.4) {
                line.push_str(" total");
            }
            if codomain.starts_with("NAT") && rng.gen_bool(0.2) {
                line.push_str(" default 0");
            }
            let _ = writeln!(out, "{line}");
        }
        if n_attrs > 0 && rng.gen_bool(0.3) {
            let _ = writeln!(out, "size = a0 + 1");
        }
        for line in &blocks[i] {
            let _ = writeln!(out, "{line}");
        }
        if n_attrs >= 2 && rng.gen_bool(0.5) {
            label += 1;
            let _ = writeln!(out, "K_{label} : a0 • a1 key (No two objects share both.)");
        }
        for (_, f) in self_maps.iter().filter(|(d, _)| *d == i) {
            if rng.gen_bool(0.3) {
                label += 1;
                let p = PROPS.choose(rng).unwrap();
                let _ = writeln!(out, "K_{label} : {f} ° {f} {p}");
            }
        }
        if rng.gen_bool(0.4) {
            label += 1;
            let other = rng.gen_range(0..n_sets);
            if other != i && rng.gen_bool(0.5) {
                let _ = writeln!(
                    out,
                    "K_{label} [{}] : (∀x ∈ {name})(x ≠ 0) (Nothing is zero here.)",
                    names[other]
                );
            } else if rng.gen_bool(0.5) {
                let _ = writeln!(
                    out,
                    "K_{label} : (∀x, y ∈ {name})(∃z ∈ {})(x ≠ y ⇒ z = z)",
                    names[other]
                );
            } else {
                let _ = writeln!(out, "(∀x ∈ {name})(x = x)");
            }
        }
    }
    out
}

/// Sets `S0 … S{n-1}` linked by `f_i : S_i → S_{i+1}`.
pub fn chain(n: usize) -> String {
    let mut out = String::new();
    for i in 0..n {
        let _ = writeln!(out, "S{i}\nx ↔ NAT(6) total\nName → ASCII(32) total");
        if i + 1 < n {
            let _ = writeln!(out, "f{i} → S{}", i + 1);
        }
        let _ = writeln!(out, "C_{i} : (∀x ∈ S{i})(x = x)\n");
    }
    out
}

/// A hub set `HUB` with `n` spokes `S_i`, each with `g_i : S_i → HUB`.
pub fn star(n: usize) -> String {
    let mut out = String::from("HUB\nx ↔ NAT(6) total\n\n");
    for i in 0..n {
        let _ = writeln!(out, "S{i}\nx ↔ NAT(6) total\ng{i} → HUB total\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_schema;
    use rand::SeedableRng;

    #[test]
    fn generated_schemas_parse() {
        for seed in 0..200 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let sets = rng.gen_range(1..=50);
            let funcs = rng.gen_range(0..=200);
            let src = random(sets, funcs, &mut rng);
            let parsed = parse_schema(&src).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{src}"));
            assert_eq!(parsed.schema.non_value_sets().len(), sets);
        }
    }

    #[test]
    fn chain_and_star_shapes() {
        let c = parse_schema(&chain(5)).unwrap().schema;
        assert_eq!(c.non_value_sets().len(), 5);
        assert_eq!(c.mappings().iter().filter(|m| m.is_structural()).count(), 4);
        let s = parse_schema(&star(4)).unwrap().schema;
        assert_eq!(s.functions_into("HUB").unwrap().len(), 4);
    }
}
