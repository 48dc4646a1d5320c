//! Generates the 13x13 Allen composition table by enumerating every rank
//! assignment of the six endpoints of three intervals.
//!
//! Relation indices follow `BaseRelation`:
//! b bi m mi o oi s si d di f fi eq.

use std::cmp::Ordering;
use std::env;
use std::fs;
use std::path::Path;

fn relation(a: (u8, u8), b: (u8, u8)) -> usize {
    let (a_start, a_end) = a;
    let (b_start, b_end) = b;
    if a_end < b_start {
        return 0;
    }
    if b_end < a_start {
        return 1;
    }
    if a_end == b_start {
        return 2;
    }
    if b_end == a_start {
        return 3;
    }
    match (a_start.cmp(&b_start), a_end.cmp(&b_end)) {
        (Ordering::Less, Ordering::Less) => 4,
        (Ordering::Greater, Ordering::Greater) => 5,
        (Ordering::Equal, Ordering::Less) => 6,
        (Ordering::Equal, Ordering::Greater) => 7,
        (Ordering::Greater, Ordering::Less) => 8,
        (Ordering::Less, Ordering::Greater) => 9,
        (Ordering::Greater, Ordering::Equal) => 10,
        (Ordering::Less, Ordering::Equal) => 11,
        (Ordering::Equal, Ordering::Equal) => 12,
    }
}

fn main() {
    // Six endpoints need at most six distinct ranks.
    const RANKS: u8 = 6;
    let mut intervals = Vec::new();
    for s in 0..RANKS {
        for e in (s + 1)..RANKS {
            intervals.push((s, e));
        }
    }

    let mut table = [[0u16; 13]; 13];
    for &a in &intervals {
        for &b in &intervals {
            let ab = relation(a, b);
            for &c in &intervals {
                let bc = relation(b, c);
                table[ab][bc] |= 1 << relation(a, c);
            }
        }
    }

    let mut src = String::from("/// Generated by build.rs from endpoint-rank enumeration.\n");
    src.push_str("pub(crate) const COMPOSITION: [[u16; 13]; 13] = [\n");
    for row in &table {
        src.push_str("    [");
        for (k, cell) in row.iter().enumerate() {
            if k > 0 {
                src.push_str(", ");
            }
            src.push_str(&format!("0x{cell:04x}"));
        }
        src.push_str("],\n");
    }
    src.push_str("];\n");

    let out = Path::new(&env::var("OUT_DIR").unwrap()).join("composition_table.rs");
    fs::write(out, src).unwrap();
    println!("cargo:rerun-if-changed=build.rs");
}
