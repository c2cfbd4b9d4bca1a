//! The sample partitions of sizes 7 to 15 printed by `table samples`,
//! given by the exponent vectors of their characters `Z_π`.

use dt4_core::DPartition;

const BASE7: &[[u32; 4]] = &[
    [0, 0, 0, 0],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [1, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [0, 0, 0, 2],
];

const BASE9: &[[u32; 4]] = &[
    [0, 0, 0, 0],
    [1, 0, 0, 0],
    [2, 0, 0, 0],
    [0, 1, 0, 0],
    [1, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 0, 0, 1],
    [0, 0, 0, 2],
];

const EXTRA: &[[u32; 4]] = &[
    [0, 1, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 0, 3],
    [0, 0, 0, 4],
    [0, 0, 0, 5],
    [0, 2, 0, 0],
];

fn with(base: &[[u32; 4]], extra: &[[u32; 4]]) -> DPartition {
    let mut cells = base.to_vec();
    cells.extend_from_slice(extra);
    DPartition::from_monomials(&cells).expect("valid sample partition")
}

/// Nine solid partitions of sizes 7, 8, ..., 15.
pub fn sample_partitions() -> Vec<DPartition> {
    let mut out = vec![with(BASE7, &[]), with(BASE7, &[[1, 0, 0, 1]])];
    for k in 0..=EXTRA.len() {
        out.push(with(BASE9, &EXTRA[..k]));
    }
    out
}
