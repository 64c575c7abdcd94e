//! Named small permutation groups used by tests, examples and the CLI.

use super::{Enumerated, FinGroup, ENUMERATION_BOUND};
use crate::perm::{PermGroup, Permutation};

/// Names accepted by [`perm_group`], in increasing order.
pub const NAMES: &[&str] = &[
    "C2xC2", "S3", "C6", "D4", "Q8", "A4", "D6", "S4", "SL2(3)", "S3xS3", "A5", "C3wrC3", "S5",
];

fn cyc(degree: usize, cycles: &[&[u32]]) -> Permutation {
    let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
    Permutation::from_cycles(degree, &cycles).expect("corpus cycles are valid")
}

/// Right-regular image of quaternion multiplication by `by`.
/// Elements: index `2u + s` is `(-1)^s * [1, i, j, k][u]`.
fn q8_regular(by: usize) -> Permutation {
    // unit products: (u, v) -> (sign, w)
    let table = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let images = (0..8)
        .map(|x| {
            let (u, s) = (x / 2, x % 2);
            let (v, t) = (by / 2, by % 2);
            let (sign, w) = table[u][v];
            (2 * w + (s + t + sign) % 2) as u32
        })
        .collect();
    Permutation::from_images(images).expect("regular image is a bijection")
}

/// `SL_2(3)` acting on the 8 nonzero row vectors of `F_3^2`.
fn sl23_gen(m: [[u32; 2]; 2]) -> Permutation {
    let vecs: Vec<(u32, u32)> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|&v| v != (0, 0))
        .collect();
    let images = vecs
        .iter()
        .map(|&(a, b)| {
            let w = ((a * m[0][0] + b * m[1][0]) % 3, (a * m[0][1] + b * m[1][1]) % 3);
            vecs.iter().position(|&v| v == w).unwrap() as u32
        })
        .collect();
    Permutation::from_images(images).expect("invertible matrix permutes vectors")
}

pub fn perm_group(name: &str) -> Option<PermGroup> {
    let g = match name {
        "C2xC2" => vec![cyc(4, &[&[0, 1], &[2, 3]]), cyc(4, &[&[0, 2], &[1, 3]])],
        "S3" => vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])],
        "C6" => vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]])],
        "D4" => vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 2]])],
        "Q8" => vec![q8_regular(2), q8_regular(4)],
        "A4" => vec![cyc(4, &[&[0, 1, 2]]), cyc(4, &[&[0, 1], &[2, 3]])],
        "D6" => vec![cyc(6, &[&[0, 1, 2, 3, 4, 5]]), cyc(6, &[&[1, 5], &[2, 4]])],
        "S4" => vec![cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])],
        "SL2(3)" => vec![sl23_gen([[1, 1], [0, 1]]), sl23_gen([[1, 0], [1, 1]])],
        "S3xS3" => vec![
            cyc(6, &[&[0, 1]]),
            cyc(6, &[&[0, 1, 2]]),
            cyc(6, &[&[3, 4]]),
            cyc(6, &[&[3, 4, 5]]),
        ],
        "A5" => vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[2, 3, 4]])],
        "C3wrC3" => vec![cyc(9, &[&[0, 1, 2]]), cyc(9, &[&[0, 3, 6], &[1, 4, 7], &[2, 5, 8]])],
        "S5" => vec![cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1]])],
        "A5wrC2" => vec![
            cyc(10, &[&[0, 1, 2, 3, 4]]),
            cyc(10, &[&[2, 3, 4]]),
            cyc(10, &[&[0, 5], &[1, 6], &[2, 7], &[3, 8], &[4, 9]]),
        ],
        _ => return None,
    };
    let degree = g[0].degree();
    Some(PermGroup::new(degree, g).expect("corpus degrees agree"))
}

/// Enumerates a named corpus group; panics on unknown names.
pub fn enumerate(name: &str) -> Enumerated<Permutation> {
    let g = perm_group(name).unwrap_or_else(|| panic!("unknown corpus group {name}"));
    FinGroup::enumerate(&g, ENUMERATION_BOUND).expect("corpus groups are small")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders() {
        let want = [4, 6, 6, 8, 8, 12, 12, 24, 24, 36, 60, 81, 120];
        for (name, &n) in NAMES.iter().zip(&want) {
            let g = perm_group(name).unwrap();
            assert_eq!(g.order(), n as u128, "{name}");
            assert_eq!(g.closure_order(1000).unwrap(), n, "{name}");
        }
        assert_eq!(perm_group("A5wrC2").unwrap().order(), 7200);
    }
}
