use serde::Serialize;

use crate::error::Result;
use crate::group::{FinGroup, Subgroup};

#[derive(Clone, Debug, Serialize)]
pub struct MelInclusionReport {
    pub pairs: usize,
    /// Pairs where `K <= L M_G(K)` and `K <= L` disagree.
    pub exceptions: Vec<(Subgroup, Subgroup)>,
}

/// `K <= L M_G(K)` against `K <= L` over every pair of normal subgroups
/// with `K` nontrivial.
pub fn mel_inclusion_battery(g: &FinGroup) -> Result<MelInclusionReport> {
    let normals = g.normal_subgroups()?.to_vec();
    let mut pairs = 0;
    let mut exceptions = Vec::new();
    for k in normals.iter().filter(|k| !k.is_trivial()) {
        for l in &normals {
            pairs += 1;
            let (a, b) = g.mel_inclusion_check(k, l)?;
            if a != b {
                exceptions.push((k.clone(), l.clone()));
            }
        }
    }
    Ok(MelInclusionReport { pairs, exceptions })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiefFactorReport {
    pub factors: usize,
    /// `(K, L, reason)` for each chief factor whose narrow witness fails.
    pub failures: Vec<(Subgroup, Subgroup, String)>,
}

/// For every chief factor `K/L`, the narrow `A` satisfies `A <= K`,
/// `A` not inside `L` and `A n L = M_G(A)`.
pub fn chief_factor_battery(g: &FinGroup) -> Result<ChiefFactorReport> {
    let normals = g.normal_subgroups()?.to_vec();
    let mut factors = 0;
    let mut failures = Vec::new();
    for k in &normals {
        for l in &normals {
            if !g.is_chief_factor(k, l)? {
                continue;
            }
            factors += 1;
            let reason = match g.narrow_above_chief(k, l) {
                Err(e) => Some(e.to_string()),
                Ok(w) => {
                    let a = &w.narrow;
                    if !a.is_subset(k) {
                        Some("A not inside K".to_string())
                    } else if a.is_subset(l) {
                        Some("A inside L".to_string())
                    } else if g.intersection(a, l) != g.melnikov_rel(a)? {
                        Some("A n L differs from M_G(A)".to_string())
                    } else {
                        None
                    }
                }
            };
            if let Some(r) = reason {
                failures.push((k.clone(), l.clone(), r));
            }
        }
    }
    Ok(ChiefFactorReport { factors, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::corpus;

    #[test]
    fn s4_batteries() {
        let g = corpus::enumerate("S4").group;
        let m = mel_inclusion_battery(&g).unwrap();
        // 3 nontrivial normal subgroups times 4 normal subgroups
        assert_eq!(m.pairs, 12);
        assert!(m.exceptions.is_empty());
        let c = chief_factor_battery(&g).unwrap();
        assert_eq!(c.factors, 3);
        assert!(c.failures.is_empty());
    }
}
