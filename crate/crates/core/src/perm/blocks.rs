use super::PermGroup;
use crate::error::{Error, Result};

/// A block system as a list of blocks, each sorted, ordered by smallest point.
pub type BlockSystem = Vec<Vec<u32>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockResult {
    Primitive,
    Systems(Vec<BlockSystem>),
}

fn find(parent: &mut [u32], x: u32) -> u32 {
    let mut r = x;
    while parent[r as usize] != r {
        r = parent[r as usize];
    }
    let mut y = x;
    while parent[y as usize] != r {
        let next = parent[y as usize];
        parent[y as usize] = r;
        y = next;
    }
    r
}

/// Finest block system in which `a` and `b` share a block.
pub fn block_system_joining(g: &PermGroup, a: u32, b: u32) -> BlockSystem {
    let n = g.degree();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut queue = vec![(a, b)];
    let ra = find(&mut parent, a);
    let rb = find(&mut parent, b);
    if ra != rb {
        parent[ra.max(rb) as usize] = ra.min(rb);
    }
    while let Some((x, y)) = queue.pop() {
        for s in g.generators() {
            let (u, v) = (s.apply(x), s.apply(y));
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv) as usize] = ru.min(rv);
                queue.push((u, v));
            }
        }
    }
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n as u32 {
        let r = find(&mut parent, x) as usize;
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(x);
    }
    blocks
}

/// All minimal nontrivial block systems of a transitive group.
pub fn minimal_blocks(g: &PermGroup) -> Result<BlockResult> {
    if !g.is_transitive() {
        return Err(Error::Precondition("minimal_blocks needs a transitive group".into()));
    }
    let n = g.degree();
    let mut candidates: Vec<BlockSystem> = Vec::new();
    for beta in 1..n as u32 {
        let sys = block_system_joining(g, 0, beta);
        if sys.len() > 1 && !candidates.contains(&sys) {
            candidates.push(sys);
        }
    }
    let block0 = |s: &BlockSystem| s[0].clone();
    let minimal: Vec<BlockSystem> = candidates
        .iter()
        .filter(|s| {
            let b = block0(s);
            !candidates
                .iter()
                .any(|t| t != *s && block0(t).iter().all(|x| b.contains(x)))
        })
        .cloned()
        .collect();
    if minimal.is_empty() {
        Ok(BlockResult::Primitive)
    } else {
        Ok(BlockResult::Systems(minimal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn p(deg: usize, cycles: &[&[u32]]) -> Permutation {
        let cycles: Vec<Vec<u32>> = cycles.iter().map(|c| c.to_vec()).collect();
        Permutation::from_cycles(deg, &cycles).unwrap()
    }

    #[test]
    fn s5_is_primitive() {
        let g = PermGroup::new(5, vec![p(5, &[&[0, 1, 2, 3, 4]]), p(5, &[&[0, 1]])]).unwrap();
        assert_eq!(minimal_blocks(&g).unwrap(), BlockResult::Primitive);
    }

    #[test]
    fn c4_has_pairs() {
        let g = PermGroup::new(4, vec![p(4, &[&[0, 1, 2, 3]])]).unwrap();
        assert_eq!(
            minimal_blocks(&g).unwrap(),
            BlockResult::Systems(vec![vec![vec![0, 2], vec![1, 3]]])
        );
    }

    #[test]
    fn intransitive_is_an_error() {
        let g = PermGroup::new(4, vec![p(4, &[&[0, 1]])]).unwrap();
        assert!(minimal_blocks(&g).is_err());
    }
}
