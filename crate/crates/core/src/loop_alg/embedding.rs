use std::collections::BTreeSet;

use super::{loop_bracket, LoopElement, LoopError, LoopSpec};

/// Sub generator `i` at level `n` goes to host generator `targets[i].0` at level `n + targets[i].1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMap {
    pub targets: Vec<(usize, u32)>,
}

impl GeneratorMap {
    pub fn new(targets: Vec<(usize, u32)>) -> Self {
        Self { targets }
    }

    /// Builds the map from `(sub name, host name, level offset)` triples.
    pub fn by_name(sub: &LoopSpec, host: &LoopSpec, pairs: &[(&str, &str, u32)]) -> Option<Self> {
        let mut targets = vec![None; sub.len()];
        for &(s, h, off) in pairs {
            targets[sub.index_of(s)?] = Some((host.index_of(h)?, off));
        }
        targets
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .map(Self::new)
    }

    fn image(&self, x: &LoopElement) -> LoopElement {
        x.map_terms(|i, l| {
            let (j, off) = self.targets[i];
            (j, l + off)
        })
    }
}

/// Checks that `map` preserves grades and every bracket for levels up to `window`.
pub fn embedding_check(
    sub: &LoopSpec,
    host: &LoopSpec,
    map: &GeneratorMap,
    window: u32,
) -> Result<(), LoopError> {
    if map.targets.len() != sub.len() {
        return Err(LoopError::MapLength {
            expected: sub.len(),
            found: map.targets.len(),
        });
    }
    for &(j, _) in &map.targets {
        if j >= host.len() {
            return Err(LoopError::IndexOutOfRange {
                index: j,
                count: host.len(),
            });
        }
    }
    let distinct: BTreeSet<usize> = map.targets.iter().map(|&(j, _)| j).collect();
    if distinct.len() != map.targets.len() {
        return Err(LoopError::NotInjective);
    }
    for (i, &(j, off)) in map.targets.iter().enumerate() {
        let sub_grade = u64::from(sub.grade(i));
        let host_grade = u64::from(host.grade(j)) + u64::from(host.s()) * u64::from(off);
        if sub.s() != host.s() || sub_grade != host_grade {
            return Err(LoopError::GradeMismatch { sub: i });
        }
    }
    for i in 0..sub.len() {
        for j in i + 1..sub.len() {
            for li in 0..=window {
                for lj in 0..=window {
                    let x = LoopElement::basis(i, li);
                    let y = LoopElement::basis(j, lj);
                    let mapped = map.image(&loop_bracket(sub, &x, &y));
                    let direct = loop_bracket(host, &map.image(&x), &map.image(&y));
                    if mapped != direct {
                        return Err(LoopError::BracketMismatch { i, j, li, lj });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Host basis elements `(generator, level)` with level `<= window` outside the image.
pub fn embedding_complement(host: &LoopSpec, map: &GeneratorMap, window: u32) -> Vec<(usize, u32)> {
    (0..host.len())
        .flat_map(|g| (0..=window).map(move |l| (g, l)))
        .filter(|&(g, l)| {
            !map.targets
                .iter()
                .any(|&(target, off)| target == g && l >= off)
        })
        .collect()
}
