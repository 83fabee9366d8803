//! Portraits of group elements given as words over the preset generators.

use super::presets::{Generator, GroupPreset};
use super::transducer::Permutation;
use crate::error::{Error, Result};

/// Reduces a generator word with the relations that follow directly from the
/// wreath tables: every generator of the binary presets is an involution and
/// `{1, b, c, d}` forms a Klein group (G) or `⟨b̃, c̃, d̃⟩` is elementary abelian
/// of order 8 (G̃); in the ternary presets `x x^-1 = 1` and `x^3 = 1`.
pub fn reduce_word(preset: GroupPreset, word: &[Generator]) -> Vec<Generator> {
    match preset {
        GroupPreset::G | GroupPreset::Gtilde => reduce_binary(preset, word),
        _ => reduce_ternary(preset, word),
    }
}

fn reduce_binary(preset: GroupPreset, word: &[Generator]) -> Vec<Generator> {
    // b, c, d are encoded as bit masks; a run of them collapses to its XOR.
    let mask = |g: Generator| -> u8 {
        match (preset, g.0) {
            (_, 0) => 0,
            (GroupPreset::G, i) => i as u8, // b=1, c=2, d=3 and b^c=d
            (_, i) => 1 << (i - 1),         // b=1, c=2, d=4
        }
    };
    let unmask = |m: u8| -> Vec<Generator> {
        match preset {
            GroupPreset::G => match m {
                0 => vec![],
                m => vec![Generator(m as usize)],
            },
            _ => (0..3)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| Generator(i + 1))
                .collect(),
        }
    };
    let mut current = word.to_vec();
    loop {
        let mut out: Vec<Generator> = Vec::with_capacity(current.len());
        let mut run: u8 = 0;
        let mut in_run = false;
        for &g in &current {
            if g.0 == 0 {
                if in_run {
                    out.extend(unmask(run));
                    run = 0;
                    in_run = false;
                }
                if out.last() == Some(&g) {
                    out.pop();
                } else {
                    out.push(g);
                }
            } else {
                run ^= mask(g);
                in_run = true;
            }
        }
        if in_run {
            out.extend(unmask(run));
        }
        if out == current {
            return out;
        }
        current = out;
    }
}

fn reduce_ternary(preset: GroupPreset, word: &[Generator]) -> Vec<Generator> {
    let mut out = Vec::with_capacity(word.len());
    for &g in word {
        push_reduced(preset, &mut out, g);
    }
    out
}

fn push_reduced(preset: GroupPreset, out: &mut Vec<Generator>, g: Generator) {
    match out.last().copied() {
        Some(h) if h == preset.inverse(g) => {
            out.pop();
        }
        Some(h) if h == g => {
            // x x x = 1, so x x = x^-1
            out.pop();
            push_reduced(preset, out, preset.inverse(g));
        }
        _ => out.push(g),
    }
}

/// Root permutation and per-letter sections of a word, obtained by composing
/// the wreath decompositions of its letters. Words act on the left, so the
/// last letter is applied first and `(gh)|_i = g|_{h(i)} h|_i`.
pub fn decompose_word(
    preset: GroupPreset,
    word: &[Generator],
) -> (Permutation, Vec<Vec<Generator>>) {
    let machine = preset.machine();
    let d = preset.alphabet_size();
    let identity_state = machine.states().len() - 1;
    let mut root = Permutation::identity(d);
    let mut sections: Vec<Vec<Generator>> = vec![Vec::new(); d];
    // fold from the right: current element h, prepend letter g
    for &g in word.iter().rev() {
        let state = &machine.states()[g.0];
        for (i, section) in sections.iter_mut().enumerate() {
            let target = state.transitions[root.apply(i)];
            if target != identity_state {
                section.insert(0, Generator(target));
            }
        }
        root = state.output.compose(&root);
    }
    (root, sections)
}

/// Depth of the portrait of `word`: 0 for the identity and single generators,
/// otherwise one more than the deepest section portrait.
pub fn portrait_depth(preset: GroupPreset, word: &[Generator], max_level: usize) -> Result<usize> {
    depth_rec(preset, &reduce_word(preset, word), 0, max_level)
}

fn depth_rec(
    preset: GroupPreset,
    word: &[Generator],
    level: usize,
    max_level: usize,
) -> Result<usize> {
    if word.len() <= 1 {
        return Ok(0);
    }
    if level >= max_level {
        return Err(Error::DepthExceeded(max_level));
    }
    let (_, sections) = decompose_word(preset, word);
    let mut depth = 0;
    for s in sections {
        let s = reduce_word(preset, &s);
        depth = depth.max(depth_rec(preset, &s, level + 1, max_level)?);
    }
    Ok(depth + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree_groups::parse_generator_word;

    fn w(p: GroupPreset, s: &str) -> Vec<Generator> {
        parse_generator_word(p, s).unwrap()
    }

    #[test]
    fn binary_reductions() {
        let p = GroupPreset::G;
        assert_eq!(reduce_word(p, &w(p, "bc")), w(p, "d"));
        assert_eq!(reduce_word(p, &w(p, "abba")), vec![]);
        assert_eq!(reduce_word(p, &w(p, "abcda")), vec![]);
        let q = GroupPreset::Gtilde;
        assert_eq!(reduce_word(q, &w(q, "cbc")), w(q, "b"));
        assert_eq!(reduce_word(q, &w(q, "dcb")), w(q, "bcd"));
    }

    #[test]
    fn ternary_reductions() {
        let p = GroupPreset::Gamma;
        assert_eq!(reduce_word(p, &w(p, "aA")), vec![]);
        assert_eq!(reduce_word(p, &w(p, "aa")), w(p, "A"));
        assert_eq!(reduce_word(p, &w(p, "aaa")), vec![]);
        assert_eq!(reduce_word(p, &w(p, "saaas")), w(p, "S"));
        assert_eq!(reduce_word(p, &w(p, "sAAs")), w(p, "sas"));
    }

    #[test]
    fn identity_and_generators_have_depth_zero() {
        for p in GroupPreset::ALL {
            assert_eq!(portrait_depth(p, &[], 10).unwrap(), 0);
            for g in p.generators() {
                assert_eq!(portrait_depth(p, &[g], 10).unwrap(), 0);
            }
        }
    }

    #[test]
    fn short_words() {
        let p = GroupPreset::G;
        // ab = swap·(a, c): sections are generators
        let (root, sections) = decompose_word(p, &w(p, "ab"));
        assert!(!root.is_identity());
        assert_eq!(sections, vec![w(p, "a"), w(p, "c")]);
        assert_eq!(portrait_depth(p, &w(p, "ab"), 10).unwrap(), 1);
        let g = GroupPreset::Gamma;
        assert_eq!(portrait_depth(g, &w(g, "as"), 10).unwrap(), 1);
    }

    #[test]
    fn infinite_portrait_is_reported() {
        // b̃c̃ = (a, c̃d̃), c̃d̃ = (1, d̃b̃), d̃b̃ = (a, b̃c̃): the portrait never closes
        let p = GroupPreset::Gtilde;
        assert!(matches!(
            portrait_depth(p, &w(p, "bc"), 12),
            Err(Error::DepthExceeded(12))
        ));
    }
}
