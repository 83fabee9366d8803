//! Rooted-tree words, invertible transducers and the five preset groups.

mod portrait;
mod presets;
mod transducer;

pub use portrait::{decompose_word, portrait_depth, reduce_word};
pub use presets::{parse_generator_word, Generator, GroupPreset};
pub use transducer::{Permutation, State, Transducer, TreeWord};

use crate::error::Result;
use crate::limits;

/// Image of `word` under the tree automorphism defined by `t`.
pub fn apply_transducer(t: &Transducer, word: &TreeWord) -> Result<TreeWord> {
    t.apply(word)
}

/// The preset machine with `generator` as its initial state.
pub fn preset_transducer(preset: GroupPreset, generator: &str) -> Result<Transducer> {
    let g = preset.generator(generator)?;
    preset.machine().with_initial(g.index())
}

/// Root permutation and sections of a generator; `None` marks a trivial section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathDecomposition {
    pub root: Permutation,
    pub sections: Vec<Option<Generator>>,
}

pub fn wreath_decompose(preset: GroupPreset, generator: Generator) -> WreathDecomposition {
    let machine = preset.machine();
    let state = &machine.states()[generator.index()];
    let identity = machine.states().len() - 1;
    WreathDecomposition {
        root: state.output.clone(),
        sections: state
            .transitions
            .iter()
            .map(|&t| (t != identity).then_some(Generator(t)))
            .collect(),
    }
}

/// Permutation of the level-`n` words induced by a generator, computed word by
/// word with the transducer. Index `i` maps to `images()[i]`.
pub fn level_action(
    preset: GroupPreset,
    generator: Generator,
    level: usize,
) -> Result<Permutation> {
    let d = preset.alphabet_size();
    let dim = limits::level_dim(d, level)?;
    let t = preset.machine().with_initial(generator.index())?;
    let images = (0..dim)
        .map(|i| Ok(t.apply(&TreeWord::from_index(i, level, d))?.index(d)))
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str, d: usize) -> TreeWord {
        TreeWord::parse(s, d).unwrap()
    }

    fn act(p: GroupPreset, g: &str, w: &str) -> String {
        preset_transducer(p, g)
            .unwrap()
            .apply(&word(w, p.alphabet_size()))
            .unwrap()
            .to_string()
    }

    #[test]
    fn g_generators_on_words() {
        assert_eq!(act(GroupPreset::G, "a", "01"), "11");
        assert_eq!(act(GroupPreset::G, "b", "00"), "01");
        // b(1σ) = 1c(σ) and c fixes the word "0"
        assert_eq!(act(GroupPreset::G, "b", "10"), "10");
        assert_eq!(act(GroupPreset::G, "b", "100"), "101");
        assert_eq!(act(GroupPreset::G, "d", "00"), "00");
        assert_eq!(act(GroupPreset::G, "d", "01"), "01");
    }

    #[test]
    fn ternary_generators_on_words() {
        assert_eq!(act(GroupPreset::Gamma, "s", "210"), "210");
        assert_eq!(act(GroupPreset::Gamma, "s", "201"), "202");
        assert_eq!(act(GroupPreset::Gamma, "s", "11"), "11");
        assert_eq!(act(GroupPreset::GammaBarBar, "r", "10"), "12");
        assert_eq!(act(GroupPreset::GammaBar, "t", "10"), "11");
        assert_eq!(act(GroupPreset::Gtilde, "c", "01"), "01");
    }

    #[test]
    fn wreath_tables() {
        let g = GroupPreset::G;
        let b = wreath_decompose(g, g.generator("b").unwrap());
        assert!(b.root.is_identity());
        assert_eq!(
            b.sections,
            vec![
                Some(g.generator("a").unwrap()),
                Some(g.generator("c").unwrap())
            ]
        );
        let a = wreath_decompose(g, g.generator("a").unwrap());
        assert_eq!(a.root.images(), &[1, 0]);
        assert_eq!(a.sections, vec![None, None]);

        let gm = GroupPreset::Gamma;
        let s = wreath_decompose(gm, gm.generator("s").unwrap());
        assert_eq!(
            s.sections,
            vec![
                Some(gm.generator("a").unwrap()),
                None,
                Some(gm.generator("s").unwrap())
            ]
        );
        let gs = GroupPreset::GammaBarBar;
        let r = wreath_decompose(gs, gs.generator("r").unwrap());
        assert_eq!(
            r.sections,
            vec![
                Some(gs.generator("a").unwrap()),
                Some(gs.generator("a^-1").unwrap()),
                Some(gs.generator("r").unwrap())
            ]
        );
    }

    #[test]
    fn small_level_actions() {
        let g = GroupPreset::G;
        assert_eq!(
            level_action(g, g.generator("a").unwrap(), 1)
                .unwrap()
                .images(),
            &[1, 0]
        );
        // d = (1, b) and b acts trivially on single letters
        assert!(level_action(g, g.generator("d").unwrap(), 2)
            .unwrap()
            .is_identity());
        assert_eq!(
            level_action(g, g.generator("d").unwrap(), 3)
                .unwrap()
                .images()[4],
            5
        );
        let gm = GroupPreset::Gamma;
        assert_eq!(
            level_action(gm, gm.generator("a").unwrap(), 1)
                .unwrap()
                .images(),
            &[1, 2, 0]
        );
    }

    #[test]
    fn explicit_inverse_states_match_generic_construction() {
        for p in [
            GroupPreset::Gamma,
            GroupPreset::GammaBar,
            GroupPreset::GammaBarBar,
        ] {
            let machine = p.machine();
            let names = p.generator_names();
            // rebuild the machine from the forward generators only
            let forward: Vec<State> = machine
                .states()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != 1 && *i != 3)
                .map(|(_, s)| s.clone())
                .collect();
            let remap = |t: usize| [0usize, 0, 1, 1, 2][t];
            let mut forward = forward;
            for s in &mut forward {
                s.transitions = s.transitions.iter().map(|&t| remap(t)).collect();
            }
            // Γ̿'s r needs a^-1 as a section; the explicit machine is the reference there
            if p == GroupPreset::GammaBarBar {
                continue;
            }
            let closed = Transducer::new(3, forward, 0).unwrap().with_inverses();
            for (gi, name) in names.iter().enumerate() {
                let reference = machine.with_initial(gi).unwrap();
                let generic = closed
                    .with_initial(closed.state_index(name).unwrap())
                    .unwrap();
                for i in 0..81 {
                    let w = TreeWord::from_index(i, 4, 3);
                    assert_eq!(
                        reference.apply(&w).unwrap(),
                        generic.apply(&w).unwrap(),
                        "{p} {name}"
                    );
                }
            }
        }
    }

    #[test]
    fn parse_presets() {
        assert_eq!(
            "GammaBar".parse::<GroupPreset>().unwrap(),
            GroupPreset::GammaBar
        );
        assert_eq!("G".parse::<GroupPreset>().unwrap(), GroupPreset::G);
        assert!("delta".parse::<GroupPreset>().is_err());
        assert!(preset_transducer(GroupPreset::G, "s").is_err());
        let w = parse_generator_word(GroupPreset::Gamma, "a^-1 s S").unwrap();
        assert_eq!(
            w.iter().map(|g| g.index()).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }
}
